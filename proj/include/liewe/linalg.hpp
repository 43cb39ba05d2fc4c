#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include <Eigen/Dense>

namespace liewe::linalg {

using Eigen::MatrixXd;
using Eigen::VectorXd;

inline MatrixXd sym(const MatrixXd& m) { return 0.5 * (m + m.transpose()); }
inline MatrixXd skew(const MatrixXd& m) { return 0.5 * (m - m.transpose()); }

inline MatrixXd commutator(const MatrixXd& a, const MatrixXd& b) { return a * b - b * a; }

/// Number of singular values above rel_tol times the largest one.
inline int numeric_rank(const MatrixXd& m, double rel_tol) {
  if (m.size() == 0) return 0;
  Eigen::JacobiSVD<MatrixXd> svd(m);
  const auto& s = svd.singularValues();
  if (s.size() == 0 || s(0) == 0.0) return 0;
  const double cut = rel_tol * s(0);
  int r = 0;
  for (Eigen::Index i = 0; i < s.size(); ++i)
    if (s(i) > cut) ++r;
  return r;
}

/// Orthonormal (Euclidean) basis of the column span, as columns. Singular
/// values at or below `cut` count as zero.
inline MatrixXd span_basis_abs(const MatrixXd& cols, double cut) {
  if (cols.cols() == 0) return MatrixXd(cols.rows(), 0);
  Eigen::JacobiSVD<MatrixXd> svd(cols, Eigen::ComputeFullU);
  const auto& s = svd.singularValues();
  int r = 0;
  for (Eigen::Index i = 0; i < s.size(); ++i)
    if (s(i) > cut) ++r;
  return svd.matrixU().leftCols(r);
}

/// As span_basis_abs with the cutoff relative to the largest singular value.
inline MatrixXd span_basis(const MatrixXd& cols, double rel_tol) {
  if (cols.cols() == 0) return MatrixXd(cols.rows(), 0);
  const double top = Eigen::JacobiSVD<MatrixXd>(cols).singularValues()(0);
  return span_basis_abs(cols, top > 0.0 ? rel_tol * top : 0.0);
}

/// Basis of the kernel of m, as columns.
inline MatrixXd null_space(const MatrixXd& m, double rel_tol) {
  const auto n = m.cols();
  if (m.rows() == 0) return MatrixXd::Identity(n, n);
  Eigen::JacobiSVD<MatrixXd> svd(m, Eigen::ComputeFullV);
  const auto& s = svd.singularValues();
  int r = 0;
  if (s.size() > 0 && s(0) > 0.0)
    for (Eigen::Index i = 0; i < s.size(); ++i)
      if (s(i) > rel_tol * s(0)) ++r;
  return svd.matrixV().rightCols(n - r);
}

/// Reduced row echelon form of the row space of `rows` (pivot entries 1).
/// Canonical for the subspace, so it yields basis-independent choices.
inline MatrixXd rref(MatrixXd rows, double abs_tol) {
  const auto m = rows.rows(), n = rows.cols();
  Eigen::Index r = 0;
  for (Eigen::Index c = 0; c < n && r < m; ++c) {
    Eigen::Index piv;
    const double best = rows.col(c).tail(m - r).cwiseAbs().maxCoeff(&piv);
    if (best <= abs_tol) continue;
    piv += r;
    rows.row(r).swap(rows.row(piv));
    rows.row(r) /= rows(r, c);
    for (Eigen::Index i = 0; i < m; ++i)
      if (i != r) rows.row(i) -= rows(i, c) * rows.row(r);
    ++r;
  }
  MatrixXd out = rows.topRows(r);
  out = (out.array().abs() <= abs_tol).select(0.0, out);
  return out;
}

/// Gram-Schmidt of the candidate columns with respect to the inner product
/// `gram`, skipping columns that are dependent on the ones already kept.
/// Stops after `want` vectors.
inline MatrixXd gram_schmidt(const MatrixXd& candidates, const MatrixXd& gram, int want,
                             double rel_tol = 1e-8) {
  MatrixXd out(candidates.rows(), want);
  int kept = 0;
  for (Eigen::Index j = 0; j < candidates.cols() && kept < want; ++j) {
    VectorXd v = candidates.col(j);
    const double orig = std::sqrt(std::max(0.0, v.dot(gram * v)));
    if (orig == 0.0) continue;
    for (int pass = 0; pass < 2; ++pass)
      for (int i = 0; i < kept; ++i) v -= out.col(i).dot(gram * v) * out.col(i);
    const double nv = std::sqrt(std::max(0.0, v.dot(gram * v)));
    if (nv <= rel_tol * orig) continue;
    out.col(kept++) = v / nv;
  }
  return out.leftCols(kept);
}

/// Sign normalisation: the first entry whose magnitude exceeds tol is made positive.
inline VectorXd first_nonzero_positive(VectorXd v, double tol) {
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (std::abs(v(i)) > tol) {
      if (v(i) < 0) v = -v;
      break;
    }
  }
  return v;
}

/// Symmetric eigenvalues sorted ascending.
inline VectorXd sym_eigenvalues(const MatrixXd& m) {
  if (m.rows() == 0) return VectorXd(0);
  Eigen::SelfAdjointEigenSolver<MatrixXd> es(sym(m), Eigen::EigenvaluesOnly);
  return es.eigenvalues();
}

}  // namespace liewe::linalg
