#pragma once

#include <algorithm>
#include <cmath>
#include <initializer_list>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "liewe/error.hpp"
#include "liewe/linalg.hpp"
#include "liewe/tensor.hpp"

namespace liewe {

using Eigen::MatrixXd;
using Eigen::VectorXd;

/// Relative tolerance for structural (purely algebraic) questions.
inline constexpr double kTauAlg = 1e-9;

/// One bracket relation [e_i, e_j] = sum_k coeffs(k) e_k, 0-based indices.
struct Bracket {
  int i;
  int j;
  VectorXd coeffs;
};

/// Real Lie algebra given by structure constants c(k, i, j), meaning
/// [e_i, e_j] = sum_k c(k, i, j) e_k. Construction checks shape and finiteness
/// only; antisymmetry and Jacobi are reported by validate_algebra().
class LieAlgebra {
 public:
  LieAlgebra() = default;

  explicit LieAlgebra(Tensor3 constants) : c_(std::move(constants)) {
    if (c_.dim() < 1) throw Error(Errc::structural, "Lie algebra dimension must be >= 1");
    for (double v : c_.data())
      if (!std::isfinite(v))
        throw Error(Errc::numeric_input, "structure constants contain NaN or Inf");
  }

  static LieAlgebra abelian(int n) { return LieAlgebra(Tensor3(n)); }

  /// Builds from bracket relations; [e_j, e_i] is filled in by antisymmetry.
  static LieAlgebra from_brackets(int n, const std::vector<Bracket>& brackets) {
    if (n < 1) throw Error(Errc::structural, "Lie algebra dimension must be >= 1");
    Tensor3 c(n);
    for (const auto& b : brackets) {
      if (b.i < 0 || b.j < 0 || b.i >= n || b.j >= n || b.coeffs.size() != n)
        throw Error(Errc::structural, "bracket index or coefficient length out of range");
      if (b.i == b.j) throw Error(Errc::structural, "self-bracket not allowed");
      for (int k = 0; k < n; ++k) {
        c(k, b.i, b.j) = b.coeffs(k);
        c(k, b.j, b.i) = -b.coeffs(k);
      }
    }
    return LieAlgebra(std::move(c));
  }

  int dim() const noexcept { return c_.dim(); }
  double c(int k, int i, int j) const { return c_(k, i, j); }
  const Tensor3& constants() const noexcept { return c_; }

  /// Largest absolute structure constant.
  double max_abs() const { return c_.max_abs(); }

  /// Scale used for tolerances: max(1, max |c|).
  double scale() const { return std::max(1.0, max_abs()); }

  VectorXd bracket(const VectorXd& x, const VectorXd& y) const {
    check_length(x);
    check_length(y);
    const int n = dim();
    VectorXd out = VectorXd::Zero(n);
    for (int k = 0; k < n; ++k)
      for (int i = 0; i < n; ++i) {
        if (x(i) == 0.0) continue;
        for (int j = 0; j < n; ++j) out(k) += c_(k, i, j) * x(i) * y(j);
      }
    return out;
  }

  /// Bracket of basis vectors as a coefficient vector.
  VectorXd bracket_basis(int i, int j) const {
    VectorXd out(dim());
    for (int k = 0; k < dim(); ++k) out(k) = c_(k, i, j);
    return out;
  }

  void check_length(const VectorXd& x) const {
    if (x.size() != dim())
      throw Error(Errc::structural, "vector length " + std::to_string(x.size()) +
                                        " does not match algebra dimension " +
                                        std::to_string(dim()));
  }

  friend bool operator==(const LieAlgebra&, const LieAlgebra&) = default;

 private:
  Tensor3 c_;
};

/// Matrix of ad_x: column j holds the coefficients of [x, e_j].
inline MatrixXd ad_matrix(const LieAlgebra& L, const VectorXd& x) {
  L.check_length(x);
  const int n = L.dim();
  MatrixXd m = MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    if (x(i) == 0.0) continue;
    for (int k = 0; k < n; ++k)
      for (int j = 0; j < n; ++j) m(k, j) += x(i) * L.c(k, i, j);
  }
  return m;
}

inline MatrixXd ad_basis(const LieAlgebra& L, int i) {
  return ad_matrix(L, VectorXd::Unit(L.dim(), i));
}

struct Violation {
  enum class Kind { antisymmetry, jacobi } kind;
  int i, j, k;         // 0-based; for antisymmetry k is the output index
  VectorXd residual;   // Jacobi: cyclic sum vector; antisymmetry: c(k,i,j)+c(k,j,i)
  double magnitude;
};

struct ValidityReport {
  std::vector<Violation> violations;
  bool ok() const noexcept { return violations.empty(); }
};

/// Checks antisymmetry and the Jacobi identity on all basis triples i<j<k.
inline ValidityReport validate_algebra(const LieAlgebra& L) {
  ValidityReport rep;
  const int n = L.dim();
  const double s = L.scale();
  const double tol_lin = kTauAlg * s;
  const double tol_quad = kTauAlg * s * s;

  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) {
      VectorXd r(n);
      for (int k = 0; k < n; ++k) r(k) = L.c(k, i, j) + L.c(k, j, i);
      const double mag = r.norm();
      if (mag > tol_lin) rep.violations.push_back({Violation::Kind::antisymmetry, i, j, -1, r, mag});
    }

  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      for (int k = j + 1; k < n; ++k) {
        const VectorXd ei = VectorXd::Unit(n, i), ej = VectorXd::Unit(n, j),
                       ek = VectorXd::Unit(n, k);
        VectorXd r = L.bracket(L.bracket_basis(i, j), ek) + L.bracket(L.bracket_basis(j, k), ei) +
                     L.bracket(L.bracket_basis(k, i), ej);
        const double mag = r.norm();
        if (mag > tol_quad) rep.violations.push_back({Violation::Kind::jacobi, i, j, k, r, mag});
      }
  return rep;
}

/// Span of all brackets [u, v] with u in span(U), v in span(V); orthonormal columns.
/// U and V have orthonormal columns, so brackets are measured against the
/// largest structure constant rather than against each other.
inline MatrixXd bracket_span(const LieAlgebra& L, const MatrixXd& U, const MatrixXd& V) {
  MatrixXd cols(L.dim(), U.cols() * V.cols());
  Eigen::Index c = 0;
  for (Eigen::Index a = 0; a < U.cols(); ++a)
    for (Eigen::Index b = 0; b < V.cols(); ++b) cols.col(c++) = L.bracket(U.col(a), V.col(b));
  return linalg::span_basis_abs(cols, kTauAlg * L.scale());
}

/// Orthonormal basis of the derived algebra [g, g].
inline MatrixXd derived_algebra(const LieAlgebra& L) {
  const MatrixXd I = MatrixXd::Identity(L.dim(), L.dim());
  return bracket_span(L, I, I);
}

struct StructureFlags {
  bool solvable = false;
  bool nilpotent = false;
  bool abelian = false;
  bool unimodular = false;
  int derived_dim = 0;
  int center_dim = 0;

  friend bool operator==(const StructureFlags&, const StructureFlags&) = default;
};

/// Dimensions of the derived series g, g', g'', ... until it repeats.
inline std::vector<int> derived_series_dims(const LieAlgebra& L) {
  MatrixXd cur = MatrixXd::Identity(L.dim(), L.dim());
  std::vector<int> dims{static_cast<int>(cur.cols())};
  while (true) {
    MatrixXd next = bracket_span(L, cur, cur);
    if (next.cols() >= cur.cols()) break;
    dims.push_back(static_cast<int>(next.cols()));
    if (next.cols() == 0) break;
    cur = std::move(next);
  }
  return dims;
}

/// Dimensions of the lower central series g, [g,g], [g,[g,g]], ... until it repeats.
inline std::vector<int> lower_central_series_dims(const LieAlgebra& L) {
  const MatrixXd I = MatrixXd::Identity(L.dim(), L.dim());
  MatrixXd cur = I;
  std::vector<int> dims{static_cast<int>(cur.cols())};
  while (true) {
    MatrixXd next = bracket_span(L, I, cur);
    if (next.cols() >= cur.cols()) break;
    dims.push_back(static_cast<int>(next.cols()));
    if (next.cols() == 0) break;
    cur = std::move(next);
  }
  return dims;
}

inline int center_dim(const LieAlgebra& L) {
  const int n = L.dim();
  // x lies in the center iff sum_i x_i c(k, i, j) = 0 for all k, j.
  MatrixXd m(n * n, n);
  for (int k = 0; k < n; ++k)
    for (int j = 0; j < n; ++j)
      for (int i = 0; i < n; ++i) m(k * n + j, i) = L.c(k, i, j);
  return n - linalg::numeric_rank(m, kTauAlg);
}

inline StructureFlags structure_flags(const LieAlgebra& L) {
  StructureFlags f;
  const auto ds = derived_series_dims(L);
  const auto lcs = lower_central_series_dims(L);
  f.derived_dim = ds.size() > 1 ? ds[1] : ds[0];
  f.abelian = f.derived_dim == 0;
  f.solvable = ds.back() == 0;
  f.nilpotent = lcs.back() == 0;
  f.center_dim = center_dim(L);
  f.unimodular = true;
  const double tol = kTauAlg * L.scale();
  for (int i = 0; i < L.dim(); ++i)
    if (std::abs(ad_basis(L, i).trace()) > tol) f.unimodular = false;
  return f;
}

/// Rewrites the algebra in the basis whose vectors are the columns of P
/// (f_a = sum_i P(i, a) e_i).
inline LieAlgebra change_basis(const LieAlgebra& L, const MatrixXd& P) {
  const int n = L.dim();
  if (P.rows() != n || P.cols() != n) throw Error(Errc::structural, "basis change must be n x n");
  Eigen::FullPivLU<MatrixXd> lu(P);
  if (!lu.isInvertible()) throw Error(Errc::structural, "basis change is singular");
  const MatrixXd Pinv = lu.inverse();
  Tensor3 c(n);
  for (int a = 0; a < n; ++a)
    for (int b = a + 1; b < n; ++b) {
      const VectorXd v = Pinv * L.bracket(P.col(a), P.col(b));
      for (int k = 0; k < n; ++k) {
        c(k, a, b) = v(k);
        c(k, b, a) = -v(k);
      }
    }
  return LieAlgebra(std::move(c));
}

}  // namespace liewe
