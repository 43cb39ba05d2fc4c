#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "liewe/error.hpp"
#include "liewe/liealg.hpp"
#include "liewe/linalg.hpp"
#include "liewe/riemann.hpp"
#include "liewe/weyl.hpp"

namespace liewe {

/// g = R b (+) h with h a codimension-1 abelian ideal, b a g-unit normal of h.
struct AADecomposition {
  MatrixXd h_basis;  // n x (n-1), g-orthonormal columns spanning h
  VectorXd b;        // unit normal, first nonzero coefficient positive
  MatrixXd A;        // skew part of ad_b|h in h_basis
  MatrixXd S;        // symmetric part of ad_b|h in h_basis
  bool unique_ideal = false;

  int dim() const { return static_cast<int>(b.size()); }
  /// ad_b restricted to h, in h_basis.
  MatrixXd ad_b() const { return A + S; }
};

namespace detail {

struct IdealCandidates {
  MatrixXd covectors;  // columns span the admissible normal covectors phi (h = ker phi)
  bool abelian = false;
};

/// Covectors phi whose kernel is a codimension-1 abelian ideal. Every such
/// kernel contains [g, g], and every nonzero bracket form c^k restricted to it
/// vanishes, so phi lies in the row space of each c^k.
inline IdealCandidates ideal_candidates(const LieAlgebra& L) {
  const int n = L.dim();
  const MatrixXd D = derived_algebra(L);
  IdealCandidates out;
  if (D.cols() == 0) {
    out.abelian = true;
    out.covectors = MatrixXd::Identity(n, n);
    return out;
  }
  std::vector<MatrixXd> blocks;
  blocks.push_back(D.transpose());
  const double cut = kTauAlg * L.scale();
  for (int k = 0; k < n; ++k) {
    const MatrixXd Ck = L.constants().slice(k);
    if (Ck.cwiseAbs().maxCoeff() <= cut) continue;
    const MatrixXd R = linalg::span_basis_abs(Ck.transpose(), cut);
    if (R.cols() > 2) return out;  // c^k is not decomposable: no such ideal
    blocks.push_back(MatrixXd::Identity(n, n) - R * R.transpose());
  }
  Eigen::Index rows = 0;
  for (const auto& b : blocks) rows += b.rows();
  MatrixXd stacked(rows, n);
  rows = 0;
  for (const auto& b : blocks) {
    stacked.middleRows(rows, b.rows()) = b;
    rows += b.rows();
  }
  out.covectors = linalg::null_space(stacked, kTauAlg);
  return out;
}

/// Largest |phi([x, y])| and |[u, v]| violations for h = ker phi.
inline bool is_abelian_ideal(const LieAlgebra& L, const MatrixXd& h) {
  const double tol = kTauAlg * L.scale() * L.scale() * (1.0 + h.cwiseAbs().maxCoeff());
  for (Eigen::Index a = 0; a < h.cols(); ++a)
    for (Eigen::Index c = a + 1; c < h.cols(); ++c)
      if (L.bracket(h.col(a), h.col(c)).cwiseAbs().maxCoeff() > tol) return false;
  // ideal: [e_i, h] stays in span(h)
  const MatrixXd Q = linalg::span_basis(h, kTauAlg);
  const MatrixXd proj = MatrixXd::Identity(L.dim(), L.dim()) - Q * Q.transpose();
  for (int i = 0; i < L.dim(); ++i)
    for (Eigen::Index a = 0; a < h.cols(); ++a)
      if ((proj * L.bracket(VectorXd::Unit(L.dim(), i), h.col(a))).cwiseAbs().maxCoeff() > tol)
        return false;
  return true;
}

inline AADecomposition decompose_along(const MetricLieAlgebra& M, const VectorXd& phi,
                                       const MatrixXd& h_candidates, bool unique) {
  const int n = M.dim();
  AADecomposition D;
  VectorXd b = M.raise(phi);
  b /= std::sqrt(b.dot(M.metric() * b));
  D.b = linalg::first_nonzero_positive(b, 1e-12);
  MatrixXd projected(n, h_candidates.cols());
  for (Eigen::Index i = 0; i < h_candidates.cols(); ++i) {
    const VectorXd v = h_candidates.col(i);
    projected.col(i) = v - D.b.dot(M.metric() * v) * D.b;
  }
  D.h_basis = linalg::gram_schmidt(projected, M.metric(), n - 1);
  if (D.h_basis.cols() != n - 1)
    throw Error(Errc::not_almost_abelian, "could not build a basis of the ideal");
  const MatrixXd adb = M.ad(D.b);
  const MatrixXd restricted = D.h_basis.transpose() * M.metric() * adb * D.h_basis;
  D.A = linalg::skew(restricted);
  D.S = linalg::sym(restricted);
  D.unique_ideal = unique;
  return D;
}

}  // namespace detail

/// Finds a codimension-1 abelian ideal and splits ad_b|h into A + S.
/// `hint` (n x (n-1), columns spanning h) overrides the search.
inline AADecomposition aa_decompose(const MetricLieAlgebra& M,
                                    const std::optional<MatrixXd>& hint = std::nullopt) {
  const int n = M.dim();
  if (n < 3) throw Error(Errc::dimension, "almost abelian decomposition needs n >= 3");
  const LieAlgebra& L = M.algebra();
  const auto cand = detail::ideal_candidates(L);
  const int ncand = static_cast<int>(cand.covectors.cols());
  const bool unique = !cand.abelian && ncand == 1;

  if (hint) {
    const MatrixXd& h = *hint;
    if (h.rows() != n || h.cols() != n - 1 || !h.allFinite() ||
        linalg::numeric_rank(h, kTauAlg) != n - 1)
      throw Error(Errc::hint, "ideal hint must be n-1 independent vectors of length n");
    if (!detail::is_abelian_ideal(L, h))
      throw Error(Errc::hint, "ideal hint does not span an abelian ideal");
    const MatrixXd phi = linalg::null_space(h.transpose(), kTauAlg);
    return detail::decompose_along(M, phi.col(0), h, unique);
  }

  const MatrixXd I = MatrixXd::Identity(n, n);
  if (cand.abelian) {
    // h = span(e_2, ..., e_n)
    const MatrixXd h = I.rightCols(n - 1);
    const MatrixXd phi = linalg::null_space(h.transpose(), kTauAlg);
    return detail::decompose_along(M, phi.col(0), h, false);
  }
  if (ncand == 0) throw Error(Errc::not_almost_abelian, "no codimension-1 abelian ideal");
  // Canonical choice inside the candidate space: last row of its reduced echelon form.
  const MatrixXd echelon = linalg::rref(cand.covectors.transpose(), 1e-10);
  const VectorXd phi = echelon.row(echelon.rows() - 1).transpose();
  const MatrixXd h = linalg::null_space(phi.transpose(), kTauAlg);
  if (!detail::is_abelian_ideal(L, h))
    throw Error(Errc::not_almost_abelian, "no codimension-1 abelian ideal");
  return detail::decompose_along(M, phi, I, unique);
}

enum class AACase { EinsteinFamily, TraceCase, NoWE };

inline const char* to_string(AACase c) {
  switch (c) {
    case AACase::EinsteinFamily: return "EinsteinFamily";
    case AACase::TraceCase: return "TraceCase";
    case AACase::NoWE: return "NoWE";
  }
  return "?";
}

struct AAClassification {
  AACase which = AACase::NoWE;
  double k_or_mu = 0.0;
  std::vector<LeeForm> lee_forms;  // lexicographic by coefficients
};

/// Exact Weyl-Einstein classification on an almost abelian metric Lie algebra:
///  (1) S = k Id: theta in {0, k b};
///  (2) S != 0, (Tr S)^2 = (n-2) Tr S^2, [A, S] = 0: theta = Tr S / (n-2) b;
///  otherwise no left-invariant Weyl-Einstein structure.
inline AAClassification classify_we_aa(const AADecomposition& D, const MetricLieAlgebra& M) {
  const int n = M.dim();
  const int m = n - 1;
  const double tau = M.tau_num();
  const double trS = D.S.trace();
  const double scale = 1.0 + D.S.squaredNorm();
  const VectorXd bflat = M.lower(D.b);
  AAClassification out;

  const MatrixXd S0 = D.S - (trS / m) * MatrixXd::Identity(m, m);
  if (S0.norm() <= tau) {
    out.which = AACase::EinsteinFamily;
    out.k_or_mu = trS / m;
    out.lee_forms.push_back(LeeForm{VectorXd::Zero(n)});
    if (std::abs(out.k_or_mu) > tau) out.lee_forms.push_back(LeeForm{out.k_or_mu * bflat});
  } else if (D.S.norm() > tau &&
             std::abs(trS * trS - (n - 2.0) * (D.S * D.S).trace()) <= tau * scale &&
             linalg::commutator(D.A, D.S).norm() <= tau * scale) {
    out.which = AACase::TraceCase;
    out.k_or_mu = trS / (n - 2.0);
    out.lee_forms.push_back(LeeForm{out.k_or_mu * bflat});
  }
  std::sort(out.lee_forms.begin(), out.lee_forms.end(), [](const LeeForm& a, const LeeForm& b) {
    return std::lexicographical_compare(a.theta.begin(), a.theta.end(), b.theta.begin(),
                                        b.theta.end());
  });
  return out;
}

/// R b |x h with ad_b|h = A + S, basis (h_1, ..., h_{n-1}, b), metric g0 (+) 1.
inline MetricLieAlgebra build_semidirect(const MatrixXd& A, const MatrixXd& S, const MatrixXd& g0) {
  const auto m = A.rows();
  if (A.cols() != m || S.rows() != m || S.cols() != m || g0.rows() != m || g0.cols() != m)
    throw Error(Errc::structural, "A, S and g0 must be square of equal size");
  if (m < 1) throw Error(Errc::structural, "ideal must have dimension >= 1");
  const double scale = std::max({1.0, A.cwiseAbs().maxCoeff(), S.cwiseAbs().maxCoeff()}) *
                       std::max(1.0, g0.cwiseAbs().maxCoeff());
  if ((g0 * A + (g0 * A).transpose()).cwiseAbs().maxCoeff() > kTauAlg * scale)
    throw Error(Errc::input, "A is not skew-symmetric with respect to g0");
  if ((g0 * S - (g0 * S).transpose()).cwiseAbs().maxCoeff() > kTauAlg * scale)
    throw Error(Errc::input, "S is not symmetric with respect to g0");
  const int n = static_cast<int>(m) + 1;
  const MatrixXd adb = A + S;
  Tensor3 c(n);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) {
      c(i, n - 1, j) = adb(i, j);
      c(i, j, n - 1) = -adb(i, j);
    }
  MatrixXd g = MatrixXd::Zero(n, n);
  g.topLeftCorner(m, m) = g0;
  g(n - 1, n - 1) = 1.0;
  return MetricLieAlgebra(LieAlgebra(std::move(c)), std::move(g));
}

struct ExampleS0 {
  MetricLieAlgebra algebra;
  LeeForm predicted;
};

/// Non-Einstein almost abelian example: S = a sqrt((n-2)/(n-1)) Id + S0 with
/// S0 trace-free, Tr S0^2 = a^2; the Weyl-Einstein Lee form is
/// a sqrt((n-1)/(n-2)) b.
inline ExampleS0 example_S0(int n, const MatrixXd& S0, double a) {
  if (n < 3) throw Error(Errc::dimension, "example needs n >= 3");
  const int m = n - 1;
  if (S0.rows() != m || S0.cols() != m) throw Error(Errc::structural, "S0 must be (n-1) x (n-1)");
  const double smax = std::max({1.0, S0.cwiseAbs().maxCoeff(), std::abs(a)});
  const double tau = 1e-9 * (1.0 + smax);
  if (S0.norm() <= tau) throw Error(Errc::input, "S0 must be non-trivial");
  if ((S0 - S0.transpose()).cwiseAbs().maxCoeff() > kTauAlg * smax)
    throw Error(Errc::input, "S0 must be symmetric");
  if (std::abs(S0.trace()) > kTauAlg * smax * m) throw Error(Errc::input, "S0 must be trace-free");
  if (a == 0.0 || std::abs(a * a - (S0 * S0).trace()) > tau * smax)
    throw Error(Errc::input, "a must be nonzero with a^2 = Tr(S0^2)");
  const MatrixXd S = a * std::sqrt((n - 2.0) / (n - 1.0)) * MatrixXd::Identity(m, m) + S0;
  ExampleS0 ex{build_semidirect(MatrixXd::Zero(m, m), S, MatrixXd::Identity(m, m)),
               LeeForm{VectorXd::Zero(n)}};
  ex.predicted.theta(n - 1) = a * std::sqrt((n - 1.0) / (n - 2.0));
  return ex;
}

/// Curvature, Ricci and scalar curvature of an almost abelian metric Lie
/// algebra from A and S alone, returned in the natural basis of M.
inline CurvatureData closed_form_curvature(const AADecomposition& D, const MetricLieAlgebra& M) {
  const int n = M.dim();
  const int m = n - 1;
  const MatrixXd& S = D.S;
  const MatrixXd C = linalg::commutator(D.A, S);
  const MatrixXd S2 = S * S;

  // Frame index 0 is b, 1..m are the h_basis vectors.
  Tensor4 Rf(n);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j)
      for (int k = 0; k < m; ++k)
        for (int l = 0; l < m; ++l)
          Rf(l + 1, i + 1, j + 1, k + 1) = S(j, k) * S(l, i) - S(i, k) * S(l, j);
  for (int j = 0; j < m; ++j)
    for (int k = 0; k < m; ++k) {
      // R(b, u_j) u_k = g((S^2 - [A,S]) u_j, u_k) b
      Rf(0, 0, j + 1, k + 1) = S2(k, j) - C(k, j);
      Rf(0, j + 1, 0, k + 1) = -(S2(k, j) - C(k, j));
    }
  for (int j = 0; j < m; ++j)
    for (int l = 0; l < m; ++l) {
      // R(b, u_j) b = ([A,S] - S^2) u_j
      Rf(l + 1, 0, j + 1, 0) = C(l, j) - S2(l, j);
      Rf(l + 1, j + 1, 0, 0) = -(C(l, j) - S2(l, j));
    }

  MatrixXd E(n, n);
  E.col(0) = D.b;
  E.rightCols(m) = D.h_basis;
  const MatrixXd P = E.inverse();

  // Contract covariant slots with P and the contravariant slot with E.
  Tensor4 tmp(n);
  for (int l = 0; l < n; ++l)
    for (int a = 0; a < n; ++a)
      for (int c = 0; c < n; ++c)
        for (int d = 0; d < n; ++d) {
          double s = 0.0;
          for (int p = 0; p < n; ++p) s += E(l, p) * Rf(p, a, c, d);
          tmp(l, a, c, d) = s;
        }
  CurvatureData out{Tensor4(n), MatrixXd::Zero(n, n), 0.0};
  {
    Tensor4 t1(n), t2(n);
    for (int l = 0; l < n; ++l)
      for (int i = 0; i < n; ++i)
        for (int c = 0; c < n; ++c)
          for (int d = 0; d < n; ++d) {
            double s = 0.0;
            for (int a = 0; a < n; ++a) s += tmp(l, a, c, d) * P(a, i);
            t1(l, i, c, d) = s;
          }
    for (int l = 0; l < n; ++l)
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
          for (int d = 0; d < n; ++d) {
            double s = 0.0;
            for (int c = 0; c < n; ++c) s += t1(l, i, c, d) * P(c, j);
            t2(l, i, j, d) = s;
          }
    for (int l = 0; l < n; ++l)
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
          for (int k = 0; k < n; ++k) {
            double s = 0.0;
            for (int d = 0; d < n; ++d) s += t2(l, i, j, d) * P(d, k);
            out.riem(l, i, j, k) = s;
          }
  }

  // Ric = -Tr(S^2) b x b + [A,S] - Tr S . S
  MatrixXd ric_f = MatrixXd::Zero(n, n);
  ric_f(0, 0) = -S2.trace();
  ric_f.bottomRightCorner(m, m) = C - S.trace() * S;
  out.ricci = P.transpose() * ric_f * P;
  out.scalar = -S2.trace() - S.trace() * S.trace();
  return out;
}

struct RffVerdict {
  bool ricci_flat = false;
  bool flat = false;
};

/// Ricci-flatness / flatness of e^{2f} g for a nonzero Weyl-Einstein Lee form,
/// decided from the eigenvalues of S: flat iff S = k Id, or S = alpha Id on a
/// hyperplane U of h (alpha != 0) and S = 0 on its orthogonal line.
inline RffVerdict rff_classify(const AADecomposition& D, const MetricLieAlgebra& M,
                               const LeeForm& lee) {
  if (lee.theta.norm() <= M.tau_num())
    throw Error(Errc::precondition, "flatness criterion assumes a nonzero Lee form");
  RffVerdict out;
  out.ricci_flat = true;
  const VectorXd ev = linalg::sym_eigenvalues(D.S);
  const int m = static_cast<int>(ev.size());
  const double tol = 1e-7 * std::max(1.0, ev.cwiseAbs().maxCoeff());

  struct Cluster {
    double value;
    int mult;
  };
  std::vector<Cluster> clusters;
  for (int i = 0; i < m; ++i) {
    if (!clusters.empty() && std::abs(ev(i) - ev(i - 1)) <= tol) {
      auto& c = clusters.back();
      c.value = (c.value * c.mult + ev(i)) / (c.mult + 1);
      ++c.mult;
    } else {
      clusters.push_back({ev(i), 1});
    }
  }
  if (clusters.size() == 1) {
    out.flat = true;
  } else if (clusters.size() == 2) {
    for (int z = 0; z < 2; ++z) {
      const Cluster& zero = clusters[z];
      const Cluster& other = clusters[1 - z];
      if (std::abs(zero.value) <= tol && zero.mult == 1 && std::abs(other.value) > tol &&
          other.mult == m - 1)
        out.flat = true;
    }
  }
  return out;
}

}  // namespace liewe
