#pragma once

#include <cmath>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "liewe/almost_abelian.hpp"
#include "liewe/error.hpp"
#include "liewe/liealg.hpp"
#include "liewe/riemann.hpp"
#include "liewe/weyl.hpp"

namespace liewe {

enum class Family { Abelian, Sol, SO2R2, RIdR2, Gt };

/// Metric shapes on the basis (x, y, z):
///   Std   identity
///   Gnu   diag(1, 1, nu)
///   Gmunu diag(1, mu, nu)
///   Hmunu [[1, 1, 0], [1, mu, 0], [0, 0, nu]]
///   Mnu   [[1, 1/2, 0], [1/2, 1, 0], [0, 0, nu]]
enum class MetricShape { Std, Gnu, Gmunu, Hmunu, Mnu };

inline const char* to_string(Family f) {
  switch (f) {
    case Family::Abelian: return "abelian";
    case Family::Sol: return "sol";
    case Family::SO2R2: return "so2r2";
    case Family::RIdR2: return "ridr2";
    case Family::Gt: return "gt";
  }
  return "?";
}

inline const char* to_string(MetricShape m) {
  switch (m) {
    case MetricShape::Std: return "std";
    case MetricShape::Gnu: return "gnu";
    case MetricShape::Gmunu: return "gmunu";
    case MetricShape::Hmunu: return "hmunu";
    case MetricShape::Mnu: return "m";
  }
  return "?";
}

struct Family3D {
  Family family = Family::Abelian;
  double t = 0.0;  // Gt only; t = 0 is g_0
  MetricShape metric = MetricShape::Std;
  double mu = 1.0;
  double nu = 1.0;
};

inline MatrixXd metric_3d(MetricShape shape, double mu, double nu) {
  MatrixXd g = MatrixXd::Identity(3, 3);
  switch (shape) {
    case MetricShape::Std: break;
    case MetricShape::Gnu: g(2, 2) = nu; break;
    case MetricShape::Gmunu:
      g(1, 1) = mu;
      g(2, 2) = nu;
      break;
    case MetricShape::Hmunu:
      g(0, 1) = g(1, 0) = 1.0;
      g(1, 1) = mu;
      g(2, 2) = nu;
      break;
    case MetricShape::Mnu:
      g(0, 1) = g(1, 0) = 0.5;
      g(2, 2) = nu;
      break;
  }
  return g;
}

/// Brackets on (x, y, z) = (e1, e2, e3).
inline LieAlgebra algebra_3d(Family f, double t) {
  const int x = 0, y = 1, z = 2;
  auto vec = [](double a, double b, double c) { return VectorXd((VectorXd(3) << a, b, c).finished()); };
  std::vector<Bracket> br;
  switch (f) {
    case Family::Abelian: break;
    case Family::Sol:
      br = {{z, x, vec(1, 0, 0)}, {z, y, vec(0, -1, 0)}};
      break;
    case Family::SO2R2:
      br = {{z, x, vec(0, -1, 0)}, {z, y, vec(1, 0, 0)}};
      break;
    case Family::RIdR2:
      br = {{z, x, vec(1, 0, 0)}, {z, y, vec(0, 1, 0)}};
      break;
    case Family::Gt:
      br = {{z, x, vec(0, 1, 0)}, {z, y, vec(-t, 2, 0)}};
      break;
  }
  return LieAlgebra::from_brackets(3, br);
}

/// Rejects parameters outside the normal-form ranges.
inline void validate_family(const Family3D& f) {
  auto fail = [](const std::string& msg) { throw Error(Errc::input, msg); };
  if (!std::isfinite(f.t) || !std::isfinite(f.mu) || !std::isfinite(f.nu))
    throw Error(Errc::numeric_input, "family parameters must be finite");
  const bool uses_nu = f.metric != MetricShape::Std;
  const bool uses_mu = f.metric == MetricShape::Gmunu || f.metric == MetricShape::Hmunu;
  if (uses_nu && !(f.nu > 0.0)) fail("nu must be > 0");
  if (uses_mu && !(f.mu > 0.0)) fail("mu must be > 0");
  switch (f.family) {
    case Family::Abelian:
    case Family::Sol: break;
    case Family::RIdR2:
      if (f.metric != MetricShape::Gnu && f.metric != MetricShape::Std)
        fail("r x_Id r2 takes the g_nu metric");
      break;
    case Family::SO2R2:
      if (f.metric != MetricShape::Gmunu) fail("so(2) x r2 takes the g_{mu,nu} metric");
      if (f.mu > 1.0) fail("so(2) x r2 needs 0 < mu <= 1");
      break;
    case Family::Gt:
      if (f.t == 0.0) {
        if (f.metric != MetricShape::Gmunu && f.metric != MetricShape::Mnu)
          fail("g_0 takes the g_{mu,nu} or m_nu metric");
      } else if (f.t > 1.0) {
        if (f.metric != MetricShape::Hmunu) fail("g_t (t > 1) takes the h_{mu,nu} metric");
        if (f.mu > f.t) fail("g_t needs mu <= t");
      } else {
        fail("g_t is catalogued for t = 0 or t > 1 only");
      }
      break;
  }
  const MatrixXd g = metric_3d(f.metric, f.mu, f.nu);
  if (linalg::sym_eigenvalues(g)(0) <= 0.0) fail("metric is not positive definite");
}

inline MetricLieAlgebra make_3d(const Family3D& f) {
  validate_family(f);
  return MetricLieAlgebra(algebra_3d(f.family, f.t), metric_3d(f.metric, f.mu, f.nu));
}

enum class BuvCase { AdbForm, DirForm };

inline const char* to_string(BuvCase c) { return c == BuvCase::AdbForm ? "AdbForm" : "DirForm"; }

/// Orthonormal basis (b, u, v) with either
///   AdbForm: [b,u] = k u - l v, [b,v] = l u + k v, [u,v] = 0 (k, l >= 0), or
///   DirForm: [b,u] = alpha u, [b,v] = [u,v] = 0 (alpha > 0).
struct BuvNormalForm {
  BuvCase which = BuvCase::AdbForm;
  double k = 0.0;
  double l = 0.0;
  double alpha = 0.0;
  MatrixXd basis_change;  // columns b, u, v in the input basis
};

inline BuvNormalForm buv_normal_form(const MetricLieAlgebra& M) {
  if (M.dim() != 3) throw Error(Errc::dimension, "normal form needs a 3-dimensional algebra");
  if (!structure_flags(M.algebra()).solvable)
    throw Error(Errc::precondition, "normal form needs a solvable algebra");
  const AADecomposition D = aa_decompose(M);
  const AAClassification C = classify_we_aa(D, M);
  BuvNormalForm out;
  out.basis_change = MatrixXd(3, 3);
  VectorXd b = D.b;
  MatrixXd U = D.h_basis;
  if (C.which == AACase::EinsteinFamily) {
    double k = 0.5 * D.S.trace();
    double l = D.A(0, 1);
    if (k < 0.0 || (k == 0.0 && l < 0.0)) {
      b = -b;
      k = -k;
      l = -l;
    }
    if (l < 0.0) {
      U.col(1) = -U.col(1);
      l = -l;
    }
    out.which = BuvCase::AdbForm;
    out.k = k;
    out.l = l;
  } else if (C.which == AACase::TraceCase) {
    Eigen::SelfAdjointEigenSolver<MatrixXd> es(D.S);
    // one eigenvalue is zero, the other is alpha = Tr S
    const int ia = std::abs(es.eigenvalues()(0)) > std::abs(es.eigenvalues()(1)) ? 0 : 1;
    double alpha = es.eigenvalues()(ia);
    const VectorXd cu = linalg::first_nonzero_positive(es.eigenvectors().col(ia), 1e-12);
    const VectorXd cv = linalg::first_nonzero_positive(es.eigenvectors().col(1 - ia), 1e-12);
    const MatrixXd Unew = U * (MatrixXd(2, 2) << cu, cv).finished();
    U = Unew;
    if (alpha < 0.0) {
      b = -b;
      alpha = -alpha;
    }
    out.which = BuvCase::DirForm;
    out.alpha = alpha;
  } else {
    throw Error(Errc::classification, "no Weyl-Einstein structure, hence no normal form");
  }
  out.basis_change.col(0) = b;
  out.basis_change.rightCols(2) = U;
  return out;
}

/// Metric Lie algebra with orthonormal basis (u, v, b) realising the normal form.
inline MetricLieAlgebra rebuild_from_normal_form(const BuvNormalForm& nf) {
  MatrixXd A = MatrixXd::Zero(2, 2), S = MatrixXd::Zero(2, 2);
  if (nf.which == BuvCase::AdbForm) {
    S = nf.k * MatrixXd::Identity(2, 2);
    A(0, 1) = nf.l;
    A(1, 0) = -nf.l;
  } else {
    S(0, 0) = nf.alpha;
  }
  return build_semidirect(A, S, MatrixXd::Identity(2, 2));
}

/// Membership in the list of 3-dimensional solvable metric Lie algebras
/// carrying a Weyl-Einstein structure.
inline bool cl3_table(const Family3D& f) {
  constexpr double tol = 1e-12;
  switch (f.family) {
    case Family::Abelian: return true;
    case Family::RIdR2: return true;
    case Family::SO2R2: return std::abs(f.mu - 1.0) <= tol;
    case Family::Gt:
      if (f.t == 0.0) return f.metric == MetricShape::Mnu;
      return std::abs(f.mu - f.t) <= tol * std::max(1.0, f.t);
    case Family::Sol: return false;
  }
  return false;
}

struct Cl3Verdict {
  bool admits = false;
  bool by_table = false;
  bool by_solver = false;
  std::vector<LeeForm> lee_forms;
};

inline Cl3Verdict cl3_admits_we(const Family3D& f, const SolveOptions& opt = {}) {
  const MetricLieAlgebra M = make_3d(f);
  Cl3Verdict v;
  v.by_table = cl3_table(f);
  const WESolution sol = we_solve(M, opt);
  v.by_solver = !sol.roots.empty();
  v.lee_forms = sol.roots;
  if (v.by_table != v.by_solver)
    throw Error(Errc::consistency, std::string("table says ") + (v.by_table ? "admits" : "no") +
                                       " but the solver says " + (v.by_solver ? "admits" : "no") +
                                       " for family " + to_string(f.family));
  v.admits = v.by_table;
  return v;
}

}  // namespace liewe
