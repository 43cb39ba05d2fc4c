#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "liewe/error.hpp"
#include "liewe/liealg.hpp"
#include "liewe/linalg.hpp"
#include "liewe/riemann.hpp"
#include "liewe/tensor.hpp"

namespace liewe {

/// A left-invariant 1-form, stored by its coefficients in the dual basis.
struct LeeForm {
  VectorXd theta;

  /// Metric dual vector T with theta(x) = g(T, x).
  VectorXd dual(const MetricLieAlgebra& M) const { return M.raise(theta); }
  double norm2(const MetricLieAlgebra& M) const { return theta.dot(M.raise(theta)); }
};

struct WeylStructure {
  MetricLieAlgebra base;
  LeeForm lee;
  ConnectionTable table;
};

inline void require_weyl_dim(const MetricLieAlgebra& M) {
  if (M.dim() < 3) throw Error(Errc::dimension, "Weyl structures need n >= 3");
}

/// nabla_x y = nabla^g_x y + theta(x) y + theta(y) x - g(x, y) T.
inline WeylStructure weyl_connection(const MetricLieAlgebra& M, const LeeForm& lee) {
  require_weyl_dim(M);
  M.algebra().check_length(lee.theta);
  const int n = M.dim();
  ConnectionTable C = levi_civita(M);
  const VectorXd T = lee.dual(M);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      C.gamma(j, i, j) += lee.theta(i);
      C.gamma(i, i, j) += lee.theta(j);
      for (int k = 0; k < n; ++k) C.gamma(k, i, j) -= M.metric()(i, j) * T(k);
    }
  return WeylStructure{M, lee, std::move(C)};
}

struct FaradayForm {
  MatrixXd F;              // F(x, y) = -theta([x, y])
  bool closed = false;     // F = 0
  bool exact_in_algebra = false;  // theta vanishes on [g, g]
};

inline FaradayForm faraday(const MetricLieAlgebra& M, const LeeForm& lee) {
  M.algebra().check_length(lee.theta);
  const int n = M.dim();
  FaradayForm out{MatrixXd::Zero(n, n)};
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) out.F(i, j) = -lee.theta.dot(M.algebra().bracket_basis(i, j));
  const double tol = M.tau_num() * (1.0 + lee.theta.cwiseAbs().maxCoeff());
  out.closed = out.F.cwiseAbs().maxCoeff() <= tol;
  const MatrixXd D = derived_algebra(M.algebra());
  out.exact_in_algebra = D.cols() == 0 || (lee.theta.transpose() * D).cwiseAbs().maxCoeff() <= tol;
  return out;
}

struct WeylRicci {
  MatrixXd ricci;          // direct route: trace of the Weyl curvature
  MatrixXd formula_ricci;  // conformal-change route, see weyl_ricci_formula
  double scalar = 0.0;
};

/// Ricci form of the Weyl connection from Levi-Civita data:
///   Ric^g - (n-2)(nabla theta - theta x theta) + (delta theta - (n-2)|theta|^2) g - F.
/// The trailing -F vanishes for closed theta. It is needed because the trace of
/// the Weyl curvature has skew part Ric - Ric^T = -n F, of which the
/// nabla theta term only supplies -(n-2) F.
inline MatrixXd weyl_ricci_formula(const MetricLieAlgebra& M, const LeeForm& lee,
                                   const MatrixXd& ric_g, const ConnectionTable& lc) {
  const int n = M.dim();
  const MatrixXd nabla_theta = covariant_derivative_oneform(M, lc, lee.theta);
  const MatrixXd tt = lee.theta * lee.theta.transpose();
  const double delta = codifferential_oneform(M, lee.theta);
  return ric_g - (n - 2.0) * (nabla_theta - tt) + (delta - (n - 2.0) * lee.norm2(M)) * M.metric() -
         faraday(M, lee).F;
}

/// Symmetric part of nabla^g theta must equal -ad_theta^sym.
inline void check_nabla_theta(const MetricLieAlgebra& M, const ConnectionTable& lc,
                              const LeeForm& lee) {
  const MatrixXd nt = linalg::sym(covariant_derivative_oneform(M, lc, lee.theta));
  const MatrixXd adT = M.ad(lee.dual(M));
  const MatrixXd ad_sym_form = linalg::sym(M.metric() * adT);
  const double diff = M.form_norm(nt + ad_sym_form);
  if (!(diff <= M.tau_num() * (1.0 + M.form_norm(nt))))
    throw Error(Errc::consistency, "sym(nabla theta) != -ad_theta^sym, off by " + std::to_string(diff));
}

inline WeylRicci weyl_ricci(const WeylStructure& W) {
  const MetricLieAlgebra& M = W.base;
  const ConnectionTable lc = levi_civita(M);
  const CurvatureData weyl_curv = curvature(M, W.table);
  const CurvatureData lc_curv = curvature(M, lc);
  check_nabla_theta(M, lc, W.lee);

  WeylRicci out;
  out.ricci = weyl_curv.ricci;
  out.formula_ricci = weyl_ricci_formula(M, W.lee, lc_curv.ricci, lc);
  out.scalar = M.trace(out.ricci);
  const double diff = M.form_norm(out.ricci - out.formula_ricci);
  if (!(diff <= M.tau_num() * (1.0 + M.form_norm(out.formula_ricci))))
    throw Error(Errc::consistency,
                "Weyl Ricci direct and formula routes disagree by " + std::to_string(diff));
  return out;
}

struct WEResidual {
  MatrixXd E;  // symmetric; zero iff the Weyl structure is Weyl-Einstein
  double norm = 0.0;
};

/// Right-hand side of the Weyl-Einstein equation on a metric Lie algebra:
/// (scal + (n-2)(Tr ad_T + |T|^2))/n g - (n-2)(ad_T^sym + theta x theta).
inline MatrixXd we_rhs(const MetricLieAlgebra& M, double scal, const LeeForm& lee) {
  const int n = M.dim();
  const VectorXd T = lee.dual(M);
  const MatrixXd adT = M.ad(T);
  const MatrixXd ad_sym_form = linalg::sym(M.metric() * adT);
  const double coeff = (scal + (n - 2.0) * (adT.trace() + lee.norm2(M))) / n;
  return coeff * M.metric() - (n - 2.0) * (ad_sym_form + lee.theta * lee.theta.transpose());
}

inline WEResidual we_residual(const MetricLieAlgebra& M, const CurvatureData& lc_curv,
                              const LeeForm& lee) {
  require_weyl_dim(M);
  M.algebra().check_length(lee.theta);
  WEResidual r;
  r.E = lc_curv.ricci - we_rhs(M, lc_curv.scalar, lee);
  r.norm = M.form_norm(r.E);
  return r;
}

inline WEResidual we_residual(const MetricLieAlgebra& M, const LeeForm& lee) {
  require_weyl_dim(M);
  return we_residual(M, ricci(M), lee);
}

struct SolveOptions {
  int starts = 64;
  std::uint64_t seed = 0;
  double tol_root = 1e-8;
  double tol_dedup = 1e-6;
  int max_iterations = 400;
};

struct WESolution {
  std::vector<LeeForm> roots;          // lexicographic by coefficients
  std::vector<double> root_residuals;  // ||E|| at each root, same order
  double infimum_residual = 0.0;       // smallest ||E|| reached over all starts
  double root_threshold = 0.0;         // tol_root (1 + ||Ric^g||)
};

namespace detail {

/// The Weyl-Einstein residual written in the orthonormal frame, where the
/// metric is the identity and E is a quadratic polynomial in phi = F^T theta.
class FrameResidual {
 public:
  FrameResidual(const MetricLieAlgebra& M, const CurvatureData& cd) : n_(M.dim()) {
    const MatrixXd& F = M.frame();
    ric_ = M.in_frame(cd.ricci);
    scal_ = cd.scalar;
    adsym_.resize(n_);
    tr_.resize(n_);
    for (int a = 0; a < n_; ++a) {
      // ad_{f_a} in frame coordinates: F^{-1} ad_{F e_a} F.
      const MatrixXd ad_f = F.transpose() * M.metric() * M.ad(F.col(a)) * F;
      adsym_[a] = linalg::sym(ad_f);
      tr_(a) = ad_f.trace();
    }
  }

  int dim() const { return n_; }

  MatrixXd residual(const VectorXd& phi) const {
    const double k = (n_ - 2.0);
    MatrixXd adsym = MatrixXd::Zero(n_, n_);
    for (int a = 0; a < n_; ++a) adsym += phi(a) * adsym_[a];
    const double coeff = (scal_ + k * (tr_.dot(phi) + phi.squaredNorm())) / n_;
    return ric_ - coeff * MatrixXd::Identity(n_, n_) + k * (adsym + phi * phi.transpose());
  }

  /// Column a is vec(dE / dphi_a).
  MatrixXd jacobian(const VectorXd& phi) const {
    const double k = (n_ - 2.0);
    MatrixXd J(n_ * n_, n_);
    for (int a = 0; a < n_; ++a) {
      const VectorXd ea = VectorXd::Unit(n_, a);
      MatrixXd d = -(k / n_) * (tr_(a) + 2.0 * phi(a)) * MatrixXd::Identity(n_, n_) +
                   k * (adsym_[a] + ea * phi.transpose() + phi * ea.transpose());
      J.col(a) = Eigen::Map<const VectorXd>(d.data(), d.size());
    }
    return J;
  }

  double ricci_norm() const { return ric_.norm(); }
  double scalar() const { return scal_; }

 private:
  int n_;
  MatrixXd ric_;
  double scal_ = 0.0;
  std::vector<MatrixXd> adsym_;
  VectorXd tr_;
};

struct LmResult {
  VectorXd phi;
  double residual;
};

/// Levenberg-Marquardt on ||E(phi)||_F with the analytic Jacobian.
inline LmResult levenberg_marquardt(const FrameResidual& R, VectorXd phi, int max_iterations,
                                    double stop_residual) {
  const int n = R.dim();
  auto vec = [](const MatrixXd& m) { return VectorXd(Eigen::Map<const VectorXd>(m.data(), m.size())); };
  VectorXd r = vec(R.residual(phi));
  double cost = 0.5 * r.squaredNorm();
  double lambda = -1.0;
  double nu = 2.0;
  for (int it = 0; it < max_iterations; ++it) {
    if (std::sqrt(2.0 * cost) <= stop_residual) break;
    const MatrixXd J = R.jacobian(phi);
    const MatrixXd A = J.transpose() * J;
    const VectorXd grad = J.transpose() * r;
    if (grad.lpNorm<Eigen::Infinity>() == 0.0) break;
    if (lambda < 0.0) lambda = 1e-3 * std::max(A.diagonal().maxCoeff(), 1e-12);
    const MatrixXd damped = A + lambda * MatrixXd::Identity(n, n);
    const VectorXd step = -damped.ldlt().solve(grad);
    if (!step.allFinite()) break;
    if (step.norm() <= 1e-15 * (1.0 + phi.norm())) break;
    const VectorXd trial = phi + step;
    const VectorXd r_trial = vec(R.residual(trial));
    const double cost_trial = 0.5 * r_trial.squaredNorm();
    const double predicted = 0.5 * step.dot(lambda * step - grad);
    const double rho = predicted > 0.0 ? (cost - cost_trial) / predicted : -1.0;
    if (rho > 0.0) {
      phi = trial;
      r = r_trial;
      cost = cost_trial;
      lambda *= std::max(1.0 / 3.0, 1.0 - std::pow(2.0 * rho - 1.0, 3));
      nu = 2.0;
    } else {
      lambda *= nu;
      nu *= 2.0;
      if (!std::isfinite(lambda) || lambda > 1e300) break;
    }
  }
  return {phi, std::sqrt(2.0 * cost)};
}

}  // namespace detail

/// Finds left-invariant Lee forms theta with E(theta) = 0 by multistart damped
/// least squares. The root set is deduplicated and sorted; completeness is not
/// certified.
inline WESolution we_solve(const MetricLieAlgebra& M, const CurvatureData& cd,
                           const SolveOptions& opt = {}) {
  require_weyl_dim(M);
  const int n = M.dim();
  const detail::FrameResidual R(M, cd);
  WESolution sol;
  sol.root_threshold = opt.tol_root * (1.0 + R.ricci_norm());
  const double stop = 1e-15 * (1.0 + R.ricci_norm());

  const double radius = std::sqrt(std::abs(R.scalar()) / (n - 2.0)) + 1.0;
  const double shells[4] = {0.0, 0.5 * radius, radius, 2.0 * radius};
  std::mt19937_64 rng(opt.seed);
  std::normal_distribution<double> gauss(0.0, 1.0);

  struct Found {
    VectorXd phi;
    double residual;
  };
  std::vector<Found> found;
  double inf = std::numeric_limits<double>::infinity();
  bool origin_done = false;
  for (int s = 0; s < opt.starts; ++s) {
    VectorXd dir(n);
    for (int a = 0; a < n; ++a) dir(a) = gauss(rng);
    const double shell = shells[s % 4];
    if (shell == 0.0) {
      if (origin_done) continue;
      origin_done = true;
    }
    const double dn = dir.norm();
    const VectorXd start = dn > 0.0 ? VectorXd(shell / dn * dir) : VectorXd::Zero(n);
    const auto res = detail::levenberg_marquardt(R, start, opt.max_iterations, stop);
    inf = std::min(inf, res.residual);
    if (!(res.residual <= sol.root_threshold)) continue;
    bool merged = false;
    for (auto& f : found) {
      if ((f.phi - res.phi).norm() <= opt.tol_dedup) {
        if (res.residual < f.residual) f = {res.phi, res.residual};
        merged = true;
        break;
      }
    }
    if (!merged) found.push_back({res.phi, res.residual});
  }
  sol.infimum_residual = inf;

  // Back to dual-basis coefficients: theta = F^{-T} phi = g F phi.
  const MatrixXd back = M.metric() * M.frame();
  std::vector<std::pair<VectorXd, double>> out;
  for (const auto& f : found) {
    VectorXd theta = back * f.phi;
    for (Eigen::Index i = 0; i < theta.size(); ++i)
      if (std::abs(theta(i)) <= 1e-12) theta(i) = 0.0;
    out.emplace_back(std::move(theta), f.residual);
  }
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
    return std::lexicographical_compare(a.first.begin(), a.first.end(), b.first.begin(),
                                        b.first.end());
  });
  for (auto& [theta, res] : out) {
    sol.roots.push_back(LeeForm{std::move(theta)});
    sol.root_residuals.push_back(res);
  }
  return sol;
}

inline WESolution we_solve(const MetricLieAlgebra& M, const SolveOptions& opt = {}) {
  require_weyl_dim(M);
  return we_solve(M, ricci(M), opt);
}

/// (h o k)(x,y,z,w) = h(x,z)k(y,w) + h(y,w)k(x,z) - h(x,w)k(y,z) - h(y,z)k(x,w),
/// before the global sign calibration applied in conformal_flatness_check.
inline Tensor4 kulkarni_nomizu(const MatrixXd& h, const MatrixXd& k) {
  const int n = static_cast<int>(h.rows());
  if (h.cols() != n || k.rows() != n || k.cols() != n)
    throw Error(Errc::structural, "Kulkarni-Nomizu factors must be square of equal size");
  Tensor4 out(n);
  for (int x = 0; x < n; ++x)
    for (int y = 0; y < n; ++y)
      for (int z = 0; z < n; ++z)
        for (int w = 0; w < n; ++w)
          out(x, y, z, w) =
              h(x, z) * k(y, w) + h(y, w) * k(x, z) - h(x, w) * k(y, z) - h(y, z) * k(x, w);
  return out;
}

/// g o (nabla theta - theta x theta + |theta|^2 g / 2), unsigned.
inline Tensor4 conformal_flatness_tensor(const MetricLieAlgebra& M, const ConnectionTable& lc,
                                         const LeeForm& lee) {
  const MatrixXd h = covariant_derivative_oneform(M, lc, lee.theta) -
                     lee.theta * lee.theta.transpose() + 0.5 * lee.norm2(M) * M.metric();
  return kulkarni_nomizu(M.metric(), linalg::sym(h));
}

/// Global sign s with R^g(x,y,z,w) = g(R(x,y)z, w) = s (g o (...)) for a
/// conformally flat pair, fixed once on the 3-dimensional hyperbolic algebra
/// [b,u] = u, [b,v] = v with theta = b.
inline double kn_sign() {
  static const double sign = [] {
    const LieAlgebra L = LieAlgebra::from_brackets(
        3, {{2, 0, VectorXd::Unit(3, 0)}, {2, 1, VectorXd::Unit(3, 1)}});
    const MetricLieAlgebra M(L, MatrixXd::Identity(3, 3));
    const ConnectionTable lc = levi_civita(M);
    const Tensor4 R = lower_curvature(M, curvature(M, lc).riem);
    const Tensor4 T = conformal_flatness_tensor(M, lc, LeeForm{VectorXd::Unit(3, 2)});
    Tensor4 plus = R, minus = T;
    plus -= T;
    minus *= -1.0;
    minus -= R;
    const double s = plus.norm() <= minus.norm() ? 1.0 : -1.0;
    if (std::min(plus.norm(), minus.norm()) > 1e-12)
      throw Error(Errc::consistency, "Kulkarni-Nomizu calibration failed on the hyperbolic algebra");
    return s;
  }();
  return sign;
}

struct ConformalFlatness {
  bool ricci_flat = false;
  bool flat = false;
  double ricci_norm = 0.0;   // ||Ric|| of the metric e^{2f} g, orthonormal frame of g
  double kn_residual = 0.0;  // ||R^g - g o (...)|| over all basis 4-tuples, orthonormal frame
};

/// Ricci-flatness and flatness of the metric e^{2f} g with df = theta.
inline ConformalFlatness conformal_flatness_check(const MetricLieAlgebra& M, const LeeForm& lee) {
  require_weyl_dim(M);
  if (!faraday(M, lee).closed)
    throw Error(Errc::precondition, "Lee form is not closed; e^{2f} g needs theta = df");
  const ConnectionTable lc = levi_civita(M);
  const CurvatureData cd = curvature(M, lc);
  ConformalFlatness out;
  out.ricci_norm = M.form_norm(weyl_ricci_formula(M, lee, cd.ricci, lc));
  out.ricci_flat = out.ricci_norm <= M.tau_num();
  Tensor4 diff = lower_curvature(M, cd.riem);
  Tensor4 T = conformal_flatness_tensor(M, lc, lee);
  T *= kn_sign();
  diff -= T;
  out.kn_residual = covariant_change(diff, M.frame()).norm();
  out.flat = out.kn_residual <= M.tau_num();
  return out;
}

}  // namespace liewe
