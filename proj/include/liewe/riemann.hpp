#pragma once

#include <algorithm>
#include <cmath>
#include <string>

#include <Eigen/Dense>

#include "liewe/error.hpp"
#include "liewe/liealg.hpp"
#include "liewe/linalg.hpp"
#include "liewe/tensor.hpp"

namespace liewe {

/// A Lie algebra together with an inner product g_ij = g(e_i, e_j).
///
/// The g-orthonormal frame is F = L^{-T} where g = L L^T is the Cholesky
/// factorisation in natural basis order, so F^T g F = I and the frame is
/// reproducible. Bilinear forms are measured in this frame.
class MetricLieAlgebra {
 public:
  MetricLieAlgebra() = default;

  MetricLieAlgebra(LieAlgebra algebra, MatrixXd metric)
      : alg_(std::move(algebra)), g_(std::move(metric)) {
    const int n = alg_.dim();
    if (g_.rows() != n || g_.cols() != n)
      throw Error(Errc::structural, "metric must be " + std::to_string(n) + " x " +
                                        std::to_string(n));
    if (!g_.allFinite()) throw Error(Errc::numeric_input, "metric contains NaN or Inf");
    const double gmax = std::max(1.0, g_.cwiseAbs().maxCoeff());
    if ((g_ - g_.transpose()).cwiseAbs().maxCoeff() > kTauAlg * gmax)
      throw Error(Errc::metric, "metric is not symmetric");
    g_ = linalg::sym(g_);
    Eigen::LLT<MatrixXd> llt(g_);
    if (llt.info() != Eigen::Success || linalg::sym_eigenvalues(g_)(0) <= 0.0)
      throw Error(Errc::metric, "metric is not positive definite");
    const MatrixXd Lc = llt.matrixL();
    frame_ = Lc.transpose().triangularView<Eigen::Upper>().solve(MatrixXd::Identity(n, n));
    g_inv_ = llt.solve(MatrixXd::Identity(n, n));
    g_inv_ = linalg::sym(g_inv_);
    ad_.reserve(n);
    for (int i = 0; i < n; ++i) ad_.push_back(ad_basis(alg_, i));
  }

  const LieAlgebra& algebra() const noexcept { return alg_; }
  const MatrixXd& metric() const noexcept { return g_; }
  const MatrixXd& metric_inverse() const noexcept { return g_inv_; }
  int dim() const noexcept { return alg_.dim(); }

  /// Columns are a g-orthonormal basis: F^T g F = I.
  const MatrixXd& frame() const noexcept { return frame_; }

  const MatrixXd& ad_e(int i) const { return ad_[i]; }

  MatrixXd ad(const VectorXd& x) const {
    alg_.check_length(x);
    MatrixXd m = MatrixXd::Zero(dim(), dim());
    for (int i = 0; i < dim(); ++i)
      if (x(i) != 0.0) m += x(i) * ad_[i];
    return m;
  }

  /// g-adjoint of an endomorphism: g(M x, y) = g(x, M* y).
  MatrixXd adjoint(const MatrixXd& m) const { return g_inv_ * m.transpose() * g_; }

  /// Vector metrically dual to a covector.
  VectorXd raise(const VectorXd& covector) const { return g_inv_ * covector; }
  VectorXd lower(const VectorXd& vector) const { return g_ * vector; }

  /// Bilinear form expressed in the orthonormal frame.
  MatrixXd in_frame(const MatrixXd& form) const { return frame_.transpose() * form * frame_; }
  double form_norm(const MatrixXd& form) const { return in_frame(form).norm(); }

  /// g-trace of a bilinear form.
  double trace(const MatrixXd& form) const { return (g_inv_ * form).trace(); }

  /// Largest absolute input coefficient (structure constants and metric).
  double max_input() const { return std::max(alg_.max_abs(), g_.cwiseAbs().maxCoeff()); }

  /// Numerical tolerance: 1e-9 (1 + max |input coefficient|).
  double tau_num() const { return 1e-9 * (1.0 + max_input()); }

 private:
  LieAlgebra alg_;
  MatrixXd g_;
  MatrixXd g_inv_;
  MatrixXd frame_;
  std::vector<MatrixXd> ad_;
};

/// Coefficients of a connection: nabla_{e_i} e_j = sum_k gamma(k, i, j) e_k.
struct ConnectionTable {
  Tensor3 gamma;

  int dim() const { return gamma.dim(); }

  /// Matrix of the endomorphism y -> nabla_{e_i} y.
  MatrixXd nabla_e(int i) const {
    const int n = dim();
    MatrixXd m(n, n);
    for (int k = 0; k < n; ++k)
      for (int j = 0; j < n; ++j) m(k, j) = gamma(k, i, j);
    return m;
  }

  MatrixXd nabla(const VectorXd& x) const {
    MatrixXd m = MatrixXd::Zero(dim(), dim());
    for (int i = 0; i < dim(); ++i)
      if (x(i) != 0.0) m += x(i) * nabla_e(i);
    return m;
  }

  VectorXd apply(const VectorXd& x, const VectorXd& y) const { return nabla(x) * y; }
};

/// riem(l, i, j, k) is the e_l coefficient of R(e_i, e_j) e_k.
struct CurvatureData {
  Tensor4 riem;
  MatrixXd ricci;
  double scalar = 0.0;
};

/// Levi-Civita connection from the Koszul formula
/// nabla_x y = 1/2 ([x, y] - ad*_y x - ad*_x y).
inline ConnectionTable levi_civita(const MetricLieAlgebra& M) {
  const int n = M.dim();
  std::vector<MatrixXd> adj(n);
  for (int i = 0; i < n; ++i) adj[i] = M.adjoint(M.ad_e(i));
  ConnectionTable C{Tensor3(n)};
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const VectorXd v =
          0.5 * (M.algebra().bracket_basis(i, j) - adj[j].col(i) - adj[i].col(j));
      for (int k = 0; k < n; ++k) C.gamma(k, i, j) = v(k);
    }
  return C;
}

/// R(X,Y)Z = nabla_{[X,Y]} Z - nabla_X nabla_Y Z + nabla_Y nabla_X Z, for any
/// connection table; ricci(i, j) = Tr(Z -> R(e_i, Z) e_j), scalar its g-trace.
inline CurvatureData curvature(const MetricLieAlgebra& M, const ConnectionTable& C) {
  const int n = M.dim();
  if (C.dim() != n) throw Error(Errc::structural, "connection table dimension mismatch");
  std::vector<MatrixXd> nab(n);
  for (int i = 0; i < n; ++i) nab[i] = C.nabla_e(i);

  CurvatureData out{Tensor4(n), MatrixXd::Zero(n, n), 0.0};
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      MatrixXd r = -(nab[i] * nab[j]) + nab[j] * nab[i];
      for (int m = 0; m < n; ++m) {
        const double cm = M.algebra().c(m, i, j);
        if (cm != 0.0) r += cm * nab[m];
      }
      for (int l = 0; l < n; ++l)
        for (int k = 0; k < n; ++k) out.riem(l, i, j, k) = r(l, k);
    }
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      double s = 0.0;
      for (int k = 0; k < n; ++k) s += out.riem(k, i, k, j);
      out.ricci(i, j) = s;
    }
  out.scalar = M.trace(out.ricci);
  return out;
}

/// Cartan-Killing form B(x, y) = Tr(ad_x ad_y).
inline MatrixXd killing_form(const MetricLieAlgebra& M) {
  const int n = M.dim();
  MatrixXd B(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) B(i, j) = (M.ad_e(i) * M.ad_e(j)).trace();
  return B;
}

/// Ricci tensor of the Levi-Civita connection from the structure constants
/// alone: Ric = P - B/2 - (ad_z + ad_z^*)/2 with g(z, x) = Tr ad_x and P summed
/// over an orthonormal basis.
inline MatrixXd besse_ricci(const MetricLieAlgebra& M) {
  const int n = M.dim();
  const MatrixXd& F = M.frame();
  const MatrixXd& g = M.metric();
  // Brackets among basis and frame vectors, reused in the sums below.
  // xk(a)(:, k) = [e_a, f_k];  ff(:, i*n+k) = [f_i, f_k].
  std::vector<MatrixXd> xk(n, MatrixXd(n, n));
  for (int a = 0; a < n; ++a) xk[a] = M.ad_e(a) * F;
  MatrixXd ff(n, n * n);
  for (int i = 0; i < n; ++i) {
    const MatrixXd adfi = M.ad(F.col(i));
    for (int k = 0; k < n; ++k) ff.col(i * n + k) = adfi * F.col(k);
  }

  MatrixXd P = MatrixXd::Zero(n, n);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) {
      double s = 0.0;
      for (int i = 0; i < n; ++i)
        for (int k = 0; k < n; ++k)
          s -= 0.5 * F.col(i).dot(g * xk[a].col(k)) * F.col(i).dot(g * xk[b].col(k));
      const VectorXd ea = g.col(a), eb = g.col(b);  // g(e_a, .) as covectors
      for (int q = 0; q < n * n; ++q) s += 0.25 * ea.dot(ff.col(q)) * eb.dot(ff.col(q));
      P(a, b) = s;
    }

  VectorXd traces(n);
  for (int i = 0; i < n; ++i) traces(i) = M.ad_e(i).trace();
  const VectorXd z = M.raise(traces);
  const MatrixXd adz = M.ad(z);
  // (ad_z + ad_z^*) as the bilinear form (x, y) -> g((ad_z + ad_z^*) x, y).
  const MatrixXd adz_form = g * (adz + M.adjoint(adz));
  return P - 0.5 * killing_form(M) - 0.5 * adz_form;
}

/// Levi-Civita curvature with the Ricci tensor cross-checked against the
/// Besse formula. Throws Errc::consistency if the two routes disagree.
inline CurvatureData ricci(const MetricLieAlgebra& M) {
  CurvatureData cd = curvature(M, levi_civita(M));
  const MatrixXd besse = besse_ricci(M);
  const double diff = M.form_norm(cd.ricci - besse);
  const double tol = M.tau_num() * (1.0 + M.form_norm(besse));
  if (!(diff <= tol))
    throw Error(Errc::consistency, "Ricci trace and Besse formulas disagree by " +
                                       std::to_string(diff));
  return cd;
}

/// Frobenius norm (orthonormal frame) of the trace-free Ricci tensor.
inline double einstein_defect(const MetricLieAlgebra& M, const CurvatureData& cd) {
  if (M.dim() < 3) throw Error(Errc::dimension, "Einstein defect needs n >= 3");
  return M.form_norm(cd.ricci - (cd.scalar / M.dim()) * M.metric());
}

inline double einstein_defect(const MetricLieAlgebra& M) { return einstein_defect(M, ricci(M)); }

/// delta^g theta = Tr ad_T where T is the metric dual of theta.
inline double codifferential_oneform(const MetricLieAlgebra& M, const VectorXd& theta) {
  M.algebra().check_length(theta);
  return M.ad(M.raise(theta)).trace();
}

/// The bilinear form (x, y) -> g(nabla_x T, y), T dual to theta.
inline MatrixXd covariant_derivative_oneform(const MetricLieAlgebra& M, const ConnectionTable& C,
                                             const VectorXd& theta) {
  const int n = M.dim();
  const VectorXd T = M.raise(theta);
  MatrixXd out(n, n);
  for (int i = 0; i < n; ++i) out.row(i) = (M.metric() * (C.nabla_e(i) * T)).transpose();
  return out;
}

/// Codifferential of a left-invariant symmetric 2-form h:
/// (delta h)(w) = -sum_a (nabla_{f_a} h)(f_a, w) over an orthonormal frame.
/// Returned as a covector in the natural basis.
inline VectorXd codifferential_sym2(const MetricLieAlgebra& M, const ConnectionTable& C,
                                    const MatrixXd& h) {
  const int n = M.dim();
  const MatrixXd& F = M.frame();
  VectorXd out = VectorXd::Zero(n);
  for (int a = 0; a < n; ++a) {
    const VectorXd fa = F.col(a);
    const MatrixXd Na = C.nabla(fa);
    // (nabla_X h)(Y, W) = -h(nabla_X Y, W) - h(Y, nabla_X W)
    const VectorXd nff = Na * fa;
    for (int w = 0; w < n; ++w) {
      const VectorXd ew = VectorXd::Unit(n, w);
      const double d = -nff.dot(h * ew) - fa.dot(h * (Na * ew));
      out(w) -= d;
    }
  }
  return out;
}

/// Eigenvalues of the Ricci endomorphism g^{-1} Ric, ascending.
inline VectorXd ricci_spectrum(const MetricLieAlgebra& M, const MatrixXd& ric) {
  return linalg::sym_eigenvalues(M.in_frame(ric));
}

/// max |Gamma(k,i,j) - Gamma(k,j,i) - c(k,i,j)|.
inline double torsion_residual(const MetricLieAlgebra& M, const ConnectionTable& C) {
  double r = 0.0;
  const int n = M.dim();
  for (int k = 0; k < n; ++k)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        r = std::max(r, std::abs(C.gamma(k, i, j) - C.gamma(k, j, i) - M.algebra().c(k, i, j)));
  return r;
}

/// Coefficients of nabla g: (nabla_{e_i} g)(e_j, e_k) = -g(nabla_i e_j, e_k) - g(e_j, nabla_i e_k).
inline Tensor3 metric_derivative(const MetricLieAlgebra& M, const ConnectionTable& C) {
  const int n = M.dim();
  Tensor3 out(n);
  for (int i = 0; i < n; ++i) {
    const MatrixXd gN = M.metric() * C.nabla_e(i);  // gN(k, j) = g(e_k, nabla_i e_j)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) out(i, j, k) = -gN(k, j) - gN(j, k);
  }
  return out;
}

inline double metric_compatibility_residual(const MetricLieAlgebra& M, const ConnectionTable& C) {
  return metric_derivative(M, C).max_abs();
}

/// max over basis triples of |R(x,y)z + R(y,z)x + R(z,x)y| coefficient-wise.
inline double first_bianchi_residual(const Tensor4& riem) {
  const int n = riem.dim();
  double r = 0.0;
  for (int l = 0; l < n; ++l)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k)
          r = std::max(r, std::abs(riem(l, i, j, k) + riem(l, j, k, i) + riem(l, k, i, j)));
  return r;
}

/// Fully covariant curvature R(x, y, z, w) = g(R(x, y) z, w).
inline Tensor4 lower_curvature(const MetricLieAlgebra& M, const Tensor4& riem) {
  const int n = M.dim();
  Tensor4 out(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        for (int w = 0; w < n; ++w) {
          double s = 0.0;
          for (int l = 0; l < n; ++l) s += riem(l, i, j, k) * M.metric()(l, w);
          out(i, j, k, w) = s;
        }
  return out;
}

}  // namespace liewe
