#pragma once

#include <cmath>
#include <vector>

#include <Eigen/Dense>

namespace liewe {

/// Dense n x n x n array, row-major in (a, b, c).
class Tensor3 {
 public:
  Tensor3() = default;
  explicit Tensor3(int n) : n_(n), data_(static_cast<std::size_t>(n) * n * n, 0.0) {}

  int dim() const noexcept { return n_; }

  double& operator()(int a, int b, int c) { return data_[index(a, b, c)]; }
  double operator()(int a, int b, int c) const { return data_[index(a, b, c)]; }

  /// The n x n slice with the first index fixed.
  Eigen::MatrixXd slice(int a) const {
    Eigen::MatrixXd m(n_, n_);
    for (int b = 0; b < n_; ++b)
      for (int c = 0; c < n_; ++c) m(b, c) = (*this)(a, b, c);
    return m;
  }

  double max_abs() const {
    double m = 0.0;
    for (double v : data_) m = std::max(m, std::abs(v));
    return m;
  }

  const std::vector<double>& data() const noexcept { return data_; }

  friend bool operator==(const Tensor3&, const Tensor3&) = default;

 private:
  std::size_t index(int a, int b, int c) const {
    return (static_cast<std::size_t>(a) * n_ + b) * n_ + c;
  }
  int n_ = 0;
  std::vector<double> data_;
};

/// Dense n^4 array, row-major in (a, b, c, d).
class Tensor4 {
 public:
  Tensor4() = default;
  explicit Tensor4(int n) : n_(n), data_(static_cast<std::size_t>(n) * n * n * n, 0.0) {}

  int dim() const noexcept { return n_; }

  double& operator()(int a, int b, int c, int d) { return data_[index(a, b, c, d)]; }
  double operator()(int a, int b, int c, int d) const { return data_[index(a, b, c, d)]; }

  double max_abs() const {
    double m = 0.0;
    for (double v : data_) m = std::max(m, std::abs(v));
    return m;
  }

  double norm() const {
    double s = 0.0;
    for (double v : data_) s += v * v;
    return std::sqrt(s);
  }

  Tensor4& operator-=(const Tensor4& o) {
    for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= o.data_[i];
    return *this;
  }
  Tensor4& operator*=(double s) {
    for (double& v : data_) v *= s;
    return *this;
  }

 private:
  std::size_t index(int a, int b, int c, int d) const {
    return ((static_cast<std::size_t>(a) * n_ + b) * n_ + c) * n_ + d;
  }
  int n_ = 0;
  std::vector<double> data_;
};

/// Transforms a fully covariant 4-tensor into the basis whose vectors are the
/// columns of `frame`: T'(a,b,c,d) = sum T(i,j,k,l) F(i,a) F(j,b) F(k,c) F(l,d).
inline Tensor4 covariant_change(const Tensor4& t, const Eigen::MatrixXd& frame) {
  const int n = t.dim();
  Tensor4 cur = t;
  // Contract one slot at a time; slot s is moved to the front each pass.
  for (int pass = 0; pass < 4; ++pass) {
    Tensor4 next(n);
    for (int a = 0; a < n; ++a)
      for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k)
          for (int l = 0; l < n; ++l) {
            double s = 0.0;
            for (int i = 0; i < n; ++i) s += cur(i, j, k, l) * frame(i, a);
            // rotate: (i,j,k,l) -> (j,k,l,a)
            next(j, k, l, a) = s;
          }
    cur = std::move(next);
  }
  return cur;
}

}  // namespace liewe
