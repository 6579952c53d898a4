#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

namespace ep {

/// Dense rank-3 array with 1st-index-major layout, zero initialized.
class Tensor3 {
 public:
  Tensor3() = default;
  explicit Tensor3(int n) { resize(n); }

  void resize(int n) {
    n_ = n;
    v_.assign(static_cast<std::size_t>(n) * n * n, 0.0);
  }
  void set_zero() { v_.assign(v_.size(), 0.0); }
  int dim() const { return n_; }

  double& operator()(int i, int j, int k) { return v_[index(i, j, k)]; }
  double operator()(int i, int j, int k) const { return v_[index(i, j, k)]; }

  double max_abs() const {
    double m = 0.0;
    for (double x : v_) m = std::max(m, std::abs(x));
    return m;
  }

 private:
  std::size_t index(int i, int j, int k) const {
    return (static_cast<std::size_t>(i) * n_ + j) * n_ + k;
  }
  int n_ = 0;
  std::vector<double> v_;
};

/// Dense rank-4 array, zero initialized.
class Tensor4 {
 public:
  Tensor4() = default;
  explicit Tensor4(int n) { resize(n); }

  void resize(int n) {
    n_ = n;
    v_.assign(static_cast<std::size_t>(n) * n * n * n, 0.0);
  }
  void set_zero() { v_.assign(v_.size(), 0.0); }
  int dim() const { return n_; }

  double& operator()(int i, int j, int k, int l) { return v_[index(i, j, k, l)]; }
  double operator()(int i, int j, int k, int l) const { return v_[index(i, j, k, l)]; }

  double max_abs() const {
    double m = 0.0;
    for (double x : v_) m = std::max(m, std::abs(x));
    return m;
  }

 private:
  std::size_t index(int i, int j, int k, int l) const {
    return ((static_cast<std::size_t>(i) * n_ + j) * n_ + k) * n_ + l;
  }
  int n_ = 0;
  std::vector<double> v_;
};

}  // namespace ep
