#pragma once

#include <algorithm>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace twobody {

/// Dense row-major n-by-n matrix of doubles. Used for the pairwise moment
/// tables, which are kept dense because the feasibility bounds couple every
/// pair of variables, not just the edges of the cost matrix.
class SquareMatrix {
 public:
  SquareMatrix() = default;
  explicit SquareMatrix(int n, double fill = 0.0)
      : n_(n), v_(static_cast<std::size_t>(n) * static_cast<std::size_t>(n), fill) {}

  int n() const { return n_; }
  double& operator()(int i, int j) { return v_[idx(i, j)]; }
  double operator()(int i, int j) const { return v_[idx(i, j)]; }

  double* data() { return v_.data(); }
  const double* data() const { return v_.data(); }

  void fill(double x) { std::fill(v_.begin(), v_.end(), x); }

  /// Writes the same value to (i,j) and (j,i).
  void set_sym(int i, int j, double x) {
    v_[idx(i, j)] = x;
    v_[idx(j, i)] = x;
  }

 private:
  std::size_t idx(int i, int j) const {
    return static_cast<std::size_t>(i) * static_cast<std::size_t>(n_) +
           static_cast<std::size_t>(j);
  }
  int n_ = 0;
  std::vector<double> v_;
};

inline double clip(double x, double lo, double hi) {
  return std::min(std::max(x, lo), hi);
}

/// ceil(log2(n)) for n >= 1.
inline int ceil_log2(int n) {
  if (n < 1) throw std::invalid_argument("ceil_log2: n must be positive");
  int bits = 0;
  while ((1 << bits) < n) ++bits;
  return bits;
}

}  // namespace twobody
