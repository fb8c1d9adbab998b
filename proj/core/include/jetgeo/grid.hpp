#pragma once

#include <algorithm>
#include <array>
#include <cassert>
#include <cmath>
#include <cstddef>
#include <vector>

#include <Eigen/Dense>

namespace jetgeo {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// Dense hypercubic array: every index runs over 0..n-1.
///
/// Used for the index-heavy jet blocks (a^i_jk, X^i_mjk, R^i_rj,k, ...) both
/// with double entries and with symbolic Expr entries, so the same tensor
/// formulas can be instantiated for numbers and for expressions.
template <class T, int Rank>
class Grid {
  static_assert(Rank >= 1);

 public:
  using Scalar = T;
  static constexpr int kRank = Rank;

  Grid() = default;
  explicit Grid(int n, const T& fill = T{}) : n_(n), data_(size_for(n), fill) {}

  int dim() const { return n_; }
  std::size_t size() const { return data_.size(); }

  template <class... I>
  T& operator()(I... idx) {
    static_assert(sizeof...(I) == Rank);
    return data_[offset({static_cast<int>(idx)...})];
  }
  template <class... I>
  const T& operator()(I... idx) const {
    static_assert(sizeof...(I) == Rank);
    return data_[offset({static_cast<int>(idx)...})];
  }

  T* data() { return data_.data(); }
  const T* data() const { return data_.data(); }
  auto begin() { return data_.begin(); }
  auto end() { return data_.end(); }
  auto begin() const { return data_.begin(); }
  auto end() const { return data_.end(); }

  bool operator==(const Grid&) const = default;

 private:
  static std::size_t size_for(int n) {
    std::size_t s = 1;
    for (int r = 0; r < Rank; ++r) s *= static_cast<std::size_t>(n);
    return s;
  }
  std::size_t offset(const std::array<int, Rank>& idx) const {
    std::size_t off = 0;
    for (int r = 0; r < Rank; ++r) {
      assert(idx[r] >= 0 && idx[r] < n_);
      off = off * static_cast<std::size_t>(n_) + static_cast<std::size_t>(idx[r]);
    }
    return off;
  }

  int n_ = 0;
  std::vector<T> data_;
};

using Tensor3 = Grid<double, 3>;
using Tensor4 = Grid<double, 4>;
using Tensor5 = Grid<double, 5>;
using Tensor6 = Grid<double, 6>;

/// Max-norm of a dense grid (0 for an empty grid).
template <class G>
double max_abs(const G& g) {
  double m = 0.0;
  for (const auto& v : g) m = std::max(m, std::abs(v));
  return m;
}

inline double max_abs(const Matrix& m) { return m.size() ? m.cwiseAbs().maxCoeff() : 0.0; }
inline double max_abs(const Vector& v) { return v.size() ? v.cwiseAbs().maxCoeff() : 0.0; }

template <class G>
double max_abs_diff(const G& a, const G& b) {
  assert(a.size() == b.size());
  double m = 0.0;
  auto ib = b.begin();
  for (auto ia = a.begin(); ia != a.end(); ++ia, ++ib) m = std::max(m, std::abs(*ia - *ib));
  return m;
}

inline double max_abs_diff(const Matrix& a, const Matrix& b) { return max_abs(Matrix(a - b)); }
inline double max_abs_diff(const Vector& a, const Vector& b) { return max_abs(Vector(a - b)); }

}  // namespace jetgeo
