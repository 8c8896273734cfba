#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <vector>

namespace klift {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

// Dense cubic array of fixed rank over a common index range [0, dim).
// Storage is row-major in the index order of operator().
template <std::size_t Rank>
class Tensor {
 public:
  Tensor() = default;
  explicit Tensor(int dim) : dim_(dim), data_(size_for(dim), 0.0) {}

  int dim() const { return dim_; }
  std::size_t size() const { return data_.size(); }

  template <typename... I>
  double& operator()(I... idx) {
    static_assert(sizeof...(I) == Rank);
    return data_[offset({static_cast<int>(idx)...})];
  }
  template <typename... I>
  double operator()(I... idx) const {
    static_assert(sizeof...(I) == Rank);
    return data_[offset({static_cast<int>(idx)...})];
  }

  const std::vector<double>& data() const { return data_; }
  std::vector<double>& data() { return data_; }

  double max_abs() const {
    double m = 0.0;
    for (double v : data_) m = std::max(m, std::abs(v));
    return m;
  }

  friend Tensor operator-(const Tensor& a, const Tensor& b) {
    Tensor out(a.dim_);
    for (std::size_t i = 0; i < a.data_.size(); ++i) out.data_[i] = a.data_[i] - b.data_[i];
    return out;
  }

 private:
  static std::size_t size_for(int dim) {
    std::size_t s = 1;
    for (std::size_t r = 0; r < Rank; ++r) s *= static_cast<std::size_t>(dim);
    return s;
  }
  std::size_t offset(const std::array<int, Rank>& idx) const {
    std::size_t o = 0;
    for (int i : idx) o = o * static_cast<std::size_t>(dim_) + static_cast<std::size_t>(i);
    return o;
  }

  int dim_ = 0;
  std::vector<double> data_;
};

using Tensor3 = Tensor<3>;
using Tensor4 = Tensor<4>;

// Largest absolute entry; the "infinity norm" used for every residual in this library.
inline double max_abs(const Matrix& m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }

}  // namespace klift
