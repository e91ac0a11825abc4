#pragma once

#include <Eigen/Dense>

namespace hypercross {

// Upper bound on the ambient dimension. Small vectors and matrices live on the
// stack so the combinatorial kernels never touch the heap per tuple.
inline constexpr int kMaxDim = 8;

using Point = Eigen::Matrix<double, Eigen::Dynamic, 1, 0, kMaxDim, 1>;
using SmallMatrix =
    Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, 0, kMaxDim, kMaxDim>;

}  // namespace hypercross
