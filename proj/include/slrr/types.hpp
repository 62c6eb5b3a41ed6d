#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

namespace slrr {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// Cluster labels, 1-based, one entry per sample (column) of the data matrix.
using Labels = std::vector<int>;

} // namespace slrr
