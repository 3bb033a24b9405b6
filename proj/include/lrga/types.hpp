#pragma once

#include <Eigen/Dense>

namespace lrga {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using RowVector = Eigen::RowVectorXd;

}  // namespace lrga
