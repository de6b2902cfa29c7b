#pragma once

#include <Eigen/Core>

namespace bnn {

using Index = Eigen::Index;
using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;
using Arr = Eigen::ArrayXd;
using IntVec = Eigen::VectorXi;

} // namespace bnn
