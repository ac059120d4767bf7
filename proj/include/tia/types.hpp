#pragma once

#include <Eigen/Dense>
#include <cstdint>

namespace tia {

using Vec3 = Eigen::Vector3d;
using VecX = Eigen::VectorXd;
using Mat3 = Eigen::Matrix3d;
using MatX = Eigen::MatrixXd;

using Index = std::int64_t;

}  // namespace tia
