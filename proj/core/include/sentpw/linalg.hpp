#ifndef SENTPW_LINALG_HPP
#define SENTPW_LINALG_HPP

#include <Eigen/Dense>

namespace sentpw {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using BoolMatrix = Eigen::Array<bool, Eigen::Dynamic, Eigen::Dynamic>;

}  // namespace sentpw

#endif  // SENTPW_LINALG_HPP
