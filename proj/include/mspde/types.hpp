#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>

namespace mspde {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;
using SparseMatrix = Eigen::SparseMatrix<double>;

/// Point value of a D-component field. Capped at 8 components so that
/// quadrature-point evaluations stay off the heap.
using State = Eigen::Matrix<double, Eigen::Dynamic, 1, 0, 8, 1>;
using StateMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, 0, 8, 8>;

} // namespace mspde
