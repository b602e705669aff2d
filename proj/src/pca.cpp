#include "ccr/pca.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <string>

#include "ccr/error.hpp"

namespace ccr {

ReducedPointSet pca_reduce(std::span<const Eigen::VectorXd> vectors) {
  const auto n = static_cast<Eigen::Index>(vectors.size());
  if (n < 3) throw Error(ErrorKind::InsufficientHistory, "PCA needs at least 3 vectors, got " + std::to_string(n));
  const auto dim = vectors.front().size();
  if (dim < 2) throw Error(ErrorKind::Validation, "PCA needs dimension >= 2, got " + std::to_string(dim));

  Eigen::MatrixXd data(n, dim);
  for (Eigen::Index i = 0; i < n; ++i) {
    if (vectors[i].size() != dim) throw Error(ErrorKind::Validation, "PCA input vectors differ in dimension");
    if (!vectors[i].allFinite()) throw Error(ErrorKind::Validation, "PCA input has a non-finite entry");
    data.row(i) = vectors[i].transpose();
  }

  ReducedPointSet result;
  result.mean = data.colwise().mean().transpose();
  const Eigen::MatrixXd centered = data.rowwise() - result.mean.transpose();
  const Eigen::MatrixXd covariance = centered.transpose() * centered / static_cast<double>(n - 1);

  const double scale = data.cwiseAbs().maxCoeff();
  if (covariance.trace() <= 1e-28 * (1.0 + scale * scale)) {
    throw Error(ErrorKind::DegenerateInput, "PCA input has zero total variance (all vectors identical)");
  }

  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(covariance);
  if (solver.info() != Eigen::Success) throw Error(ErrorKind::DegenerateInput, "eigendecomposition failed");

  // Eigen returns ascending eigenvalues.
  result.projection.resize(2, dim);
  for (int axis = 0; axis < 2; ++axis) {
    const Eigen::Index column = dim - 1 - axis;
    Eigen::VectorXd v = solver.eigenvectors().col(column);
    Eigen::Index largest = 0;
    for (Eigen::Index k = 1; k < dim; ++k) {
      if (std::abs(v(k)) > std::abs(v(largest))) largest = k;
    }
    if (v(largest) < 0) v = -v;
    result.projection.row(axis) = v.transpose();
    result.eigenvalues(axis) = std::max(0.0, solver.eigenvalues()(column));
  }

  result.points.reserve(vectors.size());
  for (Eigen::Index i = 0; i < n; ++i) {
    result.points.emplace_back(result.projection * centered.row(i).transpose());
  }
  return result;
}

}  // namespace ccr
