#pragma once

#include <Eigen/Dense>

#include <span>
#include <vector>

namespace cvarkit {

/// Least-squares B minimizing ||Y - X B||; throws SingularRegressorMatrix when
/// X has deficient column rank.
[[nodiscard]] Eigen::MatrixXd least_squares(const Eigen::MatrixXd& x, const Eigen::MatrixXd& y);

/// Residuals of Y after projecting on the columns of X (Y itself if X is empty).
[[nodiscard]] Eigen::MatrixXd partial_out(const Eigen::MatrixXd& x, const Eigen::MatrixXd& y);

/// Linear-interpolation order statistic (Hyndman-Fan type 7).
[[nodiscard]] double quantile(std::span<const double> values, double prob);
[[nodiscard]] double quantile_sorted(std::span<const double> sorted, double prob);

[[nodiscard]] double chi_squared_quantile(double df, double prob);
[[nodiscard]] double normal_quantile(double prob);

}  // namespace cvarkit
