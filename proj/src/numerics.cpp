#include "cvarkit/numerics.hpp"

#include "cvarkit/error.hpp"

#include <boost/math/distributions/chi_squared.hpp>
#include <boost/math/distributions/normal.hpp>

#include <algorithm>
#include <cmath>

namespace cvarkit {

Eigen::MatrixXd least_squares(const Eigen::MatrixXd& x, const Eigen::MatrixXd& y) {
    if (x.rows() != y.rows()) fail(ErrorCode::InvalidArgument, "least_squares: row mismatch");
    if (x.cols() == 0) return Eigen::MatrixXd::Zero(0, y.cols());
    if (x.rows() < x.cols()) fail(ErrorCode::SingularRegressorMatrix, "more regressors than observations");
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(x);
    if (qr.rank() < x.cols())
        fail(ErrorCode::SingularRegressorMatrix,
             "regressor matrix has rank " + std::to_string(qr.rank()) + " < " + std::to_string(x.cols()));
    return qr.solve(y);
}

Eigen::MatrixXd partial_out(const Eigen::MatrixXd& x, const Eigen::MatrixXd& y) {
    if (x.cols() == 0) return y;
    return y - x * least_squares(x, y);
}

double quantile_sorted(std::span<const double> sorted, double prob) {
    if (sorted.empty()) fail(ErrorCode::InvalidArgument, "quantile of empty sample");
    if (!(prob >= 0.0 && prob <= 1.0)) fail(ErrorCode::InvalidArgument, "quantile probability outside [0,1]");
    const double h = static_cast<double>(sorted.size() - 1) * prob;
    const auto lo = static_cast<std::size_t>(std::floor(h));
    const auto hi = std::min(lo + 1, sorted.size() - 1);
    return sorted[lo] + (h - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
}

double quantile(std::span<const double> values, double prob) {
    std::vector<double> sorted(values.begin(), values.end());
    std::sort(sorted.begin(), sorted.end());
    return quantile_sorted(sorted, prob);
}

double chi_squared_quantile(double df, double prob) {
    if (!(df > 0.0) || !(prob > 0.0 && prob < 1.0)) fail(ErrorCode::InvalidArgument, "chi-square quantile domain");
    return boost::math::quantile(boost::math::chi_squared_distribution<double>(df), prob);
}

double normal_quantile(double prob) {
    if (!(prob > 0.0 && prob < 1.0)) fail(ErrorCode::InvalidArgument, "normal quantile domain");
    return boost::math::quantile(boost::math::normal_distribution<double>(), prob);
}

}  // namespace cvarkit
