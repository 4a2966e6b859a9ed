#include "cvarkit/var.hpp"

#include "cvarkit/error.hpp"
#include "cvarkit/numerics.hpp"

#include <cmath>
#include <limits>
#include <numbers>

namespace cvarkit {

namespace {

// Rows [first_row, T) of [1, x_{t-1}, ..., x_{t-p}].
Eigen::MatrixXd lagged_design(const Eigen::MatrixXd& data, int p, bool intercept, Eigen::Index first_row) {
    const auto n = data.cols();
    const auto rows = data.rows() - first_row;
    const Eigen::Index offset = intercept ? 1 : 0;
    Eigen::MatrixXd z(rows, offset + n * p);
    if (intercept) z.col(0).setOnes();
    for (int l = 1; l <= p; ++l) z.middleCols(offset + n * (l - 1), n) = data.middleRows(first_row - l, rows);
    return z;
}

}  // namespace

Eigen::MatrixXd VarModel::regressors() const {
    return lagged_design(sample, p, has_intercept, first_row);
}

int VarModel::mean_parameter_count() const {
    const auto n = static_cast<int>(dim());
    return n * (n * p + (has_intercept ? 1 : 0));
}

double gaussian_loglik(const Eigen::MatrixXd& sigma, Eigen::Index n_obs) {
    const auto n = static_cast<double>(sigma.rows());
    const double det = sigma.determinant();
    if (!(det > 0.0)) return std::numeric_limits<double>::infinity();
    return -0.5 * static_cast<double>(n_obs) * (n * std::log(2.0 * std::numbers::pi) + std::log(det) + n);
}

VarModel fit_var(const Eigen::MatrixXd& data, int p, bool intercept, Eigen::Index first_row) {
    if (p < 1) fail(ErrorCode::InvalidArgument, "lag order must be >= 1");
    if (first_row < 0) first_row = p;
    if (first_row < p) fail(ErrorCode::InvalidArgument, "first_row must be >= p");
    const auto n = data.cols();
    if (n < 1) fail(ErrorCode::InvalidArgument, "VAR needs at least one series");
    const auto t_eff = data.rows() - first_row;
    if (t_eff < n * p + 2)
        fail(ErrorCode::TooShort, "VAR(" + std::to_string(p) + ") on " + std::to_string(n) + " series needs " +
                                      std::to_string(n * p + 2) + " effective rows, have " + std::to_string(t_eff));

    const auto z = lagged_design(data, p, intercept, first_row);
    const Eigen::MatrixXd y = data.bottomRows(t_eff);
    const Eigen::MatrixXd b = least_squares(z, y);  // (offset + n p) x n

    VarModel model;
    model.p = p;
    model.has_intercept = intercept;
    const Eigen::Index offset = intercept ? 1 : 0;
    model.intercept = intercept ? Eigen::VectorXd(b.row(0).transpose()) : Eigen::VectorXd::Zero(n);
    for (int l = 1; l <= p; ++l) model.coefficients.push_back(b.middleRows(offset + n * (l - 1), n).transpose());
    model.residuals = y - z * b;
    model.n_obs_effective = t_eff;
    model.first_row = first_row;
    model.sigma = model.residuals.transpose() * model.residuals / static_cast<double>(t_eff);
    model.sigma = 0.5 * (model.sigma + model.sigma.transpose());
    model.loglik = gaussian_loglik(model.sigma, t_eff);
    model.sample = data;
    return model;
}

VarModel estimate_var(const TimeSeriesPanel& panel, int p, bool intercept) {
    auto model = fit_var(panel.values(), p, intercept);
    model.labels = panel.labels();
    model.roles = panel.roles();
    return model;
}

LagSelection select_lag_bic(const Eigen::MatrixXd& data, int p_max, bool intercept) {
    if (p_max < 1) fail(ErrorCode::InvalidArgument, "p_max must be >= 1");
    LagSelection out;
    double best = std::numeric_limits<double>::infinity();
    for (int p = 1; p <= p_max; ++p) {
        const auto fit = fit_var(data, p, intercept, p_max);
        const double bic = -2.0 * fit.loglik +
                           fit.mean_parameter_count() * std::log(static_cast<double>(fit.n_obs_effective));
        out.bic_table.emplace_back(p, bic);
        if (bic < best) {
            best = bic;
            out.p_star = p;
        }
    }
    return out;
}

LagSelection select_lag_bic(const TimeSeriesPanel& panel, int p_max, bool intercept) {
    return select_lag_bic(panel.values(), p_max, intercept);
}

std::vector<Eigen::MatrixXd> ma_coefficients(const std::vector<Eigen::MatrixXd>& lags, int horizons) {
    if (horizons < 0) fail(ErrorCode::InvalidArgument, "horizons must be >= 0");
    if (lags.empty()) fail(ErrorCode::InvalidArgument, "no lag matrices");
    const auto n = lags.front().rows();
    std::vector<Eigen::MatrixXd> phi;
    phi.reserve(static_cast<std::size_t>(horizons) + 1);
    phi.push_back(Eigen::MatrixXd::Identity(n, n));
    for (int h = 1; h <= horizons; ++h) {
        Eigen::MatrixXd next = Eigen::MatrixXd::Zero(n, n);
        const int top = std::min<int>(h, static_cast<int>(lags.size()));
        for (int l = 1; l <= top; ++l) next.noalias() += lags[static_cast<std::size_t>(l - 1)] * phi[static_cast<std::size_t>(h - l)];
        phi.push_back(std::move(next));
    }
    return phi;
}

std::vector<Eigen::MatrixXd> reduced_irf(const VarModel& model, int horizons) {
    return ma_coefficients(model.coefficients, horizons);
}

Eigen::MatrixXd companion_matrix(const std::vector<Eigen::MatrixXd>& lags) {
    if (lags.empty()) fail(ErrorCode::InvalidArgument, "no lag matrices");
    const auto n = lags.front().rows();
    const auto p = static_cast<Eigen::Index>(lags.size());
    Eigen::MatrixXd f = Eigen::MatrixXd::Zero(n * p, n * p);
    for (Eigen::Index l = 0; l < p; ++l) f.block(0, n * l, n, n) = lags[static_cast<std::size_t>(l)];
    if (p > 1) f.bottomLeftCorner(n * (p - 1), n * (p - 1)).setIdentity();
    return f;
}

double spectral_radius(const std::vector<Eigen::MatrixXd>& lags) {
    const Eigen::EigenSolver<Eigen::MatrixXd> solver(companion_matrix(lags), false);
    return solver.eigenvalues().cwiseAbs().maxCoeff();
}

Eigen::MatrixXd simulate_var(const std::vector<Eigen::MatrixXd>& lags, const Eigen::VectorXd& intercept,
                             const Eigen::MatrixXd& initial, const Eigen::MatrixXd& innovations) {
    const auto p = static_cast<Eigen::Index>(lags.size());
    const auto n = innovations.cols();
    if (initial.rows() != p || initial.cols() != n || intercept.size() != n)
        fail(ErrorCode::InvalidArgument, "simulate_var: dimension mismatch");
    Eigen::MatrixXd x(p + innovations.rows(), n);
    x.topRows(p) = initial;
    for (Eigen::Index t = p; t < x.rows(); ++t) {
        Eigen::VectorXd row = intercept + innovations.row(t - p).transpose();
        for (Eigen::Index l = 1; l <= p; ++l) row.noalias() += lags[static_cast<std::size_t>(l - 1)] * x.row(t - l).transpose();
        x.row(t) = row.transpose();
    }
    return x;
}

}  // namespace cvarkit
