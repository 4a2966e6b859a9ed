#pragma once

#include "cvarkit/panel.hpp"

#include <Eigen/Dense>

#include <string>
#include <utility>
#include <vector>

namespace cvarkit {

/// Reduced-form VAR(p): x_t = c + sum_l A_l x_{t-l} + e_t, fit by
/// equation-by-equation least squares with ML covariance scaling.
struct VarModel {
    int p = 1;
    bool has_intercept = true;
    std::vector<Eigen::MatrixXd> coefficients;  // A_1..A_p, each n x n
    Eigen::VectorXd intercept;                  // zero when !has_intercept
    Eigen::MatrixXd residuals;                  // n_obs_effective x n
    Eigen::MatrixXd sigma;                      // E'E / n_obs_effective
    double loglik = 0.0;
    Eigen::Index n_obs_effective = 0;
    Eigen::Index first_row = 0;  // row of `sample` matching residuals.row(0)

    // Estimation sample (kept for bootstrap re-simulation) and series metadata.
    Eigen::MatrixXd sample;
    std::vector<std::string> labels;
    std::vector<SeriesRole> roles;

    [[nodiscard]] Eigen::Index dim() const noexcept { return sample.cols(); }

    /// c + sum_l A_l x_{t-l} for every effective row.
    [[nodiscard]] Eigen::MatrixXd fitted() const { return sample.bottomRows(n_obs_effective) - residuals; }

    /// Design rows [1, x_{t-1}, ..., x_{t-p}] matching the residuals.
    [[nodiscard]] Eigen::MatrixXd regressors() const;

    /// Number of freely estimated mean parameters, n * (n p + intercept).
    [[nodiscard]] int mean_parameter_count() const;
};

/// Fits a VAR on the rows of `data`; the dependent sample is rows
/// [first_row, T). `first_row` < 0 means p. Requires T - first_row >= n p + 2.
[[nodiscard]] VarModel fit_var(const Eigen::MatrixXd& data, int p, bool intercept = true,
                               Eigen::Index first_row = -1);

[[nodiscard]] VarModel estimate_var(const TimeSeriesPanel& panel, int p, bool intercept = true);

/// Gaussian log-likelihood at the ML covariance.
[[nodiscard]] double gaussian_loglik(const Eigen::MatrixXd& sigma, Eigen::Index n_obs);

struct LagSelection {
    int p_star = 1;
    std::vector<std::pair<int, double>> bic_table;  // (p, BIC(p)) for p = 1..p_max
};

/// BIC(p) = -2 loglik + n (n p + intercept) ln(T_eff), all fits on rows p_max..T-1.
/// Ties resolve toward the smaller p.
[[nodiscard]] LagSelection select_lag_bic(const TimeSeriesPanel& panel, int p_max, bool intercept = true);
[[nodiscard]] LagSelection select_lag_bic(const Eigen::MatrixXd& data, int p_max, bool intercept = true);

/// Moving-average coefficients Phi_0 = I, Phi_h = sum_{l<=min(h,p)} A_l Phi_{h-l}.
[[nodiscard]] std::vector<Eigen::MatrixXd> ma_coefficients(const std::vector<Eigen::MatrixXd>& lags, int horizons);
[[nodiscard]] std::vector<Eigen::MatrixXd> reduced_irf(const VarModel& model, int horizons);

[[nodiscard]] Eigen::MatrixXd companion_matrix(const std::vector<Eigen::MatrixXd>& lags);

/// Largest modulus among companion-matrix eigenvalues.
[[nodiscard]] double spectral_radius(const std::vector<Eigen::MatrixXd>& lags);

/// Recursively builds x_t = c + sum_l A_l x_{t-l} + e_t. The first p rows of the
/// result are `initial`; the remaining rows are driven by `innovations`.
[[nodiscard]] Eigen::MatrixXd simulate_var(const std::vector<Eigen::MatrixXd>& lags, const Eigen::VectorXd& intercept,
                                           const Eigen::MatrixXd& initial, const Eigen::MatrixXd& innovations);

}  // namespace cvarkit
