#pragma once

#include "cvarkit/ident.hpp"
#include "cvarkit/irf.hpp"
#include "cvarkit/panel.hpp"

#include <Eigen/Dense>

#include <array>
#include <string>
#include <vector>

namespace cvarkit {

/// Error-correction model dX_t = c + alpha beta' X_{t-1} + sum_{l<p} A_l dX_{t-l} + e_t,
/// estimated by Johansen reduced-rank regression.
struct VecmModel {
    int p = 1;
    int r = 0;
    bool has_constant = true;
    Eigen::MatrixXd alpha;                   // n x r
    Eigen::MatrixXd beta;                    // n x r, normalization rows hold the identity
    Eigen::MatrixXd pi;                      // n x n
    std::vector<Eigen::MatrixXd> short_run;  // A_1..A_{p-1}
    Eigen::VectorXd constant;
    Eigen::MatrixXd residuals;  // n_obs_effective x n
    Eigen::MatrixXd sigma;
    Eigen::VectorXd eigenvalues;  // descending, in [0, 1)
    std::vector<int> normalization_rows;
    double loglik = 0.0;
    Eigen::Index n_obs_effective = 0;

    Eigen::MatrixXd sample;  // levels, T x n
    std::vector<std::string> labels;
    std::vector<SeriesRole> roles;

    [[nodiscard]] Eigen::Index dim() const noexcept { return sample.cols(); }

    /// Equivalent level VAR(p): B_1 = I + Pi + A_1, B_l = A_l - A_{l-1}, B_p = -A_{p-1}.
    [[nodiscard]] std::vector<Eigen::MatrixXd> level_coefficients() const;

    /// Regressors of the final short-run regression: [beta' X_{t-1}, dX lags, 1].
    [[nodiscard]] Eigen::MatrixXd regressors() const;
};

[[nodiscard]] VecmModel fit_vecm(const Eigen::MatrixXd& levels, int p, int r, bool constant = true);
[[nodiscard]] VecmModel estimate_vecm(const TimeSeriesPanel& panel, int p, int r, bool constant = true);

enum class CriticalTable {
    Standard,  // asymptotic trace critical values, unrestricted constant
    Paper,     // the six values of the disaster application's table (n = 5 or 6)
};

struct RankTestResult {
    std::vector<double> trace_stats;      // null rank r = 0..n-1
    std::vector<double> critical_values;  // matching
    int selected_rank = 0;
    double level = 0.95;
    CriticalTable table = CriticalTable::Standard;
    Eigen::VectorXd eigenvalues;
    Eigen::Index n_obs_effective = 0;
};

/// Trace statistic -T_eff sum_{i>r} ln(1 - lambda_i) for every null rank r;
/// selected rank is the first r that is not rejected (n if all are).
[[nodiscard]] RankTestResult johansen_trace_test(const Eigen::MatrixXd& levels, int p, double level = 0.95,
                                                 CriticalTable table = CriticalTable::Standard, bool constant = true);
[[nodiscard]] RankTestResult johansen_trace_test(const TimeSeriesPanel& panel, int p, double level = 0.95,
                                                 CriticalTable table = CriticalTable::Standard, bool constant = true);

/// Trace critical value for n - r common trends (1..12) at level 0.90/0.95/0.99.
[[nodiscard]] double trace_critical_value(int common_trends, double level);
[[nodiscard]] const std::array<double, 6>& paper_trace_critical_values();

/// Basis of the orthogonal complement of the column space (trailing QR columns).
[[nodiscard]] Eigen::MatrixXd orthogonal_complement(const Eigen::MatrixXd& a);

struct GrangerRepresentation {
    Eigen::MatrixXd c;    // long-run impact beta_perp (alpha_perp' Psi beta_perp)^-1 alpha_perp'
    Eigen::MatrixXd psi;  // I - sum A_l
    double determinant = 0.0;
    bool condition_ok = false;
};

/// Never throws on a failed rank condition; `c` is left zero in that case.
[[nodiscard]] GrangerRepresentation granger_representation(const VecmModel& model);

/// Long-run impact matrix; throws GrangerConditionViolated when the condition fails.
[[nodiscard]] Eigen::MatrixXd long_run_impact(const VecmModel& model);

/// MA coefficients of the levels (they converge to C for stable transitory dynamics).
[[nodiscard]] std::vector<Eigen::MatrixXd> level_ma_coefficients(const VecmModel& model, int horizons);

[[nodiscard]] StructuralIdentification cholesky_identify(const VecmModel& model, std::vector<int> ordering = {});

struct VecmIrf {
    IrfBundle level;
    IrfBundle difference;
};

[[nodiscard]] VecmIrf vecm_structural_irf(const VecmModel& model, const StructuralIdentification& ident, int horizons,
                                          int shock = 0);

}  // namespace cvarkit
