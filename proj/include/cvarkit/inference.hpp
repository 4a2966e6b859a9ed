#pragma once

#include "cvarkit/irf.hpp"
#include "cvarkit/var.hpp"
#include "cvarkit/vecm.hpp"

#include <array>
#include <cstddef>
#include <cstdint>
#include <vector>

namespace cvarkit {

struct BootstrapOptions {
    int replications = 999;
    double level = 0.95;
    std::uint64_t seed = 0;
    std::size_t threads = 0;  // 0: thread_count()
    double max_failure_share = 0.02;
};

/// Rademacher wild bootstrap: each replication flips residual signs row-wise,
/// rebuilds the sample recursively from the fitted model and the original
/// initial rows, re-fits, re-identifies and recomputes the IRF. Bands are
/// type-7 percentiles at (1 - level)/2 and (1 + level)/2.
[[nodiscard]] IrfBundle wild_bootstrap_irf(const VarModel& model, const std::vector<int>& ordering, int horizons,
                                           int shock, const BootstrapOptions& options);

[[nodiscard]] VecmIrf wild_bootstrap_irf(const VecmModel& model, const std::vector<int>& ordering, int horizons,
                                         int shock, const BootstrapOptions& options);

struct BgTestResult {
    double statistic = 0.0;
    int df = 0;
    int h_lags = 0;
    Eigen::Index n_obs = 0;
    double p_value = 1.0;
    std::array<double, 3> levels{0.90, 0.95, 0.99};
    std::array<double, 3> critical_values{};
    std::array<bool, 3> reject{};
};

/// Chi-square critical values at 0.90/0.95/0.99 for `df`.
[[nodiscard]] std::array<double, 3> bg_critical_values(int df);

/// Per equation, regress the residual on the model's regressors and h own
/// lagged residuals (pre-sample lags set to zero); the statistic is the sum
/// of T_eff R^2 over equations, referred to chi-square(n h).
[[nodiscard]] BgTestResult breusch_godfrey(const VecmModel& model, int h_lags);
[[nodiscard]] BgTestResult breusch_godfrey(const VarModel& model, int h_lags);

/// Same test on an arbitrary residual / regressor pair (rows aligned).
[[nodiscard]] BgTestResult breusch_godfrey(const Eigen::MatrixXd& residuals, const Eigen::MatrixXd& regressors,
                                           int h_lags);

}  // namespace cvarkit
