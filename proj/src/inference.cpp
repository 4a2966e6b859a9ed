#include "cvarkit/inference.hpp"

#include "cvarkit/error.hpp"
#include "cvarkit/ident.hpp"
#include "cvarkit/numerics.hpp"
#include "cvarkit/parallel.hpp"
#include "cvarkit/random.hpp"

#include <boost/math/distributions/chi_squared.hpp>

#include <algorithm>
#include <cmath>
#include <optional>

namespace cvarkit {

namespace {

void check_options(const BootstrapOptions& options) {
    if (options.replications < 199) fail(ErrorCode::InvalidArgument, "bootstrap needs at least 199 replications");
    if (!(options.level > 0.0 && options.level < 1.0)) fail(ErrorCode::InvalidArgument, "level must lie in (0, 1)");
}

Eigen::MatrixXd flip_signs(const Eigen::MatrixXd& residuals, Engine& eng) {
    Eigen::MatrixXd out = residuals;
    for (Eigen::Index t = 0; t < out.rows(); ++t) out.row(t) *= rademacher(eng);
    return out;
}

// Percentile bands over the successful replications, cell by cell.
void attach_bands(IrfBundle& bundle, const std::vector<std::optional<Eigen::MatrixXd>>& draws, double level) {
    const auto rows = bundle.point.rows();
    const auto cols = bundle.point.cols();
    bundle.lower.resize(rows, cols);
    bundle.upper.resize(rows, cols);
    std::vector<double> cell;
    cell.reserve(draws.size());
    for (Eigen::Index i = 0; i < rows; ++i) {
        for (Eigen::Index j = 0; j < cols; ++j) {
            cell.clear();
            for (const auto& d : draws)
                if (d) cell.push_back((*d)(i, j));
            std::sort(cell.begin(), cell.end());
            bundle.lower(i, j) = quantile_sorted(cell, 0.5 * (1.0 - level));
            bundle.upper(i, j) = quantile_sorted(cell, 0.5 * (1.0 + level));
        }
    }
    bundle.level = level;
}

template <class Draw>
int run_replications(const BootstrapOptions& options, std::vector<std::optional<Eigen::MatrixXd>>& level_draws,
                     std::vector<std::optional<Eigen::MatrixXd>>* diff_draws, Draw&& draw) {
    const auto b = static_cast<std::size_t>(options.replications);
    level_draws.assign(b, std::nullopt);
    if (diff_draws) diff_draws->assign(b, std::nullopt);
    parallel_for(
        b,
        [&](std::size_t i) {
            auto eng = Engine(derive_seed(options.seed, i));
            try {
                draw(eng, i);
            } catch (const Error& e) {
                if (!is_numerical(e.code()) && e.code() != ErrorCode::TooShort) throw;
                level_draws[i].reset();
                if (diff_draws) (*diff_draws)[i].reset();
            }
        },
        options.threads);
    const auto failed = static_cast<int>(std::count(level_draws.begin(), level_draws.end(), std::nullopt));
    if (failed > options.max_failure_share * options.replications || failed == options.replications)
        fail(ErrorCode::BootstrapDegenerate, std::to_string(failed) + " of " + std::to_string(options.replications) +
                                                 " bootstrap replications failed");
    return failed;
}

}  // namespace

IrfBundle wild_bootstrap_irf(const VarModel& model, const std::vector<int>& ordering, int horizons, int shock,
                             const BootstrapOptions& options) {
    check_options(options);
    const auto ident = cholesky_identify(model, ordering);
    IrfBundle bundle = structural_irf(model, ident, horizons, shock);

    const Eigen::MatrixXd initial = model.sample.middleRows(model.first_row - model.p, model.p);
    const auto policies = policy_columns_of(model.roles);
    std::vector<std::optional<Eigen::MatrixXd>> draws;
    const int failed = run_replications(options, draws, nullptr, [&](Engine& eng, std::size_t i) {
        const auto star = simulate_var(model.coefficients, model.intercept, initial, flip_signs(model.residuals, eng));
        auto refit = fit_var(star, model.p, model.has_intercept);
        refit.roles = model.roles;
        const auto id = cholesky_identify(refit.sigma, policies, ordering);
        draws[i] = structural_irf(refit, id, horizons, shock).point;
    });
    attach_bands(bundle, draws, options.level);
    bundle.replications = options.replications;
    bundle.skipped = failed;
    return bundle;
}

VecmIrf wild_bootstrap_irf(const VecmModel& model, const std::vector<int>& ordering, int horizons, int shock,
                           const BootstrapOptions& options) {
    check_options(options);
    const auto ident = cholesky_identify(model, ordering);
    VecmIrf out = vecm_structural_irf(model, ident, horizons, shock);

    const auto lags = model.level_coefficients();
    const Eigen::MatrixXd initial = model.sample.topRows(model.p);
    const auto policies = policy_columns_of(model.roles);
    std::vector<std::optional<Eigen::MatrixXd>> level_draws, diff_draws;
    const int failed = run_replications(options, level_draws, &diff_draws, [&](Engine& eng, std::size_t i) {
        const auto star = simulate_var(lags, model.constant, initial, flip_signs(model.residuals, eng));
        auto refit = fit_vecm(star, model.p, model.r, model.has_constant);
        refit.roles = model.roles;
        const auto id = cholesky_identify(refit.sigma, policies, ordering);
        auto irf = vecm_structural_irf(refit, id, horizons, shock);
        level_draws[i] = std::move(irf.level.point);
        diff_draws[i] = std::move(irf.difference.point);
    });
    attach_bands(out.level, level_draws, options.level);
    attach_bands(out.difference, diff_draws, options.level);
    out.level.replications = out.difference.replications = options.replications;
    out.level.skipped = out.difference.skipped = failed;
    return out;
}

std::array<double, 3> bg_critical_values(int df) {
    if (df < 1) fail(ErrorCode::InvalidArgument, "degrees of freedom must be >= 1");
    return {chi_squared_quantile(df, 0.90), chi_squared_quantile(df, 0.95), chi_squared_quantile(df, 0.99)};
}

BgTestResult breusch_godfrey(const Eigen::MatrixXd& residuals, const Eigen::MatrixXd& regressors, int h_lags) {
    if (h_lags < 1) fail(ErrorCode::InvalidArgument, "h_lags must be >= 1");
    if (residuals.rows() != regressors.rows()) fail(ErrorCode::InvalidArgument, "residual and regressor rows differ");
    const auto t_eff = residuals.rows();
    const auto n = residuals.cols();
    const auto k = regressors.cols() + h_lags;
    if (t_eff < k + 2)
        fail(ErrorCode::TooFewObservations, "auxiliary regression needs " + std::to_string(k + 2) + " rows, have " +
                                                std::to_string(t_eff));

    BgTestResult out;
    out.h_lags = h_lags;
    out.df = static_cast<int>(n) * h_lags;
    out.n_obs = t_eff;
    Eigen::MatrixXd aux(t_eff, k);
    aux.leftCols(regressors.cols()) = regressors;
    for (Eigen::Index i = 0; i < n; ++i) {
        const Eigen::VectorXd e = residuals.col(i);
        for (int l = 1; l <= h_lags; ++l) {
            auto col = aux.col(regressors.cols() + l - 1);
            col.head(std::min<Eigen::Index>(l, t_eff)).setZero();
            if (t_eff > l) col.tail(t_eff - l) = e.head(t_eff - l);
        }
        const Eigen::VectorXd resid = partial_out(aux, e);
        const double sst = (e.array() - e.mean()).matrix().squaredNorm();
        if (!(sst > 0.0)) continue;
        const double r2 = std::clamp(1.0 - resid.squaredNorm() / sst, 0.0, 1.0);
        out.statistic += static_cast<double>(t_eff) * r2;
    }
    out.critical_values = bg_critical_values(out.df);
    for (std::size_t i = 0; i < 3; ++i) out.reject[i] = out.statistic > out.critical_values[i];
    out.p_value = boost::math::cdf(boost::math::complement(boost::math::chi_squared_distribution<double>(out.df), out.statistic));
    return out;
}

BgTestResult breusch_godfrey(const VecmModel& model, int h_lags) {
    return breusch_godfrey(model.residuals, model.regressors(), h_lags);
}

BgTestResult breusch_godfrey(const VarModel& model, int h_lags) {
    return breusch_godfrey(model.residuals, model.regressors(), h_lags);
}

}  // namespace cvarkit
