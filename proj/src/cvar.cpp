#include "cvarkit/cvar.hpp"

#include "cvarkit/error.hpp"
#include "cvarkit/numerics.hpp"
#include "cvarkit/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <optional>

namespace cvarkit {

namespace {

bool is_binary(const Eigen::VectorXd& v) {
    return (v.array() == 0.0 || v.array() == 1.0).all();
}

int policy_column(const TimeSeriesPanel& panel, int policy_k) {
    const auto& roles = panel.roles();
    for (std::size_t i = 0; i < roles.size(); ++i)
        if (roles[i].kind == RoleKind::Policy && roles[i].index == policy_k) return static_cast<int>(i);
    fail(ErrorCode::InvalidArgument, "panel has no policy with index " + std::to_string(policy_k));
}

void check_columns(const TimeSeriesPanel& panel, const std::vector<int>& cols, RoleKind kind, const char* what) {
    for (int c : cols) {
        if (c < 0 || c >= panel.cols()) fail(ErrorCode::InvalidArgument, std::string(what) + " column out of range");
        if (panel.roles()[static_cast<std::size_t>(c)].kind != kind)
            fail(ErrorCode::InvalidRoles, std::string(what) + " column `" + panel.labels()[static_cast<std::size_t>(c)] +
                                              "` has role " + to_string(panel.roles()[static_cast<std::size_t>(c)]));
    }
}

}  // namespace

CvarSpec spec_from_roles(const TimeSeriesPanel& panel, CvarMode mode, int p, int r) {
    CvarSpec spec;
    spec.mode = mode;
    spec.p = p;
    spec.r = r;
    spec.policy_columns = panel.columns_with(RoleKind::Policy);
    spec.treated_columns = panel.columns_with(RoleKind::TreatedOutcome);
    const auto controls = panel.columns_with(RoleKind::ControlOutcome);
    if (mode == CvarMode::SimpleDifference) {
        for (int t : spec.treated_columns) {
            const int j = panel.roles()[static_cast<std::size_t>(t)].index;
            for (int c : controls)
                if (panel.roles()[static_cast<std::size_t>(c)].index == j) spec.control_columns.push_back(c);
        }
    } else {
        spec.control_columns = controls;
    }
    return spec;
}

TimeSeriesPanel dummy_policy_threshold(const TimeSeriesPanel& panel, int policy_k, double threshold) {
    const int col = policy_column(panel, policy_k);
    const Eigen::VectorXd x = panel.values().col(col);
    if (x.maxCoeff() == x.minCoeff()) fail(ErrorCode::ConstantPolicy, "policy `" + panel.labels()[static_cast<std::size_t>(col)] + "` is constant");
    const Eigen::VectorXd dummy = (x.array() > threshold).cast<double>();
    return panel.with_column(col, dummy);
}

TimeSeriesPanel dummy_policy_transform(const TimeSeriesPanel& panel, int policy_k, double quantile_level) {
    if (!(quantile_level > 0.0 && quantile_level < 1.0)) fail(ErrorCode::InvalidArgument, "quantile must lie in (0, 1)");
    const int col = policy_column(panel, policy_k);
    const Eigen::VectorXd x = panel.values().col(col);
    if (x.maxCoeff() == x.minCoeff()) fail(ErrorCode::ConstantPolicy, "policy `" + panel.labels()[static_cast<std::size_t>(col)] + "` is constant");
    const double threshold = quantile(std::span<const double>(x.data(), static_cast<std::size_t>(x.size())), quantile_level);
    return dummy_policy_threshold(panel, policy_k, threshold);
}

CvarDiagnostics delta_ar_diagnostics(const VarModel& model, const std::vector<int>& policy_columns,
                                     const std::vector<int>& outcome_columns) {
    if (policy_columns.empty()) fail(ErrorCode::InvalidArgument, "no policy column");
    const Eigen::MatrixXd fitted = model.fitted();
    const Eigen::VectorXd w = model.sample.col(policy_columns.front()).tail(model.n_obs_effective);
    const Eigen::VectorXd full_w = model.sample.col(policy_columns.front());

    CvarDiagnostics diag;
    diag.binary_policy = is_binary(full_w);
    if (diag.binary_policy) {
        diag.treated_time_count = static_cast<int>((w.array() == 1.0).count());
        if (diag.treated_time_count == 0) fail(ErrorCode::NoTreatedPeriods, "the dummy policy never equals 1");
        const auto on = (w.array() == 1.0).count();
        const auto off = w.size() - on;
        for (int c : outcome_columns) {
            double sum_on = 0.0, sum_off = 0.0;
            for (Eigen::Index t = 0; t < w.size(); ++t) (w(t) == 1.0 ? sum_on : sum_off) += fitted(t, c);
            const double mean_on = on > 0 ? sum_on / static_cast<double>(on) : 0.0;
            const double mean_off = off > 0 ? sum_off / static_cast<double>(off) : 0.0;
            diag.delta_ar_proxy.push_back(mean_off - mean_on);
        }
    } else {
        diag.treated_time_count = static_cast<int>((w.array() > 0.0).count());
        const Eigen::VectorXd wc = w.array() - w.mean();
        const double var = wc.squaredNorm();
        for (int c : outcome_columns) {
            const Eigen::VectorXd f = fitted.col(c).array() - fitted.col(c).mean();
            diag.delta_ar_proxy.push_back(var > 0.0 ? -f.dot(wc) / var : 0.0);
        }
    }
    return diag;
}

SimpleDifferenceCvar simple_difference_cvar(const TimeSeriesPanel& panel, const CvarSpec& spec) {
    if (spec.mode != CvarMode::SimpleDifference) fail(ErrorCode::InvalidArgument, "spec mode is not SimpleDifference");
    if (spec.policy_columns.empty()) fail(ErrorCode::InvalidRoles, "at least one policy is required");
    if (spec.treated_columns.empty()) fail(ErrorCode::InvalidRoles, "at least one treated outcome is required");
    if (spec.treated_columns.size() != spec.control_columns.size())
        fail(ErrorCode::InvalidRoles, "the simple-difference CVAR needs exactly one control per treated outcome");
    check_columns(panel, spec.policy_columns, RoleKind::Policy, "policy");
    check_columns(panel, spec.treated_columns, RoleKind::TreatedOutcome, "treated");
    check_columns(panel, spec.control_columns, RoleKind::ControlOutcome, "control");

    const auto k = spec.policy_columns.size();
    const auto j = spec.treated_columns.size();
    Eigen::MatrixXd data(panel.rows(), static_cast<Eigen::Index>(k + j));
    std::vector<std::string> labels;
    std::vector<SeriesRole> roles;
    for (std::size_t i = 0; i < k; ++i) {
        const int c = spec.policy_columns[i];
        data.col(static_cast<Eigen::Index>(i)) = panel.values().col(c);
        labels.push_back(panel.labels()[static_cast<std::size_t>(c)]);
        roles.push_back(panel.roles()[static_cast<std::size_t>(c)]);
    }
    for (std::size_t i = 0; i < j; ++i) {
        const int t = spec.treated_columns[i];
        const int c = spec.control_columns[i];
        data.col(static_cast<Eigen::Index>(k + i)) = panel.values().col(t) - panel.values().col(c);
        labels.push_back(panel.labels()[static_cast<std::size_t>(t)] + "-" + panel.labels()[static_cast<std::size_t>(c)]);
        roles.push_back(panel.roles()[static_cast<std::size_t>(t)]);
    }

    const Eigen::VectorXd w = data.col(0).tail(std::max<Eigen::Index>(data.rows() - spec.p, 0));
    if (is_binary(data.col(0)) && (w.array() == 1.0).count() == 0)
        fail(ErrorCode::NoTreatedPeriods, "the dummy policy never equals 1 in the estimation sample");
    for (std::size_t i = 0; i < j; ++i) {
        const auto col = data.col(static_cast<Eigen::Index>(k + i));
        if (col.maxCoeff() == col.minCoeff())
            fail(ErrorCode::DegenerateSample, "outcome `" + labels[k + i] + "` is constant, so its effect is zero by construction");
    }

    SimpleDifferenceCvar out;
    out.panel = TimeSeriesPanel(std::move(data), std::move(labels), std::move(roles), panel.time_labels());
    out.model = estimate_var(out.panel, spec.p, spec.intercept);
    out.ident = cholesky_identify(out.model);
    out.diagnostics = delta_ar_diagnostics(out.model, out.ident.policy_columns, out.ident.outcome_columns);
    return out;
}

VecmCvar vecm_cvar(const TimeSeriesPanel& panel, const CvarSpec& spec, int horizons, int shock) {
    if (spec.mode != CvarMode::Vecm) fail(ErrorCode::InvalidArgument, "spec mode is not Vecm");
    if (spec.r < 1) fail(ErrorCode::RankOutOfBounds, "the VECM CVAR needs rank >= 1");
    if (spec.policy_columns.empty()) fail(ErrorCode::InvalidRoles, "at least one policy is required");
    check_columns(panel, spec.policy_columns, RoleKind::Policy, "policy");
    check_columns(panel, spec.treated_columns, RoleKind::TreatedOutcome, "treated");
    check_columns(panel, spec.control_columns, RoleKind::ControlOutcome, "control");

    std::vector<int> cols = spec.policy_columns;
    cols.insert(cols.end(), spec.treated_columns.begin(), spec.treated_columns.end());
    cols.insert(cols.end(), spec.control_columns.begin(), spec.control_columns.end());
    const auto system = panel.select(cols);

    VecmCvar out;
    out.model = estimate_vecm(system, spec.p, spec.r, true);
    out.ident = cholesky_identify(out.model);
    out.irf = vecm_structural_irf(out.model, out.ident, horizons, shock);
    return out;
}

ControlRanking rank_controls(const TimeSeriesPanel& base, const std::vector<ControlCandidate>& candidates, int p,
                             int target_rank, double level, CriticalTable table) {
    const auto treated = base.columns_with(RoleKind::TreatedOutcome);
    std::vector<int> keep = base.columns_with(RoleKind::Policy);
    keep.insert(keep.end(), treated.begin(), treated.end());
    const auto core = base.select(keep);

    std::vector<std::optional<ControlScore>> scores(candidates.size());
    std::vector<std::string> errors(candidates.size());
    parallel_for(candidates.size(), [&](std::size_t i) {
        const auto& cand = candidates[i];
        try {
            if (cand.values.rows() != core.rows())
                fail(ErrorCode::InvalidArgument, "candidate has " + std::to_string(cand.values.rows()) + " rows, base has " +
                                                     std::to_string(core.rows()));
            if (static_cast<Eigen::Index>(cand.labels.size()) != cand.values.cols())
                fail(ErrorCode::InvalidArgument, "candidate labels do not match its columns");
            Eigen::MatrixXd values(core.rows(), core.cols() + cand.values.cols());
            values << core.values(), cand.values;
            auto labels = core.labels();
            labels.insert(labels.end(), cand.labels.begin(), cand.labels.end());
            auto roles = core.roles();
            for (Eigen::Index c = 0; c < cand.values.cols(); ++c)
                roles.push_back({RoleKind::ControlOutcome, static_cast<int>(c) + 1});
            const TimeSeriesPanel system(values, labels, roles, core.time_labels());
            if (target_rank < 0 || target_rank >= system.cols())
                fail(ErrorCode::RankOutOfBounds, "target rank outside [0, n-1]");
            const auto test = johansen_trace_test(system, p, level, table);
            scores[i] = ControlScore{cand.name, test.trace_stats[static_cast<std::size_t>(target_rank)], test.selected_rank};
        } catch (const std::exception& e) {
            errors[i] = e.what();
        }
    });

    ControlRanking out;
    for (std::size_t i = 0; i < candidates.size(); ++i) {
        if (scores[i]) out.ranked.push_back(*scores[i]);
        else out.skipped.emplace_back(candidates[i].name, errors[i]);
    }
    std::stable_sort(out.ranked.begin(), out.ranked.end(),
                     [](const ControlScore& a, const ControlScore& b) { return a.trace_stat > b.trace_stat; });
    return out;
}

}  // namespace cvarkit
