#pragma once

#include "cvarkit/ident.hpp"
#include "cvarkit/panel.hpp"
#include "cvarkit/var.hpp"
#include "cvarkit/vecm.hpp"

#include <optional>
#include <string>
#include <vector>

namespace cvarkit {

enum class CvarMode { SimpleDifference, Vecm };

/// Column indices refer to the (canonically ordered) input panel.
struct CvarSpec {
    CvarMode mode = CvarMode::SimpleDifference;
    std::vector<int> policy_columns;
    std::vector<int> treated_columns;
    std::vector<int> control_columns;  // control_columns[i] pairs with treated_columns[i] in SimpleDifference
    int p = 1;
    int r = 1;
    bool intercept = true;
};

/// Spec filled from the panel's roles; controls are paired with treated outcomes by j.
[[nodiscard]] CvarSpec spec_from_roles(const TimeSeriesPanel& panel, CvarMode mode, int p = 1, int r = 1);

struct CvarDiagnostics {
    // Per outcome: mean fitted prediction when the policy is 0 minus when it is 1
    // (binary policy), or minus the fitted-on-policy slope (continuous policy).
    std::vector<double> delta_ar_proxy;
    int treated_time_count = 0;
    bool binary_policy = true;
};

/// Replaces policy k (1-based) by 1{value > type-7 quantile}.
[[nodiscard]] TimeSeriesPanel dummy_policy_transform(const TimeSeriesPanel& panel, int policy_k, double quantile);

/// Replaces policy k by 1{value > threshold}.
[[nodiscard]] TimeSeriesPanel dummy_policy_threshold(const TimeSeriesPanel& panel, int policy_k, double threshold);

struct SimpleDifferenceCvar {
    TimeSeriesPanel panel;  // policies followed by treated-minus-control outcomes
    VarModel model;
    StructuralIdentification ident;
    CvarDiagnostics diagnostics;
};

/// VAR on (W, Y^1_j - Y^0_j) with Cholesky identification, policy first.
[[nodiscard]] SimpleDifferenceCvar simple_difference_cvar(const TimeSeriesPanel& panel, const CvarSpec& spec);

[[nodiscard]] CvarDiagnostics delta_ar_diagnostics(const VarModel& model, const std::vector<int>& policy_columns,
                                                   const std::vector<int>& outcome_columns);

struct VecmCvar {
    VecmModel model;
    StructuralIdentification ident;
    VecmIrf irf;
};

/// Johansen fit at (spec.p, spec.r) on policies, treated and control outcomes,
/// Cholesky identification with the policies first, level and difference IRFs.
[[nodiscard]] VecmCvar vecm_cvar(const TimeSeriesPanel& panel, const CvarSpec& spec, int horizons = 40, int shock = 0);

/// Control series for one candidate unit; column i becomes control outcome i+1.
struct ControlCandidate {
    std::string name;
    Eigen::MatrixXd values;  // same rows as the base panel
    std::vector<std::string> labels;
};

struct ControlScore {
    std::string name;
    double trace_stat = 0.0;  // at the target rank
    int selected_rank = 0;
};

struct ControlRanking {
    std::vector<ControlScore> ranked;                             // descending trace statistic
    std::vector<std::pair<std::string, std::string>> skipped;  // (name, error message)
};

/// Joins each candidate to `base` (policies + treated outcomes), runs the trace
/// test and ranks candidates by the statistic at `target_rank`.
[[nodiscard]] ControlRanking rank_controls(const TimeSeriesPanel& base, const std::vector<ControlCandidate>& candidates,
                                           int p, int target_rank, double level = 0.95,
                                           CriticalTable table = CriticalTable::Standard);

}  // namespace cvarkit
