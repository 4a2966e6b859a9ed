#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

namespace cvarkit {

enum class RoleKind { Policy, TreatedOutcome, ControlOutcome };

/// Causal role of one series. `index` is the policy index k for policies and
/// the outcome index j for treated/control outcomes; both are 1-based.
struct SeriesRole {
    RoleKind kind = RoleKind::TreatedOutcome;
    int index = 1;

    friend bool operator==(const SeriesRole&, const SeriesRole&) = default;
};

[[nodiscard]] std::string to_string(const SeriesRole& role);

/// Column name -> role, as read from a `name = policy:k` configuration file.
using RoleMap = std::map<std::string, SeriesRole>;

[[nodiscard]] RoleMap parse_role_map(const std::string& text);
[[nodiscard]] RoleMap load_role_map(const std::filesystem::path& path);

/// T x n observation matrix with per-series labels and causal roles.
///
/// Columns are always ordered policies (by k), treated outcomes (by j), then
/// control outcomes (by j). Instances are immutable once built.
class TimeSeriesPanel {
public:
    TimeSeriesPanel() = default;

    /// Validates roles and data, then reorders columns into canonical order.
    /// `time_labels` may be empty, in which case rows are ticked 0..T-1.
    TimeSeriesPanel(Eigen::MatrixXd observations, std::vector<std::string> labels,
                    std::vector<SeriesRole> roles, std::vector<std::string> time_labels = {});

    [[nodiscard]] const Eigen::MatrixXd& values() const noexcept { return values_; }
    [[nodiscard]] const std::vector<std::string>& labels() const noexcept { return labels_; }
    [[nodiscard]] const std::vector<SeriesRole>& roles() const noexcept { return roles_; }
    [[nodiscard]] const std::vector<std::string>& time_labels() const noexcept { return time_labels_; }

    [[nodiscard]] Eigen::Index rows() const noexcept { return values_.rows(); }
    [[nodiscard]] Eigen::Index cols() const noexcept { return values_.cols(); }

    [[nodiscard]] std::vector<int> columns_with(RoleKind kind) const;
    [[nodiscard]] int policy_count() const;
    [[nodiscard]] int column_of(const std::string& label) const;  // -1 if absent

    /// New panel with a single column's values swapped out, roles unchanged.
    [[nodiscard]] TimeSeriesPanel with_column(int col, const Eigen::VectorXd& values) const;

    /// New panel restricted to the listed columns (re-canonicalized).
    [[nodiscard]] TimeSeriesPanel select(const std::vector<int>& cols) const;

private:
    Eigen::MatrixXd values_;
    std::vector<std::string> labels_;
    std::vector<SeriesRole> roles_;
    std::vector<std::string> time_labels_;
};

/// Reads a comma-separated file whose first column is time. Every other
/// column must be named in `roles`.
[[nodiscard]] TimeSeriesPanel load_panel(const std::filesystem::path& csv_path, const RoleMap& roles);
[[nodiscard]] TimeSeriesPanel parse_panel(const std::string& csv_text, const RoleMap& roles);

/// x_t - x_{t-1}; drops the first row.
[[nodiscard]] TimeSeriesPanel first_difference(const TimeSeriesPanel& panel);

/// Joins columns of two panels sharing the same number of rows.
[[nodiscard]] TimeSeriesPanel combine(const TimeSeriesPanel& left, const TimeSeriesPanel& right);

}  // namespace cvarkit
