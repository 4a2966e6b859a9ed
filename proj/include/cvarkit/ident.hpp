#pragma once

#include "cvarkit/irf.hpp"
#include "cvarkit/var.hpp"

#include <Eigen/Dense>

#include <vector>

namespace cvarkit {

/// Recursive (Cholesky) identification normalized to a unit policy innovation.
struct StructuralIdentification {
    std::vector<int> ordering;         // ordering[pos] = original series index
    std::vector<int> policy_columns;   // original indices of the policy series
    std::vector<int> outcome_columns;  // every non-policy series, original order
    Eigen::MatrixXd chol_factor;       // lower triangular, O O' = permuted Omega
    Eigen::MatrixXd impact;            // n x K, original order; impact(policy_k, k) == 1
    Eigen::MatrixXd gamma;             // outcome_columns.size() x K

    /// gamma entry for a series given by its original column index.
    [[nodiscard]] double gamma_of(int series, int shock = 0) const;
};

/// Lower Cholesky factor; throws NotPositiveDefinite if a pivot is <= pivot_tol times the largest diagonal entry.
[[nodiscard]] Eigen::MatrixXd cholesky_lower(const Eigen::MatrixXd& sym, double pivot_tol = 1e-12);

/// `ordering` empty means identity. Each policy's impact column is column pos(k)
/// of O divided by O(pos(k), pos(k)), mapped back to original order.
[[nodiscard]] StructuralIdentification cholesky_identify(const Eigen::MatrixXd& sigma, std::vector<int> policy_columns,
                                                         std::vector<int> ordering = {});

/// Policies taken from the model's roles (column 0 if none are labelled).
[[nodiscard]] StructuralIdentification cholesky_identify(const VarModel& model, std::vector<int> ordering = {});

[[nodiscard]] std::vector<int> policy_columns_of(const std::vector<SeriesRole>& roles);

[[nodiscard]] IrfBundle structural_irf(const VarModel& model, const StructuralIdentification& ident, int horizons,
                                       int shock = 0);

}  // namespace cvarkit
