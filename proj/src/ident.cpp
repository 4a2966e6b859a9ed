#include "cvarkit/ident.hpp"

#include "cvarkit/error.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace cvarkit {

Eigen::MatrixXd propagate(const std::vector<Eigen::MatrixXd>& ma, const Eigen::VectorXd& impact) {
    const auto n = impact.size();
    Eigen::MatrixXd out(static_cast<Eigen::Index>(ma.size()), n);
    for (std::size_t h = 0; h < ma.size(); ++h) out.row(static_cast<Eigen::Index>(h)) = (ma[h] * impact).transpose();
    return out;
}

Eigen::MatrixXd cholesky_lower(const Eigen::MatrixXd& sym, double pivot_tol) {
    const auto n = sym.rows();
    if (sym.cols() != n) fail(ErrorCode::InvalidArgument, "cholesky: matrix not square");
    Eigen::MatrixXd l = Eigen::MatrixXd::Zero(n, n);
    const double floor = pivot_tol * (n > 0 ? sym.diagonal().cwiseAbs().maxCoeff() : 0.0);
    for (Eigen::Index j = 0; j < n; ++j) {
        double pivot = sym(j, j) - l.row(j).head(j).squaredNorm();
        if (!(pivot > floor))
            fail(ErrorCode::NotPositiveDefinite, "pivot " + std::to_string(j) + " is " + std::to_string(pivot));
        l(j, j) = std::sqrt(pivot);
        for (Eigen::Index i = j + 1; i < n; ++i)
            l(i, j) = (sym(i, j) - l.row(i).head(j).dot(l.row(j).head(j))) / l(j, j);
    }
    return l;
}

std::vector<int> policy_columns_of(const std::vector<SeriesRole>& roles) {
    std::vector<int> cols;
    for (std::size_t i = 0; i < roles.size(); ++i)
        if (roles[i].kind == RoleKind::Policy) cols.push_back(static_cast<int>(i));
    if (cols.empty()) cols.push_back(0);
    return cols;
}

double StructuralIdentification::gamma_of(int series, int shock) const {
    const auto it = std::find(outcome_columns.begin(), outcome_columns.end(), series);
    if (it == outcome_columns.end() || shock < 0 || shock >= gamma.cols())
        fail(ErrorCode::InvalidArgument, "gamma_of: series is not an outcome or shock out of range");
    return gamma(it - outcome_columns.begin(), shock);
}

StructuralIdentification cholesky_identify(const Eigen::MatrixXd& sigma, std::vector<int> policy_columns,
                                           std::vector<int> ordering) {
    const auto n = static_cast<int>(sigma.rows());
    if (sigma.cols() != n) fail(ErrorCode::InvalidArgument, "covariance must be square");
    if (ordering.empty()) {
        ordering.resize(static_cast<std::size_t>(n));
        std::iota(ordering.begin(), ordering.end(), 0);
    }
    {
        auto sorted = ordering;
        std::sort(sorted.begin(), sorted.end());
        std::vector<int> expected(static_cast<std::size_t>(n));
        std::iota(expected.begin(), expected.end(), 0);
        if (sorted != expected) fail(ErrorCode::InvalidArgument, "ordering is not a permutation of the series");
    }
    if (policy_columns.empty()) fail(ErrorCode::InvalidArgument, "at least one policy column is required");
    for (int k : policy_columns)
        if (k < 0 || k >= n) fail(ErrorCode::InvalidArgument, "policy column out of range");

    std::vector<int> position(static_cast<std::size_t>(n));
    for (int pos = 0; pos < n; ++pos) position[static_cast<std::size_t>(ordering[static_cast<std::size_t>(pos)])] = pos;

    Eigen::MatrixXd permuted(n, n);
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) permuted(a, b) = sigma(ordering[static_cast<std::size_t>(a)], ordering[static_cast<std::size_t>(b)]);

    StructuralIdentification out;
    out.chol_factor = cholesky_lower(permuted);
    out.ordering = ordering;
    out.policy_columns = policy_columns;
    for (int i = 0; i < n; ++i)
        if (std::find(policy_columns.begin(), policy_columns.end(), i) == policy_columns.end()) out.outcome_columns.push_back(i);

    const auto k_count = static_cast<Eigen::Index>(policy_columns.size());
    out.impact.resize(n, k_count);
    for (Eigen::Index k = 0; k < k_count; ++k) {
        const int pk = position[static_cast<std::size_t>(policy_columns[static_cast<std::size_t>(k)])];
        const double scale = out.chol_factor(pk, pk);
        for (int i = 0; i < n; ++i) out.impact(i, k) = out.chol_factor(position[static_cast<std::size_t>(i)], pk) / scale;
    }
    out.gamma.resize(static_cast<Eigen::Index>(out.outcome_columns.size()), k_count);
    for (std::size_t r = 0; r < out.outcome_columns.size(); ++r)
        out.gamma.row(static_cast<Eigen::Index>(r)) = out.impact.row(out.outcome_columns[r]);
    return out;
}

StructuralIdentification cholesky_identify(const VarModel& model, std::vector<int> ordering) {
    return cholesky_identify(model.sigma, policy_columns_of(model.roles), std::move(ordering));
}

IrfBundle structural_irf(const VarModel& model, const StructuralIdentification& ident, int horizons, int shock) {
    if (shock < 0 || shock >= ident.impact.cols()) fail(ErrorCode::InvalidArgument, "shock index out of range");
    if (ident.impact.rows() != model.dim()) fail(ErrorCode::InvalidArgument, "identification does not match model");
    IrfBundle bundle;
    bundle.horizons = horizons;
    bundle.shock = shock;
    bundle.space = IrfSpace::Level;
    bundle.labels = model.labels;
    bundle.point = propagate(reduced_irf(model, horizons), ident.impact.col(shock));
    return bundle;
}

}  // namespace cvarkit
