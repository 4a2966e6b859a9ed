#include "cvarkit/vecm.hpp"

#include "cvarkit/error.hpp"
#include "cvarkit/numerics.hpp"
#include "cvarkit/var.hpp"

#include <cmath>
#include <numbers>

namespace cvarkit {

namespace {

// MacKinnon-Haug-Michelis trace critical values, unrestricted constant
// (same values as statsmodels' c_sjt(n, 0)). Row i is n - r = i + 1.
constexpr double kTraceCritical[12][3] = {
    {2.7055, 3.8415, 6.6349},         {13.4294, 15.4943, 19.9349},   {27.0669, 29.7961, 35.4628},
    {44.4929, 47.8545, 54.6815},      {65.8202, 69.8189, 77.8202},   {91.1090, 95.7542, 104.9637},
    {120.3673, 125.6185, 135.9825},   {153.6341, 159.5290, 171.0905}, {190.8714, 197.3772, 210.0366},
    {232.1030, 239.2468, 253.2526},   {277.3740, 285.1402, 300.2821}, {326.5354, 334.9795, 351.2150},
};

// Critical column printed next to the 5-variable LR table of the disaster
// application; rows are null ranks 0..5.
constexpr std::array<double, 6> kPaperCritical = {97.18, 71.88, 49.65, 32.00, 17.85, 7.52};

struct ReducedRank {
    Eigen::MatrixXd z0, z1, z2;  // dX_t, X_{t-1}, [dX lags, 1]
    Eigen::MatrixXd s11;
    Eigen::MatrixXd s01;
    Eigen::VectorXd eigenvalues;  // descending
    Eigen::MatrixXd vectors;      // V' S11 V = I, columns match eigenvalues
    Eigen::Index t_eff = 0;
};

ReducedRank reduced_rank_problem(const Eigen::MatrixXd& levels, int p, bool constant) {
    if (p < 1) fail(ErrorCode::InvalidArgument, "lag order must be >= 1");
    const auto n = levels.cols();
    const auto t = levels.rows();
    if (n < 1) fail(ErrorCode::InvalidArgument, "VECM needs at least one series");
    const auto t_eff = t - p;
    if (t_eff < n * p + 2)
        fail(ErrorCode::TooShort, "VECM with p=" + std::to_string(p) + " needs " + std::to_string(n * p + 2 + p) +
                                      " rows, have " + std::to_string(t));

    const Eigen::MatrixXd dx = levels.bottomRows(t - 1) - levels.topRows(t - 1);  // row s is dX_{s+1}
    ReducedRank rr;
    rr.t_eff = t_eff;
    rr.z0 = dx.bottomRows(t_eff);
    rr.z1 = levels.middleRows(p - 1, t_eff);
    rr.z2.resize(t_eff, n * (p - 1) + (constant ? 1 : 0));
    for (int l = 1; l < p; ++l) rr.z2.middleCols(n * (l - 1), n) = dx.middleRows(p - 1 - l, t_eff);
    if (constant) rr.z2.rightCols(1).setOnes();

    const Eigen::MatrixXd r0 = partial_out(rr.z2, rr.z0);
    const Eigen::MatrixXd r1 = partial_out(rr.z2, rr.z1);
    const double scale = 1.0 / static_cast<double>(t_eff);
    const Eigen::MatrixXd s00 = scale * r0.transpose() * r0;
    rr.s01 = scale * r0.transpose() * r1;
    rr.s11 = scale * r1.transpose() * r1;

    const Eigen::LLT<Eigen::MatrixXd> l11(rr.s11);
    const Eigen::LLT<Eigen::MatrixXd> l00(s00);
    if (l11.info() != Eigen::Success || l11.matrixL().toDenseMatrix().diagonal().minCoeff() <= 1e-12 * std::sqrt(rr.s11.diagonal().maxCoeff()))
        fail(ErrorCode::SingularMomentMatrix, "S11 is not positive definite");
    if (l00.info() != Eigen::Success || l00.matrixL().toDenseMatrix().diagonal().minCoeff() <= 1e-12 * std::sqrt(s00.diagonal().maxCoeff()))
        fail(ErrorCode::SingularMomentMatrix, "S00 is not positive definite");

    // L^-1 S10 S00^-1 S01 L^-T with S11 = L L'.
    const Eigen::MatrixXd l_inv_s10 = l11.matrixL().solve(rr.s01.transpose());
    Eigen::MatrixXd m = l_inv_s10 * l00.solve(l_inv_s10.transpose());
    m = 0.5 * (m + m.transpose());
    const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(m);
    rr.eigenvalues = eig.eigenvalues().reverse();
    const Eigen::MatrixXd u = eig.eigenvectors().rowwise().reverse();
    rr.vectors = l11.matrixU().solve(u);
    for (Eigen::Index i = 0; i < rr.eigenvalues.size(); ++i)
        rr.eigenvalues(i) = std::clamp(rr.eigenvalues(i), 0.0, 1.0 - 1e-15);
    return rr;
}

// Phillips normalization: pick r rows (the leading ones when well conditioned)
// and rescale so those rows form the identity.
Eigen::MatrixXd normalize_beta(const Eigen::MatrixXd& raw, std::vector<int>& rows) {
    const auto r = raw.cols();
    rows.clear();
    if (r == 0) return raw;
    const Eigen::MatrixXd lead = raw.topRows(r);
    const Eigen::JacobiSVD<Eigen::MatrixXd> svd_lead(lead);
    const Eigen::JacobiSVD<Eigen::MatrixXd> svd_all(raw);
    const double smin = svd_lead.singularValues()(r - 1);
    if (smin > 1e-6 * svd_all.singularValues()(0)) {
        for (Eigen::Index i = 0; i < r; ++i) rows.push_back(static_cast<int>(i));
        return raw * lead.inverse();
    }
    const Eigen::FullPivLU<Eigen::MatrixXd> lu(raw);
    const Eigen::VectorXi perm = lu.permutationP().indices();
    // permutationP maps original row i to position perm(i); the pivot rows land at positions 0..r-1.
    std::vector<int> chosen(static_cast<std::size_t>(r));
    for (Eigen::Index i = 0; i < raw.rows(); ++i)
        if (perm(i) < r) chosen[static_cast<std::size_t>(perm(i))] = static_cast<int>(i);
    std::sort(chosen.begin(), chosen.end());
    Eigen::MatrixXd block(r, r);
    for (Eigen::Index i = 0; i < r; ++i) block.row(i) = raw.row(chosen[static_cast<std::size_t>(i)]);
    rows = chosen;
    return raw * block.inverse();
}

}  // namespace

std::vector<Eigen::MatrixXd> VecmModel::level_coefficients() const {
    const auto n = dim();
    std::vector<Eigen::MatrixXd> b(static_cast<std::size_t>(p), Eigen::MatrixXd::Zero(n, n));
    b[0] = Eigen::MatrixXd::Identity(n, n) + pi;
    for (int l = 1; l < p; ++l) {
        b[static_cast<std::size_t>(l - 1)] += short_run[static_cast<std::size_t>(l - 1)];
        b[static_cast<std::size_t>(l)] -= short_run[static_cast<std::size_t>(l - 1)];
    }
    return b;
}

Eigen::MatrixXd VecmModel::regressors() const {
    const auto n = dim();
    const auto t = sample.rows();
    const Eigen::MatrixXd dx = sample.bottomRows(t - 1) - sample.topRows(t - 1);
    const auto k = r + n * (p - 1) + (has_constant ? 1 : 0);
    Eigen::MatrixXd z(n_obs_effective, k);
    if (r > 0) z.leftCols(r) = sample.middleRows(p - 1, n_obs_effective) * beta;
    for (int l = 1; l < p; ++l) z.middleCols(r + n * (l - 1), n) = dx.middleRows(p - 1 - l, n_obs_effective);
    if (has_constant) z.rightCols(1).setOnes();
    return z;
}

VecmModel fit_vecm(const Eigen::MatrixXd& levels, int p, int r, bool constant) {
    const auto n = levels.cols();
    if (r < 0 || r > n) fail(ErrorCode::RankOutOfBounds, "rank " + std::to_string(r) + " outside [0, " + std::to_string(n) + "]");
    const auto rr = reduced_rank_problem(levels, p, constant);

    VecmModel model;
    model.p = p;
    model.r = r;
    model.has_constant = constant;
    model.eigenvalues = rr.eigenvalues;
    model.n_obs_effective = rr.t_eff;
    model.sample = levels;
    model.beta = normalize_beta(rr.vectors.leftCols(r), model.normalization_rows);
    if (r > 0) {
        const Eigen::MatrixXd bsb = model.beta.transpose() * rr.s11 * model.beta;
        model.alpha = rr.s01 * model.beta * bsb.inverse();
        model.pi = model.alpha * model.beta.transpose();
    } else {
        model.alpha = Eigen::MatrixXd::Zero(n, 0);
        model.pi = Eigen::MatrixXd::Zero(n, n);
    }

    const Eigen::MatrixXd target = rr.z0 - rr.z1 * model.pi.transpose();
    const Eigen::MatrixXd g = least_squares(rr.z2, target);  // rows: lag blocks then constant
    for (int l = 1; l < p; ++l) model.short_run.push_back(g.middleRows(n * (l - 1), n).transpose());
    model.constant = constant ? Eigen::VectorXd(g.bottomRows(1).transpose()) : Eigen::VectorXd::Zero(n);
    model.residuals = rr.z2.cols() > 0 ? Eigen::MatrixXd(target - rr.z2 * g) : target;
    model.sigma = model.residuals.transpose() * model.residuals / static_cast<double>(rr.t_eff);
    model.sigma = 0.5 * (model.sigma + model.sigma.transpose());
    model.loglik = gaussian_loglik(model.sigma, rr.t_eff);
    return model;
}

VecmModel estimate_vecm(const TimeSeriesPanel& panel, int p, int r, bool constant) {
    auto model = fit_vecm(panel.values(), p, r, constant);
    model.labels = panel.labels();
    model.roles = panel.roles();
    return model;
}

double trace_critical_value(int common_trends, double level) {
    if (common_trends < 1 || common_trends > 12)
        fail(ErrorCode::InvalidArgument, "trace critical values tabulated for 1..12 common trends");
    int col = -1;
    if (std::abs(level - 0.90) < 1e-9) col = 0;
    else if (std::abs(level - 0.95) < 1e-9) col = 1;
    else if (std::abs(level - 0.99) < 1e-9) col = 2;
    if (col < 0) fail(ErrorCode::InvalidArgument, "level must be 0.90, 0.95 or 0.99");
    return kTraceCritical[common_trends - 1][col];
}

const std::array<double, 6>& paper_trace_critical_values() { return kPaperCritical; }

RankTestResult johansen_trace_test(const Eigen::MatrixXd& levels, int p, double level, CriticalTable table,
                                   bool constant) {
    const auto n = static_cast<int>(levels.cols());
    if (n < 2) fail(ErrorCode::InvalidArgument, "rank test needs at least two series");
    if (table == CriticalTable::Paper && n != 5 && n != 6)
        fail(ErrorCode::InvalidArgument, "the application's critical column covers 5- or 6-variable systems only");
    const auto rr = reduced_rank_problem(levels, p, constant);

    RankTestResult out;
    out.level = level;
    out.table = table;
    out.eigenvalues = rr.eigenvalues;
    out.n_obs_effective = rr.t_eff;
    out.selected_rank = n;
    for (int r = 0; r < n; ++r) {
        double stat = 0.0;
        for (int i = r; i < n; ++i) stat -= std::log1p(-rr.eigenvalues(i));
        stat *= static_cast<double>(rr.t_eff);
        out.trace_stats.push_back(stat);
        const double crit = table == CriticalTable::Paper ? kPaperCritical[static_cast<std::size_t>(r)]
                                                          : trace_critical_value(n - r, level);
        out.critical_values.push_back(crit);
        if (out.selected_rank == n && stat < crit) out.selected_rank = r;
    }
    return out;
}

RankTestResult johansen_trace_test(const TimeSeriesPanel& panel, int p, double level, CriticalTable table,
                                   bool constant) {
    return johansen_trace_test(panel.values(), p, level, table, constant);
}

Eigen::MatrixXd orthogonal_complement(const Eigen::MatrixXd& a) {
    const auto n = a.rows();
    const auto r = a.cols();
    if (r == 0) return Eigen::MatrixXd::Identity(n, n);
    if (r >= n) return Eigen::MatrixXd::Zero(n, 0);
    const Eigen::HouseholderQR<Eigen::MatrixXd> qr(a);
    const Eigen::MatrixXd q = qr.householderQ();
    return q.rightCols(n - r);
}

GrangerRepresentation granger_representation(const VecmModel& model) {
    const auto n = model.dim();
    GrangerRepresentation out;
    out.psi = Eigen::MatrixXd::Identity(n, n);
    for (const auto& a : model.short_run) out.psi -= a;
    out.c = Eigen::MatrixXd::Zero(n, n);
    if (model.r >= n) {
        out.determinant = 1.0;
        out.condition_ok = true;
        return out;
    }
    const Eigen::MatrixXd a_perp = orthogonal_complement(model.alpha);
    const Eigen::MatrixXd b_perp = orthogonal_complement(model.beta);
    const Eigen::MatrixXd core = a_perp.transpose() * out.psi * b_perp;
    out.determinant = core.determinant();
    out.condition_ok = std::abs(out.determinant) > 1e-10;
    if (out.condition_ok) out.c = b_perp * core.inverse() * a_perp.transpose();
    return out;
}

Eigen::MatrixXd long_run_impact(const VecmModel& model) {
    auto g = granger_representation(model);
    if (!g.condition_ok)
        fail(ErrorCode::GrangerConditionViolated,
             "|alpha_perp' Psi beta_perp| = " + std::to_string(std::abs(g.determinant)) + " <= 1e-10");
    return g.c;
}

std::vector<Eigen::MatrixXd> level_ma_coefficients(const VecmModel& model, int horizons) {
    return ma_coefficients(model.level_coefficients(), horizons);
}

StructuralIdentification cholesky_identify(const VecmModel& model, std::vector<int> ordering) {
    return cholesky_identify(model.sigma, policy_columns_of(model.roles), std::move(ordering));
}

VecmIrf vecm_structural_irf(const VecmModel& model, const StructuralIdentification& ident, int horizons, int shock) {
    if (shock < 0 || shock >= ident.impact.cols()) fail(ErrorCode::InvalidArgument, "shock index out of range");
    if (ident.impact.rows() != model.dim()) fail(ErrorCode::InvalidArgument, "identification does not match model");
    VecmIrf out;
    out.level.horizons = out.difference.horizons = horizons;
    out.level.shock = out.difference.shock = shock;
    out.level.labels = out.difference.labels = model.labels;
    out.level.space = IrfSpace::Level;
    out.difference.space = IrfSpace::Difference;
    out.level.point = propagate(level_ma_coefficients(model, horizons), ident.impact.col(shock));
    out.difference.point = out.level.point;
    for (int h = horizons; h >= 1; --h) out.difference.point.row(h) -= out.level.point.row(h - 1);
    return out;
}

}  // namespace cvarkit
