#include "cvarkit/estimands.hpp"

#include "cvarkit/cvar.hpp"
#include "cvarkit/error.hpp"
#include "cvarkit/ident.hpp"
#include "cvarkit/numerics.hpp"
#include "cvarkit/parallel.hpp"
#include "cvarkit/random.hpp"

#include <boost/math/distributions/normal.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>

namespace cvarkit {

namespace {

constexpr double kDiffStep = 1e-4;

double derivative(const DgpSpec& spec, double w) {
    return (spec.m(w + kDiffStep) - spec.m(w - kDiffStep)) / (2.0 * kDiffStep);
}

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

struct Moments {
    double mean = 0.0;
    double variance = 0.0;
};

Moments sample_moments(std::span<const double> x) {
    if (x.size() < 2) fail(ErrorCode::DegenerateSample, "need at least two observations");
    const double n = static_cast<double>(x.size());
    const double mean = std::accumulate(x.begin(), x.end(), 0.0) / n;
    double m2 = 0.0, m4 = 0.0;
    for (double v : x) {
        if (!std::isfinite(v)) fail(ErrorCode::InvalidArgument, "sample contains non-finite values");
        const double d = (v - mean) * (v - mean);
        m2 += d;
        m4 += d * d;
    }
    m2 /= n;
    m4 /= n;
    if (!std::isfinite(m2) || !std::isfinite(m4)) fail(ErrorCode::InfiniteVariance, "sample moments overflow");
    if (!(m2 > 0.0)) fail(ErrorCode::DegenerateSample, "sample has zero variance");
    return {mean, m2};
}

std::vector<double> midpoints(double lo, double hi, int count, double& width) {
    std::vector<double> grid(static_cast<std::size_t>(count));
    width = (hi - lo) / count;
    for (int i = 0; i < count; ++i) grid[static_cast<std::size_t>(i)] = lo + (i + 0.5) * width;
    return grid;
}

// Composite Simpson on [a, b] with an even number of panels.
template <class F>
double simpson(F&& f, double a, double b, int panels) {
    if (panels % 2 != 0) ++panels;
    const double h = (b - a) / panels;
    double s = f(a) + f(b);
    for (int i = 1; i < panels; ++i) s += (i % 2 ? 4.0 : 2.0) * f(a + i * h);
    return s * h / 3.0;
}

// Standard-normal latent, shifted toward the outcome innovation `xi` when selection is on.
double latent(double z, double xi, double s) {
    return (z + s * xi) / std::sqrt(1.0 + s * s);
}

double truncated_exponential(double u, double d_lower, double d_upper, double scale) {
    const double mass = std::isfinite(d_upper) ? -std::expm1(-(d_upper - d_lower) / scale) : 1.0;
    return d_lower - scale * std::log1p(-u * mass);
}

double draw_policy(const DgpSpec& spec, Engine& eng, double xi) {
    std::normal_distribution<double> normal;
    const double nu = latent(normal(eng), xi, spec.selection_bias);
    switch (spec.policy) {
        case PolicyDist::Bernoulli: {
            const double cut = normal_quantile(1.0 - spec.pi);
            return nu > cut ? 1.0 : 0.0;
        }
        case PolicyDist::Gaussian:
            return spec.sigma * nu;
        case PolicyDist::NonNegative: {
            std::uniform_real_distribution<double> unif;
            const double u = unif(eng);
            const bool positive = spec.zero_prob <= 0.0 || nu > normal_quantile(spec.zero_prob);
            return positive ? truncated_exponential(u, spec.d_lower, spec.d_upper, spec.scale) : 0.0;
        }
    }
    return 0.0;
}

void validate(const DgpSpec& spec) {
    if (spec.T < 100) fail(ErrorCode::InvalidArgument, "DGP needs T >= 100");
    if (!(spec.noise_sd >= 0.0)) fail(ErrorCode::InvalidArgument, "noise_sd must be >= 0");
    if (!(spec.heterogeneity >= 0.0)) fail(ErrorCode::InvalidArgument, "heterogeneity must be >= 0");
    if (!(spec.selection_bias >= 0.0)) fail(ErrorCode::InvalidArgument, "selection_bias must be >= 0");
    if (spec.outcomes < 1) fail(ErrorCode::InvalidArgument, "outcomes must be >= 1");
    if (spec.response == ResponseShape::Custom && !spec.custom)
        fail(ErrorCode::InvalidArgument, "custom response selected without a function");
    switch (spec.policy) {
        case PolicyDist::Bernoulli:
            if (!(spec.pi > 0.0 && spec.pi < 1.0)) fail(ErrorCode::InvalidArgument, "pi must lie in (0, 1)");
            break;
        case PolicyDist::Gaussian:
            if (!(spec.sigma > 0.0)) fail(ErrorCode::InvalidArgument, "sigma must be > 0");
            break;
        case PolicyDist::NonNegative:
            if (!(spec.zero_prob >= 0.0 && spec.zero_prob < 1.0)) fail(ErrorCode::InvalidArgument, "zero_prob must lie in [0, 1)");
            if (!(spec.d_lower > 0.0)) fail(ErrorCode::InvalidArgument, "d_lower must be > 0");
            if (!(spec.d_upper > spec.d_lower)) fail(ErrorCode::InvalidArgument, "d_upper must exceed d_lower");
            if (!(spec.scale > 0.0)) fail(ErrorCode::InvalidArgument, "scale must be > 0");
            break;
    }
    const bool bounded_ar = spec.layout == DgpLayout::DirectControl ? (spec.ar >= 0.0 && spec.ar <= 1.0)
                                                                    : (spec.ar >= 0.0 && spec.ar < 1.0);
    if (!bounded_ar) fail(ErrorCode::InvalidArgument, "ar outside the admissible range for this layout");
}

}  // namespace

double CausalWeightProfile::integral_q() const {
    return std::accumulate(q.begin(), q.end(), 0.0) * cell_width;
}

double CausalWeightProfile::integral_q1() const {
    return std::accumulate(q1.begin(), q1.end(), 0.0) * q1_cell_width;
}

CausalWeightProfile gaussian_acrt_weights(double mean, double sd, int grid_size) {
    if (!(sd > 0.0) || !std::isfinite(sd)) fail(ErrorCode::DegenerateSample, "standard deviation must be positive");
    if (grid_size < 2) fail(ErrorCode::InvalidArgument, "grid_size must be >= 2");
    const boost::math::normal_distribution<double> std_normal;
    CausalWeightProfile out;
    out.mean = mean;
    out.variance = sd * sd;
    out.grid = midpoints(mean - 8.0 * sd, mean + 8.0 * sd, grid_size, out.cell_width);
    for (double w : out.grid) {
        const double z = (w - mean) / sd;
        const double cdf = boost::math::cdf(std_normal, z);
        const double theta = mean * cdf - sd * boost::math::pdf(std_normal, z);
        out.cdf.push_back(cdf);
        out.theta.push_back(theta);
        out.q.push_back((mean * cdf - theta) / out.variance);
    }
    return out;
}

CausalWeightProfile acrt_weights(std::span<const double> sample, int grid_size) {
    if (grid_size < 2) fail(ErrorCode::InvalidArgument, "grid_size must be >= 2");
    const auto mom = sample_moments(sample);
    std::vector<double> sorted(sample.begin(), sample.end());
    std::sort(sorted.begin(), sorted.end());
    const double n = static_cast<double>(sorted.size());

    CausalWeightProfile out;
    out.mean = mom.mean;
    out.variance = mom.variance;
    out.grid = midpoints(sorted.front(), sorted.back(), grid_size, out.cell_width);
    std::size_t idx = 0;
    double partial = 0.0;
    for (double w : out.grid) {
        while (idx < sorted.size() && sorted[idx] <= w) partial += sorted[idx++];
        const double cdf = static_cast<double>(idx) / n;
        const double theta = partial / n;
        out.cdf.push_back(cdf);
        out.theta.push_back(theta);
        out.q.push_back((mom.mean * cdf - theta) / mom.variance);
    }
    return out;
}

CausalWeightProfile nonneg_weights(std::span<const double> sample, int grid_size) {
    if (grid_size < 2) fail(ErrorCode::InvalidArgument, "grid_size must be >= 2");
    if (sample.empty()) fail(ErrorCode::NoPositiveMass, "empty sample");
    for (double v : sample)
        if (v < 0.0) fail(ErrorCode::InvalidArgument, "sample has negative values");
    std::vector<double> sorted(sample.begin(), sample.end());
    std::sort(sorted.begin(), sorted.end());
    if (!(sorted.back() > 0.0)) fail(ErrorCode::NoPositiveMass, "sample has no positive values");

    auto out = acrt_weights(sample, grid_size);
    const double n = static_cast<double>(sorted.size());
    const auto first_pos = std::upper_bound(sorted.begin(), sorted.end(), 0.0) - sorted.begin();
    out.d_lower = sorted[static_cast<std::size_t>(first_pos)];
    out.d_upper = sorted.back();

    double pos_sum = 0.0;
    for (auto i = static_cast<std::size_t>(first_pos); i < sorted.size(); ++i) pos_sum += sorted[i];
    const double pos_count = n - static_cast<double>(first_pos);
    out.q0 = (pos_sum / n - out.mean * pos_count / n) * out.d_lower / out.variance;

    if (out.d_upper > out.d_lower) {
        out.q1_grid = midpoints(out.d_lower, out.d_upper, grid_size, out.q1_cell_width);
    } else {
        out.q1_grid = {out.d_lower};
        out.q1_cell_width = 0.0;
    }
    // Tail sums over values >= w, walking the grid from the top.
    std::vector<double> tail_sum(out.q1_grid.size()), tail_count(out.q1_grid.size());
    auto idx = sorted.size();
    double s = 0.0;
    for (auto g = out.q1_grid.size(); g-- > 0;) {
        while (idx > 0 && sorted[idx - 1] >= out.q1_grid[g]) s += sorted[--idx];
        tail_sum[g] = s;
        tail_count[g] = static_cast<double>(sorted.size() - idx);
    }
    for (std::size_t g = 0; g < out.q1_grid.size(); ++g)
        out.q1.push_back((tail_sum[g] / n - out.mean * tail_count[g] / n) / out.variance);
    return out;
}

ResidualRegression regress_residuals(const VarModel& model, const Eigen::MatrixXd& policies) {
    if (policies.rows() != model.sample.rows())
        fail(ErrorCode::InvalidArgument, "policies must have one row per sample row");
    const auto t_eff = model.n_obs_effective;
    const Eigen::MatrixXd w = policies.bottomRows(t_eff);
    ResidualRegression out;
    out.gamma.resize(model.residuals.cols(), w.cols());
    const double band = 2.0 / std::sqrt(static_cast<double>(t_eff));
    for (Eigen::Index k = 0; k < w.cols(); ++k) {
        const Eigen::VectorXd wc = w.col(k).array() - w.col(k).mean();
        const double ss = wc.squaredNorm();
        if (!(ss > 0.0)) fail(ErrorCode::SingularRegressorMatrix, "policy " + std::to_string(k + 1) + " is constant");
        const double rho = wc.head(t_eff - 1).dot(wc.tail(t_eff - 1)) / ss;
        if (std::abs(rho) >= band)
            out.warnings.push_back("policy " + std::to_string(k + 1) + " has first-order autocorrelation " + fmt(rho));
        for (Eigen::Index j = 0; j < model.residuals.cols(); ++j) out.gamma(j, k) = wc.dot(model.residuals.col(j)) / ss;
    }
    return out;
}

double DgpSpec::m(double w) const {
    switch (response) {
        case ResponseShape::Linear: return effect * w;
        case ResponseShape::Square: return effect * w * w;
        case ResponseShape::Cube: return effect * w * w * w;
        case ResponseShape::Custom: return custom(w);
    }
    return 0.0;
}

double acr_monte_carlo(const DgpSpec& spec, int draws) {
    if (spec.policy == PolicyDist::Bernoulli) fail(ErrorCode::InvalidArgument, "ACR needs a continuous policy");
    auto plain = spec;
    plain.selection_bias = 0.0;
    auto eng = make_engine(spec.seed, 0xAC4ULL);
    double sum = 0.0;
    for (int i = 0; i < draws; ++i) sum += derivative(spec, draw_policy(plain, eng, 0.0));
    return sum / draws;
}

double weighted_acr_truth(const DgpSpec& spec) {
    if (spec.policy != PolicyDist::Gaussian) fail(ErrorCode::InvalidArgument, "weighted ACR truth needs a Gaussian policy");
    const auto weights = gaussian_acrt_weights(0.0, spec.sigma, 2001);
    double total = 0.0;
    for (std::size_t i = 0; i < weights.grid.size(); ++i) total += weights.q[i] * derivative(spec, weights.grid[i]);
    return total * weights.cell_width;
}

double mixture_truth(const DgpSpec& spec) {
    if (spec.policy != PolicyDist::NonNegative) fail(ErrorCode::InvalidArgument, "mixture truth needs a NonNegative policy");
    const double lo = spec.d_lower;
    const double hi = std::isfinite(spec.d_upper) ? spec.d_upper : lo + 60.0 * spec.scale;
    const double mass = std::isfinite(spec.d_upper) ? -std::expm1(-(spec.d_upper - lo) / spec.scale) : 1.0;
    const double pos = 1.0 - spec.zero_prob;
    auto density = [&](double x) { return std::exp(-(x - lo) / spec.scale) / (spec.scale * mass); };

    constexpr int kPanels = 200000;
    const double ex = simpson([&](double x) { return x * density(x); }, lo, hi, kPanels);
    const double ex2 = simpson([&](double x) { return x * x * density(x); }, lo, hi, kPanels);
    const double mu = pos * ex;
    const double var = pos * ex2 - mu * mu;

    // G(w) = P(W>0) E[(X - mu) 1{X >= w}], accumulated from the top by trapezoids.
    const double h = (hi - lo) / kPanels;
    std::vector<double> g(kPanels + 1, 0.0);
    auto integrand = [&](double x) { return (x - mu) * density(x); };
    for (int i = kPanels - 1; i >= 0; --i)
        g[static_cast<std::size_t>(i)] = g[static_cast<std::size_t>(i) + 1] + 0.5 * h * (integrand(lo + i * h) + integrand(lo + (i + 1) * h));
    double continuous_part = 0.0;
    for (int i = 0; i <= kPanels; ++i) {
        const double wt = (i == 0 || i == kPanels) ? 0.5 : 1.0;
        continuous_part += wt * pos * g[static_cast<std::size_t>(i)] * derivative(spec, lo + i * h);
    }
    continuous_part *= h / var;
    const double q0 = pos * (ex - mu) * lo / var;
    return continuous_part + q0 * (spec.m(lo) - spec.m(0.0)) / lo;
}

namespace {

DgpSample simulate(const DgpSpec& spec, bool population_truth) {
    validate(spec);
    auto eng = make_engine(spec.seed, 0);
    std::normal_distribution<double> normal;
    const auto t_len = static_cast<Eigen::Index>(spec.T);

    Eigen::VectorXd w(t_len), zeta(t_len), xi(t_len);
    for (Eigen::Index t = 0; t < t_len; ++t) {
        xi(t) = normal(eng);
        w(t) = draw_policy(spec, eng, xi(t));
        zeta(t) = spec.heterogeneity * normal(eng);
    }
    auto effect_at = [&](Eigen::Index t) { return spec.m(w(t)) + w(t) * zeta(t); };

    Eigen::MatrixXd data;
    std::vector<std::string> labels{"W"};
    std::vector<SeriesRole> roles{{RoleKind::Policy, 1}};
    switch (spec.layout) {
        case DgpLayout::Plain: {
            data.resize(t_len, 2);
            double e = 0.0;
            for (Eigen::Index t = 0; t < t_len; ++t) {
                e = spec.ar * e + spec.noise_sd * xi(t);
                data(t, 0) = w(t);
                data(t, 1) = e + effect_at(t);
            }
            labels.push_back("Y");
            roles.push_back({RoleKind::TreatedOutcome, 1});
            break;
        }
        case DgpLayout::DirectControl: {
            data.resize(t_len, 3);
            double c = 0.0;
            for (Eigen::Index t = 0; t < t_len; ++t) {
                c = spec.ar * c + spec.noise_sd * normal(eng);
                data(t, 0) = w(t);
                data(t, 1) = c + spec.noise_sd * xi(t) + effect_at(t);
                data(t, 2) = c + spec.noise_sd * normal(eng);
            }
            labels.insert(labels.end(), {"Y1", "Y0"});
            roles.push_back({RoleKind::TreatedOutcome, 1});
            roles.push_back({RoleKind::ControlOutcome, 1});
            break;
        }
        case DgpLayout::Cointegrated: {
            const int j_count = spec.outcomes;
            data.resize(t_len, 1 + 2 * j_count);
            std::vector<double> c(static_cast<std::size_t>(j_count), 0.0), u(static_cast<std::size_t>(j_count), 0.0);
            for (Eigen::Index t = 0; t < t_len; ++t) {
                data(t, 0) = w(t);
                for (int j = 0; j < j_count; ++j) {
                    auto& cj = c[static_cast<std::size_t>(j)];
                    auto& uj = u[static_cast<std::size_t>(j)];
                    cj += spec.noise_sd * normal(eng);
                    uj = spec.ar * uj + spec.noise_sd * (j == 0 ? xi(t) : normal(eng));
                    data(t, 1 + j) = cj + uj + effect_at(t);
                    data(t, 1 + j_count + j) = cj;
                }
            }
            for (int j = 1; j <= j_count; ++j) {
                labels.push_back("Y1_" + std::to_string(j));
                roles.push_back({RoleKind::TreatedOutcome, j});
            }
            for (int j = 1; j <= j_count; ++j) {
                labels.push_back("Y0_" + std::to_string(j));
                roles.push_back({RoleKind::ControlOutcome, j});
            }
            break;
        }
    }

    GroundTruth truth;
    const double jump = spec.m(1.0) - spec.m(0.0);
    truth.ate = jump + zeta.mean();
    double treated_zeta = 0.0;
    for (Eigen::Index t = 0; t < t_len; ++t) {
        const bool treated = spec.policy == PolicyDist::Bernoulli ? w(t) == 1.0 : w(t) > 0.0;
        if (treated) {
            ++truth.treated_count;
            treated_zeta += zeta(t);
        }
    }
    truth.att = jump + (truth.treated_count > 0 ? treated_zeta / truth.treated_count : 0.0);
    if (population_truth) {
        if (spec.policy != PolicyDist::Bernoulli) truth.acr = acr_monte_carlo(spec) + zeta.mean();
        if (spec.policy == PolicyDist::Gaussian) truth.weighted_acr = weighted_acr_truth(spec) + zeta.mean();
        if (spec.policy == PolicyDist::NonNegative) truth.mixture = mixture_truth(spec) + zeta.mean();
    }
    return {TimeSeriesPanel(std::move(data), std::move(labels), std::move(roles)), truth};
}

}  // namespace

DgpSample simulate_dgp(const DgpSpec& spec) { return simulate(spec, true); }

std::string to_string(Theorem t) {
    switch (t) {
        case Theorem::T1: return "T1";
        case Theorem::T2: return "T2";
        case Theorem::T3: return "T3";
        case Theorem::T4: return "T4";
        case Theorem::T5: return "T5";
        case Theorem::T8: return "T8";
        case Theorem::T9: return "T9";
    }
    return "?";
}

Theorem parse_theorem(const std::string& text) {
    for (auto t : {Theorem::T1, Theorem::T2, Theorem::T3, Theorem::T4, Theorem::T5, Theorem::T8, Theorem::T9})
        if (text == to_string(t)) return t;
    fail(ErrorCode::InvalidArgument, "unknown theorem `" + text + "` (expected T1, T2, T3, T4, T5, T8 or T9)");
}

VerificationReport verify_theorem(Theorem theorem, DgpSpec spec, int replications) {
    if (replications < 2) fail(ErrorCode::InvalidArgument, "need at least two replications");

    PolicyDist expected = PolicyDist::Bernoulli;
    VerificationReport report;
    report.theorem = theorem;
    switch (theorem) {
        case Theorem::T1:
            report.estimand = "ATE";
            spec.layout = DgpLayout::Plain;
            break;
        case Theorem::T2:
            report.estimand = "ACRT";
            expected = PolicyDist::Gaussian;
            spec.layout = DgpLayout::Plain;
            break;
        case Theorem::T3:
            report.estimand = "ACR";
            expected = PolicyDist::Gaussian;
            spec.layout = DgpLayout::Plain;
            break;
        case Theorem::T4:
            report.estimand = "ATE+ACR";
            expected = PolicyDist::NonNegative;
            spec.layout = DgpLayout::Plain;
            break;
        case Theorem::T5:
            report.estimand = spec.continuous ? "ACR" : "ATT";
            expected = spec.continuous ? PolicyDist::Gaussian : PolicyDist::Bernoulli;
            spec.layout = DgpLayout::DirectControl;
            break;
        case Theorem::T8:
            report.estimand = "ATT";
            spec.layout = DgpLayout::Cointegrated;
            break;
        case Theorem::T9:
            report.estimand = "ACR";
            expected = PolicyDist::Gaussian;
            spec.layout = DgpLayout::Cointegrated;
            break;
    }
    if (spec.policy != expected)
        fail(ErrorCode::SpecTheoremMismatch, to_string(theorem) + " requires a " +
                                                 (expected == PolicyDist::Bernoulli ? "bernoulli"
                                                  : expected == PolicyDist::Gaussian ? "gaussian"
                                                                                     : "nonnegative") +
                                                 " policy");
    validate(spec);
    switch (spec.layout) {
        case DgpLayout::Plain: report.pipeline = "VAR(1), Cholesky with the policy first"; break;
        case DgpLayout::DirectControl: report.pipeline = "simple-difference CVAR, VAR(1)"; break;
        case DgpLayout::Cointegrated:
            report.pipeline = "VECM CVAR, p=1, r=" + std::to_string(1 + spec.outcomes);
            break;
    }
    if (theorem == Theorem::T5 && spec.continuous)
        report.notes.push_back("continuous policy: ACR read off the simple-difference pipeline");
    if (theorem == Theorem::T2) report.notes.push_back("Gaussian policy: the ACRT weights equal the policy density");

    report.replications = replications;
    report.T = spec.T;
    report.seed = spec.seed;
    report.records.resize(static_cast<std::size_t>(replications));
    std::vector<double> delta_ar(static_cast<std::size_t>(replications), 0.0);

    // Population truths shared by every replication.
    double shared_truth = 0.0;
    if (theorem == Theorem::T2) shared_truth = weighted_acr_truth(spec);
    if (theorem == Theorem::T3 || theorem == Theorem::T9 || (theorem == Theorem::T5 && spec.continuous))
        shared_truth = acr_monte_carlo(spec);
    if (theorem == Theorem::T4) shared_truth = mixture_truth(spec);

    parallel_for(static_cast<std::size_t>(replications), [&](std::size_t r) {
        auto rep = spec;
        rep.seed = derive_seed(spec.seed, r);
        // Truth fields that need only sample quantities are computed here; the
        // quadrature and Monte Carlo ones come from shared_truth.
        const DgpSample sample = simulate(rep, false);

        double gamma = 0.0;
        switch (rep.layout) {
            case DgpLayout::Plain: {
                const auto model = estimate_var(sample.panel, 1, true);
                gamma = cholesky_identify(model).gamma(0, 0);
                break;
            }
            case DgpLayout::DirectControl: {
                const auto fit = simple_difference_cvar(sample.panel, spec_from_roles(sample.panel, CvarMode::SimpleDifference, 1));
                gamma = fit.ident.gamma(0, 0);
                delta_ar[r] = fit.diagnostics.delta_ar_proxy.front();
                break;
            }
            case DgpLayout::Cointegrated: {
                const auto fit = vecm_cvar(sample.panel, spec_from_roles(sample.panel, CvarMode::Vecm, 1, 1 + rep.outcomes), 0);
                gamma = fit.ident.gamma(0, 0);
                break;
            }
        }
        double truth = 0.0;
        switch (theorem) {
            case Theorem::T1: truth = sample.truth.ate; break;
            case Theorem::T5: truth = spec.continuous ? shared_truth : sample.truth.att; break;
            case Theorem::T8: truth = sample.truth.att; break;
            default: truth = shared_truth; break;
        }
        report.records[r] = {static_cast<int>(r), rep.seed, gamma, truth, gamma - truth};
    });

    const double n = replications;
    double sum_g = 0.0, sum_t = 0.0;
    for (const auto& rec : report.records) {
        sum_g += rec.gamma_hat;
        sum_t += rec.truth;
    }
    report.mean_gamma = sum_g / n;
    report.truth = sum_t / n;
    report.bias = report.mean_gamma - report.truth;
    double ss = 0.0;
    for (const auto& rec : report.records) ss += (rec.gamma_hat - report.mean_gamma) * (rec.gamma_hat - report.mean_gamma);
    report.mc_se = std::sqrt(ss / (n - 1.0)) / std::sqrt(n);
    report.tolerance = std::max(0.05 * std::abs(report.truth), 3.0 * report.mc_se);
    report.pass = std::abs(report.bias) < report.tolerance;

    if (theorem == Theorem::T4) {
        report.extras["acr"] = acr_monte_carlo(spec);
        const double lo = spec.d_lower;
        report.extras["m_jump_over_d_lower"] = (spec.m(lo) - spec.m(0.0)) / lo;
        // Population weights from a large draw of the policy law.
        auto big = spec;
        big.selection_bias = 0.0;
        auto eng = make_engine(spec.seed, 0x4E4ULL);
        std::vector<double> draws(200000);
        for (auto& d : draws) d = draw_policy(big, eng, 0.0);
        const auto weights = nonneg_weights(draws, 2001);
        report.extras["q0"] = weights.q0;
        report.extras["integral_q1"] = weights.integral_q1();
    }
    if (theorem == Theorem::T5)
        report.extras["delta_ar_proxy_mean"] = std::accumulate(delta_ar.begin(), delta_ar.end(), 0.0) / n;
    return report;
}

std::string serialize(const VerificationReport& report) {
    std::string out;
    auto line = [&](const std::string& key, const std::string& value) { out += key + "=" + value + "\n"; };
    line("theorem", to_string(report.theorem));
    line("estimand", report.estimand);
    line("pipeline", report.pipeline);
    line("T", std::to_string(report.T));
    line("replications", std::to_string(report.replications));
    line("seed", std::to_string(report.seed));
    line("truth", fmt(report.truth));
    line("mean_gamma", fmt(report.mean_gamma));
    line("bias", fmt(report.bias));
    line("mc_se", fmt(report.mc_se));
    line("tolerance", fmt(report.tolerance));
    line("result", report.pass ? "PASS" : "FAIL");
    for (const auto& [k, v] : report.extras) line("extra." + k, fmt(v));
    for (const auto& note : report.notes) line("note", note);
    out += "replication,seed,gamma_hat,truth,bias\n";
    for (const auto& rec : report.records)
        out += std::to_string(rec.index) + "," + std::to_string(rec.seed) + "," + fmt(rec.gamma_hat) + "," +
               fmt(rec.truth) + "," + fmt(rec.bias) + "\n";
    return out;
}

}  // namespace cvarkit
