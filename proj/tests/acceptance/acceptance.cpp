#include "cvarkit/cvar.hpp"
#include "cvarkit/estimands.hpp"
#include "cvarkit/ident.hpp"
#include "cvarkit/inference.hpp"
#include "cvarkit/random.hpp"
#include "cvarkit/var.hpp"
#include "cvarkit/vecm.hpp"
#include "sim.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

using namespace cvarkit;

namespace {

struct Outcome {
    bool pass = false;
    std::string detail;
};

std::string fmt(const char* f, double a = 0, double b = 0, double c = 0, double d = 0) {
    char buf[256];
    std::snprintf(buf, sizeof buf, f, a, b, c, d);
    return buf;
}

Outcome theorem_recovery() {
    Outcome out{true, ""};
    auto run = [&](Theorem th, DgpSpec s, const char* label) {
        const auto r = verify_theorem(th, s, 50);
        out.pass = out.pass && r.pass;
        out.detail += std::string(label) + fmt(" bias=%.4f tol=%.4f; ", r.bias, r.tolerance);
    };
    DgpSpec t1;
    t1.pi = 0.3;
    t1.T = 10000;
    t1.seed = 1;
    run(Theorem::T1, t1, "T1");

    DgpSpec t3;
    t3.policy = PolicyDist::Gaussian;
    t3.response = ResponseShape::Cube;
    t3.T = 20000;
    t3.seed = 3;
    run(Theorem::T3, t3, "T3 cube");

    DgpSpec t5;
    t5.pi = 0.3;
    t5.T = 10000;
    t5.seed = 5;
    run(Theorem::T5, t5, "T5");

    DgpSpec t8;
    t8.pi = 0.3;
    t8.outcomes = 2;
    t8.T = 10000;
    t8.seed = 8;
    run(Theorem::T8, t8, "T8");
    return out;
}

Outcome negative_control() {
    DgpSpec s;
    s.pi = 0.3;
    s.T = 10000;
    s.seed = 2;
    s.selection_bias = 1.0;
    const auto r = verify_theorem(Theorem::T1, s, 50);
    return {!r.pass, fmt("selection-biased T1 bias=%.4f tol=%.4f", r.bias, r.tolerance)};
}

Outcome weight_identities() {
    const auto g = gaussian_acrt_weights(0.0, 1.0);
    auto eng = make_engine(3, 0);
    std::exponential_distribution<double> ex(1.0);
    std::vector<double> sample(100000);
    for (auto& v : sample) v = ex(eng);
    const auto nn = nonneg_weights(sample);
    const double a = std::abs(g.integral_q() - 1.0);
    const double b = std::abs(nn.integral_q1() + nn.q0 - 1.0);
    return {a < 1e-6 && b < 1e-3, fmt("|int q - 1|=%.2e, |int q1 + q0 - 1|=%.2e", a, b)};
}

Outcome gaussian_collapse() {
    const auto w = gaussian_acrt_weights(0.0, 1.0);
    double worst = 0.0, q0 = 0.0;
    for (std::size_t i = 0; i < w.grid.size(); ++i) {
        const double x = w.grid[i];
        worst = std::max(worst, std::abs(w.q[i] - std::exp(-0.5 * x * x) / std::sqrt(2.0 * M_PI)));
        if (std::abs(x) < 1e-12) q0 = w.q[i];
    }
    // The empirical weights of a normal sample approach the same density at the sampling rate.
    auto eng = make_engine(4, 0);
    std::normal_distribution<double> z;
    std::vector<double> sample(100000);
    for (auto& v : sample) v = z(eng);
    const auto e = acrt_weights(sample);
    double empirical = 0.0;
    for (std::size_t i = 0; i < e.grid.size(); ++i)
        if (std::abs(e.grid[i]) < 3.0)
            empirical = std::max(empirical, std::abs(e.q[i] - std::exp(-0.5 * e.grid[i] * e.grid[i]) / std::sqrt(2.0 * M_PI)));
    return {worst < 1e-6 && std::abs(q0 - 0.39894) < 5e-6,
            fmt("max |q - phi|=%.2e, q(0)=%.5f, sample of 1e5 within |w|<3: %.2e", worst, q0, empirical)};
}

Outcome chi_square_criticals() {
    const double table[3][3] = {{9.24, 11.07, 15.09}, {15.99, 18.31, 23.21}, {22.31, 25.0, 30.58}};
    const int df[3] = {5, 10, 15};
    bool ok = true;
    std::string detail;
    for (int i = 0; i < 3; ++i) {
        const auto cv = bg_critical_values(df[i]);
        for (int j = 0; j < 3; ++j) {
            ok = ok && std::abs(std::round(cv[static_cast<std::size_t>(j)] * 100.0) / 100.0 - table[i][j]) < 1e-9;
            detail += fmt("%.2f ", cv[static_cast<std::size_t>(j)]);
        }
    }
    return {ok, detail};
}

Outcome rank_calibration() {
    const int runs = 200;
    const Eigen::Index n = 3;
    Eigen::MatrixXd a(3, 3);
    a << 0.5, 0.1, 0.0, 0.1, 0.4, 0.1, 0.0, 0.2, 0.3;
    int hits[3] = {0, 0, 0};
    for (int rep = 0; rep < runs; ++rep) {
        auto eng = make_engine(600, static_cast<std::uint64_t>(rep));
        Eigen::MatrixXd rw = cvk_test::random_walks(eng, 500, n);
        for (Eigen::Index t = 0; t < rw.rows(); ++t) rw.row(t).array() += 0.5 * static_cast<double>(t);
        if (johansen_trace_test(rw, 1).selected_rank == 0) ++hits[0];

        // Two drifting trends and a third series tied to their sum by a stationary AR(1) gap.
        Eigen::MatrixXd one = cvk_test::random_walks(eng, 500, n);
        for (Eigen::Index t = 0; t < one.rows(); ++t) one.row(t).array() += 0.5 * static_cast<double>(t);
        const Eigen::MatrixXd gap = cvk_test::simulate({Eigen::MatrixXd::Constant(1, 1, 0.5)}, Eigen::VectorXd::Zero(1),
                                                       cvk_test::gaussian(eng, 500, 1));
        one.col(2) = one.col(0) + one.col(1) + gap.col(0);
        if (johansen_trace_test(one, 1).selected_rank == 1) ++hits[1];

        const auto x = cvk_test::simulate({a}, Eigen::VectorXd::Zero(n), cvk_test::gaussian(eng, 550, n), 50);
        if (johansen_trace_test(x, 1).selected_rank == n) ++hits[2];
    }
    const bool ok = hits[0] >= 0.9 * runs && hits[1] >= 0.9 * runs && hits[2] >= 0.9 * runs;
    return {ok, fmt("selected r=0 %g/200, r=1 %g/200, r=n %g/200", hits[0], hits[1], hits[2])};
}

Outcome bootstrap_coverage() {
    const int runs = 200;
    Eigen::MatrixXd a(2, 2);
    a << 0.5, 0.1, 0.2, 0.3;
    const std::vector<int> horizons{1, 4, 8};
    const std::vector<int> order{0, 1};
    // Sigma = I, so the unit-normalized impact of the first shock is e1 and theta_h = A^h e1.
    int covered[3][2] = {};
    for (int rep = 0; rep < runs; ++rep) {
        auto eng = make_engine(700, static_cast<std::uint64_t>(rep));
        const auto x = cvk_test::simulate({a}, Eigen::VectorXd::Zero(2), cvk_test::gaussian(eng, 600, 2), 100);
        auto model = fit_var(x, 1);
        model.roles = {{RoleKind::Policy, 1}, {RoleKind::TreatedOutcome, 1}};
        BootstrapOptions opt;
        opt.replications = 999;
        opt.seed = 7000 + static_cast<std::uint64_t>(rep);
        const auto bands = wild_bootstrap_irf(model, order, 8, 0, opt);
        for (std::size_t k = 0; k < horizons.size(); ++k) {
            Eigen::VectorXd truth = Eigen::VectorXd::Unit(2, 0);
            for (int h = 0; h < horizons[k]; ++h) truth = a * truth;
            for (int s = 0; s < 2; ++s) {
                const int h = horizons[k];
                if (bands.lower(h, s) <= truth(s) && truth(s) <= bands.upper(h, s)) ++covered[k][s];
            }
        }
    }
    bool ok = true;
    std::string detail;
    for (std::size_t k = 0; k < horizons.size(); ++k)
        for (int s = 0; s < 2; ++s) {
            const double c = covered[k][s] / static_cast<double>(runs);
            ok = ok && c >= 0.88 && c <= 0.99;
            detail += fmt("h=%g s%g %.3f; ", horizons[k], s, c);
        }
    return {ok, detail};
}

Outcome cvar_shortening() {
    const int runs = 50;
    int wins = 0;
    double cvar_sum = 0.0, var_sum = 0.0;
    for (int rep = 0; rep < runs; ++rep) {
        DgpSpec s;
        s.layout = DgpLayout::Cointegrated;
        s.pi = 0.3;
        s.outcomes = 2;
        s.T = 1000;
        s.seed = derive_seed(800, static_cast<std::uint64_t>(rep));
        const auto sample = simulate_dgp(s);
        const auto cvar = vecm_cvar(sample.panel, spec_from_roles(sample.panel, CvarMode::Vecm, 1, 3), 40);
        const auto treated = sample.panel.select({0, 1, 2});
        const auto level = estimate_var(treated, 1);
        const auto irf = structural_irf(level, cholesky_identify(level), 40, 0).point;
        const double c = cvar.irf.difference.point.block(10, 1, 31, 2).norm();
        const double v = irf.block(10, 1, 31, 2).norm();
        cvar_sum += c / runs;
        var_sum += v / runs;
        if (c < v) ++wins;
    }
    return {wins >= 0.95 * runs,
            fmt("CVAR shorter in %g/50 runs, mean norms %.2e vs %.2e", wins, cvar_sum, var_sum)};
}

}  // namespace

int main() {
    const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
        {"theorem recovery", theorem_recovery},
        {"selection-bias negative control", negative_control},
        {"weight identities", weight_identities},
        {"gaussian collapse", gaussian_collapse},
        {"chi-square criticals", chi_square_criticals},
        {"rank-test calibration", rank_calibration},
        {"bootstrap coverage", bootstrap_coverage},
        {"cvar shortening", cvar_shortening},
    };
    int failed = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        const auto start = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = criteria[i].second();
        } catch (const std::exception& e) {
            o = {false, std::string("threw: ") + e.what()};
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        std::printf("criterion %zu %s: %s (%s) [%.1fs]\n", i + 1, criteria[i].first, o.pass ? "PASS" : "FAIL",
                    o.detail.c_str(), secs);
        std::fflush(stdout);
        if (!o.pass) ++failed;
    }
    return failed == 0 ? 0 : 1;
}
