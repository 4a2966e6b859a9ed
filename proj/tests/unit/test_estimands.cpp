#include "cvarkit/error.hpp"
#include "cvarkit/estimands.hpp"
#include "cvarkit/ident.hpp"
#include "sim.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>

using namespace cvarkit;

namespace {

ErrorCode code_of(const auto& fn) {
    try {
        fn();
    } catch (const Error& e) {
        return e.code();
    }
    FAIL("expected an error");
    return ErrorCode::InvalidArgument;
}

double normal_pdf(double x, double mean, double sd) {
    const double z = (x - mean) / sd;
    return std::exp(-0.5 * z * z) / (sd * std::sqrt(2.0 * std::numbers::pi));
}

}  // namespace

TEST_CASE("Gaussian weights collapse to the density") {
    const auto w = gaussian_acrt_weights(0.0, 1.0);
    REQUIRE(w.grid.size() == 2001);
    double worst = 0.0;
    for (std::size_t i = 0; i < w.grid.size(); ++i) worst = std::max(worst, std::abs(w.q[i] - normal_pdf(w.grid[i], 0, 1)));
    CHECK(worst < 1e-6);
    CHECK(w.q[1000] == doctest::Approx(0.39894).epsilon(1e-4));
    CHECK(std::abs(w.integral_q() - 1.0) < 1e-6);

    const auto shifted = gaussian_acrt_weights(2.0, 0.5);
    worst = 0.0;
    for (std::size_t i = 0; i < shifted.grid.size(); ++i)
        worst = std::max(worst, std::abs(shifted.q[i] - normal_pdf(shifted.grid[i], 2.0, 0.5)));
    CHECK(worst < 1e-6);
}

TEST_CASE("two-point sample gives a flat weight") {
    const std::vector<double> x{-1, 1, -1, 1};
    const auto w = acrt_weights(x);
    CHECK(std::abs(w.integral_q() - 1.0) < 1e-6);
    const auto n = w.grid.size();
    for (std::size_t i = 0; i < n; ++i) {
        CHECK(w.q[i] == doctest::Approx(w.q[n - 1 - i]));
        CHECK(w.q[i] == doctest::Approx(0.5));
    }
}

TEST_CASE("empirical weights integrate to one") {
    auto eng = make_engine(80, 0);
    const Eigen::VectorXd g = cvk_test::gaussian(eng, 20000, 1);
    const auto w = acrt_weights(std::span<const double>(g.data(), static_cast<std::size_t>(g.size())));
    CHECK(std::abs(w.integral_q() - 1.0) < 1e-3);
}

TEST_CASE("weight rejections") {
    const std::vector<double> constant(10, 3.0);
    CHECK(code_of([&] { (void)acrt_weights(constant); }) == ErrorCode::DegenerateSample);
    const std::vector<double> zeros(10, 0.0);
    CHECK(code_of([&] { (void)nonneg_weights(zeros); }) == ErrorCode::NoPositiveMass);
    const std::vector<double> negative{0.0, 1.0, -1.0};
    CHECK(code_of([&] { (void)nonneg_weights(negative); }) == ErrorCode::InvalidArgument);
    const std::vector<double> huge{0.0, 1e200, -1e200};
    CHECK(code_of([&] { (void)acrt_weights(huge); }) == ErrorCode::InfiniteVariance);
    const std::vector<double> inf{0.0, 1.0, std::numeric_limits<double>::infinity()};
    CHECK(code_of([&] { (void)acrt_weights(inf); }) == ErrorCode::InvalidArgument);
}

TEST_CASE("exponential mixture weights add up") {
    auto eng = make_engine(81, 0);
    std::exponential_distribution<double> ex(1.0);
    std::vector<double> x(100000);
    for (auto& v : x) v = ex(eng);
    const auto w = nonneg_weights(x);
    CHECK(std::abs(w.integral_q1() + w.q0 - 1.0) < 1e-3);
    CHECK(w.d_lower == doctest::Approx(*std::min_element(x.begin(), x.end())));
}

TEST_CASE("two-point non-negative sample") {
    const double c = 2.5;
    const std::vector<double> x{0, c, 0, c, 0, c};
    const auto w = nonneg_weights(x);
    // mean c/2, var c^2/4: q0 = (c/2 - (c/2)(1/2)) c / (c^2/4) = 1, q1(c) = (c/2)(1/2) / (c^2/4) = 1/c
    CHECK(w.q0 == doctest::Approx(1.0));
    REQUIRE(w.q1.size() == 1);
    CHECK(w.q1_grid[0] == doctest::Approx(c));
    CHECK(w.q1[0] == doctest::Approx(1.0 / c));
    CHECK(w.integral_q1() == doctest::Approx(0.0));
}

namespace {

VarModel fit_pair(const Eigen::MatrixXd& x) {
    auto m = fit_var(x, 1);
    m.roles = {{RoleKind::Policy, 1}, {RoleKind::TreatedOutcome, 1}};
    return m;
}

}  // namespace

TEST_CASE("residual regression") {
    auto eng = make_engine(82, 0);
    const Eigen::Index t = 20000;
    Eigen::MatrixXd x(t, 2);
    x.col(0) = cvk_test::gaussian(eng, t, 1);
    SUBCASE("orthogonal") {
        x.col(1) = cvk_test::gaussian(eng, t, 1);
        const auto m = fit_pair(x);
        const auto r = regress_residuals(m, x.col(0));
        CHECK(std::abs(r.gamma(1, 0)) < 0.03);
    }
    SUBCASE("injected effect and agreement with Cholesky") {
        x.col(1) = 1.5 * x.col(0) + cvk_test::gaussian(eng, t, 1);
        const auto m = fit_pair(x);
        const auto r = regress_residuals(m, x.col(0));
        CHECK(std::abs(r.gamma(1, 0) - 1.5) < 0.05);
        CHECK(std::abs(r.gamma(1, 0) - cholesky_identify(m).gamma_of(1)) < 0.02);
    }
    SUBCASE("persistent policy is flagged") {
        for (Eigen::Index i = 1; i < t; ++i) x(i, 0) += 0.8 * x(i - 1, 0);
        x.col(1) = cvk_test::gaussian(eng, t, 1);
        const auto r = regress_residuals(fit_pair(x), x.col(0));
        CHECK(r.warnings.size() == 1);
    }
}

TEST_CASE("ground truths") {
    SUBCASE("noiseless linear Bernoulli") {
        DgpSpec s;
        s.effect = 2.0;
        s.noise_sd = 0.0;
        s.T = 500;
        CHECK(simulate_dgp(s).truth.ate == 2.0);
    }
    SUBCASE("square response under a symmetric law") {
        DgpSpec s;
        s.policy = PolicyDist::Gaussian;
        s.response = ResponseShape::Square;
        CHECK(std::abs(acr_monte_carlo(s)) < 0.01);
    }
    SUBCASE("cube response") {
        DgpSpec s;
        s.policy = PolicyDist::Gaussian;
        s.response = ResponseShape::Cube;
        CHECK(std::abs(acr_monte_carlo(s) - 3.0) < 0.02);
        CHECK(std::abs(weighted_acr_truth(s) - 3.0) < 1e-3);
    }
}

TEST_CASE("mixture truth equals the population slope") {
    DgpSpec s;
    s.policy = PolicyDist::NonNegative;
    s.response = ResponseShape::Square;
    // W = B (d + E), B ~ Bernoulli(1 - z), E ~ Exp(scale); slope of m(W) = W^2 on W
    const double z = s.zero_prob, d = s.d_lower, k = s.scale, p = 1.0 - z;
    const double m1 = d + k, m2 = d * d + 2 * d * k + 2 * k * k, m3 = d * d * d + 3 * d * d * k + 6 * d * k * k + 6 * k * k * k;
    const double slope = (p * m3 - p * m1 * p * m2) / (p * m2 - p * p * m1 * m1);
    CHECK(std::abs(mixture_truth(s) - slope) < 1e-3);
}

TEST_CASE("theorem verification") {
    SUBCASE("T1") {
        DgpSpec s;
        s.pi = 0.3;
        s.T = 10000;
        const auto r = verify_theorem(Theorem::T1, s, 50);
        CHECK(r.pass);
        CHECK(r.truth == doctest::Approx(1.0).epsilon(0.02));
        CHECK(r.records.size() == 50);
    }
    SUBCASE("T3 with a cubic response targets the ACR") {
        DgpSpec s;
        s.policy = PolicyDist::Gaussian;
        s.response = ResponseShape::Cube;
        s.T = 20000;
        const auto r = verify_theorem(Theorem::T3, s, 50);
        CHECK(r.pass);
        CHECK(std::abs(r.mean_gamma - 3.0) < 0.15);
    }
    SUBCASE("T4 mixture differs from the plain ACR") {
        DgpSpec s;
        s.policy = PolicyDist::NonNegative;
        s.response = ResponseShape::Square;
        const auto r = verify_theorem(Theorem::T4, s, 30);
        CHECK(r.pass);
        CHECK(std::abs(r.extras.at("acr") - r.truth) > 10 * r.tolerance);
        CHECK(r.extras.at("q0") + r.extras.at("integral_q1") == doctest::Approx(1.0).epsilon(1e-3));
    }
    SUBCASE("selection bias breaks T1") {
        DgpSpec s;
        s.selection_bias = 1.0;
        CHECK_FALSE(verify_theorem(Theorem::T1, s, 20).pass);
    }
    SUBCASE("mismatched policy law") {
        DgpSpec s;
        s.policy = PolicyDist::Gaussian;
        CHECK(code_of([&] { (void)verify_theorem(Theorem::T1, s, 5); }) == ErrorCode::SpecTheoremMismatch);
    }
    SUBCASE("report serialization is deterministic") {
        DgpSpec s;
        s.T = 2000;
        const auto a = serialize(verify_theorem(Theorem::T1, s, 5));
        const auto b = serialize(verify_theorem(Theorem::T1, s, 5));
        CHECK(a == b);
        CHECK(a.find("theorem=T1\n") == 0);
        CHECK(a.find("replication,seed,gamma_hat,truth,bias\n") != std::string::npos);
    }
}

TEST_CASE("theorem names") {
    CHECK(to_string(parse_theorem("T8")) == "T8");
    CHECK(code_of([] { (void)parse_theorem("T6"); }) == ErrorCode::InvalidArgument);
}
