#include "cvarkit/error.hpp"
#include "cvarkit/ident.hpp"
#include "cvarkit/inference.hpp"
#include "sim.hpp"

#include <doctest.h>

#include <cmath>

using namespace cvarkit;

TEST_CASE("chi-square critical values of the application table") {
    const double expected[3][3] = {{9.24, 11.07, 15.09}, {15.99, 18.31, 23.21}, {22.31, 25.00, 30.58}};
    const int dfs[3] = {5, 10, 15};
    for (int i = 0; i < 3; ++i) {
        const auto c = bg_critical_values(dfs[i]);
        for (int j = 0; j < 3; ++j) CHECK(std::abs(c[static_cast<std::size_t>(j)] - expected[i][j]) < 0.005);
    }
    CHECK_THROWS_AS((void)bg_critical_values(0), Error);
}

TEST_CASE("Breusch-Godfrey size on white noise") {
    int rejections = 0;
    for (int rep = 0; rep < 500; ++rep) {
        auto eng = make_engine(90, static_cast<std::uint64_t>(rep));
        const auto m = fit_var(cvk_test::gaussian(eng, 300, 5), 1);
        const auto bg = breusch_godfrey(m, 1);
        CHECK(bg.df == 5);
        if (bg.reject[1]) ++rejections;
    }
    const double freq = rejections / 500.0;
    CHECK(freq >= 0.02);
    CHECK(freq <= 0.09);
}

TEST_CASE("Breusch-Godfrey power against AR(1) residuals") {
    int rejections = 0;
    for (int rep = 0; rep < 100; ++rep) {
        auto eng = make_engine(91, static_cast<std::uint64_t>(rep));
        Eigen::MatrixXd e = cvk_test::gaussian(eng, 200, 2);
        for (Eigen::Index t = 1; t < e.rows(); ++t) e.row(t) += 0.5 * e.row(t - 1);
        const auto bg = breusch_godfrey(e, Eigen::MatrixXd::Ones(200, 1), 1);
        if (bg.reject[1]) ++rejections;
    }
    CHECK(rejections >= 90);
}

TEST_CASE("Breusch-Godfrey p-value and too few observations") {
    auto eng = make_engine(92, 0);
    const auto bg = breusch_godfrey(cvk_test::gaussian(eng, 100, 2), Eigen::MatrixXd::Ones(100, 1), 2);
    CHECK(bg.p_value > 0.0);
    CHECK(bg.p_value < 1.0);
    CHECK(bg.df == 4);
    try {
        (void)breusch_godfrey(cvk_test::gaussian(eng, 4, 2), Eigen::MatrixXd::Ones(4, 1), 2);
        FAIL("expected TooFewObservations");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::TooFewObservations);
    }
}

namespace {

VarModel bivariate(std::uint64_t seed, Eigen::Index t, double noise = 1.0) {
    Eigen::MatrixXd a(2, 2);
    a << 0.5, 0.1, 0.2, 0.3;
    auto eng = make_engine(seed, 0);
    Eigen::MatrixXd e = noise * cvk_test::gaussian(eng, t, 2);
    e.col(1) += 0.5 * e.col(0);
    Eigen::MatrixXd init(1, 2);
    init << 0.0, 0.0;
    auto m = fit_var(simulate_var({a}, Eigen::VectorXd::Zero(2), init, e), 1);
    m.roles = {{RoleKind::Policy, 1}, {RoleKind::TreatedOutcome, 1}};
    return m;
}

}  // namespace

TEST_CASE("bootstrap bands are reproducible") {
    const auto m = bivariate(93, 300);
    BootstrapOptions opts;
    opts.replications = 199;
    opts.seed = 7;
    const auto a = wild_bootstrap_irf(m, {}, 8, 0, opts);
    opts.threads = 1;
    const auto b = wild_bootstrap_irf(m, {}, 8, 0, opts);
    CHECK(a.lower == b.lower);
    CHECK(a.upper == b.upper);
    opts.seed = 8;
    const auto c = wild_bootstrap_irf(m, {}, 8, 0, opts);
    CHECK(a.lower != c.lower);
    CHECK(a.replications == 199);
    CHECK(a.skipped == 0);
    for (Eigen::Index h = 1; h <= 8; ++h) CHECK(a.lower(h, 1) <= a.upper(h, 1));
}

TEST_CASE("cells without resampling variation collapse") {
    const auto m = bivariate(94, 300);
    BootstrapOptions opts;
    opts.replications = 199;
    opts.seed = 1;
    const auto b = wild_bootstrap_irf(m, {}, 8, 0, opts);
    CHECK(std::abs(b.upper(0, 0) - b.lower(0, 0)) < 1e-8);
    CHECK(std::abs(b.point(0, 0) - 1.0) < 1e-12);

    auto silent = m;
    silent.residuals.setZero();
    silent.sigma.setZero();
    CHECK_THROWS_AS((void)wild_bootstrap_irf(silent, {}, 8, 0, opts), Error);
}

TEST_CASE("bands widen with the level and bracket the point") {
    const auto m = bivariate(98, 400);
    BootstrapOptions opts;
    opts.replications = 499;
    opts.seed = 4;
    double widths[3];
    const double levels[3] = {0.68, 0.95, 0.99};
    for (int i = 0; i < 3; ++i) {
        opts.level = levels[i];
        const auto b = wild_bootstrap_irf(m, {}, 12, 0, opts);
        widths[i] = (b.upper - b.lower).mean();
        const auto outside = ((b.point.array() < b.lower.array() - 1e-12) || (b.point.array() > b.upper.array() + 1e-12)).count();
        CHECK(outside <= b.point.size() / 100);
    }
    CHECK(widths[0] <= widths[1]);
    CHECK(widths[1] <= widths[2]);
}

TEST_CASE("bands narrow with more data") {
    BootstrapOptions opts;
    opts.replications = 199;
    opts.seed = 3;
    const auto small = wild_bootstrap_irf(bivariate(95, 200), {}, 4, 0, opts);
    const auto large = wild_bootstrap_irf(bivariate(95, 5000), {}, 4, 0, opts);
    CHECK((small.upper - small.lower)(1, 1) > (large.upper - large.lower)(1, 1));
}

TEST_CASE("bootstrap option validation") {
    const auto m = bivariate(96, 200);
    BootstrapOptions opts;
    opts.replications = 198;
    CHECK_THROWS_AS((void)wild_bootstrap_irf(m, {}, 4, 0, opts), Error);
    opts.replications = 199;
    opts.level = 1.0;
    CHECK_THROWS_AS((void)wild_bootstrap_irf(m, {}, 4, 0, opts), Error);
}

TEST_CASE("VECM bootstrap yields level and difference bands") {
    auto eng = make_engine(97, 0);
    const auto x = cvk_test::random_walks(eng, 300, 2);
    auto m = fit_vecm(x, 2, 1);
    m.roles = {{RoleKind::Policy, 1}, {RoleKind::TreatedOutcome, 1}};
    BootstrapOptions opts;
    opts.replications = 199;
    opts.seed = 2;
    const auto b = wild_bootstrap_irf(m, {}, 10, 0, opts);
    CHECK(b.level.has_bands());
    CHECK(b.difference.has_bands());
    CHECK(b.level.point.rows() == 11);
}
