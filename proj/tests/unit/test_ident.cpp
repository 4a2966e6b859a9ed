#include "cvarkit/error.hpp"
#include "cvarkit/ident.hpp"
#include "sim.hpp"

#include <doctest.h>

#include <cmath>

using namespace cvarkit;

TEST_CASE("hand Cholesky example") {
    Eigen::MatrixXd omega(2, 2);
    omega << 4, 2, 2, 3;
    const auto id = cholesky_identify(omega, {0});
    CHECK(id.chol_factor(0, 0) == doctest::Approx(2.0));
    CHECK(id.chol_factor(0, 1) == doctest::Approx(0.0));
    CHECK(id.chol_factor(1, 0) == doctest::Approx(1.0));
    CHECK(id.chol_factor(1, 1) == doctest::Approx(std::sqrt(2.0)));
    CHECK(id.impact(0, 0) == doctest::Approx(1.0));
    CHECK(id.impact(1, 0) == doctest::Approx(0.5));
    CHECK(id.gamma_of(1) == doctest::Approx(2.0 / 4.0));
}

TEST_CASE("diagonal covariance gives zero effects") {
    Eigen::MatrixXd omega = Eigen::Vector3d(1.0, 2.0, 3.0).asDiagonal();
    const auto id = cholesky_identify(omega, {0});
    CHECK(id.gamma.cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("zero variance is not positive definite") {
    Eigen::MatrixXd omega(2, 2);
    omega << 0, 0, 0, 1;
    try {
        (void)cholesky_identify(omega, {0});
        FAIL("expected NotPositiveDefinite");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::NotPositiveDefinite);
    }
}

TEST_CASE("ordering places the policy first") {
    Eigen::MatrixXd omega(2, 2);
    omega << 3, 2, 2, 4;
    const auto id = cholesky_identify(omega, {1}, {1, 0});
    CHECK(id.impact(1, 0) == doctest::Approx(1.0));
    CHECK(id.impact(0, 0) == doctest::Approx(0.5));
    CHECK(id.gamma_of(0) == doctest::Approx(0.5));
}

namespace {

VarModel static_model(const std::vector<Eigen::MatrixXd>& lags, const Eigen::MatrixXd& sigma) {
    VarModel m;
    m.p = static_cast<int>(lags.size());
    m.coefficients = lags;
    m.intercept = Eigen::VectorXd::Zero(sigma.rows());
    m.sigma = sigma;
    m.sample = Eigen::MatrixXd::Zero(m.p + 1, sigma.rows());
    m.roles.push_back({RoleKind::Policy, 1});
    for (Eigen::Index i = 1; i < sigma.rows(); ++i) m.roles.push_back({RoleKind::TreatedOutcome, static_cast<int>(i)});
    for (Eigen::Index i = 0; i < sigma.rows(); ++i) m.labels.push_back("s" + std::to_string(i));
    return m;
}

}  // namespace

TEST_CASE("static model responds only on impact") {
    Eigen::MatrixXd omega(2, 2);
    omega << 4, 2, 2, 3;
    const auto m = static_model({Eigen::MatrixXd::Zero(2, 2)}, omega);
    const auto irf = structural_irf(m, cholesky_identify(m), 6);
    CHECK(irf.point(0, 0) == doctest::Approx(1.0));
    CHECK(irf.point(0, 1) == doctest::Approx(0.5));
    CHECK(irf.point.bottomRows(6).isZero());
}

TEST_CASE("closed-form recursion for a policy AR(1) with outcome loading") {
    // w_t = a w_{t-1} + e_w ; y_t = b w_{t-1} + e_y
    const double a = 0.7, b = 0.4, g = 0.3;
    Eigen::MatrixXd lag(2, 2);
    lag << a, 0, b, 0;
    Eigen::MatrixXd omega(2, 2);
    omega << 1, g, g, 1 + g * g;
    const auto m = static_model({lag}, omega);
    const auto irf = structural_irf(m, cholesky_identify(m), 20);
    for (int h = 0; h <= 20; ++h) {
        CHECK(std::abs(irf.point(h, 0) - std::pow(a, h)) < 1e-10);
        const double y = h == 0 ? g : b * std::pow(a, h - 1);
        CHECK(std::abs(irf.point(h, 1) - y) < 1e-10);
    }
}

TEST_CASE("IRF equals shocked minus baseline path") {
    auto eng = make_engine(21, 0);
    Eigen::MatrixXd a(2, 2);
    a << 0.5, 0.2, -0.3, 0.4;
    Eigen::MatrixXd omega(2, 2);
    omega << 1.5, 0.6, 0.6, 2.0;
    const auto m = static_model({a}, omega);
    const auto id = cholesky_identify(m);
    const int horizons = 15;
    const auto irf = structural_irf(m, id, horizons);
    const Eigen::MatrixXd init = cvk_test::gaussian(eng, 1, 2);
    const Eigen::MatrixXd base_shocks = cvk_test::gaussian(eng, horizons + 1, 2);
    Eigen::MatrixXd shocked = base_shocks;
    shocked.row(0) += id.impact.col(0).transpose();
    const auto base = simulate_var({a}, Eigen::VectorXd::Zero(2), init, base_shocks);
    const auto hit = simulate_var({a}, Eigen::VectorXd::Zero(2), init, shocked);
    const Eigen::MatrixXd diff = (hit - base).bottomRows(horizons + 1);
    CHECK((diff - irf.point).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("policy columns from roles") {
    std::vector<SeriesRole> roles{{RoleKind::Policy, 1}, {RoleKind::TreatedOutcome, 1}, {RoleKind::Policy, 2}};
    CHECK(policy_columns_of(roles) == std::vector<int>{0, 2});
}
