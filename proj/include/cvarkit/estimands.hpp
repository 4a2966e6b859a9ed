#pragma once

#include "cvarkit/panel.hpp"
#include "cvarkit/var.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <functional>
#include <limits>
#include <map>
#include <span>
#include <string>
#include <vector>

namespace cvarkit {

/// Weight functions of the continuous-policy estimands. `grid`/`q`/`theta` hold
/// the ACRT weights over the whole support; `q1_grid`/`q1`/`q0` hold the
/// mixture weights of a non-negative policy over [d_lower, d_upper].
struct CausalWeightProfile {
    double mean = 0.0;
    double variance = 0.0;

    std::vector<double> grid;  // cell midpoints
    double cell_width = 0.0;
    std::vector<double> q;
    std::vector<double> cdf;
    std::vector<double> theta;  // partial first moment up to the grid point

    std::vector<double> q1_grid;
    double q1_cell_width = 0.0;
    std::vector<double> q1;
    double q0 = 0.0;
    double d_lower = 0.0;
    double d_upper = 0.0;

    [[nodiscard]] double integral_q() const;
    [[nodiscard]] double integral_q1() const;
};

/// Closed-form weights for N(mean, sd^2) on grid_size midpoints of [mean - 8 sd, mean + 8 sd].
[[nodiscard]] CausalWeightProfile gaussian_acrt_weights(double mean, double sd, int grid_size = 2001);

/// Empirical weights (mu F(w) - theta(w)) / var on grid_size midpoints of [min, max].
[[nodiscard]] CausalWeightProfile acrt_weights(std::span<const double> sample, int grid_size = 2001);

/// Mixture weights for a non-negative sample; d_lower is the smallest positive value.
[[nodiscard]] CausalWeightProfile nonneg_weights(std::span<const double> sample, int grid_size = 2001);

struct ResidualRegression {
    Eigen::MatrixXd gamma;  // n x K slopes of residual column i on policy k, policy rows included
    std::vector<std::string> warnings;
};

/// Slope (with intercept) of each residual column on each policy series.
/// `policies` has one row per row of model.sample; the last n_obs_effective rows are used.
[[nodiscard]] ResidualRegression regress_residuals(const VarModel& model, const Eigen::MatrixXd& policies);

enum class PolicyDist { Bernoulli, Gaussian, NonNegative };
enum class ResponseShape { Linear, Square, Cube, Custom };
enum class DgpLayout {
    Plain,          // (W, Y)
    DirectControl,  // (W, Y^1, Y^0), common component shared by both units
    Cointegrated,   // (W, Y^1_1..Y^1_J, Y^0_1..Y^0_J), Y^1_j - Y^0_j stationary
};

struct DgpSpec {
    PolicyDist policy = PolicyDist::Bernoulli;
    double pi = 0.5;         // Bernoulli
    double sigma = 1.0;      // Gaussian
    double zero_prob = 0.7;  // NonNegative: P(W = 0)
    double d_lower = 0.5;    // NonNegative: positive part is d_lower + Exponential(scale), truncated at d_upper
    double d_upper = std::numeric_limits<double>::infinity();
    double scale = 1.0;

    ResponseShape response = ResponseShape::Linear;
    double effect = 1.0;  // m(w) = effect * w^k
    std::function<double(double)> custom;

    double noise_sd = 1.0;
    double ar = 0.0;             // AR coefficient of the outcome noise (Plain, Cointegrated) or common component (DirectControl)
    double heterogeneity = 0.0;  // sd of a unit-specific slope zeta_t added as w * zeta_t
    double selection_bias = 0.0; // > 0 makes W depend on the outcome innovation
    bool continuous = false;     // T5 with a Gaussian policy
    int outcomes = 1;            // J for the Cointegrated layout
    DgpLayout layout = DgpLayout::Plain;

    int T = 10000;
    std::uint64_t seed = 1;

    [[nodiscard]] double m(double w) const;
};

struct GroundTruth {
    double ate = 0.0;       // mean over t of m(1) - m(0) + zeta_t
    double att = 0.0;       // same over times with W = 1 (or W > 0)
    double acr = 0.0;       // E[m'(W)]
    double weighted_acr = 0.0;  // integral of q(w) m'(w) over the policy law
    double mixture = 0.0;   // integral of q1 m' plus q0 (m(d_L) - m(0)) / d_L
    int treated_count = 0;
};

struct DgpSample {
    TimeSeriesPanel panel;
    GroundTruth truth;
};

[[nodiscard]] DgpSample simulate_dgp(const DgpSpec& spec);

/// E[m'(W)] by central differences (step 1e-4) over `draws` policy draws.
[[nodiscard]] double acr_monte_carlo(const DgpSpec& spec, int draws = 1'000'000);

/// Population mixture value for a NonNegative spec by quadrature.
[[nodiscard]] double mixture_truth(const DgpSpec& spec);

/// Population weighted ACR for a Gaussian spec by quadrature of q m'.
[[nodiscard]] double weighted_acr_truth(const DgpSpec& spec);

enum class Theorem { T1, T2, T3, T4, T5, T8, T9 };

[[nodiscard]] std::string to_string(Theorem t);
[[nodiscard]] Theorem parse_theorem(const std::string& text);

struct ReplicationRecord {
    int index = 0;
    std::uint64_t seed = 0;
    double gamma_hat = 0.0;
    double truth = 0.0;
    double bias = 0.0;
};

struct VerificationReport {
    Theorem theorem = Theorem::T1;
    std::string estimand;  // ATE, ATT, ACR, ACRT, ATE+ACR
    std::string pipeline;
    int replications = 0;
    int T = 0;
    std::uint64_t seed = 0;
    std::vector<ReplicationRecord> records;
    double mean_gamma = 0.0;
    double truth = 0.0;
    double bias = 0.0;
    double mc_se = 0.0;
    double tolerance = 0.0;
    bool pass = false;
    std::map<std::string, double> extras;  // e.g. q0 and the plain ACR for T4
    std::vector<std::string> notes;
};

/// Runs R seeded replications of the theorem's pipeline and compares mean(gamma-hat)
/// with the truth; pass when |bias| < max(0.05 |truth|, 3 * sd / sqrt(R)).
[[nodiscard]] VerificationReport verify_theorem(Theorem theorem, DgpSpec spec, int replications);

/// Header block followed by one `replication,seed,gamma_hat,truth,bias` line per record.
[[nodiscard]] std::string serialize(const VerificationReport& report);

}  // namespace cvarkit
