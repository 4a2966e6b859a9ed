#pragma once

#include <Eigen/Dense>

#include <string>
#include <vector>

namespace cvarkit {

enum class IrfSpace { Level, Difference };

/// Responses of every series to one normalized policy shock over horizons 0..H.
/// `lower`/`upper` are empty until bootstrap bands are attached.
struct IrfBundle {
    int horizons = 0;
    int shock = 0;  // position among the policy columns
    IrfSpace space = IrfSpace::Level;
    std::vector<std::string> labels;
    Eigen::MatrixXd point;  // (H+1) x n
    Eigen::MatrixXd lower;
    Eigen::MatrixXd upper;
    double level = 0.0;
    int replications = 0;
    int skipped = 0;

    [[nodiscard]] bool has_bands() const noexcept { return lower.size() > 0; }
};

/// Point response rows Phi_h * impact for h = 0..H.
[[nodiscard]] Eigen::MatrixXd propagate(const std::vector<Eigen::MatrixXd>& ma, const Eigen::VectorXd& impact);

}  // namespace cvarkit
