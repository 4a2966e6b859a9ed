#pragma once

#include "cvarkit/panel.hpp"
#include "cvarkit/random.hpp"

#include <Eigen/Dense>

#include <random>
#include <string>
#include <vector>

namespace cvk_test {

inline Eigen::MatrixXd gaussian(cvarkit::Engine& eng, Eigen::Index rows, Eigen::Index cols, double sd = 1.0) {
    std::normal_distribution<double> z(0.0, sd);
    Eigen::MatrixXd out(rows, cols);
    for (Eigen::Index i = 0; i < rows; ++i)
        for (Eigen::Index j = 0; j < cols; ++j) out(i, j) = z(eng);
    return out;
}

// x_t = c + sum_l A_l x_{t-l} + e_t from zero initial values, after `burn` discarded rows.
inline Eigen::MatrixXd simulate(const std::vector<Eigen::MatrixXd>& lags, const Eigen::VectorXd& c,
                                const Eigen::MatrixXd& shocks, Eigen::Index burn = 0) {
    const auto n = shocks.cols();
    const auto p = static_cast<Eigen::Index>(lags.size());
    const auto total = shocks.rows();
    Eigen::MatrixXd x = Eigen::MatrixXd::Zero(total, n);
    for (Eigen::Index t = 0; t < total; ++t) {
        Eigen::VectorXd v = c + shocks.row(t).transpose();
        for (Eigen::Index l = 1; l <= p && t - l >= 0; ++l) v += lags[static_cast<std::size_t>(l - 1)] * x.row(t - l).transpose();
        x.row(t) = v.transpose();
    }
    return x.bottomRows(total - burn);
}

inline Eigen::MatrixXd random_walks(cvarkit::Engine& eng, Eigen::Index rows, Eigen::Index cols) {
    Eigen::MatrixXd e = gaussian(eng, rows, cols);
    for (Eigen::Index t = 1; t < rows; ++t) e.row(t) += e.row(t - 1);
    return e;
}

inline cvarkit::TimeSeriesPanel make_panel(const Eigen::MatrixXd& values, const std::vector<std::string>& roles) {
    std::vector<std::string> labels;
    std::vector<cvarkit::SeriesRole> parsed;
    for (std::size_t i = 0; i < roles.size(); ++i) {
        labels.push_back("s" + std::to_string(i));
        const auto colon = roles[i].find(':');
        const auto kind = roles[i].substr(0, colon);
        cvarkit::SeriesRole r;
        r.kind = kind == "policy" ? cvarkit::RoleKind::Policy
                 : kind == "control" ? cvarkit::RoleKind::ControlOutcome
                                     : cvarkit::RoleKind::TreatedOutcome;
        r.index = std::stoi(roles[i].substr(colon + 1));
        parsed.push_back(r);
    }
    return cvarkit::TimeSeriesPanel(values, labels, parsed);
}

}  // namespace cvk_test
