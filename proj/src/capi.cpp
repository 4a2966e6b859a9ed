#include "cvarkit/cvarkit.h"

#include "cvarkit/cvar.hpp"
#include "cvarkit/error.hpp"
#include "cvarkit/estimands.hpp"
#include "cvarkit/ident.hpp"
#include "cvarkit/inference.hpp"
#include "cvarkit/panel.hpp"
#include "cvarkit/var.hpp"
#include "cvarkit/vecm.hpp"

#include <cmath>
#include <exception>
#include <limits>
#include <new>
#include <string>
#include <vector>

using namespace cvarkit;

struct cvk_panel {
    TimeSeriesPanel panel;
    std::vector<std::string> role_text;
};

struct cvk_var_model {
    VarModel model;
};

struct cvk_vecm_model {
    VecmModel model;
};

struct cvk_rank_test {
    RankTestResult result;
};

struct cvk_irf {
    IrfBundle bundle;
};

struct cvk_control_ranking {
    ControlRanking ranking;
};

struct cvk_weights {
    CausalWeightProfile profile;
};

struct cvk_report {
    VerificationReport report;
    std::string text;
};

namespace {

thread_local std::string last_error;

template <class F>
cvk_status guarded(F&& body) {
    try {
        body();
        last_error.clear();
        return CVK_OK;
    } catch (const Error& e) {
        last_error = e.what();
        return static_cast<cvk_status>(e.code());
    } catch (const std::bad_alloc&) {
        last_error = "out of memory";
    } catch (const std::exception& e) {
        last_error = e.what();
    } catch (...) {
        last_error = "unknown failure";
    }
    return CVK_INTERNAL;
}

void require(bool ok, const char* what) {
    if (!ok) fail(ErrorCode::InvalidArgument, what);
}

cvk_panel* wrap(TimeSeriesPanel panel) {
    auto* out = new cvk_panel{std::move(panel), {}};
    for (const auto& r : out->panel.roles()) out->role_text.push_back(to_string(r));
    return out;
}

void copy_row_major(const Eigen::MatrixXd& m, double* out) {
    for (Eigen::Index i = 0; i < m.rows(); ++i)
        for (Eigen::Index j = 0; j < m.cols(); ++j) out[i * m.cols() + j] = m(i, j);
}

void copy_vector(const Eigen::VectorXd& v, double* out) {
    for (Eigen::Index i = 0; i < v.size(); ++i) out[i] = v(i);
}

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::vector<int> ordering_of(const cvk_irf_options* options) {
    if (!options->ordering || options->ordering_len == 0) return {};
    return {options->ordering, options->ordering + options->ordering_len};
}

void fill_bg(const BgTestResult& r, cvk_bg_result* out) {
    out->statistic = r.statistic;
    out->df = r.df;
    out->h_lags = r.h_lags;
    out->p_value = r.p_value;
    for (std::size_t i = 0; i < 3; ++i) {
        out->levels[i] = r.levels[i];
        out->critical_values[i] = r.critical_values[i];
        out->reject[i] = r.reject[i] ? 1 : 0;
    }
}

DgpSpec to_spec(const cvk_dgp_spec& c) {
    DgpSpec s;
    switch (c.policy) {
        case CVK_POLICY_BERNOULLI: s.policy = PolicyDist::Bernoulli; break;
        case CVK_POLICY_GAUSSIAN: s.policy = PolicyDist::Gaussian; break;
        case CVK_POLICY_NONNEGATIVE: s.policy = PolicyDist::NonNegative; break;
        default: fail(ErrorCode::InvalidArgument, "unknown policy distribution");
    }
    switch (c.response) {
        case CVK_RESPONSE_LINEAR: s.response = ResponseShape::Linear; break;
        case CVK_RESPONSE_SQUARE: s.response = ResponseShape::Square; break;
        case CVK_RESPONSE_CUBE: s.response = ResponseShape::Cube; break;
        default: fail(ErrorCode::InvalidArgument, "unknown response shape");
    }
    switch (c.layout) {
        case CVK_LAYOUT_PLAIN: s.layout = DgpLayout::Plain; break;
        case CVK_LAYOUT_DIRECT_CONTROL: s.layout = DgpLayout::DirectControl; break;
        case CVK_LAYOUT_COINTEGRATED: s.layout = DgpLayout::Cointegrated; break;
        default: fail(ErrorCode::InvalidArgument, "unknown layout");
    }
    s.pi = c.pi;
    s.sigma = c.sigma;
    s.zero_prob = c.zero_prob;
    s.d_lower = c.d_lower;
    s.d_upper = c.d_upper;
    s.scale = c.scale;
    s.effect = c.effect;
    s.noise_sd = c.noise_sd;
    s.ar = c.ar;
    s.heterogeneity = c.heterogeneity;
    s.selection_bias = c.selection_bias;
    s.continuous = c.continuous != 0;
    s.outcomes = c.outcomes;
    s.T = c.T;
    s.seed = c.seed;
    return s;
}

template <class T>
double at(const std::vector<T>& v, std::size_t i) {
    return i < v.size() ? static_cast<double>(v[i]) : kNaN;
}

}  // namespace

extern "C" {

const char* cvk_version(void) { return "0.3.0"; }

const char* cvk_last_error(void) { return last_error.c_str(); }

const char* cvk_status_name(cvk_status status) {
    if (status == CVK_OK) return "Ok";
    if (status == CVK_INTERNAL) return "Internal";
    return error_code_name(static_cast<ErrorCode>(status));
}

int cvk_status_is_numerical(cvk_status status) {
    if (status == CVK_OK || status == CVK_INTERNAL) return 0;
    return is_numerical(static_cast<ErrorCode>(status)) ? 1 : 0;
}

/* ---- panels ---- */

cvk_status cvk_panel_load(const char* csv_path, const char* roles_path, cvk_panel** out) {
    return guarded([&] {
        require(csv_path && roles_path && out, "null argument");
        *out = wrap(load_panel(csv_path, load_role_map(roles_path)));
    });
}

cvk_status cvk_panel_parse(const char* csv_text, const char* roles_text, cvk_panel** out) {
    return guarded([&] {
        require(csv_text && roles_text && out, "null argument");
        *out = wrap(parse_panel(csv_text, parse_role_map(roles_text)));
    });
}

cvk_status cvk_panel_from_matrix(const double* values, size_t rows, size_t cols, const char* const* labels,
                                 const char* const* roles, cvk_panel** out) {
    return guarded([&] {
        require(values && labels && roles && out, "null argument");
        Eigen::MatrixXd data(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
        for (size_t i = 0; i < rows; ++i)
            for (size_t j = 0; j < cols; ++j) data(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = values[i * cols + j];
        std::vector<std::string> names;
        std::vector<SeriesRole> parsed;
        for (size_t j = 0; j < cols; ++j) {
            require(labels[j] && roles[j], "null label or role");
            names.emplace_back(labels[j]);
            const auto map = parse_role_map("x = " + std::string(roles[j]));
            parsed.push_back(map.begin()->second);
        }
        *out = wrap(TimeSeriesPanel(std::move(data), std::move(names), std::move(parsed)));
    });
}

void cvk_panel_free(cvk_panel* panel) { delete panel; }

size_t cvk_panel_rows(const cvk_panel* panel) { return panel ? static_cast<size_t>(panel->panel.rows()) : 0; }
size_t cvk_panel_cols(const cvk_panel* panel) { return panel ? static_cast<size_t>(panel->panel.cols()) : 0; }

const char* cvk_panel_label(const cvk_panel* panel, size_t col) {
    if (!panel || col >= panel->panel.labels().size()) return nullptr;
    return panel->panel.labels()[col].c_str();
}

const char* cvk_panel_role(const cvk_panel* panel, size_t col) {
    if (!panel || col >= panel->role_text.size()) return nullptr;
    return panel->role_text[col].c_str();
}

const char* cvk_panel_time(const cvk_panel* panel, size_t row) {
    if (!panel || row >= panel->panel.time_labels().size()) return nullptr;
    return panel->panel.time_labels()[row].c_str();
}

cvk_status cvk_panel_values(const cvk_panel* panel, double* out, size_t capacity) {
    return guarded([&] {
        require(panel && out, "null argument");
        require(capacity >= static_cast<size_t>(panel->panel.values().size()), "output buffer too small");
        copy_row_major(panel->panel.values(), out);
    });
}

cvk_status cvk_panel_first_difference(const cvk_panel* panel, cvk_panel** out) {
    return guarded([&] {
        require(panel && out, "null argument");
        *out = wrap(first_difference(panel->panel));
    });
}

cvk_status cvk_panel_dummy_transform(const cvk_panel* panel, int policy_k, double quantile, cvk_panel** out) {
    return guarded([&] {
        require(panel && out, "null argument");
        *out = wrap(dummy_policy_transform(panel->panel, policy_k, quantile));
    });
}

cvk_status cvk_panel_dummy_threshold(const cvk_panel* panel, int policy_k, double threshold, cvk_panel** out) {
    return guarded([&] {
        require(panel && out, "null argument");
        *out = wrap(dummy_policy_threshold(panel->panel, policy_k, threshold));
    });
}

cvk_status cvk_panel_select_roles(const cvk_panel* panel, int policies, int treated, int controls, cvk_panel** out) {
    return guarded([&] {
        require(panel && out, "null argument");
        std::vector<int> cols;
        const auto& roles = panel->panel.roles();
        for (std::size_t i = 0; i < roles.size(); ++i) {
            const auto kind = roles[i].kind;
            if ((kind == RoleKind::Policy && policies) || (kind == RoleKind::TreatedOutcome && treated) ||
                (kind == RoleKind::ControlOutcome && controls))
                cols.push_back(static_cast<int>(i));
        }
        require(!cols.empty(), "no columns selected");
        *out = wrap(panel->panel.select(cols));
    });
}

/* ---- VAR ---- */

cvk_status cvk_var_estimate(const cvk_panel* panel, int p, int intercept, cvk_var_model** out) {
    return guarded([&] {
        require(panel && out, "null argument");
        *out = new cvk_var_model{estimate_var(panel->panel, p, intercept != 0)};
    });
}

void cvk_var_free(cvk_var_model* model) { delete model; }

size_t cvk_var_dim(const cvk_var_model* model) { return model ? static_cast<size_t>(model->model.dim()) : 0; }
int cvk_var_lags(const cvk_var_model* model) { return model ? model->model.p : 0; }
size_t cvk_var_nobs(const cvk_var_model* model) { return model ? static_cast<size_t>(model->model.n_obs_effective) : 0; }
double cvk_var_loglik(const cvk_var_model* model) { return model ? model->model.loglik : kNaN; }

const char* cvk_var_label(const cvk_var_model* model, size_t series) {
    if (!model || series >= model->model.labels.size()) return nullptr;
    return model->model.labels[series].c_str();
}

cvk_status cvk_var_coefficients(const cvk_var_model* model, int lag, double* out) {
    return guarded([&] {
        require(model && out, "null argument");
        require(lag >= 1 && lag <= model->model.p, "lag out of range");
        copy_row_major(model->model.coefficients[static_cast<std::size_t>(lag - 1)], out);
    });
}

cvk_status cvk_var_intercept(const cvk_var_model* model, double* out) {
    return guarded([&] {
        require(model && out, "null argument");
        copy_vector(model->model.intercept, out);
    });
}

cvk_status cvk_var_sigma(const cvk_var_model* model, double* out) {
    return guarded([&] {
        require(model && out, "null argument");
        copy_row_major(model->model.sigma, out);
    });
}

cvk_status cvk_var_select_lag_bic(const cvk_panel* panel, int p_max, int intercept, int* p_star, double* bic) {
    return guarded([&] {
        require(panel && p_star, "null argument");
        const auto sel = select_lag_bic(panel->panel, p_max, intercept != 0);
        *p_star = sel.p_star;
        if (bic)
            for (std::size_t i = 0; i < sel.bic_table.size(); ++i) bic[i] = sel.bic_table[i].second;
    });
}

cvk_status cvk_var_impact(const cvk_var_model* model, const int* ordering, size_t ordering_len, int shock, double* out) {
    return guarded([&] {
        require(model && out, "null argument");
        std::vector<int> order;
        if (ordering) order.assign(ordering, ordering + ordering_len);
        const auto ident = cholesky_identify(model->model, order);
        require(shock >= 0 && shock < ident.impact.cols(), "shock out of range");
        copy_vector(ident.impact.col(shock), out);
    });
}

cvk_status cvk_bg_critical_values(int df, double out[3]) {
    return guarded([&] {
        require(out != nullptr, "null argument");
        const auto c = bg_critical_values(df);
        for (std::size_t i = 0; i < 3; ++i) out[i] = c[i];
    });
}

cvk_status cvk_var_breusch_godfrey(const cvk_var_model* model, int h_lags, cvk_bg_result* out) {
    return guarded([&] {
        require(model && out, "null argument");
        fill_bg(breusch_godfrey(model->model, h_lags), out);
    });
}

/* ---- VECM ---- */

cvk_status cvk_vecm_estimate(const cvk_panel* panel, int p, int r, int constant, cvk_vecm_model** out) {
    return guarded([&] {
        require(panel && out, "null argument");
        *out = new cvk_vecm_model{estimate_vecm(panel->panel, p, r, constant != 0)};
    });
}

void cvk_vecm_free(cvk_vecm_model* model) { delete model; }

size_t cvk_vecm_dim(const cvk_vecm_model* model) { return model ? static_cast<size_t>(model->model.dim()) : 0; }
int cvk_vecm_rank(const cvk_vecm_model* model) { return model ? model->model.r : 0; }
int cvk_vecm_lags(const cvk_vecm_model* model) { return model ? model->model.p : 0; }
size_t cvk_vecm_nobs(const cvk_vecm_model* model) { return model ? static_cast<size_t>(model->model.n_obs_effective) : 0; }
double cvk_vecm_loglik(const cvk_vecm_model* model) { return model ? model->model.loglik : kNaN; }

const char* cvk_vecm_label(const cvk_vecm_model* model, size_t series) {
    if (!model || series >= model->model.labels.size()) return nullptr;
    return model->model.labels[series].c_str();
}

cvk_status cvk_vecm_eigenvalues(const cvk_vecm_model* model, double* out) {
    return guarded([&] {
        require(model && out, "null argument");
        copy_vector(model->model.eigenvalues, out);
    });
}

cvk_status cvk_vecm_alpha(const cvk_vecm_model* model, double* out) {
    return guarded([&] {
        require(model && out, "null argument");
        copy_row_major(model->model.alpha, out);
    });
}

cvk_status cvk_vecm_beta(const cvk_vecm_model* model, double* out) {
    return guarded([&] {
        require(model && out, "null argument");
        copy_row_major(model->model.beta, out);
    });
}

cvk_status cvk_vecm_pi(const cvk_vecm_model* model, double* out) {
    return guarded([&] {
        require(model && out, "null argument");
        copy_row_major(model->model.pi, out);
    });
}

cvk_status cvk_vecm_short_run(const cvk_vecm_model* model, int lag, double* out) {
    return guarded([&] {
        require(model && out, "null argument");
        require(lag >= 1 && lag < model->model.p, "lag out of range");
        copy_row_major(model->model.short_run[static_cast<std::size_t>(lag - 1)], out);
    });
}

cvk_status cvk_vecm_constant(const cvk_vecm_model* model, double* out) {
    return guarded([&] {
        require(model && out, "null argument");
        copy_vector(model->model.constant, out);
    });
}

cvk_status cvk_vecm_sigma(const cvk_vecm_model* model, double* out) {
    return guarded([&] {
        require(model && out, "null argument");
        copy_row_major(model->model.sigma, out);
    });
}

cvk_status cvk_vecm_long_run(const cvk_vecm_model* model, double* out) {
    return guarded([&] {
        require(model && out, "null argument");
        copy_row_major(long_run_impact(model->model), out);
    });
}

cvk_status cvk_vecm_breusch_godfrey(const cvk_vecm_model* model, int h_lags, cvk_bg_result* out) {
    return guarded([&] {
        require(model && out, "null argument");
        fill_bg(breusch_godfrey(model->model, h_lags), out);
    });
}

cvk_status cvk_johansen_trace_test(const cvk_panel* panel, int p, double level, cvk_critical_table table,
                                   cvk_rank_test** out) {
    return guarded([&] {
        require(panel && out, "null argument");
        const auto t = table == CVK_TABLE_PAPER ? CriticalTable::Paper : CriticalTable::Standard;
        *out = new cvk_rank_test{johansen_trace_test(panel->panel, p, level, t)};
    });
}

void cvk_rank_test_free(cvk_rank_test* test) { delete test; }
size_t cvk_rank_test_size(const cvk_rank_test* test) { return test ? test->result.trace_stats.size() : 0; }
double cvk_rank_test_statistic(const cvk_rank_test* test, size_t r) { return test ? at(test->result.trace_stats, r) : kNaN; }
double cvk_rank_test_critical(const cvk_rank_test* test, size_t r) { return test ? at(test->result.critical_values, r) : kNaN; }

double cvk_rank_test_eigenvalue(const cvk_rank_test* test, size_t i) {
    if (!test || i >= static_cast<size_t>(test->result.eigenvalues.size())) return kNaN;
    return test->result.eigenvalues(static_cast<Eigen::Index>(i));
}

int cvk_rank_test_selected(const cvk_rank_test* test) { return test ? test->result.selected_rank : -1; }
size_t cvk_rank_test_nobs(const cvk_rank_test* test) { return test ? static_cast<size_t>(test->result.n_obs_effective) : 0; }

/* ---- IRFs ---- */

cvk_irf_options cvk_irf_default_options(void) {
    cvk_irf_options o{};
    o.horizons = 40;
    o.shock = 0;
    o.bootstrap = 0;
    o.level = 0.95;
    o.seed = 0;
    o.threads = 0;
    o.ordering = nullptr;
    o.ordering_len = 0;
    return o;
}

cvk_status cvk_irf_var(const cvk_var_model* model, const cvk_irf_options* options, cvk_irf** out) {
    return guarded([&] {
        require(model && options && out, "null argument");
        const auto order = ordering_of(options);
        if (options->bootstrap > 0) {
            BootstrapOptions b;
            b.replications = options->bootstrap;
            b.level = options->level;
            b.seed = options->seed;
            b.threads = static_cast<std::size_t>(std::max(0, options->threads));
            *out = new cvk_irf{wild_bootstrap_irf(model->model, order, options->horizons, options->shock, b)};
        } else {
            const auto ident = cholesky_identify(model->model, order);
            *out = new cvk_irf{structural_irf(model->model, ident, options->horizons, options->shock)};
        }
    });
}

cvk_status cvk_irf_vecm(const cvk_vecm_model* model, const cvk_irf_options* options, cvk_irf** level,
                        cvk_irf** difference) {
    return guarded([&] {
        require(model && options && level && difference, "null argument");
        const auto order = ordering_of(options);
        VecmIrf irf;
        if (options->bootstrap > 0) {
            BootstrapOptions b;
            b.replications = options->bootstrap;
            b.level = options->level;
            b.seed = options->seed;
            b.threads = static_cast<std::size_t>(std::max(0, options->threads));
            irf = wild_bootstrap_irf(model->model, order, options->horizons, options->shock, b);
        } else {
            const auto ident = cholesky_identify(model->model, order);
            irf = vecm_structural_irf(model->model, ident, options->horizons, options->shock);
        }
        *level = new cvk_irf{std::move(irf.level)};
        *difference = new cvk_irf{std::move(irf.difference)};
    });
}

void cvk_irf_free(cvk_irf* irf) { delete irf; }
int cvk_irf_horizons(const cvk_irf* irf) { return irf ? irf->bundle.horizons : 0; }
size_t cvk_irf_series(const cvk_irf* irf) { return irf ? static_cast<size_t>(irf->bundle.point.cols()) : 0; }

const char* cvk_irf_label(const cvk_irf* irf, size_t series) {
    if (!irf || series >= irf->bundle.labels.size()) return nullptr;
    return irf->bundle.labels[series].c_str();
}

int cvk_irf_is_difference(const cvk_irf* irf) { return irf && irf->bundle.space == IrfSpace::Difference ? 1 : 0; }
int cvk_irf_has_bands(const cvk_irf* irf) { return irf && irf->bundle.has_bands() ? 1 : 0; }

namespace {
double cell(const cvk_irf* irf, const Eigen::MatrixXd& m, int horizon, size_t series) {
    if (!irf || horizon < 0 || horizon >= m.rows() || series >= static_cast<size_t>(m.cols())) return kNaN;
    return m(horizon, static_cast<Eigen::Index>(series));
}
}  // namespace

double cvk_irf_point(const cvk_irf* irf, int h, size_t s) { return irf ? cell(irf, irf->bundle.point, h, s) : kNaN; }
double cvk_irf_lower(const cvk_irf* irf, int h, size_t s) { return irf ? cell(irf, irf->bundle.lower, h, s) : kNaN; }
double cvk_irf_upper(const cvk_irf* irf, int h, size_t s) { return irf ? cell(irf, irf->bundle.upper, h, s) : kNaN; }
double cvk_irf_level(const cvk_irf* irf) { return irf ? irf->bundle.level : kNaN; }
int cvk_irf_replications(const cvk_irf* irf) { return irf ? irf->bundle.replications : 0; }
int cvk_irf_skipped(const cvk_irf* irf) { return irf ? irf->bundle.skipped : 0; }

/* ---- CVAR ---- */

cvk_status cvk_cvar_simple_difference(const cvk_panel* panel, int p, cvk_var_model** model, double* delta_ar,
                                      size_t delta_ar_capacity, int* treated_count) {
    return guarded([&] {
        require(panel && model, "null argument");
        auto fit = simple_difference_cvar(panel->panel, spec_from_roles(panel->panel, CvarMode::SimpleDifference, p));
        const auto& proxy = fit.diagnostics.delta_ar_proxy;
        if (delta_ar) {
            require(delta_ar_capacity >= proxy.size(), "delta_ar buffer too small");
            for (std::size_t i = 0; i < proxy.size(); ++i) delta_ar[i] = proxy[i];
        }
        if (treated_count) *treated_count = fit.diagnostics.treated_time_count;
        *model = new cvk_var_model{std::move(fit.model)};
    });
}

cvk_status cvk_cvar_vecm(const cvk_panel* panel, int p, int r, cvk_vecm_model** model) {
    return guarded([&] {
        require(panel && model, "null argument");
        const auto spec = spec_from_roles(panel->panel, CvarMode::Vecm, p, r);
        auto fit = vecm_cvar(panel->panel, spec, 0);
        *model = new cvk_vecm_model{std::move(fit.model)};
    });
}

cvk_status cvk_rank_controls(const cvk_panel* base, const cvk_control_candidate* candidates, size_t count, int p,
                             int target_rank, double level, cvk_critical_table table, cvk_control_ranking** out) {
    return guarded([&] {
        require(base && out && (candidates || count == 0), "null argument");
        const auto rows = base->panel.rows();
        std::vector<ControlCandidate> list;
        for (size_t i = 0; i < count; ++i) {
            const auto& c = candidates[i];
            require(c.name && c.values && c.labels, "null candidate field");
            ControlCandidate cand;
            cand.name = c.name;
            cand.values.resize(rows, static_cast<Eigen::Index>(c.cols));
            for (Eigen::Index t = 0; t < rows; ++t)
                for (size_t j = 0; j < c.cols; ++j) cand.values(t, static_cast<Eigen::Index>(j)) = c.values[static_cast<size_t>(t) * c.cols + j];
            for (size_t j = 0; j < c.cols; ++j) cand.labels.emplace_back(c.labels[j]);
            list.push_back(std::move(cand));
        }
        const auto t = table == CVK_TABLE_PAPER ? CriticalTable::Paper : CriticalTable::Standard;
        *out = new cvk_control_ranking{rank_controls(base->panel, list, p, target_rank, level, t)};
    });
}

void cvk_control_ranking_free(cvk_control_ranking* ranking) { delete ranking; }
size_t cvk_control_ranking_size(const cvk_control_ranking* r) { return r ? r->ranking.ranked.size() : 0; }

const char* cvk_control_ranking_name(const cvk_control_ranking* r, size_t i) {
    return r && i < r->ranking.ranked.size() ? r->ranking.ranked[i].name.c_str() : nullptr;
}

double cvk_control_ranking_statistic(const cvk_control_ranking* r, size_t i) {
    return r && i < r->ranking.ranked.size() ? r->ranking.ranked[i].trace_stat : kNaN;
}

int cvk_control_ranking_selected(const cvk_control_ranking* r, size_t i) {
    return r && i < r->ranking.ranked.size() ? r->ranking.ranked[i].selected_rank : -1;
}

size_t cvk_control_ranking_skipped(const cvk_control_ranking* r) { return r ? r->ranking.skipped.size() : 0; }

const char* cvk_control_ranking_skipped_name(const cvk_control_ranking* r, size_t i) {
    return r && i < r->ranking.skipped.size() ? r->ranking.skipped[i].first.c_str() : nullptr;
}

const char* cvk_control_ranking_skipped_reason(const cvk_control_ranking* r, size_t i) {
    return r && i < r->ranking.skipped.size() ? r->ranking.skipped[i].second.c_str() : nullptr;
}

/* ---- weights ---- */

cvk_status cvk_weights_gaussian(double mean, double sd, int grid_size, cvk_weights** out) {
    return guarded([&] {
        require(out != nullptr, "null argument");
        *out = new cvk_weights{gaussian_acrt_weights(mean, sd, grid_size)};
    });
}

cvk_status cvk_weights_acrt(const double* sample, size_t n, int grid_size, cvk_weights** out) {
    return guarded([&] {
        require(sample && out, "null argument");
        *out = new cvk_weights{acrt_weights(std::span<const double>(sample, n), grid_size)};
    });
}

cvk_status cvk_weights_nonneg(const double* sample, size_t n, int grid_size, cvk_weights** out) {
    return guarded([&] {
        require(sample && out, "null argument");
        *out = new cvk_weights{nonneg_weights(std::span<const double>(sample, n), grid_size)};
    });
}

void cvk_weights_free(cvk_weights* w) { delete w; }
size_t cvk_weights_grid_size(const cvk_weights* w) { return w ? w->profile.grid.size() : 0; }
double cvk_weights_grid(const cvk_weights* w, size_t i) { return w ? at(w->profile.grid, i) : kNaN; }
double cvk_weights_q(const cvk_weights* w, size_t i) { return w ? at(w->profile.q, i) : kNaN; }
double cvk_weights_theta(const cvk_weights* w, size_t i) { return w ? at(w->profile.theta, i) : kNaN; }
double cvk_weights_integral_q(const cvk_weights* w) { return w ? w->profile.integral_q() : kNaN; }
size_t cvk_weights_q1_size(const cvk_weights* w) { return w ? w->profile.q1.size() : 0; }
double cvk_weights_q1_grid(const cvk_weights* w, size_t i) { return w ? at(w->profile.q1_grid, i) : kNaN; }
double cvk_weights_q1(const cvk_weights* w, size_t i) { return w ? at(w->profile.q1, i) : kNaN; }
double cvk_weights_integral_q1(const cvk_weights* w) { return w ? w->profile.integral_q1() : kNaN; }
double cvk_weights_q0(const cvk_weights* w) { return w ? w->profile.q0 : kNaN; }
double cvk_weights_d_lower(const cvk_weights* w) { return w ? w->profile.d_lower : kNaN; }
double cvk_weights_d_upper(const cvk_weights* w) { return w ? w->profile.d_upper : kNaN; }

/* ---- simulation oracles ---- */

cvk_dgp_spec cvk_dgp_default(void) {
    const DgpSpec d;
    cvk_dgp_spec c{};
    c.policy = CVK_POLICY_BERNOULLI;
    c.pi = d.pi;
    c.sigma = d.sigma;
    c.zero_prob = d.zero_prob;
    c.d_lower = d.d_lower;
    c.d_upper = d.d_upper;
    c.scale = d.scale;
    c.response = CVK_RESPONSE_LINEAR;
    c.effect = d.effect;
    c.noise_sd = d.noise_sd;
    c.ar = d.ar;
    c.heterogeneity = d.heterogeneity;
    c.selection_bias = d.selection_bias;
    c.continuous = 0;
    c.outcomes = d.outcomes;
    c.layout = CVK_LAYOUT_PLAIN;
    c.T = d.T;
    c.seed = d.seed;
    return c;
}

cvk_status cvk_simulate_dgp(const cvk_dgp_spec* spec, cvk_panel** panel, cvk_ground_truth* truth) {
    return guarded([&] {
        require(spec && panel, "null argument");
        auto sample = simulate_dgp(to_spec(*spec));
        if (truth) {
            truth->ate = sample.truth.ate;
            truth->att = sample.truth.att;
            truth->acr = sample.truth.acr;
            truth->weighted_acr = sample.truth.weighted_acr;
            truth->mixture = sample.truth.mixture;
            truth->treated_count = sample.truth.treated_count;
        }
        *panel = wrap(std::move(sample.panel));
    });
}

cvk_status cvk_verify(const char* theorem, const cvk_dgp_spec* spec, int replications, cvk_report** out) {
    return guarded([&] {
        require(theorem && spec && out, "null argument");
        auto report = verify_theorem(parse_theorem(theorem), to_spec(*spec), replications);
        auto text = serialize(report);
        *out = new cvk_report{std::move(report), std::move(text)};
    });
}

void cvk_report_free(cvk_report* report) { delete report; }
int cvk_report_pass(const cvk_report* r) { return r && r->report.pass ? 1 : 0; }
double cvk_report_truth(const cvk_report* r) { return r ? r->report.truth : kNaN; }
double cvk_report_mean_gamma(const cvk_report* r) { return r ? r->report.mean_gamma : kNaN; }
double cvk_report_bias(const cvk_report* r) { return r ? r->report.bias : kNaN; }
double cvk_report_mc_se(const cvk_report* r) { return r ? r->report.mc_se : kNaN; }
double cvk_report_tolerance(const cvk_report* r) { return r ? r->report.tolerance : kNaN; }
const char* cvk_report_text(const cvk_report* r) { return r ? r->text.c_str() : nullptr; }

}  // extern "C"
