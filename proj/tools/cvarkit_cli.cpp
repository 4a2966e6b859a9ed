#include "cvarkit/cvarkit.h"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

namespace {

constexpr int kExitValidation = 2;
constexpr int kExitNumerical = 3;

struct Failure {
    int exit_code;
    std::string message;
};

void check(cvk_status status, const std::string& context) {
    if (status == CVK_OK) return;
    const int code = cvk_status_is_numerical(status) ? kExitNumerical : kExitValidation;
    throw Failure{code, context + ": " + cvk_last_error()};
}

[[noreturn]] void invalid(const std::string& message) { throw Failure{kExitValidation, message}; }

template <class T, void (*Free)(T*)>
struct Handle {
    T* ptr = nullptr;
    Handle() = default;
    Handle(const Handle&) = delete;
    Handle& operator=(const Handle&) = delete;
    Handle(Handle&& o) noexcept : ptr(o.ptr) { o.ptr = nullptr; }
    Handle& operator=(Handle&& o) noexcept {
        std::swap(ptr, o.ptr);
        return *this;
    }
    ~Handle() { if (ptr) Free(ptr); }
    T** out() { return &ptr; }
    T* get() const { return ptr; }
};

using Panel = Handle<cvk_panel, cvk_panel_free>;
using VarModel = Handle<cvk_var_model, cvk_var_free>;
using VecmModel = Handle<cvk_vecm_model, cvk_vecm_free>;
using Irf = Handle<cvk_irf, cvk_irf_free>;
using RankTest = Handle<cvk_rank_test, cvk_rank_test_free>;
using Ranking = Handle<cvk_control_ranking, cvk_control_ranking_free>;
using Report = Handle<cvk_report, cvk_report_free>;

std::string num(double v) {
    if (std::isnan(v)) return "NA";
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.10g", v);
    return buf;
}

std::string read_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) invalid("cannot open " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

std::string fnv1a64(const std::string& bytes) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

// Collects output files and writes them plus the manifest at the end.
class OutputTree {
public:
    explicit OutputTree(fs::path dir) : dir_(std::move(dir)) {}

    void add(const std::string& name, std::string content) { files_.emplace_back(name, std::move(content)); }

    void write(const json& manifest_base) {
        std::error_code ec;
        fs::create_directories(dir_, ec);
        if (ec) invalid("cannot create output directory " + dir_.string() + ": " + ec.message());
        json manifest = manifest_base;
        json outputs = json::array();
        for (const auto& [name, content] : files_) {
            std::ofstream out(dir_ / name, std::ios::binary);
            if (!out) invalid("cannot write " + (dir_ / name).string());
            out << content;
            outputs.push_back({{"file", name}, {"fnv1a64", fnv1a64(content)}});
        }
        manifest["outputs"] = outputs;
        std::ofstream out(dir_ / "manifest.json", std::ios::binary);
        out << manifest.dump(2) << "\n";
    }

private:
    fs::path dir_;
    std::vector<std::pair<std::string, std::string>> files_;
};

struct PipelineOptions {
    std::string input;
    std::string roles;
    int lags = 1;
    int rank = 1;
    std::string mode = "var";
    double dummy_quantile = 0.0;
    double dummy_threshold = NAN;
    bool difference = false;
    int policy_k = 1;
};

void add_pipeline_flags(CLI::App* cmd, PipelineOptions& o) {
    cmd->add_option("--input", o.input, "Panel CSV (first column is time)")->required()->check(CLI::ExistingFile);
    cmd->add_option("--roles", o.roles, "Role map file (name = policy:k | treated:j | control:j)")
        ->required()
        ->check(CLI::ExistingFile);
    cmd->add_option("--lags", o.lags, "Lag order p")->check(CLI::PositiveNumber);
    cmd->add_option("--rank", o.rank, "Cointegration rank for cvar-vecm")->check(CLI::NonNegativeNumber);
    cmd->add_option("--mode", o.mode, "Pipeline")->check(CLI::IsMember({"var", "cvar-diff", "cvar-vecm"}));
    cmd->add_option("--dummy-quantile", o.dummy_quantile, "Replace the policy by 1{value > quantile}")
        ->check(CLI::Range(0.0, 1.0));
    cmd->add_option("--dummy-threshold", o.dummy_threshold, "Replace the policy by 1{value > threshold}");
    cmd->add_option("--policy", o.policy_k, "Policy index k used by the dummy transform")->check(CLI::PositiveNumber);
    cmd->add_flag("--difference", o.difference, "First-difference the panel before fitting");
}

Panel load_input(const PipelineOptions& o) {
    Panel panel;
    check(cvk_panel_load(o.input.c_str(), o.roles.c_str(), panel.out()), "load");
    if (o.difference) {
        Panel diff;
        check(cvk_panel_first_difference(panel.get(), diff.out()), "difference");
        panel = std::move(diff);
    }
    if (o.dummy_quantile > 0.0 && !std::isnan(o.dummy_threshold)) invalid("--dummy-quantile and --dummy-threshold are exclusive");
    if (o.dummy_quantile > 0.0) {
        if (o.dummy_quantile >= 1.0) invalid("--dummy-quantile must lie in (0, 1)");
        Panel d;
        check(cvk_panel_dummy_transform(panel.get(), o.policy_k, o.dummy_quantile, d.out()), "dummy transform");
        panel = std::move(d);
    } else if (!std::isnan(o.dummy_threshold)) {
        Panel d;
        check(cvk_panel_dummy_threshold(panel.get(), o.policy_k, o.dummy_threshold, d.out()), "dummy transform");
        panel = std::move(d);
    }
    return panel;
}

std::vector<std::string> labels_of_panel(const cvk_panel* p) {
    std::vector<std::string> out;
    for (size_t i = 0; i < cvk_panel_cols(p); ++i) out.emplace_back(cvk_panel_label(p, i));
    return out;
}

json input_record(const std::string& path) {
    return {{"path", path}, {"fnv1a64", fnv1a64(read_file(path))}};
}

json base_manifest(const std::string& subcommand, const std::vector<std::string>& argv) {
    json m;
    m["tool"] = "cvarkit";
    m["version"] = cvk_version();
    m["subcommand"] = subcommand;
    m["argv"] = argv;
    return m;
}

void matrix_rows(std::string& csv, const std::string& block, const std::vector<double>& values, size_t rows,
                 size_t cols, const std::vector<std::string>& row_names, const std::vector<std::string>& col_names,
                 int lag) {
    for (size_t i = 0; i < rows; ++i)
        for (size_t j = 0; j < cols; ++j)
            csv += block + "," + row_names[i] + "," + col_names[j] + "," + std::to_string(lag) + "," +
                   num(values[i * cols + j]) + "\n";
}

std::string bg_table(const std::vector<cvk_bg_result>& rows) {
    std::string csv = "h,statistic,df,p_value,crit_90,crit_95,crit_99,reject_95\n";
    for (const auto& r : rows)
        csv += std::to_string(r.h_lags) + "," + num(r.statistic) + "," + std::to_string(r.df) + "," + num(r.p_value) + "," +
               num(r.critical_values[0]) + "," + num(r.critical_values[1]) + "," + num(r.critical_values[2]) + "," +
               (r.reject[1] ? "1" : "0") + "\n";
    return csv;
}

std::string irf_point_csv(const cvk_irf* irf) {
    std::string csv = "horizon,series,response\n";
    for (int h = 0; h <= cvk_irf_horizons(irf); ++h)
        for (size_t s = 0; s < cvk_irf_series(irf); ++s)
            csv += std::to_string(h) + "," + cvk_irf_label(irf, s) + "," + num(cvk_irf_point(irf, h, s)) + "\n";
    return csv;
}

std::string irf_bands_csv(const cvk_irf* irf) {
    std::string csv = "horizon,series,response,lower,upper\n";
    for (int h = 0; h <= cvk_irf_horizons(irf); ++h)
        for (size_t s = 0; s < cvk_irf_series(irf); ++s)
            csv += std::to_string(h) + "," + cvk_irf_label(irf, s) + "," + num(cvk_irf_point(irf, h, s)) + "," +
                   num(cvk_irf_lower(irf, h, s)) + "," + num(cvk_irf_upper(irf, h, s)) + "\n";
    return csv;
}

// Panel handed to the VAR-type pipelines: plain VAR drops the controls.
Panel var_panel(const cvk_panel* panel) {
    Panel out;
    check(cvk_panel_select_roles(panel, 1, 1, 0, out.out()), "select");
    return out;
}

void summarize_var(const cvk_var_model* m, std::string& csv) {
    const size_t n = cvk_var_dim(m);
    std::vector<std::string> names;
    for (size_t i = 0; i < n; ++i) names.emplace_back(cvk_var_label(m, i));
    std::vector<double> buf(n * n);
    for (int l = 1; l <= cvk_var_lags(m); ++l) {
        check(cvk_var_coefficients(m, l, buf.data()), "coefficients");
        matrix_rows(csv, "A", buf, n, n, names, names, l);
    }
    std::vector<double> c(n);
    check(cvk_var_intercept(m, c.data()), "intercept");
    matrix_rows(csv, "intercept", c, n, 1, names, {"1"}, 0);
    check(cvk_var_sigma(m, buf.data()), "sigma");
    matrix_rows(csv, "sigma", buf, n, n, names, names, 0);
    csv += "loglik,,,0," + num(cvk_var_loglik(m)) + "\n";
    csv += "nobs,,,0," + std::to_string(cvk_var_nobs(m)) + "\n";
}

void summarize_vecm(const cvk_vecm_model* m, std::string& csv) {
    const size_t n = cvk_vecm_dim(m);
    const auto r = static_cast<size_t>(cvk_vecm_rank(m));
    std::vector<std::string> names, ce;
    for (size_t i = 0; i < n; ++i) names.emplace_back(cvk_vecm_label(m, i));
    for (size_t i = 0; i < r; ++i) ce.push_back("ce" + std::to_string(i + 1));
    std::vector<double> buf(n * n), nr(n * std::max<size_t>(r, 1)), v(n);
    check(cvk_vecm_alpha(m, nr.data()), "alpha");
    matrix_rows(csv, "alpha", nr, n, r, names, ce, 0);
    check(cvk_vecm_beta(m, nr.data()), "beta");
    matrix_rows(csv, "beta", nr, n, r, names, ce, 0);
    check(cvk_vecm_pi(m, buf.data()), "pi");
    matrix_rows(csv, "pi", buf, n, n, names, names, 0);
    for (int l = 1; l < cvk_vecm_lags(m); ++l) {
        check(cvk_vecm_short_run(m, l, buf.data()), "short run");
        matrix_rows(csv, "short_run", buf, n, n, names, names, l);
    }
    check(cvk_vecm_constant(m, v.data()), "constant");
    matrix_rows(csv, "constant", v, n, 1, names, {"1"}, 0);
    check(cvk_vecm_sigma(m, buf.data()), "sigma");
    matrix_rows(csv, "sigma", buf, n, n, names, names, 0);
    check(cvk_vecm_eigenvalues(m, v.data()), "eigenvalues");
    for (size_t i = 0; i < n; ++i) csv += "eigenvalue," + std::to_string(i + 1) + ",,0," + num(v[i]) + "\n";
    if (cvk_vecm_long_run(m, buf.data()) == CVK_OK) matrix_rows(csv, "long_run_C", buf, n, n, names, names, 0);
    else csv += "long_run_C,,,0,NA\n";
    csv += "loglik,,,0," + num(cvk_vecm_loglik(m)) + "\n";
    csv += "nobs,,,0," + std::to_string(cvk_vecm_nobs(m)) + "\n";
}

int cmd_estimate(const PipelineOptions& o, int bg_lags, int p_max, const std::string& out_dir,
                 const std::vector<std::string>& argv) {
    auto panel = load_input(o);
    OutputTree tree(out_dir);
    std::string summary = "block,row,col,lag,value\n";
    std::vector<cvk_bg_result> bg;
    json extra;
    if (o.mode == "cvar-vecm") {
        VecmModel model;
        check(cvk_cvar_vecm(panel.get(), o.lags, o.rank, model.out()), "cvar-vecm");
        summarize_vecm(model.get(), summary);
        for (int h = 1; h <= bg_lags; ++h) {
            cvk_bg_result r{};
            check(cvk_vecm_breusch_godfrey(model.get(), h, &r), "breusch-godfrey");
            bg.push_back(r);
        }
    } else {
        VarModel model;
        if (o.mode == "cvar-diff") {
            std::vector<double> delta(cvk_panel_cols(panel.get()));
            int treated = 0;
            check(cvk_cvar_simple_difference(panel.get(), o.lags, model.out(), delta.data(), delta.size(), &treated),
                  "cvar-diff");
            std::string diag = "outcome,delta_ar_proxy,treated_periods\n";
            for (size_t i = 1; i < cvk_var_dim(model.get()); ++i)
                diag += std::string(cvk_var_label(model.get(), i)) + "," + num(delta[i - 1]) + "," + std::to_string(treated) + "\n";
            tree.add("cvar_diagnostics.csv", diag);
        } else {
            auto sub = var_panel(panel.get());
            check(cvk_var_estimate(sub.get(), o.lags, 1, model.out()), "var");
        }
        summarize_var(model.get(), summary);
        for (int h = 1; h <= bg_lags; ++h) {
            cvk_bg_result r{};
            check(cvk_var_breusch_godfrey(model.get(), h, &r), "breusch-godfrey");
            bg.push_back(r);
        }
    }
    tree.add("model_summary.csv", summary);
    tree.add("residual_diagnostics.csv", bg_table(bg));
    if (p_max > 0) {
        auto sub = o.mode == "var" ? var_panel(panel.get()) : Panel{};
        const cvk_panel* target = o.mode == "var" ? sub.get() : panel.get();
        std::vector<double> bic(static_cast<size_t>(p_max));
        int p_star = 0;
        check(cvk_var_select_lag_bic(target, p_max, 1, &p_star, bic.data()), "bic");
        std::string csv = "p,bic,selected\n";
        for (int p = 1; p <= p_max; ++p)
            csv += std::to_string(p) + "," + num(bic[static_cast<size_t>(p - 1)]) + "," + (p == p_star ? "1" : "0") + "\n";
        tree.add("bic_table.csv", csv);
    }
    auto manifest = base_manifest("estimate", argv);
    manifest["inputs"] = {input_record(o.input), input_record(o.roles)};
    manifest["seed"] = nullptr;
    tree.write(manifest);
    std::cout << "wrote " << out_dir << "/model_summary.csv\n";
    return 0;
}

int cmd_irf(const PipelineOptions& o, int horizons, int bootstrap, double level, std::uint64_t seed, bool seed_set,
            int shock, const std::string& out_dir, const std::vector<std::string>& argv) {
    if (bootstrap > 0 && !seed_set) invalid("--seed is required when --bootstrap > 0");
    auto panel = load_input(o);
    auto options = cvk_irf_default_options();
    options.horizons = horizons;
    options.bootstrap = bootstrap;
    options.level = level;
    options.seed = seed;
    options.shock = shock;

    OutputTree tree(out_dir);
    if (o.mode == "cvar-vecm") {
        VecmModel model;
        check(cvk_cvar_vecm(panel.get(), o.lags, o.rank, model.out()), "cvar-vecm");
        Irf lvl, diff;
        check(cvk_irf_vecm(model.get(), &options, lvl.out(), diff.out()), "irf");
        tree.add("irf_point.csv", irf_point_csv(lvl.get()));
        tree.add("irf_diff_point.csv", irf_point_csv(diff.get()));
        if (bootstrap > 0) {
            tree.add("irf_bands.csv", irf_bands_csv(lvl.get()));
            tree.add("irf_diff_bands.csv", irf_bands_csv(diff.get()));
        }
    } else {
        VarModel model;
        if (o.mode == "cvar-diff") {
            check(cvk_cvar_simple_difference(panel.get(), o.lags, model.out(), nullptr, 0, nullptr), "cvar-diff");
        } else {
            auto sub = var_panel(panel.get());
            check(cvk_var_estimate(sub.get(), o.lags, 1, model.out()), "var");
        }
        Irf irf;
        check(cvk_irf_var(model.get(), &options, irf.out()), "irf");
        tree.add("irf_point.csv", irf_point_csv(irf.get()));
        if (bootstrap > 0) tree.add("irf_bands.csv", irf_bands_csv(irf.get()));
    }
    auto manifest = base_manifest("irf", argv);
    manifest["inputs"] = {input_record(o.input), input_record(o.roles)};
    if (bootstrap > 0) {
        manifest["seed"] = seed;
        manifest["generator"] = "mt19937_64, replication b seeded by splitmix64(seed, b); Rademacher multipliers";
    } else {
        manifest["seed"] = nullptr;
    }
    tree.write(manifest);
    std::cout << "wrote " << out_dir << "/irf_point.csv\n";
    return 0;
}

struct Candidate {
    std::string name;
    std::string path;
    std::vector<std::string> labels;
    std::vector<double> values;
    size_t cols = 0;
};

Candidate load_candidate(const std::string& spec, size_t rows) {
    const auto eq = spec.find('=');
    if (eq == std::string::npos || eq == 0) invalid("--candidate expects NAME=path.csv, got `" + spec + "`");
    Candidate c;
    c.name = spec.substr(0, eq);
    c.path = spec.substr(eq + 1);
    const auto text = read_file(c.path);
    const auto header = text.substr(0, text.find('\n'));
    std::string roles;
    std::stringstream ss(header);
    std::string cell;
    std::getline(ss, cell, ',');  // time column
    int j = 0;
    while (std::getline(ss, cell, ',')) {
        if (!cell.empty() && cell.back() == '\r') cell.pop_back();
        roles += cell + " = treated:" + std::to_string(++j) + "\n";
    }
    Panel p;
    check(cvk_panel_parse(text.c_str(), roles.c_str(), p.out()), "candidate " + c.name);
    if (cvk_panel_rows(p.get()) != rows)
        invalid("candidate " + c.name + " has " + std::to_string(cvk_panel_rows(p.get())) + " rows, input has " +
                std::to_string(rows));
    c.cols = cvk_panel_cols(p.get());
    c.values.resize(rows * c.cols);
    check(cvk_panel_values(p.get(), c.values.data(), c.values.size()), "candidate " + c.name);
    c.labels = labels_of_panel(p.get());
    return c;
}

int cmd_rank_test(const PipelineOptions& o, double level, const std::string& table_name,
                  const std::vector<std::string>& candidate_specs, int target_rank, const std::string& out_dir,
                  const std::vector<std::string>& argv) {
    auto panel = load_input(o);
    const auto table = table_name == "paper" ? CVK_TABLE_PAPER : CVK_TABLE_STANDARD;
    OutputTree tree(out_dir);
    auto manifest = base_manifest("rank-test", argv);
    json inputs = {input_record(o.input), input_record(o.roles)};

    if (candidate_specs.empty()) {
        RankTest test;
        check(cvk_johansen_trace_test(panel.get(), o.lags, level, table, test.out()), "rank test");
        std::string csv = "null_rank,eigenvalue,trace_stat,critical_value,reject\n";
        for (size_t r = 0; r < cvk_rank_test_size(test.get()); ++r) {
            const double stat = cvk_rank_test_statistic(test.get(), r);
            const double crit = cvk_rank_test_critical(test.get(), r);
            csv += std::to_string(r) + "," + num(cvk_rank_test_eigenvalue(test.get(), r)) + "," + num(stat) + "," +
                   num(crit) + "," + (stat > crit ? "1" : "0") + "\n";
        }
        tree.add("trace_table.csv", csv);
        std::cout << "selected rank " << cvk_rank_test_selected(test.get()) << "\n";
    } else {
        Panel base;
        check(cvk_panel_select_roles(panel.get(), 1, 1, 0, base.out()), "select");
        const size_t rows = cvk_panel_rows(base.get());
        const size_t base_cols = cvk_panel_cols(base.get());
        std::vector<double> base_values(rows * base_cols);
        check(cvk_panel_values(base.get(), base_values.data(), base_values.size()), "values");
        std::vector<std::string> base_roles;
        for (size_t i = 0; i < base_cols; ++i) base_roles.emplace_back(cvk_panel_role(base.get(), i));
        const auto base_labels = labels_of_panel(base.get());

        std::vector<Candidate> cands;
        for (const auto& spec : candidate_specs) {
            cands.push_back(load_candidate(spec, rows));
            inputs.push_back(input_record(cands.back().path));
        }

        // Full trace column per candidate, laid out side by side.
        std::vector<std::vector<double>> stats(cands.size());
        std::vector<double> crit;
        for (size_t c = 0; c < cands.size(); ++c) {
            const auto& cand = cands[c];
            const size_t cols = base_cols + cand.cols;
            std::vector<double> joined(rows * cols);
            std::vector<std::string> labels = base_labels, roles = base_roles;
            for (size_t j = 0; j < cand.cols; ++j) {
                labels.push_back(cand.labels[j]);
                roles.push_back("control:" + std::to_string(j + 1));
            }
            for (size_t t = 0; t < rows; ++t) {
                for (size_t j = 0; j < base_cols; ++j) joined[t * cols + j] = base_values[t * base_cols + j];
                for (size_t j = 0; j < cand.cols; ++j) joined[t * cols + base_cols + j] = cand.values[t * cand.cols + j];
            }
            std::vector<const char*> lp, rp;
            for (size_t j = 0; j < cols; ++j) {
                lp.push_back(labels[j].c_str());
                rp.push_back(roles[j].c_str());
            }
            Panel system;
            check(cvk_panel_from_matrix(joined.data(), rows, cols, lp.data(), rp.data(), system.out()), cand.name);
            RankTest test;
            if (cvk_johansen_trace_test(system.get(), o.lags, level, table, test.out()) != CVK_OK) {
                std::cerr << "warning: candidate " << cand.name << " skipped: " << cvk_last_error() << "\n";
                continue;
            }
            for (size_t r = 0; r < cvk_rank_test_size(test.get()); ++r) {
                stats[c].push_back(cvk_rank_test_statistic(test.get(), r));
                if (crit.size() <= r) crit.push_back(cvk_rank_test_critical(test.get(), r));
            }
        }
        std::string csv = "null_rank";
        for (const auto& cand : cands) csv += "," + cand.name;
        csv += ",critical_value\n";
        for (size_t r = 0; r < crit.size(); ++r) {
            csv += std::to_string(r);
            for (const auto& s : stats) csv += "," + (r < s.size() ? num(s[r]) : std::string("NA"));
            csv += "," + num(crit[r]) + "\n";
        }
        tree.add("trace_table.csv", csv);

        std::vector<cvk_control_candidate> cc;
        std::vector<std::vector<const char*>> label_ptrs(cands.size());
        for (size_t c = 0; c < cands.size(); ++c) {
            for (const auto& l : cands[c].labels) label_ptrs[c].push_back(l.c_str());
            cc.push_back({cands[c].name.c_str(), cands[c].values.data(), cands[c].cols, label_ptrs[c].data()});
        }
        Ranking ranking;
        check(cvk_rank_controls(panel.get(), cc.data(), cc.size(), o.lags, target_rank, level, table, ranking.out()),
              "rank controls");
        std::string rk = "position,candidate,trace_stat,selected_rank\n";
        for (size_t i = 0; i < cvk_control_ranking_size(ranking.get()); ++i)
            rk += std::to_string(i + 1) + "," + cvk_control_ranking_name(ranking.get(), i) + "," +
                  num(cvk_control_ranking_statistic(ranking.get(), i)) + "," +
                  std::to_string(cvk_control_ranking_selected(ranking.get(), i)) + "\n";
        for (size_t i = 0; i < cvk_control_ranking_skipped(ranking.get()); ++i)
            std::cerr << "warning: candidate " << cvk_control_ranking_skipped_name(ranking.get(), i)
                      << " skipped: " << cvk_control_ranking_skipped_reason(ranking.get(), i) << "\n";
        tree.add("control_ranking.csv", rk);
        if (cvk_control_ranking_size(ranking.get()) > 0)
            std::cout << "best control: " << cvk_control_ranking_name(ranking.get(), 0) << "\n";
    }
    manifest["inputs"] = inputs;
    manifest["seed"] = nullptr;
    tree.write(manifest);
    return 0;
}

struct VerifyOptions {
    std::string theorem;
    std::string policy;
    std::string response = "linear";
    cvk_dgp_spec spec = cvk_dgp_default();
    int reps = 50;
    std::uint64_t seed = 0;
    bool continuous = false;
};

int cmd_verify(VerifyOptions v, bool seed_set, const std::string& out_dir, const std::vector<std::string>& argv) {
    if (!seed_set) invalid("--seed is required for verify");
    if (v.policy.empty()) {
        if (v.theorem == "T2" || v.theorem == "T3" || v.theorem == "T9" || (v.theorem == "T5" && v.continuous))
            v.policy = "gaussian";
        else if (v.theorem == "T4")
            v.policy = "nonnegative";
        else
            v.policy = "bernoulli";
    }
    if (v.theorem == "T4" && v.response == "linear" && argv.end() == std::find(argv.begin(), argv.end(), "--response"))
        v.response = "square";
    v.spec.policy = v.policy == "gaussian" ? CVK_POLICY_GAUSSIAN
                    : v.policy == "nonnegative" ? CVK_POLICY_NONNEGATIVE
                                                : CVK_POLICY_BERNOULLI;
    v.spec.response = v.response == "cube" ? CVK_RESPONSE_CUBE
                      : v.response == "square" ? CVK_RESPONSE_SQUARE
                                               : CVK_RESPONSE_LINEAR;
    v.spec.continuous = v.continuous ? 1 : 0;
    v.spec.seed = v.seed;

    Report report;
    check(cvk_verify(v.theorem.c_str(), &v.spec, v.reps, report.out()), "verify");
    OutputTree tree(out_dir);
    tree.add("verification_report.txt", cvk_report_text(report.get()));
    auto manifest = base_manifest("verify", argv);
    manifest["inputs"] = json::array();
    manifest["seed"] = v.seed;
    manifest["generator"] = "mt19937_64, replication r seeded by splitmix64(seed, r)";
    tree.write(manifest);
    std::cout << v.theorem << ": " << (cvk_report_pass(report.get()) ? "PASS" : "FAIL")
              << " mean_gamma=" << num(cvk_report_mean_gamma(report.get()))
              << " truth=" << num(cvk_report_truth(report.get())) << " bias=" << num(cvk_report_bias(report.get()))
              << " tolerance=" << num(cvk_report_tolerance(report.get())) << "\n";
    return 0;
}

// Arguments without the output directory, so replays from any location hash identically.
std::vector<std::string> replayable(const std::vector<std::string>& args) {
    std::vector<std::string> out;
    for (size_t i = 0; i < args.size(); ++i) {
        if (args[i] == "--out") {
            ++i;
            continue;
        }
        if (args[i].rfind("--out=", 0) == 0) continue;
        out.push_back(args[i]);
    }
    return out;
}

int run(const std::vector<std::string>& args);

int cmd_replay(const std::string& manifest_path, const std::string& out_dir) {
    json manifest;
    try {
        manifest = json::parse(read_file(manifest_path));
    } catch (const json::exception& e) {
        invalid(std::string("manifest is not valid JSON: ") + e.what());
    }
    if (!manifest.contains("argv") || !manifest["argv"].is_array()) invalid("manifest has no argv");
    auto args = manifest["argv"].get<std::vector<std::string>>();
    args.push_back("--out");
    args.push_back(out_dir);
    return run(args);
}

int run(const std::vector<std::string>& args) {
    CLI::App app{"Causal VAR / VECM toolkit"};
    app.require_subcommand(1);
    app.set_version_flag("--version", cvk_version());

    PipelineOptions po;
    std::string out_dir = "out";
    int bg_lags = 3, p_max = 0, horizons = 40, bootstrap = 0, shock = 0, target_rank = 1;
    double level = 0.95;
    std::uint64_t seed = 0;
    std::string table = "standard";
    std::vector<std::string> candidates;
    VerifyOptions vo;
    std::string manifest_path;

    auto* est = app.add_subcommand("estimate", "Fit a VAR, simple-difference CVAR or VECM CVAR");
    add_pipeline_flags(est, po);
    est->add_option("--bg-lags", bg_lags, "Breusch-Godfrey lags 1..h")->check(CLI::NonNegativeNumber);
    est->add_option("--p-max", p_max, "Also write the BIC table for p = 1..p-max")->check(CLI::NonNegativeNumber);
    est->add_option("--out", out_dir, "Output directory");

    auto* irf = app.add_subcommand("irf", "Structural impulse responses with optional wild-bootstrap bands");
    add_pipeline_flags(irf, po);
    irf->add_option("--horizons", horizons, "Last horizon H")->check(CLI::NonNegativeNumber);
    irf->add_option("--bootstrap", bootstrap, "Bootstrap replications (0: none)")->check(CLI::NonNegativeNumber);
    irf->add_option("--level", level, "Band coverage")->check(CLI::Range(0.0, 1.0));
    auto* irf_seed = irf->add_option("--seed", seed, "Master seed");
    irf->add_option("--shock", shock, "Policy shock (0-based)")->check(CLI::NonNegativeNumber);
    irf->add_option("--out", out_dir, "Output directory");

    auto* rank = app.add_subcommand("rank-test", "Johansen trace test and control ranking");
    add_pipeline_flags(rank, po);
    rank->add_option("--level", level, "Test level")->check(CLI::IsMember({0.90, 0.95, 0.99}));
    rank->add_option("--critical-table", table, "Critical values")->check(CLI::IsMember({"standard", "paper"}));
    rank->add_option("--candidate", candidates, "NAME=controls.csv, repeatable");
    rank->add_option("--target-rank", target_rank, "Rank at which candidates are compared")->check(CLI::NonNegativeNumber);
    rank->add_option("--out", out_dir, "Output directory");

    auto* ver = app.add_subcommand("verify", "Monte Carlo check of an identification result");
    ver->add_option("--theorem", vo.theorem, "T1, T2, T3, T4, T5, T8 or T9")
        ->required()
        ->check(CLI::IsMember({"T1", "T2", "T3", "T4", "T5", "T8", "T9"}));
    ver->add_option("--policy", vo.policy, "Policy law")->check(CLI::IsMember({"bernoulli", "gaussian", "nonnegative"}));
    ver->add_option("--pi", vo.spec.pi, "Bernoulli probability");
    ver->add_option("--sigma", vo.spec.sigma, "Gaussian standard deviation");
    ver->add_option("--zero-prob", vo.spec.zero_prob, "P(W = 0) for nonnegative policies");
    ver->add_option("--d-lower", vo.spec.d_lower, "Lower end of the positive support");
    ver->add_option("--d-upper", vo.spec.d_upper, "Upper end of the positive support");
    ver->add_option("--scale", vo.spec.scale, "Exponential scale of the positive part");
    ver->add_option("--response", vo.response, "m(w) = effect * w^k")->check(CLI::IsMember({"linear", "square", "cube"}));
    ver->add_option("--effect", vo.spec.effect, "Effect size");
    ver->add_option("--noise", vo.spec.noise_sd, "Outcome noise sd");
    ver->add_option("--ar", vo.spec.ar, "Autoregressive coefficient of the noise");
    ver->add_option("--heterogeneity", vo.spec.heterogeneity, "Sd of the unit-level effect");
    ver->add_option("--selection-bias", vo.spec.selection_bias, "Dependence of W on outcome shocks");
    ver->add_flag("--continuous", vo.continuous, "T5 with a Gaussian policy");
    ver->add_option("--outcomes", vo.spec.outcomes, "Treated/control pairs for T8/T9")->check(CLI::PositiveNumber);
    ver->add_option("--T", vo.spec.T, "Sample length")->check(CLI::PositiveNumber);
    ver->add_option("--reps", vo.reps, "Replications")->check(CLI::PositiveNumber);
    auto* ver_seed = ver->add_option("--seed", vo.seed, "Master seed");
    ver->add_option("--out", out_dir, "Output directory");

    auto* rep = app.add_subcommand("replay", "Re-run the command recorded in a manifest");
    rep->add_option("--manifest", manifest_path, "manifest.json")->required()->check(CLI::ExistingFile);
    rep->add_option("--out", out_dir, "Output directory");

    std::vector<std::string> argv_store{"cvarkit"};
    argv_store.insert(argv_store.end(), args.begin(), args.end());
    std::vector<char*> argv;
    for (auto& a : argv_store) argv.push_back(a.data());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::Success& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitValidation;
    }

    const auto recorded = replayable(args);
    try {
        if (*est) return cmd_estimate(po, bg_lags, p_max, out_dir, recorded);
        if (*irf) return cmd_irf(po, horizons, bootstrap, level, seed, irf_seed->count() > 0, shock, out_dir, recorded);
        if (*rank) return cmd_rank_test(po, level, table, candidates, target_rank, out_dir, recorded);
        if (*ver) {
            vo.seed = seed;
            if (ver_seed->count() > 0) vo.seed = std::stoull(ver_seed->as<std::string>());
            return cmd_verify(vo, ver_seed->count() > 0, out_dir, recorded);
        }
        if (*rep) return cmd_replay(manifest_path, out_dir);
    } catch (const Failure& f) {
        std::cerr << "error: " << f.message << "\n";
        return f.exit_code;
    }
    return kExitValidation;
}

}  // namespace

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    try {
        return run(args);
    } catch (const Failure& f) {
        std::cerr << "error: " << f.message << "\n";
        return f.exit_code;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitValidation;
    }
}
