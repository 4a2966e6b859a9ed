#include "cvarkit/panel.hpp"

#include "cvarkit/error.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <fstream>
#include <numeric>
#include <set>
#include <sstream>
#include <string_view>

namespace cvarkit {

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    return s;
}

std::string_view unquote(std::string_view s) {
    s = trim(s);
    if (s.size() >= 2 && s.front() == '"' && s.back() == '"') s = s.substr(1, s.size() - 2);
    return s;
}

std::vector<std::string_view> split_commas(std::string_view line) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (true) {
        const auto pos = line.find(',', start);
        if (pos == std::string_view::npos) {
            out.push_back(line.substr(start));
            break;
        }
        out.push_back(line.substr(start, pos - start));
        start = pos + 1;
    }
    return out;
}

std::vector<std::string_view> split_lines(std::string_view text) {
    std::vector<std::string_view> lines;
    std::size_t start = 0;
    while (start <= text.size()) {
        auto pos = text.find('\n', start);
        if (pos == std::string_view::npos) pos = text.size();
        auto line = text.substr(start, pos - start);
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        lines.push_back(line);
        start = pos + 1;
    }
    while (!lines.empty() && trim(lines.back()).empty()) lines.pop_back();
    return lines;
}

bool parse_int(std::string_view s, long long& out) {
    const auto* first = s.data();
    const auto* last = s.data() + s.size();
    if (first != last && *first == '+') ++first;
    auto [ptr, ec] = std::from_chars(first, last, out);
    return ec == std::errc{} && ptr == last;
}

// Integer ticks, or ISO dates (YYYY-MM-DD / YYYY-MM) mapped to a day count.
bool parse_time(std::string_view s, long long& ordinal) {
    if (parse_int(s, ordinal)) return true;
    long long y = 0, m = 0, d = 1;
    if (s.size() == 10 && s[4] == '-' && s[7] == '-') {
        if (!parse_int(s.substr(0, 4), y) || !parse_int(s.substr(5, 2), m) || !parse_int(s.substr(8, 2), d))
            return false;
    } else if (s.size() == 7 && s[4] == '-') {
        if (!parse_int(s.substr(0, 4), y) || !parse_int(s.substr(5, 2), m)) return false;
    } else {
        return false;
    }
    const std::chrono::year_month_day ymd{std::chrono::year{static_cast<int>(y)},
                                          std::chrono::month{static_cast<unsigned>(m)},
                                          std::chrono::day{static_cast<unsigned>(d)}};
    if (!ymd.ok()) return false;
    ordinal = std::chrono::sys_days{ymd}.time_since_epoch().count();
    return true;
}

int role_rank(RoleKind kind) {
    switch (kind) {
        case RoleKind::Policy: return 0;
        case RoleKind::TreatedOutcome: return 1;
        case RoleKind::ControlOutcome: return 2;
    }
    return 3;
}

void validate_roles(const std::vector<SeriesRole>& roles) {
    std::set<int> policies;
    std::set<int> treated;
    std::set<int> controls;
    for (const auto& role : roles) {
        if (role.index < 1) fail(ErrorCode::InvalidRoles, "role indices are 1-based, got " + to_string(role));
        auto& bucket = role.kind == RoleKind::Policy           ? policies
                       : role.kind == RoleKind::TreatedOutcome ? treated
                                                               : controls;
        if (!bucket.insert(role.index).second) fail(ErrorCode::InvalidRoles, "duplicate role " + to_string(role));
    }
    for (int j : controls) {
        if (!treated.contains(j))
            fail(ErrorCode::InvalidRoles, "control:" + std::to_string(j) + " has no matching treated:" + std::to_string(j));
    }
}

}  // namespace

std::string to_string(const SeriesRole& role) {
    switch (role.kind) {
        case RoleKind::Policy: return "policy:" + std::to_string(role.index);
        case RoleKind::TreatedOutcome: return "treated:" + std::to_string(role.index);
        case RoleKind::ControlOutcome: return "control:" + std::to_string(role.index);
    }
    return "?";
}

RoleMap parse_role_map(const std::string& text) {
    RoleMap map;
    std::istringstream in(text);
    std::string raw;
    int line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        std::string_view line = raw;
        if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        const auto colon = line.rfind(':');
        if (eq == std::string_view::npos || colon == std::string_view::npos || colon < eq)
            fail(ErrorCode::InvalidRoles, "line " + std::to_string(line_no) + ": expected `name = kind:index`");
        const std::string name{unquote(line.substr(0, eq))};
        const auto kind = trim(line.substr(eq + 1, colon - eq - 1));
        long long index = 0;
        if (!parse_int(trim(line.substr(colon + 1)), index))
            fail(ErrorCode::InvalidRoles, "line " + std::to_string(line_no) + ": bad index");
        SeriesRole role;
        if (kind == "policy") role.kind = RoleKind::Policy;
        else if (kind == "treated") role.kind = RoleKind::TreatedOutcome;
        else if (kind == "control") role.kind = RoleKind::ControlOutcome;
        else fail(ErrorCode::InvalidRoles, "line " + std::to_string(line_no) + ": unknown role `" + std::string(kind) + "`");
        role.index = static_cast<int>(index);
        if (name.empty() || !map.emplace(name, role).second)
            fail(ErrorCode::InvalidRoles, "line " + std::to_string(line_no) + ": empty or repeated column name");
    }
    return map;
}

RoleMap load_role_map(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) fail(ErrorCode::Io, "cannot open role map " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_role_map(buf.str());
}

TimeSeriesPanel::TimeSeriesPanel(Eigen::MatrixXd observations, std::vector<std::string> labels,
                                 std::vector<SeriesRole> roles, std::vector<std::string> time_labels) {
    const auto n = observations.cols();
    if (static_cast<Eigen::Index>(labels.size()) != n || static_cast<Eigen::Index>(roles.size()) != n)
        fail(ErrorCode::InvalidArgument, "labels/roles must match the number of columns");
    if (!time_labels.empty() && static_cast<Eigen::Index>(time_labels.size()) != observations.rows())
        fail(ErrorCode::InvalidArgument, "time labels must match the number of rows");
    if (!observations.allFinite()) fail(ErrorCode::NonNumericCell, "observations contain NaN or infinite values");
    if (std::set<std::string>(labels.begin(), labels.end()).size() != labels.size())
        fail(ErrorCode::InvalidArgument, "series labels must be unique");
    validate_roles(roles);

    std::vector<int> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
        const auto ra = role_rank(roles[a].kind);
        const auto rb = role_rank(roles[b].kind);
        return ra != rb ? ra < rb : roles[a].index < roles[b].index;
    });

    values_.resize(observations.rows(), n);
    for (Eigen::Index c = 0; c < n; ++c) {
        const int src = order[static_cast<std::size_t>(c)];
        values_.col(c) = observations.col(src);
        labels_.push_back(std::move(labels[src]));
        roles_.push_back(roles[src]);
    }
    if (time_labels.empty()) {
        time_labels_.reserve(static_cast<std::size_t>(observations.rows()));
        for (Eigen::Index t = 0; t < observations.rows(); ++t) time_labels_.push_back(std::to_string(t));
    } else {
        time_labels_ = std::move(time_labels);
    }
}

std::vector<int> TimeSeriesPanel::columns_with(RoleKind kind) const {
    std::vector<int> out;
    for (std::size_t i = 0; i < roles_.size(); ++i)
        if (roles_[i].kind == kind) out.push_back(static_cast<int>(i));
    return out;
}

int TimeSeriesPanel::policy_count() const {
    return static_cast<int>(columns_with(RoleKind::Policy).size());
}

int TimeSeriesPanel::column_of(const std::string& label) const {
    const auto it = std::find(labels_.begin(), labels_.end(), label);
    return it == labels_.end() ? -1 : static_cast<int>(it - labels_.begin());
}

TimeSeriesPanel TimeSeriesPanel::with_column(int col, const Eigen::VectorXd& values) const {
    if (col < 0 || col >= cols() || values.size() != rows())
        fail(ErrorCode::InvalidArgument, "with_column: index or length mismatch");
    Eigen::MatrixXd data = values_;
    data.col(col) = values;
    return TimeSeriesPanel(std::move(data), labels_, roles_, time_labels_);
}

TimeSeriesPanel TimeSeriesPanel::select(const std::vector<int>& cols) const {
    Eigen::MatrixXd data(rows(), static_cast<Eigen::Index>(cols.size()));
    std::vector<std::string> labels;
    std::vector<SeriesRole> roles;
    for (std::size_t i = 0; i < cols.size(); ++i) {
        const int c = cols[i];
        if (c < 0 || c >= this->cols()) fail(ErrorCode::InvalidArgument, "select: column out of range");
        data.col(static_cast<Eigen::Index>(i)) = values_.col(c);
        labels.push_back(labels_[static_cast<std::size_t>(c)]);
        roles.push_back(roles_[static_cast<std::size_t>(c)]);
    }
    return TimeSeriesPanel(std::move(data), std::move(labels), std::move(roles), time_labels_);
}

TimeSeriesPanel parse_panel(const std::string& csv_text, const RoleMap& roles) {
    const auto lines = split_lines(csv_text);
    if (lines.empty()) fail(ErrorCode::InvalidArgument, "CSV is empty");

    const auto header_cells = split_commas(lines.front());
    if (header_cells.size() < 2) fail(ErrorCode::InvalidArgument, "CSV needs a time column and at least one series");
    std::vector<std::string> header;
    for (auto cell : header_cells) header.emplace_back(unquote(cell));

    for (const auto& [name, role] : roles) {
        if (std::find(header.begin() + 1, header.end(), name) == header.end())
            fail(ErrorCode::MissingColumn, "role map names column `" + name + "` which is not in the CSV header");
    }
    std::vector<std::string> labels;
    std::vector<SeriesRole> series_roles;
    for (std::size_t c = 1; c < header.size(); ++c) {
        const auto it = roles.find(header[c]);
        if (it == roles.end()) fail(ErrorCode::UnassignedColumn, "column `" + header[c] + "` has no role");
        labels.push_back(header[c]);
        series_roles.push_back(it->second);
    }

    const auto n_rows = static_cast<Eigen::Index>(lines.size() - 1);
    const auto n_cols = static_cast<Eigen::Index>(header.size() - 1);
    Eigen::MatrixXd data(n_rows, n_cols);
    std::vector<std::string> times;
    times.reserve(static_cast<std::size_t>(n_rows));
    long long previous = 0;
    for (Eigen::Index r = 0; r < n_rows; ++r) {
        const auto cells = split_commas(lines[static_cast<std::size_t>(r + 1)]);
        const auto line_no = std::to_string(r + 2);
        if (cells.size() != header.size())
            fail(ErrorCode::NonNumericCell, "line " + line_no + ": expected " + std::to_string(header.size()) + " cells");
        const auto time_cell = unquote(cells[0]);
        long long ordinal = 0;
        if (!parse_time(time_cell, ordinal))
            fail(ErrorCode::InvalidArgument, "line " + line_no + ": unparseable time `" + std::string(time_cell) + "`");
        if (r > 0 && ordinal == previous) fail(ErrorCode::DuplicateTimestamp, "line " + line_no + ": repeated time");
        if (r > 0 && ordinal < previous) fail(ErrorCode::UnorderedTimestamps, "line " + line_no + ": time goes backwards");
        previous = ordinal;
        times.emplace_back(time_cell);
        for (Eigen::Index c = 0; c < n_cols; ++c) {
            const auto cell = trim(cells[static_cast<std::size_t>(c + 1)]);
            double value = 0.0;
            const auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), value);
            if (cell.empty() || ec != std::errc{} || ptr != cell.data() + cell.size() || !std::isfinite(value))
                fail(ErrorCode::NonNumericCell,
                     "line " + line_no + ", column `" + labels[static_cast<std::size_t>(c)] + "`: `" + std::string(cell) + "`");
            data(r, c) = value;
        }
    }
    return TimeSeriesPanel(std::move(data), std::move(labels), std::move(series_roles), std::move(times));
}

TimeSeriesPanel load_panel(const std::filesystem::path& csv_path, const RoleMap& roles) {
    std::ifstream in(csv_path, std::ios::binary);
    if (!in) fail(ErrorCode::Io, "cannot open " + csv_path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_panel(buf.str(), roles);
}

TimeSeriesPanel first_difference(const TimeSeriesPanel& panel) {
    const auto t = panel.rows();
    if (t < 2) fail(ErrorCode::TooShort, "first_difference needs at least 2 rows");
    Eigen::MatrixXd diff = panel.values().bottomRows(t - 1) - panel.values().topRows(t - 1);
    std::vector<std::string> times(panel.time_labels().begin() + 1, panel.time_labels().end());
    return TimeSeriesPanel(std::move(diff), panel.labels(), panel.roles(), std::move(times));
}

TimeSeriesPanel combine(const TimeSeriesPanel& left, const TimeSeriesPanel& right) {
    if (left.rows() != right.rows()) fail(ErrorCode::InvalidArgument, "combine: row counts differ");
    Eigen::MatrixXd data(left.rows(), left.cols() + right.cols());
    data << left.values(), right.values();
    auto labels = left.labels();
    labels.insert(labels.end(), right.labels().begin(), right.labels().end());
    auto roles = left.roles();
    roles.insert(roles.end(), right.roles().begin(), right.roles().end());
    return TimeSeriesPanel(std::move(data), std::move(labels), std::move(roles), left.time_labels());
}

}  // namespace cvarkit
