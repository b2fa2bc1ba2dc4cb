#include "spreaddim/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "spreaddim/errors.hpp"

namespace spreaddim::io {

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r'))
        s.remove_suffix(1);
    return s;
}

std::vector<std::string_view> split_fields(std::string_view line) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    for (;;) {
        const auto pos = line.find(',', start);
        out.push_back(trim(line.substr(start, pos == std::string_view::npos ? pos : pos - start)));
        if (pos == std::string_view::npos) break;
        start = pos + 1;
    }
    return out;
}

bool parse_number(std::string_view s, double& v) {
    if (s.empty()) return false;
    if (s.front() == '+') s.remove_prefix(1);
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    return ec == std::errc{} && ptr == s.data() + s.size();
}

std::ifstream open_in(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw ParseError("cannot open '" + path + "'");
    return f;
}

}  // namespace

Table read_table(std::istream& in) {
    Table t;
    std::string line;
    std::size_t lineno = 0;
    bool first_content = true;
    while (std::getline(in, line)) {
        ++lineno;
        if (trim(line).empty()) continue;
        const auto fields = split_fields(line);
        std::vector<double> row(fields.size());
        bool numeric = true;
        std::size_t bad = 0;
        for (std::size_t k = 0; k < fields.size(); ++k)
            if (!parse_number(fields[k], row[k])) {
                numeric = false;
                bad = k;
                break;
            }
        if (first_content && !numeric) {
            for (auto f : fields) t.header.emplace_back(f);
            t.cols = fields.size();
            first_content = false;
            continue;
        }
        first_content = false;
        if (!numeric)
            throw ParseError("non-numeric field '" + std::string(fields[bad]) + "' in column " +
                                 std::to_string(bad + 1),
                             lineno);
        if (t.cols == 0) t.cols = fields.size();
        if (fields.size() != t.cols)
            throw ParseError("expected " + std::to_string(t.cols) + " fields, found " +
                                 std::to_string(fields.size()),
                             lineno);
        t.values.insert(t.values.end(), row.begin(), row.end());
        ++t.rows;
    }
    return t;
}

Table read_table_file(const std::string& path) {
    auto f = open_in(path);
    return read_table(f);
}

PointCloud read_cloud(std::istream& in) {
    auto t = read_table(in);
    if (t.rows == 0) throw ParseError("point cloud CSV has no data rows");
    return PointCloud(t.rows, t.cols, std::move(t.values));
}

PointCloud read_cloud_file(const std::string& path) {
    auto f = open_in(path);
    return read_cloud(f);
}

DistanceMatrix read_matrix(std::istream& in) {
    auto t = read_table(in);
    if (t.rows == 0) throw ParseError("distance matrix CSV has no data rows");
    if (t.rows != t.cols)
        throw ValidationError("distance matrix must be square, got " + std::to_string(t.rows) +
                              " x " + std::to_string(t.cols));
    return DistanceMatrix(t.rows, std::move(t.values));
}

DistanceMatrix read_matrix_file(const std::string& path) {
    auto f = open_in(path);
    return read_matrix(f);
}

std::string format_number(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

void write_cloud(std::ostream& out, const PointCloud& cloud) {
    for (std::size_t i = 0; i < cloud.size(); ++i) {
        const auto r = cloud.row(i);
        for (std::size_t k = 0; k < r.size(); ++k) out << (k ? "," : "") << format_number(r[k]);
        out << '\n';
    }
}

void write_matrix(std::ostream& out, const DistanceMatrix& m) {
    for (std::size_t i = 0; i < m.size(); ++i) {
        const auto r = m.row(i);
        for (std::size_t k = 0; k < r.size(); ++k) out << (k ? "," : "") << format_number(r[k]);
        out << '\n';
    }
}

void write_column(std::ostream& out, const std::vector<double>& values) {
    for (double v : values) out << format_number(v) << '\n';
}

void write_curve_csv(std::ostream& out, const SpreadCurve& curve) {
    out << curve_header << '\n';
    for (const auto& p : curve.points) {
        out << format_number(p.t) << ',' << format_number(p.sigma) << ','
            << format_number(p.dsigma_dt) << ',' << format_number(p.g_dim) << ',';
        if (p.f_dim) out << format_number(*p.f_dim);
        out << '\n';
    }
}

SpreadCurve read_curve_csv(std::istream& in) {
    std::string line;
    std::size_t lineno = 0;
    SpreadCurve curve;
    bool saw_header = false;
    while (std::getline(in, line)) {
        ++lineno;
        if (trim(line).empty()) continue;
        const auto fields = split_fields(line);
        if (!saw_header) {
            std::string joined;
            for (std::size_t k = 0; k < fields.size(); ++k)
                joined += (k ? "," : "") + std::string(fields[k]);
            if (joined != curve_header)
                throw ParseError("curve CSV must start with header '" + std::string(curve_header) +
                                     "'",
                                 lineno);
            saw_header = true;
            continue;
        }
        if (fields.size() != 5)
            throw ParseError("expected 5 fields, found " + std::to_string(fields.size()), lineno);
        double v[4];
        for (int k = 0; k < 4; ++k)
            if (!parse_number(fields[k], v[k]))
                throw ParseError("non-numeric field '" + std::string(fields[k]) + "'", lineno);
        SpreadPoint p{v[0], v[1], v[2], v[3], std::nullopt};
        if (!fields[4].empty()) {
            double f;
            if (!parse_number(fields[4], f))
                throw ParseError("non-numeric f_dim '" + std::string(fields[4]) + "'", lineno);
            p.f_dim = f;
        }
        curve.points.push_back(p);
    }
    if (!saw_header) throw ParseError("curve CSV is empty");
    return curve;
}

SpreadCurve read_curve_csv_file(const std::string& path) {
    auto f = open_in(path);
    return read_curve_csv(f);
}

nlohmann::json curve_to_json(const SpreadCurve& curve) {
    auto arr = nlohmann::json::array();
    for (const auto& p : curve.points) {
        arr.push_back({{"t", p.t},
                       {"sigma", p.sigma},
                       {"dsigma_dt", p.dsigma_dt},
                       {"g_dim", p.g_dim},
                       {"f_dim", p.f_dim ? nlohmann::json(*p.f_dim) : nlohmann::json(nullptr)}});
    }
    return arr;
}

SpreadCurve curve_from_json(const nlohmann::json& j) {
    if (!j.is_array()) throw ParseError("curve JSON must be an array");
    SpreadCurve curve;
    for (const auto& e : j) {
        try {
            SpreadPoint p{e.at("t").get<double>(), e.at("sigma").get<double>(),
                          e.at("dsigma_dt").get<double>(), e.at("g_dim").get<double>(),
                          std::nullopt};
            if (e.contains("f_dim") && !e.at("f_dim").is_null()) p.f_dim = e.at("f_dim").get<double>();
            curve.points.push_back(p);
        } catch (const nlohmann::json::exception& ex) {
            throw ParseError(std::string("bad curve JSON entry: ") + ex.what());
        }
    }
    return curve;
}

nlohmann::json estimate_to_json(const DimensionEstimate& est, const SpreadCurve& curve,
                                const std::string& grid_source) {
    nlohmann::json j;
    j["schema_version"] = estimate_schema_version;
    j["peak_g"] = est.peak_g;
    j["peak_t"] = est.peak_t;
    j["rounded_dimension"] = est.rounded_dimension;
    if (est.plateau)
        j["plateau"] = {{"t_lo", est.plateau->t_lo},
                        {"t_hi", est.plateau->t_hi},
                        {"mean_g", est.plateau->mean_g},
                        {"delta", est.plateau->delta}};
    else
        j["plateau"] = nullptr;
    if (est.knee)
        j["knee"] = {{"t", est.knee->t}, {"f", est.knee->f}};
    else
        j["knee"] = nullptr;

    std::size_t f_points = 0;
    for (const auto& p : curve.points) f_points += p.f_dim.has_value();
    j["grid"] = {{"source", grid_source},
                 {"count", curve.points.size()},
                 {"t_min", curve.points.empty() ? 0.0 : curve.points.front().t},
                 {"t_max", curve.points.empty() ? 0.0 : curve.points.back().t},
                 {"f_points", f_points}};
    if (curve.n) j["grid"]["n_points"] = curve.n;
    j["method_metadata"] = {
        {"primary", "g_peak"},
        {"peak_tie_break", "smallest_t"},
        {"plateau_rule", "longest run in ln(t) with g in [peak_g - delta, peak_g]"},
        {"knee_method", "chord_max_distance"},
        {"knee_axes", "ln(t) vs f_dim, t > 1"},
        {"knee_min_points", 4},
        {"knee_grid_dependent", true},
    };
    return j;
}

void write_text(const std::string& path, const std::string& text, std::ostream& fallback) {
    if (path.empty()) {
        fallback << text;
        return;
    }
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot write '" + path + "'");
    f << text;
}

}  // namespace spreaddim::io
