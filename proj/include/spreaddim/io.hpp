#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "spreaddim/estimator.hpp"
#include "spreaddim/metric.hpp"
#include "spreaddim/spread.hpp"

namespace spreaddim::io {

/// Numeric table parsed from CSV. A first row that does not parse as numbers
/// is taken as a header. Blank lines are skipped.
struct Table {
    std::vector<std::string> header;
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<double> values;  // row-major
};

/// Throws ParseError with the 1-based line number for ragged rows or
/// non-numeric fields past the header.
Table read_table(std::istream& in);
Table read_table_file(const std::string& path);

PointCloud read_cloud(std::istream& in);
PointCloud read_cloud_file(const std::string& path);

/// Throws ValidationError if the table is not square or breaks a matrix invariant.
DistanceMatrix read_matrix(std::istream& in);
DistanceMatrix read_matrix_file(const std::string& path);

/// Shortest text that reads back to the same double.
std::string format_number(double v);

void write_cloud(std::ostream& out, const PointCloud& cloud);
void write_matrix(std::ostream& out, const DistanceMatrix& m);
void write_column(std::ostream& out, const std::vector<double>& values);

inline constexpr const char* curve_header = "t,sigma,dsigma_dt,g_dim,f_dim";

/// Header `t,sigma,dsigma_dt,g_dim,f_dim`; f_dim left empty where undefined.
void write_curve_csv(std::ostream& out, const SpreadCurve& curve);
SpreadCurve read_curve_csv(std::istream& in);
SpreadCurve read_curve_csv_file(const std::string& path);

/// Array of {t, sigma, dsigma_dt, g_dim, f_dim|null}.
nlohmann::json curve_to_json(const SpreadCurve& curve);
SpreadCurve curve_from_json(const nlohmann::json& j);

inline constexpr int estimate_schema_version = 1;

/// Estimate document: peak, rounding, plateau|null, knee|null, grid summary
/// and method metadata. `grid_source` is "auto", "explicit" or "curve".
nlohmann::json estimate_to_json(const DimensionEstimate& est, const SpreadCurve& curve,
                                const std::string& grid_source);

/// Writes `text` to path, or to `fallback` when path is empty.
void write_text(const std::string& path, const std::string& text, std::ostream& fallback);

}  // namespace spreaddim::io
