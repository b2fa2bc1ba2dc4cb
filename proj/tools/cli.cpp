#include "cli.hpp"

#include <CLI11.hpp>

#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <ostream>
#include <sstream>
#include <thread>

#include "spreaddim/errors.hpp"
#include "spreaddim/estimator.hpp"
#include "spreaddim/io.hpp"
#include "spreaddim/oracles.hpp"
#include "spreaddim/rng.hpp"
#include "spreaddim/smoothing.hpp"
#include "spreaddim/synth.hpp"

namespace spreaddim::cli {

namespace {

double to_double(const std::string& s, const std::string& what) {
    double v = 0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size())
        throw ValidationError("bad number '" + s + "' in " + what);
    return v;
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, sep)) out.push_back(item);
    return out;
}

/// Everything the spread/estimate pipeline needs to build a curve.
struct CurveInput {
    std::string path;
    std::string kind = "cloud";
    std::string metric = "euclidean";
    std::string grid = "auto";
    std::size_t grid_count = 200;
    std::size_t block_size = 512;
    int threads = 0;
};

struct Loaded {
    std::optional<PointCloud> cloud;
    std::optional<DistanceMatrix> matrix;

    const RowBlockSource& rows() {
        if (matrix) {
            if (!matrix_rows) matrix_rows.emplace(*matrix);
            return *matrix_rows;
        }
        if (!cloud_rows) cloud_rows.emplace(*cloud);
        return *cloud_rows;
    }

private:
    std::optional<MatrixRows> matrix_rows;
    std::optional<EuclideanRows> cloud_rows;
};

std::vector<double> circle_angles(const PointCloud& cloud) {
    constexpr double two_pi = 2.0 * std::numbers::pi;
    std::vector<double> angles(cloud.size());
    if (cloud.dim() == 1) {
        for (std::size_t i = 0; i < cloud.size(); ++i) angles[i] = cloud(i, 0);
    } else if (cloud.dim() == 2) {
        for (std::size_t i = 0; i < cloud.size(); ++i) {
            double a = std::atan2(cloud(i, 1), cloud(i, 0));
            if (a < 0) a += two_pi;
            angles[i] = a < two_pi ? a : 0.0;
        }
    } else {
        throw ValidationError(
            "geodesic-circle metric needs one column of angles or two columns of circle points");
    }
    return angles;
}

Loaded load(const CurveInput& in) {
    Loaded l;
    if (in.kind == "matrix") {
        l.matrix = io::read_matrix_file(in.path);
        return l;
    }
    if (in.kind != "cloud") throw ValidationError("input kind must be cloud or matrix");
    auto cloud = io::read_cloud_file(in.path);
    if (in.metric == "geodesic-circle")
        l.matrix = geodesic_circle_distances(circle_angles(cloud));
    else if (in.metric == "euclidean")
        l.cloud = std::move(cloud);
    else
        throw ValidationError("unknown metric '" + in.metric + "'");
    return l;
}

struct BuiltCurve {
    SpreadCurve curve;
    std::string grid_source;
};

BuiltCurve build_curve(const CurveInput& in, std::ostream& err, bool verbose) {
    auto loaded = load(in);
    const EngineOptions opts{in.block_size, resolve_threads(in.threads)};
    const auto& rows = loaded.rows();
    const auto explicit_grid = parse_grid(in.grid);
    const ScaleGrid grid = explicit_grid ? *explicit_grid : auto_grid(rows, in.grid_count, opts);

    const auto start = std::chrono::steady_clock::now();
    auto curve = sweep(rows, grid, opts);
    if (verbose) {
        const double secs =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        err << "spread: " << rows.size() << " points, " << grid.size() << " scales ["
            << grid.front() << ", " << grid.back() << "], " << opts.threads << " thread(s), "
            << secs << " s\n";
    }
    return {std::move(curve), explicit_grid ? "explicit" : "auto"};
}

void add_curve_input(CLI::App* cmd, CurveInput& in) {
    cmd->add_option("--in", in.path, "Point cloud or distance matrix CSV")->required();
    cmd->add_option("--kind", in.kind, "Input kind")->check(CLI::IsMember({"cloud", "matrix"}));
    cmd->add_option("--metric", in.metric, "Metric for cloud input")
        ->check(CLI::IsMember({"euclidean", "geodesic-circle"}));
    cmd->add_option("--grid", in.grid, "auto | lo:hi:count[:log|lin] | a,b,c");
    cmd->add_option("--grid-count", in.grid_count, "Scale count for the auto grid");
    cmd->add_option("--block-size", in.block_size, "Distance rows held in memory at once");
    cmd->add_option("--threads", in.threads, "Worker threads (default: SPREADDIM_THREADS or all cores)");
}

std::string curve_csv(const SpreadCurve& c) {
    std::ostringstream os;
    io::write_curve_csv(os, c);
    return os.str();
}

std::string to_text(const auto& value, void (*writer)(std::ostream&, const std::decay_t<decltype(value)>&)) {
    std::ostringstream os;
    writer(os, value);
    return os.str();
}

synth::Shape shape_from_flags(const std::string& shape, int n, int ambient, double noise) {
    if (shape.find_first_of(":(") != std::string::npos) return synth::parse_shape(shape);
    synth::Shape s;
    if (shape == "circle")
        s = synth::Circle{};
    else if (shape == "sphere")
        s = synth::Sphere{n};
    else if (shape == "cube")
        s = synth::Cube{n};
    else if (shape == "noisy-plane" || shape == "noisy_plane")
        s = synth::NoisyPlane{n, ambient > 0 ? ambient : n + 1, noise};
    else
        throw ValidationError("unknown shape '" + shape + "'");
    synth::validate(s);
    return s;
}

// Oracle curve with analytic derivatives for every shape.
SpreadCurve oracle_curve(const std::string& shape, int n, const ScaleGrid& grid) {
    SpreadCurve c;
    for (double t : grid.scales()) {
        if (t <= 0.0) throw DomainError("oracle scales must be > 0");
        SpreadPoint p{t, 0, 0, 0, std::nullopt};
        if (shape == "interval") {
            p.sigma = oracle::interval_spread(t);
            p.dsigma_dt = oracle::interval_spread_derivative(t);
            p.g_dim = t * p.dsigma_dt / p.sigma;
        } else if (shape == "circle" || shape == "sphere") {
            const oracle::SphereSpec spec{shape == "circle" ? 1 : n};
            p.sigma = oracle::sphere_spread(spec, t);
            p.dsigma_dt = oracle::sphere_spread_derivative(spec, t);
            p.g_dim = spec.n == 1 ? oracle::circle_g_dimension(t)
                                  : t * oracle::sphere_log_derivative(spec, t);
        } else {
            throw ValidationError("unknown oracle shape '" + shape + "'");
        }
        if (t > 1.0)
            p.f_dim = shape == "circle" ? oracle::circle_f_dimension(t)
                                        : f_dimension_from_spread(p.sigma, t);
        c.points.push_back(p);
    }
    return c;
}

void write_file(const std::filesystem::path& p, const std::string& text) {
    std::ofstream f(p, std::ios::binary);
    if (!f) throw std::runtime_error("cannot write '" + p.string() + "'");
    f << text;
}

// Regenerates the synthetic experiments: circle convergence, smoothing of a
// noisy line and the cube dimension table.
void repro(const std::filesystem::path& dir, std::uint64_t seed, bool quick, unsigned threads,
           std::ostream& err) {
    std::filesystem::create_directories(dir);
    const EngineOptions opts{512, threads};
    nlohmann::json summary;
    summary["seed"] = seed;
    summary["quick"] = quick;

    {
        std::ostringstream os;
        os << "n,t,g_dim,f_dim,g_exact,f_exact\n";
        const auto grid = ScaleGrid::log_spaced(0.1, 20.0, 100);
        const std::vector<std::size_t> sizes =
            quick ? std::vector<std::size_t>{50, 200} : std::vector<std::size_t>{100, 250, 1000, 4000};
        for (auto n : sizes) {
            const auto s = synth::sample({synth::Circle{}, n, seed});
            const auto curve = sweep(geodesic_circle_distances(s.angles), grid, opts);
            double worst = 0;
            for (const auto& p : curve.points) {
                const double g = oracle::circle_g_dimension(p.t);
                os << n << ',' << io::format_number(p.t) << ',' << io::format_number(p.g_dim) << ','
                   << (p.f_dim ? io::format_number(*p.f_dim) : "") << ',' << io::format_number(g)
                   << ',' << (p.t > 1 ? io::format_number(oracle::circle_f_dimension(p.t)) : "")
                   << '\n';
                if (p.t >= 0.5 && p.t <= 10) worst = std::max(worst, std::abs(p.g_dim - g));
            }
            summary["circle"][std::to_string(n)] = {{"max_abs_g_error_0.5_10", worst},
                                                    {"estimate_rounded", estimate(curve).rounded_dimension}};
            err << "repro: circle n=" << n << " max |G - exact| on [0.5, 10] = " << worst << '\n';
        }
        write_file(dir / "circle_convergence.csv", os.str());
    }

    {
        const std::size_t n = quick ? 400 : 2000;
        const auto raw = synth::sample({synth::NoisyPlane{1, 2, 0.05}, n, seed}).cloud;
        const auto smooth = knn_smooth(raw, {k_from_percent(15, n), true});
        std::ostringstream os;
        os << "variant,t,g_dim,f_dim\n";
        for (const auto& [name, cloud] : {std::pair{"raw", &raw}, std::pair{"smoothed", &smooth}}) {
            EuclideanRows rows(*cloud);
            const auto curve = sweep(rows, auto_grid(rows, 200, opts), opts);
            for (const auto& p : curve.points)
                os << name << ',' << io::format_number(p.t) << ',' << io::format_number(p.g_dim)
                   << ',' << (p.f_dim ? io::format_number(*p.f_dim) : "") << '\n';
            const auto est = estimate(curve);
            summary["noisy_plane"][name] = {{"peak_g", est.peak_g}, {"peak_t", est.peak_t}};
            err << "repro: noisy plane " << name << " peak G = " << est.peak_g << '\n';
        }
        write_file(dir / "noisy_plane_smoothing.csv", os.str());
        write_file(dir / "noisy_plane_raw.csv", to_text(raw, io::write_cloud));
        write_file(dir / "noisy_plane_smoothed.csv", to_text(smooth, io::write_cloud));
    }

    {
        const std::size_t n = quick ? 500 : 5000;
        const int seeds = quick ? 1 : 3;
        std::ostringstream os;
        os << "d,seed,n,peak_g,peak_t,rounded_dimension\n";
        for (int d = 1; d <= 3; ++d)
            for (int k = 0; k < seeds; ++k) {
                const auto cloud = synth::sample({synth::Cube{d}, n, seed + k}).cloud;
                EuclideanRows rows(cloud);
                const auto est = estimate(sweep(rows, auto_grid(rows, 200, opts), opts));
                os << d << ',' << seed + k << ',' << n << ',' << io::format_number(est.peak_g) << ','
                   << io::format_number(est.peak_t) << ',' << est.rounded_dimension << '\n';
                err << "repro: cube(" << d << ") seed " << seed + k << " peak G = " << est.peak_g
                    << '\n';
            }
        write_file(dir / "cube_dimensions.csv", os.str());
    }
    write_file(dir / "summary.json", summary.dump(2) + "\n");
}

}  // namespace

std::optional<ScaleGrid> parse_grid(const std::string& spec) {
    if (spec.empty() || spec == "auto") return std::nullopt;
    if (spec.find(':') != std::string::npos) {
        const auto parts = split(spec, ':');
        if (parts.size() < 3 || parts.size() > 4)
            throw ValidationError("grid spec must be lo:hi:count[:log|lin], got '" + spec + "'");
        const double lo = to_double(parts[0], "grid spec");
        const double hi = to_double(parts[1], "grid spec");
        const double count = to_double(parts[2], "grid spec");
        if (!(count >= 1) || count != std::floor(count))
            throw ValidationError("grid count must be a positive integer");
        const std::string spacing = parts.size() == 4 ? parts[3] : "log";
        if (spacing == "log") return ScaleGrid::log_spaced(lo, hi, static_cast<std::size_t>(count));
        if (spacing == "lin" || spacing == "linear")
            return ScaleGrid::linear(lo, hi, static_cast<std::size_t>(count));
        throw ValidationError("grid spacing must be log or lin, got '" + spacing + "'");
    }
    std::vector<double> ts;
    for (const auto& p : split(spec, ',')) ts.push_back(to_double(p, "grid list"));
    return ScaleGrid(std::move(ts));
}

unsigned resolve_threads(int flag_value) {
    if (flag_value > 0) return static_cast<unsigned>(flag_value);
    if (const char* env = std::getenv("SPREADDIM_THREADS")) {
        const int v = std::atoi(env);
        if (v > 0) return static_cast<unsigned>(v);
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Intrinsic dimension of finite metric spaces from the growth of their spread"};
    app.require_subcommand(1);
    app.fallthrough();
    bool verbose = false;
    app.add_flag("-v,--verbose", verbose, "Timing and progress on stderr");

    // sample
    auto* sample_cmd = app.add_subcommand("sample", "Draw a seeded synthetic point cloud");
    std::string shape = "circle", out_path, angles_out;
    int dim = 2, ambient = 0;
    double noise = 0.05;
    std::size_t count = 1000;
    std::uint64_t seed = 0;
    sample_cmd->add_option("--shape", shape,
                           "circle | sphere | cube | noisy-plane, or an expression such as "
                           "sphere:2 or product(circle,cube:1)");
    sample_cmd->add_option("--n", dim, "Sphere/cube dimension, or intrinsic d of a noisy plane");
    sample_cmd->add_option("--ambient", ambient, "Ambient m of a noisy plane (default d + 1)");
    sample_cmd->add_option("--noise", noise, "Noise scale of a noisy plane");
    sample_cmd->add_option("--count", count, "Number of points");
    sample_cmd->add_option("--seed", seed, "Seed");
    sample_cmd->add_option("--out", out_path, "Output CSV (default stdout)");
    sample_cmd->add_option("--angles-out", angles_out, "Circle only: write the angles as one column");

    // distances
    auto* dist_cmd = app.add_subcommand("distances", "Write the distance matrix of a point cloud");
    std::string in_path, metric = "euclidean";
    bool check_triangle = false;
    dist_cmd->add_option("--in", in_path, "Point cloud CSV")->required();
    dist_cmd->add_option("--metric", metric)->check(CLI::IsMember({"euclidean", "geodesic-circle"}));
    dist_cmd->add_option("--out", out_path, "Output CSV (default stdout)");
    dist_cmd->add_flag("--check-triangle", check_triangle, "Also verify the triangle inequality (O(n^3))");

    // validate
    auto* val_cmd = app.add_subcommand("validate", "Check a distance matrix CSV against the metric invariants");
    val_cmd->add_option("--in", in_path, "Distance matrix CSV")->required();
    val_cmd->add_flag("--check-triangle", check_triangle, "Also verify the triangle inequality (O(n^3))");
    val_cmd->add_option("--out", out_path, "Report JSON (default stdout)");

    // spread
    auto* spread_cmd = app.add_subcommand("spread", "Spread curve (sigma, dsigma/dt, G, F) over a scale grid");
    CurveInput curve_in;
    std::string json_out;
    add_curve_input(spread_cmd, curve_in);
    spread_cmd->add_option("--out", out_path, "Curve CSV (default stdout)");
    spread_cmd->add_option("--json-out", json_out, "Curve as JSON array");

    // estimate
    auto* est_cmd = app.add_subcommand("estimate", "Read a dimension off a spread curve");
    CurveInput est_in;
    std::string curve_path, curve_out;
    double plateau_delta = default_plateau_delta;
    est_cmd->add_option("--curve", curve_path, "Curve CSV written by `spread`");
    est_cmd->add_option("--in", est_in.path, "Point cloud or matrix CSV (computes the curve)");
    est_cmd->add_option("--kind", est_in.kind)->check(CLI::IsMember({"cloud", "matrix"}));
    est_cmd->add_option("--metric", est_in.metric)->check(CLI::IsMember({"euclidean", "geodesic-circle"}));
    est_cmd->add_option("--grid", est_in.grid, "auto | lo:hi:count[:log|lin] | a,b,c");
    est_cmd->add_option("--grid-count", est_in.grid_count);
    est_cmd->add_option("--block-size", est_in.block_size);
    est_cmd->add_option("--threads", est_in.threads);
    est_cmd->add_option("--plateau-delta", plateau_delta, "Plateau tolerance in dimension units");
    est_cmd->add_option("--out", out_path, "Estimate JSON (default stdout)");
    est_cmd->add_option("--curve-out", curve_out, "Also write the computed curve CSV");

    // smooth
    auto* smooth_cmd = app.add_subcommand("smooth", "knn smoothing of a point cloud");
    std::size_t k = 0;
    double k_percent = 0;
    bool exclude_self = false;
    smooth_cmd->add_option("--in", in_path, "Point cloud CSV")->required();
    auto* k_opt = smooth_cmd->add_option("--k", k, "Neighbourhood size");
    auto* kp_opt = smooth_cmd->add_option("--k-percent", k_percent, "Neighbourhood size as % of n");
    k_opt->excludes(kp_opt);
    smooth_cmd->add_flag("--exclude-self", exclude_self, "Do not count a point as its own neighbour");
    smooth_cmd->add_option("--out", out_path, "Output CSV (default stdout)");

    // local
    auto* local_cmd = app.add_subcommand("local", "Nearest-neighbour local sample around one point");
    std::size_t size = 0, center = 0;
    bool center_random = false;
    local_cmd->add_option("--in", in_path, "Point cloud CSV")->required();
    local_cmd->add_option("--size", size, "Points in the local sample")->required();
    auto* ci_opt = local_cmd->add_option("--center-index", center, "Centre row (0-based)");
    auto* cr_opt = local_cmd->add_flag("--center-random", center_random, "Pick the centre from --seed");
    ci_opt->excludes(cr_opt);
    local_cmd->add_option("--seed", seed, "Seed for --center-random");
    local_cmd->add_option("--out", out_path, "Output CSV (default stdout)");

    // oracle
    auto* oracle_cmd = app.add_subcommand("oracle", "Closed-form curves for the interval, circle and spheres");
    std::string oracle_shape = "circle", t_spec = "0.1:20:100";
    int sphere_n = 1;
    oracle_cmd->add_option("--shape", oracle_shape)->check(CLI::IsMember({"interval", "circle", "sphere"}));
    oracle_cmd->add_option("--n", sphere_n, "Sphere dimension");
    oracle_cmd->add_option("--t", t_spec, "Grid: lo:hi:count[:log|lin] or a,b,c");
    oracle_cmd->add_option("--out", out_path, "Curve CSV (default stdout)");

    // repro
    auto* repro_cmd = app.add_subcommand("repro", "Regenerate the synthetic experiments into a directory");
    std::string out_dir = "results";
    bool quick = false;
    int repro_threads = 0;
    repro_cmd->add_option("--out-dir", out_dir);
    repro_cmd->add_option("--seed", seed);
    repro_cmd->add_flag("--quick", quick, "Small sample sizes");
    repro_cmd->add_option("--threads", repro_threads);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e, out, err);
    }

    try {
        if (*sample_cmd) {
            const auto s = synth::sample({shape_from_flags(shape, dim, ambient, noise), count, seed});
            io::write_text(out_path, to_text(s.cloud, io::write_cloud), out);
            if (!angles_out.empty()) {
                if (s.angles.empty()) throw ValidationError("--angles-out needs --shape circle");
                io::write_text(angles_out, to_text(s.angles, io::write_column), out);
            }
        } else if (*dist_cmd) {
            CurveInput in;
            in.path = in_path;
            in.metric = metric;
            auto loaded = load(in);
            const DistanceMatrix d = loaded.matrix ? *loaded.matrix : euclidean_distances(*loaded.cloud);
            if (check_triangle) {
                const auto report = validate(d, true);
                if (!report.ok()) throw ValidationError(report.violations.front().message);
            }
            io::write_text(out_path, to_text(d, io::write_matrix), out);
        } else if (*val_cmd) {
            const auto t = io::read_table_file(in_path);
            if (t.rows != t.cols)
                throw ValidationError("distance matrix must be square, got " + std::to_string(t.rows) +
                                      " x " + std::to_string(t.cols));
            const auto report = validate(t.rows, t.values, check_triangle);
            nlohmann::json j;
            j["ok"] = report.ok();
            j["violations"] = nlohmann::json::array();
            for (const auto& v : report.violations)
                j["violations"].push_back(
                    {{"kind", to_string(v.kind)}, {"indices", v.indices}, {"message", v.message}});
            io::write_text(out_path, j.dump(2) + "\n", out);
            if (!report.ok()) {
                err << "validate: " << report.violations.size() << " violation(s); first: "
                    << report.violations.front().message << '\n';
                return validation_error;
            }
        } else if (*spread_cmd) {
            const auto built = build_curve(curve_in, err, verbose);
            if (!json_out.empty())
                io::write_text(json_out, io::curve_to_json(built.curve).dump(2) + "\n", out);
            if (!out_path.empty() || json_out.empty())
                io::write_text(out_path, curve_csv(built.curve), out);
        } else if (*est_cmd) {
            if (curve_path.empty() == est_in.path.empty())
                throw ValidationError("estimate needs exactly one of --curve or --in");
            BuiltCurve built;
            if (!curve_path.empty())
                built = {io::read_curve_csv_file(curve_path), "curve"};
            else
                built = build_curve(est_in, err, verbose);
            if (!curve_out.empty()) io::write_text(curve_out, curve_csv(built.curve), out);
            const auto est = estimate(built.curve, plateau_delta);
            io::write_text(out_path, io::estimate_to_json(est, built.curve, built.grid_source).dump(2) + "\n",
                           out);
        } else if (*smooth_cmd) {
            const auto cloud = io::read_cloud_file(in_path);
            if (!*k_opt && !*kp_opt) throw ValidationError("smooth needs --k or --k-percent");
            const std::size_t kk = *kp_opt ? k_from_percent(k_percent, cloud.size()) : k;
            if (verbose) err << "smooth: k = " << kk << " of " << cloud.size() << '\n';
            io::write_text(out_path, to_text(knn_smooth(cloud, {kk, !exclude_self}), io::write_cloud),
                           out);
        } else if (*local_cmd) {
            const auto cloud = io::read_cloud_file(in_path);
            if (!*ci_opt && !center_random)
                throw ValidationError("local needs --center-index or --center-random");
            if (center_random)
                center = static_cast<std::size_t>(CounterRng(seed).bits(0, 0) % cloud.size());
            if (verbose) err << "local: centre " << center << '\n';
            io::write_text(out_path, to_text(local_sample(cloud, center, size), io::write_cloud), out);
        } else if (*oracle_cmd) {
            const auto grid = parse_grid(t_spec);
            if (!grid) throw ValidationError("oracle needs an explicit --t grid");
            io::write_text(out_path, curve_csv(oracle_curve(oracle_shape, sphere_n, *grid)), out);
        } else if (*repro_cmd) {
            repro(out_dir, seed, quick, resolve_threads(repro_threads), err);
        }
    } catch (const ParseError& e) {
        err << "parse error: " << e.what() << '\n';
        return parse_error;
    } catch (const ValidationError& e) {
        err << "validation error: " << e.what() << '\n';
        return validation_error;
    } catch (const DomainError& e) {
        err << "domain error: " << e.what() << '\n';
        return domain_error;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return failure;
    }
    return ok;
}

}  // namespace spreaddim::cli
