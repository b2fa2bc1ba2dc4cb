#include "spreaddim/spread.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <thread>

#include "spreaddim/detail/fast_exp.hpp"
#include "spreaddim/errors.hpp"
#include "spreaddim/rng.hpp"

namespace spreaddim {

namespace {

std::string fmt_t(double t) {
    std::ostringstream os;
    os.precision(17);
    os << t;
    return os.str();
}

void require_scale(double t) {
    if (!(t >= 0.0) || !std::isfinite(t))
        throw DomainError("scale t = " + fmt_t(t) + " must be finite and >= 0");
}

unsigned resolve_threads(unsigned requested) {
    if (requested != 0) return requested;
    return std::max(1u, std::thread::hardware_concurrency());
}

// Upper-triangle tail of row i (columns i+1..n-1) for one scale. The row's
// own sums come back through s_i/w_i; column sums are scattered into s/w.
// Accumulation order is fixed: column j receives row contributions in
// ascending row order, and the row tail is reduced over four interleaved lanes.
void accumulate_row_tail(const double* __restrict d, std::size_t len, double t,
                         double* __restrict e, double* __restrict s, double* __restrict w,
                         double& s_i, double& w_i) {
    const double neg_t = -t;
    for (std::size_t j = 0; j < len; ++j) e[j] = detail::exp_nonpositive(neg_t * d[j]);

    double lane_s[4] = {0.0, 0.0, 0.0, 0.0};
    double lane_w[4] = {0.0, 0.0, 0.0, 0.0};
    std::size_t j = 0;
    for (; j + 4 <= len; j += 4) {
        for (std::size_t l = 0; l < 4; ++l) {
            const double ej = e[j + l];
            const double dej = d[j + l] * ej;
            lane_s[l] += ej;
            lane_w[l] += dej;
            s[j + l] += ej;
            w[j + l] += dej;
        }
    }
    for (std::size_t l = 0; j < len; ++j, ++l) {
        const double ej = e[j];
        const double dej = d[j] * ej;
        lane_s[l] += ej;
        lane_w[l] += dej;
        s[j] += ej;
        w[j] += dej;
    }
    s_i += (lane_s[0] + lane_s[1]) + (lane_s[2] + lane_s[3]);
    w_i += (lane_w[0] + lane_w[1]) + (lane_w[2] + lane_w[3]);
}

// Row sums s_i = sum_j e^{-t d_ij} and w_i = sum_j d_ij e^{-t d_ij} for every
// scale, laid out scale-major: s[k * n + i].
void row_sums(const RowBlockSource& src, std::span<const double> ts, const EngineOptions& opts,
              std::vector<double>& s, std::vector<double>& w) {
    const std::size_t n = src.size();
    const std::size_t nt = ts.size();
    s.assign(nt * n, 1.0);  // diagonal term e^0
    w.assign(nt * n, 0.0);
    if (n == 0 || nt == 0) return;

    const std::size_t block = std::max<std::size_t>(1, opts.block_size);
    const unsigned workers =
        static_cast<unsigned>(std::min<std::size_t>(resolve_threads(opts.threads), nt));

    std::vector<double> scratch;
    for (std::size_t first = 0; first < n; first += block) {
        const std::size_t count = std::min(block, n - first);
        const auto rows = src.rows(first, count, scratch);

        auto work = [&](unsigned worker) {
            std::vector<double> e(n);
            for (std::size_t k = worker; k < nt; k += workers) {
                double* sk = s.data() + k * n;
                double* wk = w.data() + k * n;
                for (std::size_t r = 0; r < count; ++r) {
                    const std::size_t i = first + r;
                    const double* row = rows.data() + r * n;
                    accumulate_row_tail(row + i + 1, n - i - 1, ts[k], e.data(), sk + i + 1,
                                        wk + i + 1, sk[i], wk[i]);
                }
            }
        };

        if (workers <= 1) {
            work(0);
        } else {
            std::vector<std::jthread> pool;
            pool.reserve(workers);
            for (unsigned wkr = 0; wkr < workers; ++wkr) pool.emplace_back(work, wkr);
        }
    }
}

SpreadValue finish(std::span<const double> s, std::span<const double> w) {
    double sigma = 0.0, dsigma = 0.0;
    for (std::size_t i = 0; i < s.size(); ++i) {
        const double inv = 1.0 / s[i];
        sigma += inv;
        dsigma += w[i] * inv * inv;
    }
    // 1 <= sigma <= n holds exactly; the sum can stray by a few ulps
    const double n = static_cast<double>(s.size());
    return {std::clamp(sigma, 1.0, n), dsigma};
}

double median_of(std::vector<double>& v) {
    if (v.empty()) return 0.0;
    const std::size_t mid = v.size() / 2;
    std::nth_element(v.begin(), v.begin() + mid, v.end());
    const double hi = v[mid];
    if (v.size() % 2 == 1) return hi;
    const double lo = *std::max_element(v.begin(), v.begin() + mid);
    return 0.5 * (lo + hi);
}

}  // namespace

ScaleGrid::ScaleGrid(std::vector<double> scales) : scales_(std::move(scales)) {
    if (scales_.empty()) throw ValidationError("scale grid is empty");
    for (std::size_t i = 0; i < scales_.size(); ++i) {
        require_scale(scales_[i]);
        if (i > 0 && !(scales_[i] > scales_[i - 1]))
            throw ValidationError("scale grid is not strictly increasing at t = " +
                                  fmt_t(scales_[i]));
    }
}

ScaleGrid ScaleGrid::log_spaced(double lo, double hi, std::size_t count) {
    if (!(lo > 0.0) || !(hi >= lo) || !std::isfinite(hi))
        throw DomainError("log-spaced grid needs 0 < lo <= hi");
    if (count == 0) throw ValidationError("grid needs at least one scale");
    if (count == 1) return ScaleGrid({lo});
    std::vector<double> v(count);
    const double a = std::log(lo), b = std::log(hi);
    for (std::size_t i = 0; i < count; ++i)
        v[i] = std::exp(a + (b - a) * static_cast<double>(i) / static_cast<double>(count - 1));
    v.front() = lo;
    v.back() = hi;
    return ScaleGrid(std::move(v));
}

ScaleGrid ScaleGrid::linear(double lo, double hi, std::size_t count) {
    if (!(hi >= lo)) throw ValidationError("linear grid needs lo <= hi");
    if (count == 0) throw ValidationError("grid needs at least one scale");
    if (count == 1) return ScaleGrid({lo});
    std::vector<double> v(count);
    for (std::size_t i = 0; i < count; ++i)
        v[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(count - 1);
    v.back() = hi;
    return ScaleGrid(std::move(v));
}

ScaleGrid ScaleGrid::scaled(double factor) const {
    if (!(factor > 0.0) || !std::isfinite(factor))
        throw DomainError("grid scale factor must be finite and > 0");
    std::vector<double> v(scales_);
    for (double& t : v) t *= factor;
    return ScaleGrid(std::move(v));
}

double spread_naive(const DistanceMatrix& d, double t) {
    require_scale(t);
    const std::size_t n = d.size();
    double sigma = 0.0;
    for (std::size_t x = 0; x < n; ++x) {
        double denom = 0.0;
        for (std::size_t y = 0; y < n; ++y) denom += std::exp(-t * d(x, y));
        sigma += 1.0 / denom;
    }
    return sigma;
}

double spread_derivative_naive(const DistanceMatrix& d, double t) {
    require_scale(t);
    const std::size_t n = d.size();
    double total = 0.0;
    for (std::size_t x = 0; x < n; ++x) {
        double num = 0.0, denom = 0.0;
        for (std::size_t y = 0; y < n; ++y) {
            const double e = std::exp(-t * d(x, y));
            num += d(x, y) * e;
            denom += e;
        }
        total += num / (denom * denom);
    }
    return total;
}

SpreadValue spread_at(const RowBlockSource& src, double t, const EngineOptions& opts) {
    require_scale(t);
    std::vector<double> s, w;
    const double ts[1] = {t};
    row_sums(src, ts, opts, s, w);
    return finish(s, w);
}

double spread_vectorised(const RowBlockSource& src, double t, const EngineOptions& opts) {
    return spread_at(src, t, opts).sigma;
}

double spread_vectorised(const DistanceMatrix& d, double t) {
    return spread_vectorised(MatrixRows(d), t);
}

double spread_derivative(const RowBlockSource& src, double t, const EngineOptions& opts) {
    return spread_at(src, t, opts).dsigma_dt;
}

double spread_derivative(const DistanceMatrix& d, double t) {
    return spread_derivative(MatrixRows(d), t);
}

double instantaneous_dimension(const RowBlockSource& src, double t, const EngineOptions& opts) {
    if (t == 0.0) return 0.0;
    const auto v = spread_at(src, t, opts);
    return t * v.dsigma_dt / v.sigma;
}

double instantaneous_dimension(const DistanceMatrix& d, double t) {
    return instantaneous_dimension(MatrixRows(d), t);
}

double f_dimension_from_spread(double sigma, double t) {
    if (!(t > 1.0))
        throw DomainError("F is undefined at t = " + fmt_t(t) + "; it needs t > 1");
    return std::log(sigma) / std::log(t);
}

double f_dimension(const RowBlockSource& src, double t, const EngineOptions& opts) {
    if (!(t > 1.0))
        throw DomainError("F is undefined at t = " + fmt_t(t) + "; it needs t > 1");
    return f_dimension_from_spread(spread_vectorised(src, t, opts), t);
}

double f_dimension(const DistanceMatrix& d, double t) { return f_dimension(MatrixRows(d), t); }

SpreadCurve sweep(const RowBlockSource& src, const ScaleGrid& grid, const EngineOptions& opts) {
    const std::size_t n = src.size();
    std::vector<double> s, w;
    row_sums(src, grid.scales(), opts, s, w);

    SpreadCurve curve;
    curve.n = n;
    curve.points.reserve(grid.size());
    for (std::size_t k = 0; k < grid.size(); ++k) {
        const double t = grid[k];
        const auto v = finish(std::span(s).subspan(k * n, n), std::span(w).subspan(k * n, n));
        SpreadPoint p{t, v.sigma, v.dsigma_dt, t == 0.0 ? 0.0 : t * v.dsigma_dt / v.sigma,
                      std::nullopt};
        if (t > 1.0) p.f_dim = f_dimension_from_spread(v.sigma, t);
        curve.points.push_back(p);
    }
    return curve;
}

SpreadCurve sweep(const DistanceMatrix& d, const ScaleGrid& grid, const EngineOptions& opts) {
    return sweep(MatrixRows(d), grid, opts);
}

double median_distance(const RowBlockSource& src, const EngineOptions& opts) {
    const std::size_t n = src.size();
    if (n < 2) return 0.0;
    const std::size_t pairs = n * (n - 1) / 2;
    constexpr std::size_t sample_target = std::size_t{1} << 24;

    std::vector<double> values;
    if (const auto* m = src.matrix(); m != nullptr || pairs <= sample_target) {
        values.reserve(pairs);
        std::vector<double> scratch;
        const std::size_t block = std::max<std::size_t>(1, opts.block_size);
        for (std::size_t first = 0; first < n; first += block) {
            const std::size_t count = std::min(block, n - first);
            const auto rows = src.rows(first, count, scratch);
            for (std::size_t r = 0; r < count; ++r) {
                const std::size_t i = first + r;
                values.insert(values.end(), rows.begin() + r * n + i + 1, rows.begin() + (r + 1) * n);
            }
        }
    } else {
        // Keep pair (i, j) when its hash falls under the acceptance threshold.
        const CounterRng rng(0x6d656469616eULL);
        const double keep = static_cast<double>(sample_target) / static_cast<double>(pairs);
        const auto threshold = static_cast<std::uint64_t>(keep * 0x1.0p64);
        values.reserve(sample_target + sample_target / 8);
        std::vector<double> scratch;
        const std::size_t block = std::max<std::size_t>(1, opts.block_size);
        for (std::size_t first = 0; first < n; first += block) {
            const std::size_t count = std::min(block, n - first);
            const auto rows = src.rows(first, count, scratch);
            for (std::size_t r = 0; r < count; ++r) {
                const std::size_t i = first + r;
                for (std::size_t j = i + 1; j < n; ++j)
                    if (rng.bits(i, j) < threshold) values.push_back(rows[r * n + j]);
            }
        }
    }

    double med = median_of(values);
    if (med == 0.0) {
        std::erase_if(values, [](double v) { return v <= 0.0; });
        med = median_of(values);
    }
    return med;
}

ScaleGrid auto_grid(const RowBlockSource& src, std::size_t count, const EngineOptions& opts) {
    const double med = median_distance(src, opts);
    if (!(med > 0.0)) return ScaleGrid::log_spaced(0.01, 100.0, count);
    return ScaleGrid::log_spaced(0.01 / med, 100.0 / med, count);
}

}  // namespace spreaddim
