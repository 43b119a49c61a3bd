#include "dyadic/experiments/sweeps.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <iomanip>
#include <limits>
#include <ostream>
#include <sstream>

#include "dyadic/experiments/op_descriptor.hpp"
#include "dyadic/hilbert.hpp"
#include "dyadic/opnorm.hpp"
#include "dyadic/profile.hpp"
#include "dyadic/rng.hpp"
#include "dyadic/shift.hpp"

namespace dyadic::experiments {

namespace {

using Clock = std::chrono::steady_clock;

double elapsed_ms(Clock::time_point t0, bool timing) {
    if (!timing) return 0.0;
    return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

std::vector<double> sorted_deltas(const ExperimentConfig& cfg) {
    if (cfg.deltas.size() < 4) throw Error("sweep needs at least 4 delta values, got " + std::to_string(cfg.deltas.size()));
    std::vector<double> d = cfg.deltas;
    for (double x : d)
        if (!(x > 0.0 && x < 1.0)) throw Error("delta values must lie in (0, 1)");
    std::sort(d.begin(), d.end(), std::greater<>());
    if (std::adjacent_find(d.begin(), d.end()) != d.end()) throw Error("delta values must be distinct");
    return d;
}

DyadicGrid grid_of(const ExperimentConfig& cfg) { return DyadicGrid(cfg.base_start, cfg.base_length, cfg.depth); }

bool all_zero(const std::vector<SweepRow>& rows) {
    return std::all_of(rows.begin(), rows.end(), [](const SweepRow& r) { return r.ratio == 0.0; });
}

void finish_fit(SweepResult& r) {
    if (all_zero(r.rows)) {
        r.fit_ok = false;
        r.status = "degenerate witness";
        return;
    }
    const double a0 = r.rows.front().a2;
    if (std::all_of(r.rows.begin(), r.rows.end(), [&](const SweepRow& x) { return x.a2 == a0; })) {
        r.fit_ok = false;
        r.status = "constant a2, no fit";
        return;
    }
    for (const auto& row : r.rows)
        if (!(row.ratio > 0.0)) {
            r.fit_ok = false;
            r.status = "nonpositive ratio, no fit";
            return;
        }
    r.fit = fit_rows(r.rows);
    r.fit_ok = std::isfinite(r.fit.slope);
    r.status = "ok";
}

SweepResult sharpness_impl(const ExperimentConfig& cfg, double p) {
    if (!(p > 1.0 && p <= 2.0)) throw Error("sharpness: p must lie in (1, 2]");
    const auto deltas = sorted_deltas(cfg);
    if (cfg.base_start > -1.0 || cfg.base_start + cfg.base_length < 2.0)
        throw Error("sharpness: base interval must contain [-1, 2)");
    const DyadicGrid g = grid_of(cfg);
    // [b,H] = [b - c, H]; centring makes a constant symbol give exact zeros.
    StepFunction b = AnalyticProfile::parse(cfg.b).sample(g);
    b -= StepFunction::constant(g, average(b, {0, 0}));
    const LinOp T = commutator(mult_op(b), hilbert_direct(g));

    SweepResult r;
    r.config = cfg;
    r.config.p = p;
    nlohmann::json bench = nlohmann::json::array();
    for (double d : deltas) {
        const auto t0 = Clock::now();
        const auto wp = cfg.weight.empty() ? AnalyticProfile::power_abs((1.0 - d) * (p - 1.0))
                                           : AnalyticProfile::parse(cfg.weight);
        const Weight w = weight_from_profile(wp, g);
        const auto fp = cfg.f.empty() ? AnalyticProfile::indicator_power(0.0, 1.0, d - 1.0) : AnalyticProfile::parse(cfg.f);
        const StepFunction f = fp.sample(g);
        SweepRow row;
        row.delta = d;
        row.a2 = p == 2.0 ? a2d(w).value : apd(w, p).value;
        row.ratio = lpw_ratio(T, f, w, p);
        row.runtime_ms = elapsed_ms(t0, cfg.timing);
        r.rows.push_back(row);
        const double cellwise = analytic_benchmark(d, std::min(cfg.depth, 20));
        const double exact = 1.0 / (d * d);
        bench.push_back({{"delta", d}, {"exact", exact}, {"cellwise", cellwise},
                         {"relative_error", std::abs(cellwise - exact) / exact}});
    }
    r.extra["benchmark"] = bench;
    finish_fit(r);
    if (r.fit_ok) {
        if (p == 2.0) {
            r.bound_ok = r.fit.slope >= cfg.slope_min;
            r.extra["slope_bound"] = ">= " + std::to_string(cfg.slope_min);
            if (!r.bound_ok) r.status = "slope below " + std::to_string(cfg.slope_min);
        } else {
            const double predicted = 2.0 / (p - 1.0);
            const double dev = std::abs(r.fit.slope - predicted) / predicted;
            r.extra["predicted_exponent"] = predicted;
            r.extra["relative_deviation"] = dev;
            r.bound_ok = dev <= 0.2;
            if (!r.bound_ok) r.status = "slope deviates from " + std::to_string(predicted) + " by more than 20%";
        }
    }
    return r;
}

std::string fmt(double x) {
    std::ostringstream os;
    os << std::setprecision(17) << x;
    return os.str();
}

}  // namespace

LinearFit least_squares(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size() || x.size() < 2) throw Error("least_squares: need two or more points");
    const double n = static_cast<double>(x.size());
    double mx = 0, my = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= n;
    my /= n;
    double sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
    }
    if (sxx == 0.0) throw Error("least_squares: x values are all equal");
    LinearFit f;
    f.slope = sxy / sxx;
    f.intercept = my - f.slope * mx;
    double ss = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double e = y[i] - (f.intercept + f.slope * x[i]);
        ss += e * e;
    }
    f.residual = std::sqrt(ss / n);
    return f;
}

LinearFit fit_rows(const std::vector<SweepRow>& rows) {
    std::vector<double> x, y;
    for (const auto& r : rows) {
        x.push_back(std::log(r.a2));
        y.push_back(std::log(r.ratio));
    }
    return least_squares(x, y);
}

double analytic_benchmark(double delta, int depth) {
    if (!(delta > 0.0)) throw Error("analytic_benchmark: delta must be positive");
    // G' = log(1/t) t^{delta-1}, G(0) = 0.
    auto G = [delta](double t) {
        if (t == 0.0) return 0.0;
        const double td = std::pow(t, delta);
        return td / (delta * delta) - td * std::log(t) / delta;
    };
    const std::size_t n = std::size_t{1} << depth;
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double x0 = static_cast<double>(i) / static_cast<double>(n);
        const double x1 = static_cast<double>(i + 1) / static_cast<double>(n);
        s += G(x1) - G(x0);
    }
    return s;
}

SweepResult run_sharpness_hilbert(const ExperimentConfig& cfg) { return sharpness_impl(cfg, 2.0); }

SweepResult run_sharpness_lp(const ExperimentConfig& cfg, double p) { return sharpness_impl(cfg, p); }

SweepResult run_shift_norm_sweep(const ExperimentConfig& cfg) {
    const auto deltas = sorted_deltas(cfg);
    const DyadicGrid g = grid_of(cfg);
    const StepFunction b = AnalyticProfile::parse(cfg.b).sample(g);
    const LinOp T = sweep_operator(cfg.op, b);
    const double bmo = bmo_d(b).value;

    SweepResult r;
    r.config = cfg;
    nlohmann::json conv = nlohmann::json::array();
    double C = 0.0;
    for (std::size_t i = 0; i < deltas.size(); ++i) {
        const double d = deltas[i];
        const auto t0 = Clock::now();
        const auto wp = cfg.weight.empty() ? AnalyticProfile::power_abs(1.0 - d) : AnalyticProfile::parse(cfg.weight);
        const Weight w = weight_from_profile(wp, g);
        const auto rep = l2w_opnorm(T, w, {cfg.tol, cfg.max_iter, Rng::derive(cfg.seed, i)});
        SweepRow row{d, a2d(w).value, rep.norm, elapsed_ms(t0, cfg.timing)};
        r.rows.push_back(row);
        conv.push_back({{"delta", d}, {"iterations", rep.iterations}, {"converged", rep.converged}});
        const double scale = cfg.op == "S" ? row.a2 : row.a2 * bmo;
        if (scale > 0.0) C = std::max(C, row.ratio / scale);
    }
    r.extra["power_iteration"] = conv;
    r.extra["bmo"] = bmo;
    r.extra["empirical_C"] = C;
    finish_fit(r);
    if (r.fit_ok) {
        r.bound_ok = r.fit.slope <= cfg.slope_max;
        r.extra["slope_bound"] = "<= " + std::to_string(cfg.slope_max);
        if (!r.bound_ok) r.status = "slope above " + std::to_string(cfg.slope_max);
    }
    return r;
}

void write_csv(std::ostream& os, const SweepResult& r) {
    os << r.config.to_text("# ");
    if (r.extra.contains("benchmark"))
        for (const auto& b : r.extra["benchmark"])
            os << "# benchmark delta=" << fmt(b["delta"]) << " exact=" << fmt(b["exact"]) << " cellwise="
               << fmt(b["cellwise"]) << " relative_error=" << fmt(b["relative_error"]) << '\n';
    for (const auto& [k, v] : r.extra.items())
        if (k != "benchmark") os << "# " << k << " = " << v.dump() << '\n';
    if (r.fit_ok)
        os << "# fit slope=" << fmt(r.fit.slope) << " intercept=" << fmt(r.fit.intercept)
           << " residual=" << fmt(r.fit.residual) << '\n';
    os << "# status = " << r.status << '\n';
    os << "delta,a2,ratio,runtime_ms\n";
    for (const auto& row : r.rows)
        os << fmt(row.delta) << ',' << fmt(row.a2) << ',' << fmt(row.ratio) << ',' << fmt(row.runtime_ms) << '\n';
}

nlohmann::json to_json(const SweepResult& r) {
    nlohmann::json rows = nlohmann::json::array();
    for (const auto& row : r.rows)
        rows.push_back({{"delta", row.delta}, {"a2", row.a2}, {"ratio", row.ratio}, {"runtime_ms", row.runtime_ms}});
    nlohmann::json j = {{"config", r.config.to_json()}, {"columns", {"delta", "a2", "ratio", "runtime_ms"}},
                        {"rows", rows}, {"fit_ok", r.fit_ok}, {"status", r.status}, {"bound_ok", r.bound_ok},
                        {"extra", r.extra}};
    if (r.fit_ok) j["fit"] = {{"slope", r.fit.slope}, {"intercept", r.fit.intercept}, {"residual", r.fit.residual}};
    return j;
}

namespace {

AverageShiftRow average_row(const ExperimentConfig& cfg, int depth) {
    const auto t0 = Clock::now();
    const DyadicGrid g(cfg.base_start, cfg.base_length, depth);
    AveragedShiftOptions opts;
    opts.samples = cfg.samples;
    opts.seed = cfg.seed;
    opts.force_standard = cfg.standard_only;
    const auto avg = averaged_shift(g, opts, true);
    AverageShiftRow row;
    row.depth = depth;
    row.samples = cfg.samples;
    const auto mid = fit_midpoint_kernel(avg.kernel, g);
    const auto cell = fit_cell_kernel(avg.kernel, g);
    row.corr_midpoint = mid.correlation;
    row.c_midpoint = mid.c;
    row.residual_midpoint = mid.residual;
    row.corr_cell = cell.correlation;
    row.c_cell = cell.c;
    row.residual_cell = cell.residual;
    // Batch means over the fixed blocks.
    std::vector<double> cs;
    for (std::size_t k = 0; k < avg.block_kernels.size(); ++k)
        if (avg.block_samples[k] > 0) cs.push_back(fit_cell_kernel(avg.block_kernels[k], g).c);
    auto se = [](const std::vector<double>& v, std::size_t n) {
        if (n < 2) return std::numeric_limits<double>::quiet_NaN();
        double m = 0;
        for (std::size_t i = 0; i < n; ++i) m += v[i];
        m /= static_cast<double>(n);
        double s = 0;
        for (std::size_t i = 0; i < n; ++i) s += (v[i] - m) * (v[i] - m);
        return std::sqrt(s / static_cast<double>(n - 1) / static_cast<double>(n));
    };
    row.se_c = se(cs, cs.size());
    row.se_c_half = se(cs, cs.size() / 2);
    row.runtime_ms = elapsed_ms(t0, cfg.timing);
    return row;
}

}  // namespace

AverageShiftResult run_average_shift(const ExperimentConfig& cfg) {
    if (cfg.samples < 100) throw Error("average-shift needs at least 100 samples");
    AverageShiftResult r;
    r.config = cfg;
    r.rows.push_back(average_row(cfg, cfg.depth));
    if (cfg.convergence_row && cfg.depth + 1 <= kMaxDenseDepth) r.rows.push_back(average_row(cfg, cfg.depth + 1));
    return r;
}

void write_csv(std::ostream& os, const AverageShiftResult& r) {
    os << r.config.to_text("# ");
    os << "# reference_midpoint = -1/(x-y) at cell centres; reference_cell = cell average of -1/(x-y)\n";
    os << "depth,samples,corr_midpoint,c_midpoint,residual_midpoint,corr_cell,c_cell,residual_cell,se_c,se_c_half,"
          "runtime_ms\n";
    for (const auto& x : r.rows)
        os << x.depth << ',' << x.samples << ',' << fmt(x.corr_midpoint) << ',' << fmt(x.c_midpoint) << ','
           << fmt(x.residual_midpoint) << ',' << fmt(x.corr_cell) << ',' << fmt(x.c_cell) << ','
           << fmt(x.residual_cell) << ',' << fmt(x.se_c) << ',' << fmt(x.se_c_half) << ',' << fmt(x.runtime_ms)
           << '\n';
}

nlohmann::json to_json(const AverageShiftResult& r) {
    nlohmann::json rows = nlohmann::json::array();
    auto num = [](double x) -> nlohmann::json { return std::isfinite(x) ? nlohmann::json(x) : nlohmann::json(nullptr); };
    for (const auto& x : r.rows)
        rows.push_back({{"depth", x.depth},
                        {"samples", x.samples},
                        {"corr_midpoint", num(x.corr_midpoint)},
                        {"c_midpoint", num(x.c_midpoint)},
                        {"residual_midpoint", num(x.residual_midpoint)},
                        {"corr_cell", num(x.corr_cell)},
                        {"c_cell", num(x.c_cell)},
                        {"residual_cell", num(x.residual_cell)},
                        {"se_c", num(x.se_c)},
                        {"se_c_half", num(x.se_c_half)},
                        {"runtime_ms", x.runtime_ms}});
    return {{"config", r.config.to_json()}, {"rows", rows}};
}

}  // namespace dyadic::experiments
