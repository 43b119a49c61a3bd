#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "dyadic/experiments/config.hpp"
#include "dyadic/report.hpp"

namespace dyadic::experiments {

struct SweepRow {
    double delta = 0.0;
    double a2 = 0.0;
    double ratio = 0.0;
    double runtime_ms = 0.0;
};

struct LinearFit {
    double slope = 0.0;
    double intercept = 0.0;
    double residual = 0.0;  // root mean square of the log residuals
};

/// Ordinary least squares of y on x; needs two distinct x values.
LinearFit least_squares(const std::vector<double>& x, const std::vector<double>& y);
/// Fit of log(ratio) against log(a2) over all rows.
LinearFit fit_rows(const std::vector<SweepRow>& rows);

struct SweepResult {
    ExperimentConfig config;
    std::vector<SweepRow> rows;  // delta descending
    LinearFit fit;
    bool fit_ok = false;
    /// "ok", "degenerate witness", or a failed-bound message.
    std::string status;
    /// Whether the slope bound of the experiment holds (true when there is none).
    bool bound_ok = true;
    nlohmann::json extra = nlohmann::json::object();
};

/// Exact cellwise integral of log(1/t) t^{delta-1} over the cells of a depth-`depth` grid of (0,1),
/// summed; equals 1/delta^2 up to round-off.
double analytic_benchmark(double delta, int depth);

SweepResult run_sharpness_hilbert(const ExperimentConfig& cfg);
SweepResult run_sharpness_lp(const ExperimentConfig& cfg, double p);
SweepResult run_shift_norm_sweep(const ExperimentConfig& cfg);

/// CSV: `#` lines with the resolved config and summary, then delta,a2,ratio,runtime_ms.
void write_csv(std::ostream& os, const SweepResult& r);
nlohmann::json to_json(const SweepResult& r);

struct AverageShiftRow {
    int depth = 0;
    int samples = 0;
    double corr_midpoint = 0.0, c_midpoint = 0.0, residual_midpoint = 0.0;
    double corr_cell = 0.0, c_cell = 0.0, residual_cell = 0.0;
    double se_c = 0.0;       // batch-means standard error over all blocks
    double se_c_half = 0.0;  // same from the first half of the blocks
    double runtime_ms = 0.0;
};

struct AverageShiftResult {
    ExperimentConfig config;
    std::vector<AverageShiftRow> rows;  // requested depth, then depth + 1 when enabled
};

AverageShiftResult run_average_shift(const ExperimentConfig& cfg);
void write_csv(std::ostream& os, const AverageShiftResult& r);
nlohmann::json to_json(const AverageShiftResult& r);

struct VerifyResult {
    ExperimentConfig config;
    std::vector<InequalityReport> reports;
    long long exact_violations = 0;
    int exit_status() const { return exact_violations == 0 ? 0 : 1; }
};

/// Every exact-constant assertion and report-only sweep at the configured depth and seed.
VerifyResult run_verify_suite(const ExperimentConfig& cfg);
nlohmann::json to_json(const VerifyResult& r);

}  // namespace dyadic::experiments
