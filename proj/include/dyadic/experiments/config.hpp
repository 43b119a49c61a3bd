#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

namespace dyadic::experiments {

/// Resolved settings of one run. Keys of the `key = value` file match the field names.
struct ExperimentConfig {
    std::string experiment = "sharpness";
    double base_start = -4.0;
    double base_length = 8.0;
    int depth = 16;
    std::string op = "comm-lambda-S";
    std::string weight;        // empty: the power weight w_delta of the sweep
    std::string b = "logabs";  // symbol profile
    std::string f;             // empty: the sharpness witness x^{delta-1} on (0,1)
    std::vector<double> deltas{0.4, 0.2, 0.1, 0.05};
    int samples = 10000;
    std::uint64_t seed = 42;
    std::string out;
    std::string format = "csv";
    double p = 2.0;
    double slope_min = 1.8;   // quadratic claim
    double slope_max = 1.15;  // linear claims
    bool convergence_row = true;
    bool standard_only = false;
    bool timing = false;  // runtime_ms stays 0 unless set, keeping outputs byte-identical
    bool inject_fault = false;
    double tol = 1e-10;
    int max_iter = 20000;

    /// Assigns one key from its textual value; throws Error on unknown keys or bad values.
    void set(const std::string& key, const std::string& value);
    nlohmann::json to_json() const;
    /// `key = value` lines, each prefixed with `prefix`.
    std::string to_text(const std::string& prefix = "") const;
};

/// Defaults of an experiment id: sharpness, shift-sweep, average-shift, verify, norm.
ExperimentConfig defaults_for(const std::string& experiment);

/// Applies the `key = value` lines of a stream; `#` starts a comment.
void apply_config(ExperimentConfig& cfg, std::istream& is);
void apply_config_file(ExperimentConfig& cfg, const std::string& path);

std::vector<double> parse_double_list(const std::string& csv);

/// Layers, lowest first: defaults_for(experiment), env_seed (may be null), the config file
/// (skipped when empty), then `overrides` in order.
ExperimentConfig resolve_config(const std::string& experiment, const char* env_seed, const std::string& config_path,
                                const std::vector<std::pair<std::string, std::string>>& overrides);

}  // namespace dyadic::experiments
