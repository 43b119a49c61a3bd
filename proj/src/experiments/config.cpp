#include "dyadic/experiments/config.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include "dyadic/grid.hpp"

namespace dyadic::experiments {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

double to_double(const std::string& key, const std::string& v) {
    std::size_t used = 0;
    double x = 0.0;
    try {
        x = std::stod(v, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (used == 0 || used != v.size()) throw Error("config: '" + key + "' expects a number, got '" + v + "'");
    return x;
}

long long to_integer(const std::string& key, const std::string& v) {
    long long x = 0;
    const auto res = std::from_chars(v.data(), v.data() + v.size(), x);
    if (res.ec != std::errc() || res.ptr != v.data() + v.size())
        throw Error("config: '" + key + "' expects an integer, got '" + v + "'");
    return x;
}

bool to_bool(const std::string& key, const std::string& v) {
    if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
    if (v == "false" || v == "0" || v == "no" || v == "off") return false;
    throw Error("config: '" + key + "' expects true/false, got '" + v + "'");
}

std::string join(const std::vector<double>& xs) {
    std::ostringstream os;
    os.precision(17);
    for (std::size_t i = 0; i < xs.size(); ++i) os << (i ? "," : "") << xs[i];
    return os.str();
}

}  // namespace

std::vector<double> parse_double_list(const std::string& csv) {
    std::vector<double> out;
    std::stringstream ss(csv);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (!item.empty()) out.push_back(to_double("list", item));
    }
    return out;
}

void ExperimentConfig::set(const std::string& key_raw, const std::string& value_raw) {
    const std::string key = trim(key_raw), v = trim(value_raw);
    if (key == "experiment") experiment = v;
    else if (key == "base_start") base_start = to_double(key, v);
    else if (key == "base_length") base_length = to_double(key, v);
    else if (key == "base") {
        const auto xs = parse_double_list(v);
        if (xs.size() != 2) throw Error("config: base expects <lo>,<len>");
        base_start = xs[0];
        base_length = xs[1];
    } else if (key == "depth") depth = static_cast<int>(to_integer(key, v));
    else if (key == "op") op = v;
    else if (key == "weight") weight = v;
    else if (key == "b") b = v;
    else if (key == "f") f = v;
    else if (key == "deltas") deltas = parse_double_list(v);
    else if (key == "samples") samples = static_cast<int>(to_integer(key, v));
    else if (key == "seed") {
        const long long s = to_integer(key, v);
        if (s < 0) throw Error("config: seed must be nonnegative");
        seed = static_cast<std::uint64_t>(s);
    } else if (key == "out") out = v;
    else if (key == "format") {
        if (v != "csv" && v != "json") throw Error("config: format must be csv or json");
        format = v;
    } else if (key == "p") p = to_double(key, v);
    else if (key == "slope_min") slope_min = to_double(key, v);
    else if (key == "slope_max") slope_max = to_double(key, v);
    else if (key == "convergence_row") convergence_row = to_bool(key, v);
    else if (key == "standard_only") standard_only = to_bool(key, v);
    else if (key == "timing") timing = to_bool(key, v);
    else if (key == "inject_fault") inject_fault = to_bool(key, v);
    else if (key == "tol") tol = to_double(key, v);
    else if (key == "max_iter") max_iter = static_cast<int>(to_integer(key, v));
    else throw Error("config: unknown key '" + key + "'");
}

nlohmann::json ExperimentConfig::to_json() const {
    return {{"experiment", experiment}, {"base_start", base_start}, {"base_length", base_length},
            {"depth", depth},           {"op", op},                 {"weight", weight},
            {"b", b},                   {"f", f},                   {"deltas", deltas},
            {"samples", samples},       {"seed", seed},             {"out", out},
            {"format", format},         {"p", p},                   {"slope_min", slope_min},
            {"slope_max", slope_max},   {"convergence_row", convergence_row},
            {"standard_only", standard_only}, {"timing", timing}, {"inject_fault", inject_fault},
            {"tol", tol},               {"max_iter", max_iter}};
}

std::string ExperimentConfig::to_text(const std::string& prefix) const {
    std::ostringstream os;
    os.precision(17);
    auto line = [&](const char* k, const auto& v) { os << prefix << k << " = " << v << '\n'; };
    auto flag = [](bool b) { return b ? "true" : "false"; };
    line("experiment", experiment);
    line("base_start", base_start);
    line("base_length", base_length);
    line("depth", depth);
    line("op", op);
    line("weight", weight);
    line("b", b);
    line("f", f);
    line("deltas", join(deltas));
    line("samples", samples);
    line("seed", seed);
    line("out", out);
    line("format", format);
    line("p", p);
    line("slope_min", slope_min);
    line("slope_max", slope_max);
    line("convergence_row", flag(convergence_row));
    line("standard_only", flag(standard_only));
    line("timing", flag(timing));
    line("inject_fault", flag(inject_fault));
    line("tol", tol);
    line("max_iter", max_iter);
    return os.str();
}

ExperimentConfig defaults_for(const std::string& experiment) {
    ExperimentConfig c;
    c.experiment = experiment;
    if (experiment == "sharpness") {
        // Defaults above.
    } else if (experiment == "shift-sweep") {
        c.base_start = -1.0;
        c.base_length = 2.0;
        c.depth = 12;
    } else if (experiment == "average-shift") {
        c.base_start = 0.0;
        c.base_length = 1.0;
        c.depth = 10;
    } else if (experiment == "verify") {
        c.base_start = 0.0;
        c.base_length = 1.0;
        c.depth = 8;
    } else if (experiment == "norm") {
        c.base_start = -1.0;
        c.base_length = 2.0;
        c.depth = 10;
        c.op = "S";
        c.weight = "const:1";
    } else {
        throw Error("unknown experiment '" + experiment + "'");
    }
    return c;
}

void apply_config(ExperimentConfig& cfg, std::istream& is) {
    std::string line;
    int lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        if (const auto h = line.find('#'); h != std::string::npos) line.erase(h);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) throw Error("config line " + std::to_string(lineno) + ": expected key = value");
        cfg.set(line.substr(0, eq), line.substr(eq + 1));
    }
}

void apply_config_file(ExperimentConfig& cfg, const std::string& path) {
    std::ifstream is(path);
    if (!is) throw Error("config: cannot open '" + path + "'");
    apply_config(cfg, is);
}

ExperimentConfig resolve_config(const std::string& experiment, const char* env_seed, const std::string& config_path,
                                const std::vector<std::pair<std::string, std::string>>& overrides) {
    ExperimentConfig cfg = defaults_for(experiment);
    if (env_seed && *env_seed) cfg.set("seed", env_seed);
    if (!config_path.empty()) {
        apply_config_file(cfg, config_path);
        cfg.experiment = experiment;  // the subcommand decides what runs
    }
    for (const auto& [k, v] : overrides) cfg.set(k, v);
    return cfg;
}

}  // namespace dyadic::experiments
