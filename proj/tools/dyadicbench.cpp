#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "dyadic/embedding.hpp"
#include "dyadic/experiments/config.hpp"
#include "dyadic/experiments/op_descriptor.hpp"
#include "dyadic/experiments/sweeps.hpp"
#include "dyadic/opnorm.hpp"
#include "dyadic/profile.hpp"

using namespace dyadic;
using namespace dyadic::experiments;

namespace {

struct Flags {
    std::string config;
    std::optional<int> depth;
    std::optional<std::string> base, deltas, out, format, op, weight, b, f;
    std::optional<long long> seed;
    std::optional<int> samples;
    std::optional<double> p;
    std::vector<std::string> sets;
    bool inject_fault = false;
    std::string witness_path;
};

ExperimentConfig resolve(const std::string& experiment, const Flags& fl) {
    std::vector<std::pair<std::string, std::string>> ov;
    auto put = [&](const char* key, const auto& opt) {
        if (!opt) return;
        std::ostringstream os;
        os << std::setprecision(17) << *opt;
        ov.emplace_back(key, os.str());
    };
    put("depth", fl.depth);
    put("base", fl.base);
    put("deltas", fl.deltas);
    put("seed", fl.seed);
    put("out", fl.out);
    put("format", fl.format);
    put("op", fl.op);
    put("weight", fl.weight);
    put("b", fl.b);
    put("f", fl.f);
    put("samples", fl.samples);
    put("p", fl.p);
    if (fl.inject_fault) ov.emplace_back("inject_fault", "true");
    for (const auto& kv : fl.sets) {
        const auto eq = kv.find('=');
        if (eq == std::string::npos) throw Error("--set expects key=value, got '" + kv + "'");
        ov.emplace_back(kv.substr(0, eq), kv.substr(eq + 1));
    }
    return resolve_config(experiment, std::getenv("DYADICBENCH_SEED"), fl.config, ov);
}

template <typename Writer>
void emit(const ExperimentConfig& cfg, Writer&& write) {
    if (cfg.out.empty()) {
        write(std::cout);
        return;
    }
    std::ofstream os(cfg.out);
    if (!os) throw Error("cannot open output '" + cfg.out + "'");
    write(os);
}

int run_sweep(const SweepResult& r) {
    emit(r.config, [&](std::ostream& os) {
        if (r.config.format == "json")
            os << to_json(r).dump(2) << '\n';
        else
            write_csv(os, r);
    });
    std::cerr << "status: " << r.status;
    if (r.fit_ok) std::cerr << ", slope " << std::setprecision(6) << r.fit.slope;
    std::cerr << '\n';
    return r.bound_ok ? 0 : 3;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Dyadic harmonic analysis experiments: sharpness sweeps, shift norms, averaged shifts, verification."};
    app.require_subcommand(1);
    app.fallthrough();
    Flags fl;
    app.add_option("--config", fl.config, "key = value configuration file");
    app.add_option("--depth", fl.depth, "Tree depth");
    app.add_option("--base", fl.base, "Base interval as <lo>,<len>");
    app.add_option("--deltas", fl.deltas, "Comma-separated delta list");
    app.add_option("--seed", fl.seed, "Master seed (falls back to DYADICBENCH_SEED)");
    app.add_option("--out", fl.out, "Output path (stdout when absent)");
    app.add_option("--format", fl.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
    app.add_option("--set", fl.sets, "Extra key=value overrides")->take_all();

    auto* sharp = app.add_subcommand("sharpness", "Commutator [b,H] ratio sweep over power weights");
    sharp->add_option("--p", fl.p, "Exponent in (1,2]");
    sharp->add_option("--b", fl.b, "Symbol profile");
    sharp->add_option("--f", fl.f, "Test function profile");
    sharp->add_option("--weight", fl.weight, "Fixed weight profile instead of |x|^{(1-delta)(p-1)}");

    auto* shift = app.add_subcommand("shift-sweep", "Weighted norms of S, [lambda_b,S], pi*_b S, S pi_b");
    shift->add_option("--op", fl.op, "S | comm-lambda-S | pistar-S | S-pi");
    shift->add_option("--b", fl.b, "Symbol profile");
    shift->add_option("--weight", fl.weight, "Fixed weight profile instead of |x|^{1-delta}");

    auto* avg = app.add_subcommand("average-shift", "Monte-Carlo average of shifted dyadic shifts");
    avg->add_option("--samples", fl.samples, "Number of (alpha, r) samples");

    auto* verify = app.add_subcommand("verify", "Run every inequality check and identity");
    verify->add_flag("--inject-fault", fl.inject_fault, "Add a shift with one flipped sign (mutation test)");

    auto* norm = app.add_subcommand("norm", "Weighted L2 operator norm by power iteration");
    norm->add_option("--op", fl.op, "Operator descriptor")->required();
    norm->add_option("--weight", fl.weight, "Weight profile")->required();
    norm->add_option("--witness", fl.witness_path, "Write the witness step function as CSV");

    CLI11_PARSE(app, argc, argv);

    try {
        if (sharp->parsed()) {
            auto cfg = resolve("sharpness", fl);
            return run_sweep(cfg.p == 2.0 ? run_sharpness_hilbert(cfg) : run_sharpness_lp(cfg, cfg.p));
        }
        if (shift->parsed()) return run_sweep(run_shift_norm_sweep(resolve("shift-sweep", fl)));
        if (avg->parsed()) {
            const auto r = run_average_shift(resolve("average-shift", fl));
            emit(r.config, [&](std::ostream& os) {
                if (r.config.format == "json")
                    os << to_json(r).dump(2) << '\n';
                else
                    write_csv(os, r);
            });
            return 0;
        }
        if (verify->parsed()) {
            auto cfg = resolve("verify", fl);
            const auto r = run_verify_suite(cfg);
            emit(cfg, [&](std::ostream& os) {
                if (cfg.format == "json") {
                    os << to_json(r).dump(2) << '\n';
                    return;
                }
                os << cfg.to_text("# ");
                os << "lemma_id,exact,pass,lhs,rhs,ratio,instances,violations,witness\n";
                os << std::setprecision(17);
                for (const auto& x : r.reports)
                    os << x.lemma_id << ',' << (x.exact ? "true" : "false") << ',' << (x.pass ? "true" : "false") << ','
                       << x.lhs << ',' << x.rhs << ',' << x.ratio << ',' << x.instances << ',' << x.violations
                       << ",\"" << x.witness << "\"\n";
            });
            for (const auto& x : r.reports)
                if (x.exact && x.violations > 0)
                    std::cerr << "violation: " << x.lemma_id << " at " << x.witness << '\n';
            return r.exit_status();
        }
        if (norm->parsed()) {
            auto cfg = resolve("norm", fl);
            const DyadicGrid g(cfg.base_start, cfg.base_length, cfg.depth);
            const LinOp t = parse_operator(cfg.op, g);
            const Weight w = weight_from_profile(AnalyticProfile::parse(cfg.weight), g);
            const auto rep = l2w_opnorm(t, w, {cfg.tol, cfg.max_iter, cfg.seed});
            emit(cfg, [&](std::ostream& os) {
                os << std::setprecision(17);
                if (cfg.format == "json") {
                    nlohmann::json j = {{"config", cfg.to_json()}, {"op", rep.op},
                                        {"weight", rep.weight}, {"norm", rep.norm},
                                        {"iterations", rep.iterations}, {"converged", rep.converged}};
                    os << j.dump(2) << '\n';
                } else {
                    os << cfg.to_text("# ");
                    os << "op,weight,norm,iterations,converged\n"
                       << rep.op << ',' << rep.weight << ',' << rep.norm << ',' << rep.iterations << ','
                       << (rep.converged ? "true" : "false") << '\n';
                }
            });
            if (!fl.witness_path.empty()) {
                std::ofstream ws(fl.witness_path);
                if (!ws) throw Error("cannot open witness output '" + fl.witness_path + "'");
                write_csv(ws, rep.witness);
            }
            return rep.converged ? 0 : 4;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    return 0;
}
