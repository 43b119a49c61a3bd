// Acceptance runner: one PASS/FAIL line per criterion. `--criterion N` runs a single one.
#include <chrono>
#include <cmath>
#include <functional>
#include <iomanip>
#include <iostream>
#include <numbers>
#include <sstream>

#include <CLI11.hpp>

#include "dyadic/bellman.hpp"
#include "dyadic/embedding.hpp"
#include "dyadic/experiments/config.hpp"
#include "dyadic/experiments/sweeps.hpp"
#include "dyadic/haar.hpp"
#include "dyadic/haar_shift.hpp"
#include "dyadic/opnorm.hpp"
#include "dyadic/profile.hpp"
#include "dyadic/rng.hpp"
#include "dyadic/shift.hpp"

using namespace dyadic;
using namespace dyadic::experiments;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

struct Outcome {
    bool pass = true;
    std::ostringstream detail;

    void require(bool ok, const std::string& what) {
        if (!ok) {
            pass = false;
            detail << " [failed: " << what << "]";
        }
    }
};

StepFunction random_function(const DyadicGrid& g, std::uint64_t seed) {
    Rng rng(seed);
    std::vector<double> v(g.cells());
    for (double& x : v) x = rng.normal();
    return StepFunction(g, std::move(v));
}

double max_entry_diff(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
    const double scale = std::max({a.cwiseAbs().maxCoeff(), b.cwiseAbs().maxCoeff(), 1e-300});
    return (a - b).cwiseAbs().maxCoeff() / scale;
}

// Round trip and Parseval over depths 6..14, 1000 random functions each.
void ac1(Outcome& o) {
    const auto t0 = Clock::now();
    double worst_rt = 0.0, worst_parseval = 0.0;
    for (int L = 6; L <= 14; ++L) {
        DyadicGrid g(-1.0, 3.0, L);
        for (int t = 0; t < 1000; ++t) {
            const auto f = random_function(g, Rng::derive(static_cast<std::uint64_t>(L), t));
            const auto c = haar_analysis(f);
            worst_rt = std::max(worst_rt, max_relative_difference(f, haar_synthesis(c)));
            const double n2 = inner(f, f);
            worst_parseval = std::max(worst_parseval, std::abs(c.energy() - n2) / n2);
        }
    }
    const double secs = seconds_since(t0);
    o.detail << "round-trip max rel " << worst_rt << ", Parseval max rel " << worst_parseval << ", " << secs << " s";
    o.require(worst_rt <= 1e-12, "round trip <= 1e-12");
    o.require(worst_parseval <= 1e-10, "Parseval <= 1e-10");
    o.require(secs < 10.0, "runtime < 10 s");
}

// Adjoint identities for S and the paraproduct on 500 random triples.
void ac2(Outcome& o) {
    double worst_s = 0.0, worst_pi = 0.0;
    for (int t = 0; t < 500; ++t) {
        const int L = 4 + t % 8;
        DyadicGrid g(-2.0 + 0.01 * t, 1.0 + 0.02 * t, L);
        const auto b = random_function(g, Rng::derive(1, t));
        const auto f = random_function(g, Rng::derive(2, t));
        const auto k = random_function(g, Rng::derive(3, t));
        auto rel = [](const LinOp& T, const LinOp& Ts, const StepFunction& f, const StepFunction& k) {
            const auto Tf = T(f), Tsk = Ts(k);
            const double scale = std::max({norm_l2(Tf) * norm_l2(k), norm_l2(f) * norm_l2(Tsk), 1e-300});
            return std::abs(inner(Tf, k) - inner(f, Tsk)) / scale;
        };
        worst_s = std::max(worst_s, rel(shift_S(g), shift_S_adjoint(g), f, k));
        worst_pi = std::max(worst_pi, rel(paraproduct(b), paraproduct_adjoint(b), f, k));
    }
    o.detail << "S max rel " << worst_s << ", pi_b max rel " << worst_pi;
    o.require(worst_s <= 1e-10, "S adjoint <= 1e-10");
    o.require(worst_pi <= 1e-10, "pi adjoint <= 1e-10");
}

// Closed-form [lambda_b, S] against the composed commutator, dense, 100 random b.
void ac3(Outcome& o) {
    double worst = 0.0;
    for (int t = 0; t < 100; ++t) {
        const int L = 3 + t % 6;  // depths 3..8
        DyadicGrid g(-1.0, 2.0, L);
        const auto b = random_function(g, Rng::derive(4, t));
        const auto lhs = commutator(lambda_op(b), shift_S(g)).action_matrix();
        const auto rhs = lambda_commutator_closed(b).action_matrix();
        worst = std::max(worst, max_entry_diff(lhs, rhs));
    }
    o.detail << "max entry rel diff " << worst << " over 100 symbols, depths 3..8";
    o.require(worst <= 1e-12, "dense agreement <= 1e-12");
}

// ||S|| on depth 6: power iteration vs SVD vs sqrt 2.
void ac4(Outcome& o) {
    const auto t0 = Clock::now();
    DyadicGrid g(0.0, 1.0, 6);
    const auto S = shift_S(g);
    const auto pi = l2w_opnorm(S, weight_from_profile(AnalyticProfile::constant(1.0), g));
    const double svd = dense_l2_norm(S);
    const double secs = seconds_since(t0);
    o.detail << std::setprecision(15) << "power iteration " << pi.norm << ", SVD " << svd << ", sqrt2 "
             << std::sqrt(2.0) << std::setprecision(6) << ", " << pi.iterations << " iterations, " << secs << " s";
    o.require(pi.converged, "converged");
    o.require(std::abs(pi.norm - svd) <= 1e-8, "power vs SVD <= 1e-8");
    o.require(std::abs(svd - std::sqrt(2.0)) <= 1e-8, "value sqrt 2");
    o.require(secs < 5.0, "runtime < 5 s");
}

// Exact-constant inequalities, >= 1e5 instances each, seeds 0..9.
void ac5(Outcome& o) {
    constexpr long long kTarget = 100000;
    const auto t0 = Clock::now();
    struct Total {
        std::string id;
        bool greater = false;  // lhs >= rhs: the tightest ratio is the smallest
        long long min_instances = -1;
        long long violations = 0;
        double worst_ratio = std::nan("");
        void add_seed(long long inst, long long viol, double ratio) {
            min_instances = min_instances < 0 ? inst : std::min(min_instances, inst);
            violations += viol;
            if (std::isnan(worst_ratio)) worst_ratio = ratio;
            worst_ratio = greater ? std::min(worst_ratio, ratio) : std::max(worst_ratio, ratio);
        }
    };
    std::vector<Total> totals;
    auto total = [&](const std::string& id, bool greater = false) -> Total& {
        for (auto& t : totals)
            if (t.id == id) return t;
        totals.push_back({id, greater});
        return totals.back();
    };

    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        // Weight-only and pairing checks on depth-10 trees.
        struct Acc {
            long long inst = 0, viol = 0;
            double ratio = 0.0;
            void add(const InequalityReport& r) {
                inst += r.instances;
                viol += r.violations;
                ratio = std::max(ratio, r.ratio);
            }
        };
        Acc p1, hh, p7, p9, icl1, icl2, cit;
        DyadicGrid g(0.0, 1.0, 10), gp(-1.0, 2.0, 10);
        for (std::uint64_t k = 0; std::min({p1.inst, hh.inst, p7.inst, p9.inst, icl1.inst, icl2.inst}) < kTarget; ++k) {
            Rng rng(Rng::derive(seed, 1000 + k));
            const bool power = k % 10 == 9;
            const Weight w = power ? weight_from_profile(AnalyticProfile::power_abs(rng.uniform(-0.9, 0.9)), gp)
                                   : random_martingale_weight(g, rng.uniform(0.05, 0.4), rng.bits());
            if (p1.inst < kTarget) p1.add(check_haar_pairing(w));
            if (hh.inst < kTarget) hh.add(check_parent_pairing(w));
            if (p7.inst < kTarget) p7.add(check_child_pairing(w));
            if (p9.inst < kTarget) p9.add(check_weighted_haar_value(w));
            if (icl1.inst < kTarget) icl1.add(lemma_icl1(w));
            if (icl2.inst < kTarget) {
                const auto alpha = haar_energy_sequence(random_function(w.grid(), rng.bits()));
                icl2.add(lemma_icl2(w, alpha, carleson_Q_lebesgue(alpha, w.grid()).value));
            }
        }
        DyadicGrid gc(0.0, 1.0, 8);
        for (std::uint64_t k = 0; cit.inst < kTarget; ++k) {
            Rng rng(Rng::derive(seed, 5000 + k));
            const auto w = random_martingale_weight(gc, rng.uniform(0.05, 0.4), rng.bits());
            cit.add(cit_verify(random_sequence(gc, rng.bits()), w, 2000, rng.bits()));
        }
        total("Haar pairing |<h_K, h^w_I>_w| <= <w>_K^1/2").add_seed(p1.inst, p1.viol, p1.ratio);
        total("parent pairing <= sqrt2 [w]^1/2").add_seed(hh.inst, hh.viol, hh.ratio);
        total("child pairing <= sqrt2 [w]^1/2").add_seed(p7.inst, p7.viol, p7.ratio);
        total("weighted Haar value <= w(J)^-1/2").add_seed(p9.inst, p9.viol, p9.ratio);
        total("Carleson embedding, constant 4Q").add_seed(cit.inst, cit.viol, cit.ratio);
        total("inverse-average lemma, constant 1").add_seed(icl1.inst, icl1.viol, icl1.ratio);
        total("Carleson-weight lemma, constant 4Q").add_seed(icl2.inst, icl2.viol, icl2.ratio);

        // Bellman inequalities.
        const auto eb = bellman_B_check(kTarget, Rng::derive(seed, 1));
        total("B Hessian bound (>=), constant 1/8", true).add_seed(eb.instances, eb.violations, eb.ratio);
        const auto c1 = estimate_C1(1000000, Rng::derive(seed, 2));
        const double a = default_bellman_a(c1.c1);
        long long size_inst = 0, size_viol = 0, conv_inst = 0, conv_viol = 0;
        double size_ratio = 0.0, conv_ratio = 0.0;
        for (std::uint64_t k = 0; conv_inst < kTarget || size_inst < kTarget; ++k) {
            const long long want = std::max(kTarget - conv_inst, 1000LL);
            const auto r = bellman_A_check(a, want, Rng::derive(seed, 3 + k));
            size_inst += r.size.instances;
            size_viol += r.size.violations;
            size_ratio = std::max(size_ratio, r.size.ratio);
            conv_inst += r.convexity.instances;
            conv_viol += r.convexity.violations;
            conv_ratio = std::max(conv_ratio, r.convexity.ratio);
        }
        total("A size bound, constant a+2").add_seed(size_inst, size_viol, size_ratio);
        total("A three-point convexity (>=), constant C2", true).add_seed(conv_inst, conv_viol, conv_ratio);
    }
    const double secs = seconds_since(t0);
    long long viol = 0, min_inst = -1;
    for (const auto& t : totals) {
        viol += t.violations;
        min_inst = min_inst < 0 ? t.min_instances : std::min(min_inst, t.min_instances);
    }
    o.detail << totals.size() << " inequalities x 10 seeds, fewest instances per seed " << min_inst
             << ", violations " << viol << ", " << secs << " s";
    for (const auto& t : totals)
        std::cout << "    " << t.id << ": min instances/seed " << t.min_instances << ", violations " << t.violations
                  << ", tightest lhs/rhs " << t.worst_ratio << '\n';
    o.require(viol == 0, "zero violations");
    o.require(min_inst >= kTarget, ">= 1e5 instances per inequality per seed");
    o.require(secs < 300.0, "runtime < 5 min");
}

// Growth of [w_delta]_{A2} against 1/delta.
void ac6(Outcome& o) {
    const auto t0 = Clock::now();
    DyadicGrid g(-1.0, 2.0, 16);
    std::vector<double> x, y;
    for (double d : {0.4, 0.2, 0.1, 0.05}) {
        const double a2 = a2d(weight_from_profile(AnalyticProfile::power_abs(1.0 - d), g)).value;
        x.push_back(std::log(1.0 / d));
        y.push_back(std::log(a2));
        o.detail << "delta " << d << ": " << a2 << "; ";
    }
    const auto fit = least_squares(x, y);
    const double secs = seconds_since(t0);
    o.detail << "slope " << fit.slope << ", " << secs << " s";
    o.require(std::abs(fit.slope - 1.0) <= 0.1, "slope 1 +- 0.1");
    o.require(secs < 30.0, "runtime < 30 s");
}

// Quadrature-free benchmark of the log integral.
void ac7(Outcome& o) {
    double worst = 0.0;
    for (double d : {0.5, 0.25, 0.1}) {
        const double v = analytic_benchmark(d, 16);
        const double rel = std::abs(v * d * d - 1.0);
        worst = std::max(worst, rel);
        o.detail << "delta " << d << ": " << v << " vs " << 1.0 / (d * d) << "; ";
    }
    o.detail << "max rel error " << worst;
    o.require(worst <= 5e-3, "within 0.5%");
}

// Quadratic sharpness of [b,H].
void ac8(Outcome& o) {
    const auto t0 = Clock::now();
    const auto r = run_sharpness_hilbert(defaults_for("sharpness"));
    const double secs = seconds_since(t0);
    for (const auto& row : r.rows) o.detail << "delta " << row.delta << ": a2 " << row.a2 << " ratio " << row.ratio << "; ";
    o.detail << "slope " << r.fit.slope << ", " << secs << " s";
    o.require(r.fit_ok, "fit available");
    o.require(r.fit.slope >= 1.8, "slope >= 1.8");
    o.require(secs < 120.0, "runtime < 2 min");
}

// Linear bounds for the building blocks.
void ac9(Outcome& o) {
    const auto t0 = Clock::now();
    for (const char* op : {"S", "comm-lambda-S", "pistar-S", "S-pi"}) {
        auto cfg = defaults_for("shift-sweep");
        cfg.op = op;
        const auto r = run_shift_norm_sweep(cfg);
        bool conv = true;
        for (const auto& pi : r.extra.value("power_iteration", nlohmann::json::array()))
            conv = conv && pi.value("converged", false);
        o.detail << op << " slope " << r.fit.slope << "; ";
        o.require(r.fit_ok && r.fit.slope <= 1.15, std::string(op) + " slope <= 1.15");
        o.require(conv, std::string(op) + " power iteration converged");
    }
    const double secs = seconds_since(t0);
    o.detail << secs << " s";
    o.require(secs < 300.0, "runtime < 5 min");
}

// Commutator of lambda_b with random Haar shifts.
void ac10(Outcome& o) {
    double worst_dense = 0.0, worst_bound = 0.0, worst_c = 0.0;
    bool valid = true;
    for (int t = 0; t < 50; ++t) {
        Rng rng(Rng::derive(10, t));
        const int L = 5 + t % 3;
        DyadicGrid g(-1.0, 2.0, L);
        const int tau = 1 + t % 2;
        const auto spec = random_haar_shift_spec(g, tau, rng.uniform(0.5, 2.0), 2, rng.bits());
        const auto b = random_function(g, rng.bits());
        const auto out = lambda_shift_commutator(spec, b);

        worst_dense = std::max(worst_dense, max_entry_diff(haar_shift(out, g).action_matrix(),
                                                           commutator(lambda_op(b), haar_shift(spec, g)).action_matrix()));
        try {
            validate(out, g);
        } catch (const Error& e) {
            valid = false;
            o.detail << "invalid spec " << t << ": " << e.what() << "; ";
        }
        // Stated constant: C' = C max |<b>_{Q''} - <b>_{Q'}|.
        double dmax = 0.0;
        for (const auto& e : spec.entries) dmax = std::max(dmax, std::abs(average(b, e.to) - average(b, e.from)));
        worst_c = std::max(worst_c, std::abs(out.C - spec.C * dmax) / std::max(out.C, 1e-300));
        worst_bound = std::max(worst_bound, out.C / (spec.C * (2.0 * tau + 2.0) * 2.0 * bmo_d(b).value));
    }
    o.detail << "max dense rel diff " << worst_dense << ", C' vs C max|diff| rel " << worst_c
             << ", max C' / (C (2tau+2) 2 bmo) " << worst_bound;
    o.require(worst_dense <= 1e-12, "dense agreement <= 1e-12");
    o.require(valid, "size condition holds with C'");
    o.require(worst_c <= 1e-12, "C' equals C max|<b>_{Q''} - <b>_{Q'}|");
    o.require(worst_bound <= 1.0 + 1e-12, "C' <= C (2 tau + 2) 2 ||b||_BMO");
}

// Averaged shift kernel against -1/(x-y).
void ac11(Outcome& o) {
    const auto t0 = Clock::now();
    auto cfg = defaults_for("average-shift");
    cfg.samples = 10000;
    cfg.depth = 10;
    cfg.convergence_row = false;
    const auto r = run_average_shift(cfg);
    const double secs = seconds_since(t0);
    const auto& row = r.rows.at(0);
    o.detail << "correlation " << row.corr_cell << " (cell-averaged reference), fitted c " << row.c_cell << " +- "
             << row.se_c << "; midpoint reference: correlation " << row.corr_midpoint << ", c " << row.c_midpoint
             << "; " << secs << " s";
    o.require(row.corr_cell >= 0.99, "correlation >= 0.99");
    o.require(secs < 120.0, "runtime < 2 min");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Acceptance criteria runner"};
    int only = 0;
    app.add_option("--criterion", only, "Run a single criterion (1-11)")->check(CLI::Range(1, 11));
    CLI11_PARSE(app, argc, argv);

    const std::vector<std::function<void(Outcome&)>> criteria{ac1, ac2, ac3, ac4, ac5, ac6,
                                                               ac7, ac8, ac9, ac10, ac11};
    bool all = true;
    for (int n = 1; n <= static_cast<int>(criteria.size()); ++n) {
        if (only != 0 && n != only) continue;
        Outcome o;
        o.detail << std::setprecision(6);
        try {
            criteria[static_cast<std::size_t>(n - 1)](o);
        } catch (const std::exception& e) {
            o.pass = false;
            o.detail << " [exception: " << e.what() << "]";
        }
        std::cout << "AC" << n << ' ' << (o.pass ? "PASS" : "FAIL") << ": " << o.detail.str() << std::endl;
        all = all && o.pass;
    }
    return all ? 0 : 1;
}
