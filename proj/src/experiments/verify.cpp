#include <cmath>
#include <sstream>

#include "dyadic/bellman.hpp"
#include "dyadic/embedding.hpp"
#include "dyadic/experiments/sweeps.hpp"
#include "dyadic/haar.hpp"
#include "dyadic/haar_shift.hpp"
#include "dyadic/hilbert.hpp"
#include "dyadic/profile.hpp"
#include "dyadic/rng.hpp"
#include "dyadic/shift.hpp"

namespace dyadic::experiments {

namespace {

StepFunction random_function(const DyadicGrid& g, std::uint64_t seed) {
    Rng rng(seed);
    std::vector<double> v(g.cells());
    for (double& x : v) x = rng.normal();
    return StepFunction(g, std::move(v));
}

InequalityReport adjoint_report(const std::string& id, const LinOp& t, const LinOp& ts, std::uint64_t seed) {
    const double tol = 1e-10;
    const auto c = adjoint_check(t, ts, seed, tol);
    InequalityReport r;
    r.lemma_id = id;
    r.lhs = c.max_error;
    r.rhs = tol;
    r.ratio = c.max_error / tol;
    r.pass = c.pass;
    r.seed = seed;
    r.instances = static_cast<long long>(t.grid().cells());
    r.violations = c.pass ? 0 : 1;
    r.witness = c.offending ? "offending node " + c.offending->to_string() : "";
    r.params = {{"operator", t.descriptor()}, {"adjoint", ts.descriptor()}, {"depth", t.grid().depth()}};
    return r;
}

/// Relative agreement of two step functions as an exact report with tolerance tol.
InequalityReport agreement(const std::string& id, const StepFunction& a, const StepFunction& b, double tol,
                           std::uint64_t seed) {
    InequalityReport r;
    r.lemma_id = id;
    r.lhs = max_relative_difference(a, b);
    r.rhs = tol;
    r.ratio = r.lhs / tol;
    r.pass = r.lhs <= tol;
    r.seed = seed;
    r.instances = 1;
    r.violations = r.pass ? 0 : 1;
    return r;
}

InequalityReport empirical(const std::string& id, double lhs, double rhs, const std::string& witness, std::uint64_t seed) {
    InequalityReport r;
    r.lemma_id = id;
    r.lhs = lhs;
    r.rhs = rhs;
    r.ratio = rhs != 0.0 ? lhs / rhs : 0.0;
    r.exact = false;
    r.pass = std::isfinite(r.ratio);
    r.witness = witness;
    r.seed = seed;
    r.instances = 1;
    return r;
}

/// Accumulates reports with the same id into one.
class Collector {
public:
    void add(InequalityReport r) {
        for (auto& [id, parts] : groups_)
            if (id == r.lemma_id) {
                parts.push_back(std::move(r));
                return;
            }
        std::string id = r.lemma_id;
        std::vector<InequalityReport> parts;
        parts.push_back(std::move(r));
        groups_.emplace_back(std::move(id), std::move(parts));
    }
    std::vector<InequalityReport> merged() const {
        std::vector<InequalityReport> out;
        for (const auto& [id, parts] : groups_) out.push_back(parts.size() == 1 ? parts.front() : merge_reports(parts));
        return out;
    }

private:
    std::vector<std::pair<std::string, std::vector<InequalityReport>>> groups_;
};

}  // namespace

VerifyResult run_verify_suite(const ExperimentConfig& cfg) {
    const DyadicGrid g(cfg.base_start, cfg.base_length, cfg.depth);
    const std::uint64_t seed = cfg.seed;
    Collector col;
    auto sub = [&](std::uint64_t k) { return Rng::derive(seed, k); };

    // Weights: seeded martingale weights plus one power weight.
    std::vector<Weight> weights;
    for (int k = 0; k < 6; ++k) weights.push_back(random_martingale_weight(g, 0.1 + 0.05 * k, sub(100 + k)));
    weights.push_back(weight_from_profile(AnalyticProfile::power_abs(0.8), g));

    for (std::size_t k = 0; k < weights.size(); ++k) {
        const Weight& w = weights[k];
        const std::uint64_t s = sub(200 + k);
        col.add(check_haar_pairing(w));
        col.add(check_parent_pairing(w));
        col.add(check_child_pairing(w));
        col.add(check_weighted_haar_value(w));
        col.add(lemma_icl1(w));
        const StepFunction b = random_function(g, sub(300 + k));
        const auto alpha = haar_energy_sequence(b);
        col.add(lemma_icl2(w, alpha, carleson_Q_lebesgue(alpha, g).value));
        const auto seq = random_sequence(g, sub(400 + k));
        col.add(cit_verify(seq, w, 30, s));
        col.add(check_weighted_expansion(random_function(g, sub(500 + k)), w));
        col.add(check_bessel(random_function(g, sub(600 + k)), w));
        // Report-only.
        col.add(buckley_wittwer(w));
        col.add(lemma_icl3(w));
        col.add(lemma_wls(w));
        col.add(bit_check(seq, w, w.inverse(), 20, s));
        Rng rng(sub(700 + k));
        const int level = static_cast<int>(rng.below(static_cast<std::uint64_t>(g.depth())));
        const NodeId node{level, static_cast<std::int64_t>(rng.below(std::uint64_t{1} << level))};
        const double ts = lemma_ts_ratio(b, w, node);
        auto tr = empirical("truncated-shift-ratio", ts, 1.0, w.descriptor() + " " + node.to_string(), s);
        col.add(tr);
    }

    // Bellman inequalities.
    col.add(bellman_B_check(100000, sub(1)));
    const auto c1 = estimate_C1(1000000, sub(2));
    const double a = default_bellman_a(c1.c1);
    auto bA = bellman_A_check(a, 100000, sub(3));
    bA.size.params["C1_estimate"] = c1.c1;
    bA.size.params["C1_samples"] = c1.samples;
    bA.convexity.params["C1_estimate"] = c1.c1;
    bA.convexity.params["C1_samples"] = c1.samples;
    col.add(bA.size);
    col.add(bA.convexity);

    // Operator identities.
    const StepFunction b = random_function(g, sub(10));
    const StepFunction f = random_function(g, sub(11));
    col.add(adjoint_report("adjoint-S", shift_S(g), shift_S_adjoint(g), sub(20)));
    col.add(adjoint_report("adjoint-paraproduct", paraproduct(b), paraproduct_adjoint(b), sub(21)));
    const LinOp lam = lambda_op(b);
    col.add(adjoint_report("adjoint-lambda", lam, lam.adjoint(), sub(22)));
    const LinOp closed = lambda_commutator_closed(b);
    col.add(adjoint_report("adjoint-lambda-commutator", closed, closed.adjoint(), sub(23)));
    const LinOp sb = shift_S_b(b);
    col.add(adjoint_report("adjoint-S-b", sb, sb.adjoint(), sub(24)));
    const LinOp tsb = truncated_S_b(b, NodeId{0, 0}, weights.front());
    col.add(adjoint_report("adjoint-truncated-S-b", tsb, tsb.adjoint(), sub(25)));
    const LinOp hil = hilbert_direct(g);
    col.add(adjoint_report("adjoint-hilbert", hil, hil.adjoint(), sub(26)));
    const auto spec = random_haar_shift_spec(g, 2, 1.0, 2, sub(27));
    const LinOp hs = haar_shift(spec, g);
    col.add(adjoint_report("adjoint-haar-shift", hs, haar_shift(spec.adjoint(), g), sub(28)));
    if (cfg.inject_fault) {
        auto faulty = shift_S_spec(g);
        if (!faulty.entries.empty()) faulty.entries[faulty.entries.size() / 2].a *= -1.0;
        col.add(adjoint_report("adjoint-injected-fault", haar_shift(faulty, g), shift_S_adjoint(g), sub(29)));
    }

    {
        // Haar round trip and Parseval.
        const auto c = haar_analysis(f);
        col.add(agreement("haar-round-trip", haar_synthesis(c), f, 1e-12, sub(11)));
        InequalityReport pr;
        pr.lemma_id = "parseval";
        const double n2 = inner(f, f), e = c.energy();
        pr.lhs = std::abs(n2 - e) / n2;
        pr.rhs = 1e-10;
        pr.ratio = pr.lhs / pr.rhs;
        pr.pass = pr.lhs <= pr.rhs;
        pr.violations = pr.pass ? 0 : 1;
        pr.instances = 1;
        col.add(pr);
    }
    {
        // bf = pi*_b f + pi_b f + lambda_b f + root term.
        auto sum = paraproduct_adjoint(b).apply(f) + paraproduct(b).apply(f) + lam.apply(f) +
                   decomposition_root_term(b, f);
        col.add(agreement("product-decomposition", sum, b.times(f), 1e-10, sub(12)));
        col.add(agreement("lambda-commutator-closed-form", closed.apply(f),
                          commutator(lam, shift_S(g)).apply(f), 1e-10, sub(12)));
    }
    {
        // |Delta_I b| <= 2 ||b||_BMO on every internal node.
        Tally t("increment-bmo", Relation::LessEq, true, seed);
        const double bmo = bmo_d(b).value;
        for_each_node(0, g.depth() - 1, [&](NodeId n) {
            t.add(std::abs(delta_avg(b, n)), 2.0 * bmo, [&] { return n.to_string(); });
        });
        col.add(t.report());
    }
    if (g.depth() >= 3) {
        // Report-only BMO constant of the reflected extension of phi on the middle node (2,1).
        const NodeId mid{2, 1};
        const StepFunction psi = bmo_extension(b, mid);
        const double lhs = bmo_d(psi).value, rhs = bmo_d(b).value;
        col.add(empirical("bmo-extension-constant", lhs, rhs, mid.to_string(), sub(13)));
    }

    VerifyResult out;
    out.config = cfg;
    out.reports = col.merged();
    for (const auto& r : out.reports)
        if (r.exact) out.exact_violations += r.violations;
    return out;
}

nlohmann::json to_json(const VerifyResult& r) {
    nlohmann::json reps = nlohmann::json::array();
    for (const auto& x : r.reports) reps.push_back(dyadic::to_json(x));
    return {{"config", r.config.to_json()},
            {"reports", reps},
            {"exact_violations", r.exact_violations},
            {"exit_status", r.exit_status()}};
}

}  // namespace dyadic::experiments
