#include "dyadic/embedding.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "dyadic/haar.hpp"
#include "dyadic/rng.hpp"
#include "dyadic/shift.hpp"

namespace dyadic {

namespace {

std::string node_str(NodeId n) { return n.to_string(); }

/// Node averages and lengths of one density table.
struct NodeStats {
    NodeArray<double> avg;
    NodeArray<double> measure;
};

NodeStats node_stats(const StepFunction& density) {
    const auto& g = density.grid();
    NodeStats s{node_averages(density), NodeArray<double>(g.depth())};
    for_each_node(0, g.depth(), [&](NodeId n) { s.measure[n] = s.avg[n] * g.node_length(n); });
    return s;
}

void require_alpha(const NodeArray<double>& alpha, const DyadicGrid& g) {
    if (alpha.max_level() != g.depth())
        throw Error("sequence must cover levels 0.." + std::to_string(g.depth()) + ", got 0.." +
                    std::to_string(alpha.max_level()));
    for (std::size_t i = 0; i < alpha.size(); ++i)
        if (!(alpha.at_flat(i) >= 0.0) || !std::isfinite(alpha.at_flat(i)))
            throw Error("sequence must be nonnegative and finite at " + NodeId::from_flat(i).to_string());
}

/// max over nodes of num / den, first strict maximum; nodes with den = 0 are skipped.
NodeMax ratio_max(const NodeArray<double>& num, const NodeArray<double>& den) {
    NodeMax best{0.0, NodeId{0, 0}};
    bool have = false;
    for (std::size_t i = 0; i < num.size(); ++i) {
        if (den.at_flat(i) == 0.0) continue;
        const double r = num.at_flat(i) / den.at_flat(i);
        if (!have || r > best.value) {
            best = {r, NodeId::from_flat(i)};
            have = true;
        }
    }
    return best;
}

/// Node integrals of f * sigma for a density table sigma.
NodeArray<double> weighted_integrals(const StepFunction& f, const StepFunction& sigma) {
    return node_stats(f.times(sigma)).measure;
}

/// Values of h^sigma_I on I_+ (p) and I_- (n) from node measures.
struct HaarValues {
    double p, n;
};

HaarValues weighted_haar_values(const NodeArray<double>& m, NodeId I) {
    const double mi = m[I], mm = m[I.left()], mp = m[I.right()];
    return {std::sqrt(mm / (mi * mp)), -std::sqrt(mp / (mi * mm))};
}

/// <h_K, h^sigma_K>_sigma.
double self_pairing(const NodeArray<double>& m, NodeId K, double len) {
    return 2.0 * std::sqrt(m[K.left()] * m[K.right()] / (len * m[K]));
}

}  // namespace

NodeArray<double> subtree_sums(const NodeArray<double>& t) {
    NodeArray<double> s = t;
    const int L = t.max_level();
    for (int l = L - 1; l >= 0; --l) {
        const std::size_t first = (std::size_t{1} << l) - 1;
        for (std::size_t k = 0; k < (std::size_t{1} << l); ++k) {
            const std::size_t p = first + k;
            s.at_flat(p) += s.at_flat(2 * p + 1) + s.at_flat(2 * p + 2);
        }
    }
    return s;
}

NodeMax carleson_Q(const NodeArray<double>& alpha, const Weight& w) {
    require_alpha(alpha, w.grid());
    return ratio_max(subtree_sums(alpha), node_stats(w.reciprocal()).measure);
}

NodeMax carleson_Q_lebesgue(const NodeArray<double>& alpha, const DyadicGrid& g) {
    require_alpha(alpha, g);
    NodeArray<double> len(g.depth());
    for_each_node(0, g.depth(), [&](NodeId n) { len[n] = g.node_length(n); });
    return ratio_max(subtree_sums(alpha), len);
}

NodeArray<double> haar_energy_sequence(const StepFunction& b) {
    const auto& g = b.grid();
    const auto c = haar_analysis(b);
    NodeArray<double> a(g.depth(), 0.0);
    for_each_node(0, g.depth() - 1, [&](NodeId n) { a[n] = c[n] * c[n]; });
    return a;
}

NodeArray<double> random_sequence(const DyadicGrid& g, std::uint64_t seed) {
    Rng rng(seed);
    NodeArray<double> a(g.depth(), 0.0);
    for_each_node(0, g.depth(), [&](NodeId n) {
        const double keep = rng.uniform();
        const double v = rng.uniform();
        if (keep < 0.5) a[n] = v * g.node_length(n);
    });
    return a;
}

double carleson_sum(const NodeArray<double>& alpha, const StepFunction& f, const Weight& w) {
    require_same_grid(f.grid(), w.grid());
    require_alpha(alpha, w.grid());
    const auto fi = weighted_integrals(f, w.reciprocal());
    const auto sig = node_stats(w.reciprocal()).measure;
    double s = 0.0;
    for (std::size_t i = 0; i < alpha.size(); ++i) {
        if (alpha.at_flat(i) == 0.0) continue;
        const double avg = fi.at_flat(i) / sig.at_flat(i);
        s += alpha.at_flat(i) * avg * avg;
    }
    return s;
}

InequalityReport cit_verify(const NodeArray<double>& alpha, const Weight& w, int trials, std::uint64_t seed) {
    const auto& g = w.grid();
    const NodeMax q = carleson_Q(alpha, w);
    Tally tally("carleson-embedding", Relation::LessEq, true, seed);
    const double h = g.cell_width();
    auto run = [&](const StepFunction& f, const std::string& label) {
        double norm2 = 0.0;
        for (std::size_t i = 0; i < f.size(); ++i) norm2 += f[i] * f[i] * w.reciprocal()[i];
        norm2 *= h;
        const double lhs = carleson_sum(alpha, f, w);
        tally.add(lhs, 4.0 * q.value * norm2, [&] { return label; });
    };
    for (int t = 0; t < trials; ++t) {
        Rng rng(Rng::derive(seed, static_cast<std::uint64_t>(t)));
        std::vector<double> v(g.cells());
        switch (t % 3) {
            case 0:
                for (double& x : v) x = rng.normal();
                break;
            case 1:
                for (double& x : v) x = std::abs(rng.normal());
                break;
            default: {
                const int level = static_cast<int>(rng.below(static_cast<std::uint64_t>(g.depth()) + 1));
                const NodeId n{level, static_cast<std::int64_t>(rng.below(std::uint64_t{1} << level))};
                std::fill(v.begin() + static_cast<std::ptrdiff_t>(g.first_cell(n)),
                          v.begin() + static_cast<std::ptrdiff_t>(g.end_cell(n)), 1.0);
            }
        }
        run(StepFunction(g, std::move(v)), "trial " + std::to_string(t));
    }
    run(StepFunction::indicator(g, q.witness), "chi " + q.witness.to_string());
    auto r = tally.report();
    r.params = {{"Q", q.value}, {"Q_witness", q.witness.to_string()}, {"constant", 4.0}, {"weight", w.descriptor()},
                {"depth", g.depth()}, {"trials", trials}};
    return r;
}

double BilinearHypothesis::Q() const { return std::max({joint.value, h1.value, h2.value, h3.value}); }

BilinearHypothesis bilinear_hypothesis(const NodeArray<double>& alpha, const Weight& w, const Weight& v) {
    const auto& g = w.grid();
    require_same_grid(g, v.grid());
    require_alpha(alpha, g);
    const auto sw = node_stats(w.density());
    const auto sv = node_stats(v.density());
    BilinearHypothesis h;
    NodeArray<double> prod(g.depth()), t1(g.depth()), t2(g.depth()), len(g.depth());
    for_each_node(0, g.depth(), [&](NodeId n) {
        prod[n] = sw.avg[n] * sv.avg[n];
        t1[n] = alpha[n] / sw.avg[n];
        t2[n] = alpha[n] / sv.avg[n];
        len[n] = g.node_length(n);
    });
    h.joint = first_max(prod);
    h.h1 = ratio_max(subtree_sums(t1), sv.measure);
    h.h2 = ratio_max(subtree_sums(t2), sw.measure);
    h.h3 = ratio_max(subtree_sums(alpha), len);
    return h;
}

double bilinear_sum(const NodeArray<double>& alpha, const StepFunction& f, const Weight& w, const StepFunction& g,
                    const Weight& v) {
    require_alpha(alpha, w.grid());
    const auto fw = weighted_integrals(f, w.density());
    const auto gv = weighted_integrals(g, v.density());
    const auto mw = node_stats(w.density()).measure;
    const auto mv = node_stats(v.density()).measure;
    double s = 0.0;
    for (std::size_t i = 0; i < alpha.size(); ++i)
        if (alpha.at_flat(i) != 0.0)
            s += alpha.at_flat(i) * (fw.at_flat(i) / mw.at_flat(i)) * (gv.at_flat(i) / mv.at_flat(i));
    return s;
}

InequalityReport bit_check(const NodeArray<double>& alpha, const Weight& w, const Weight& v, int trials,
                           std::uint64_t seed) {
    const auto& g = w.grid();
    const auto hyp = bilinear_hypothesis(alpha, w, v);
    const double Q = hyp.Q();
    Tally tally("bilinear-embedding", Relation::LessEq, false, seed);
    for (int t = 0; t < trials; ++t) {
        Rng rng(Rng::derive(seed, static_cast<std::uint64_t>(t)));
        std::vector<double> a(g.cells()), b(g.cells());
        const bool positive = t % 2 == 1;
        for (std::size_t i = 0; i < g.cells(); ++i) {
            a[i] = positive ? std::abs(rng.normal()) : rng.normal();
            b[i] = positive ? std::abs(rng.normal()) : rng.normal();
        }
        const StepFunction f(g, std::move(a)), gg(g, std::move(b));
        const double lhs = std::abs(bilinear_sum(alpha, f, w, gg, v));
        tally.add(lhs, Q * norm_l2w(f, w) * norm_l2w(gg, v), [&] { return "trial " + std::to_string(t); });
    }
    auto r = tally.report();
    r.pass = std::isfinite(r.ratio);
    r.params = {{"Q", Q},
                {"joint", hyp.joint.value},
                {"h1", hyp.h1.value},
                {"h2", hyp.h2.value},
                {"h3", hyp.h3.value},
                {"weight", w.descriptor()},
                {"dual_weight", v.descriptor()},
                {"trials", trials}};
    return r;
}

namespace {

/// Per-node terms t_I of a square-function sum; J-normalised sums are subtree sums / |J|.
template <typename Term>
NodeArray<double> normalised_sums(const DyadicGrid& g, Term term) {
    NodeArray<double> t(g.depth(), 0.0);
    for_each_node(0, g.depth() - 1, [&](NodeId n) { t[n] = term(n); });
    auto s = subtree_sums(t);
    for_each_node(0, g.depth(), [&](NodeId n) { s[n] /= g.node_length(n); });
    return s;
}

InequalityReport tree_report(const std::string& id, const DyadicGrid& g, const NodeArray<double>& lhs,
                             const NodeArray<double>& rhs, bool exact, const Weight& w) {
    Tally tally(id, Relation::LessEq, exact, 0);
    for_each_node(0, g.depth(), [&](NodeId n) { tally.add(lhs[n], rhs[n], [&] { return node_str(n); }); });
    auto r = tally.report();
    if (!exact) r.pass = std::isfinite(r.ratio);
    r.params = {{"weight", w.descriptor()}, {"depth", g.depth()}};
    return r;
}

}  // namespace

InequalityReport buckley_wittwer(const Weight& w) {
    const auto& g = w.grid();
    const auto u = node_averages(w.density());
    const double a2 = a2d(w).value;
    const auto lhs = normalised_sums(g, [&](NodeId n) {
        const double d = u[n.right()] - u[n.left()];
        return d * d / u[n] * g.node_length(n);
    });
    NodeArray<double> rhs(g.depth());
    for_each_node(0, g.depth(), [&](NodeId n) { rhs[n] = a2 * u[n]; });
    auto r = tree_report("square-function-weight", g, lhs, rhs, false, w);
    r.params["a2"] = a2;
    return r;
}

InequalityReport lemma_icl1(const Weight& w) {
    const auto& g = w.grid();
    const auto u = node_averages(w.density());
    const auto v = node_averages(w.reciprocal());
    const auto lhs = normalised_sums(g, [&](NodeId n) {
        const double d = 0.5 * (u[n.right()] - u[n.left()]);
        return g.node_length(n) * d * d / (u[n] * u[n] * u[n]);
    });
    auto r = tree_report("weight-increment-sum", g, lhs, v, true, w);
    r.params["constant"] = 1.0;
    return r;
}

InequalityReport lemma_icl2(const Weight& w, const NodeArray<double>& alpha, double Q) {
    const auto& g = w.grid();
    const NodeMax actual = carleson_Q_lebesgue(alpha, g);
    if (actual.value > Q * (1.0 + 1e-12))
        throw HypothesisError("Carleson constant " + std::to_string(actual.value) + " exceeds Q = " + std::to_string(Q),
                              actual.witness);
    const auto u = node_averages(w.density());
    const auto v = node_averages(w.reciprocal());
    NodeArray<double> t(g.depth(), 0.0);
    for_each_node(0, g.depth(), [&](NodeId n) { t[n] = alpha[n] / v[n]; });
    auto lhs = subtree_sums(t);
    NodeArray<double> rhs(g.depth());
    for_each_node(0, g.depth(), [&](NodeId n) {
        lhs[n] /= g.node_length(n);
        rhs[n] = 4.0 * Q * u[n];
    });
    auto r = tree_report("carleson-reciprocal", g, lhs, rhs, true, w);
    r.params["Q"] = Q;
    r.params["constant"] = 4.0;
    return r;
}

InequalityReport lemma_icl3(const Weight& w) {
    const auto& g = w.grid();
    const auto u = node_averages(w.density());
    const auto v = node_averages(w.reciprocal());
    const double a2 = a2d(w).value;
    const auto lhs = normalised_sums(g, [&](NodeId n) {
        const double d = (u[n.right()] - u[n.left()]) / u[n];
        return d * d * g.node_length(n) * u[n] * v[n];
    });
    NodeArray<double> rhs(g.depth(), a2);
    auto r = tree_report("relative-increment-a2", g, lhs, rhs, false, w);
    r.params["a2"] = a2;
    return r;
}

InequalityReport lemma_wls(const Weight& w) {
    const auto& g = w.grid();
    const auto u = node_averages(w.density());
    const auto v = node_averages(w.reciprocal());
    auto delta = [&](NodeId n) {
        return n.level < g.depth() ? 0.5 * std::abs(u[n.right()] - u[n.left()]) : 0.0;
    };
    const auto lhs = normalised_sums(g, [&](NodeId n) {
        const double d = (delta(n.right()) + delta(n.left())) / u[n];
        return g.node_length(n) * std::pow(u[n] * v[n], 0.25) * d * d;
    });
    NodeArray<double> rhs(g.depth());
    for_each_node(0, g.depth(), [&](NodeId n) { rhs[n] = std::pow(u[n] * v[n], 0.25); });
    return tree_report("quarter-power-sum", g, lhs, rhs, false, w);
}

double lemma_ts_ratio(const StepFunction& b, const Weight& w, NodeId node) {
    const auto& g = w.grid();
    require_same_grid(b.grid(), g);
    g.require(node);
    const auto op = truncated_S_b(b, node, w);
    const double lhs = norm_l2w(op.apply(StepFunction::indicator(g, node)), w);
    const double bmo = bmo_d(b).value;
    if (bmo == 0.0) {
        if (lhs == 0.0) return 0.0;
        throw Error("lemma_ts_ratio: b has zero BMO norm but the truncated operator is nonzero");
    }
    return lhs / (bmo * a2d(w).value * std::sqrt(w.reciprocal_measure(node)));
}

InequalityReport check_haar_pairing(const Weight& w) {
    const auto& g = w.grid();
    const auto s = node_stats(w.density());
    Tally tally("haar-weighted-pairing", Relation::LessEq, true, 0);
    for_each_node(0, g.depth() - 1, [&](NodeId K) {
        const double len = g.node_length(K);
        const double bound = std::sqrt(s.avg[K]);
        // K = I.
        const auto hv = weighted_haar_values(s.measure, K);
        const double self = (hv.p * s.measure[K.right()] - hv.n * s.measure[K.left()]) / std::sqrt(len);
        tally.add(std::abs(self), bound, [&] { return "K=I=" + node_str(K); });
        const double inc = (s.measure[K.right()] - s.measure[K.left()]) / std::sqrt(len);
        NodeId child = K;
        for (int l = K.level - 1; l >= 0; --l) {
            const NodeId I = child.parent();
            const auto v = weighted_haar_values(s.measure, I);
            const double c = child.is_left_child() ? v.n : v.p;
            tally.add(std::abs(c * inc), bound, [&] { return "K=" + node_str(K) + " I=" + node_str(I); });
            child = I;
        }
    });
    auto r = tally.report();
    r.params = {{"weight", w.descriptor()}, {"depth", g.depth()}};
    return r;
}

InequalityReport check_parent_pairing(const Weight& w) {
    const auto& g = w.grid();
    const auto mw = node_stats(w.density()).measure;
    const auto mr = node_stats(w.reciprocal()).measure;
    const double bound = std::sqrt(2.0 * a2d(w).value);
    Tally tally("parent-pairing", Relation::LessEq, true, 0);
    for_each_node(1, g.depth() - 1, [&](NodeId J) {
        const NodeId P = J.parent();
        const double lhs = self_pairing(mr, P, g.node_length(P)) * self_pairing(mw, J, g.node_length(J));
        tally.add(std::abs(lhs), bound, [&] { return node_str(J); });
    });
    auto r = tally.report();
    r.params = {{"weight", w.descriptor()}, {"depth", g.depth()}};
    return r;
}

InequalityReport check_child_pairing(const Weight& w) {
    const auto& g = w.grid();
    const auto mw = node_stats(w.density()).measure;
    const auto mr = node_stats(w.reciprocal()).measure;
    const double bound = std::sqrt(2.0 * a2d(w).value);
    Tally tally("child-pairing", Relation::LessEq, true, 0);
    for_each_node(0, g.depth() - 2, [&](NodeId J) {
        const NodeId C = J.left();
        const auto hv = weighted_haar_values(mw, J);
        const double pair = hv.n * (mw[C.right()] - mw[C.left()]) / std::sqrt(g.node_length(C));
        const double lhs = self_pairing(mr, J, g.node_length(J)) * pair;
        tally.add(std::abs(lhs), bound, [&] { return node_str(J); });
    });
    auto r = tally.report();
    r.params = {{"weight", w.descriptor()}, {"depth", g.depth()}};
    return r;
}

InequalityReport check_weighted_haar_value(const Weight& w) {
    const auto& g = w.grid();
    const auto mw = node_stats(w.density()).measure;
    Tally tally("weighted-haar-value", Relation::LessEq, true, 0);
    for_each_node(1, g.depth(), [&](NodeId J) {
        const auto hv = weighted_haar_values(mw, J.parent());
        const double val = J.is_left_child() ? hv.n : hv.p;
        tally.add(std::abs(val), 1.0 / std::sqrt(mw[J]), [&] { return node_str(J); });
    });
    auto r = tally.report();
    r.params = {{"weight", w.descriptor()}, {"depth", g.depth()}};
    return r;
}

InequalityReport check_weighted_expansion(const StepFunction& g_fn, const Weight& w) {
    const auto& g = w.grid();
    require_same_grid(g_fn.grid(), g);
    const auto mw = node_stats(w.density()).measure;
    const auto gi = weighted_integrals(g_fn, w.density());
    NodeArray<double> acc(g.depth());
    acc[NodeId{0, 0}] = gi[NodeId{0, 0}] / mw[NodeId{0, 0}];
    for_each_node(0, g.depth() - 1, [&](NodeId I) {
        const auto hv = weighted_haar_values(mw, I);
        const double coef = hv.p * gi[I.right()] + hv.n * gi[I.left()];
        acc[I.right()] = acc[I] + coef * hv.p;
        acc[I.left()] = acc[I] + coef * hv.n;
    });
    const double tol = 1e-9 * std::max(max_abs(g_fn), std::numeric_limits<double>::min());
    Tally tally("weighted-expansion", Relation::LessEq, true, 0);
    for_each_node(0, g.depth(), [&](NodeId J) {
        tally.add(std::abs(acc[J] - gi[J] / mw[J]), tol, [&] { return node_str(J); });
    });
    auto r = tally.report();
    r.params = {{"weight", w.descriptor()}, {"depth", g.depth()}, {"relative_tolerance", 1e-9}};
    return r;
}

InequalityReport check_bessel(const StepFunction& g_fn, const Weight& w) {
    const auto& g = w.grid();
    require_same_grid(g_fn.grid(), g);
    std::vector<double> gs(g.cells()), g2(g.cells());
    for (std::size_t i = 0; i < g.cells(); ++i) {
        gs[i] = g_fn[i] * std::sqrt(w.density()[i]);
        g2[i] = g_fn[i] * g_fn[i];
    }
    const auto gi = node_stats(StepFunction(g, std::move(gs))).measure;
    const auto e = node_stats(StepFunction(g, std::move(g2))).measure;
    const auto u = node_averages(w.density());
    NodeArray<double> t(g.depth(), 0.0);
    for_each_node(0, g.depth() - 1, [&](NodeId I) {
        const double A = (u[I.right()] - u[I.left()]) / (2.0 * u[I]);
        const double pr = (1.0 - A) * gi[I.right()] - (1.0 + A) * gi[I.left()];
        t[I] = pr * pr / (g.node_length(I) * u[I]);
    });
    const auto lhs = subtree_sums(t);
    Tally tally("disbalanced-bessel", Relation::LessEq, true, 0);
    for_each_node(0, g.depth() - 1, [&](NodeId J) { tally.add(lhs[J], e[J], [&] { return node_str(J); }); });
    auto r = tally.report();
    r.params = {{"weight", w.descriptor()}, {"depth", g.depth()}};
    return r;
}

AdjointCheck adjoint_check(const LinOp& t, const LinOp& t_star, std::uint64_t seed, double tol) {
    const auto& g = t.grid();
    require_same_grid(g, t_star.grid());
    Rng rng(seed);
    std::vector<double> v(g.cells());
    for (double& x : v) x = rng.normal();
    const StepFunction gf(g, std::move(v));
    const StepFunction ts = t_star.apply(gf);
    const auto coeffs = haar_analysis(ts);
    const double gnorm = norm_l2(gf), tsnorm = norm_l2(ts);

    AdjointCheck out;
    auto probe = [&](const StepFunction& h, double rhs, NodeId n) {
        const StepFunction th = t.apply(h);
        const double lhs = inner(th, gf);
        const double scale = norm_l2(th) * gnorm + norm_l2(h) * tsnorm;
        const double err = scale > 0.0 ? std::abs(lhs - rhs) / scale : std::abs(lhs - rhs);
        out.max_error = std::max(out.max_error, err);
        if (err > tol && !out.offending) {
            out.offending = n;
            out.pass = false;
        }
    };
    // The constant: <T 1, g> = <1, T* g> = |base| <T* g>.
    probe(StepFunction::constant(g, 1.0), g.length() * coeffs.root_avg, NodeId{0, 0});
    for_each_node(0, g.depth() - 1, [&](NodeId n) { probe(haar_function(g, n), coeffs[n], n); });
    return out;
}

}  // namespace dyadic
