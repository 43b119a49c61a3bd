#include "dyadic/weight.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "dyadic/haar.hpp"
#include "dyadic/kernels.hpp"
#include "dyadic/rng.hpp"

namespace dyadic {

namespace {

void require_positive(const StepFunction& w, const std::string& what) {
    for (std::size_t i = 0; i < w.size(); ++i)
        if (!(w[i] > 0.0) || !std::isfinite(w[i]))
            throw Error(what + ": cell " + std::to_string(i) + " is not positive and finite");
}

StepFunction pointwise_reciprocal(const StepFunction& w) {
    std::vector<double> v(w.size());
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = 1.0 / w[i];
    return StepFunction(w.grid(), std::move(v));
}

StepFunction pointwise_power(const StepFunction& w, double e) {
    std::vector<double> v(w.size());
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = std::pow(w[i], e);
    return StepFunction(w.grid(), std::move(v));
}

void require_internal(const DyadicGrid& g, NodeId n, const char* what) {
    g.require(n);
    if (!g.is_internal(n)) throw Error(std::string(what) + ": node " + n.to_string() + " is at the finest level");
}

}  // namespace

Weight::Weight(StepFunction d, StepFunction r, ReciprocalMode m, std::optional<AnalyticProfile> p, std::string desc)
    : density_(std::move(d)), reciprocal_(std::move(r)), mode_(m), profile_(std::move(p)), descriptor_(std::move(desc)) {}

Weight Weight::pointwise(StepFunction w, std::string descriptor) {
    require_positive(w, "weight");
    auto r = pointwise_reciprocal(w);
    return Weight(std::move(w), std::move(r), ReciprocalMode::Pointwise, std::nullopt, std::move(descriptor));
}

StepFunction Weight::dual_power(double p) const {
    if (!(p > 1.0)) throw Error("dual_power: p must exceed 1");
    const double e = -1.0 / (p - 1.0);
    if (mode_ == ReciprocalMode::Exact && profile_) {
        if (profile_->kind == AnalyticProfile::Kind::PowerAbs)
            return AnalyticProfile::power_abs(profile_->a * e).sample(grid());
        if (profile_->kind == AnalyticProfile::Kind::Constant)
            return StepFunction::constant(grid(), std::pow(profile_->c, e));
    }
    return pointwise_power(density_, e);
}

Weight Weight::inverse() const {
    std::optional<AnalyticProfile> p;
    if (profile_ && profile_->kind == AnalyticProfile::Kind::PowerAbs) p = AnalyticProfile::power_abs(-profile_->a);
    if (profile_ && profile_->kind == AnalyticProfile::Kind::Constant) p = AnalyticProfile::constant(1.0 / profile_->c);
    return Weight(reciprocal_, density_, mode_, p, "inverse(" + descriptor_ + ")");
}

double Weight::measure(NodeId n) const { return average(density_, n) * grid().node_length(n); }
double Weight::reciprocal_measure(NodeId n) const { return average(reciprocal_, n) * grid().node_length(n); }

Weight weight_from_profile(const AnalyticProfile& p, const DyadicGrid& g, ReciprocalMode mode) {
    using K = AnalyticProfile::Kind;
    switch (p.kind) {
        case K::Constant:
            if (!(p.c > 0.0)) throw Error("weight: constant profile must be positive");
            break;
        case K::PowerAbs:
            if (!(p.a > -1.0)) throw Error("weight: powabs exponent must exceed -1 for integrability");
            break;
        case K::LogAbs:
            if (g.start() < 1.0 && g.end() > -1.0) throw Error("weight: log|x| is not positive on the base interval");
            break;
        case K::IndicatorPower:
            if (p.lo > g.start() || p.hi < g.end()) throw Error("weight: indpow profile vanishes on part of the base");
            break;
    }
    auto w = p.sample(g);
    require_positive(w, "weight " + p.to_string());
    if (mode == ReciprocalMode::Exact && p.kind == K::Constant)
        return Weight(std::move(w), StepFunction::constant(g, 1.0 / p.c), mode, p, p.to_string());
    if (mode == ReciprocalMode::Exact && p.kind == K::PowerAbs) {
        auto r = AnalyticProfile::power_abs(-p.a).sample(g);
        require_positive(r, "reciprocal of " + p.to_string());
        return Weight(std::move(w), std::move(r), mode, p, p.to_string());
    }
    auto r = pointwise_reciprocal(w);
    return Weight(std::move(w), std::move(r), ReciprocalMode::Pointwise, p, p.to_string());
}

Weight random_martingale_weight(const DyadicGrid& g, double beta, std::uint64_t seed) {
    if (!(beta > 0.0 && beta <= 0.4)) throw Error("random weight: beta must lie in (0, 0.4]");
    Rng rng(seed);
    std::vector<double> cur{0.0}, next;
    for (int l = 0; l < g.depth(); ++l) {
        next.resize(cur.size() * 2);
        for (std::size_t k = 0; k < cur.size(); ++k) {
            const double d = rng.uniform(-beta, beta);
            next[2 * k] = cur[k] - d;
            next[2 * k + 1] = cur[k] + d;
        }
        cur.swap(next);
    }
    for (double& v : cur) v = std::exp(v);
    std::ostringstream desc;
    desc << "martingale:beta=" << beta << ",seed=" << seed;
    return Weight::pointwise(StepFunction(g, std::move(cur)), desc.str());
}

NodeMax first_max(const NodeArray<double>& values) {
    NodeMax best{values.at_flat(0), NodeId{0, 0}};
    for (std::size_t i = 1; i < values.size(); ++i)
        if (values.at_flat(i) > best.value) best = {values.at_flat(i), NodeId::from_flat(i)};
    return best;
}

NodeArray<double> a2_products(const Weight& w) {
    auto a = node_averages(w.density());
    const auto r = node_averages(w.reciprocal());
    for (std::size_t i = 0; i < a.size(); ++i) a.at_flat(i) *= r.at_flat(i);
    return a;
}

NodeMax a2d(const Weight& w) { return first_max(a2_products(w)); }

NodeMax apd(const Weight& w, double p) {
    if (!(p > 1.0)) throw Error("apd: p must exceed 1");
    auto a = node_averages(w.density());
    const auto s = node_averages(w.dual_power(p));
    for (std::size_t i = 0; i < a.size(); ++i) a.at_flat(i) *= std::pow(s.at_flat(i), p - 1.0);
    return first_max(a);
}

NodeMax bmo_d(const StepFunction& b) {
    NodeArray<double> osc(b.grid().depth());
    osc.raw() = kernels::parallel::mean_oscillation(b.values(), b.grid().depth());
    return first_max(osc);
}

double delta_avg(const StepFunction& b, NodeId node) {
    require_internal(b.grid(), node, "delta_avg");
    return 0.5 * (average(b, node.right()) - average(b, node.left()));
}

WeightedHaar weighted_haar(const Weight& w, NodeId node) {
    const auto& g = w.grid();
    require_internal(g, node, "weighted_haar");
    const double wl = w.measure(node.left()), wr = w.measure(node.right());
    const double wi = wl + wr;
    const double pos = std::sqrt(wl / wr) / std::sqrt(wi);
    const double neg = -std::sqrt(wr / wl) / std::sqrt(wi);
    std::vector<double> v(g.cells(), 0.0);
    const std::size_t b = g.first_cell(node), e = g.end_cell(node), m = (b + e) / 2;
    for (std::size_t i = b; i < m; ++i) v[i] = neg;
    for (std::size_t i = m; i < e; ++i) v[i] = pos;
    return {node, StepFunction(g, std::move(v))};
}

DisbalancedHaar disbalanced_haar(const Weight& w, NodeId node) {
    const auto& g = w.grid();
    require_internal(g, node, "disbalanced_haar");
    const double al = average(w.density(), node.left()), ar = average(w.density(), node.right());
    const double A = (ar - al) / (al + ar);  // (ar - al) / (2 <w>_I)
    std::vector<double> v(g.cells(), 0.0);
    const std::size_t b = g.first_cell(node), e = g.end_cell(node), m = (b + e) / 2;
    for (std::size_t i = b; i < m; ++i) v[i] = -1.0 - A;
    for (std::size_t i = m; i < e; ++i) v[i] = 1.0 - A;
    return {node, A, StepFunction(g, std::move(v))};
}

double inner_w(const StepFunction& f, const StepFunction& g, const Weight& w) {
    require_same_grid(f.grid(), g.grid());
    require_same_grid(f.grid(), w.grid());
    double s = 0.0;
    for (std::size_t i = 0; i < f.size(); ++i) s += f[i] * g[i] * w.density()[i];
    return s * f.grid().cell_width();
}

double norm_l2w(const StepFunction& f, const Weight& w) { return std::sqrt(inner_w(f, f, w)); }

double norm_lpw(const StepFunction& f, const Weight& w, double p) {
    require_same_grid(f.grid(), w.grid());
    double s = 0.0;
    for (std::size_t i = 0; i < f.size(); ++i) s += std::pow(std::abs(f[i]), p) * w.density()[i];
    return std::pow(s * f.grid().cell_width(), 1.0 / p);
}

double weighted_average(const StepFunction& g, const Weight& w, NodeId node) {
    return average(g.times(w.density()), node) / average(w.density(), node);
}

double interval_average(const StepFunction& f, double x0, double x1) {
    const auto& g = f.grid();
    if (!(x1 > x0)) throw Error("interval_average: empty interval");
    const double h = g.cell_width();
    const double u0 = (x0 - g.start()) / h, u1 = (x1 - g.start()) / h;
    if (u0 < -1e-9 || u1 > static_cast<double>(g.cells()) + 1e-9)
        throw Error("interval_average: interval leaves the base");
    const auto i0 = static_cast<std::size_t>(std::max(0.0, std::floor(u0)));
    const auto i1 = std::min(g.cells(), static_cast<std::size_t>(std::ceil(u1)));
    double s = 0.0;
    for (std::size_t i = i0; i < i1; ++i) {
        const double ov = std::min(u1, static_cast<double>(i + 1)) - std::max(u0, static_cast<double>(i));
        if (ov > 0.0) s += ov * f[i];
    }
    return s / (u1 - u0);
}

StepFunction bmo_extension(const StepFunction& phi, NodeId node) {
    const auto& g = phi.grid();
    g.require(node);
    const double a = g.node_left(node), len = g.node_length(node), e = a + len;
    const double tol = 1e-12 * g.length();
    if (a - len < g.start() - tol || e + len > g.end() + tol)
        throw Error("bmo_extension: tripled interval of " + node.to_string() + " leaves the base");
    const double m = average(phi, node);
    const double h = g.cell_width();
    std::vector<double> psi(g.cells(), 0.0);
    for (std::size_t i = g.first_cell(node); i < g.end_cell(node); ++i) psi[i] = phi[i] - m;

    // Adds value v on [x0, x1) as exact cell averages.
    auto paint = [&](double x0, double x1, double v) {
        const double u0 = (x0 - g.start()) / h, u1 = (x1 - g.start()) / h;
        const auto i0 = static_cast<std::size_t>(std::max(0.0, std::floor(u0)));
        const auto i1 = std::min(g.cells(), static_cast<std::size_t>(std::ceil(u1)));
        for (std::size_t i = i0; i < i1; ++i) {
            const double ov = std::min(u1, static_cast<double>(i + 1)) - std::max(u0, static_cast<double>(i));
            if (ov > 0.0) psi[i] += ov * v;
        }
    };

    // Whitney pieces J of length l at distance l from each endpoint, reflected outward.
    double l = len / 3.0;
    double last_left = 0.0, last_right = 0.0, l_used = len / 3.0;
    bool any = false;
    for (l *= 0.5; l >= h; l *= 0.5) {
        last_left = interval_average(phi, a + l, a + 2 * l) - m;
        last_right = interval_average(phi, e - 2 * l, e - l) - m;
        paint(a - 2 * l, a - l, last_left);
        paint(e + l, e + 2 * l, last_right);
        l_used = l;
        any = true;
    }
    if (any) {
        paint(a - l_used, a, last_left);
        paint(e, e + l_used, last_right);
    }
    return StepFunction(g, std::move(psi));
}

}  // namespace dyadic
