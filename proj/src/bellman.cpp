#include "dyadic/bellman.hpp"

#include <cmath>
#include <limits>
#include <sstream>

namespace dyadic {

double bellman_B(double u, double v) { return std::pow(u * v, 0.25); }

double bellman_B_hessian_form(double u, double v, double du, double dv) {
    const double buu = -3.0 / 16.0 * std::pow(u, -1.75) * std::pow(v, 0.25);
    const double bvv = -3.0 / 16.0 * std::pow(v, -1.75) * std::pow(u, 0.25);
    const double buv = 1.0 / 16.0 * std::pow(u * v, -0.75);
    return -(buu * du * du + 2.0 * buv * du * dv + bvv * dv * dv);
}

double bellman_A(double a, double u, double v, double du) {
    return a * bellman_B(u, v) + bellman_B(u + du, v) + bellman_B(u - du, v);
}

double bellman_C2() { return 1.0 / (36.0 * std::pow(4.0, 0.75)); }

DomainPoint BellmanSampler::point() {
    const double llo = std::log(kLo), lhi = std::log(kHi);
    const double u = std::exp(rng_.uniform(llo, lhi));
    const double vlo = std::log(std::max(1.0 / (2.0 * u), kLo));
    const double v = std::exp(rng_.uniform(vlo, lhi));
    return {u, v};
}

namespace {

bool in_d0(double u, double v) { return u > 0.0 && v > 0.0 && u * v >= 0.5; }
bool in_d1(double u, double v, double du) { return in_d0(u, v) && in_d0(u + du, v) && in_d0(u - du, v); }

std::string tuple_str(std::initializer_list<std::pair<const char*, double>> kv) {
    std::ostringstream os;
    os.precision(17);
    bool first = true;
    for (const auto& [k, v] : kv) {
        os << (first ? "" : " ") << k << '=' << v;
        first = false;
    }
    return os.str();
}

}  // namespace

InequalityReport bellman_B_check(long long samples, std::uint64_t seed) {
    BellmanSampler s(seed);
    Tally tally("bellman-hessian", Relation::GreaterEq, true, seed);
    for (long long i = 0; i < samples; ++i) {
        const auto p = s.point();
        const double du = s.rng().normal(), dv = s.rng().normal();
        const double lhs = bellman_B_hessian_form(p.u, p.v, du, dv);
        const double rhs = 0.125 * std::pow(p.v, 0.25) * std::pow(p.u, -1.75) * du * du;
        tally.add(lhs, rhs, [&] { return tuple_str({{"u", p.u}, {"v", p.v}, {"du", du}, {"dv", dv}}); });
    }
    auto r = tally.report();
    r.params = {{"samples", samples}, {"constant", 0.125}};
    return r;
}

ConvexityEstimate estimate_C1(long long samples, std::uint64_t seed) {
    BellmanSampler s(seed);
    ConvexityEstimate est;
    est.c1 = std::numeric_limits<double>::infinity();
    for (long long i = 0; i < samples; ++i) {
        const auto p = s.point(), m = s.point();
        if (p.u == m.u) continue;
        ++est.samples;
        const double u = 0.5 * (p.u + m.u), v = 0.5 * (p.v + m.v);
        const double gap = bellman_B(u, v) - 0.5 * (bellman_B(p.u, p.v) + bellman_B(m.u, m.v));
        const double d = p.u - m.u;
        const double ratio = gap / (std::pow(v, 0.25) * std::pow(u, -1.75) * d * d);
        if (ratio < est.c1) {
            est.c1 = ratio;
            est.plus = p;
            est.minus = m;
        }
    }
    return est;
}

double default_bellman_a(double c1) { return 2.0 * 1.5 / c1; }

BellmanAReport bellman_A_check(double a, long long samples, std::uint64_t seed) {
    if (!(a > 0.0)) throw Error("bellman_A_check: a must be positive");
    BellmanSampler s(seed);
    const double c2 = bellman_C2();
    Tally size("bellman-A-size", Relation::LessEq, true, seed);
    Tally conv("bellman-A-convexity", Relation::GreaterEq, true, seed);
    BellmanAReport out;
    for (long long i = 0; i < samples; ++i) {
        bool ok = false;
        DomainPoint p{}, m{};
        double u = 0, v = 0, du = 0, du1 = 0, du2 = 0;
        for (int attempt = 0; attempt < 100 && !ok; ++attempt) {
            p = s.point();
            m = s.point();
            u = 0.5 * (p.u + m.u);
            v = 0.5 * (p.v + m.v);
            du = 0.5 * (p.u - m.u);
            du1 = s.rng().uniform(-p.u, p.u);
            du2 = s.rng().uniform(-m.u, m.u);
            ok = in_d1(u, v, du) && in_d1(p.u, p.v, du1) && in_d1(m.u, m.v, du2);
        }
        if (!ok) {
            ++out.sampler_failures;
            continue;
        }
        auto witness = [&] {
            return tuple_str({{"u+", p.u}, {"v+", p.v}, {"u-", m.u}, {"v-", m.v}, {"du1", du1}, {"du2", du2}});
        };
        const double A = bellman_A(a, u, v, du);
        const double Ap = bellman_A(a, p.u, p.v, du1);
        const double Am = bellman_A(a, m.u, m.v, du2);
        // Size on all three points, each with its own witness; lower bound 0 as a separate instance.
        const std::pair<double, DomainPoint> pts[3] = {{A, {u, v}}, {Ap, p}, {Am, m}};
        for (const auto& [val, q] : pts) {
            size.add(val, (a + 2.0) * bellman_B(q.u, q.v), witness);
            size.add(-val, 0.0, witness);
        }
        const double lhs = A - 0.5 * (Ap + Am);
        const double rhs = c2 * std::pow(v, 0.25) * std::pow(u, -1.75) * (du1 * du1 + du2 * du2);
        conv.add(lhs, rhs, witness);
    }
    out.size = size.report();
    out.convexity = conv.report();
    const nlohmann::json params = {{"a", a}, {"samples", samples}, {"sampler_failures", out.sampler_failures}};
    out.size.params = params;
    out.size.params["constant"] = "a+2";
    out.convexity.params = params;
    out.convexity.params["C2"] = c2;
    return out;
}

}  // namespace dyadic
