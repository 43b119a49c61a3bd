#pragma once

#include <cstdint>

#include "dyadic/report.hpp"
#include "dyadic/rng.hpp"

namespace dyadic {

/// B(u, v) = (uv)^{1/4} on the domain uv >= 1/2.
double bellman_B(double u, double v);
/// -(du, dv) d^2B (du, dv)^t from the closed-form Hessian.
double bellman_B_hessian_form(double u, double v, double du, double dv);
/// A(u, v, du) = a B(u, v) + B(u + du, v) + B(u - du, v).
double bellman_A(double a, double u, double v, double du);

/// 1 / (36 4^{3/4}).
double bellman_C2();

struct DomainPoint {
    double u, v;
};

/// Log-uniform u in [2^-8, 2^8], then v log-uniform in [max(1/(2u), 2^-8), 2^8].
class BellmanSampler {
public:
    explicit BellmanSampler(std::uint64_t seed) : rng_(seed) {}
    DomainPoint point();
    Rng& rng() { return rng_; }

    static constexpr double kLo = 0x1.0p-8;
    static constexpr double kHi = 0x1.0p8;

private:
    Rng rng_;
};

/// Asserts -(du,dv) d^2B (du,dv)^t >= (1/8) v^{1/4} u^{-7/4} du^2 on sampled points.
InequalityReport bellman_B_check(long long samples, std::uint64_t seed);

struct ConvexityEstimate {
    double c1 = 0.0;
    long long samples = 0;
    DomainPoint plus{}, minus{};
};

/// Minimum over sampled pairs of [B(u,v) - (B(u+,v+) + B(u-,v-))/2] / (v^{1/4} u^{-7/4} (u+ - u-)^2),
/// u, v the means of the pair.
ConvexityEstimate estimate_C1(long long samples, std::uint64_t seed);
/// The a used by default: twice the threshold 3 / (2 C1).
double default_bellman_a(double c1);

struct BellmanAReport {
    InequalityReport size;       // 0 <= A <= (a+2)(uv)^{1/4}
    InequalityReport convexity;  // the three-point inequality with C2
    long long sampler_failures = 0;
};

/// Samples (u+-, v+-, du1, du2) with every derived point in the domain of A.
BellmanAReport bellman_A_check(double a, long long samples, std::uint64_t seed);

}  // namespace dyadic
