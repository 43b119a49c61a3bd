#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "dyadic/grid.hpp"
#include "dyadic/profile.hpp"
#include "dyadic/step_function.hpp"

namespace dyadic {

/// How the cell averages of w^{-1} were obtained.
enum class ReciprocalMode {
    Exact,      // closed-form averages of the reciprocal profile
    Pointwise,  // 1 / (cell average of w)
};

/// Positive weight on a grid with a matching table of reciprocal cell averages.
class Weight {
public:
    /// Generic step weight; every cell must be positive and finite.
    static Weight pointwise(StepFunction w, std::string descriptor = "step");

    const DyadicGrid& grid() const { return density_.grid(); }
    const StepFunction& density() const { return density_; }
    const StepFunction& reciprocal() const { return reciprocal_; }
    ReciprocalMode mode() const { return mode_; }
    const std::optional<AnalyticProfile>& profile() const { return profile_; }
    const std::string& descriptor() const { return descriptor_; }

    /// Cell averages of w^{-1/(p-1)}; exact for power profiles, pointwise otherwise.
    StepFunction dual_power(double p) const;
    /// w^{-1} as a weight (density and reciprocal tables swap).
    Weight inverse() const;

    /// w(I), the w-measure of a node.
    double measure(NodeId n) const;
    double reciprocal_measure(NodeId n) const;

private:
    friend Weight weight_from_profile(const AnalyticProfile&, const DyadicGrid&, ReciprocalMode);
    Weight(StepFunction d, StepFunction r, ReciprocalMode m, std::optional<AnalyticProfile> p, std::string desc);

    StepFunction density_;
    StepFunction reciprocal_;
    ReciprocalMode mode_;
    std::optional<AnalyticProfile> profile_;
    std::string descriptor_;
};

Weight weight_from_profile(const AnalyticProfile& p, const DyadicGrid& g,
                           ReciprocalMode mode = ReciprocalMode::Exact);

/// exp of a dyadic martingale: each child adds -d (left) or +d (right) to its parent's
/// logarithm, with d uniform on [-beta, beta]. beta must lie in (0, 0.4].
Weight random_martingale_weight(const DyadicGrid& g, double beta, std::uint64_t seed);

/// A supremum over nodes with the node attaining it (first in heap order on ties).
struct NodeMax {
    double value = 0.0;
    NodeId witness{};
};

/// Index of the first strict maximum.
NodeMax first_max(const NodeArray<double>& values);

/// sup over every node of <w>_I <w^{-1}>_I.
NodeMax a2d(const Weight& w);
/// sup over every node of <w>_I <w^{-1/(p-1)}>_I^{p-1}.
NodeMax apd(const Weight& w, double p);
/// Per-node products <w>_I <w^{-1}>_I.
NodeArray<double> a2_products(const Weight& w);

/// Dyadic BMO norm with L^1 mean oscillation.
NodeMax bmo_d(const StepFunction& b);

/// (<b>_{I+} - <b>_{I-}) / 2 for an internal node.
double delta_avg(const StepFunction& b, NodeId node);

struct WeightedHaar {
    NodeId node;
    StepFunction h;
};

/// h^w_I: supported on I, unit norm in L^2(w), w-orthogonal to constants.
WeightedHaar weighted_haar(const Weight& w, NodeId node);

struct DisbalancedHaar {
    NodeId node;
    double A = 0.0;
    StepFunction H;
};

/// H^w_I = h_I |I|^{1/2} - A^w_I chi_I, A^w_I = (<w>_{I+} - <w>_{I-}) / (2 <w>_I).
DisbalancedHaar disbalanced_haar(const Weight& w, NodeId node);

/// int f g w.
double inner_w(const StepFunction& f, const StepFunction& g, const Weight& w);
double norm_l2w(const StepFunction& f, const Weight& w);
/// (int |f|^p w)^{1/p}.
double norm_lpw(const StepFunction& f, const Weight& w, double p);
/// <g>_{I,w} = w(I)^{-1} int_I g w.
double weighted_average(const StepFunction& g, const Weight& w, NodeId node);

/// Mean of f over an arbitrary subinterval [x0, x1) of the base.
double interval_average(const StepFunction& f, double x0, double x1);

/// Extension of phi - <phi>_I by reflected Whitney averages; zero outside the tripled interval.
StepFunction bmo_extension(const StepFunction& phi, NodeId node);

}  // namespace dyadic
