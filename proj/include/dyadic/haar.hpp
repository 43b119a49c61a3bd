#pragma once

#include "dyadic/grid.hpp"
#include "dyadic/step_function.hpp"

namespace dyadic {

/// Haar pyramid: <f,h_I> for every node above the finest level plus the mean over the base.
/// Halves are labelled I_- = left, I_+ = right, so h_I = |I|^{-1/2}(chi_right - chi_left).
struct HaarCoefficients {
    DyadicGrid grid;
    double root_avg = 0.0;
    NodeArray<double> coeffs;  // levels 0..depth-1

    explicit HaarCoefficients(const DyadicGrid& g) : grid(g), coeffs(g.depth() - 1, 0.0) {}

    double& operator[](NodeId n) { return coeffs[n]; }
    double operator[](NodeId n) const { return coeffs[n]; }

    /// |base|*root_avg^2 + sum of squared coefficients.
    double energy() const;
};

HaarCoefficients haar_analysis(const StepFunction& f);
StepFunction haar_synthesis(const HaarCoefficients& c);
/// Same as haar_synthesis but checks the target grid first.
StepFunction haar_synthesis(const HaarCoefficients& c, const DyadicGrid& target);

/// h_I as a step function; I must be internal.
StepFunction haar_function(const DyadicGrid& g, NodeId node);

/// |I|^{-1/2} for each level 0..depth.
std::vector<double> inv_sqrt_lengths(const DyadicGrid& g);

}  // namespace dyadic
