#pragma once

#include <string>

#include "dyadic/grid.hpp"
#include "dyadic/step_function.hpp"

namespace dyadic {

/// Closed-form functions on the real line with exact cell averages.
///   const:<c>             c
///   powabs:<a>            |x|^a, a > -1 for integrability at 0
///   logabs                log|x|
///   indpow:<lo>,<hi>,<a>  |x|^a on (lo, hi), zero elsewhere
struct AnalyticProfile {
    enum class Kind { Constant, PowerAbs, LogAbs, IndicatorPower };

    Kind kind = Kind::Constant;
    double c = 1.0;
    double a = 0.0;
    double lo = 0.0;
    double hi = 0.0;

    static AnalyticProfile constant(double c);
    static AnalyticProfile power_abs(double a);
    static AnalyticProfile log_abs();
    static AnalyticProfile indicator_power(double lo, double hi, double a);

    /// Parses the strings above; throws Error on anything else.
    static AnalyticProfile parse(const std::string& text);
    std::string to_string() const;

    /// Exact mean over [x0, x1), x0 < x1. Infinite when the integral diverges.
    double cell_average(double x0, double x1) const;
    double integral(double x0, double x1) const;

    /// Cell averages over every finest cell of g.
    StepFunction sample(const DyadicGrid& g) const;
};

/// Exact integrals used by the profiles, stable when the cell is far from 0.
double integral_pow_abs(double x0, double x1, double a);
double integral_log_abs(double x0, double x1);

}  // namespace dyadic
