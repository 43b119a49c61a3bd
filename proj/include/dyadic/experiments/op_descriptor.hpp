#pragma once

#include <string>

#include "dyadic/linop.hpp"

namespace dyadic::experiments {

/// Builds an operator from its descriptor:
///   S, S*, pi:<prof>, pistar:<prof>, lambda:<prof>, comm:<prof>:<op>,
///   comm-lambda-S:<prof>, pistar-S:<prof>, S-pi:<prof>, S-b:<prof>,
///   hilbert, hilbert-avg:<n>:<seed>, shift-spec:<file>
/// where <prof> is a profile string (const:c, powabs:a, logabs, indpow:lo,hi,a).
/// comm:<prof>:<op> is b T - T b with b the profile sampled on g.
LinOp parse_operator(const std::string& desc, const DyadicGrid& g);

/// Shift-sweep operators with symbol b: S, comm-lambda-S, pistar-S, S-pi.
LinOp sweep_operator(const std::string& id, const StepFunction& b);

}  // namespace dyadic::experiments
