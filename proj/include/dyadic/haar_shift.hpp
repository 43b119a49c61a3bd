#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "dyadic/linop.hpp"

namespace dyadic {

/// Which Haar-like function a node carries in one slot of a shift entry.
enum class HaarKind {
    Haar,  // s_Q h_Q, mean zero
    Box,   // |Q|^{-1/2} chi_Q, not mean zero (second class)
};

/// One term a <f, H_{from}> H_{to} attached to the cube Q.
struct HaarShiftEntry {
    NodeId q;
    NodeId from;  // Q'
    NodeId to;    // Q''
    double a = 0.0;
    HaarKind from_kind = HaarKind::Haar;
    HaarKind to_kind = HaarKind::Haar;
};

/// Generalized Haar shift of index tau with declared size constant C:
/// |a| <= C (|Q'| |Q''|)^{1/2} / |Q|.
struct HaarShiftSpec {
    int tau = 1;
    double C = 1.0;
    std::vector<HaarShiftEntry> entries;
    /// Per-node factor s_Q of the Haar choice H_Q = s_Q h_Q; |s_Q| <= 1, default 1.
    std::map<NodeId, double> scales;

    double scale(NodeId n) const;
    bool first_class() const;
    /// Swaps analysis and synthesis slots.
    HaarShiftSpec adjoint() const;
};

/// Throws Error naming the offending triple when the spec is malformed on g.
void validate(const HaarShiftSpec& spec, const DyadicGrid& g);

/// The smallest C for which the size condition holds.
double minimal_size_constant(const HaarShiftSpec& spec, const DyadicGrid& g);

LinOp haar_shift(const HaarShiftSpec& spec, const DyadicGrid& g);

/// S written as a tau = 1 spec with C = sqrt(2).
HaarShiftSpec shift_S_spec(const DyadicGrid& g);

/// Entries a (<b>_{Q''} - <b>_{Q'}); C' = C max |<b>_{Q''} - <b>_{Q'}|. First class only.
HaarShiftSpec lambda_shift_commutator(const HaarShiftSpec& spec, const StepFunction& b);

/// Random first-class spec: `per_node` entries on each cube, |a| up to C times the size bound,
/// Haar scales drawn from +-[0.5, 1].
HaarShiftSpec random_haar_shift_spec(const DyadicGrid& g, int tau, double C, int per_node, std::uint64_t seed);

/// CSV rows Q_level,Q_index,Q'_level,Q'_index,Q''_level,Q''_index,a with optional
/// analysis_kind,synthesis_kind columns (haar|box). Lines "# tau=<n>", "# C=<c>" and
/// "# scale=<level>,<index>,<s>" set the remaining fields; tau and C default to the
/// smallest admissible values.
HaarShiftSpec read_haar_shift_spec(std::istream& is, const DyadicGrid& g);
HaarShiftSpec load_haar_shift_spec(const std::string& path, const DyadicGrid& g);
void write_haar_shift_spec(std::ostream& os, const HaarShiftSpec& spec);

}  // namespace dyadic
