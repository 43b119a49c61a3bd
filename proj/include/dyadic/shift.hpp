#pragma once

#include "dyadic/linop.hpp"
#include "dyadic/weight.hpp"

namespace dyadic {

// The shift and its relatives act on Haar coefficients. Sums over nodes I use only
// nodes whose children are themselves internal, i.e. levels 0..depth-2, because
// h_{I_-} and h_{I_+} do not exist on the finite tree otherwise.

/// S f = sum <f,h_I> (h_{I-} - h_{I+}).
LinOp shift_S(const DyadicGrid& g);
/// S* f = sum sgn(I) <f,h_I> h_{parent(I)}, sgn = +1 on left children.
LinOp shift_S_adjoint(const DyadicGrid& g);

/// pi_b f = sum <b,h_I> <f>_I h_I.
LinOp paraproduct(const StepFunction& b);
/// pi*_b f = sum <b,h_I> <f,h_I> chi_I / |I|.
LinOp paraproduct_adjoint(const StepFunction& b);
/// lambda_b f = sum <b>_I <f,h_I> h_I.
LinOp lambda_op(const StepFunction& b);
/// Cellwise multiplication by b.
LinOp mult_op(const StepFunction& b);

/// b f - (pi*_b f + pi_b f + lambda_b f); on the finite tree this is the constant <b>_root <f>_root.
StepFunction decomposition_root_term(const StepFunction& b, const StepFunction& f);

/// [lambda_b, S] f = -sum Delta_J b <f,h_J> (h_{J+} + h_{J-}).
LinOp lambda_commutator_closed(const StepFunction& b);

/// S_b f = sum Delta_I b <f,h_I> h_{I-}.
LinOp shift_S_b(const StepFunction& b);
/// f -> sum over L in D(I) of Delta_L b <w^{-1} f, h_L> h_{L-}.
LinOp truncated_S_b(const StepFunction& b, NodeId node, const Weight& w);

}  // namespace dyadic
