#pragma once

#include <cstdint>
#include <optional>

#include "dyadic/linop.hpp"
#include "dyadic/report.hpp"
#include "dyadic/weight.hpp"

namespace dyadic {

// Verifiers for the embedding theorems and the weight lemmas. Sequences alpha are NodeArrays
// over levels 0..depth (entries at finest cells allowed). Sums "over D(J)" include J.

/// S_J = sum of t over the subtree rooted at J, one bottom-up pass.
NodeArray<double> subtree_sums(const NodeArray<double>& t);

/// min Q with sum_{J in D(I)} alpha_J <= Q w^{-1}(I) for every node I.
NodeMax carleson_Q(const NodeArray<double>& alpha, const Weight& w);
/// Same with Lebesgue measure: sup_I |I|^{-1} sum_{J in D(I)} alpha_J.
NodeMax carleson_Q_lebesgue(const NodeArray<double>& alpha, const DyadicGrid& g);

/// <b,h_I>^2 on internal nodes, zero on the finest level.
NodeArray<double> haar_energy_sequence(const StepFunction& b);
/// Nonnegative test sequence: about half the nodes carry |I| times a random factor in [0,1).
NodeArray<double> random_sequence(const DyadicGrid& g, std::uint64_t seed);

/// sum_J alpha_J <f>^2_{J,w^{-1}}.
double carleson_sum(const NodeArray<double>& alpha, const StepFunction& f, const Weight& w);
/// Random f (mixed sign, nonnegative, indicator) plus f = chi of the Carleson witness;
/// asserts the embedding with constant 4Q.
InequalityReport cit_verify(const NodeArray<double>& alpha, const Weight& w, int trials, std::uint64_t seed);

/// The four hypothesis constants of the bilinear embedding; Q is their maximum.
struct BilinearHypothesis {
    NodeMax joint;  // <w>_I <v>_I
    NodeMax h1;     // |v(J)|^{-1} sum alpha_I / <w>_I
    NodeMax h2;     // |w(J)|^{-1} sum alpha_I / <v>_I
    NodeMax h3;     // |J|^{-1} sum alpha_I
    double Q() const;
};
BilinearHypothesis bilinear_hypothesis(const NodeArray<double>& alpha, const Weight& w, const Weight& v);
/// sum_I alpha_I <f>_{I,w} <g>_{I,v}.
double bilinear_sum(const NodeArray<double>& alpha, const StepFunction& f, const Weight& w, const StepFunction& g,
                    const Weight& v);
/// Report-only: ratio is the empirical constant c of the bilinear embedding.
InequalityReport bit_check(const NodeArray<double>& alpha, const Weight& w, const Weight& v, int trials,
                           std::uint64_t seed);

/// Report-only: max over J of the square-function sum divided by [w] <w>_J.
InequalityReport buckley_wittwer(const Weight& w);
/// Asserted with constant 1.
InequalityReport lemma_icl1(const Weight& w);
/// Asserted with constant 4Q; throws HypothesisError when alpha is not Carleson with constant Q.
InequalityReport lemma_icl2(const Weight& w, const NodeArray<double>& alpha, double Q);
/// Report-only.
InequalityReport lemma_icl3(const Weight& w);
/// Report-only.
InequalityReport lemma_wls(const Weight& w);

/// ||S^I_{b,w^{-1}} chi_I||_{L^2(w)} / (||b||_BMO [w] w^{-1}(I)^{1/2}).
double lemma_ts_ratio(const StepFunction& b, const Weight& w, NodeId node);

/// |<h_K, h^w_I>_w| <= <w>_K^{1/2} for every pair K within I, both internal.
InequalityReport check_haar_pairing(const Weight& w);
/// |<h_parent, h^{w^{-1}}_parent>_{w^{-1}} <h_J, h^w_J>_w| <= sqrt(2) [w]^{1/2}.
InequalityReport check_parent_pairing(const Weight& w);
/// |<h_J, h^{w^{-1}}_J>_{w^{-1}} <h_{J-}, h^w_J>_w| <= sqrt(2) [w]^{1/2}.
InequalityReport check_child_pairing(const Weight& w);
/// |h^w_parent(J)| <= w(J)^{-1/2}.
InequalityReport check_weighted_haar_value(const Weight& w);
/// <g>_{J,w} against the weighted Haar expansion plus the root term; lhs is the error,
/// rhs is 1e-9 max|g|.
InequalityReport check_weighted_expansion(const StepFunction& g, const Weight& w);
/// sum over I in D(J) of (|I| <w>_I)^{-1} <g, w^{1/2} H^w_I>^2 <= ||g chi_J||^2 for every J.
InequalityReport check_bessel(const StepFunction& g, const Weight& w);

struct AdjointCheck {
    bool pass = true;
    double max_error = 0.0;
    /// First node in heap order whose Haar function breaks <T h, g> = <h, T* g>.
    std::optional<NodeId> offending;
};

/// Probes <T h_I, g> against the Haar coefficient of T* g for every internal node and the
/// constant, with one random g. Relative tolerance tol.
AdjointCheck adjoint_check(const LinOp& t, const LinOp& t_star, std::uint64_t seed, double tol = 1e-10);

}  // namespace dyadic
