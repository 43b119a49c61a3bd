#pragma once

#include <cstdint>
#include <string>

#include "dyadic/linop.hpp"
#include "dyadic/weight.hpp"

namespace dyadic {

struct NormReport {
    std::string op;
    std::string weight;
    double norm = 0.0;
    StepFunction witness;
    int iterations = 0;
    bool converged = false;
};

struct PowerIterationOptions {
    double tol = 1e-10;
    int max_iter = 20000;
    std::uint64_t seed = 0;
};

/// ||T||_{L^2(w) -> L^2(w)} by power iteration on M*M with M = w^{1/2} T w^{-1/2}.
/// The start vector is the constant plus h_I for one seeded node per level, plus a small
/// seeded perturbation. Stops on relative Rayleigh-quotient change below tol.
NormReport l2w_opnorm(const LinOp& t, const Weight& w, const PowerIterationOptions& opts = {});
NormReport l2w_opnorm(const LinOp& t, const Weight& w, double tol, int max_iter, std::uint64_t seed);

/// Largest singular value of w^{1/2} A w^{-1/2}, A the action matrix. Dense; small grids only.
double dense_l2w_norm(const LinOp& t, const Weight& w);
double dense_l2_norm(const LinOp& t);

/// ||Tf||_{L^p(w)} / ||f||_{L^p(w)}.
double lpw_ratio(const LinOp& t, const StepFunction& f, const Weight& w, double p);

}  // namespace dyadic
