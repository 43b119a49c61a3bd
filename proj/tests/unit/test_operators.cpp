#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <sstream>

#include "dyadic/haar.hpp"
#include "dyadic/haar_shift.hpp"
#include "dyadic/hilbert.hpp"
#include "dyadic/opnorm.hpp"
#include "dyadic/profile.hpp"
#include "dyadic/rng.hpp"
#include "dyadic/shift.hpp"

using namespace dyadic;

namespace {

StepFunction random_function(const DyadicGrid& g, std::uint64_t seed) {
    Rng rng(seed);
    std::vector<double> v(g.cells());
    for (double& x : v) x = rng.normal();
    return StepFunction(g, std::move(v));
}

double max_entry_diff(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
    const double scale = std::max({a.cwiseAbs().maxCoeff(), b.cwiseAbs().maxCoeff(), 1e-300});
    return (a - b).cwiseAbs().maxCoeff() / scale;
}

StepFunction h(const DyadicGrid& g, NodeId n) { return haar_function(g, n); }

}  // namespace

TEST_CASE("shift S on haar functions") {
    DyadicGrid g(0.0, 1.0, 6);
    auto S = shift_S(g);
    NodeId I{2, 1};
    auto out = S(h(g, I));
    auto expect = h(g, I.left()) - h(g, I.right());
    CHECK(max_relative_difference(out, expect) < 1e-13);
    CHECK(max_abs(S(StepFunction::constant(g, 2.0))) < 1e-13);
    // children are finest-level leaves: truncated
    CHECK(max_abs(S(h(g, {5, 3}))) < 1e-13);
    CHECK(dense_l2_norm(S) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-8));
}

TEST_CASE("S adjoint") {
    DyadicGrid g(0.0, 1.0, 6);
    auto St = shift_S_adjoint(g);
    NodeId I{2, 1};
    CHECK(max_relative_difference(St(h(g, I.left())), h(g, I)) < 1e-13);
    CHECK(max_relative_difference(St(h(g, I.right())), -1.0 * h(g, I)) < 1e-13);
    CHECK(max_abs(St(StepFunction::constant(g, 1.0))) < 1e-13);
    CHECK(max_entry_diff(St.action_matrix(), shift_S(g).action_matrix().transpose()) < 1e-13);
}

TEST_CASE("paraproducts with constant symbol") {
    DyadicGrid g(-1.0, 2.0, 7);
    auto b = StepFunction::constant(g, 3.0);
    auto f = random_function(g, 4);
    CHECK(max_abs(paraproduct(b)(f)) < 1e-12);
    CHECK(max_abs(paraproduct_adjoint(b)(f)) < 1e-12);
    auto expect = 3.0 * (f - StepFunction::constant(g, average(f, {0, 0})));
    CHECK(max_relative_difference(lambda_op(b)(f), expect) < 1e-12);
}

TEST_CASE("adjoint pairings on random triples") {
    DyadicGrid g(-2.0, 3.0, 9);
    for (int t = 0; t < 20; ++t) {
        auto b = random_function(g, 3 * t), f = random_function(g, 3 * t + 1), k = random_function(g, 3 * t + 2);
        auto S = shift_S(g), St = shift_S_adjoint(g);
        const double a1 = inner(S(f), k), a2 = inner(f, St(k));
        CHECK(std::abs(a1 - a2) <= 1e-10 * norm_l2(S(f)) * norm_l2(k) + 1e-300);
        auto p = paraproduct(b), ps = paraproduct_adjoint(b);
        const double c1 = inner(p(f), k), c2 = inner(f, ps(k));
        CHECK(std::abs(c1 - c2) <= 1e-10 * norm_l2(p(f)) * norm_l2(k) + 1e-300);
    }
}

TEST_CASE("product decomposition") {
    DyadicGrid g(-1.0, 2.0, 10);
    for (int t = 0; t < 10; ++t) {
        auto b = random_function(g, 100 + t), f = random_function(g, 200 + t);
        b -= StepFunction::constant(g, average(b, {0, 0}));
        f -= StepFunction::constant(g, average(f, {0, 0}));
        auto sum = paraproduct_adjoint(b)(f) + paraproduct(b)(f) + lambda_op(b)(f);
        CHECK(max_relative_difference(sum, b.times(f)) <= 1e-9);
        CHECK(max_abs(decomposition_root_term(b, f)) < 1e-12);
    }
    auto b = random_function(g, 7), f = random_function(g, 8);
    auto sum = paraproduct_adjoint(b)(f) + paraproduct(b)(f) + lambda_op(b)(f) + decomposition_root_term(b, f);
    CHECK(max_relative_difference(sum, b.times(f)) <= 1e-9);
}

TEST_CASE("multiplication operators") {
    DyadicGrid g(0.0, 1.0, 6);
    auto f = random_function(g, 1);
    CHECK(max_relative_difference(mult_op(StepFunction::constant(g, 1.0))(f), f) == 0.0);
    CHECK(max_abs(mult_op(StepFunction(g))(f)) == 0.0);
    auto b = random_function(g, 2);
    auto c = commutator(mult_op(b), shift_S(g))(f);
    auto ref = b.times(shift_S(g)(f)) - shift_S(g)(b.times(f));
    CHECK(max_relative_difference(c, ref) < 1e-14);
}

TEST_CASE("commutators") {
    DyadicGrid g(0.0, 1.0, 7);
    auto f = random_function(g, 3);
    CHECK(max_abs(commutator(identity_op(g), shift_S(g))(f)) < 1e-13);
    CHECK(max_abs(commutator(mult_op(StepFunction::constant(g, 2.5)), hilbert_direct(g))(f)) < 1e-12);
    for (int t = 0; t < 5; ++t) {
        auto b = random_function(g, 10 + t);
        auto lhs = commutator(lambda_op(b), shift_S(g)).action_matrix();
        auto rhs = lambda_commutator_closed(b).action_matrix();
        CHECK(max_entry_diff(lhs, rhs) <= 1e-12);
    }
    CHECK(max_abs(lambda_commutator_closed(StepFunction::constant(g, 4.0))(f)) < 1e-12);
}

TEST_CASE("closed-form commutator with a single-node symbol") {
    DyadicGrid g(0.0, 1.0, 6);
    NodeId K{2, 2};
    auto b = std::sqrt(g.node_length(K)) * h(g, K);
    auto f = random_function(g, 5);
    const double c = inner(f, h(g, K));
    auto expect = -c * (h(g, K.right()) + h(g, K.left()));
    CHECK(max_relative_difference(lambda_commutator_closed(b)(f), expect) < 1e-12);
}

TEST_CASE("S_b") {
    DyadicGrid g(0.0, 1.0, 6);
    NodeId I{2, 1};
    auto b = std::sqrt(g.node_length(I)) * h(g, I);
    CHECK(max_relative_difference(shift_S_b(b)(h(g, I)), h(g, I.left())) < 1e-12);
    auto f = random_function(g, 1);
    CHECK(max_abs(shift_S_b(StepFunction::constant(g, 2.0))(f)) < 1e-12);
    auto w = random_martingale_weight(g, 0.3, 2);
    CHECK(max_abs(truncated_S_b(StepFunction::constant(g, 2.0), I, w)(f)) < 1e-12);
}

TEST_CASE("haar shifts") {
    DyadicGrid g(0.0, 1.0, 8);
    SUBCASE("S as a spec") {
        auto spec = shift_S_spec(g);
        CHECK(spec.tau == 1);
        CHECK_NOTHROW(validate(spec, g));
        CHECK(max_entry_diff(haar_shift(spec, g).action_matrix(), shift_S(g).action_matrix()) == 0.0);
    }
    SUBCASE("empty spec") {
        HaarShiftSpec spec;
        CHECK(max_abs(haar_shift(spec, g)(random_function(g, 1))) == 0.0);
    }
    SUBCASE("random tau = 2 spec") {
        auto spec = random_haar_shift_spec(g, 2, 1.0, 2, 77);
        CHECK_NOTHROW(validate(spec, g));
        auto T = haar_shift(spec, g);
        const double svd = dense_l2_norm(T);
        auto unit = weight_from_profile(AnalyticProfile::constant(1.0), g);
        auto pi = l2w_opnorm(T, unit);
        CHECK(pi.converged);
        CHECK(pi.norm <= svd * (1.0 + 1e-8));
        CHECK(materialization_mismatch(T, T.materialize(), 50, 3) <= 1e-12);
        CHECK(materialization_mismatch(T.adjoint(), T.adjoint().materialize(), 10, 4) <= 1e-12);
        CHECK(max_entry_diff(T.adjoint().action_matrix(), T.action_matrix().transpose()) <= 1e-12);
    }
    SUBCASE("size condition is enforced") {
        HaarShiftSpec spec;
        spec.tau = 1;
        spec.C = 1.0;
        spec.entries.push_back({{1, 0}, {2, 0}, {2, 1}, 10.0});
        CHECK_THROWS_AS(validate(spec, g), Error);
        spec.entries[0].a = 0.5;
        CHECK_NOTHROW(validate(spec, g));
        spec.entries[0].to = {3, 0};
        CHECK_THROWS_AS(validate(spec, g), Error);  // level gap 2 > tau
        spec.entries[0].to = {2, 2};
        CHECK_THROWS_AS(validate(spec, g), Error);  // outside Q
    }
    SUBCASE("spec file round trip") {
        auto spec = random_haar_shift_spec(g, 2, 1.0, 1, 5);
        std::stringstream ss;
        write_haar_shift_spec(ss, spec);
        auto back = read_haar_shift_spec(ss, g);
        CHECK(back.tau == spec.tau);
        CHECK(max_entry_diff(haar_shift(back, g).action_matrix(), haar_shift(spec, g).action_matrix()) <= 1e-15);
    }
}

TEST_CASE("lambda commutator of a haar shift") {
    DyadicGrid g(-1.0, 2.0, 7);
    SUBCASE("constant symbol") {
        auto spec = random_haar_shift_spec(g, 2, 1.0, 2, 1);
        auto out = lambda_shift_commutator(spec, StepFunction::constant(g, 3.0));
        for (const auto& e : out.entries) CHECK(e.a == 0.0);
    }
    SUBCASE("S reproduces the closed form") {
        auto b = random_function(g, 2);
        auto out = lambda_shift_commutator(shift_S_spec(g), b);
        CHECK(max_entry_diff(haar_shift(out, g).action_matrix(), lambda_commutator_closed(b).action_matrix()) <= 1e-12);
    }
    SUBCASE("size constant bound") {
        for (int t = 0; t < 10; ++t) {
            const int tau = 1 + t % 2;
            auto spec = random_haar_shift_spec(g, tau, 1.0, 2, 30 + t);
            auto b = random_function(g, 40 + t);
            auto out = lambda_shift_commutator(spec, b);
            CHECK_NOTHROW(validate(out, g));
            CHECK(out.C <= spec.C * (2.0 * tau + 2.0) * 2.0 * bmo_d(b).value * (1 + 1e-12));
            CHECK(minimal_size_constant(out, g) <= out.C * (1 + 1e-12));
            auto direct = commutator(lambda_op(b), haar_shift(spec, g)).action_matrix();
            CHECK(max_entry_diff(haar_shift(out, g).action_matrix(), direct) <= 1e-12);
        }
    }
    SUBCASE("box entries are rejected") {
        HaarShiftSpec spec;
        spec.entries.push_back({{1, 0}, {1, 0}, {2, 0}, 0.1, HaarKind::Box, HaarKind::Haar});
        CHECK_THROWS_AS(lambda_shift_commutator(spec, random_function(g, 1)), Error);
    }
}

TEST_CASE("hilbert transform") {
    SUBCASE("antisymmetric kernel") {
        DyadicGrid g(-1.0, 2.0, 7);
        auto K = hilbert_direct(g).action_matrix();
        CHECK((K + K.transpose()).cwiseAbs().maxCoeff() == 0.0);
        CHECK(cell_pair_kernel(0) == 0.0);
        CHECK(cell_pair_kernel(3) == -cell_pair_kernel(-3));
    }
    SUBCASE("indicator of (0,1) at x = 2") {
        DyadicGrid g(-4.0, 8.0, 12);
        std::vector<double> v(g.cells(), 0.0);
        for (std::size_t i = 0; i < g.cells(); ++i)
            if (g.cell_left(i) >= 0.0 && g.cell_left(i) < 1.0) v[i] = 1.0;
        auto out = hilbert_direct(g)(StepFunction(g, std::move(v)));
        const auto i2 = static_cast<std::size_t>((2.0 - g.start()) / g.cell_width());
        const double at2 = 0.5 * (out[i2 - 1] + out[i2]);
        const double exact = std::log(2.0) / std::numbers::pi;
        CHECK(std::abs(at2 - exact) <= 0.01 * exact);
    }
    SUBCASE("serial and parallel applies agree") {
        DyadicGrid g(-1.0, 2.0, 10);
        auto f = random_function(g, 1);
        auto a = hilbert_direct(g, true)(f), b = hilbert_direct(g, false)(f);
        for (std::size_t i = 0; i < g.cells(); ++i) CHECK(a[i] == b[i]);
    }
}

TEST_CASE("averaged shift with the standard grid only is S") {
    DyadicGrid g(0.0, 1.0, 6);
    AveragedShiftOptions o;
    o.samples = 1;
    o.force_standard = true;
    CHECK(max_entry_diff(hilbert_averaged(g, o).action_matrix(), shift_S(g).action_matrix()) <= 1e-13);
    o.samples = 16;
    o.force_standard = false;
    o.seed = 3;
    auto a = averaged_shift(g, o).kernel;
    auto b = averaged_shift(g, o).kernel;
    CHECK((a - b).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("dense materialization matches apply") {
    DyadicGrid g(-1.0, 2.0, 7);
    auto b = random_function(g, 77);
    auto w = random_martingale_weight(g, 0.2, 1);
    std::vector<LinOp> ops{shift_S(g),
                           shift_S_adjoint(g),
                           paraproduct(b),
                           paraproduct_adjoint(b),
                           lambda_op(b),
                           mult_op(b),
                           lambda_commutator_closed(b),
                           shift_S_b(b),
                           truncated_S_b(b, {1, 0}, w),
                           hilbert_direct(g),
                           commutator(mult_op(b), hilbert_direct(g)),
                           compose(shift_S(g), paraproduct(b)),
                           linear_combination({{2.0, shift_S(g)}, {-1.0, identity_op(g)}}),
                           scaled(3.0, zero_op(g))};
    for (const auto& op : ops) {
        INFO(op.descriptor());
        CHECK(materialization_mismatch(op, op.materialize(), 50, 9) <= 1e-12);
        CHECK(materialization_mismatch(op, op.materialize(false, false), 5, 10) <= 1e-12);
    }
    CHECK_THROWS_AS(shift_S(DyadicGrid(0.0, 1.0, 14)).materialize(), Error);
}

TEST_CASE("linearity of operators") {
    DyadicGrid g(0.0, 1.0, 8);
    auto T = commutator(lambda_op(random_function(g, 1)), shift_S(g));
    auto f = random_function(g, 2), k = random_function(g, 3);
    CHECK(max_relative_difference(T(2.0 * f + k), 2.0 * T(f) + T(k)) <= 1e-12);
}
