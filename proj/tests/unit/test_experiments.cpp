#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "dyadic/experiments/config.hpp"
#include "dyadic/experiments/op_descriptor.hpp"
#include "dyadic/experiments/sweeps.hpp"
#include "dyadic/opnorm.hpp"
#include "dyadic/profile.hpp"
#include "dyadic/shift.hpp"

using namespace dyadic;
using namespace dyadic::experiments;

namespace {

// Small sharpness setup: the base still contains [-1, 2).
ExperimentConfig small_sharpness() {
    auto cfg = defaults_for("sharpness");
    cfg.base_start = -2.0;
    cfg.base_length = 4.0;
    cfg.depth = 9;
    return cfg;
}

std::vector<SweepRow> parse_rows(const std::string& csv) {
    std::istringstream is(csv);
    std::string line;
    std::vector<SweepRow> rows;
    bool body = false;
    while (std::getline(is, line)) {
        if (line == "delta,a2,ratio,runtime_ms") {
            body = true;
            continue;
        }
        if (!body || line.empty()) continue;
        SweepRow r;
        char c;
        std::istringstream ls(line);
        ls >> r.delta >> c >> r.a2 >> c >> r.ratio >> c >> r.runtime_ms;
        rows.push_back(r);
    }
    return rows;
}

std::string csv_of(const SweepResult& r) {
    std::ostringstream os;
    write_csv(os, r);
    return os.str();
}

}  // namespace

TEST_CASE("config defaults and parsing") {
    auto s = defaults_for("sharpness");
    CHECK(s.depth == 16);
    CHECK(s.base_start == -4.0);
    CHECK(s.deltas == std::vector<double>{0.4, 0.2, 0.1, 0.05});
    CHECK(s.seed == 42);
    CHECK_FALSE(s.timing);
    CHECK(defaults_for("shift-sweep").depth == 12);
    CHECK(defaults_for("average-shift").depth == 10);
    CHECK_THROWS_AS(defaults_for("nope"), Error);

    ExperimentConfig c;
    std::istringstream is("# comment\ndepth = 7   # trailing\nbase = -1,2\n\ndeltas = 0.5, 0.25,0.125,0.0625\nformat = json\n");
    apply_config(c, is);
    CHECK(c.depth == 7);
    CHECK(c.base_start == -1.0);
    CHECK(c.base_length == 2.0);
    CHECK(c.deltas.size() == 4);
    CHECK(c.format == "json");
    CHECK_THROWS_AS(c.set("colour", "red"), Error);
    CHECK_THROWS_AS(c.set("depth", "deep"), Error);
    CHECK_THROWS_AS(c.set("format", "xml"), Error);
    CHECK_THROWS_AS(c.set("timing", "maybe"), Error);
}

TEST_CASE("config precedence") {
    const std::string path = "test_experiments_precedence.cfg";
    {
        std::ofstream os(path);
        os << "seed = 5\ndepth = 7\nexperiment = verify\n";
    }
    SUBCASE("defaults only") { CHECK(resolve_config("sharpness", nullptr, "", {}).seed == 42); }
    SUBCASE("environment beats defaults") { CHECK(resolve_config("sharpness", "9", "", {}).seed == 9); }
    SUBCASE("file beats environment") {
        auto c = resolve_config("sharpness", "9", path, {});
        CHECK(c.seed == 5);
        CHECK(c.depth == 7);
        CHECK(c.experiment == "sharpness");
    }
    SUBCASE("flags beat the file") {
        auto c = resolve_config("sharpness", "9", path, {{"seed", "11"}, {"depth", "8"}});
        CHECK(c.seed == 11);
        CHECK(c.depth == 8);
    }
    SUBCASE("later flags win") {
        CHECK(resolve_config("sharpness", nullptr, "", {{"seed", "1"}, {"seed", "2"}}).seed == 2);
    }
    SUBCASE("missing file") { CHECK_THROWS_AS(resolve_config("sharpness", nullptr, "does-not-exist.cfg", {}), Error); }
    std::remove(path.c_str());
}

TEST_CASE("operator descriptors") {
    DyadicGrid g(-1.0, 2.0, 5);
    for (const char* d : {"S", "S*", "pi:logabs", "pistar:powabs:0.5", "lambda:const:2", "S-b:logabs", "hilbert",
                          "hilbert-avg:4:1", "comm-lambda-S:logabs", "pistar-S:logabs", "S-pi:logabs", "comm:logabs:S",
                          "comm:powabs:0.5:hilbert", "comm:indpow:0,1,0.5:S*"}) {
        INFO(d);
        auto op = parse_operator(d, g);
        CHECK(op.grid() == g);
    }
    CHECK_THROWS_AS(parse_operator("T", g), Error);
    CHECK_THROWS_AS(parse_operator("pi:nonsense", g), Error);
    CHECK_THROWS_AS(parse_operator("comm:logabs:Q", g), Error);

    auto b = AnalyticProfile::log_abs().sample(DyadicGrid(1.0, 2.0, 5));
    b = StepFunction(g, std::vector<double>(b.values().begin(), b.values().end()));
    auto direct = commutator(lambda_op(b), shift_S(g)).action_matrix();
    auto swept = sweep_operator("comm-lambda-S", b).action_matrix();
    CHECK((direct - swept).cwiseAbs().maxCoeff() == 0.0);
    CHECK_THROWS_AS(sweep_operator("hilbert", b), Error);
}

TEST_CASE("fits") {
    auto f = least_squares({1.0, 2.0, 3.0, 4.0}, {3.0, 5.0, 7.0, 9.0});
    CHECK(f.slope == doctest::Approx(2.0));
    CHECK(f.intercept == doctest::Approx(1.0));
    CHECK(f.residual == doctest::Approx(0.0).scale(1.0));
    CHECK_THROWS_AS(least_squares({1.0, 1.0}, {2.0, 3.0}), Error);
}

TEST_CASE("analytic benchmark") {
    CHECK(analytic_benchmark(0.5, 16) == doctest::Approx(4.0).epsilon(1e-12));
    for (double d : {0.25, 0.1}) CHECK(std::abs(analytic_benchmark(d, 16) * d * d - 1.0) <= 5e-3);
}

TEST_CASE("sharpness sweep at a small depth") {
    auto cfg = small_sharpness();
    auto r = run_sharpness_hilbert(cfg);
    REQUIRE(r.rows.size() == 4);
    CHECK(r.fit_ok);
    for (std::size_t i = 1; i < r.rows.size(); ++i) CHECK(r.rows[i].a2 > r.rows[i - 1].a2);
    for (const auto& row : r.rows) CHECK(row.ratio > 0.0);

    SUBCASE("fit is reproducible from the emitted rows") {
        auto rows = parse_rows(csv_of(r));
        REQUIRE(rows.size() == 4);
        auto refit = fit_rows(rows);
        CHECK(std::abs(refit.slope - r.fit.slope) <= 1e-12);
        CHECK(std::abs(refit.intercept - r.fit.intercept) <= 1e-12);
    }
    SUBCASE("output is deterministic") {
        auto again = run_sharpness_hilbert(cfg);
        CHECK(csv_of(r) == csv_of(again));
        CHECK(to_json(r).dump() == to_json(again).dump());
    }
    SUBCASE("csv layout") {
        auto csv = csv_of(r);
        CHECK(csv.find("\ndelta,a2,ratio,runtime_ms\n") != std::string::npos);
        CHECK(csv.rfind("# ", 0) == 0);
        auto j = to_json(r);
        CHECK(j.contains("config"));
        CHECK(j.contains("rows"));
    }
    SUBCASE("p = 2 through the L^p path is identical") {
        auto lp = run_sharpness_lp(cfg, 2.0);
        REQUIRE(lp.rows.size() == r.rows.size());
        for (std::size_t i = 0; i < r.rows.size(); ++i) {
            CHECK(std::abs(lp.rows[i].ratio - r.rows[i].ratio) <= 1e-12 * r.rows[i].ratio);
            CHECK(std::abs(lp.rows[i].a2 - r.rows[i].a2) <= 1e-12 * r.rows[i].a2);
        }
    }
    SUBCASE("constant symbol is a degenerate witness") {
        auto c = cfg;
        c.b = "const:3";
        auto d = run_sharpness_hilbert(c);
        CHECK_FALSE(d.fit_ok);
        CHECK(d.status == "degenerate witness");
        for (const auto& row : d.rows) CHECK(row.ratio == 0.0);
    }
    SUBCASE("input validation") {
        auto c = cfg;
        c.deltas = {0.4, 0.2, 0.1};
        CHECK_THROWS_AS(run_sharpness_hilbert(c), Error);
        c.deltas = {0.4, 0.2, 0.1, 1.5};
        CHECK_THROWS_AS(run_sharpness_hilbert(c), Error);
        c = cfg;
        c.base_start = 0.0;
        CHECK_THROWS_AS(run_sharpness_hilbert(c), Error);
        CHECK_THROWS_AS(run_sharpness_lp(cfg, 2.5), Error);
    }
}

TEST_CASE("L^p sharpness sweep") {
    auto cfg = small_sharpness();
    auto r = run_sharpness_lp(cfg, 1.5);
    CHECK(r.fit_ok);
    CHECK(r.rows.size() == 4);
    for (const auto& row : r.rows) CHECK((row.ratio > 0.0 && std::isfinite(row.ratio)));
    MESSAGE("p = 1.5 slope at depth 9: " << r.fit.slope);
}

TEST_CASE("shift sweeps") {
    auto cfg = defaults_for("shift-sweep");
    cfg.depth = 6;
    SUBCASE("S with the unit weight has norm sqrt 2 in every slot") {
        cfg.op = "S";
        cfg.weight = "const:1";
        auto r = run_shift_norm_sweep(cfg);
        for (const auto& row : r.rows) CHECK(row.ratio == doctest::Approx(std::sqrt(2.0)).epsilon(1e-8));
        CHECK_FALSE(r.fit_ok);
    }
    SUBCASE("constant symbol gives zero norms") {
        cfg.op = "comm-lambda-S";
        cfg.b = "const:2";
        auto r = run_shift_norm_sweep(cfg);
        for (const auto& row : r.rows) CHECK(row.ratio == doctest::Approx(0.0).scale(1.0));
    }
    SUBCASE("power weights") {
        cfg.op = "comm-lambda-S";
        auto r = run_shift_norm_sweep(cfg);
        CHECK(r.fit_ok);
        CHECK(r.bound_ok);
        CHECK(csv_of(r) == csv_of(run_shift_norm_sweep(cfg)));
    }
}

TEST_CASE("average shift") {
    auto cfg = defaults_for("average-shift");
    cfg.depth = 6;
    cfg.samples = 400;
    cfg.convergence_row = false;
    auto r = run_average_shift(cfg);
    REQUIRE(r.rows.size() == 1);
    CHECK(r.rows[0].corr_cell > 0.9);
    CHECK(r.rows[0].c_cell > 0.0);
    std::ostringstream a, b;
    write_csv(a, r);
    write_csv(b, run_average_shift(cfg));
    CHECK(a.str() == b.str());

    cfg.standard_only = true;
    auto s = run_average_shift(cfg);
    MESSAGE("standard-only correlation: " << s.rows[0].corr_cell);
    cfg.samples = 50;
    CHECK_THROWS_AS(run_average_shift(cfg), Error);
}

TEST_CASE("verification suite") {
    SUBCASE("default config") {
        auto r = run_verify_suite(defaults_for("verify"));
        CHECK(r.exit_status() == 0);
        CHECK(r.reports.size() > 20);
        for (const auto& x : r.reports)
            if (x.exact) CHECK_MESSAGE(x.violations == 0, x.lemma_id);
    }
    SUBCASE("depth 1") {
        auto cfg = defaults_for("verify");
        cfg.depth = 1;
        CHECK(run_verify_suite(cfg).exit_status() == 0);
    }
    SUBCASE("injected fault") {
        auto cfg = defaults_for("verify");
        cfg.inject_fault = true;
        auto r = run_verify_suite(cfg);
        CHECK(r.exit_status() == 1);
        bool found = false;
        for (const auto& x : r.reports)
            if (x.lemma_id == "adjoint-injected-fault") {
                found = true;
                CHECK_FALSE(x.pass);
                CHECK(x.witness.find("(6,0)") != std::string::npos);
            }
        CHECK(found);
    }
    SUBCASE("json is deterministic") {
        auto cfg = defaults_for("verify");
        cfg.depth = 5;
        CHECK(to_json(run_verify_suite(cfg)).dump() == to_json(run_verify_suite(cfg)).dump());
    }
}
