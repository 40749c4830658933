#include "hoaxnet/errors.hpp"
#include "hoaxnet/meanfield.hpp"
#include "support/single_group.hpp"

#include <doctest.h>

#include <cmath>

using namespace hoaxnet;
using hoaxnet::testing::solve_single_group;

namespace {

ModelParams simplified(double alpha_gu, double alpha_sk, double pf, double beta = 0.5) {
    return {beta, alpha_gu, alpha_sk, pf, 0.0, true};
}

MeanFieldConfig config(double s, double gamma, double k = 10.0) {
    MeanFieldConfig c;
    c.s = s;
    c.gamma = gamma;
    c.mean_degree = k;
    return c;
}

}  // namespace

TEST_CASE("critical_pf: boundary values") {
    CHECK(critical_pf(0.0) == 1.0);
    CHECK(critical_pf(1.0) == 0.0);
    CHECK(critical_pf(0.5) == doctest::Approx(0.2).epsilon(1e-15));
    CHECK_THROWS_AS(critical_pf(-0.01), ParameterError);
    CHECK_THROWS_AS(critical_pf(1.01), ParameterError);
    double prev = 2.0;
    for (int k = 0; k <= 1000; ++k) {
        const double v = critical_pf(k / 1000.0);
        CHECK(v <= prev);
        prev = v;
    }
}

TEST_CASE("mf_step: all-susceptible is stationary") {
    const MeanFieldState st{1.0, 0.0, 0.0, 1.0, 0.0, 0.0};
    const auto next = mf_step(st, simplified(0.9, 0.1, 0.3), config(0.8, 0.3));
    CHECK(next.max_abs_diff(st) == 0.0);
}

TEST_CASE("mf_step: identical groups stay identical") {
    MeanFieldState st = MeanFieldState::seeded();
    const auto p = simplified(0.6, 0.6, 0.3);
    const auto c = config(0.5, 0.5);
    for (int k = 0; k < 500; ++k) {
        st = mf_step(st, p, c);
        REQUIRE(st.pB_gu == doctest::Approx(st.pB_sk).epsilon(1e-14));
        REQUIRE(st.pF_gu == doctest::Approx(st.pF_sk).epsilon(1e-14));
    }
}

TEST_CASE("mf_step: one step against exact rational evaluation") {
    // beta 1/2, alpha_gu 9/10, alpha_sk 1/20, pf 1/10, simplified, k 10, s 4/5, gamma 3/10
    const MeanFieldState st{0.7, 0.2, 0.1, 0.5, 0.1, 0.4};
    const auto next = mf_step(st, simplified(0.9, 0.05, 0.1), config(0.8, 0.3));
    const double expected[6] = {0.38, 0.48974244833068364, 0.13025755166931638,
                                0.3,  0.06607295619179027, 0.6339270438082097};
    const double got[6] = {next.pS_gu, next.pB_gu, next.pF_gu, next.pS_sk, next.pB_sk, next.pF_sk};
    for (int k = 0; k < 6; ++k) {
        CAPTURE(k);
        CHECK(got[k] == doctest::Approx(expected[k]).epsilon(1e-12));
    }
}

TEST_CASE("property: mf_step conserves probability") {
    Rng rng(5);
    for (int k = 0; k < 20000; ++k) {
        auto triple = [&] {
            double a = uniform01(rng), b = uniform01(rng), c = uniform01(rng);
            const double t = a + b + c;
            return std::array<double, 3>{a / t, b / t, c / t};
        };
        const auto g = triple(), s = triple();
        const MeanFieldState st{g[0], g[1], g[2], s[0], s[1], s[2]};
        const ModelParams p{uniform01(rng), uniform01(rng), uniform01(rng), uniform01(rng), uniform01(rng),
                            uniform_below(rng, 2) == 1};
        MeanFieldConfig c = config(0.5 + 0.5 * uniform01(rng), uniform01(rng), 1.0 + 50 * uniform01(rng));
        const auto next = mf_step(st, p, c);
        REQUIRE(next.valid(1e-12));
    }
}

TEST_CASE("mf_solve: no spreading relaxes to all-susceptible") {
    const auto sol = mf_solve({0.0, 0.5, 0.5, 0.3, 0.5, false}, config(0.8, 0.5));
    CHECK(sol.converged);
    CHECK(sol.state.pS_gu == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(sol.state.pS_sk == doctest::Approx(1.0).epsilon(1e-9));
    // infected mass decays as (1 - pf)^t from 0.01
    const double bound = std::log(1e-10 / 0.01) / std::log(0.7);
    CHECK(static_cast<double>(sol.iterations) <= bound + 5);
}

TEST_CASE("mf_solve: invariant under rescaling the mean degree") {
    for (double pf : {0.1, 0.5, 0.8}) {
        const auto p = simplified(0.9, 0.05, pf);
        const auto a = mf_solve(p, config(0.7, 0.4, 10.0));
        const auto b = mf_solve(p, config(0.7, 0.4, 100.0));
        CHECK(a.converged);
        CHECK(b.converged);
        CHECK(a.state.max_abs_diff(b.state) < 1e-8);
    }
}

TEST_CASE("mf_solve: two-group solver reduces to one group") {
    for (double pf : {0.1, 0.3, 0.6}) {
        for (double alpha : {0.2, 0.5, 0.8}) {
            const auto p = simplified(alpha, alpha, pf);
            const auto one = solve_single_group(0.5, alpha, pf, 1 - alpha, 10.0);
            REQUIRE(one.converged);
            for (double gamma : {1.0, 0.5}) {
                const auto two = mf_solve(p, config(0.5, gamma));
                CAPTURE(pf);
                CAPTURE(alpha);
                CAPTURE(gamma);
                CHECK(two.converged);
                CHECK(two.state.pB_gu == doctest::Approx(one.B).epsilon(1e-7));
                CHECK(two.state.pF_gu == doctest::Approx(one.F).epsilon(1e-7));
                CHECK(two.state.pS_gu == doctest::Approx(one.S).epsilon(1e-7));
            }
        }
    }
}

TEST_CASE("mf_solve: removal threshold of the simplified model") {
    for (double alpha : {0.1, 0.3, 0.5, 0.7}) {
        const double crit = critical_pf(alpha);
        const auto p_below = simplified(alpha, alpha, 0.8 * crit);
        const auto below = mf_solve(p_below, config(0.5, 0.5));
        CHECK(below.converged);
        CHECK(below.state.pB_gu < 1e-6);
        if (1.25 * crit <= 1.0) {
            const auto above = mf_solve(simplified(alpha, alpha, 1.25 * crit), config(0.5, 0.5));
            CHECK(above.state.pB_gu > 1e-6);
        }
    }
}

TEST_CASE("mf_solve: threshold scan brackets the analytic boundary") {
    for (double alpha : {0.2, 0.4, 0.6}) {
        const double crit = critical_pf(alpha);
        const int steps = 40;
        const double lo = 0.5 * crit, hi = std::min(1.0, 1.5 * crit);
        const double dx = (hi - lo) / steps;
        int first_positive = -1;
        for (int k = 0; k <= steps; ++k) {
            const double pf = lo + dx * (k + 0.5 * (k < steps));
            if (pf > 1.0) break;
            const auto sol = mf_solve(simplified(alpha, alpha, pf), config(0.5, 0.5));
            const bool endemic = sol.state.pB_gu > 1e-6;
            if (first_positive < 0 && endemic) first_positive = k;
            if (first_positive >= 0) CHECK(endemic);  // stays endemic past the boundary
        }
        REQUIRE(first_positive > 0);
        const double last_zero = lo + dx * (first_positive - 1 + 0.5);
        const double first_pos = lo + dx * (first_positive + 0.5);
        CAPTURE(alpha);
        CHECK(last_zero <= crit);
        CHECK(first_pos >= crit);
        CHECK(first_pos - last_zero <= dx + 1e-15);
    }
}

TEST_CASE("mf_solve_both: monostable regime reports one fixed point") {
    const auto fp = mf_solve_both(simplified(0.9, 0.05, 0.8), config(0.7, 0.5));
    CHECK_FALSE(fp.bistable);
    CHECK(fp.from_initial.state.max_abs_diff(fp.from_high.state) < 1e-6);
}

TEST_CASE("MeanFieldConfig::validate") {
    MeanFieldConfig c;
    CHECK_NOTHROW(c.validate());
    c.mean_degree = 0.0;
    CHECK_THROWS_AS(c.validate(), ParameterError);
    c = {};
    c.tolerance = -1.0;
    CHECK_THROWS_AS(c.validate(), ParameterError);
    c = {};
    c.initial_state.pB_gu = 0.5;
    CHECK_THROWS_AS(c.validate(), ParameterError);
}

TEST_CASE("mf_phase_diagram: a single cell reproduces mf_solve") {
    MeanFieldSweepSpec spec{parse_axis("s:0.7:0.7:1"), parse_axis("gamma:0.4:0.4:1"), simplified(0.9, 0.05, 0.1),
                            config(0.5, 0.5)};
    const auto diagram = mf_phase_diagram(spec);
    REQUIRE(diagram.result.cells.size() == 1);
    const auto c = config(0.7, 0.4);
    const auto direct = to_report(mf_solve(spec.params, c), spec.params, c);
    CHECK(diagram.result.cells[0].report == direct);
}

TEST_CASE("mf_phase_diagram: gamma = 1 column is the single-group endemic state") {
    const auto p = simplified(0.7, 0.05, 0.5);
    MeanFieldSweepSpec spec{parse_axis("s:0.5:0.95:4"), parse_axis("gamma:0.5:1.0:2"), p, config(0.5, 0.5)};
    const auto diagram = mf_phase_diagram(spec, 2);
    const auto one = solve_single_group(0.5, 0.7, 0.5, 0.3, 10.0);
    REQUIRE(one.B > 0.01);
    for (std::size_t i = 0; i < 4; ++i) {
        CHECK(diagram.result.at(i, 1).report.B_inf_total == doctest::Approx(one.B).epsilon(1e-7));
    }
}

TEST_CASE("mf_phase_diagram: at low forgetting gamma dominates s") {
    MeanFieldSweepSpec spec{parse_axis("s:0.5:0.95:10"), parse_axis("gamma:0.1:0.9:10"), simplified(0.9, 0.05, 0.1),
                            config(0.5, 0.5)};
    const auto diagram = mf_phase_diagram(spec, 2);
    double across_gamma = 0.0, across_s = 0.0;
    for (std::size_t i = 0; i < 10; ++i) {
        across_gamma += diagram.result.at(i, 9).report.B_inf_total - diagram.result.at(i, 0).report.B_inf_total;
    }
    for (std::size_t j = 0; j < 10; ++j) {
        across_s += std::abs(diagram.result.at(9, j).report.B_inf_total - diagram.result.at(0, j).report.B_inf_total);
    }
    CHECK(across_gamma > 0.0);
    CHECK(across_gamma > 2.0 * across_s);
    for (const auto& cell : diagram.result.cells) CHECK(cell.report.converged == 1.0);
}

TEST_CASE("mf_phase_diagram: invalid cells are identified") {
    MeanFieldSweepSpec spec{parse_axis("pf:0.5:1.5:3"), parse_axis("gamma:0.1:0.9:2"), simplified(0.9, 0.05, 0.1),
                            config(0.5, 0.5)};
    CHECK_THROWS_WITH_AS(mf_phase_diagram(spec), doctest::Contains("cell (2, 0)"), ParameterError);
    spec.axis1 = spec.axis2;
    CHECK_THROWS_AS(mf_phase_diagram(spec), ParameterError);
}
