#pragma once

#include "hoaxnet/dynamics.hpp"
#include "hoaxnet/engine.hpp"

#include <cstddef>
#include <vector>

namespace hoaxnet {

/// Per-group occupation probabilities of the two-group mean-field system.
struct MeanFieldState {
    double pS_gu = 1.0, pB_gu = 0.0, pF_gu = 0.0;
    double pS_sk = 1.0, pB_sk = 0.0, pF_sk = 0.0;

    /// pB = 0.01 in every group, the rest susceptible.
    static MeanFieldState seeded(double believers = 0.01) noexcept;
    /// Mostly believers; used as the second starting point of the bistability check.
    static MeanFieldState high_infection() noexcept;

    double max_abs_diff(const MeanFieldState& other) const noexcept;
    bool valid(double tolerance = 1e-9) const noexcept;
};

struct MeanFieldConfig {
    double mean_degree = 10.0;
    double s = 0.8;
    double gamma = 0.5;
    std::size_t max_iterations = 100000;
    double tolerance = 1e-10;
    MeanFieldState initial_state = MeanFieldState::seeded();

    void validate() const;
};

/// One synchronous application of the group-level update equations.
///
/// A gullible agent sees s*gamma*k*pB_gu + (1-s)*(1-gamma)*k*pB_sk believers
/// (fact checkers alike); a skeptic agent s*(1-gamma)*k*pB_sk + (1-s)*gamma*k*pB_gu.
MeanFieldState mf_step(const MeanFieldState& state, const ModelParams& params, const MeanFieldConfig& config);

struct MeanFieldSolution {
    MeanFieldState state;
    std::size_t iterations = 0;
    bool converged = false;
};

/// Successive substitution from config.initial_state until the max-norm change
/// drops below config.tolerance or max_iterations is hit.
MeanFieldSolution mf_solve(const ModelParams& params, const MeanFieldConfig& config);

/// Fixed points reached from the configured start and from a high-infection start.
struct MeanFieldFixedPoints {
    MeanFieldSolution from_initial;
    MeanFieldSolution from_high;
    /// The two fixed points differ by more than the tolerance.
    bool bistable = false;
};

MeanFieldFixedPoints mf_solve_both(const ModelParams& params, const MeanFieldConfig& config);

/// Removal boundary of the simplified model: (1 - alpha)^2 / (1 + alpha^2).
double critical_pf(double alpha);

/// Group-level equilibrium expressed in the engine report layout.
/// Rates are the S->B / S->F probabilities at the fixed point; steps_run holds iterations.
EquilibriumReport to_report(const MeanFieldSolution& solution, const ModelParams& params,
                            const MeanFieldConfig& config);

struct MeanFieldSweepSpec {
    AxisSpec axis1;
    AxisSpec axis2;
    ModelParams params;
    MeanFieldConfig config;

    void validate() const;
};

struct MeanFieldPhaseDiagram {
    SweepResult result;
    /// Row-major flags for cells with two distinct fixed points.
    std::vector<bool> bistable;
};

/// Grid of mean-field solutions over two of {s, gamma, alpha_gu, alpha_sk, pf, beta}.
MeanFieldPhaseDiagram mf_phase_diagram(const MeanFieldSweepSpec& spec, unsigned threads = 1);

}  // namespace hoaxnet
