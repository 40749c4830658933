#pragma once

#include "hoaxnet/dynamics.hpp"
#include "hoaxnet/graph.hpp"

#include <array>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <string>
#include <string_view>
#include <vector>

namespace hoaxnet {

struct StateVector {
    std::vector<CompartmentState> states;
    std::size_t t = 0;
};

enum class SeedGroup : std::uint8_t { Gullible, Skeptic, Both };

SeedGroup parse_seed_group(std::string_view text);
std::string_view to_string(SeedGroup g) noexcept;

struct RunConfig {
    /// Initial believers as a share of the seed pool (at least one node).
    double seed_fraction = 0.01;
    /// Absolute number of initial believers; overrides seed_fraction when nonzero.
    std::size_t seed_count = 0;
    SeedGroup seed_group = SeedGroup::Both;
    std::size_t max_steps = 10000;
    /// Steps per averaging block; also the burn-in length.
    std::size_t window = 200;
    /// Convergence threshold on the change of believer density between consecutive blocks.
    double tolerance = 1e-3;
    std::uint64_t replicate_seed = 0;

    void validate() const;
};

/// Compartment counts of one group at one instant.
struct CompartmentCounts {
    std::size_t S = 0;
    std::size_t B = 0;
    std::size_t F = 0;

    std::size_t total() const noexcept { return S + B + F; }

    friend bool operator==(const CompartmentCounts&, const CompartmentCounts&) = default;
};

struct PopulationCounts {
    CompartmentCounts gullible;
    CompartmentCounts skeptic;

    const CompartmentCounts& operator[](GroupLabel g) const noexcept {
        return g == GroupLabel::Gullible ? gullible : skeptic;
    }
    CompartmentCounts& operator[](GroupLabel g) noexcept {
        return g == GroupLabel::Gullible ? gullible : skeptic;
    }

    friend bool operator==(const PopulationCounts&, const PopulationCounts&) = default;
};

/// Equilibrium statistics: time averages over the final averaging block.
///
/// Within-group densities are fractions of that group; totals are fractions of N.
/// Rates are S->B (S->F) events divided by susceptible agent-steps of the group.
/// For a replicate average `steps_run` is the mean run length and `converged`
/// the fraction of converged runs.
struct EquilibriumReport {
    double B_inf_total = 0, F_inf_total = 0, S_inf_total = 0;
    double B_inf_gu = 0, B_inf_sk = 0;
    double F_inf_gu = 0, F_inf_sk = 0;
    double S_inf_gu = 0, S_inf_sk = 0;
    double rate_SB_gu = 0, rate_SF_gu = 0, rate_SB_sk = 0, rate_SF_sk = 0;
    double steps_run = 0;
    double converged = 0;

    static constexpr std::size_t kFieldCount = 15;
    static const std::array<std::string_view, kFieldCount>& field_names() noexcept;
    std::array<double, kFieldCount> values() const noexcept;
    static EquilibriumReport from_values(const std::array<double, kFieldCount>& v) noexcept;
    /// Looks a field up by its column name; throws ParameterError if unknown.
    double field(std::string_view name) const;

    friend bool operator==(const EquilibriumReport&, const EquilibriumReport&) = default;
};

/// Field-wise arithmetic mean, accumulated in the given order.
EquilibriumReport average(const std::vector<EquilibriumReport>& reports);

/// Places the initial believers uniformly at random within the configured seed group.
StateVector initial_state(const SegregatedNetwork& network, const RunConfig& config, Rng& rng);

/// Per-step bookkeeping of the synchronous update.
struct StepStats {
    PopulationCounts after;
    std::array<std::size_t, 2> susceptible_before{};  // indexed by GroupLabel
    std::array<std::size_t, 2> to_believer{};
    std::array<std::size_t, 2> to_fact_checker{};
};

/// Advances every agent one synchronous step: tallies are read from `current`,
/// the new states are written to `next`.
StepStats step(const SegregatedNetwork& network, const ModelParams& params,
               const StateVector& current, StateVector& next, Rng& rng);

PopulationCounts count_states(const SegregatedNetwork& network, const StateVector& state);

/// Runs the dynamics from the seeded initial state until the believer density of
/// two consecutive averaging blocks (after a one-block burn-in) differs by less
/// than the tolerance, the process dies out, or max_steps is reached.
EquilibriumReport run_to_equilibrium(const SegregatedNetwork& network, const ModelParams& params,
                                     const RunConfig& config);

/// Per-step counts of the same run run_to_equilibrium performs; entry t holds
/// the counts at time t, starting with the seeded state.
std::vector<PopulationCounts> trajectory(const SegregatedNetwork& network, const ModelParams& params,
                                         const RunConfig& config);

// ---- sweeps ----------------------------------------------------------------

struct AxisSpec {
    std::string name;
    double lo = 0.0;
    double hi = 0.0;
    std::size_t steps = 1;

    /// Evenly spaced inclusive grid; a single step yields {lo}.
    std::vector<double> values() const;
    std::string to_string() const;
};

/// Parses "name:lo:hi:steps".
AxisSpec parse_axis(std::string_view text);

/// Sets the named parameter (s, gamma, alpha_gu, alpha_sk, pf, beta).
void apply_axis(std::string_view name, double value, ModelParams& params, NetworkParams& network);
bool is_axis_name(std::string_view name) noexcept;

struct SweepSpec {
    AxisSpec axis1;
    AxisSpec axis2;
    std::size_t replicates = 50;
    ModelParams params;
    NetworkParams network;
    RunConfig run;
    std::uint64_t master_seed = 1;

    void validate() const;
};

struct SweepCell {
    double value1 = 0.0;
    double value2 = 0.0;
    EquilibriumReport report;
};

/// Grid results in row-major order over (axis1, axis2).
struct SweepResult {
    AxisSpec axis1;
    AxisSpec axis2;
    std::vector<SweepCell> cells;

    const SweepCell& at(std::size_t i, std::size_t j) const { return cells[i * axis2.steps + j]; }
};

/// Seeds for one (cell, replicate) pair: network generation and dynamics.
struct ReplicateSeeds {
    std::uint64_t network;
    std::uint64_t dynamics;
};
ReplicateSeeds replicate_seeds(std::uint64_t master_seed, std::size_t cell, std::size_t replicate) noexcept;

/// Resolved parameters of one grid cell.
struct CellSetup {
    ModelParams params;
    NetworkParams network;
};
CellSetup cell_setup(const SweepSpec& spec, std::size_t i, std::size_t j);

/// Generates a fresh network and runs it once for every (cell, replicate).
/// Result is indexed [cell][replicate]; independent of the thread count.
std::vector<std::vector<EquilibriumReport>> sweep_replicates(const SweepSpec& spec, unsigned threads = 1);

SweepResult sweep(const SweepSpec& spec, unsigned threads = 1);

/// Runs fn(0..n-1) on up to `threads` workers. Rethrows the exception of the
/// lowest failing index.
void parallel_for(std::size_t n, unsigned threads, const std::function<void(std::size_t)>& fn);

}  // namespace hoaxnet
