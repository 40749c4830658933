#pragma once

#include "hoaxnet/graph.hpp"
#include "hoaxnet/rng.hpp"

#include <cstdint>
#include <string_view>

namespace hoaxnet {

enum class CompartmentState : std::uint8_t { Susceptible = 0, Believer = 1, FactChecker = 2 };

std::string_view to_string(CompartmentState s) noexcept;

struct ModelParams {
    double beta = 0.5;
    double alpha_gu = 0.5;
    double alpha_sk = 0.5;
    double p_forget = 0.1;
    double p_verify = 0.5;
    /// When set, p_verify is ignored and each agent verifies with 1 - alpha of its group.
    bool simplified = false;

    double alpha(GroupLabel g) const noexcept {
        return g == GroupLabel::Gullible ? alpha_gu : alpha_sk;
    }
    double verify(GroupLabel g) const noexcept {
        return simplified ? 1.0 - alpha(g) : p_verify;
    }

    /// Throws ParameterError naming the first out-of-range field.
    void validate() const;
};

struct NeighborTally {
    std::uint32_t n_B = 0;
    std::uint32_t n_F = 0;
    std::uint32_t n_S = 0;
};

struct SpreadingProbabilities {
    double f = 0.0;  // S -> B
    double g = 0.0;  // S -> F
};

struct TransitionRow {
    double to_B = 0.0;
    double to_F = 0.0;
    double to_S = 0.0;
};

/// Probabilities of a susceptible agent becoming believer (f) or fact checker (g).
///
/// Depends on the neighborhood only through the ratio n_B : n_F. With no
/// believer or fact-checker neighbor both are zero; otherwise f + g = beta.
/// Counts are real-valued so the mean-field equations can reuse this.
SpreadingProbabilities spreading_functions(double n_B, double n_F, double alpha, double beta) noexcept;

inline SpreadingProbabilities spreading_functions(const NeighborTally& tally, double alpha,
                                                  double beta) noexcept {
    return spreading_functions(static_cast<double>(tally.n_B), static_cast<double>(tally.n_F), alpha,
                               beta);
}

TransitionRow transition_row(CompartmentState state, const NeighborTally& tally,
                             const ModelParams& params, GroupLabel group) noexcept;

/// Draws one categorical sample from `row` using a single uniform variate.
CompartmentState sample_row(const TransitionRow& row, Rng& rng) noexcept;

inline CompartmentState sample_next(CompartmentState state, const NeighborTally& tally,
                                    const ModelParams& params, GroupLabel group, Rng& rng) noexcept {
    return sample_row(transition_row(state, tally, params, group), rng);
}

}  // namespace hoaxnet
