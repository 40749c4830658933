#include "hoaxnet/dynamics.hpp"

#include "hoaxnet/errors.hpp"

#include <algorithm>
#include <string>

namespace hoaxnet {

std::string_view to_string(CompartmentState s) noexcept {
    switch (s) {
        case CompartmentState::Susceptible: return "S";
        case CompartmentState::Believer: return "B";
        case CompartmentState::FactChecker: return "F";
    }
    return "?";
}

void ModelParams::validate() const {
    auto check = [](const char* name, double v) {
        if (!(v >= 0.0 && v <= 1.0)) {
            throw ParameterError(std::string(name) + " must lie in [0, 1], got " + std::to_string(v));
        }
    };
    check("beta", beta);
    check("alpha_gu", alpha_gu);
    check("alpha_sk", alpha_sk);
    check("p_forget", p_forget);
    if (!simplified) check("p_verify", p_verify);
}

SpreadingProbabilities spreading_functions(double n_B, double n_F, double alpha, double beta) noexcept {
    const double hoax = n_B * (1.0 + alpha);
    const double check = n_F * (1.0 - alpha);
    const double total = hoax + check;
    if (!(total > 0.0)) {
        // alpha = 1 with only fact-checker neighbors also lands here.
        if (n_F > 0.0 && n_B == 0.0) return {0.0, beta};
        return {};
    }
    const double f = std::min(beta * hoax / total, beta);
    return {f, beta - f};
}

TransitionRow transition_row(CompartmentState state, const NeighborTally& tally,
                             const ModelParams& params, GroupLabel group) noexcept {
    const double pf = params.p_forget;
    switch (state) {
        case CompartmentState::Susceptible: {
            const auto [f, g] = spreading_functions(tally, params.alpha(group), params.beta);
            return {f, g, 1.0 - f - g};
        }
        case CompartmentState::Believer: {
            const double pv = params.verify(group);
            return {(1.0 - pv) * (1.0 - pf), pv * (1.0 - pf), pf};
        }
        case CompartmentState::FactChecker:
            return {0.0, 1.0 - pf, pf};
    }
    return {0.0, 0.0, 1.0};
}

CompartmentState sample_row(const TransitionRow& row, Rng& rng) noexcept {
    const double u = uniform01(rng);
    if (u < row.to_B) return CompartmentState::Believer;
    if (u < row.to_B + row.to_F) return CompartmentState::FactChecker;
    return CompartmentState::Susceptible;
}

}  // namespace hoaxnet
