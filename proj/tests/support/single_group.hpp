#pragma once

#include <cmath>

namespace hoaxnet::testing {

/// Homogeneous one-group mean-field iteration, written independently of the
/// library for cross-checking the two-group solver.
struct SingleGroupFixedPoint {
    double S, B, F;
    bool converged;
};

inline SingleGroupFixedPoint solve_single_group(double beta, double alpha, double pf, double pv, double k,
                                                double B0 = 0.01, double tol = 1e-12,
                                                long max_iter = 2000000) {
    double S = 1.0 - B0, B = B0, F = 0.0;
    for (long it = 0; it < max_iter; ++it) {
        const double nb = k * B, nf = k * F;
        const double den = nb * (1 + alpha) + nf * (1 - alpha);
        const double f = den > 0 ? beta * nb * (1 + alpha) / den : 0.0;
        const double g = den > 0 ? beta * nf * (1 - alpha) / den : 0.0;
        const double S2 = pf * (B + F) + (1 - f - g) * S;
        const double B2 = f * S + (1 - pf) * (1 - pv) * B;
        const double F2 = g * S + pv * (1 - pf) * B + (1 - pf) * F;
        const double d = std::fmax(std::fabs(S2 - S), std::fmax(std::fabs(B2 - B), std::fabs(F2 - F)));
        S = S2;
        B = B2;
        F = F2;
        if (d < tol) return {S, B, F, true};
    }
    return {S, B, F, false};
}

}  // namespace hoaxnet::testing
