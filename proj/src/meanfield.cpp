#include "hoaxnet/meanfield.hpp"

#include "hoaxnet/errors.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace hoaxnet {

MeanFieldState MeanFieldState::seeded(double believers) noexcept {
    return {1.0 - believers, believers, 0.0, 1.0 - believers, believers, 0.0};
}

MeanFieldState MeanFieldState::high_infection() noexcept { return {0.01, 0.98, 0.01, 0.01, 0.98, 0.01}; }

double MeanFieldState::max_abs_diff(const MeanFieldState& o) const noexcept {
    return std::max({std::abs(pS_gu - o.pS_gu), std::abs(pB_gu - o.pB_gu), std::abs(pF_gu - o.pF_gu),
                     std::abs(pS_sk - o.pS_sk), std::abs(pB_sk - o.pB_sk), std::abs(pF_sk - o.pF_sk)});
}

bool MeanFieldState::valid(double tolerance) const noexcept {
    for (double p : {pS_gu, pB_gu, pF_gu, pS_sk, pB_sk, pF_sk}) {
        if (!(p >= -tolerance && p <= 1.0 + tolerance)) return false;
    }
    return std::abs(pS_gu + pB_gu + pF_gu - 1.0) <= tolerance && std::abs(pS_sk + pB_sk + pF_sk - 1.0) <= tolerance;
}

void MeanFieldConfig::validate() const {
    if (!(mean_degree > 0.0)) throw ParameterError("mean_degree must be positive");
    if (!(s >= 0.0 && s <= 1.0)) throw ParameterError("s must lie in [0, 1]");
    if (!(gamma >= 0.0 && gamma <= 1.0)) throw ParameterError("gamma must lie in [0, 1]");
    if (!(tolerance > 0.0)) throw ParameterError("tolerance must be positive");
    if (!initial_state.valid()) throw ParameterError("initial mean-field state is not a probability vector");
}

namespace {

struct GroupTriple {
    double S, B, F;
};

GroupTriple update_group(const GroupTriple& p, double n_B, double n_F, const ModelParams& params, GroupLabel g) {
    const auto [f, gg] = spreading_functions(n_B, n_F, params.alpha(g), params.beta);
    const double pf = params.p_forget;
    const double pv = params.verify(g);
    return {pf * (p.B + p.F) + (1.0 - f - gg) * p.S,
            f * p.S + (1.0 - pf) * (1.0 - pv) * p.B,
            gg * p.S + pv * (1.0 - pf) * p.B + (1.0 - pf) * p.F};
}

struct Exposure {
    double B_gu, F_gu, B_sk, F_sk;
};

Exposure exposure(const MeanFieldState& st, const MeanFieldConfig& c) {
    const double k = c.mean_degree;
    const double in_gu = c.s * c.gamma * k;
    const double out_gu = (1.0 - c.s) * (1.0 - c.gamma) * k;
    const double in_sk = c.s * (1.0 - c.gamma) * k;
    const double out_sk = (1.0 - c.s) * c.gamma * k;
    return {in_gu * st.pB_gu + out_gu * st.pB_sk, in_gu * st.pF_gu + out_gu * st.pF_sk,
            in_sk * st.pB_sk + out_sk * st.pB_gu, in_sk * st.pF_sk + out_sk * st.pF_gu};
}

}  // namespace

MeanFieldState mf_step(const MeanFieldState& st, const ModelParams& params, const MeanFieldConfig& config) {
    const auto e = exposure(st, config);
    const auto gu = update_group({st.pS_gu, st.pB_gu, st.pF_gu}, e.B_gu, e.F_gu, params, GroupLabel::Gullible);
    const auto sk = update_group({st.pS_sk, st.pB_sk, st.pF_sk}, e.B_sk, e.F_sk, params, GroupLabel::Skeptic);
    return {gu.S, gu.B, gu.F, sk.S, sk.B, sk.F};
}

MeanFieldSolution mf_solve(const ModelParams& params, const MeanFieldConfig& config) {
    params.validate();
    config.validate();
    MeanFieldSolution sol{config.initial_state, 0, false};
    while (sol.iterations < config.max_iterations) {
        const auto next = mf_step(sol.state, params, config);
        ++sol.iterations;
        const double change = next.max_abs_diff(sol.state);
        sol.state = next;
        if (change < config.tolerance) {
            sol.converged = true;
            break;
        }
    }
    return sol;
}

MeanFieldFixedPoints mf_solve_both(const ModelParams& params, const MeanFieldConfig& config) {
    MeanFieldFixedPoints fp;
    fp.from_initial = mf_solve(params, config);
    MeanFieldConfig high = config;
    high.initial_state = MeanFieldState::high_infection();
    fp.from_high = mf_solve(params, high);
    // Differences below the convergence noise floor are not distinct fixed points.
    const double separation = std::max(config.tolerance, 1e-6);
    fp.bistable = fp.from_initial.state.max_abs_diff(fp.from_high.state) > separation;
    return fp;
}

double critical_pf(double alpha) {
    if (!(alpha >= 0.0 && alpha <= 1.0)) {
        throw ParameterError("alpha must lie in [0, 1], got " + std::to_string(alpha));
    }
    const double d = 1.0 - alpha;
    return d * d / (1.0 + alpha * alpha);
}

EquilibriumReport to_report(const MeanFieldSolution& sol, const ModelParams& params, const MeanFieldConfig& config) {
    const auto& st = sol.state;
    const double gamma = config.gamma;
    const auto e = exposure(st, config);
    const auto gu = spreading_functions(e.B_gu, e.F_gu, params.alpha_gu, params.beta);
    const auto sk = spreading_functions(e.B_sk, e.F_sk, params.alpha_sk, params.beta);

    EquilibriumReport r;
    r.B_inf_gu = st.pB_gu;
    r.B_inf_sk = st.pB_sk;
    r.F_inf_gu = st.pF_gu;
    r.F_inf_sk = st.pF_sk;
    r.S_inf_gu = st.pS_gu;
    r.S_inf_sk = st.pS_sk;
    r.B_inf_total = gamma * st.pB_gu + (1.0 - gamma) * st.pB_sk;
    r.F_inf_total = gamma * st.pF_gu + (1.0 - gamma) * st.pF_sk;
    r.S_inf_total = gamma * st.pS_gu + (1.0 - gamma) * st.pS_sk;
    r.rate_SB_gu = gu.f;
    r.rate_SF_gu = gu.g;
    r.rate_SB_sk = sk.f;
    r.rate_SF_sk = sk.g;
    r.steps_run = static_cast<double>(sol.iterations);
    r.converged = sol.converged ? 1.0 : 0.0;
    return r;
}

namespace {

void apply_mf_axis(std::string_view name, double value, ModelParams& params, MeanFieldConfig& config) {
    if (name == "s") {
        config.s = value;
    } else if (name == "gamma") {
        config.gamma = value;
    } else {
        NetworkParams unused;
        apply_axis(name, value, params, unused);
    }
}

}  // namespace

void MeanFieldSweepSpec::validate() const {
    if (!is_axis_name(axis1.name) || !is_axis_name(axis2.name)) throw ParameterError("unknown axis parameter");
    if (axis1.steps == 0 || axis2.steps == 0) throw ParameterError("axis steps must be positive");
    if (axis1.name == axis2.name) throw ParameterError("sweep axes must differ (both are '" + axis1.name + "')");
}

MeanFieldPhaseDiagram mf_phase_diagram(const MeanFieldSweepSpec& spec, unsigned threads) {
    spec.validate();
    const auto v1 = spec.axis1.values();
    const auto v2 = spec.axis2.values();
    const std::size_t cells = v1.size() * v2.size();

    struct Setup {
        ModelParams params;
        MeanFieldConfig config;
    };
    std::vector<Setup> setups;
    setups.reserve(cells);
    for (std::size_t i = 0; i < v1.size(); ++i) {
        for (std::size_t j = 0; j < v2.size(); ++j) {
            Setup s{spec.params, spec.config};
            apply_mf_axis(spec.axis1.name, v1[i], s.params, s.config);
            apply_mf_axis(spec.axis2.name, v2[j], s.params, s.config);
            try {
                s.params.validate();
                s.config.validate();
            } catch (const Error& e) {
                std::ostringstream os;
                os << "mean-field cell (" << i << ", " << j << ") [" << spec.axis1.name << "=" << v1[i] << ", "
                   << spec.axis2.name << "=" << v2[j] << "]: " << e.what();
                throw ParameterError(os.str());
            }
            setups.push_back(s);
        }
    }

    MeanFieldPhaseDiagram out{{spec.axis1, spec.axis2, std::vector<SweepCell>(cells)}, std::vector<bool>(cells)};
    std::vector<char> bistable(cells, 0);
    parallel_for(cells, threads, [&](std::size_t c) {
        const auto& s = setups[c];
        const auto fp = mf_solve_both(s.params, s.config);
        out.result.cells[c] = {v1[c / v2.size()], v2[c % v2.size()], to_report(fp.from_initial, s.params, s.config)};
        bistable[c] = fp.bistable;
    });
    std::copy(bistable.begin(), bistable.end(), out.bistable.begin());
    return out;
}

}  // namespace hoaxnet
