#include "hoaxnet/engine.hpp"

#include "hoaxnet/errors.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <exception>
#include <sstream>
#include <thread>

namespace hoaxnet {

namespace {

constexpr std::size_t idx(GroupLabel g) noexcept { return static_cast<std::size_t>(g); }

double ratio(double num, double den) noexcept { return den > 0.0 ? num / den : 0.0; }

}  // namespace

// ---- config ----------------------------------------------------------------

SeedGroup parse_seed_group(std::string_view text) {
    if (text == "gullible") return SeedGroup::Gullible;
    if (text == "skeptic") return SeedGroup::Skeptic;
    if (text == "both") return SeedGroup::Both;
    throw ParameterError("seed group must be gullible, skeptic or both, got '" + std::string(text) + "'");
}

std::string_view to_string(SeedGroup g) noexcept {
    switch (g) {
        case SeedGroup::Gullible: return "gullible";
        case SeedGroup::Skeptic: return "skeptic";
        case SeedGroup::Both: return "both";
    }
    return "?";
}

void RunConfig::validate() const {
    if (window == 0) throw ParameterError("window must be positive");
    if (window >= max_steps) {
        throw ParameterError("window (" + std::to_string(window) + ") must be smaller than max_steps (" +
                             std::to_string(max_steps) + ")");
    }
    if (!(tolerance > 0.0)) throw ParameterError("tolerance must be positive");
    if (seed_count == 0 && !(seed_fraction > 0.0 && seed_fraction <= 1.0)) {
        throw ParameterError("seed fraction must lie in (0, 1]");
    }
}

// ---- reports ---------------------------------------------------------------

const std::array<std::string_view, EquilibriumReport::kFieldCount>& EquilibriumReport::field_names() noexcept {
    static constexpr std::array<std::string_view, kFieldCount> names{
        "B_inf_total", "F_inf_total", "S_inf_total", "B_inf_gu",   "B_inf_sk",
        "F_inf_gu",    "F_inf_sk",    "S_inf_gu",    "S_inf_sk",   "rate_SB_gu",
        "rate_SF_gu",  "rate_SB_sk",  "rate_SF_sk",  "steps_run",  "converged"};
    return names;
}

std::array<double, EquilibriumReport::kFieldCount> EquilibriumReport::values() const noexcept {
    return {B_inf_total, F_inf_total, S_inf_total, B_inf_gu,   B_inf_sk,
            F_inf_gu,    F_inf_sk,    S_inf_gu,    S_inf_sk,   rate_SB_gu,
            rate_SF_gu,  rate_SB_sk,  rate_SF_sk,  steps_run,  converged};
}

EquilibriumReport EquilibriumReport::from_values(const std::array<double, kFieldCount>& v) noexcept {
    return {v[0], v[1], v[2], v[3], v[4], v[5], v[6], v[7], v[8], v[9], v[10], v[11], v[12], v[13], v[14]};
}

double EquilibriumReport::field(std::string_view name) const {
    const auto& names = field_names();
    const auto it = std::find(names.begin(), names.end(), name);
    if (it == names.end()) throw ParameterError("unknown report field '" + std::string(name) + "'");
    return values()[static_cast<std::size_t>(it - names.begin())];
}

EquilibriumReport average(const std::vector<EquilibriumReport>& reports) {
    std::array<double, EquilibriumReport::kFieldCount> sum{};
    for (const auto& r : reports) {
        const auto v = r.values();
        for (std::size_t k = 0; k < sum.size(); ++k) sum[k] += v[k];
    }
    if (!reports.empty()) {
        for (auto& x : sum) x /= static_cast<double>(reports.size());
    }
    return EquilibriumReport::from_values(sum);
}

// ---- dynamics on a network ---------------------------------------------------

StateVector initial_state(const SegregatedNetwork& network, const RunConfig& config, Rng& rng) {
    std::vector<NodeId> pool;
    for (std::size_t v = 0; v < network.n_nodes(); ++v) {
        const auto g = network.group(static_cast<NodeId>(v));
        if (config.seed_group == SeedGroup::Both ||
            (config.seed_group == SeedGroup::Gullible) == (g == GroupLabel::Gullible)) {
            pool.push_back(static_cast<NodeId>(v));
        }
    }
    std::size_t count = config.seed_count;
    if (count == 0) {
        count = static_cast<std::size_t>(std::llround(config.seed_fraction * static_cast<double>(pool.size())));
        count = std::max<std::size_t>(count, 1);
    }
    if (count > pool.size()) {
        throw ParameterError("cannot seed " + std::to_string(count) + " believers in a pool of " +
                             std::to_string(pool.size()) + " (" + std::string(to_string(config.seed_group)) +
                             ")");
    }

    StateVector state{std::vector<CompartmentState>(network.n_nodes(), CompartmentState::Susceptible), 0};
    // partial Fisher-Yates
    for (std::size_t k = 0; k < count; ++k) {
        const auto j = k + uniform_below(rng, pool.size() - k);
        std::swap(pool[k], pool[j]);
        state.states[pool[k]] = CompartmentState::Believer;
    }
    return state;
}

PopulationCounts count_states(const SegregatedNetwork& network, const StateVector& state) {
    PopulationCounts counts;
    for (std::size_t v = 0; v < state.states.size(); ++v) {
        auto& c = counts[network.group(static_cast<NodeId>(v))];
        switch (state.states[v]) {
            case CompartmentState::Susceptible: ++c.S; break;
            case CompartmentState::Believer: ++c.B; break;
            case CompartmentState::FactChecker: ++c.F; break;
        }
    }
    return counts;
}

StepStats step(const SegregatedNetwork& network, const ModelParams& params, const StateVector& current,
               StateVector& next, Rng& rng) {
    const std::size_t n = network.n_nodes();
    const auto& cur = current.states;
    next.states.resize(n);
    next.t = current.t + 1;

    // Rows of B and F agents do not depend on the neighborhood.
    std::array<std::array<TransitionRow, 3>, 2> fixed_rows{};
    for (auto g : {GroupLabel::Gullible, GroupLabel::Skeptic}) {
        for (auto s : {CompartmentState::Believer, CompartmentState::FactChecker}) {
            fixed_rows[idx(g)][static_cast<std::size_t>(s)] = transition_row(s, {}, params, g);
        }
    }

    StepStats stats;
    for (std::size_t v = 0; v < n; ++v) {
        const auto node = static_cast<NodeId>(v);
        const GroupLabel g = network.group(node);
        const CompartmentState s = cur[v];
        CompartmentState out;
        if (s == CompartmentState::Susceptible) {
            ++stats.susceptible_before[idx(g)];
            NeighborTally tally;
            for (const NodeId w : network.neighbors(node)) {
                const auto ws = cur[w];
                tally.n_B += ws == CompartmentState::Believer;
                tally.n_F += ws == CompartmentState::FactChecker;
            }
            tally.n_S = static_cast<std::uint32_t>(network.degree(node)) - tally.n_B - tally.n_F;
            if (tally.n_B + tally.n_F == 0) {
                out = CompartmentState::Susceptible;
            } else {
                out = sample_row(transition_row(s, tally, params, g), rng);
                stats.to_believer[idx(g)] += out == CompartmentState::Believer;
                stats.to_fact_checker[idx(g)] += out == CompartmentState::FactChecker;
            }
        } else {
            out = sample_row(fixed_rows[idx(g)][static_cast<std::size_t>(s)], rng);
        }
        next.states[v] = out;
        auto& c = stats.after[g];
        switch (out) {
            case CompartmentState::Susceptible: ++c.S; break;
            case CompartmentState::Believer: ++c.B; break;
            case CompartmentState::FactChecker: ++c.F; break;
        }
    }
    return stats;
}

namespace {

/// Sums accumulated over one averaging block.
struct BlockSums {
    std::array<double, 2> S{}, B{}, F{};  // agent-steps per group
    std::array<double, 2> susceptible{}, to_B{}, to_F{};
    std::size_t steps = 0;

    void add(const StepStats& st) {
        for (auto g : {GroupLabel::Gullible, GroupLabel::Skeptic}) {
            const auto k = idx(g);
            S[k] += static_cast<double>(st.after[g].S);
            B[k] += static_cast<double>(st.after[g].B);
            F[k] += static_cast<double>(st.after[g].F);
            susceptible[k] += static_cast<double>(st.susceptible_before[k]);
            to_B[k] += static_cast<double>(st.to_believer[k]);
            to_F[k] += static_cast<double>(st.to_fact_checker[k]);
        }
        ++steps;
    }

    double believer_density(std::size_t n) const {
        return (B[0] + B[1]) / (static_cast<double>(steps) * static_cast<double>(n));
    }
};

EquilibriumReport report_from_block(const SegregatedNetwork& network, const BlockSums& b) {
    const double steps = static_cast<double>(b.steps);
    const double n_gu = static_cast<double>(network.n_gullible()) * steps;
    const double n_sk = static_cast<double>(network.n_skeptic()) * steps;
    const double n = static_cast<double>(network.n_nodes()) * steps;

    EquilibriumReport r;
    r.B_inf_gu = ratio(b.B[0], n_gu);
    r.B_inf_sk = ratio(b.B[1], n_sk);
    r.F_inf_gu = ratio(b.F[0], n_gu);
    r.F_inf_sk = ratio(b.F[1], n_sk);
    r.S_inf_gu = ratio(b.S[0], n_gu);
    r.S_inf_sk = ratio(b.S[1], n_sk);
    r.B_inf_total = ratio(b.B[0] + b.B[1], n);
    r.F_inf_total = ratio(b.F[0] + b.F[1], n);
    r.S_inf_total = ratio(b.S[0] + b.S[1], n);
    r.rate_SB_gu = ratio(b.to_B[0], b.susceptible[0]);
    r.rate_SF_gu = ratio(b.to_F[0], b.susceptible[0]);
    r.rate_SB_sk = ratio(b.to_B[1], b.susceptible[1]);
    r.rate_SF_sk = ratio(b.to_F[1], b.susceptible[1]);
    return r;
}

EquilibriumReport extinct_report(const SegregatedNetwork& network) {
    EquilibriumReport r;
    r.S_inf_total = 1.0;
    r.S_inf_gu = network.n_gullible() > 0 ? 1.0 : 0.0;
    r.S_inf_sk = network.n_skeptic() > 0 ? 1.0 : 0.0;
    return r;
}

template <typename Observer>
EquilibriumReport simulate(const SegregatedNetwork& network, const ModelParams& params, const RunConfig& config,
                           Observer&& observe) {
    params.validate();
    config.validate();

    Rng rng(config.replicate_seed);
    StateVector current = initial_state(network, config, rng);
    StateVector next;
    PopulationCounts counts = count_states(network, current);
    observe(counts);

    BlockSums block, last_block;
    std::size_t blocks_done = 0;
    double previous_mean = 0.0;

    for (std::size_t t = 0; t < config.max_steps;) {
        const std::size_t infected = counts.gullible.B + counts.gullible.F + counts.skeptic.B + counts.skeptic.F;
        if (infected == 0) {
            // All-susceptible is absorbing.
            auto r = extinct_report(network);
            r.steps_run = static_cast<double>(t);
            r.converged = 1.0;
            return r;
        }

        const StepStats stats = step(network, params, current, next, rng);
        std::swap(current, next);
        counts = stats.after;
        ++t;
        observe(counts);
        block.add(stats);

        if (block.steps == config.window) {
            ++blocks_done;
            const double mean = block.believer_density(network.n_nodes());
            last_block = block;
            block = {};
            // Block 1 is burn-in; compare each later block with its predecessor.
            if (blocks_done >= 3 && std::abs(mean - previous_mean) < config.tolerance) {
                auto r = report_from_block(network, last_block);
                r.steps_run = static_cast<double>(t);
                r.converged = 1.0;
                return r;
            }
            previous_mean = mean;
        }
    }

    auto r = report_from_block(network, last_block);
    r.steps_run = static_cast<double>(config.max_steps);
    r.converged = 0.0;
    return r;
}

}  // namespace

EquilibriumReport run_to_equilibrium(const SegregatedNetwork& network, const ModelParams& params,
                                     const RunConfig& config) {
    return simulate(network, params, config, [](const PopulationCounts&) {});
}

std::vector<PopulationCounts> trajectory(const SegregatedNetwork& network, const ModelParams& params,
                                         const RunConfig& config) {
    std::vector<PopulationCounts> series;
    simulate(network, params, config, [&](const PopulationCounts& c) { series.push_back(c); });
    return series;
}

// ---- sweeps ----------------------------------------------------------------

std::vector<double> AxisSpec::values() const {
    if (steps == 1) return {lo};
    std::vector<double> out(steps);
    for (std::size_t k = 0; k < steps; ++k) {
        out[k] = lo + (hi - lo) * static_cast<double>(k) / static_cast<double>(steps - 1);
    }
    out.back() = hi;
    return out;
}

std::string AxisSpec::to_string() const {
    std::ostringstream os;
    os << name << ':' << lo << ':' << hi << ':' << steps;
    return os.str();
}

namespace {

constexpr std::array<std::string_view, 6> kAxisNames{"s", "gamma", "alpha_gu", "alpha_sk", "pf", "beta"};

std::string_view canonical_axis(std::string_view name) noexcept { return name == "p_f" ? "pf" : name; }

}  // namespace

bool is_axis_name(std::string_view name) noexcept {
    name = canonical_axis(name);
    return std::find(kAxisNames.begin(), kAxisNames.end(), name) != kAxisNames.end();
}

AxisSpec parse_axis(std::string_view text) {
    std::vector<std::string_view> parts;
    std::size_t start = 0;
    for (;;) {
        const auto colon = text.find(':', start);
        parts.push_back(text.substr(start, colon - start));
        if (colon == std::string_view::npos) break;
        start = colon + 1;
    }
    auto bad = [&](const std::string& why) {
        return ParameterError("invalid axis '" + std::string(text) + "': " + why);
    };
    if (parts.size() != 4) throw bad("expected name:lo:hi:steps");

    AxisSpec axis;
    axis.name = std::string(canonical_axis(parts[0]));
    if (!is_axis_name(axis.name)) throw bad("unknown parameter '" + std::string(parts[0]) + "'");
    auto number = [&](std::string_view s, auto& out) {
        const auto* end = s.data() + s.size();
        auto [ptr, ec] = std::from_chars(s.data(), end, out);
        if (ec != std::errc{} || ptr != end || s.empty()) throw bad("cannot parse '" + std::string(s) + "'");
    };
    number(parts[1], axis.lo);
    number(parts[2], axis.hi);
    number(parts[3], axis.steps);
    if (axis.steps == 0) throw bad("steps must be positive");
    if (axis.steps == 1 && axis.hi != axis.lo) throw bad("a single step requires lo == hi");
    return axis;
}

void apply_axis(std::string_view name, double value, ModelParams& params, NetworkParams& network) {
    name = canonical_axis(name);
    if (name == "s") network.s = value;
    else if (name == "gamma") network.gamma = value;
    else if (name == "alpha_gu") params.alpha_gu = value;
    else if (name == "alpha_sk") params.alpha_sk = value;
    else if (name == "pf") params.p_forget = value;
    else if (name == "beta") params.beta = value;
    else throw ParameterError("unknown sweep parameter '" + std::string(name) + "'");
}

void SweepSpec::validate() const {
    if (!is_axis_name(axis1.name) || !is_axis_name(axis2.name)) throw ParameterError("unknown axis parameter");
    if (axis1.steps == 0 || axis2.steps == 0) throw ParameterError("axis steps must be positive");
    if (canonical_axis(axis1.name) == canonical_axis(axis2.name)) {
        throw ParameterError("sweep axes must differ (both are '" + axis1.name + "')");
    }
    if (replicates == 0) throw ParameterError("replicates must be at least 1");
    run.validate();
}

CellSetup cell_setup(const SweepSpec& spec, std::size_t i, std::size_t j) {
    CellSetup cell{spec.params, spec.network};
    const double v1 = spec.axis1.values()[i];
    const double v2 = spec.axis2.values()[j];
    apply_axis(spec.axis1.name, v1, cell.params, cell.network);
    apply_axis(spec.axis2.name, v2, cell.params, cell.network);
    try {
        cell.params.validate();
        validate(cell.network);
    } catch (const Error& e) {
        std::ostringstream os;
        os << "sweep cell (" << i << ", " << j << ") [" << spec.axis1.name << "=" << v1 << ", "
           << spec.axis2.name << "=" << v2 << "]: " << e.what();
        throw ParameterError(os.str());
    }
    return cell;
}

ReplicateSeeds replicate_seeds(std::uint64_t master_seed, std::size_t cell, std::size_t replicate) noexcept {
    return {derive_seed(master_seed, cell, replicate, 1), derive_seed(master_seed, cell, replicate, 2)};
}

void parallel_for(std::size_t n, unsigned threads, const std::function<void(std::size_t)>& fn) {
    if (threads <= 1 || n <= 1) {
        for (std::size_t k = 0; k < n; ++k) fn(k);
        return;
    }
    std::vector<std::exception_ptr> errors(n);
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t k; (k = next.fetch_add(1)) < n;) {
            try {
                fn(k);
            } catch (...) {
                errors[k] = std::current_exception();
            }
        }
    };
    std::vector<std::jthread> pool;
    const auto count = std::min<std::size_t>(threads, n);
    for (std::size_t t = 0; t < count; ++t) pool.emplace_back(worker);
    pool.clear();
    for (auto& e : errors) {
        if (e) std::rethrow_exception(e);
    }
}

std::vector<std::vector<EquilibriumReport>> sweep_replicates(const SweepSpec& spec, unsigned threads) {
    spec.validate();
    const std::size_t n1 = spec.axis1.steps, n2 = spec.axis2.steps;
    std::vector<CellSetup> cells;
    cells.reserve(n1 * n2);
    for (std::size_t i = 0; i < n1; ++i) {
        for (std::size_t j = 0; j < n2; ++j) cells.push_back(cell_setup(spec, i, j));
    }

    std::vector<std::vector<EquilibriumReport>> results(cells.size(),
                                                        std::vector<EquilibriumReport>(spec.replicates));
    parallel_for(cells.size() * spec.replicates, threads, [&](std::size_t task) {
        const std::size_t cell = task / spec.replicates;
        const std::size_t rep = task % spec.replicates;
        const auto seeds = replicate_seeds(spec.master_seed, cell, rep);
        const auto network = generate(cells[cell].network, seeds.network);
        RunConfig run = spec.run;
        run.replicate_seed = seeds.dynamics;
        results[cell][rep] = run_to_equilibrium(network, cells[cell].params, run);
    });
    return results;
}

SweepResult sweep(const SweepSpec& spec, unsigned threads) {
    const auto per_replicate = sweep_replicates(spec, threads);
    SweepResult result{spec.axis1, spec.axis2, {}};
    const auto v1 = spec.axis1.values();
    const auto v2 = spec.axis2.values();
    result.cells.reserve(per_replicate.size());
    for (std::size_t c = 0; c < per_replicate.size(); ++c) {
        result.cells.push_back({v1[c / v2.size()], v2[c % v2.size()], average(per_replicate[c])});
    }
    return result;
}

}  // namespace hoaxnet
