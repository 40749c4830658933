#include "hoaxnet/cli.hpp"

#include "hoaxnet/engine.hpp"
#include "hoaxnet/errors.hpp"
#include "hoaxnet/graph.hpp"
#include "hoaxnet/meanfield.hpp"
#include "hoaxnet/output.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <fstream>
#include <optional>
#include <sstream>
#include <thread>

namespace hoaxnet {

namespace {

/// Raised while turning flags into library configs; maps to the usage exit code.
class UsageError : public Error {
public:
    using Error::Error;
};

const CLI::Validator kProbability = CLI::Range(0.0, 1.0).name("PROB");
CLI::Validator half_open_range(double lo, double hi, bool include_lo, const std::string& what) {
    return CLI::Validator(
        [=](std::string& v) -> std::string {
            double x = 0.0;
            if (!CLI::detail::lexical_cast(v, x)) return "not a number: " + v;
            const bool ok = (include_lo ? x >= lo : x > lo) && x < hi;
            return ok ? "" : what;
        },
        what);
}

const CLI::Validator kOpenUnit = half_open_range(0.0, 1.0, false, "value must lie in (0, 1)");
const CLI::Validator kSegregation = half_open_range(0.5, 1.0, true, "s must lie in [0.5, 1)");

struct NetworkFlags {
    std::size_t n = 1000;
    double gamma = 0.5;
    std::size_t edges = 5000;
    double s = 0.8;

    void add(CLI::App& cmd) {
        cmd.add_option("--n", n, "Number of agents")->check(CLI::PositiveNumber);
        cmd.add_option("--gamma", gamma, "Gullible share of the population")->check(kOpenUnit);
        cmd.add_option("--edges", edges, "Number of edges M")->check(CLI::PositiveNumber);
        cmd.add_option("--s", s, "Fraction of intra-group edges")->check(kSegregation);
    }
    NetworkParams params() const { return {n, gamma, edges, s}; }
};

struct ModelFlags {
    double beta = 0.5;
    double alpha_gu = 0.0;
    double alpha_sk = 0.0;
    double pf = 0.0;
    double pv = 0.0;
    bool simplified = false;
    CLI::Option* pv_opt = nullptr;
    CLI::Option* simplified_opt = nullptr;

    /// Swept parameters may be omitted, so sweeps pass required = false.
    void add(CLI::App& cmd, bool required) {
        cmd.add_option("--beta", beta, "Spreading rate")->check(kProbability);
        cmd.add_option("--alpha-gu", alpha_gu, "Credibility among gullible agents")->check(kProbability)->required(required);
        cmd.add_option("--alpha-sk", alpha_sk, "Credibility among skeptic agents")->check(kProbability)->required(required);
        cmd.add_option("--pf", pf, "Forgetting probability")->check(kProbability)->required(required);
        pv_opt = cmd.add_option("--pv", pv, "Verification probability")->check(kProbability);
        simplified_opt = cmd.add_flag("--simplified", simplified, "Use p_v = 1 - alpha of each group");
        pv_opt->excludes(simplified_opt);
    }
    ModelParams params() const {
        if (pv_opt->count() == 0 && !simplified) throw UsageError("either --pv or --simplified is required");
        ModelParams p{beta, alpha_gu, alpha_sk, pf, pv, simplified};
        p.validate();
        return p;
    }
};

struct RunFlags {
    double seed_fraction = 0.01;
    std::size_t seed_count = 0;
    std::string seed_group = "both";
    std::size_t max_steps = 10000;
    std::size_t window = 200;
    double tolerance = 1e-3;

    void add(CLI::App& cmd) {
        cmd.add_option("--seed-fraction", seed_fraction, "Initial believers as a share of the seed group");
        cmd.add_option("--seed-count", seed_count, "Initial believers as a count (overrides --seed-fraction)");
        cmd.add_option("--seed-group", seed_group, "Group holding the initial believers")
            ->check(CLI::IsMember({"gullible", "skeptic", "both"}));
        cmd.add_option("--max-steps", max_steps, "Step budget per run");
        cmd.add_option("--window", window, "Averaging block length in steps");
        cmd.add_option("--tolerance", tolerance, "Convergence threshold on believer density");
    }
    RunConfig config() const {
        RunConfig c{seed_fraction, seed_count, parse_seed_group(seed_group), max_steps, window, tolerance, 0};
        c.validate();
        return c;
    }
};

/// Options recorded in output headers; excludes ones that do not affect results.
std::vector<std::string> header_lines(const CLI::App& cmd, const std::string& seed_text) {
    std::ostringstream flags;
    flags << "flags:";
    for (const CLI::Option* opt : cmd.get_options()) {
        const std::string name = opt->get_name();
        if (name == "--help" || name == "--config" || name == "--threads") continue;
        std::string value;
        if (opt->get_expected_min() == 0) {
            value = opt->count() > 0 ? "true" : "false";
        } else if (opt->count() > 0) {
            value = opt->results().back();
        } else {
            value = opt->get_default_str();
            if (value.empty()) continue;
        }
        flags << ' ' << name << '=' << value;
    }
    return {std::string("hoaxnet ") + kVersion, "command: " + cmd.get_name(), flags.str(), "seed: " + seed_text};
}

/// Expands `--config FILE` into flags placed right after the subcommand name,
/// so flags given on the command line take precedence.
std::vector<std::string> expand_config(std::vector<std::string> args) {
    for (std::size_t k = 0; k < args.size(); ++k) {
        std::string path;
        std::size_t consumed = 0;
        if (args[k] == "--config" && k + 1 < args.size()) {
            path = args[k + 1];
            consumed = 2;
        } else if (args[k].rfind("--config=", 0) == 0) {
            path = args[k].substr(9);
            consumed = 1;
        } else {
            continue;
        }
        std::ifstream in(path);
        if (!in) throw UsageError("cannot read config file '" + path + "'");
        std::vector<std::string> extra;
        std::string line;
        std::size_t line_no = 0;
        while (std::getline(in, line)) {
            ++line_no;
            const auto trim = [](std::string s) {
                const auto b = s.find_first_not_of(" \t\r");
                const auto e = s.find_last_not_of(" \t\r");
                return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
            };
            line = trim(line);
            if (line.empty() || line[0] == '#') continue;
            const auto eq = line.find('=');
            if (eq == std::string::npos) {
                throw UsageError(path + ":" + std::to_string(line_no) + ": expected key = value");
            }
            std::string key = trim(line.substr(0, eq));
            const std::string value = trim(line.substr(eq + 1));
            if (key.rfind("--", 0) != 0) key = "--" + key;
            if (value == "true") {
                extra.push_back(key);
            } else if (value != "false") {
                extra.push_back(key);
                extra.push_back(value);
            }
        }
        args.erase(args.begin() + static_cast<std::ptrdiff_t>(k),
                   args.begin() + static_cast<std::ptrdiff_t>(k + consumed));
        const std::size_t insert_at = args.empty() ? 0 : 1;
        args.insert(args.begin() + static_cast<std::ptrdiff_t>(insert_at), extra.begin(), extra.end());
        return args;
    }
    return args;
}

void emit(const std::optional<std::string>& path, std::ostream& fallback,
          const std::function<void(std::ostream&)>& body) {
    if (path && !path->empty()) {
        write_file(*path, body);
    } else {
        body(fallback);
    }
}

}  // namespace

int run_cli(std::vector<std::string> args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Hoax and fact-check spreading on segregated two-group networks", "hoaxnet"};
    app.option_defaults()->always_capture_default()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
    app.require_subcommand(1);
    app.set_version_flag("--version", kVersion);

    std::string config_path;
    auto add_common = [&](CLI::App* cmd) {
        cmd->add_option("--config", config_path, "Key-value file with one flag per line");
    };

    // generate
    auto* gen = app.add_subcommand("generate", "Generate a segregated network");
    NetworkFlags gen_net;
    std::uint64_t gen_seed = 1;
    std::string gen_out;
    gen_net.add(*gen);
    gen->add_option("--seed", gen_seed, "RNG seed");
    gen->add_option("--out", gen_out, "Output prefix")->required();
    add_common(gen);

    // run
    auto* run = app.add_subcommand("run", "Run the dynamics to equilibrium");
    NetworkFlags run_net;
    ModelFlags run_model;
    RunFlags run_flags;
    std::string run_network, run_traj, run_out;
    std::uint64_t run_seed = 1;
    run_net.add(*run);
    run_model.add(*run, true);
    run_flags.add(*run);
    auto* network_opt = run->add_option("--network", run_network, "Prefix of saved network files");
    for (const char* name : {"--n", "--gamma", "--edges", "--s"}) network_opt->excludes(run->get_option(name));
    run->add_option("--seed", run_seed, "Master seed");
    run->add_option("--trajectory", run_traj, "Write per-step counts to this CSV");
    run->add_option("--out", run_out, "Report CSV (default: stdout)");
    add_common(run);

    // sweep
    auto* sw = app.add_subcommand("sweep", "Two-parameter phase diagram");
    NetworkFlags sw_net;
    ModelFlags sw_model;
    RunFlags sw_flags;
    std::string sw_mode = "abm", sw_axis1, sw_axis2, sw_out, sw_heatmap, sw_field = "B_inf_total";
    std::size_t sw_replicates = 50;
    std::uint64_t sw_seed = 1;
    unsigned sw_threads = std::max(1u, std::thread::hardware_concurrency());
    double mf_degree = 0.0, mf_tolerance = 1e-10;
    std::size_t mf_iterations = 100000;
    sw_net.add(*sw);
    sw_model.add(*sw, false);
    sw_flags.add(*sw);
    sw->add_option("--mode", sw_mode, "abm or meanfield")->check(CLI::IsMember({"abm", "meanfield"}));
    sw->add_option("--axis1", sw_axis1, "name:lo:hi:steps")->required();
    sw->add_option("--axis2", sw_axis2, "name:lo:hi:steps")->required();
    sw->add_option("--replicates", sw_replicates, "Runs per cell")->check(CLI::PositiveNumber);
    sw->add_option("--master-seed,--seed", sw_seed, "Master seed");
    sw->add_option("--threads", sw_threads, "Worker threads")->check(CLI::PositiveNumber);
    sw->add_option("--mean-degree", mf_degree, "Mean degree for meanfield mode (default 2M/N)");
    sw->add_option("--mf-tolerance", mf_tolerance, "Fixed-point tolerance");
    sw->add_option("--mf-max-iterations", mf_iterations, "Fixed-point iteration budget");
    sw->add_option("--out", sw_out, "Sweep CSV (default: stdout)");
    sw->add_option("--heatmap", sw_heatmap, "Also write a 16-bit PGM of --field");
    sw->add_option("--field", sw_field, "Report field for the heatmap");
    add_common(sw);

    // threshold
    auto* th = app.add_subcommand("threshold", "Removal threshold curve of the simplified model");
    std::size_t th_steps = 101;
    std::string th_out;
    th->add_option("--alpha-steps", th_steps, "Number of alpha samples on [0, 1]")->check(CLI::Range(2, 1000000));
    th->add_option("--out", th_out, "Output CSV (default: stdout)");
    add_common(th);

    std::function<void()> action;
    try {
        args = expand_config(std::move(args));
        std::reverse(args.begin(), args.end());
        app.parse(args);

        if (gen->parsed()) {
            const auto params = gen_net.params();
            validate(params);
            action = [&, params] {
                const auto network = generate(params, gen_seed);
                const auto header = header_lines(*gen, std::to_string(gen_seed));
                save(network, gen_out, header);
            };
        } else if (run->parsed()) {
            const auto model = run_model.params();
            auto config = run_flags.config();
            const auto net_params = run_net.params();
            if (run_network.empty()) validate(net_params);
            const auto seeds = replicate_seeds(run_seed, 0, 0);
            config.replicate_seed = seeds.dynamics;
            action = [&, model, config, net_params, seeds] {
                const auto network = run_network.empty() ? generate(net_params, seeds.network) : load(run_network);
                const auto header = header_lines(*run, std::to_string(run_seed));
                const auto report = run_to_equilibrium(network, model, config);
                emit(run_out, out, [&](std::ostream& os) {
                    write_comments(os, header);
                    write_report_csv(os, report);
                });
                if (!run_traj.empty()) {
                    const auto series = trajectory(network, model, config);
                    write_file(run_traj, [&](std::ostream& os) {
                        write_comments(os, header);
                        write_trajectory_csv(os, series);
                    });
                }
            };
        } else if (sw->parsed()) {
            const auto model = sw_model.params();
            auto axis1 = parse_axis(sw_axis1);
            auto axis2 = parse_axis(sw_axis2);
            if (axis1.name == axis2.name) throw UsageError("--axis1 and --axis2 must name different parameters");
            {
                const auto& names = EquilibriumReport::field_names();
                if (std::find(names.begin(), names.end(), sw_field) == names.end()) {
                    throw UsageError("unknown --field '" + sw_field + "'");
                }
            }
            if (sw_mode == "abm") {
                SweepSpec spec{axis1, axis2, sw_replicates, model, sw_net.params(), sw_flags.config(), sw_seed};
                spec.validate();
                action = [&, spec] {
                    const auto result = sweep(spec, sw_threads);
                    const auto header = header_lines(*sw, std::to_string(sw_seed));
                    emit(sw_out, out, [&](std::ostream& os) {
                        write_comments(os, header);
                        write_sweep_csv(os, result);
                    });
                    if (!sw_heatmap.empty()) {
                        write_file(sw_heatmap, [&](std::ostream& os) { write_heatmap_pgm(os, result, sw_field, header); });
                    }
                };
            } else {
                MeanFieldSweepSpec spec{axis1, axis2, model, {}};
                const auto net = sw_net.params();
                spec.config.mean_degree = mf_degree > 0.0 ? mf_degree
                                                          : 2.0 * static_cast<double>(net.n_edges) /
                                                                static_cast<double>(net.n_nodes);
                spec.config.s = net.s;
                spec.config.gamma = net.gamma;
                spec.config.tolerance = mf_tolerance;
                spec.config.max_iterations = mf_iterations;
                spec.config.validate();
                spec.validate();
                action = [&, spec] {
                    const auto diagram = mf_phase_diagram(spec, sw_threads);
                    for (std::size_t c = 0; c < diagram.bistable.size(); ++c) {
                        if (diagram.bistable[c]) {
                            const auto& cell = diagram.result.cells[c];
                            err << "warning: two distinct mean-field fixed points at " << spec.axis1.name << '='
                                << cell.value1 << ", " << spec.axis2.name << '=' << cell.value2 << '\n';
                        }
                    }
                    const auto header = header_lines(*sw, std::to_string(sw_seed));
                    emit(sw_out, out, [&](std::ostream& os) {
                        write_comments(os, header);
                        write_sweep_csv(os, diagram.result);
                    });
                    if (!sw_heatmap.empty()) {
                        write_file(sw_heatmap,
                                   [&](std::ostream& os) { write_heatmap_pgm(os, diagram.result, sw_field, header); });
                    }
                };
            }
        } else if (th->parsed()) {
            action = [&] {
                const auto header = header_lines(*th, "none");
                emit(th_out, out, [&](std::ostream& os) {
                    write_comments(os, header);
                    write_threshold_csv(os, th_steps);
                });
            };
        }
    } catch (const CLI::ParseError& e) {
        return app.exit(e, out, err) == 0 ? kExitOk : kExitUsage;
    } catch (const Error& e) {
        err << "usage error: " << e.what() << '\n';
        return kExitUsage;
    }

    try {
        action();
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kExitFailure;
    }
    return kExitOk;
}

}  // namespace hoaxnet
