#include "hoaxnet/graph.hpp"

#include "hoaxnet/errors.hpp"
#include "hoaxnet/rng.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <optional>
#include <unordered_set>

namespace hoaxnet {

std::string_view to_string(GroupLabel g) noexcept {
    return g == GroupLabel::Gullible ? "gullible" : "skeptic";
}

std::size_t gullible_count(std::size_t n_nodes, double gamma) {
    return static_cast<std::size_t>(std::floor(gamma * static_cast<double>(n_nodes) + 0.5));
}

double SegregatedNetwork::gamma() const noexcept {
    return groups_.empty() ? 0.0
                           : static_cast<double>(n_gullible_) / static_cast<double>(groups_.size());
}

double SegregatedNetwork::realized_intra_fraction() const noexcept {
    if (edges_.empty()) return 0.0;
    std::size_t intra = 0;
    for (const auto& e : edges_) intra += groups_[e.u] == groups_[e.v];
    return static_cast<double>(intra) / static_cast<double>(edges_.size());
}

SegregatedNetwork SegregatedNetwork::from_edges(std::vector<GroupLabel> groups,
                                                std::vector<Edge> edges, double s_target) {
    const std::size_t n = groups.size();
    if (n == 0) throw InvariantError("network has no nodes");
    if (edges.empty()) throw InvariantError("network has no edges (M must be positive)");

    for (auto& e : edges) {
        if (e.u >= n || e.v >= n) {
            throw InvariantError("edge (" + std::to_string(e.u) + "," + std::to_string(e.v) +
                                 ") references unknown node id (N=" + std::to_string(n) + ")");
        }
        if (e.u == e.v) throw InvariantError("self-loop on node " + std::to_string(e.u));
        if (e.u > e.v) std::swap(e.u, e.v);
    }
    std::sort(edges.begin(), edges.end());
    if (auto it = std::adjacent_find(edges.begin(), edges.end()); it != edges.end()) {
        throw InvariantError("duplicate edge (" + std::to_string(it->u) + "," +
                             std::to_string(it->v) + ")");
    }

    SegregatedNetwork net;
    net.n_gullible_ = static_cast<std::size_t>(
        std::count(groups.begin(), groups.end(), GroupLabel::Gullible));
    net.groups_ = std::move(groups);
    net.edges_ = std::move(edges);

    net.offsets_.assign(n + 1, 0);
    for (const auto& e : net.edges_) {
        ++net.offsets_[e.u + 1];
        ++net.offsets_[e.v + 1];
    }
    for (std::size_t i = 0; i < n; ++i) net.offsets_[i + 1] += net.offsets_[i];
    net.adjacency_.resize(2 * net.edges_.size());
    std::vector<std::size_t> cursor(net.offsets_.begin(), net.offsets_.end() - 1);
    for (const auto& e : net.edges_) {
        net.adjacency_[cursor[e.u]++] = e.v;
        net.adjacency_[cursor[e.v]++] = e.u;
    }

    net.s_ = s_target >= 0.0 ? s_target : net.realized_intra_fraction();
    return net;
}

namespace {

struct PairCounts {
    std::size_t n_gu, n_sk;
    double intra_gu, intra_sk, inter;
};

PairCounts checked_pair_counts(const NetworkParams& params) {
    const std::size_t n = params.n_nodes;
    if (n == 0) throw ParameterError("n_nodes must be positive");
    if (n > (std::size_t{1} << 31)) throw ParameterError("n_nodes too large");
    if (!(params.gamma > 0.0 && params.gamma < 1.0)) {
        throw ParameterError("gamma must lie in (0, 1), got " + std::to_string(params.gamma));
    }
    if (!(params.s >= 0.5 && params.s < 1.0)) {
        throw ParameterError("s must lie in [0.5, 1), got " + std::to_string(params.s));
    }
    if (params.n_edges == 0) throw ParameterError("n_edges must be positive");

    const std::size_t n_gu = gullible_count(n, params.gamma);
    const std::size_t n_sk = n - n_gu;
    if (n_gu == 0 || n_sk == 0) {
        throw ParameterError("both groups must be nonempty (N=" + std::to_string(n) +
                             ", gamma=" + std::to_string(params.gamma) + ")");
    }
    PairCounts pc{n_gu, n_sk, 0.5 * static_cast<double>(n_gu) * static_cast<double>(n_gu - 1),
                  0.5 * static_cast<double>(n_sk) * static_cast<double>(n_sk - 1),
                  static_cast<double>(n_gu) * static_cast<double>(n_sk)};
    const auto capacity = static_cast<std::size_t>(pc.intra_gu + pc.intra_sk + pc.inter);
    if (params.n_edges > capacity) {
        throw CapacityError("cannot place " + std::to_string(params.n_edges) + " edges among " +
                            std::to_string(n) + " nodes (at most " + std::to_string(capacity) + ")");
    }
    return pc;
}

}  // namespace

void validate(const NetworkParams& params) { checked_pair_counts(params); }

SegregatedNetwork generate(const NetworkParams& params, std::uint64_t rng_seed) {
    const auto [n_gu, n_sk, pairs_gu, pairs_sk, pairs_inter] = checked_pair_counts(params);
    const std::size_t n = params.n_nodes;
    const double weight_gu = pairs_gu / (pairs_gu + pairs_sk);

    Rng rng(rng_seed);
    std::unordered_set<std::uint64_t> used;
    used.reserve(2 * params.n_edges);
    std::vector<Edge> edges;
    edges.reserve(params.n_edges);
    std::size_t used_gu = 0, used_sk = 0, used_inter = 0;

    auto try_insert = [&](NodeId a, NodeId b) {
        if (a > b) std::swap(a, b);
        return used.insert(static_cast<std::uint64_t>(a) * n + b).second ? std::optional<Edge>{Edge{a, b}}
                                                                         : std::nullopt;
    };
    auto pick_pair = [&](std::size_t offset, std::size_t size) {
        const auto a = uniform_below(rng, size);
        auto b = uniform_below(rng, size - 1);
        if (b >= a) ++b;
        return std::pair{static_cast<NodeId>(offset + a), static_cast<NodeId>(offset + b)};
    };

    while (edges.size() < params.n_edges) {
        const bool intra_full = used_gu + used_sk >= static_cast<std::size_t>(pairs_gu + pairs_sk);
        const bool inter_full = used_inter >= static_cast<std::size_t>(pairs_inter);
        bool intra = uniform01(rng) < params.s;
        // A saturated edge type can never complete; only then is the type re-flipped.
        if ((intra && intra_full) || (!intra && inter_full)) continue;

        for (;;) {
            if (intra) {
                const bool in_gu = uniform01(rng) < weight_gu;
                const auto [a, b] = in_gu ? pick_pair(0, n_gu) : pick_pair(n_gu, n_sk);
                if (auto e = try_insert(a, b)) {
                    edges.push_back(*e);
                    ++(in_gu ? used_gu : used_sk);
                    break;
                }
            } else {
                const auto a = static_cast<NodeId>(uniform_below(rng, n_gu));
                const auto b = static_cast<NodeId>(n_gu + uniform_below(rng, n_sk));
                if (auto e = try_insert(a, b)) {
                    edges.push_back(*e);
                    ++used_inter;
                    break;
                }
            }
        }
    }

    std::vector<GroupLabel> groups(n, GroupLabel::Skeptic);
    std::fill_n(groups.begin(), n_gu, GroupLabel::Gullible);
    return SegregatedNetwork::from_edges(std::move(groups), std::move(edges), params.s);
}

namespace {

std::ofstream open_for_write(const std::string& path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError(path, "cannot open for writing");
    return out;
}

void write_comments(std::ostream& out, std::span<const std::string> comments) {
    for (const auto& c : comments) out << "# " << c << '\n';
}

void finish(std::ofstream& out, const std::string& path) {
    out.flush();
    if (!out) throw IoError(path, "write failed");
}

template <typename T>
bool parse_number(std::string_view text, T& value) {
    const auto* end = text.data() + text.size();
    auto [ptr, ec] = std::from_chars(text.data(), end, value);
    return ec == std::errc{} && ptr == end;
}

/// Iterates data lines of a CSV file, skipping '#' comments and the expected header.
class CsvReader {
public:
    CsvReader(std::string path, std::string_view header) : path_(std::move(path)), in_(path_) {
        if (!in_) throw IoError(path_, "cannot open for reading");
        std::string line;
        while (next_raw(line)) {
            if (line != header) {
                throw ParseError(path_, line_no_,
                                 "expected header '" + std::string(header) + "', got '" + line + "'");
            }
            return;
        }
        throw ParseError(path_, line_no_, "missing header '" + std::string(header) + "'");
    }

    /// Splits the next data line into two fields.
    bool next(std::string_view& a, std::string_view& b) {
        if (!next_raw(line_)) return false;
        const auto comma = line_.find(',');
        if (comma == std::string::npos || line_.find(',', comma + 1) != std::string::npos) {
            fail("expected two comma-separated fields");
        }
        a = std::string_view(line_).substr(0, comma);
        b = std::string_view(line_).substr(comma + 1);
        return true;
    }

    [[noreturn]] void fail(const std::string& what) const { throw ParseError(path_, line_no_, what); }

private:
    bool next_raw(std::string& line) {
        while (std::getline(in_, line)) {
            ++line_no_;
            if (!line.empty() && line.back() == '\r') line.pop_back();
            if (line.empty() || line.front() == '#') continue;
            return true;
        }
        return false;
    }

    std::string path_;
    std::ifstream in_;
    std::string line_;
    std::size_t line_no_ = 0;
};

}  // namespace

void save(const SegregatedNetwork& network, const std::string& prefix,
          std::span<const std::string> comments) {
    const std::string nodes_path = prefix + ".nodes.csv";
    const std::string edges_path = prefix + ".edges.csv";

    auto nodes = open_for_write(nodes_path);
    write_comments(nodes, comments);
    nodes << "id,group\n";
    for (std::size_t i = 0; i < network.n_nodes(); ++i) {
        nodes << i << ',' << to_string(network.group(static_cast<NodeId>(i))) << '\n';
    }
    finish(nodes, nodes_path);

    auto edges = open_for_write(edges_path);
    write_comments(edges, comments);
    edges << "u,v\n";
    for (const auto& e : network.edges()) edges << e.u << ',' << e.v << '\n';
    finish(edges, edges_path);
}

SegregatedNetwork load(const std::string& prefix) {
    std::vector<std::optional<GroupLabel>> slots;
    {
        CsvReader reader(prefix + ".nodes.csv", "id,group");
        std::string_view id_text, group_text;
        while (reader.next(id_text, group_text)) {
            std::size_t id = 0;
            if (!parse_number(id_text, id)) reader.fail("invalid node id '" + std::string(id_text) + "'");
            GroupLabel g;
            if (group_text == "gullible") {
                g = GroupLabel::Gullible;
            } else if (group_text == "skeptic") {
                g = GroupLabel::Skeptic;
            } else {
                reader.fail("unknown group '" + std::string(group_text) + "'");
            }
            if (id >= (std::size_t{1} << 31)) reader.fail("node id too large");
            if (id >= slots.size()) slots.resize(id + 1);
            if (slots[id]) throw InvariantError("node " + std::to_string(id) + " listed twice");
            slots[id] = g;
        }
    }
    std::vector<GroupLabel> groups;
    groups.reserve(slots.size());
    for (std::size_t i = 0; i < slots.size(); ++i) {
        if (!slots[i]) throw InvariantError("missing group for node " + std::to_string(i));
        groups.push_back(*slots[i]);
    }

    std::vector<Edge> edges;
    {
        CsvReader reader(prefix + ".edges.csv", "u,v");
        std::string_view a, b;
        while (reader.next(a, b)) {
            NodeId u = 0, v = 0;
            if (!parse_number(a, u) || !parse_number(b, v)) reader.fail("invalid edge endpoint");
            edges.push_back({u, v});
        }
    }
    return SegregatedNetwork::from_edges(std::move(groups), std::move(edges));
}

}  // namespace hoaxnet
