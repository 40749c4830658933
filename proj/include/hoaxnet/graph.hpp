#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace hoaxnet {

using NodeId = std::uint32_t;

enum class GroupLabel : std::uint8_t { Gullible = 0, Skeptic = 1 };

std::string_view to_string(GroupLabel g) noexcept;

struct Edge {
    NodeId u;
    NodeId v;

    friend bool operator==(const Edge&, const Edge&) = default;
    friend auto operator<=>(const Edge&, const Edge&) = default;
};

struct NetworkParams {
    std::size_t n_nodes = 1000;
    double gamma = 0.5;
    std::size_t n_edges = 5000;
    double s = 0.8;
};

/// Number of gullible nodes for a population of n with gullible share gamma (round half up).
std::size_t gullible_count(std::size_t n_nodes, double gamma);

/// Undirected simple graph split into a gullible and a skeptic group.
///
/// Immutable once built. Adjacency is stored in CSR form; edges are kept in
/// canonical (u < v) lexicographic order.
class SegregatedNetwork {
public:
    /// Builds a network from an explicit group assignment and edge list.
    /// Throws InvariantError on self-loops, duplicates, out-of-range ids or an empty edge list.
    /// `s_target` is recorded as-is; when negative the realized intra-group fraction is stored.
    static SegregatedNetwork from_edges(std::vector<GroupLabel> groups, std::vector<Edge> edges,
                                        double s_target = -1.0);

    std::size_t n_nodes() const noexcept { return groups_.size(); }
    std::size_t n_edges() const noexcept { return edges_.size(); }
    std::size_t n_gullible() const noexcept { return n_gullible_; }
    std::size_t n_skeptic() const noexcept { return groups_.size() - n_gullible_; }
    /// Realized gullible share n_gu / N.
    double gamma() const noexcept;
    /// Target intra-group fraction (generated) or realized fraction (loaded).
    double s() const noexcept { return s_; }
    double realized_intra_fraction() const noexcept;

    GroupLabel group(NodeId v) const { return groups_[v]; }
    std::span<const GroupLabel> groups() const noexcept { return groups_; }
    std::span<const NodeId> neighbors(NodeId v) const {
        return {adjacency_.data() + offsets_[v], adjacency_.data() + offsets_[v + 1]};
    }
    std::size_t degree(NodeId v) const { return offsets_[v + 1] - offsets_[v]; }
    std::span<const Edge> edges() const noexcept { return edges_; }

    friend bool operator==(const SegregatedNetwork& a, const SegregatedNetwork& b) {
        return a.groups_ == b.groups_ && a.edges_ == b.edges_;
    }

private:
    std::vector<GroupLabel> groups_;
    std::vector<Edge> edges_;
    std::vector<std::size_t> offsets_;
    std::vector<NodeId> adjacency_;
    std::size_t n_gullible_ = 0;
    double s_ = 0.0;
};

/// Throws ParameterError or CapacityError if `params` cannot be generated.
void validate(const NetworkParams& params);

/// Draws the two-group segregated random network.
///
/// Each of the M edges is intra-group with probability s, otherwise inter-group.
/// An intra-group edge picks its group with weight n_g(n_g-1)/2 and then two
/// distinct members uniformly; an inter-group edge picks one member of each group.
/// Self-loops cannot occur; duplicates are re-drawn keeping the edge type.
/// Gullible nodes get ids 0..n_gu-1.
SegregatedNetwork generate(const NetworkParams& params, std::uint64_t rng_seed);

/// Writes `<prefix>.nodes.csv` and `<prefix>.edges.csv`. Lines in `comments` are
/// emitted first, each prefixed with "# ".
void save(const SegregatedNetwork& network, const std::string& prefix,
          std::span<const std::string> comments = {});

SegregatedNetwork load(const std::string& prefix);

}  // namespace hoaxnet
