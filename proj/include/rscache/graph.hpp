#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace rscache {

using VertexId = std::uint32_t;

/// Unordered vertex pair kept canonical (u < v), so equality, ordering and
/// lookup all work on a single representation.
struct Edge {
    VertexId u = 0;
    VertexId v = 0;

    Edge() = default;
    Edge(VertexId a, VertexId b) : u(a < b ? a : b), v(a < b ? b : a) {}

    friend bool operator==(const Edge&, const Edge&) = default;
    friend auto operator<=>(const Edge&, const Edge&) = default;

    std::string str() const {
        return "{" + std::to_string(u) + "," + std::to_string(v) + "}";
    }
};

class Graph;

/// Accumulates edges and freezes them into an immutable Graph. Range and
/// self-loop violations are rejected on add; duplicates on freeze.
class GraphBuilder {
public:
    explicit GraphBuilder(VertexId vertex_count);

    void add_edge(VertexId a, VertexId b);
    void reserve(std::size_t edge_count) { edges_.reserve(edge_count); }

    Graph freeze() &&;

private:
    VertexId vertex_count_;
    std::vector<Edge> edges_;
};

/// Immutable simple undirected graph. Frozen instances are safe for
/// concurrent reads; there is no mutation API.
class Graph {
public:
    static constexpr std::size_t npos = static_cast<std::size_t>(-1);

    VertexId vertex_count() const { return vertex_count_; }
    std::size_t edge_count() const { return edges_.size(); }

    /// All edges, sorted lexicographically on the canonical (u, v) form.
    std::span<const Edge> edges() const { return edges_; }

    VertexId degree(VertexId v) const;
    bool has_edge(VertexId a, VertexId b) const;

    /// Sorted neighbor list of v.
    std::span<const VertexId> neighbors(VertexId v) const;

    /// Position of edge {a,b} within edges(), or npos.
    std::size_t edge_index(VertexId a, VertexId b) const;

private:
    friend class GraphBuilder;
    Graph(VertexId vertex_count, std::vector<Edge> sorted_edges);

    VertexId vertex_count_ = 0;
    std::vector<Edge> edges_;
    std::vector<std::size_t> adj_offsets_;
    std::vector<VertexId> adj_;
};

/// G(n, p): each pair {u,v}, visited in lexicographic order, becomes an
/// edge when the next splitmix64 unit draw falls below edge_prob. The draw
/// order is part of the contract, so (vertex_count, edge_prob, seed)
/// reproduces the same graph everywhere.
Graph random_graph(VertexId vertex_count, double edge_prob, std::uint64_t seed);

using Matching = std::vector<Edge>;

/// True iff the edges of m are pairwise vertex-disjoint. Edges absent from
/// g are an input error (std::invalid_argument), distinct from false.
bool is_matching(const Graph& g, const Matching& m);

/// True iff m is a matching and the subgraph induced on its endpoints
/// contains exactly the edges of m. Same membership precondition as
/// is_matching.
bool is_induced_matching(const Graph& g, const Matching& m);

} // namespace rscache
