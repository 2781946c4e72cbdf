#include "rscache/graph.hpp"

#include <algorithm>
#include <stdexcept>

#include "rscache/rng.hpp"

namespace rscache {

GraphBuilder::GraphBuilder(VertexId vertex_count) : vertex_count_(vertex_count) {
    if (vertex_count == 0)
        throw std::invalid_argument("graph: vertex count must be positive");
}

void GraphBuilder::add_edge(VertexId a, VertexId b) {
    if (a == b)
        throw std::invalid_argument("graph: self-loop at vertex " + std::to_string(a));
    if (a >= vertex_count_ || b >= vertex_count_)
        throw std::invalid_argument("graph: edge " + Edge(a, b).str() + " out of range [0, " +
                                    std::to_string(vertex_count_) + ")");
    edges_.emplace_back(a, b);
}

Graph GraphBuilder::freeze() && {
    std::sort(edges_.begin(), edges_.end());
    auto dup = std::adjacent_find(edges_.begin(), edges_.end());
    if (dup != edges_.end())
        throw std::invalid_argument("graph: duplicate edge " + dup->str());
    return Graph(vertex_count_, std::move(edges_));
}

Graph::Graph(VertexId vertex_count, std::vector<Edge> sorted_edges)
    : vertex_count_(vertex_count), edges_(std::move(sorted_edges)) {
    // CSR adjacency: count, prefix, fill, then sort each row.
    std::vector<std::size_t> deg(vertex_count_, 0);
    for (const Edge& e : edges_) {
        ++deg[e.u];
        ++deg[e.v];
    }
    adj_offsets_.assign(vertex_count_ + 1, 0);
    for (VertexId v = 0; v < vertex_count_; ++v)
        adj_offsets_[v + 1] = adj_offsets_[v] + deg[v];
    adj_.resize(adj_offsets_.back());
    std::vector<std::size_t> cursor(adj_offsets_.begin(), adj_offsets_.end() - 1);
    for (const Edge& e : edges_) {
        adj_[cursor[e.u]++] = e.v;
        adj_[cursor[e.v]++] = e.u;
    }
    for (VertexId v = 0; v < vertex_count_; ++v)
        std::sort(adj_.begin() + static_cast<std::ptrdiff_t>(adj_offsets_[v]),
                  adj_.begin() + static_cast<std::ptrdiff_t>(adj_offsets_[v + 1]));
}

VertexId Graph::degree(VertexId v) const {
    if (v >= vertex_count_)
        throw std::out_of_range("graph: vertex " + std::to_string(v) + " out of range [0, " +
                                std::to_string(vertex_count_) + ")");
    return static_cast<VertexId>(adj_offsets_[v + 1] - adj_offsets_[v]);
}

std::span<const VertexId> Graph::neighbors(VertexId v) const {
    if (v >= vertex_count_)
        throw std::out_of_range("graph: vertex " + std::to_string(v) + " out of range [0, " +
                                std::to_string(vertex_count_) + ")");
    return {adj_.data() + adj_offsets_[v], adj_offsets_[v + 1] - adj_offsets_[v]};
}

bool Graph::has_edge(VertexId a, VertexId b) const {
    if (a == b) return false;
    auto row = neighbors(a);
    if (b >= vertex_count_)
        throw std::out_of_range("graph: vertex " + std::to_string(b) + " out of range");
    return std::binary_search(row.begin(), row.end(), b);
}

std::size_t Graph::edge_index(VertexId a, VertexId b) const {
    Edge e(a, b);
    auto it = std::lower_bound(edges_.begin(), edges_.end(), e);
    if (it == edges_.end() || *it != e) return npos;
    return static_cast<std::size_t>(it - edges_.begin());
}

Graph random_graph(VertexId vertex_count, double edge_prob, std::uint64_t seed) {
    if (!(edge_prob >= 0.0 && edge_prob <= 1.0))
        throw std::invalid_argument("random_graph: edge probability must lie in [0, 1]");
    GraphBuilder b(vertex_count);
    SplitMix64 rng(seed);
    for (VertexId u = 0; u < vertex_count; ++u)
        for (VertexId v = u + 1; v < vertex_count; ++v)
            if (rng.unit() < edge_prob) b.add_edge(u, v);
    return std::move(b).freeze();
}

namespace {

void require_edges_present(const Graph& g, const Matching& m) {
    for (const Edge& e : m)
        if (g.edge_index(e.u, e.v) == Graph::npos)
            throw std::invalid_argument("matching edge " + e.str() + " is not a graph edge");
}

bool vertex_disjoint(VertexId vertex_count, const Matching& m) {
    std::vector<char> used(vertex_count, 0);
    for (const Edge& e : m) {
        if (used[e.u] || used[e.v]) return false;
        used[e.u] = used[e.v] = 1;
    }
    return true;
}

} // namespace

bool is_matching(const Graph& g, const Matching& m) {
    require_edges_present(g, m);
    return vertex_disjoint(g.vertex_count(), m);
}

bool is_induced_matching(const Graph& g, const Matching& m) {
    require_edges_present(g, m);
    if (!vertex_disjoint(g.vertex_count(), m)) return false;
    std::vector<char> in_set(g.vertex_count(), 0);
    for (const Edge& e : m)
        in_set[e.u] = in_set[e.v] = 1;
    // The induced subgraph holds exactly |m| edges iff no extra edge joins
    // two matched vertices.
    std::size_t inside = 0;
    for (const Edge& e : m) {
        for (VertexId w : g.neighbors(e.u))
            if (w > e.u && in_set[w]) ++inside;
        for (VertexId w : g.neighbors(e.v))
            if (w > e.v && in_set[w]) ++inside;
    }
    return inside == m.size();
}

} // namespace rscache
