#include "rscache/partition.hpp"

#include <algorithm>
#include <limits>

namespace rscache {

const char* to_string(PartitionFault f) {
    switch (f) {
        case PartitionFault::none: return "ok";
        case PartitionFault::edge_not_in_graph: return "edge not in graph";
        case PartitionFault::edge_double_covered: return "edge covered twice";
        case PartitionFault::edge_uncovered: return "edge uncovered";
        case PartitionFault::not_vertex_disjoint: return "matching not vertex-disjoint";
        case PartitionFault::not_induced: return "matching not induced";
        case PartitionFault::empty_matching: return "empty matching";
    }
    return "?";
}

std::string PartitionCheck::message() const {
    if (ok()) return "ok";
    std::string s = to_string(fault);
    if (fault == PartitionFault::edge_uncovered)
        return s + ": edge " + edge.str() + " appears in no matching";
    s += " (matching " + std::to_string(matching_index);
    if (fault != PartitionFault::empty_matching) s += ", edge " + edge.str();
    s += ")";
    return s;
}

namespace {

constexpr std::uint32_t kUnassigned = std::numeric_limits<std::uint32_t>::max();

// Coverage pass shared by the verifier and MatchingIndex: fills a per-edge
// table of matching ids, reporting the first structural fault.
PartitionCheck cover_edges(const Graph& g, const RsPartition& p, std::vector<std::uint32_t>& table) {
    table.assign(g.edge_count(), kUnassigned);
    for (std::size_t q = 0; q < p.matchings.size(); ++q) {
        for (const Edge& e : p.matchings[q]) {
            std::size_t idx = g.edge_index(e.u, e.v);
            if (idx == Graph::npos)
                return {PartitionFault::edge_not_in_graph, q, e, {}};
            if (table[idx] != kUnassigned)
                return {PartitionFault::edge_double_covered, q, e, {}};
            table[idx] = static_cast<std::uint32_t>(q);
        }
    }
    for (std::size_t idx = 0; idx < table.size(); ++idx)
        if (table[idx] == kUnassigned)
            return {PartitionFault::edge_uncovered, 0, g.edges()[idx], {}};
    return {};
}

struct MatchingFault {
    PartitionFault fault = PartitionFault::none;
    Edge edge;
};

MatchingFault check_one_matching(const Graph& g, const Matching& m) {
    std::vector<char> in_set(g.vertex_count(), 0);
    for (const Edge& e : m) {
        if (in_set[e.u] || in_set[e.v])
            return {PartitionFault::not_vertex_disjoint, e};
        in_set[e.u] = in_set[e.v] = 1;
    }
    // Every graph edge inside the matched vertex set must be a matching
    // edge, else the matching is not induced.
    for (const Edge& e : m) {
        for (VertexId x : {e.u, e.v})
            for (VertexId w : g.neighbors(x)) {
                if (w <= x || !in_set[w]) continue;
                Edge inside(x, w);
                bool is_member = false;
                for (const Edge& other : m)
                    if (other == inside) { is_member = true; break; }
                if (!is_member) return {PartitionFault::not_induced, inside};
            }
    }
    return {};
}

} // namespace

PartitionCheck verify_rs_partition(const Graph& g, const RsPartition& p) {
    std::vector<std::uint32_t> table;
    PartitionCheck coverage = cover_edges(g, p, table);
    if (!coverage.ok()) return coverage;

    for (std::size_t q = 0; q < p.matchings.size(); ++q)
        if (p.matchings[q].empty())
            return {PartitionFault::empty_matching, q, {}, {}};

    const std::size_t t = p.matchings.size();
    std::vector<MatchingFault> faults(t);
#pragma omp parallel for schedule(dynamic)
    for (std::ptrdiff_t q = 0; q < static_cast<std::ptrdiff_t>(t); ++q)
        faults[static_cast<std::size_t>(q)] = check_one_matching(g, p.matchings[static_cast<std::size_t>(q)]);
    for (std::size_t q = 0; q < t; ++q)
        if (faults[q].fault != PartitionFault::none)
            return {faults[q].fault, q, faults[q].edge, {}};

    RsParams params;
    params.t = t;
    params.r_avg = t == 0 ? Rational(0) : Rational(static_cast<std::int64_t>(g.edge_count()),
                                                   static_cast<std::int64_t>(t));
    if (t > 0) {
        params.min_size = params.max_size = p.matchings[0].size();
        for (const Matching& m : p.matchings) {
            params.min_size = std::min(params.min_size, m.size());
            params.max_size = std::max(params.max_size, m.size());
        }
    }
    PartitionCheck ok;
    ok.params = params;
    return ok;
}

RsParams verify_or_throw(const Graph& g, const RsPartition& p) {
    PartitionCheck check = verify_rs_partition(g, p);
    if (!check.ok()) throw VerificationError(check);
    return check.params;
}

namespace {

// True iff edge e can join the matching whose vertex membership is in_set:
// both endpoints fresh and no graph edge from e into the set.
bool extends_induced(const Graph& g, const std::vector<char>& in_set, const Edge& e) {
    if (in_set[e.u] || in_set[e.v]) return false;
    for (VertexId w : g.neighbors(e.u))
        if (in_set[w]) return false;
    for (VertexId w : g.neighbors(e.v))
        if (in_set[w]) return false;
    return true;
}

} // namespace

RsPartition greedy_partition(const Graph& g) {
    const auto edges = g.edges();
    const std::size_t n = edges.size();

    // Unassigned edges as a linked list in lexicographic order; accepted
    // edges unlink in O(1).
    std::vector<std::size_t> next(n);
    for (std::size_t i = 0; i < n; ++i) next[i] = i + 1;
    std::size_t head = 0;
    std::size_t remaining = n;

    // An edge extends the matching iff both endpoints are unblocked, where
    // blocked = matched or adjacent to a matched vertex (same predicate as
    // extends_induced, amortized: neighborhoods are stamped once per
    // accepted edge instead of rescanned per candidate). Stamps substitute
    // for clearing the bitmap between rounds.
    std::vector<std::uint64_t> stamp(g.vertex_count(), 0);
    std::uint64_t round = 0;

    RsPartition p;
    while (remaining > 0) {
        ++round;
        VertexId unblocked = g.vertex_count();
        auto block = [&](VertexId v) {
            if (stamp[v] != round) {
                stamp[v] = round;
                --unblocked;
            }
        };
        Matching current;
        std::size_t* link = &head;
        // Once fewer than two vertices are unblocked no further edge can
        // join, so the rest of the scan is skipped; every skipped candidate
        // would have been rejected anyway.
        for (std::size_t i = head; i != n && unblocked >= 2; i = *link) {
            const Edge& e = edges[i];
            if (stamp[e.u] == round || stamp[e.v] == round) {
                link = &next[i];
                continue;
            }
            current.push_back(e);
            for (VertexId x : {e.u, e.v}) {
                block(x);
                for (VertexId w : g.neighbors(x)) block(w);
            }
            *link = next[i]; // unlink; `link` stays on the predecessor
            --remaining;
        }
        p.matchings.push_back(std::move(current));
    }
    return p;
}

namespace {

struct ExactSearch {
    const Graph& g;
    std::span<const Edge> edges;
    std::vector<std::vector<char>> vertex_sets; // per open matching
    std::vector<std::uint32_t> assignment;      // edge index -> matching
    std::vector<std::uint32_t> best_assignment;
    std::size_t best_t;
    std::size_t open = 0;

    explicit ExactSearch(const Graph& graph, std::size_t upper_bound)
        : g(graph), edges(graph.edges()), best_t(upper_bound) {
        assignment.assign(edges.size(), 0);
        best_assignment.assign(edges.size(), 0);
    }

    bool fits(std::size_t q, const Edge& e) const {
        return extends_induced(g, vertex_sets[q], e);
    }

    void place(std::size_t q, const Edge& e, std::size_t i) {
        vertex_sets[q][e.u] = vertex_sets[q][e.v] = 1;
        assignment[i] = static_cast<std::uint32_t>(q);
    }

    void unplace(std::size_t q, const Edge& e) {
        vertex_sets[q][e.u] = vertex_sets[q][e.v] = 0;
    }

    void dfs(std::size_t i) {
        if (open >= best_t) return; // final t equals open; no improvement possible
        if (i == edges.size()) {
            best_t = open;
            best_assignment = assignment;
            return;
        }
        const Edge& e = edges[i];
        for (std::size_t q = 0; q < open; ++q) {
            if (!fits(q, e)) continue;
            place(q, e, i);
            dfs(i + 1);
            unplace(q, e);
        }
        // Open a fresh matching only if the total can still beat the best;
        // new matchings take index `open`, so order is canonical.
        if (open + 1 < best_t) {
            vertex_sets.emplace_back(g.vertex_count(), 0);
            ++open;
            place(open - 1, e, i);
            dfs(i + 1);
            unplace(open - 1, e);
            --open;
            vertex_sets.pop_back();
        }
    }
};

} // namespace

RsPartition exact_min_partition(const Graph& g, std::size_t edge_limit) {
    if (g.edge_count() > edge_limit)
        throw std::invalid_argument("exact_min_partition: " + std::to_string(g.edge_count()) +
                                    " edges exceed the limit of " + std::to_string(edge_limit));
    if (g.edge_count() == 0) return {};

    RsPartition greedy = greedy_partition(g);
    ExactSearch search(g, greedy.matching_count());
    // Seed best_assignment with greedy so a fruitless search still returns
    // a valid optimum-so-far.
    {
        std::vector<std::uint32_t> table;
        cover_edges(g, greedy, table);
        search.best_assignment = table;
    }
    search.dfs(0);

    RsPartition result;
    result.matchings.resize(search.best_t);
    for (std::size_t i = 0; i < g.edge_count(); ++i)
        result.matchings[search.best_assignment[i]].push_back(g.edges()[i]);
    return result;
}

Rational required_cache_ratio(const Graph& g) {
    const std::int64_t k = g.vertex_count();
    Rational best(0);
    for (VertexId v = 0; v < g.vertex_count(); ++v) {
        Rational ratio(k - g.degree(v), k);
        if (ratio > best) best = ratio;
    }
    return best;
}

MatchingIndex::MatchingIndex(const Graph& g, const RsPartition& p) : graph_(&g) {
    PartitionCheck coverage = cover_edges(g, p, table_);
    if (!coverage.ok()) throw VerificationError(coverage);
}

std::optional<std::size_t> MatchingIndex::matching_of(VertexId a, VertexId b) const {
    std::size_t idx = graph_->edge_index(a, b);
    if (idx == Graph::npos || table_[idx] == kUnassigned) return std::nullopt;
    return table_[idx];
}

} // namespace rscache
