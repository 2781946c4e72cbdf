#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "rscache/graph.hpp"
#include "rscache/rational.hpp"

namespace rscache {

/// Ordered list of matchings M_0..M_{t-1}. Validity against a graph (edge
/// disjointness, coverage, induced property) is established by
/// verify_rs_partition, not by the type itself.
struct RsPartition {
    std::vector<Matching> matchings;

    std::size_t matching_count() const { return matchings.size(); }
    std::size_t edge_count() const {
        std::size_t n = 0;
        for (const Matching& m : matchings) n += m.size();
        return n;
    }
};

struct RsParams {
    Rational r_avg;          // |E| / t, exactly; 0 when t == 0
    std::size_t t = 0;
    std::size_t min_size = 0;
    std::size_t max_size = 0;
};

enum class PartitionFault {
    none,
    edge_not_in_graph,
    edge_double_covered,
    edge_uncovered,
    not_vertex_disjoint,
    not_induced,
    empty_matching,
};

const char* to_string(PartitionFault f);

struct PartitionCheck {
    PartitionFault fault = PartitionFault::none;
    std::size_t matching_index = 0; // offender, when a matching is at fault
    Edge edge;                      // offending edge, when one exists
    RsParams params;                // populated iff ok()

    bool ok() const { return fault == PartitionFault::none; }
    std::string message() const;
};

class VerificationError : public std::runtime_error {
public:
    explicit VerificationError(const PartitionCheck& check)
        : std::runtime_error(check.message()), check_(check) {}
    const PartitionCheck& check() const { return check_; }

private:
    PartitionCheck check_;
};

/// Checks all three partition invariants: every graph edge covered exactly
/// once, every matching vertex-disjoint, every matching induced. Empty
/// matchings and edges outside the graph are rejected too.
PartitionCheck verify_rs_partition(const Graph& g, const RsPartition& p);

/// verify_rs_partition, throwing VerificationError instead of reporting.
RsParams verify_or_throw(const Graph& g, const RsPartition& p);

/// Deterministic greedy partition: rounds over the unassigned edges in
/// lexicographic order, each round growing one induced matching. Always
/// terminates (a round assigns at least its first unassigned edge) and its
/// output passes verify_rs_partition by construction.
RsPartition greedy_partition(const Graph& g);

/// Exhaustive backtracking oracle for the minimum number of matchings.
/// Symmetry breaking: the first edge is pinned to matching 0 and matching
/// i+1 never opens before matching i holds an edge. Instances above
/// edge_limit are refused.
RsPartition exact_min_partition(const Graph& g, std::size_t edge_limit = 12);

/// Smallest feasible cache fraction: max_j (K - degree(j)) / K.
Rational required_cache_ratio(const Graph& g);

/// Edge -> matching lookup table used by the decoder. Total on verified
/// partitions: every graph edge maps to exactly one matching.
class MatchingIndex {
public:
    MatchingIndex(const Graph& g, const RsPartition& p);

    std::optional<std::size_t> matching_of(VertexId a, VertexId b) const;

private:
    const Graph* graph_;
    std::vector<std::uint32_t> table_; // per graph-edge index
};

} // namespace rscache
