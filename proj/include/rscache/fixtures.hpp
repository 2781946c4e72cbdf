#pragma once

#include <string_view>
#include <vector>

#include "rscache/graph.hpp"
#include "rscache/partition.hpp"

namespace rscache {

// Named demo graphs mirrored by the files under fixtures/:
//   c6          6-cycle; its edge set splits into 3 induced matchings of size 2
//   triangle    K_3; every matching is a singleton
//   k16-ams     distance-threshold graph for C=2, n=4 (the complete K_16)
//   edgeless-4  4 vertices, no edges (caches hold everything)
Graph fixture_graph(std::string_view name);
std::vector<std::string_view> fixture_names();
bool is_fixture_name(std::string_view name);

/// The size-2 induced-matching partition of c6 shipped in fixtures/c6.part.
RsPartition fixture_partition_c6();

} // namespace rscache
