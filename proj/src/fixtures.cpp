#include "rscache/fixtures.hpp"

#include <stdexcept>
#include <string>

#include "rscache/ams.hpp"

namespace rscache {

namespace {

Graph cycle_graph(VertexId k) {
    GraphBuilder b(k);
    for (VertexId v = 0; v < k; ++v) b.add_edge(v, (v + 1) % k);
    return std::move(b).freeze();
}

Graph complete_graph(VertexId k) {
    GraphBuilder b(k);
    for (VertexId u = 0; u < k; ++u)
        for (VertexId v = u + 1; v < k; ++v) b.add_edge(u, v);
    return std::move(b).freeze();
}

} // namespace

Graph fixture_graph(std::string_view name) {
    if (name == "c6") return cycle_graph(6);
    if (name == "triangle") return complete_graph(3);
    if (name == "k16-ams") return ams_graph(AmsParams::make(2, 4));
    if (name == "edgeless-4") return std::move(GraphBuilder(4)).freeze();
    throw std::invalid_argument("unknown fixture '" + std::string(name) +
                                "' (have: c6, triangle, k16-ams, edgeless-4)");
}

std::vector<std::string_view> fixture_names() { return {"c6", "triangle", "k16-ams", "edgeless-4"}; }

bool is_fixture_name(std::string_view name) {
    for (auto n : fixture_names())
        if (n == name) return true;
    return false;
}

RsPartition fixture_partition_c6() {
    RsPartition p;
    p.matchings = {
        {Edge(0, 1), Edge(3, 4)},
        {Edge(1, 2), Edge(4, 5)},
        {Edge(2, 3), Edge(5, 0)},
    };
    return p;
}

} // namespace rscache
