#include <doctest.h>

#include <stdexcept>

#include "rscache/fixtures.hpp"
#include "rscache/graph.hpp"

using namespace rscache;

TEST_CASE("edges canonicalize to (min,max)") {
    CHECK(Edge(3, 1) == Edge(1, 3));
    CHECK(Edge(1, 3).u == 1);
    CHECK(Edge(1, 3).v == 3);
    CHECK(Edge(0, 1) < Edge(0, 2));
    CHECK(Edge(0, 2) < Edge(1, 2));
    CHECK(Edge(5, 0).str() == "{0,5}");
}

TEST_CASE("builder rejects bad edges") {
    CHECK_THROWS_AS(GraphBuilder(0), std::invalid_argument);

    GraphBuilder b(4);
    CHECK_THROWS_AS(b.add_edge(1, 1), std::invalid_argument);
    CHECK_THROWS_AS(b.add_edge(0, 4), std::invalid_argument);

    b.add_edge(0, 1);
    b.add_edge(1, 0); // same edge, flipped
    CHECK_THROWS_AS(std::move(b).freeze(), std::invalid_argument);
}

TEST_CASE("degree and adjacency on the 6-cycle") {
    Graph g = fixture_graph("c6");
    CHECK(g.vertex_count() == 6);
    CHECK(g.edge_count() == 6);
    std::size_t degree_sum = 0;
    for (VertexId v = 0; v < 6; ++v) {
        CHECK(g.degree(v) == 2);
        degree_sum += g.degree(v);
    }
    CHECK(degree_sum == 2 * g.edge_count());
    CHECK_THROWS_AS(g.degree(6), std::out_of_range);

    CHECK(g.has_edge(0, 1));
    CHECK(g.has_edge(5, 0));
    CHECK_FALSE(g.has_edge(0, 3));
    CHECK_FALSE(g.has_edge(2, 2));

    auto nbr = g.neighbors(0);
    REQUIRE(nbr.size() == 2);
    CHECK(nbr[0] == 1);
    CHECK(nbr[1] == 5);

    CHECK(g.edge_index(1, 0) == 0);
    CHECK(g.edge_index(0, 3) == Graph::npos);
}

TEST_CASE("degree fixtures: complete and edgeless") {
    Graph k16 = fixture_graph("k16-ams");
    CHECK(k16.vertex_count() == 16);
    CHECK(k16.edge_count() == 120);
    for (VertexId v = 0; v < 16; ++v) CHECK(k16.degree(v) == 15);

    Graph e4 = fixture_graph("edgeless-4");
    CHECK(e4.edge_count() == 0);
    for (VertexId v = 0; v < 4; ++v) CHECK(e4.degree(v) == 0);
}

TEST_CASE("is_matching") {
    Graph g = fixture_graph("c6");
    CHECK(is_matching(g, {Edge(0, 1), Edge(3, 4)}));
    CHECK_FALSE(is_matching(g, {Edge(0, 1), Edge(1, 2)})); // shared vertex 1
    CHECK(is_matching(g, {}));
    // Edge not in graph: input error, not false.
    CHECK_THROWS_AS(is_matching(g, {Edge(0, 3)}), std::invalid_argument);
}

TEST_CASE("is_induced_matching") {
    Graph c6 = fixture_graph("c6");
    CHECK(is_induced_matching(c6, {Edge(0, 1), Edge(3, 4)}));
    CHECK_FALSE(is_induced_matching(c6, {Edge(0, 1), Edge(2, 3)})); // edge {1,2} inside

    // Path 0-1-2-3: {0,1},{2,3} is a matching but not induced.
    GraphBuilder b(4);
    b.add_edge(0, 1);
    b.add_edge(1, 2);
    b.add_edge(2, 3);
    Graph path = std::move(b).freeze();
    CHECK(is_matching(path, {Edge(0, 1), Edge(2, 3)}));
    CHECK_FALSE(is_induced_matching(path, {Edge(0, 1), Edge(2, 3)}));

    // Single edges are always induced.
    for (const Edge& e : c6.edges()) CHECK(is_induced_matching(c6, {e}));

    // induced implies matching, exercised over random graphs.
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        Graph g = random_graph(12, 0.4, seed);
        for (const Edge& e : g.edges()) {
            Matching m{e};
            if (is_induced_matching(g, m)) CHECK(is_matching(g, m));
        }
    }
}

TEST_CASE("brute-force cross-check of the induced predicate") {
    // is_induced_matching(g,m) == (edges inside m's vertex set) == |m|.
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        Graph g = random_graph(10, 0.3, seed);
        if (g.edge_count() < 2) continue;
        auto edges = g.edges();
        for (std::size_t i = 0; i < edges.size(); ++i)
            for (std::size_t j = i + 1; j < edges.size(); ++j) {
                Matching m{edges[i], edges[j]};
                if (!is_matching(g, m)) continue;
                std::vector<char> in_set(g.vertex_count(), 0);
                for (const Edge& e : m) in_set[e.u] = in_set[e.v] = 1;
                std::size_t inside = 0;
                for (const Edge& e : g.edges())
                    if (in_set[e.u] && in_set[e.v]) ++inside;
                CHECK(is_induced_matching(g, m) == (inside == m.size()));
            }
    }
}

TEST_CASE("random_graph is seed-deterministic and respects p extremes") {
    Graph a = random_graph(20, 0.5, 99);
    Graph b = random_graph(20, 0.5, 99);
    REQUIRE(a.edge_count() == b.edge_count());
    for (std::size_t i = 0; i < a.edge_count(); ++i) CHECK(a.edges()[i] == b.edges()[i]);

    Graph c = random_graph(20, 0.5, 100);
    bool same = a.edge_count() == c.edge_count();
    if (same)
        for (std::size_t i = 0; i < a.edge_count(); ++i)
            if (a.edges()[i] != c.edges()[i]) same = false;
    CHECK_FALSE(same);

    CHECK(random_graph(10, 0.0, 1).edge_count() == 0);
    CHECK(random_graph(10, 1.0, 1).edge_count() == 45);
    CHECK_THROWS_AS(random_graph(10, 1.5, 1), std::invalid_argument);
}
