// Parallel kernels vs their serial references. The references are the
// oracles the unit tests compare against; this target shows what the
// OpenMP versions buy on the same inputs.
#include <benchmark/benchmark.h>

#include "rscache/ams.hpp"
#include "rscache/partition.hpp"
#include "rscache/scheme.hpp"

using namespace rscache;

namespace {

AmsParams bench_params(std::int64_t which) {
    switch (which) {
        case 0: return AmsParams::make(2, 4);       // K = 16
        case 1: return AmsParams::make(3, 6);       // K = 729
        default: return AmsParams::make(2, 10, true); // K = 1024, relaxed
    }
}

void BM_ams_graph_parallel(benchmark::State& state) {
    AmsParams p = bench_params(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(ams_graph(p));
    state.SetLabel("K=" + std::to_string(p.vertex_count()));
}
BENCHMARK(BM_ams_graph_parallel)->Arg(0)->Arg(1)->Arg(2)->Unit(benchmark::kMillisecond);

void BM_ams_graph_serial(benchmark::State& state) {
    AmsParams p = bench_params(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(reference::ams_graph_serial(p));
    state.SetLabel("K=" + std::to_string(p.vertex_count()));
}
BENCHMARK(BM_ams_graph_serial)->Arg(0)->Arg(1)->Arg(2)->Unit(benchmark::kMillisecond);

struct EncodeSetup {
    Graph g;
    RsPartition p;
    PacketLibrary lib;
    DemandVector demands;

    EncodeSetup(VertexId k, double edge_prob, std::size_t packet_bytes)
        : g(random_graph(k, edge_prob, 0xb0bacafe)),
          p(greedy_partition(g)),
          lib(PacketLibrary::seeded_random(8, k, packet_bytes, 1)),
          demands(k) {
        for (VertexId j = 0; j < k; ++j) demands[j] = j % 8;
    }
};

void BM_encode_parallel(benchmark::State& state) {
    EncodeSetup s(static_cast<VertexId>(state.range(0)), 0.5,
                  static_cast<std::size_t>(state.range(1)));
    for (auto _ : state) benchmark::DoNotOptimize(encode_delivery(s.p, s.demands, s.lib));
    state.SetLabel("t=" + std::to_string(s.p.matching_count()));
}
BENCHMARK(BM_encode_parallel)
    ->Args({16, 64})
    ->Args({64, 64})
    ->Args({64, 4096})
    ->Unit(benchmark::kMicrosecond);

void BM_encode_reference(benchmark::State& state) {
    EncodeSetup s(static_cast<VertexId>(state.range(0)), 0.5,
                  static_cast<std::size_t>(state.range(1)));
    for (auto _ : state)
        benchmark::DoNotOptimize(reference::encode_delivery(s.p, s.demands, s.lib));
    state.SetLabel("t=" + std::to_string(s.p.matching_count()));
}
BENCHMARK(BM_encode_reference)
    ->Args({16, 64})
    ->Args({64, 64})
    ->Args({64, 4096})
    ->Unit(benchmark::kMicrosecond);

void BM_decode_all_users(benchmark::State& state) {
    EncodeSetup s(static_cast<VertexId>(state.range(0)), 0.5, 64);
    PlacementMap pm = build_placement(s.g);
    MatchingIndex index(s.g, s.p);
    std::vector<UserCache> caches;
    for (VertexId j = 0; j < s.g.vertex_count(); ++j)
        caches.push_back(UserCache::fill(j, pm, s.lib));
    DeliveryBatch batch = encode_delivery(s.p, s.demands, s.lib);
    for (auto _ : state) {
        for (VertexId j = 0; j < s.g.vertex_count(); ++j)
            benchmark::DoNotOptimize(decode_user(j, batch, pm, caches[j], s.p, index));
    }
    state.SetLabel("K=" + std::to_string(s.g.vertex_count()));
}
BENCHMARK(BM_decode_all_users)->Arg(8)->Arg(16)->Arg(32)->Arg(64)->Unit(benchmark::kMicrosecond);

void BM_verify_partition(benchmark::State& state) {
    // Greedy setup on the 729-vertex distance graph takes minutes, so the
    // larger shapes here are random graphs instead.
    Graph g = state.range(0) == 0 ? ams_graph(AmsParams::make(2, 4))
                                  : random_graph(40 * static_cast<VertexId>(state.range(0)),
                                                 0.3, 0xfeed + state.range(0));
    RsPartition p = greedy_partition(g);
    for (auto _ : state) benchmark::DoNotOptimize(verify_rs_partition(g, p));
    state.SetLabel("E=" + std::to_string(g.edge_count()));
}
BENCHMARK(BM_verify_partition)->Arg(0)->Arg(2)->Arg(4)->Unit(benchmark::kMillisecond);

} // namespace

BENCHMARK_MAIN();
