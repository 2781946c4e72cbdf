#include <doctest.h>

#include <algorithm>
#include <stdexcept>
#include <vector>

#include "rscache/fixtures.hpp"
#include "rscache/scheme.hpp"

using namespace rscache;

namespace {

struct Scheme {
    Graph g;
    RsPartition p;
    PlacementMap pm;
    MatchingIndex index;

    explicit Scheme(Graph graph, RsPartition part)
        : g(std::move(graph)), p(std::move(part)), pm(build_placement(g)), index(g, p) {}
};

Scheme c6_scheme() { return Scheme(fixture_graph("c6"), fixture_partition_c6()); }

bool decodes_everything(const Scheme& s, const PacketLibrary& lib, const DemandVector& d) {
    DeliveryBatch batch = encode_delivery(s.p, d, lib);
    for (VertexId k = 0; k < s.g.vertex_count(); ++k) {
        UserCache cache = UserCache::fill(k, s.pm, lib);
        std::vector<std::uint8_t> image = decode_user(k, batch, s.pm, cache, s.p, s.index);
        for (VertexId pkt = 0; pkt < s.g.vertex_count(); ++pkt) {
            auto want = lib.packet(pkt, d[k]);
            if (!std::equal(want.begin(), want.end(),
                            image.begin() + static_cast<std::ptrdiff_t>(pkt * lib.packet_bytes())))
                return false;
        }
    }
    return true;
}

} // namespace

TEST_CASE("placement on the 6-cycle: complement plus self") {
    PlacementMap pm = build_placement(fixture_graph("c6"));
    CHECK(pm.cached_packets[0] == std::vector<VertexId>{0, 2, 3, 4});
    CHECK(pm.cached_packets[3] == std::vector<VertexId>{0, 1, 3, 5});
    for (VertexId j = 0; j < 6; ++j) {
        CHECK(pm.per_file_count[j] == 4); // K - degree = 6 - 2
        CHECK(pm.caches(j, j));
    }
    // Symmetry: i cached at j iff j cached at i.
    for (VertexId i = 0; i < 6; ++i)
        for (VertexId j = 0; j < 6; ++j) CHECK(pm.caches(j, i) == pm.caches(i, j));
}

TEST_CASE("placement extremes: complete and edgeless") {
    PlacementMap complete = build_placement(fixture_graph("k16-ams"));
    for (VertexId j = 0; j < 16; ++j)
        CHECK(complete.cached_packets[j] == std::vector<VertexId>{j});

    PlacementMap edgeless = build_placement(fixture_graph("edgeless-4"));
    for (VertexId j = 0; j < 4; ++j)
        CHECK(edgeless.cached_packets[j] == std::vector<VertexId>{0, 1, 2, 3});
}

TEST_CASE("check_memory: exact boundary at 2/3 on the 6-cycle") {
    PlacementMap pm = build_placement(fixture_graph("c6"));
    CHECK(check_memory(pm, 5, Rational(2, 3)));        // 4 <= (2/3)*6, equality
    CHECK_FALSE(check_memory(pm, 5, Rational(1, 2)));  // 4 > 3
    CHECK(check_memory(pm, 5, Rational(1)));
    CHECK_FALSE(check_memory(pm, 5, Rational(2, 3) - Rational(1, 1000000)));
    CHECK_THROWS_AS(check_memory(pm, 5, Rational(3, 2)), std::invalid_argument);
}

TEST_CASE("seeded library is reproducible; buffers pad and round-trip") {
    PacketLibrary a = PacketLibrary::seeded_random(2, 6, 4, 42);
    PacketLibrary b = PacketLibrary::seeded_random(2, 6, 4, 42);
    PacketLibrary c = PacketLibrary::seeded_random(2, 6, 4, 43);
    bool same = true, differs = false;
    for (FileId f = 0; f < 2; ++f)
        for (VertexId p = 0; p < 6; ++p) {
            auto pa = a.packet(p, f), pb = b.packet(p, f), pc = c.packet(p, f);
            if (!std::equal(pa.begin(), pa.end(), pb.begin())) same = false;
            if (!std::equal(pa.begin(), pa.end(), pc.begin())) differs = true;
        }
    CHECK(same);
    CHECK(differs);

    PacketLibrary lib = PacketLibrary::from_buffers({{1, 2, 3}, {9, 8, 7, 6, 5, 4, 3, 2}}, 4, 2);
    CHECK(lib.file_count() == 2);
    CHECK(lib.original_length(0) == 3);
    CHECK(lib.original_length(1) == 8);
    CHECK(lib.file_bytes(0) == std::vector<std::uint8_t>{1, 2, 3});
    CHECK(lib.file_bytes(1) == std::vector<std::uint8_t>{9, 8, 7, 6, 5, 4, 3, 2});
    // Padding is zero.
    CHECK(lib.packet(1, 0)[1] == 0);
    CHECK(lib.packet(3, 0)[0] == 0);

    CHECK_THROWS_AS(PacketLibrary::from_buffers({{1, 2, 3}}, 1, 2), std::invalid_argument);
    CHECK_THROWS_AS(PacketLibrary::seeded_random(0, 6, 4, 1), std::invalid_argument);
}

TEST_CASE("xor_bytes_into") {
    std::vector<std::uint8_t> dst{0x00, 0xff, 0x0f, 0xf0, 1, 2, 3, 4, 5, 6, 7};
    std::vector<std::uint8_t> src{0xff, 0xff, 0x01, 0x10, 1, 2, 3, 4, 5, 6, 7};
    xor_bytes_into(dst, src);
    CHECK(dst == std::vector<std::uint8_t>{0xff, 0x00, 0x0e, 0xe0, 0, 0, 0, 0, 0, 0, 0});
    std::vector<std::uint8_t> shorter{1};
    CHECK_THROWS_AS(xor_bytes_into(dst, shorter), std::invalid_argument);
}

TEST_CASE("encoder: single-edge payload and zero library") {
    Graph g = fixture_graph("c6");
    GraphBuilder b(2);
    b.add_edge(0, 1);
    Graph pair = std::move(b).freeze();
    RsPartition p{{{Edge(0, 1)}}};
    PacketLibrary lib = PacketLibrary::seeded_random(2, 2, 8, 5);
    DeliveryBatch batch = encode_delivery(p, {1, 0}, lib);
    REQUIRE(batch.payloads.size() == 1);
    // payload = packet(0, d_1) ^ packet(1, d_0) = packet(0,0) ^ packet(1,1)
    auto x = lib.packet(0, 0), y = lib.packet(1, 1);
    for (std::size_t i = 0; i < 8; ++i)
        CHECK(batch.payloads[0][i] == (x[i] ^ y[i]));

    PacketLibrary zeros = PacketLibrary::from_buffers({{}, {}}, 2, 8);
    DeliveryBatch zb = encode_delivery(p, {1, 0}, zeros);
    for (std::uint8_t byte : zb.payloads[0]) CHECK(byte == 0);
}

TEST_CASE("parallel encoder equals the byte-wise reference") {
    Scheme s = c6_scheme();
    PacketLibrary lib = PacketLibrary::seeded_random(2, 6, 4, 77);
    for (DemandVector d : {DemandVector{0, 1, 0, 1, 0, 1}, DemandVector{1, 1, 1, 1, 1, 1},
                           DemandVector{0, 0, 1, 1, 0, 0}}) {
        DeliveryBatch fast = encode_delivery(s.p, d, lib);
        DeliveryBatch slow = reference::encode_delivery(s.p, d, lib);
        REQUIRE(fast.payloads.size() == slow.payloads.size());
        CHECK(fast.partition_id == slow.partition_id);
        for (std::size_t q = 0; q < fast.payloads.size(); ++q)
            CHECK(fast.payloads[q] == slow.payloads[q]);
    }
}

TEST_CASE("encoder rejects dimension mismatches") {
    Scheme s = c6_scheme();
    PacketLibrary lib = PacketLibrary::seeded_random(2, 6, 4, 3);
    CHECK_THROWS_AS(encode_delivery(s.p, {0, 1}, lib), std::invalid_argument); // wrong length
    CHECK_THROWS_AS(encode_delivery(s.p, {0, 1, 0, 1, 0, 2}, lib), std::invalid_argument); // bad file
    PacketLibrary small = PacketLibrary::seeded_random(2, 4, 4, 3); // K=4 < max vertex
    CHECK_THROWS_AS(encode_delivery(s.p, {0, 1, 0, 1}, small), std::invalid_argument);
}

TEST_CASE("encoding is linear in the library") {
    Scheme s = c6_scheme();
    PacketLibrary la = PacketLibrary::seeded_random(2, 6, 16, 100);
    PacketLibrary lb = PacketLibrary::seeded_random(2, 6, 16, 200);

    // XOR the two libraries file-by-file into a third.
    std::vector<std::vector<std::uint8_t>> mixed_files;
    for (FileId f = 0; f < 2; ++f) {
        std::vector<std::uint8_t> bytes;
        for (VertexId pkt = 0; pkt < 6; ++pkt) {
            auto pa = la.packet(pkt, f);
            auto pb = lb.packet(pkt, f);
            for (std::size_t i = 0; i < pa.size(); ++i)
                bytes.push_back(static_cast<std::uint8_t>(pa[i] ^ pb[i]));
        }
        mixed_files.push_back(std::move(bytes));
    }
    PacketLibrary mixed = PacketLibrary::from_buffers(std::move(mixed_files), 6, 16);

    DemandVector d{1, 0, 1, 0, 1, 0};
    DeliveryBatch ba = encode_delivery(s.p, d, la);
    DeliveryBatch bb = encode_delivery(s.p, d, lb);
    DeliveryBatch bm = encode_delivery(s.p, d, mixed);
    for (std::size_t q = 0; q < bm.payloads.size(); ++q)
        for (std::size_t i = 0; i < bm.payloads[q].size(); ++i)
            CHECK(bm.payloads[q][i] == (ba.payloads[q][i] ^ bb.payloads[q][i]));
}

TEST_CASE("user cache stores exactly the placed packets") {
    Scheme s = c6_scheme();
    PacketLibrary lib = PacketLibrary::seeded_random(3, 6, 4, 11);
    UserCache cache = UserCache::fill(0, s.pm, lib);
    CHECK(cache.stored_bytes() == 4u * 3u * 4u); // packets * files * bytes
    CHECK(cache.find_packet(0, 2) != nullptr);
    CHECK(cache.find_packet(2, 0) != nullptr);
    CHECK(cache.find_packet(1, 0) == nullptr); // neighbor packet not cached
    CHECK(cache.find_packet(5, 1) == nullptr);
    CHECK(cache.find_packet(0, 3) == nullptr); // file out of range

    auto bytes = cache.find_packet(3, 2);
    auto want = lib.packet(3, 2);
    CHECK(std::equal(want.begin(), want.end(), bytes));
}

TEST_CASE("decode: exhaustive over all demands on c6 with N=2") {
    Scheme s = c6_scheme();
    PacketLibrary lib = PacketLibrary::seeded_random(2, 6, 4, 2024);
    for (unsigned mask = 0; mask < 64; ++mask) {
        DemandVector d(6);
        for (VertexId k = 0; k < 6; ++k) d[k] = (mask >> k) & 1;
        CHECK(decodes_everything(s, lib, d));
    }
}

TEST_CASE("decode on complete K16: single-edge algebra") {
    Graph g = fixture_graph("k16-ams");
    RsPartition p = greedy_partition(g);
    Scheme s(g, p);
    PacketLibrary lib = PacketLibrary::seeded_random(3, 16, 8, 61);
    DemandVector d(16);
    for (VertexId k = 0; k < 16; ++k) d[k] = k % 3;

    DeliveryBatch batch = encode_delivery(s.p, d, lib);
    REQUIRE(batch.payloads.size() == 120);

    // User 0 holds only packet 0; packet f comes from payload {0,f} XOR
    // packet(0, d_f).
    UserCache cache = UserCache::fill(0, s.pm, lib);
    std::vector<std::uint8_t> image = decode_user(0, batch, s.pm, cache, s.p, s.index);
    for (VertexId f = 1; f < 16; ++f) {
        auto q = s.index.matching_of(0, f);
        REQUIRE(q.has_value());
        auto own = lib.packet(0, d[f]);
        auto want = lib.packet(f, d[0]);
        for (std::size_t i = 0; i < 8; ++i) {
            CHECK((batch.payloads[*q][i] ^ own[i]) == want[i]);
            CHECK(image[f * 8 + i] == want[i]);
        }
    }
}

TEST_CASE("decode from cache only on the edgeless graph") {
    Graph g = fixture_graph("edgeless-4");
    RsPartition p; // empty
    Scheme s(g, p);
    PacketLibrary lib = PacketLibrary::seeded_random(2, 4, 4, 5);
    DeliveryBatch batch = encode_delivery(s.p, {1, 0, 1, 0}, lib);
    CHECK(batch.payloads.empty());
    CHECK(decodes_everything(s, lib, {1, 0, 1, 0}));
}

TEST_CASE("decoder reports internal inconsistencies") {
    Scheme s = c6_scheme();
    PacketLibrary lib = PacketLibrary::seeded_random(2, 6, 4, 9);
    DeliveryBatch batch = encode_delivery(s.p, {0, 1, 0, 1, 0, 1}, lib);

    // A foreign cache (user 3's contents presented as user 0's) forces a
    // cache miss on a packet the placement says user 0 holds.
    UserCache wrong = UserCache::fill(3, s.pm, lib);
    CHECK_THROWS_AS(decode_user(0, batch, s.pm, wrong, s.p, s.index), DecodeConsistencyError);

    try {
        decode_user(0, batch, s.pm, wrong, s.p, s.index);
        FAIL("expected DecodeConsistencyError");
    } catch (const DecodeConsistencyError& e) {
        CHECK(e.kind() == DecodeConsistencyError::Kind::cache_miss);
        CHECK(e.user() == 0);
    }
}

TEST_CASE("scheme_params fixtures") {
    SchemeParams c6 = scheme_params(fixture_graph("c6"), fixture_partition_c6());
    CHECK(c6.rate == Rational(1, 2));
    CHECK(c6.subpacketization == 6);
    CHECK(c6.mn_required == Rational(2, 3));

    Graph k16 = fixture_graph("k16-ams");
    SchemeParams complete = scheme_params(k16, greedy_partition(k16));
    CHECK(complete.rate == Rational(15, 2));
    CHECK(complete.subpacketization == 16);
    CHECK(complete.mn_required == Rational(1, 16));

    Graph e4 = fixture_graph("edgeless-4");
    SchemeParams edgeless = scheme_params(e4, greedy_partition(e4));
    CHECK(edgeless.rate == Rational(0));

    // Verification failures pass through.
    RsPartition bad{{{Edge(0, 1)}}};
    CHECK_THROWS_AS(scheme_params(fixture_graph("c6"), bad), VerificationError);
}

TEST_CASE("K=1 degenerate scheme") {
    GraphBuilder b(1);
    Graph g = std::move(b).freeze();
    RsPartition p = greedy_partition(g);
    SchemeParams sp = scheme_params(g, p);
    CHECK(sp.rate == Rational(0));
    CHECK(sp.subpacketization == 1);

    Scheme s(g, p);
    PacketLibrary lib = PacketLibrary::seeded_random(3, 1, 4, 8);
    CHECK(decodes_everything(s, lib, {2}));
}
