#include "rscache/scheme.hpp"

#include <algorithm>
#include <cstring>

#include "rscache/digest.hpp"
#include "rscache/io.hpp"
#include "rscache/rng.hpp"

namespace rscache {

bool PlacementMap::caches(VertexId user, VertexId packet_index) const {
    const auto& row = cached_packets.at(user);
    return std::binary_search(row.begin(), row.end(), packet_index);
}

PlacementMap build_placement(const Graph& g) {
    const VertexId k = g.vertex_count();
    PlacementMap pm;
    pm.user_count = k;
    pm.cached_packets.resize(k);
    pm.per_file_count.resize(k);
    for (VertexId j = 0; j < k; ++j) {
        auto& row = pm.cached_packets[j];
        row.reserve(k - g.degree(j));
        auto nbrs = g.neighbors(j);
        std::size_t at = 0;
        for (VertexId i = 0; i < k; ++i) {
            // skip neighbors; non-edges (including the self pair) are stored
            while (at < nbrs.size() && nbrs[at] < i) ++at;
            if (at < nbrs.size() && nbrs[at] == i) continue;
            row.push_back(i);
        }
        pm.per_file_count[j] = static_cast<VertexId>(row.size());
    }
    return pm;
}

bool check_memory(const PlacementMap& pm, std::uint64_t file_count, const Rational& mn_ratio) {
    if (mn_ratio < Rational(0) || mn_ratio > Rational(1))
        throw std::invalid_argument("check_memory: mn_ratio must lie in [0, 1]");
    (void)file_count; // N multiplies both sides of the budget; kept for the contract
    const auto k = static_cast<__int128>(pm.user_count);
    for (VertexId j = 0; j < pm.user_count; ++j) {
        // (K - d_j) * N <= ratio * K * N  <=>  count * den <= num * K
        if (static_cast<__int128>(pm.per_file_count[j]) * mn_ratio.den() > static_cast<__int128>(mn_ratio.num()) * k)
            return false;
    }
    return true;
}

PacketLibrary PacketLibrary::seeded_random(std::uint32_t file_count, VertexId packets_per_file,
                                           std::size_t packet_bytes, std::uint64_t seed) {
    if (file_count == 0) throw std::invalid_argument("library: need at least one file");
    if (packets_per_file == 0 || packet_bytes == 0)
        throw std::invalid_argument("library: packets_per_file and packet_bytes must be positive");
    PacketLibrary lib;
    lib.file_count_ = file_count;
    lib.packets_per_file_ = packets_per_file;
    lib.packet_bytes_ = packet_bytes;
    lib.data_.resize(static_cast<std::size_t>(file_count) * packets_per_file * packet_bytes);
    SplitMix64 rng(seed);
    rng.fill_bytes(lib.data_);
    lib.original_lengths_.assign(file_count,
                                 static_cast<std::uint64_t>(packets_per_file) * packet_bytes);
    return lib;
}

PacketLibrary PacketLibrary::from_buffers(std::vector<std::vector<std::uint8_t>> files,
                                          VertexId packets_per_file, std::size_t packet_bytes) {
    if (files.empty()) throw std::invalid_argument("library: need at least one file");
    if (packets_per_file == 0 || packet_bytes == 0)
        throw std::invalid_argument("library: packets_per_file and packet_bytes must be positive");
    const std::size_t capacity = static_cast<std::size_t>(packets_per_file) * packet_bytes;
    PacketLibrary lib;
    lib.file_count_ = static_cast<std::uint32_t>(files.size());
    lib.packets_per_file_ = packets_per_file;
    lib.packet_bytes_ = packet_bytes;
    lib.data_.assign(static_cast<std::size_t>(files.size()) * capacity, 0);
    for (std::size_t f = 0; f < files.size(); ++f) {
        if (files[f].size() > capacity)
            throw std::invalid_argument("library: file " + std::to_string(f) + " has " +
                                        std::to_string(files[f].size()) + " bytes, budget is " +
                                        std::to_string(capacity));
        std::copy(files[f].begin(), files[f].end(), lib.data_.begin() + static_cast<std::ptrdiff_t>(f * capacity));
        lib.original_lengths_.push_back(files[f].size());
    }
    return lib;
}

std::span<const std::uint8_t> PacketLibrary::packet(VertexId packet_index, FileId file) const {
    if (file >= file_count_ || packet_index >= packets_per_file_)
        throw std::out_of_range("library: packet (" + std::to_string(packet_index) + ", " +
                                std::to_string(file) + ") out of range");
    const std::size_t offset =
        (static_cast<std::size_t>(file) * packets_per_file_ + packet_index) * packet_bytes_;
    return {data_.data() + offset, packet_bytes_};
}

std::vector<std::uint8_t> PacketLibrary::file_bytes(FileId file) const {
    const std::size_t capacity = static_cast<std::size_t>(packets_per_file_) * packet_bytes_;
    const std::size_t offset = static_cast<std::size_t>(file) * capacity;
    if (file >= file_count_) throw std::out_of_range("library: file out of range");
    const std::size_t len = static_cast<std::size_t>(original_lengths_[file]);
    return {data_.begin() + static_cast<std::ptrdiff_t>(offset),
            data_.begin() + static_cast<std::ptrdiff_t>(offset + len)};
}

void xor_bytes_into(std::span<std::uint8_t> dst, std::span<const std::uint8_t> src) {
    if (dst.size() != src.size())
        throw std::invalid_argument("xor: length mismatch");
    std::size_t i = 0;
    for (; i + 8 <= dst.size(); i += 8) {
        std::uint64_t a, b;
        std::memcpy(&a, dst.data() + i, 8);
        std::memcpy(&b, src.data() + i, 8);
        a ^= b;
        std::memcpy(dst.data() + i, &a, 8);
    }
    for (; i < dst.size(); ++i) dst[i] ^= src[i];
}

namespace {

void validate_encode_inputs(const RsPartition& p, const DemandVector& demands,
                            const PacketLibrary& lib) {
    if (demands.size() != lib.packets_per_file())
        throw std::invalid_argument("encode: demand vector length " + std::to_string(demands.size()) +
                                    " does not match K = " + std::to_string(lib.packets_per_file()));
    for (FileId d : demands)
        if (d >= lib.file_count())
            throw std::invalid_argument("encode: demand " + std::to_string(d) + " out of range [0, " +
                                        std::to_string(lib.file_count()) + ")");
    for (const Matching& m : p.matchings)
        for (const Edge& e : m)
            if (e.v >= lib.packets_per_file())
                throw std::invalid_argument("encode: partition vertex " + std::to_string(e.v) +
                                            " exceeds K = " + std::to_string(lib.packets_per_file()));
}

DeliveryBatch make_batch_header(const RsPartition& p, const DemandVector& demands,
                                const PacketLibrary& lib) {
    DeliveryBatch batch;
    batch.partition_id = partition_digest(p);
    batch.user_count = lib.packets_per_file();
    batch.file_count = lib.file_count();
    batch.packet_bytes = lib.packet_bytes();
    batch.demands = demands;
    return batch;
}

} // namespace

DeliveryBatch encode_delivery(const RsPartition& p, const DemandVector& demands,
                              const PacketLibrary& lib) {
    validate_encode_inputs(p, demands, lib);
    DeliveryBatch batch = make_batch_header(p, demands, lib);
    const std::size_t t = p.matchings.size();
    batch.payloads.assign(t, std::vector<std::uint8_t>(lib.packet_bytes(), 0));
#pragma omp parallel for schedule(dynamic)
    for (std::ptrdiff_t q = 0; q < static_cast<std::ptrdiff_t>(t); ++q) {
        auto& payload = batch.payloads[static_cast<std::size_t>(q)];
        for (const Edge& e : p.matchings[static_cast<std::size_t>(q)]) {
            xor_bytes_into(payload, lib.packet(e.u, demands[e.v]));
            xor_bytes_into(payload, lib.packet(e.v, demands[e.u]));
        }
    }
    return batch;
}

namespace reference {

// Deliberately independent of the parallel encoder: gathers the 2 r_q
// packet addresses per matching first, then folds them byte by byte.
DeliveryBatch encode_delivery(const RsPartition& p, const DemandVector& demands,
                              const PacketLibrary& lib) {
    validate_encode_inputs(p, demands, lib);
    DeliveryBatch batch = make_batch_header(p, demands, lib);
    for (const Matching& m : p.matchings) {
        std::vector<std::pair<VertexId, FileId>> addresses;
        for (const Edge& e : m) {
            addresses.emplace_back(e.u, demands[e.v]);
            addresses.emplace_back(e.v, demands[e.u]);
        }
        std::vector<std::uint8_t> payload(lib.packet_bytes(), 0);
        for (const auto& [packet_index, file] : addresses) {
            auto bytes = lib.packet(packet_index, file);
            for (std::size_t i = 0; i < payload.size(); ++i)
                payload[i] = static_cast<std::uint8_t>(payload[i] ^ bytes[i]);
        }
        batch.payloads.push_back(std::move(payload));
    }
    return batch;
}

} // namespace reference

UserCache UserCache::fill(VertexId user, const PlacementMap& pm, const PacketLibrary& lib) {
    UserCache cache;
    cache.user_ = user;
    cache.file_count_ = lib.file_count();
    cache.packet_bytes_ = lib.packet_bytes();
    cache.packet_ids_ = pm.cached_packets.at(user);
    cache.bytes_.resize(cache.packet_ids_.size() * lib.file_count() * lib.packet_bytes());
    std::size_t at = 0;
    for (VertexId packet_index : cache.packet_ids_) {
        for (FileId f = 0; f < lib.file_count(); ++f) {
            auto bytes = lib.packet(packet_index, f);
            std::copy(bytes.begin(), bytes.end(), cache.bytes_.begin() + static_cast<std::ptrdiff_t>(at));
            at += lib.packet_bytes();
        }
    }
    return cache;
}

const std::uint8_t* UserCache::find_packet(VertexId packet_index, FileId file) const {
    auto it = std::lower_bound(packet_ids_.begin(), packet_ids_.end(), packet_index);
    if (it == packet_ids_.end() || *it != packet_index || file >= file_count_) return nullptr;
    const std::size_t slot = static_cast<std::size_t>(it - packet_ids_.begin());
    return bytes_.data() + (slot * file_count_ + file) * packet_bytes_;
}

DecodeConsistencyError::DecodeConsistencyError(Kind kind, VertexId user, VertexId packet_index,
                                               std::size_t matching)
    : std::runtime_error(std::string(kind == Kind::edge_not_covered
                                         ? "decode: edge not covered by any matching"
                                         : "decode: constituent packet missing from cache") +
                         " (packet " + std::to_string(packet_index) + ", user " +
                         std::to_string(user) + ", matching " +
                         (matching == Graph::npos ? std::string("-") : std::to_string(matching)) + ")"),
      kind_(kind), user_(user), packet_index_(packet_index), matching_(matching) {}

namespace {

std::span<const std::uint8_t> cached_or_throw(const UserCache& cache, VertexId packet_index,
                                              FileId file, VertexId user, VertexId wanted,
                                              std::size_t matching, std::size_t packet_bytes) {
    const std::uint8_t* ptr = cache.find_packet(packet_index, file);
    if (ptr == nullptr)
        throw DecodeConsistencyError(DecodeConsistencyError::Kind::cache_miss, user, wanted, matching);
    return {ptr, packet_bytes};
}

} // namespace

std::vector<std::uint8_t> decode_user(VertexId user, const DeliveryBatch& batch,
                                      const PlacementMap& pm, const UserCache& cache,
                                      const RsPartition& p, const MatchingIndex& index) {
    const VertexId k = pm.user_count;
    const std::size_t b = batch.packet_bytes;
    const FileId demanded = batch.demands.at(user);
    std::vector<std::uint8_t> out(static_cast<std::size_t>(k) * b, 0);

    for (VertexId f = 0; f < k; ++f) {
        std::span<std::uint8_t> dst(out.data() + static_cast<std::size_t>(f) * b, b);
        if (pm.caches(user, f)) {
            auto bytes = cached_or_throw(cache, f, demanded, user, f, Graph::npos, b);
            std::copy(bytes.begin(), bytes.end(), dst.begin());
            continue;
        }
        // {f, user} must be a graph edge, hence lie in exactly one matching.
        auto q = index.matching_of(f, user);
        if (!q)
            throw DecodeConsistencyError(DecodeConsistencyError::Kind::edge_not_covered, user, f,
                                         Graph::npos);
        std::copy(batch.payloads.at(*q).begin(), batch.payloads.at(*q).end(), dst.begin());
        for (const Edge& e : p.matchings[*q]) {
            if (e == Edge(f, user)) {
                // own edge: the payload holds packet(f, d_user) XOR
                // packet(user, d_f); cancel the latter
                xor_bytes_into(dst, cached_or_throw(cache, user, batch.demands[f], user, f, *q, b));
            } else {
                xor_bytes_into(dst, cached_or_throw(cache, e.u, batch.demands[e.v], user, f, *q, b));
                xor_bytes_into(dst, cached_or_throw(cache, e.v, batch.demands[e.u], user, f, *q, b));
            }
        }
    }
    return out;
}

SchemeParams scheme_params(const Graph& g, const RsPartition& p) {
    RsParams params = verify_or_throw(g, p);
    SchemeParams sp;
    sp.partition = params;
    sp.subpacketization = g.vertex_count();
    sp.rate = Rational(static_cast<std::int64_t>(params.t), g.vertex_count());
    sp.mn_required = required_cache_ratio(g);
    return sp;
}

} // namespace rscache
