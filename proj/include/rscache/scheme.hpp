#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "rscache/graph.hpp"
#include "rscache/partition.hpp"
#include "rscache/rational.hpp"

namespace rscache {

using FileId = std::uint32_t;

/// Demand vector: d[k] is the file requested by user k. Length must equal
/// the user count K.
using DemandVector = std::vector<FileId>;

/// Per-user packet-index cache sets. One set serves all files: the
/// placement rule stores packet i of every file at user j exactly when
/// {i,j} is a non-edge (self pairs count as non-edges), so the sets are
/// symmetric and |cached_packets[j]| = K - degree(j).
struct PlacementMap {
    VertexId user_count = 0;
    std::vector<std::vector<VertexId>> cached_packets; // sorted, includes j itself
    std::vector<VertexId> per_file_count;              // K - degree(j)

    bool caches(VertexId user, VertexId packet_index) const;
};

PlacementMap build_placement(const Graph& g);

/// True iff every user fits its cache budget: (K - degree(j)) * N <=
/// mn_ratio * K * N for all j, checked in exact rational arithmetic.
bool check_memory(const PlacementMap& pm, std::uint64_t file_count, const Rational& mn_ratio);

/// N files split into K packets of B bytes each. Files shorter than K*B
/// are zero-padded; original byte counts are kept so reassembly can strip
/// the padding.
class PacketLibrary {
public:
    static PacketLibrary seeded_random(std::uint32_t file_count, VertexId packets_per_file,
                                       std::size_t packet_bytes, std::uint64_t seed);
    /// Takes whole-file buffers; each must fit in K*B bytes.
    static PacketLibrary from_buffers(std::vector<std::vector<std::uint8_t>> files,
                                      VertexId packets_per_file, std::size_t packet_bytes);

    std::uint32_t file_count() const { return file_count_; }
    VertexId packets_per_file() const { return packets_per_file_; }
    std::size_t packet_bytes() const { return packet_bytes_; }

    std::span<const std::uint8_t> packet(VertexId packet_index, FileId file) const;
    std::uint64_t original_length(FileId file) const { return original_lengths_.at(file); }
    const std::vector<std::uint64_t>& original_lengths() const { return original_lengths_; }

    /// The file's original bytes (padding stripped).
    std::vector<std::uint8_t> file_bytes(FileId file) const;

private:
    std::uint32_t file_count_ = 0;
    VertexId packets_per_file_ = 0;
    std::size_t packet_bytes_ = 0;
    std::vector<std::uint8_t> data_; // file-major, packet-minor
    std::vector<std::uint64_t> original_lengths_;
};

/// One broadcast round: payload q is the XOR attached to matching M_q, so
/// there are always exactly t payloads of B bytes.
struct DeliveryBatch {
    std::string partition_id;
    VertexId user_count = 0;
    std::uint32_t file_count = 0;
    std::size_t packet_bytes = 0;
    DemandVector demands;
    std::vector<std::vector<std::uint8_t>> payloads;
};

/// Payload q = XOR over every edge {a,b} of M_q of packet(a, d_b) and
/// packet(b, d_a). Parallel over matchings; the byte-wise serial encoder
/// in reference:: is the comparison oracle.
DeliveryBatch encode_delivery(const RsPartition& p, const DemandVector& demands,
                              const PacketLibrary& lib);

namespace reference {
DeliveryBatch encode_delivery(const RsPartition& p, const DemandVector& demands,
                              const PacketLibrary& lib);
} // namespace reference

/// A user's materialized cache contents. Reads of packets the placement
/// did not store are an error, so a simulation cannot quietly read past
/// its side information.
class UserCache {
public:
    static UserCache fill(VertexId user, const PlacementMap& pm, const PacketLibrary& lib);

    VertexId user() const { return user_; }
    std::size_t stored_bytes() const { return bytes_.size(); }

    /// nullptr when the packet index is not cached for this user.
    const std::uint8_t* find_packet(VertexId packet_index, FileId file) const;

private:
    VertexId user_ = 0;
    std::uint32_t file_count_ = 0;
    std::size_t packet_bytes_ = 0;
    std::vector<VertexId> packet_ids_; // sorted
    std::vector<std::uint8_t> bytes_;  // slot-major, file-minor
};

/// Internal-consistency failure inside the decoder; impossible on a
/// verified (graph, partition, placement) triple.
class DecodeConsistencyError : public std::runtime_error {
public:
    enum class Kind { edge_not_covered, cache_miss };

    DecodeConsistencyError(Kind kind, VertexId user, VertexId packet_index, std::size_t matching);

    Kind kind() const { return kind_; }
    VertexId user() const { return user_; }
    VertexId packet_index() const { return packet_index_; }
    std::size_t matching() const { return matching_; }

private:
    Kind kind_;
    VertexId user_;
    VertexId packet_index_;
    std::size_t matching_;
};

/// Recovers user k's demanded file as a padded K*B-byte image: cached
/// packet indices are read straight from the cache; each missing index f
/// is recovered by XORing payload q of the unique matching holding edge
/// {f,k} with the other constituent packets, all of which the induced-
/// matching property guarantees are cached.
std::vector<std::uint8_t> decode_user(VertexId user, const DeliveryBatch& batch,
                                      const PlacementMap& pm, const UserCache& cache,
                                      const RsPartition& p, const MatchingIndex& index);

struct SchemeParams {
    Rational rate;               // R = t / K
    VertexId subpacketization;   // F = K
    Rational mn_required;        // smallest feasible M/N
    RsParams partition;
};

/// Parameters of the scheme induced by (g, p); verification failures
/// propagate as VerificationError.
SchemeParams scheme_params(const Graph& g, const RsPartition& p);

/// Word-wise XOR accumulate; spans must have equal length.
void xor_bytes_into(std::span<std::uint8_t> dst, std::span<const std::uint8_t> src);

} // namespace rscache
