#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "rscache/ams.hpp"
#include "rscache/graph.hpp"
#include "rscache/partition.hpp"
#include "rscache/rational.hpp"
#include "rscache/scheme.hpp"

namespace rscache {

/// Cap on exhaustive demand enumeration (N^K); keeps full sweeps cheap.
inline constexpr std::uint64_t kExhaustiveDemandCap = 100000;

struct GraphSpec {
    enum class Kind { file, ams, random, fixture };
    Kind kind = Kind::fixture;
    std::string path;    // file
    std::string fixture = "c6";
    // ams
    std::uint32_t ams_alphabet = 2;
    std::uint32_t ams_dimension = 4;
    bool ams_relax = false;
    std::uint64_t ams_vertex_budget = kDefaultVertexBudget;
    // random
    VertexId random_vertices = 8;
    double random_edge_prob = 0.5;
    std::optional<std::uint64_t> random_seed; // derived from the master seed if unset
};

struct PartitionSpec {
    enum class Mode { greedy, exact, file };
    Mode mode = Mode::greedy;
    std::string path;
    std::size_t exact_edge_limit = 12;
};

struct DemandSpec {
    enum class Mode { exhaustive, random, explicit_list, presets };
    Mode mode = Mode::exhaustive;
    std::size_t random_count = 0;
    std::optional<std::uint64_t> random_seed; // derived from the master seed if unset
    std::vector<DemandVector> explicit_vectors;
};

struct LibrarySpec {
    enum class Kind { seeded, directory };
    Kind kind = Kind::seeded;
    std::string directory;
};

struct SimConfig {
    GraphSpec graph;
    PartitionSpec partition;
    std::uint32_t file_count = 1;   // N
    std::size_t packet_bytes = 64;  // B
    DemandSpec demands;
    LibrarySpec library;
    std::uint64_t seed = 0; // master; sub-seeds derive from it (see derive_seed)
};

struct PhaseTimes {
    double graph_ms = 0;
    double partition_ms = 0;
    double placement_ms = 0;
    double library_ms = 0;
    double simulate_ms = 0;
};

struct SimReport {
    VertexId user_count = 0;       // K
    VertexId subpacketization = 0; // F = K
    std::uint32_t file_count = 0;  // N
    std::size_t packet_bytes = 0;  // B
    std::size_t t = 0;
    Rational r_avg;
    Rational rate;            // R = t/K
    Rational mn_required;
    Rational uncoded_rate;    // K (1 - M/N)
    std::uint64_t naive_rate = 0; // K
    std::vector<VertexId> cache_packets_per_user;
    std::uint64_t payload_bytes_total = 0; // t * B, per demand vector
    std::size_t demand_vector_count = 0;
    bool decode_ok = false;
    // Master seed plus the derived sub-stream seeds actually used: stream 0
    // feeds random graph generation, stream 1 the seeded library, stream 2
    // random demand draws. Unused streams report as null.
    std::uint64_t seed = 0;
    std::optional<std::uint64_t> graph_seed;
    std::optional<std::uint64_t> library_seed;
    std::optional<std::uint64_t> demand_seed;
    std::string graph_digest;
    std::string partition_digest;
    PhaseTimes wall_times; // volatile: masked out of determinism comparisons
};

/// A decoded file that differs from the library copy. Aborts the run.
class DecodeMismatchError : public std::runtime_error {
public:
    DecodeMismatchError(VertexId user, std::size_t demand_index, VertexId packet_index);

    VertexId user() const { return user_; }
    std::size_t demand_index() const { return demand_index_; }
    VertexId packet_index() const { return packet_index_; }

private:
    VertexId user_;
    std::size_t demand_index_;
    VertexId packet_index_;
};

/// End-to-end run: build graph -> partition -> placement -> library ->
/// encode/decode every demand vector in the ensemble -> report. Demand
/// vectors are processed in parallel with private decode buffers. Throws
/// VerificationError, DecodeMismatchError or DecodeConsistencyError.
SimReport run_simulation(const SimConfig& cfg);

struct BaselineRow {
    std::string name;   // rs-scheme | uncoded | naive
    Rational rate;      // file transmissions
    Rational total_bytes; // rate * F * B
};

/// Rows ordered by measured rate, ascending; no winner is asserted.
std::vector<BaselineRow> compare_baselines(const SimReport& report);

/// Loads every regular file in dir (lexicographic by filename) into a
/// padded library. Oversized files are an error naming the K*B budget.
PacketLibrary ingest_library(const std::filesystem::path& dir, VertexId packets_per_file,
                             std::size_t packet_bytes,
                             std::vector<std::string>* source_paths = nullptr);

/// Adversarial demand presets: all-same, round-robin, reversed round-robin
/// (deduplicated, so N = 1 yields just the all-zero vector).
std::vector<DemandVector> worst_case_demand_presets(VertexId user_count, std::uint32_t file_count);

/// All N^K demand vectors in odometer order (last user fastest). Refuses
/// ensembles beyond kExhaustiveDemandCap.
std::vector<DemandVector> exhaustive_demands(VertexId user_count, std::uint32_t file_count);

nlohmann::ordered_json report_to_json(const SimReport& report);
std::string render_baseline_table(const SimReport& report);

} // namespace rscache
