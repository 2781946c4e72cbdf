#pragma once

#include <filesystem>
#include <iosfwd>
#include <stdexcept>
#include <string>

#include "rscache/graph.hpp"
#include "rscache/partition.hpp"
#include "rscache/scheme.hpp"

namespace rscache {

/// Parse failure with the input name and 1-based line number.
class ParseError : public std::runtime_error {
public:
    ParseError(const std::string& source, std::size_t line, const std::string& what)
        : std::runtime_error(source + ":" + std::to_string(line) + ": " + what),
          source_(source), line_(line) {}

    const std::string& source() const { return source_; }
    std::size_t line() const { return line_; }

private:
    std::string source_;
    std::size_t line_;
};

// Graph text format: a `K <count>` header, then one `u v` edge per line
// with 0 <= u < v < K. `#` starts a comment; blank lines are ignored.
Graph load_graph(std::istream& in, const std::string& source = "<stream>");
Graph load_graph_file(const std::filesystem::path& path);
void save_graph(const Graph& g, std::ostream& out, const std::string& comment = "");
void save_graph_file(const Graph& g, const std::filesystem::path& path,
                     const std::string& comment = "");

/// Canonical text form (no comments); digest input and save body.
std::string graph_to_text(const Graph& g);
std::string graph_digest(const Graph& g);

// Partition text format: one `q: u v; u v; ...` line per matching, with q
// the 0-indexed matching id. Ids must form a gap-free range.
RsPartition load_partition(std::istream& in, const std::string& source = "<stream>");
RsPartition load_partition_file(const std::filesystem::path& path);
void save_partition(const RsPartition& p, std::ostream& out);
void save_partition_file(const RsPartition& p, const std::filesystem::path& path);

std::string partition_to_text(const RsPartition& p);
std::string partition_digest(const RsPartition& p);

// Delivery batch: one JSON header line {partition_id, K, N, B, demands},
// then t raw payloads of B bytes each, in matching order.
void write_delivery_batch(const DeliveryBatch& batch, std::ostream& out);
DeliveryBatch read_delivery_batch(std::istream& in, const std::string& source = "<stream>");
void write_delivery_batch_file(const DeliveryBatch& batch, const std::filesystem::path& path);
DeliveryBatch read_delivery_batch_file(const std::filesystem::path& path);

/// Library manifest JSON: {N, K, B, seed | source_paths, original_lengths}.
std::string library_manifest(const PacketLibrary& lib, std::uint64_t seed);
std::string library_manifest(const PacketLibrary& lib, const std::vector<std::string>& source_paths);

} // namespace rscache
