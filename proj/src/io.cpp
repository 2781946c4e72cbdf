#include "rscache/io.hpp"

#include <fstream>
#include <limits>
#include <map>
#include <optional>
#include <sstream>

#include <json.hpp>

#include "rscache/digest.hpp"

namespace rscache {

namespace {

std::string trimmed(const std::string& line) {
    std::size_t begin = line.find_first_not_of(" \t\r");
    if (begin == std::string::npos) return "";
    std::size_t end = line.find_last_not_of(" \t\r");
    return line.substr(begin, end - begin + 1);
}

bool skippable(const std::string& line) { return line.empty() || line[0] == '#'; }

std::uint64_t parse_u64(const std::string& token, const std::string& source, std::size_t line_no,
                        const std::string& what) {
    try {
        std::size_t used = 0;
        if (token.empty() || token[0] == '-') throw std::invalid_argument("negative");
        std::uint64_t value = std::stoull(token, &used);
        if (used != token.size()) throw std::invalid_argument("trailing");
        return value;
    } catch (const std::exception&) {
        throw ParseError(source, line_no, "malformed " + what + " '" + token + "'");
    }
}

std::ifstream open_input(const std::filesystem::path& path, std::ios::openmode mode = std::ios::in) {
    std::ifstream in(path, mode);
    if (!in) throw std::runtime_error("cannot open " + path.string() + " for reading");
    return in;
}

std::ofstream open_output(const std::filesystem::path& path, std::ios::openmode mode = std::ios::out) {
    std::ofstream out(path, mode);
    if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
    return out;
}

} // namespace

Graph load_graph(std::istream& in, const std::string& source) {
    std::string raw;
    std::size_t line_no = 0;
    std::optional<VertexId> vertex_count;
    std::optional<GraphBuilder> builder;
    std::map<Edge, std::size_t> seen; // edge -> first line, for dup diagnostics

    while (std::getline(in, raw)) {
        ++line_no;
        std::string line = trimmed(raw);
        if (skippable(line)) continue;
        std::istringstream fields(line);
        if (!vertex_count) {
            std::string key, value, extra;
            fields >> key >> value;
            if (key != "K" || value.empty() || fields >> extra)
                throw ParseError(source, line_no, "expected header 'K <count>'");
            std::uint64_t k = parse_u64(value, source, line_no, "vertex count");
            if (k == 0) throw ParseError(source, line_no, "vertex count must be positive");
            if (k > std::numeric_limits<VertexId>::max())
                throw ParseError(source, line_no, "vertex count too large");
            vertex_count = static_cast<VertexId>(k);
            builder.emplace(*vertex_count);
            continue;
        }
        std::string a, b, extra;
        fields >> a >> b;
        if (b.empty() || fields >> extra)
            throw ParseError(source, line_no, "expected edge line 'u v'");
        std::uint64_t u = parse_u64(a, source, line_no, "vertex");
        std::uint64_t v = parse_u64(b, source, line_no, "vertex");
        if (u == v) throw ParseError(source, line_no, "self-loop at vertex " + a);
        if (u > v) throw ParseError(source, line_no, "edge must be written with u < v");
        if (v >= *vertex_count)
            throw ParseError(source, line_no, "vertex " + b + " out of range [0, " +
                                                  std::to_string(*vertex_count) + ")");
        Edge e(static_cast<VertexId>(u), static_cast<VertexId>(v));
        auto [it, fresh] = seen.emplace(e, line_no);
        if (!fresh)
            throw ParseError(source, line_no, "duplicate edge " + e.str() + " (first at line " +
                                                  std::to_string(it->second) + ")");
        builder->add_edge(e.u, e.v);
    }
    if (!vertex_count) throw ParseError(source, line_no, "missing 'K <count>' header");
    return std::move(*builder).freeze();
}

Graph load_graph_file(const std::filesystem::path& path) {
    auto in = open_input(path);
    return load_graph(in, path.string());
}

std::string graph_to_text(const Graph& g) {
    std::string out = "K " + std::to_string(g.vertex_count()) + "\n";
    for (const Edge& e : g.edges())
        out += std::to_string(e.u) + " " + std::to_string(e.v) + "\n";
    return out;
}

void save_graph(const Graph& g, std::ostream& out, const std::string& comment) {
    if (!comment.empty()) out << "# " << comment << "\n";
    out << graph_to_text(g);
}

void save_graph_file(const Graph& g, const std::filesystem::path& path, const std::string& comment) {
    auto out = open_output(path);
    save_graph(g, out, comment);
}

std::string graph_digest(const Graph& g) { return to_hex(fnv1a64(graph_to_text(g))); }

RsPartition load_partition(std::istream& in, const std::string& source) {
    std::string raw;
    std::size_t line_no = 0;
    std::vector<std::optional<Matching>> slots;

    while (std::getline(in, raw)) {
        ++line_no;
        std::string line = trimmed(raw);
        if (skippable(line)) continue;
        std::size_t colon = line.find(':');
        if (colon == std::string::npos)
            throw ParseError(source, line_no, "expected 'id: u v; u v; ...'");
        std::uint64_t id = parse_u64(trimmed(line.substr(0, colon)), source, line_no, "matching id");
        if (id >= 1u << 24) throw ParseError(source, line_no, "matching id too large");
        if (slots.size() <= id) slots.resize(id + 1);
        if (slots[id]) throw ParseError(source, line_no, "matching " + std::to_string(id) + " listed twice");

        Matching m;
        std::istringstream pairs(line.substr(colon + 1));
        std::string chunk;
        while (std::getline(pairs, chunk, ';')) {
            chunk = trimmed(chunk);
            if (chunk.empty()) continue;
            std::istringstream fields(chunk);
            std::string a, b, extra;
            fields >> a >> b;
            if (b.empty() || fields >> extra)
                throw ParseError(source, line_no, "expected edge 'u v' in '" + chunk + "'");
            std::uint64_t u = parse_u64(a, source, line_no, "vertex");
            std::uint64_t v = parse_u64(b, source, line_no, "vertex");
            if (u == v) throw ParseError(source, line_no, "self-loop at vertex " + a);
            m.emplace_back(static_cast<VertexId>(u), static_cast<VertexId>(v));
        }
        slots[id] = std::move(m);
    }

    RsPartition p;
    for (std::size_t id = 0; id < slots.size(); ++id) {
        if (!slots[id])
            throw ParseError(source, line_no, "matching ids must be gap-free: " + std::to_string(id) +
                                                  " is missing");
        p.matchings.push_back(std::move(*slots[id]));
    }
    return p;
}

RsPartition load_partition_file(const std::filesystem::path& path) {
    auto in = open_input(path);
    return load_partition(in, path.string());
}

std::string partition_to_text(const RsPartition& p) {
    std::string out;
    for (std::size_t q = 0; q < p.matchings.size(); ++q) {
        out += std::to_string(q) + ":";
        for (std::size_t i = 0; i < p.matchings[q].size(); ++i) {
            const Edge& e = p.matchings[q][i];
            out += (i == 0 ? " " : "; ") + std::to_string(e.u) + " " + std::to_string(e.v);
        }
        out += "\n";
    }
    return out;
}

void save_partition(const RsPartition& p, std::ostream& out) { out << partition_to_text(p); }

void save_partition_file(const RsPartition& p, const std::filesystem::path& path) {
    auto out = open_output(path);
    save_partition(p, out);
}

std::string partition_digest(const RsPartition& p) { return to_hex(fnv1a64(partition_to_text(p))); }

void write_delivery_batch(const DeliveryBatch& batch, std::ostream& out) {
    nlohmann::ordered_json header{
        {"partition_id", batch.partition_id},
        {"K", batch.user_count},
        {"N", batch.file_count},
        {"B", batch.packet_bytes},
        {"demands", batch.demands},
    };
    out << header.dump() << "\n";
    for (const auto& payload : batch.payloads)
        out.write(reinterpret_cast<const char*>(payload.data()),
                  static_cast<std::streamsize>(payload.size()));
}

DeliveryBatch read_delivery_batch(std::istream& in, const std::string& source) {
    std::string header_line;
    if (!std::getline(in, header_line)) throw ParseError(source, 1, "missing batch header");
    nlohmann::json header;
    try {
        header = nlohmann::json::parse(header_line);
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(source, 1, std::string("bad batch header: ") + e.what());
    }
    DeliveryBatch batch;
    try {
        batch.partition_id = header.at("partition_id").get<std::string>();
        batch.user_count = header.at("K").get<VertexId>();
        batch.file_count = header.at("N").get<std::uint32_t>();
        batch.packet_bytes = header.at("B").get<std::size_t>();
        batch.demands = header.at("demands").get<DemandVector>();
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(source, 1, std::string("bad batch header: ") + e.what());
    }
    if (batch.demands.size() != batch.user_count)
        throw ParseError(source, 1, "demand count does not match K");
    if (batch.packet_bytes == 0) throw ParseError(source, 1, "packet size must be positive");
    std::vector<std::uint8_t> payload(batch.packet_bytes);
    while (in.read(reinterpret_cast<char*>(payload.data()),
                   static_cast<std::streamsize>(payload.size())))
        batch.payloads.push_back(payload);
    if (in.gcount() != 0)
        throw ParseError(source, 1, "trailing partial payload of " + std::to_string(in.gcount()) +
                                        " bytes");
    return batch;
}

void write_delivery_batch_file(const DeliveryBatch& batch, const std::filesystem::path& path) {
    auto out = open_output(path, std::ios::out | std::ios::binary);
    write_delivery_batch(batch, out);
}

DeliveryBatch read_delivery_batch_file(const std::filesystem::path& path) {
    auto in = open_input(path, std::ios::in | std::ios::binary);
    return read_delivery_batch(in, path.string());
}

namespace {

nlohmann::ordered_json manifest_base(const PacketLibrary& lib) {
    return {
        {"N", lib.file_count()},
        {"K", lib.packets_per_file()},
        {"B", lib.packet_bytes()},
        {"original_lengths", lib.original_lengths()},
    };
}

} // namespace

std::string library_manifest(const PacketLibrary& lib, std::uint64_t seed) {
    auto j = manifest_base(lib);
    j["seed"] = seed;
    return j.dump();
}

std::string library_manifest(const PacketLibrary& lib, const std::vector<std::string>& source_paths) {
    auto j = manifest_base(lib);
    j["source_paths"] = source_paths;
    return j.dump();
}

} // namespace rscache
