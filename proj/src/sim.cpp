#include "rscache/sim.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstring>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "rscache/ams.hpp"
#include "rscache/fixtures.hpp"
#include "rscache/io.hpp"
#include "rscache/rng.hpp"

namespace rscache {

namespace {

using Clock = std::chrono::steady_clock;

double ms_between(Clock::time_point a, Clock::time_point b) {
    return std::chrono::duration<double, std::milli>(b - a).count();
}

Graph build_graph(const GraphSpec& spec, std::uint64_t master_seed,
                  std::optional<std::uint64_t>& graph_seed_used) {
    switch (spec.kind) {
    case GraphSpec::Kind::file:
        return load_graph_file(spec.path);
    case GraphSpec::Kind::fixture:
        return fixture_graph(spec.fixture);
    case GraphSpec::Kind::ams:
        return ams_graph(AmsParams::make(spec.ams_alphabet, spec.ams_dimension, spec.ams_relax),
                         spec.ams_vertex_budget);
    case GraphSpec::Kind::random: {
        std::uint64_t s = spec.random_seed ? *spec.random_seed : derive_seed(master_seed, 0);
        graph_seed_used = s;
        return random_graph(spec.random_vertices, spec.random_edge_prob, s);
    }
    }
    throw std::logic_error("sim: unhandled graph source");
}

RsPartition build_partition(const PartitionSpec& spec, const Graph& g) {
    switch (spec.mode) {
    case PartitionSpec::Mode::greedy:
        return greedy_partition(g);
    case PartitionSpec::Mode::exact:
        return exact_min_partition(g, spec.exact_edge_limit);
    case PartitionSpec::Mode::file:
        return load_partition_file(spec.path);
    }
    throw std::logic_error("sim: unhandled partition mode");
}

std::vector<DemandVector> build_demands(const DemandSpec& spec, VertexId user_count,
                                        std::uint32_t file_count, std::uint64_t master_seed,
                                        std::optional<std::uint64_t>& demand_seed_used) {
    switch (spec.mode) {
    case DemandSpec::Mode::exhaustive:
        return exhaustive_demands(user_count, file_count);
    case DemandSpec::Mode::random: {
        if (spec.random_count == 0)
            throw std::invalid_argument("sim: random demand mode needs a positive count");
        std::uint64_t s = spec.random_seed ? *spec.random_seed : derive_seed(master_seed, 2);
        demand_seed_used = s;
        SplitMix64 rng(s);
        std::vector<DemandVector> out(spec.random_count, DemandVector(user_count));
        for (DemandVector& d : out)
            for (FileId& f : d) f = static_cast<FileId>(rng.below(file_count));
        return out;
    }
    case DemandSpec::Mode::explicit_list: {
        if (spec.explicit_vectors.empty())
            throw std::invalid_argument("sim: explicit demand mode needs at least one vector");
        for (const DemandVector& d : spec.explicit_vectors) {
            if (d.size() != user_count)
                throw std::invalid_argument("sim: demand vector length " +
                                            std::to_string(d.size()) + " != user count " +
                                            std::to_string(user_count));
            for (FileId f : d)
                if (f >= file_count)
                    throw std::invalid_argument("sim: demanded file " + std::to_string(f) +
                                                " out of range [0, " +
                                                std::to_string(file_count) + ")");
        }
        return spec.explicit_vectors;
    }
    case DemandSpec::Mode::presets:
        return worst_case_demand_presets(user_count, file_count);
    }
    throw std::logic_error("sim: unhandled demand mode");
}

std::string rational_cell(const Rational& r) {
    std::ostringstream os;
    os << r.str() << " (" << r.to_double() << ")";
    return os.str();
}

} // namespace

DecodeMismatchError::DecodeMismatchError(VertexId user, std::size_t demand_index,
                                         VertexId packet_index)
    : std::runtime_error("decode mismatch: user " + std::to_string(user) + ", demand vector " +
                         std::to_string(demand_index) + ", packet " +
                         std::to_string(packet_index)),
      user_(user), demand_index_(demand_index), packet_index_(packet_index) {}

std::vector<DemandVector> exhaustive_demands(VertexId user_count, std::uint32_t file_count) {
    if (user_count == 0 || file_count == 0)
        throw std::invalid_argument("sim: exhaustive demands need K >= 1 and N >= 1");
    // N <= 2^32 and the cap is 1e5, so the product cannot overflow before
    // the loop stops.
    std::uint64_t total = 1;
    for (VertexId k = 0; k < user_count && total <= kExhaustiveDemandCap; ++k)
        total *= file_count;
    if (total > kExhaustiveDemandCap)
        throw std::invalid_argument("sim: exhaustive ensemble N^K exceeds the cap of " +
                                    std::to_string(kExhaustiveDemandCap) + " vectors");
    std::vector<DemandVector> out;
    out.reserve(total);
    DemandVector d(user_count, 0);
    while (true) {
        out.push_back(d);
        // Odometer: the last user's demand cycles fastest.
        VertexId k = user_count;
        while (k > 0) {
            --k;
            if (++d[k] < file_count) break;
            d[k] = 0;
            if (k == 0) return out;
        }
    }
}

std::vector<DemandVector> worst_case_demand_presets(VertexId user_count,
                                                    std::uint32_t file_count) {
    if (user_count == 0 || file_count == 0)
        throw std::invalid_argument("sim: demand presets need K >= 1 and N >= 1");
    std::vector<DemandVector> out;
    auto push_unique = [&out](DemandVector d) {
        if (std::find(out.begin(), out.end(), d) == out.end()) out.push_back(std::move(d));
    };
    push_unique(DemandVector(user_count, 0));
    DemandVector rr(user_count), rev(user_count);
    for (VertexId k = 0; k < user_count; ++k) {
        rr[k] = k % file_count;
        rev[k] = (user_count - 1 - k) % file_count;
    }
    push_unique(std::move(rr));
    push_unique(std::move(rev));
    return out;
}

PacketLibrary ingest_library(const std::filesystem::path& dir, VertexId packets_per_file,
                             std::size_t packet_bytes, std::vector<std::string>* source_paths) {
    if (!std::filesystem::is_directory(dir))
        throw std::invalid_argument("ingest: " + dir.string() + " is not a directory");
    std::vector<std::filesystem::path> paths;
    for (const auto& entry : std::filesystem::directory_iterator(dir))
        if (entry.is_regular_file()) paths.push_back(entry.path());
    std::sort(paths.begin(), paths.end(), [](const auto& a, const auto& b) {
        return a.filename().string() < b.filename().string();
    });
    if (paths.empty())
        throw std::invalid_argument("ingest: " + dir.string() + " contains no regular files");

    const std::uint64_t budget =
        static_cast<std::uint64_t>(packets_per_file) * static_cast<std::uint64_t>(packet_bytes);
    std::vector<std::vector<std::uint8_t>> buffers;
    buffers.reserve(paths.size());
    for (const auto& p : paths) {
        std::ifstream in(p, std::ios::binary);
        if (!in) throw std::runtime_error("ingest: cannot open " + p.string());
        std::vector<std::uint8_t> buf((std::istreambuf_iterator<char>(in)),
                                      std::istreambuf_iterator<char>());
        if (buf.size() > budget)
            throw std::invalid_argument("ingest: " + p.string() + " is " +
                                        std::to_string(buf.size()) +
                                        " bytes, over the K*B budget of " +
                                        std::to_string(budget));
        buffers.push_back(std::move(buf));
    }
    if (source_paths) {
        source_paths->clear();
        for (const auto& p : paths) source_paths->push_back(p.string());
    }
    return PacketLibrary::from_buffers(std::move(buffers), packets_per_file, packet_bytes);
}

SimReport run_simulation(const SimConfig& cfg) {
    if (cfg.packet_bytes == 0)
        throw std::invalid_argument("sim: packet size must be positive");

    SimReport report;
    report.seed = cfg.seed;

    auto t0 = Clock::now();
    Graph g = build_graph(cfg.graph, cfg.seed, report.graph_seed);
    auto t1 = Clock::now();
    RsPartition partition = build_partition(cfg.partition, g);
    SchemeParams params = scheme_params(g, partition); // throws VerificationError
    auto t2 = Clock::now();
    PlacementMap pm = build_placement(g);
    auto t3 = Clock::now();

    PacketLibrary lib = [&] {
        if (cfg.library.kind == LibrarySpec::Kind::directory)
            return ingest_library(cfg.library.directory, g.vertex_count(), cfg.packet_bytes);
        if (cfg.file_count == 0)
            throw std::invalid_argument("sim: file count must be positive");
        std::uint64_t s = derive_seed(cfg.seed, 1);
        report.library_seed = s;
        return PacketLibrary::seeded_random(cfg.file_count, g.vertex_count(), cfg.packet_bytes, s);
    }();
    auto t4 = Clock::now();

    const VertexId K = g.vertex_count();
    const std::uint32_t N = lib.file_count();
    const std::size_t B = lib.packet_bytes();
    const std::size_t t = partition.matchings.size();

    std::vector<DemandVector> demands =
        build_demands(cfg.demands, K, N, cfg.seed, report.demand_seed);

    MatchingIndex index(g, partition);
    std::vector<UserCache> caches;
    caches.reserve(K);
    for (VertexId k = 0; k < K; ++k) caches.push_back(UserCache::fill(k, pm, lib));

    // Padded K*B reference image per file; decode output must match it.
    std::vector<std::vector<std::uint8_t>> expected(N);
    for (FileId f = 0; f < N; ++f) {
        expected[f].resize(static_cast<std::size_t>(K) * B);
        for (VertexId pkt = 0; pkt < K; ++pkt) {
            auto src = lib.packet(pkt, f);
            std::copy(src.begin(), src.end(), expected[f].begin() + std::size_t(pkt) * B);
        }
    }

    struct Mismatch {
        std::size_t demand;
        VertexId user;
        VertexId packet;
    };
    std::optional<Mismatch> worst; // lowest (demand, user) pair wins
    std::exception_ptr error;
    std::atomic<bool> stop{false};

#pragma omp parallel for schedule(dynamic)
    for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(demands.size()); ++i) {
        if (stop.load(std::memory_order_relaxed)) continue;
        try {
            const DemandVector& d = demands[static_cast<std::size_t>(i)];
            DeliveryBatch batch = encode_delivery(partition, d, lib);
            for (VertexId k = 0; k < K && !stop.load(std::memory_order_relaxed); ++k) {
                std::vector<std::uint8_t> image =
                    decode_user(k, batch, pm, caches[k], partition, index);
                const std::vector<std::uint8_t>& want = expected[d[k]];
                if (image == want) continue;
                VertexId bad = 0;
                for (VertexId pkt = 0; pkt < K; ++pkt)
                    if (!std::equal(image.begin() + std::size_t(pkt) * B,
                                    image.begin() + std::size_t(pkt + 1) * B,
                                    want.begin() + std::size_t(pkt) * B)) {
                        bad = pkt;
                        break;
                    }
#pragma omp critical(sim_mismatch)
                {
                    if (!worst || i < static_cast<std::ptrdiff_t>(worst->demand) ||
                        (i == static_cast<std::ptrdiff_t>(worst->demand) && k < worst->user))
                        worst = Mismatch{static_cast<std::size_t>(i), k, bad};
                }
                stop.store(true, std::memory_order_relaxed);
            }
        } catch (...) {
#pragma omp critical(sim_error)
            {
                if (!error) error = std::current_exception();
            }
            stop.store(true, std::memory_order_relaxed);
        }
    }
    if (error) std::rethrow_exception(error);
    if (worst) throw DecodeMismatchError(worst->user, worst->demand, worst->packet);
    auto t5 = Clock::now();

    report.user_count = K;
    report.subpacketization = K;
    report.file_count = N;
    report.packet_bytes = B;
    report.t = t;
    report.r_avg = params.partition.r_avg;
    report.rate = params.rate;
    report.mn_required = params.mn_required;
    report.uncoded_rate = Rational(K) * (Rational(1) - params.mn_required);
    report.naive_rate = K;
    report.cache_packets_per_user = pm.per_file_count;
    report.payload_bytes_total = static_cast<std::uint64_t>(t) * B;
    report.demand_vector_count = demands.size();
    report.decode_ok = true;
    report.graph_digest = graph_digest(g);
    report.partition_digest = partition_digest(partition);
    report.wall_times.graph_ms = ms_between(t0, t1);
    report.wall_times.partition_ms = ms_between(t1, t2);
    report.wall_times.placement_ms = ms_between(t2, t3);
    report.wall_times.library_ms = ms_between(t3, t4);
    report.wall_times.simulate_ms = ms_between(t4, t5);
    return report;
}

std::vector<BaselineRow> compare_baselines(const SimReport& report) {
    const Rational fb = Rational(report.subpacketization) *
                        Rational(static_cast<std::int64_t>(report.packet_bytes));
    std::vector<BaselineRow> rows{
        {"rs-scheme", report.rate, report.rate * fb},
        {"uncoded", report.uncoded_rate, report.uncoded_rate * fb},
        {"naive", Rational(static_cast<std::int64_t>(report.naive_rate)),
         Rational(static_cast<std::int64_t>(report.naive_rate)) * fb},
    };
    std::stable_sort(rows.begin(), rows.end(),
                     [](const BaselineRow& a, const BaselineRow& b) { return a.rate < b.rate; });
    return rows;
}

nlohmann::ordered_json report_to_json(const SimReport& r) {
    auto rational = [](const Rational& q) {
        return nlohmann::ordered_json{{"exact", q.str()}, {"value", q.to_double()}};
    };
    auto opt = [](const std::optional<std::uint64_t>& v) {
        return v ? nlohmann::ordered_json(*v) : nlohmann::ordered_json(nullptr);
    };
    nlohmann::ordered_json j;
    j["K"] = r.user_count;
    j["F"] = r.subpacketization;
    j["N"] = r.file_count;
    j["B"] = r.packet_bytes;
    j["t"] = r.t;
    j["r_avg"] = rational(r.r_avg);
    j["rate_R"] = rational(r.rate);
    j["mn_required"] = rational(r.mn_required);
    j["uncoded_baseline_rate"] = rational(r.uncoded_rate);
    j["naive_rate"] = r.naive_rate;
    j["cache_packets_per_user"] = r.cache_packets_per_user;
    j["payload_bytes_total"] = r.payload_bytes_total;
    j["demand_vectors"] = r.demand_vector_count;
    j["decode_ok"] = r.decode_ok;
    j["seed"] = r.seed;
    j["graph_seed"] = opt(r.graph_seed);
    j["library_seed"] = opt(r.library_seed);
    j["demand_seed"] = opt(r.demand_seed);
    j["graph_digest"] = r.graph_digest;
    j["partition_digest"] = r.partition_digest;
    j["wall_times_ms"] = {
        {"graph", r.wall_times.graph_ms},         {"partition", r.wall_times.partition_ms},
        {"placement", r.wall_times.placement_ms}, {"library", r.wall_times.library_ms},
        {"simulate", r.wall_times.simulate_ms},
    };
    return j;
}

std::string render_baseline_table(const SimReport& report) {
    std::vector<BaselineRow> rows = compare_baselines(report);
    std::ostringstream os;
    os << "scheme      rate                total bytes per demand\n";
    for (const BaselineRow& row : rows) {
        os << row.name;
        for (std::size_t i = row.name.size(); i < 12; ++i) os << ' ';
        std::string rate = rational_cell(row.rate);
        os << rate;
        for (std::size_t i = rate.size(); i < 20; ++i) os << ' ';
        os << row.total_bytes.str() << "\n";
    }
    return os.str();
}

} // namespace rscache
