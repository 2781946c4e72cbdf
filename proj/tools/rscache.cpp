// rscache: construct Ruzsa-Szemerédi graphs, partition them into induced
// matchings, and run the derived coded caching scheme end to end.
//
// Exit codes: 0 success, 1 usage/input error, 2 verification failure,
// 3 decode mismatch.

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "rscache/ams.hpp"
#include "rscache/fixtures.hpp"
#include "rscache/io.hpp"
#include "rscache/partition.hpp"
#include "rscache/rng.hpp"
#include "rscache/scheme.hpp"
#include "rscache/sim.hpp"

namespace {

using nlohmann::ordered_json;
using namespace rscache;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitVerification = 2;
constexpr int kExitDecode = 3;

struct GlobalOpts {
    std::uint64_t seed = 0;
    std::string out;
    std::string format = "json";
    bool quiet = false;
};

/// Writes to --out when given, stdout otherwise.
void emit(const GlobalOpts& g, const std::string& text) {
    if (g.out.empty()) {
        std::cout << text;
        if (!text.empty() && text.back() != '\n') std::cout << '\n';
        return;
    }
    std::ofstream f(g.out, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open output file " + g.out);
    f << text;
    if (!text.empty() && text.back() != '\n') f << '\n';
}

void note(const GlobalOpts& g, const std::string& line) {
    if (!g.quiet) std::cerr << line << "\n";
}

/// Graph argument: a fixture name (c6, triangle, k16-ams, edgeless-4) or a
/// path to an edge-list file.
Graph load_graph_arg(const std::string& arg) {
    if (is_fixture_name(arg)) return fixture_graph(arg);
    return load_graph_file(arg);
}

int cmd_gen_ams(const GlobalOpts& g, std::uint32_t c, std::uint32_t n, bool relax,
                std::uint64_t budget) {
    AmsParams params = AmsParams::make(c, n, relax);
    Graph graph = ams_graph(params, budget);
    std::ostringstream comment;
    comment << "distance-threshold graph C=" << c << " n=" << n << " K=" << graph.vertex_count()
            << (relax ? " (relaxed)" : "");
    std::ostringstream body;
    save_graph(graph, body, comment.str());
    emit(g, body.str());
    note(g, "K=" + std::to_string(graph.vertex_count()) +
                " edges=" + std::to_string(graph.edge_count()) +
                " digest=" + graph_digest(graph));
    return kExitOk;
}

int cmd_gen_random(const GlobalOpts& g, std::uint32_t vertices, double edge_prob) {
    Graph graph = random_graph(vertices, edge_prob, g.seed);
    std::ostringstream comment;
    comment << "random graph K=" << vertices << " p=" << edge_prob << " seed=" << g.seed;
    std::ostringstream body;
    save_graph(graph, body, comment.str());
    emit(g, body.str());
    note(g, "K=" + std::to_string(graph.vertex_count()) +
                " edges=" + std::to_string(graph.edge_count()) +
                " digest=" + graph_digest(graph));
    return kExitOk;
}

int cmd_partition(const GlobalOpts& g, const std::string& graph_arg, const std::string& mode,
                  std::size_t edge_limit) {
    Graph graph = load_graph_arg(graph_arg);
    RsPartition p = mode == "exact" ? exact_min_partition(graph, edge_limit)
                                    : greedy_partition(graph);
    RsParams params = verify_or_throw(graph, p);
    emit(g, partition_to_text(p));
    note(g, "r=" + params.r_avg.str() + " t=" + std::to_string(params.t) +
                " digest=" + partition_digest(p));
    return kExitOk;
}

int cmd_verify(const GlobalOpts& g, const std::string& graph_arg, const std::string& part_path) {
    Graph graph = load_graph_arg(graph_arg);
    RsPartition p = load_partition_file(part_path);
    PartitionCheck check = verify_rs_partition(graph, p);
    if (!check.ok()) {
        std::cerr << "verification failed: " << check.message() << "\n";
        return kExitVerification;
    }
    std::ostringstream os;
    os << "r=" << check.params.r_avg.str() << " t=" << check.params.t;
    emit(g, os.str());
    return kExitOk;
}

int cmd_scheme_info(const GlobalOpts& g, const std::string& graph_arg,
                    const std::string& part_path) {
    Graph graph = load_graph_arg(graph_arg);
    RsPartition p =
        part_path.empty() ? greedy_partition(graph) : load_partition_file(part_path);
    SchemeParams sp = scheme_params(graph, p);
    if (g.format == "json") {
        ordered_json j;
        j["R"] = {{"exact", sp.rate.str()}, {"value", sp.rate.to_double()}};
        j["F"] = sp.subpacketization;
        j["mn_required"] = {{"exact", sp.mn_required.str()},
                            {"value", sp.mn_required.to_double()}};
        j["t"] = sp.partition.t;
        j["r_avg"] = {{"exact", sp.partition.r_avg.str()},
                      {"value", sp.partition.r_avg.to_double()}};
        emit(g, j.dump(2));
    } else {
        std::ostringstream os;
        os << "R=" << sp.rate.str() << ", F=" << sp.subpacketization
           << ", M/N >= " << sp.mn_required.str();
        emit(g, os.str());
    }
    return kExitOk;
}

int cmd_plan(const GlobalOpts& g, double delta) {
    PlannerResult r = plan_parameters(delta);
    ordered_json j;
    j["delta"] = r.delta;
    j["C"] = r.alphabet;
    j["n_min"] = r.min_dimension;
    j["ln_K"] = r.ln_k;
    j["epsilon"] = r.epsilon;
    j["mn_lower_bound_ln"] = r.mn_lower_bound_ln;
    emit(g, j.dump(2));
    return kExitOk;
}

int cmd_exponents(const GlobalOpts& g, std::uint32_t c) {
    AmsExponents e = ams_exponents(c);
    if (g.format == "json") {
        ordered_json j;
        j["C"] = c;
        j["matching_exponent_f"] = e.matching_exponent;
        j["missing_edge_exponent_g"] = e.missing_edge_exponent;
        j["note"] = "asymptotic; vanishing terms dropped";
        emit(g, j.dump(2));
    } else {
        std::ostringstream os;
        os << "f=" << e.matching_exponent << " g=" << e.missing_edge_exponent << " (asymptotic)";
        emit(g, os.str());
    }
    return kExitOk;
}

int cmd_ingest(const GlobalOpts& g, const std::string& dir, std::uint32_t k, std::size_t b) {
    std::vector<std::string> sources;
    PacketLibrary lib = ingest_library(dir, k, b, &sources);
    emit(g, library_manifest(lib, sources));
    note(g, "N=" + std::to_string(lib.file_count()) + " K=" + std::to_string(k) +
                " B=" + std::to_string(b));
    return kExitOk;
}

struct SimulateArgs {
    std::string graph;       // fixture name or path
    std::string ams;         // "C,n"
    bool relax = false;
    std::uint32_t random_vertices = 0;
    double random_prob = 0.5;
    std::string partition_path;
    std::string partition_mode = "greedy";
    std::size_t edge_limit = 12;
    std::uint32_t files = 1;
    std::size_t packet_bytes = 64;
    std::string demands = "exhaustive";
    std::size_t demand_count = 1000;
    std::string demand_list; // "0,1;1,0"
    std::string library_dir;
};

DemandVector parse_demand_vector(const std::string& text) {
    DemandVector d;
    std::stringstream ss(text);
    std::string cell;
    while (std::getline(ss, cell, ','))
        d.push_back(static_cast<FileId>(std::stoul(cell)));
    return d;
}

int cmd_simulate(const GlobalOpts& g, const SimulateArgs& a) {
    SimConfig cfg;
    cfg.seed = g.seed;

    int sources = int(!a.graph.empty()) + int(!a.ams.empty()) + int(a.random_vertices > 0);
    if (sources != 1)
        throw CLI::ValidationError(
            "simulate", "choose exactly one graph source: --graph, --ams or --random-vertices");
    if (!a.graph.empty()) {
        if (is_fixture_name(a.graph)) {
            cfg.graph.kind = GraphSpec::Kind::fixture;
            cfg.graph.fixture = a.graph;
        } else {
            cfg.graph.kind = GraphSpec::Kind::file;
            cfg.graph.path = a.graph;
        }
    } else if (!a.ams.empty()) {
        cfg.graph.kind = GraphSpec::Kind::ams;
        std::stringstream ss(a.ams);
        char comma = 0;
        if (!(ss >> cfg.graph.ams_alphabet >> comma >> cfg.graph.ams_dimension) || comma != ',')
            throw CLI::ValidationError("simulate", "--ams expects C,n (e.g. 2,4)");
        cfg.graph.ams_relax = a.relax;
    } else {
        cfg.graph.kind = GraphSpec::Kind::random;
        cfg.graph.random_vertices = a.random_vertices;
        cfg.graph.random_edge_prob = a.random_prob;
    }

    if (!a.partition_path.empty()) {
        cfg.partition.mode = PartitionSpec::Mode::file;
        cfg.partition.path = a.partition_path;
    } else if (a.partition_mode == "exact") {
        cfg.partition.mode = PartitionSpec::Mode::exact;
        cfg.partition.exact_edge_limit = a.edge_limit;
    } else if (a.partition_mode == "greedy") {
        cfg.partition.mode = PartitionSpec::Mode::greedy;
    } else {
        throw CLI::ValidationError("simulate", "--partition-mode must be greedy or exact");
    }

    cfg.file_count = a.files;
    cfg.packet_bytes = a.packet_bytes;

    if (a.demands == "exhaustive") {
        cfg.demands.mode = DemandSpec::Mode::exhaustive;
    } else if (a.demands == "random") {
        cfg.demands.mode = DemandSpec::Mode::random;
        cfg.demands.random_count = a.demand_count;
    } else if (a.demands == "presets") {
        cfg.demands.mode = DemandSpec::Mode::presets;
    } else if (a.demands == "explicit") {
        cfg.demands.mode = DemandSpec::Mode::explicit_list;
        std::stringstream ss(a.demand_list);
        std::string vec;
        while (std::getline(ss, vec, ';'))
            if (!vec.empty()) cfg.demands.explicit_vectors.push_back(parse_demand_vector(vec));
    } else {
        throw CLI::ValidationError("simulate",
                                   "--demands must be exhaustive, random, presets or explicit");
    }

    if (!a.library_dir.empty()) {
        cfg.library.kind = LibrarySpec::Kind::directory;
        cfg.library.directory = a.library_dir;
    }

    SimReport report = run_simulation(cfg);
    if (g.format == "table")
        emit(g, render_baseline_table(report));
    else
        emit(g, report_to_json(report).dump(2));
    note(g, std::string("decode_ok=") + (report.decode_ok ? "true" : "false") + " over " +
                std::to_string(report.demand_vector_count) + " demand vectors");
    return kExitOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Ruzsa-Szemerédi graph coded caching toolkit"};
    app.require_subcommand(1);
    app.failure_message(CLI::FailureMessage::simple);

    GlobalOpts g;
    app.add_option("--seed", g.seed, "Master seed for all randomized steps")
        ->default_val("0");
    app.add_option("--out", g.out, "Write primary output to this file instead of stdout");
    app.add_option("--format", g.format, "Output format")
        ->check(CLI::IsMember({"json", "table"}))
        ->default_val("json");
    app.add_flag("--quiet", g.quiet, "Suppress summary notes on stderr");

    // gen-ams
    auto* gen_ams = app.add_subcommand(
        "gen-ams", "Generate the distance-threshold graph on [0,C)^n (edge iff the squared "
                   "distance deviates from its mean by less than n)");
    std::uint32_t ams_c = 2, ams_n = 4;
    bool ams_relax = false;
    std::uint64_t ams_budget = kDefaultVertexBudget;
    gen_ams->add_option("--c", ams_c, "Alphabet size C (>= 2)")->required();
    gen_ams->add_option("--n", ams_n, "Dimension n (even, >= 2C)")->required();
    gen_ams->add_flag("--relax", ams_relax, "Waive the n-even / n >= 2C constraints");
    gen_ams->add_option("--vertex-budget", ams_budget, "Refuse constructions past this K")
        ->default_val(kDefaultVertexBudget);

    // gen-random
    auto* gen_random =
        app.add_subcommand("gen-random", "Generate a seeded Erdos-Renyi G(K, p) graph");
    std::uint32_t rnd_vertices = 8;
    double rnd_prob = 0.5;
    gen_random->add_option("--vertices", rnd_vertices, "Vertex count K")->required();
    gen_random->add_option("--edge-prob", rnd_prob, "Edge probability in [0, 1]")->required();

    // partition
    auto* partition = app.add_subcommand(
        "partition", "Partition a graph's edges into induced matchings (greedy or exact)");
    std::string part_graph, part_mode = "greedy";
    std::size_t part_edge_limit = 12;
    partition->add_option("-g,--graph", part_graph, "Graph file or fixture name")->required();
    partition->add_option("--mode", part_mode, "greedy | exact")
        ->check(CLI::IsMember({"greedy", "exact"}))
        ->default_val("greedy");
    partition->add_option("--edge-limit", part_edge_limit,
                          "Instance size cap for the exact backtracking search")
        ->default_val(12);

    // verify
    auto* verify =
        app.add_subcommand("verify", "Check a partition against a graph and print r and t");
    std::string ver_graph, ver_part;
    verify->add_option("-g,--graph", ver_graph, "Graph file or fixture name")->required();
    verify->add_option("-p,--partition", ver_part, "Partition file")->required();

    // scheme-info
    auto* scheme_info = app.add_subcommand(
        "scheme-info", "Report the derived caching scheme parameters (R = t/K, F = K, M/N)");
    std::string si_graph, si_part;
    scheme_info->add_option("-g,--graph", si_graph, "Graph file or fixture name")->required();
    scheme_info->add_option("-p,--partition", si_part,
                            "Partition file (greedy partition when omitted)");

    // simulate
    auto* simulate = app.add_subcommand(
        "simulate", "Placement -> delivery -> decode over a demand ensemble, byte-exactly");
    SimulateArgs sim;
    simulate->add_option("--graph", sim.graph, "Graph file or fixture name");
    simulate->add_option("--ams", sim.ams, "Generate the distance graph: C,n (e.g. 2,4)");
    simulate->add_flag("--relax", sim.relax, "Waive AMS structural constraints");
    simulate->add_option("--random-vertices", sim.random_vertices,
                         "Generate a random graph with this many vertices");
    simulate->add_option("--random-edge-prob", sim.random_prob, "Random graph edge probability")
        ->default_val(0.5);
    simulate->add_option("--partition", sim.partition_path, "Partition file (else computed)");
    simulate->add_option("--partition-mode", sim.partition_mode, "greedy | exact")
        ->check(CLI::IsMember({"greedy", "exact"}))
        ->default_val("greedy");
    simulate->add_option("--edge-limit", sim.edge_limit, "Exact partition size cap")
        ->default_val(12);
    simulate->add_option("-N,--files", sim.files, "Library file count")->default_val(1);
    simulate->add_option("-B,--packet-bytes", sim.packet_bytes, "Packet size in bytes")
        ->default_val(64);
    simulate->add_option("--demands", sim.demands,
                         "exhaustive | random | presets | explicit")
        ->check(CLI::IsMember({"exhaustive", "random", "presets", "explicit"}))
        ->default_val("exhaustive");
    simulate->add_option("--demand-count", sim.demand_count, "Vector count for --demands random")
        ->default_val(1000);
    simulate->add_option("--demand-list", sim.demand_list,
                         "Explicit vectors: comma-separated entries, semicolon-separated "
                         "vectors (e.g. 0,1,0;1,0,1)");
    simulate->add_option("--library-dir", sim.library_dir,
                         "Ingest real files from this directory instead of a seeded library");

    // plan
    auto* plan = app.add_subcommand(
        "plan", "Feasible (C, n) plan for a target rate exponent delta, R = K^delta");
    double plan_delta = 1.0;
    plan->add_option("--delta", plan_delta, "Rate exponent in (0, 1]")->required();

    // exponents
    auto* exponents = app.add_subcommand(
        "exponents", "Asymptotic matching/missing-edge exponents f and g for alphabet C");
    std::uint32_t exp_c = 3;
    exponents->add_option("--c", exp_c, "Alphabet size C (>= 2)")->required();

    // ingest
    auto* ingest = app.add_subcommand(
        "ingest", "Pack a directory of files into an N x K x B packet library manifest");
    std::string ing_dir;
    std::uint32_t ing_k = 6;
    std::size_t ing_b = 64;
    ingest->add_option("--dir", ing_dir, "Directory of input files")->required();
    ingest->add_option("-K,--packets", ing_k, "Packets per file")->required();
    ingest->add_option("-B,--packet-bytes", ing_b, "Packet size in bytes")->default_val(64);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        // --help exits 0; every other parse problem is a usage error,
        // normalized from CLI11's per-type codes.
        int code = app.exit(e);
        return code == 0 ? 0 : kExitUsage;
    }

    try {
        if (gen_ams->parsed()) return cmd_gen_ams(g, ams_c, ams_n, ams_relax, ams_budget);
        if (gen_random->parsed()) return cmd_gen_random(g, rnd_vertices, rnd_prob);
        if (partition->parsed()) return cmd_partition(g, part_graph, part_mode, part_edge_limit);
        if (verify->parsed()) return cmd_verify(g, ver_graph, ver_part);
        if (scheme_info->parsed()) return cmd_scheme_info(g, si_graph, si_part);
        if (simulate->parsed()) return cmd_simulate(g, sim);
        if (plan->parsed()) return cmd_plan(g, plan_delta);
        if (exponents->parsed()) return cmd_exponents(g, exp_c);
        if (ingest->parsed()) return cmd_ingest(g, ing_dir, ing_k, ing_b);
    } catch (const VerificationError& e) {
        std::cerr << "verification failed: " << e.what() << "\n";
        return kExitVerification;
    } catch (const DecodeMismatchError& e) {
        std::cerr << e.what() << "\n";
        return kExitDecode;
    } catch (const DecodeConsistencyError& e) {
        std::cerr << "internal decode inconsistency: " << e.what() << "\n";
        return kExitDecode;
    } catch (const CLI::Error& e) {
        std::cerr << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    }
    return kExitUsage;
}
