// Command-line driver: community detection, scoring, synthetic graph
// generation and a strong/weak scaling benchmark harness.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include <commdet/ensemble.hpp>
#include <commdet/generator.hpp>
#include <commdet/io.hpp>
#include <commdet/louvain.hpp>
#include <commdet/plp.hpp>
#include <commdet/quality.hpp>

namespace {

using namespace commdet;

constexpr int kExitUsage = 2;
constexpr int kExitInternal = 3;

Graph load_graph(const std::string &path, const std::string &format, bool merge_duplicates) {
    if (format == "metis")
        return io::read_metis(path);
    if (format == "edges")
        return io::read_edge_list(path, merge_duplicates);
    throw input_error("unknown graph format '" + format + "'");
}

struct DetectOptions {
    std::string algo = "plm";
    std::string input;
    std::string format = "metis";
    bool merge_duplicates = false;
    int threads = 1;
    long long theta = -1;
    bool shuffle = false;
    double gamma = 1.0;
    count ensemble = 4;
    std::uint64_t seed = 1;
    unsigned runs = 1;
    std::string output;
    std::string report_path;
    std::string community_graph;
};

std::pair<Partition, RunReport> run_algorithm(const Graph &g, const DetectOptions &opt, std::uint64_t seed) {
    if (opt.algo == "plp") {
        PlpConfig cfg;
        cfg.theta = opt.theta;
        cfg.randomize_order = opt.shuffle;
        cfg.seed = seed;
        cfg.workers = opt.threads;
        return run_plp(g, cfg);
    }
    LouvainConfig lc;
    lc.gamma = opt.gamma;
    lc.seed = seed;
    lc.workers = opt.threads;
    if (opt.algo == "plm")
        return run_plm(g, lc);
    if (opt.algo == "plmr")
        return run_plmr(g, lc);
    if (opt.algo == "epp") {
        EnsembleConfig ec;
        ec.ensemble_size = opt.ensemble;
        ec.seed = seed;
        ec.workers = opt.threads;
        ec.base_plp.theta = opt.theta;
        ec.final_louvain.gamma = opt.gamma;
        return run_epp(g, ec);
    }
    throw input_error("unknown algorithm '" + opt.algo + "'");
}

int cmd_detect(const DetectOptions &opt) {
    const Graph g = load_graph(opt.input, opt.format, opt.merge_duplicates);

    std::vector<RunReport> reports;
    Partition best;
    double best_mod = -2.0;
    for (unsigned r = 0; r < opt.runs; ++r) {
        auto [z, report] = run_algorithm(g, opt, opt.seed + r);
        report.input = opt.input;
        if (report.modularity > best_mod) {
            best_mod = report.modularity;
            best = z.compacted();
        }
        reports.push_back(std::move(report));
    }

    double avg_ms = 0.0, avg_mod = 0.0, avg_cov = 0.0;
    for (const auto &r : reports) {
        avg_ms += r.total_ms;
        avg_mod += r.modularity;
        avg_cov += r.coverage;
    }
    avg_ms /= reports.size();
    avg_mod /= reports.size();
    avg_cov /= reports.size();

    std::cout << "algorithm " << opt.algo << "\n"
              << "runs " << opt.runs << "\n"
              << "threads " << opt.threads << "\n"
              << "avg_time_ms " << avg_ms << "\n"
              << "avg_modularity " << avg_mod << "\n"
              << "avg_coverage " << avg_cov << "\n"
              << "best_modularity " << best_mod << "\n"
              << "communities " << best.upper_bound() << "\n";

    if (!opt.output.empty())
        io::write_partition(best, opt.output);
    if (!opt.community_graph.empty())
        io::write_community_graph(g, best, opt.community_graph);
    if (!opt.report_path.empty()) {
        nlohmann::json j;
        j["average"] = {{"time_ms", avg_ms}, {"modularity", avg_mod}, {"coverage", avg_cov}};
        j["best_modularity"] = best_mod;
        j["runs"] = nlohmann::json::array();
        for (const auto &r : reports)
            j["runs"].push_back(r.to_json());
        auto out = io::detail::open_output(opt.report_path);
        out << j.dump(2) << "\n";
    }
    return 0;
}

struct ScoreOptions {
    std::string input;
    std::string format = "metis";
    std::string partition;
    std::string reference;
    double gamma = 1.0;
};

int cmd_score(const ScoreOptions &opt) {
    const Graph g = load_graph(opt.input, opt.format, false);
    const Partition z = io::read_partition(opt.partition);
    if (z.size() != g.node_count())
        throw input_error("partition length " + std::to_string(z.size()) + " does not match node count "
                          + std::to_string(g.node_count()));
    const QualityReport q = evaluate(g, z, opt.gamma);
    std::cout << "modularity " << q.modularity << "\n"
              << "coverage " << q.coverage << "\n"
              << "communities " << q.community_count << "\n";
    if (!opt.reference.empty()) {
        const Partition ref = io::read_partition(opt.reference);
        if (ref.size() != g.node_count())
            throw input_error("reference partition length does not match node count");
        std::cout << "rand_index " << graph_rand_index(g, z, ref) << "\n";
    }
    return 0;
}

struct GenerateOptions {
    PlantedPartitionSpec spec;
    int threads = 1;
    std::string output;
    std::string ground_truth;
};

int cmd_generate(const GenerateOptions &opt) {
    auto [g, truth] = generate_planted(opt.spec, opt.threads);
    io::write_metis(g, opt.output);
    if (!opt.ground_truth.empty())
        io::write_partition(truth.compacted(), opt.ground_truth);
    std::cout << "nodes " << g.node_count() << "\n"
              << "edges " << g.edge_count() << "\n"
              << "blocks " << opt.spec.k << "\n";
    return 0;
}

struct BenchOptions {
    std::string mode = "strong";
    std::string algo = "plm";
    std::string input;
    std::string format = "metis";
    PlantedPartitionSpec gen;
    bool use_generator = false;
    std::vector<int> threads_list{1};
    std::uint64_t seed = 1;
    long long theta = -1;
    double gamma = 1.0;
    count ensemble = 4;
    std::string data_path;
};

int cmd_bench(const BenchOptions &opt) {
    if (opt.mode != "strong" && opt.mode != "weak")
        throw input_error("unknown bench mode '" + opt.mode + "'");
    if (opt.mode == "weak" && !opt.use_generator)
        throw input_error("weak scaling requires a generator spec (--gen-n ...)");
    if (!opt.use_generator && opt.input.empty())
        throw input_error("bench needs --input or --gen-n");

    Graph fixed;
    if (opt.mode == "strong") {
        if (opt.use_generator)
            fixed = generate_planted(opt.gen, opt.threads_list.back()).first;
        else
            fixed = load_graph(opt.input, opt.format, false);
    }

    std::printf("%8s %12s %9s %12s %12s\n", "threads", "time_ms", "speedup", "modularity", "edges");
    std::ofstream data;
    if (!opt.data_path.empty()) {
        data.open(opt.data_path);
        if (!data)
            throw input_error("cannot open " + opt.data_path + " for writing");
        data << "threads\ttime_ms\tspeedup\tmodularity\tedges\n";
    }

    double base_time = 0.0;
    for (std::size_t i = 0; i < opt.threads_list.size(); ++i) {
        const int t = opt.threads_list[i];
        if (t < 1)
            throw input_error("thread counts must be >= 1");
        Graph scaled;
        const Graph *g = &fixed;
        if (opt.mode == "weak") {
            PlantedPartitionSpec s = opt.gen;
            s.n *= static_cast<count>(t);
            scaled = generate_planted(s, t).first;
            g = &scaled;
        }
        DetectOptions run;
        run.algo = opt.algo;
        run.threads = t;
        run.theta = opt.theta;
        run.gamma = opt.gamma;
        run.ensemble = opt.ensemble;
        auto [z, report] = run_algorithm(*g, run, opt.seed);
        if (i == 0)
            base_time = report.total_ms;
        const double speedup = report.total_ms > 0 ? base_time / report.total_ms : 1.0;
        std::printf("%8d %12.2f %9.3f %12.6f %12llu\n", t, report.total_ms, speedup, report.modularity,
                    static_cast<unsigned long long>(g->edge_count()));
        if (data)
            data << t << "\t" << report.total_ms << "\t" << speedup << "\t" << report.modularity << "\t"
                 << g->edge_count() << "\n";
    }
    return 0;
}

} // namespace

int main(int argc, char **argv) {
    std::cout.precision(15);
    CLI::App app{"Parallel community detection: label propagation, Louvain variants and ensembles"};
    app.require_subcommand(1);

    DetectOptions det;
    auto *detect = app.add_subcommand("detect", "Run a detection algorithm and write partition/report");
    detect->add_option("--algo", det.algo, "Algorithm: plp|plm|plmr|epp")->default_val("plm");
    detect->add_option("--input", det.input, "Input graph file")->required();
    detect->add_option("--format", det.format, "Input format: metis|edges")->default_val("metis");
    detect->add_flag("--merge-duplicates", det.merge_duplicates, "Sum weights of duplicate edge-list pairs");
    detect->add_option("--threads", det.threads, "Worker count (0 = all cores)");
    detect->add_option("--theta", det.theta, "PLP update threshold (-1: n*1e-5, min 1)");
    detect->add_flag("--shuffle", det.shuffle, "seeded random visit order for PLP");
    detect->add_option("--gamma", det.gamma, "Resolution parameter");
    detect->add_option("--ensemble", det.ensemble, "EPP ensemble size");
    detect->add_option("--seed", det.seed, "Random seed (run r uses seed+r)");
    detect->add_option("--runs", det.runs, "Number of runs; best partition kept")->check(CLI::PositiveNumber);
    detect->add_option("--output", det.output, "Write best partition here");
    detect->add_option("--report", det.report_path, "Write JSON report here");
    detect->add_option("--community-graph", det.community_graph, "Write coarse community graph here");

    ScoreOptions sc;
    auto *score = app.add_subcommand("score", "Evaluate a partition against a graph");
    score->add_option("--input", sc.input, "Input graph file")->required();
    score->add_option("--format", sc.format, "Input format: metis|edges")->default_val("metis");
    score->add_option("--partition", sc.partition, "Partition file")->required();
    score->add_option("--reference", sc.reference, "Reference partition for Rand index");
    score->add_option("--gamma", sc.gamma, "Resolution parameter");

    GenerateOptions gen;
    auto *generate = app.add_subcommand("generate", "Generate a planted-partition graph");
    generate->add_option("--n", gen.spec.n, "Number of nodes")->required();
    generate->add_option("--k", gen.spec.k, "Number of blocks")->required();
    generate->add_option("--pin", gen.spec.p_in, "Intra-block edge probability")->required();
    generate->add_option("--pout", gen.spec.p_out, "Inter-block edge probability")->required();
    generate->add_option("--seed", gen.spec.seed, "Random seed");
    generate->add_option("--threads", gen.threads, "Worker count");
    generate->add_option("--output", gen.output, "METIS output path")->required();
    generate->add_option("--ground-truth", gen.ground_truth, "Ground-truth partition output path");

    BenchOptions bench;
    auto *bm = app.add_subcommand("bench", "Strong/weak scaling benchmark");
    bm->add_option("--mode", bench.mode, "strong|weak")->default_val("strong");
    bm->add_option("--algo", bench.algo, "Algorithm: plp|plm|plmr|epp");
    bm->add_option("--input", bench.input, "Fixed input graph (strong mode)");
    bm->add_option("--format", bench.format, "Input format: metis|edges");
    auto *gn = bm->add_option("--gen-n", bench.gen.n, "Generator: base node count");
    bm->add_option("--gen-k", bench.gen.k, "Generator: block count");
    bm->add_option("--gen-pin", bench.gen.p_in, "Generator: intra probability");
    bm->add_option("--gen-pout", bench.gen.p_out, "Generator: inter probability");
    bm->add_option("--threads-list", bench.threads_list, "Thread counts, e.g. 1 2 4")->delimiter(',');
    bm->add_option("--seed", bench.seed, "Random seed");
    bm->add_option("--theta", bench.theta, "PLP update threshold");
    bm->add_option("--gamma", bench.gamma, "Resolution parameter");
    bm->add_option("--ensemble", bench.ensemble, "EPP ensemble size");
    bm->add_option("--data", bench.data_path, "TSV data file for plotting");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        if (e.get_exit_code() == 0)
            return app.exit(e); // --help
        app.exit(e);
        return kExitUsage;
    }
    bench.use_generator = gn->count() > 0;

    try {
        if (detect->parsed())
            return cmd_detect(det);
        if (score->parsed())
            return cmd_score(sc);
        if (generate->parsed())
            return cmd_generate(gen);
        if (bm->parsed())
            return cmd_bench(bench);
    } catch (const input_error &e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::invalid_argument &e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception &e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return kExitInternal;
    }
    return kExitUsage;
}
