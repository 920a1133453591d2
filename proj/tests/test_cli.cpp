#include <cstdlib>
#include <sys/wait.h>

#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>

#include <catch2/catch_amalgamated.hpp>
#include <json.hpp>

#include <commdet/io.hpp>
#include <commdet/quality.hpp>

#include "oracles.hpp"

using namespace commdet;
namespace fs = std::filesystem;

namespace {

struct TempDir {
    fs::path path;
    TempDir() {
        path = fs::temp_directory_path() / ("commdet_cli_" + std::to_string(std::random_device{}()));
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
    std::string file(const std::string &name) const { return (path / name).string(); }
};

int run_cli(const std::string &args, const std::string &out_file = "/dev/null") {
    const std::string cmd = std::string(COMMDET_CLI_PATH) + " " + args + " > " + out_file + " 2>&1";
    const int status = std::system(cmd.c_str());
    return WEXITSTATUS(status);
}

std::string slurp(const std::string &path) {
    std::ifstream in(path);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

} // namespace

TEST_CASE("detect finds the barbell optimum and writes artifacts") {
    TempDir tmp;
    io::write_metis(oracles::barbell(), tmp.file("barbell.graph"));
    const int rc = run_cli("detect --algo plm --input " + tmp.file("barbell.graph") + " --threads 1 --output "
                               + tmp.file("z.part") + " --report " + tmp.file("report.json")
                               + " --community-graph " + tmp.file("cg.graph"),
                           tmp.file("out.txt"));
    REQUIRE(rc == 0);

    const Partition z = io::read_partition(tmp.file("z.part"));
    CHECK(oracles::same_relation(z, oracles::barbell_triangles()));

    auto report = nlohmann::json::parse(slurp(tmp.file("report.json")));
    CHECK(report["best_modularity"].get<double>() == Catch::Approx(5.0 / 14.0));
    CHECK(report["runs"].size() == 1);
    CHECK(report["runs"][0]["algorithm"] == "plm");

    CHECK(io::read_metis(tmp.file("cg.graph")).node_count() == 2);
}

TEST_CASE("detect is deterministic with fixed seed and one thread") {
    TempDir tmp;
    std::mt19937_64 rng(11);
    io::write_metis(oracles::random_graph(rng, 60, 0.15), tmp.file("g.graph"));
    const std::string base = "detect --algo plp --theta 0 --threads 1 --seed 7 --input " + tmp.file("g.graph");
    REQUIRE(run_cli(base + " --output " + tmp.file("a.part")) == 0);
    REQUIRE(run_cli(base + " --output " + tmp.file("b.part")) == 0);
    CHECK(slurp(tmp.file("a.part")) == slurp(tmp.file("b.part")));
}

TEST_CASE("detect with repeated runs reports reproducible modularity") {
    TempDir tmp;
    std::mt19937_64 rng(23);
    io::write_metis(oracles::random_graph(rng, 40, 0.2), tmp.file("g.graph"));
    const std::string base = "detect --algo plmr --threads 1 --seed 3 --runs 3 --input " + tmp.file("g.graph")
                             + " --report ";
    REQUIRE(run_cli(base + tmp.file("r1.json")) == 0);
    REQUIRE(run_cli(base + tmp.file("r2.json")) == 0);
    auto r1 = nlohmann::json::parse(slurp(tmp.file("r1.json")));
    auto r2 = nlohmann::json::parse(slurp(tmp.file("r2.json")));
    REQUIRE(r1["runs"].size() == 3);
    for (int i = 0; i < 3; ++i)
        CHECK(r1["runs"][i]["modularity"].get<double>() == r2["runs"][i]["modularity"].get<double>());
}

TEST_CASE("detect usage errors exit with code 2") {
    TempDir tmp;
    CHECK(run_cli("detect --algo plm --input " + tmp.file("missing.graph")) == 2);
    io::write_metis(oracles::barbell(), tmp.file("g.graph"));
    CHECK(run_cli("detect --algo nosuch --input " + tmp.file("g.graph")) == 2);
    CHECK(run_cli("detect") == 2); // missing required --input
}

TEST_CASE("score reports quality and rand index") {
    TempDir tmp;
    io::write_metis(oracles::barbell(), tmp.file("barbell.graph"));
    io::write_partition(oracles::barbell_triangles(), tmp.file("tri.part"));
    REQUIRE(run_cli("score --input " + tmp.file("barbell.graph") + " --partition " + tmp.file("tri.part")
                        + " --reference " + tmp.file("tri.part"),
                    tmp.file("out.txt")) == 0);
    const std::string out = slurp(tmp.file("out.txt"));
    CHECK(out.find("modularity 0.357142857142857") != std::string::npos);
    CHECK(out.find("coverage 0.857142857142857") != std::string::npos);
    CHECK(out.find("rand_index 1") != std::string::npos);

    io::write_partition(Partition(5, 0), tmp.file("short.part"));
    CHECK(run_cli("score --input " + tmp.file("barbell.graph") + " --partition " + tmp.file("short.part")) == 2);
}

TEST_CASE("generate emits metis graph and ground truth") {
    TempDir tmp;
    REQUIRE(run_cli("generate --n 6 --k 2 --pin 1.0 --pout 0.0 --output " + tmp.file("g.graph")
                        + " --ground-truth " + tmp.file("truth.part"),
                    tmp.file("out.txt")) == 0);
    CHECK(io::read_metis(tmp.file("g.graph")) == oracles::two_triangles());
    CHECK(oracles::same_relation(io::read_partition(tmp.file("truth.part")), oracles::barbell_triangles()));
}

TEST_CASE("bench strong mode emits one row per thread count") {
    TempDir tmp;
    REQUIRE(run_cli("bench --mode strong --algo plp --gen-n 2000 --gen-k 10 --gen-pin 0.05 --gen-pout 0.005 "
                    "--threads-list 1,2 --data " + tmp.file("bench.tsv"),
                    tmp.file("out.txt")) == 0);
    const std::string tsv = slurp(tmp.file("bench.tsv"));
    int lines = 0;
    for (char c : tsv)
        if (c == '\n')
            ++lines;
    CHECK(lines == 3); // header + 2 rows
    CHECK(tsv.find("threads\ttime_ms\tspeedup") == 0);
}

TEST_CASE("bench weak mode degenerate single entry has speedup 1") {
    TempDir tmp;
    REQUIRE(run_cli("bench --mode weak --algo plm --gen-n 500 --gen-k 5 --gen-pin 0.1 --gen-pout 0.01 "
                    "--threads-list 1 --data " + tmp.file("bench.tsv"),
                    tmp.file("out.txt")) == 0);
    const std::string tsv = slurp(tmp.file("bench.tsv"));
    CHECK(tsv.find("\t1\t") != std::string::npos); // speedup column exactly 1
}

TEST_CASE("bench rejects unknown algorithms and modes") {
    CHECK(run_cli("bench --mode strong --algo nosuch --gen-n 100 --gen-k 2 --gen-pin 0.5 --gen-pout 0.1 "
                  "--threads-list 1") == 2);
    CHECK(run_cli("bench --mode sideways --algo plm --gen-n 100 --gen-k 2 --gen-pin 0.5 --gen-pout 0.1 "
                  "--threads-list 1") == 2);
    CHECK(run_cli("bench --mode strong --algo plm --threads-list 1") == 2); // no input at all
}
