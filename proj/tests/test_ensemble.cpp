#include <random>

#include <catch2/catch_amalgamated.hpp>

#include <commdet/ensemble.hpp>
#include <commdet/quality.hpp>

#include "oracles.hpp"

using namespace commdet;

TEST_CASE("djb2 reference values") {
    CHECK(djb2(nullptr, 0) == 5381);
    const std::uint8_t one[] = {1};
    CHECK(djb2(one, 1) == 5381 * 33 + 1);
}

TEST_CASE("combine_exact on hand inputs") {
    Partition a, b;
    a.data() = {0, 0, 1, 1};
    a.set_upper_bound(2);
    b.data() = {0, 1, 1, 0};
    b.set_upper_bound(2);
    // tuples (0,0) (0,1) (1,1) (1,0) are all distinct
    Partition core = combine_exact({a, b});
    CHECK(core.compacted().upper_bound() == 4);

    CHECK(combine_exact({a}) == a.compacted());

    Partition rep = combine_exact({a, a, a});
    CHECK(oracles::same_relation(rep, a));
}

TEST_CASE("combine rejects mismatched lengths") {
    Partition a(3, 0), b(4, 0);
    CHECK_THROWS_AS(combine_exact({a, b}), std::invalid_argument);
    CHECK_THROWS_AS(combine_hashed({a, b}), std::invalid_argument);
    CHECK_THROWS_AS(combine_exact({}), std::invalid_argument);
}

TEST_CASE("combine_exact is the meet of the partition lattice") {
    std::mt19937_64 rng(64);
    for (int i = 0; i < 40; ++i) {
        const count n = 3 + i % 8;
        std::vector<Partition> inputs;
        for (int j = 0; j < 2 + i % 3; ++j)
            inputs.push_back(oracles::random_partition(rng, n, 2 + j));
        Partition core = combine_exact(inputs);
        for (const Partition &z : inputs)
            CHECK(oracles::refines(core, z));
        // any common refinement refines the core
        Partition common = oracles::random_partition(rng, n, n);
        bool all = true;
        for (const Partition &z : inputs)
            all = all && oracles::refines(common, z);
        if (all)
            CHECK(oracles::refines(common, core));
        // coarsest: joining any two core communities breaks some input
        for (node u = 0; u < n; ++u)
            for (node v = u + 1; v < n; ++v)
                if (core[u] != core[v]) {
                    bool splits_somewhere = false;
                    for (const Partition &z : inputs)
                        splits_somewhere = splits_somewhere || z[u] != z[v];
                    CHECK(splits_somewhere);
                }
    }
}

TEST_CASE("combine_hashed agrees with combine_exact") {
    std::mt19937_64 rng(4096);
    int collisions = 0;
    for (int i = 0; i < 200; ++i) {
        const count n = 4 + i % 20;
        std::vector<Partition> inputs;
        for (count j = 0; j < 2 + i % 3; ++j)
            inputs.push_back(oracles::random_partition(rng, n, 3));
        Partition hashed = combine_hashed(inputs);
        Partition exact = combine_exact(inputs);
        if (!oracles::same_relation(hashed, exact))
            ++collisions;
    }
    CHECK(collisions == 0);
}

TEST_CASE("equal tuples always share a hashed id") {
    Partition a, b;
    a.data() = {3, 7, 3, 7};
    a.set_upper_bound(8);
    b.data() = {1, 2, 1, 2};
    b.set_upper_bound(3);
    Partition core = combine_hashed({a, b});
    CHECK(core[0] == core[2]);
    CHECK(core[1] == core[3]);
    CHECK(core[0] != core[1]);
}

TEST_CASE("epp with singleton base stub equals plain plm") {
    Graph g = oracles::barbell();
    EnsembleConfig cfg;
    cfg.ensemble_size = 1;
    cfg.final_algo = Algo::plm;
    cfg.workers = 1;
    cfg.base_override = [](const Graph &graph, std::uint64_t) { return singleton_partition(graph); };
    auto [z, report] = run_epp(g, cfg);
    LouvainConfig lc;
    lc.workers = 1;
    auto [zp, rp] = run_plm(g, lc);
    CHECK(oracles::same_relation(z, zp));
}

TEST_CASE("epp finds the optimum on disjoint triangles") {
    EnsembleConfig cfg;
    cfg.ensemble_size = 4;
    cfg.workers = 1;
    auto [z, report] = run_epp(oracles::two_triangles(), cfg);
    CHECK_THAT(report.modularity, Catch::Matchers::WithinAbs(0.5, 1e-12));
    CHECK(report.algorithm == "epp");
}

TEST_CASE("epp output communities are unions of core communities") {
    std::mt19937_64 rng(21);
    for (int i = 0; i < 10; ++i) {
        Graph g = oracles::random_graph(rng, 20 + i * 3, 0.2);
        // reproduce the core communities with the same seeds, then check block structure
        EnsembleConfig cfg;
        cfg.ensemble_size = 3;
        cfg.workers = 1;
        cfg.seed = 100 + i;
        std::vector<Partition> bases;
        for (count b = 0; b < cfg.ensemble_size; ++b) {
            PlpConfig pc = cfg.base_plp;
            pc.seed = cfg.seed + b;
            pc.workers = 1;
            bases.push_back(run_plp(g, pc).first);
        }
        Partition core = combine_hashed(bases);
        auto [z, report] = run_epp(g, cfg);
        CHECK(oracles::refines(core, z));
    }
}

TEST_CASE("epp rejects bad configuration") {
    EnsembleConfig cfg;
    cfg.ensemble_size = 0;
    CHECK_THROWS_AS(run_epp(oracles::barbell(), cfg), std::invalid_argument);
    Graph empty = Graph::from_edges(3, {});
    EnsembleConfig ok;
    CHECK_THROWS_AS(run_epp(empty, ok), std::domain_error);
}
