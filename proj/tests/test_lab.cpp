#include <doctest.h>

#include <filesystem>

#include "fairrep/json_io.hpp"
#include "fairrep/lab.hpp"

using namespace fairrep;
using namespace fairrep::lab;

namespace {

std::string fixture_text(const std::string& file) {
    return io::read_file(std::string(FAIRREP_FIXTURES_DIR) + "/" + file);
}

}  // namespace

TEST_CASE("every named fixture reproduces its recorded verdict") {
    for (const auto& f : fixtures()) {
        CAPTURE(f.name);
        CHECK(run_fixture_check(f.checker, fixture_text(f.file)));
    }
}

TEST_CASE("treesconj0 holds on the named path instances") {
    CHECK(check_treesconj0(io::parse_interval(fixture_text("p4_example.json"))));
    for (int n = 1; n <= 10; ++n)
        CHECK(check_treesconj0(VertexPartition::path(std::vector<int>(n, 0))));
    // exhaustive verdict on the twenty-vertex instance: both conditions are
    // simultaneously satisfiable (computed by this oracle and frozen)
    CHECK(check_treesconj0(io::parse_interval(fixture_text("remark20_path.json"))));
}

TEST_CASE("equirep00 on the addition table of Z_4") {
    ColorMatrix z4 = io::parse_bipartite(fixture_text("z4_table.json"));
    CHECK_FALSE(check_full_transversal(z4));
    for (int j = 0; j < 4; ++j) CHECK(check_equirep00(z4, j));
    CHECK(check_stein(z4));
}

TEST_CASE("stein matrices have no full transversal but an almost-full one") {
    for (const char* file : {"stein4.json", "stein5.json"}) {
        ColorMatrix a = io::parse_bipartite(fixture_text(file));
        CHECK_FALSE(check_full_transversal(a));
        CHECK(check_stein(a));
    }
}

TEST_CASE("latin squares up to n = 5 admit an (n-1)-transversal") {
    for (int n = 2; n <= 5; ++n) {
        std::vector<int> colors(n * n);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) colors[i * n + j] = (i + j) % n;
        CHECK(check_stein(ColorMatrix(n, n, std::move(colors))));
    }
}

TEST_CASE("the three-C4 instance has no rainbow matching, but any subinstance does") {
    BipartiteEdgeSets host = io::parse_edge_sets(fixture_text("three_c4.json"));
    CHECK(host.max_degree() == 2);
    for (const auto& set : host.sets) CHECK(set.size() == 3);
    CHECK_FALSE(check_rainbow(host));
    for (std::size_t drop = 0; drop < host.sets.size(); ++drop) {
        BipartiteEdgeSets sub = host;
        sub.sets.erase(sub.sets.begin() + drop);
        CHECK(check_rainbow(sub));
    }
}

TEST_CASE("disjoint stars always admit a rainbow matching") {
    BipartiteEdgeSets host;
    host.left = host.right = 4;
    for (int s = 0; s < 3; ++s)
        for (int j = 0; j < 4; ++j) host.edges.push_back({s, j});
    host.sets = {{0, 1, 2, 3}, {4, 5, 6, 7}, {8, 9, 10, 11}};
    CHECK(check_rainbow(host));
}

TEST_CASE("under-representation: single sets need no slack") {
    BipartiteEdgeSets host;
    host.left = host.right = 3;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) host.edges.push_back({i, j});
    host.sets = {{0, 1, 2, 3, 4, 5, 6, 7, 8}};
    UnderrepResult r = check_underrep(host);
    CHECK(r.minimal_c == Rat(0));
    CHECK(r.within_m_half);
}

TEST_CASE("prefix fairness with one label level always holds") {
    BipartiteEdgeSets host;
    host.left = host.right = 3;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) host.edges.push_back({i, j});
    host.labels.assign(9, 1);
    CHECK(check_prefix_fair(host));
}

TEST_CASE("prefix fairness on random K_{4,4} labelings") {
    SweepConfig cfg;
    cfg.conjecture = "prefix_fair";
    cfg.n = 4;
    cfg.m = 3;
    cfg.exhaustive = false;
    cfg.samples = 60;
    cfg.seed = 5;
    SweepOutcome out = run_sweep(cfg);
    CHECK(out.tested == 60);
    CHECK(out.counterexamples.empty());
}

TEST_CASE("random treesconj0 sweep finds no counterexample") {
    SweepConfig cfg;
    cfg.conjecture = "treesconj0";
    cfg.n = 11;
    cfg.m = 3;
    cfg.exhaustive = false;
    cfg.samples = 300;
    cfg.seed = 9;
    cfg.workers = 4;
    SweepOutcome out = run_sweep(cfg);
    CHECK(out.tested == 300);
    CHECK(out.counterexamples.empty());
}

TEST_CASE("exhaustive treesconj0 sweep over short paths") {
    SweepConfig cfg;
    cfg.conjecture = "treesconj0";
    cfg.n = 7;
    cfg.m = 2;
    cfg.exhaustive = true;
    SweepOutcome out = run_sweep(cfg);
    CHECK(out.tested == 126);  // surjective 2-labelings of 7 vertices
    CHECK(out.counterexamples.empty());
}

TEST_CASE("random equirep00 sweep at m = 4 finds no counterexample") {
    SweepConfig cfg;
    cfg.conjecture = "equirep00";
    cfg.n = 5;
    cfg.m = 4;
    cfg.exhaustive = false;
    cfg.samples = 150;
    cfg.seed = 13;
    cfg.workers = 4;
    SweepOutcome out = run_sweep(cfg);
    CHECK(out.tested == 150);
    CHECK(out.counterexamples.empty());
}

TEST_CASE("underrep sweep records the extremal slack") {
    SweepConfig cfg;
    cfg.conjecture = "underrep";
    cfg.n = 3;
    cfg.m = 3;
    cfg.exhaustive = false;
    cfg.samples = 40;
    cfg.seed = 17;
    SweepOutcome out = run_sweep(cfg);
    CHECK(out.tested == 40);
    CHECK(out.counterexamples.empty());
    CHECK(out.stats.count("max_minimal_c") == 1);
}

TEST_CASE("sweeps respect budgets and reject unknown ids") {
    SweepConfig cfg;
    cfg.conjecture = "equirep00";
    cfg.n = 4;
    cfg.m = 3;
    cfg.exhaustive = true;
    cfg.budget = 1000;  // 3^16 colorings exceed this
    CHECK_THROWS_AS(run_sweep(cfg), BudgetExceeded);
    cfg.conjecture = "no_such_conjecture";
    CHECK_THROWS_AS(run_sweep(cfg), PreconditionViolation);
}

TEST_CASE("empty random family gives an empty outcome") {
    SweepConfig cfg;
    cfg.conjecture = "rainbow";
    cfg.n = 4;
    cfg.m = 3;
    cfg.exhaustive = false;
    cfg.samples = 0;
    SweepOutcome out = run_sweep(cfg);
    CHECK(out.tested == 0);
    CHECK(out.counterexamples.empty());
}

TEST_CASE("rainbow sweep on sampled hosts") {
    SweepConfig cfg;
    cfg.conjecture = "rainbow";
    cfg.n = 5;
    cfg.m = 3;
    cfg.exhaustive = false;
    cfg.samples = 500;
    cfg.seed = 21;
    cfg.workers = 4;
    SweepOutcome out = run_sweep(cfg);
    CHECK(out.counterexamples.empty());
}
