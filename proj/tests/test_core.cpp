#include <doctest.h>

#include <random>

#include "fairrep/fairness.hpp"
#include "fairrep/json_io.hpp"
#include "fairrep/lab.hpp"

using namespace fairrep;

namespace {

Permutation random_perm(int n, std::mt19937_64& rng) {
    std::vector<int> im(n);
    std::iota(im.begin(), im.end(), 0);
    std::shuffle(im.begin(), im.end(), rng);
    return Permutation(std::move(im));
}

}  // namespace

TEST_CASE("instance validation") {
    CHECK_THROWS_AS(VertexPartition::path({0, 2}), InvalidInstance);  // class 1 missing
    CHECK_THROWS_AS(VertexPartition::cycle({0, 0}), InvalidInstance);  // too short
    CHECK_THROWS_AS(VertexPartition::power_cycle(1, {0, 0, 0}), InvalidInstance);
    CHECK_THROWS_AS(Permutation({0, 0, 1}), InvalidSolution);
    CHECK_THROWS_AS(ColorMatrix(2, 2, {0, 0, 0, 0}), InvalidInstance);  // part 2 empty
    CHECK_NOTHROW(ColorMatrix(2, 2, {0, 0, 0, 0}, true));
}

TEST_CASE("independence checks by host kind") {
    VertexPartition path = VertexPartition::path({0, 0, 1, 0});
    CHECK(path.is_independent({0, 2}));
    CHECK_FALSE(path.is_independent({1, 2}));
    VertexPartition cyc = VertexPartition::cycle({0, 0, 1, 0});
    CHECK_FALSE(cyc.is_independent({0, 3}));  // wraps
    CHECK(cyc.is_independent({0, 2}));
    VertexPartition pow = VertexPartition::power_cycle(4, std::vector<int>(10, 0));
    CHECK(pow.is_independent({0, 4}));
    CHECK_FALSE(pow.is_independent({0, 3}));
    CHECK_FALSE(pow.is_independent({0, 7}));  // cyclic distance 3
}

TEST_CASE("fairness report on the four-vertex path") {
    // classes: {v1, v2, v4} and {v3}
    VertexPartition vp = VertexPartition::path({0, 0, 1, 0});
    FairnessReport rep = fairness_report(vp, IndependentSet{{0, 2}});
    CHECK(rep.counts == std::vector<long long>{1, 1});
    CHECK(rep.deficits[0] == Rat(1, 2));
    CHECK(rep.deficits[1] == Rat(0));
    CHECK(rep.total_deficit == Rat(1, 2));
    CHECK_THROWS_AS(fairness_report(vp, IndependentSet{{0, 1}}), InvalidSolution);
}

TEST_CASE("single-class path: alternating set has deficit at most 1/2") {
    for (int n = 1; n <= 9; ++n) {
        VertexPartition vp = VertexPartition::path(std::vector<int>(n, 0));
        std::vector<int> odd;
        for (int p = 0; p < n; p += 2) odd.push_back(p);
        FairnessReport rep = fairness_report(vp, IndependentSet{odd});
        CHECK(rep.total_deficit <= Rat(1, 2));
    }
}

TEST_CASE("fairness report on a one-part matrix") {
    ColorMatrix cm(4, 1, std::vector<int>(16, 0));
    FairnessReport rep = fairness_report(cm, Permutation::identity(4));
    CHECK(rep.counts == std::vector<long long>{4});
    CHECK(rep.quotas[0] == Rat(4));
    CHECK(rep.deficits[0] == Rat(0));
}

TEST_CASE("hamming distance examples") {
    Permutation id = Permutation::identity(5);
    CHECK(hamming_distance(id, id) == 0);
    CHECK(hamming_distance(id, id.swapped(0, 1)) == 2);
    Permutation c123({1, 2, 0, 3, 4});  // three-cycle
    Permutation c132({2, 0, 1, 3, 4});
    CHECK(hamming_distance(c123, c132) == 3);
    CHECK_THROWS_AS(hamming_distance(id, Permutation::identity(4)), DimensionMismatch);
}

TEST_CASE("similarity relation") {
    Permutation id = Permutation::identity(6);
    CHECK(sim(id, id));
    CHECK(sim(id, Permutation({1, 2, 0, 3, 4, 5})));
    CHECK_FALSE(sim(id, Permutation({1, 0, 3, 2, 4, 5})));  // two disjoint swaps
}

TEST_CASE("hamming distance is a metric that never takes value 1") {
    std::mt19937_64 rng(7);
    for (int trial = 0; trial < 2000; ++trial) {
        int n = 2 + static_cast<int>(rng() % 7);
        Permutation a = random_perm(n, rng), b = random_perm(n, rng), c = random_perm(n, rng);
        int ab = hamming_distance(a, b);
        CHECK(ab == hamming_distance(b, a));
        CHECK(ab != 1);
        CHECK((ab == 0) == (a == b));
        CHECK(ab <= hamming_distance(a, c) + hamming_distance(c, b));
    }
}

TEST_CASE("signed deficits sum to zero when every part size is a multiple of n") {
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 300; ++trial) {
        int n = 2 + static_cast<int>(rng() % 5);
        int m = 1 + static_cast<int>(rng() % 3);
        // random coloring with sizes forced to multiples of n
        std::vector<int> colors(n * n);
        std::vector<int> pool;
        for (int l = 0; l < m; ++l)
            for (int t = 0; t < n; ++t) pool.push_back(l);
        // distribute n cells per "unit"; m units may not fill n*n, pad with part 0
        while (static_cast<int>(pool.size()) < n * n) pool.push_back(0);
        std::shuffle(pool.begin(), pool.end(), rng);
        std::copy_n(pool.begin(), n * n, colors.begin());
        ColorMatrix cm(n, m, colors, true);
        bool divisible = true;
        for (long long s : cm.part_sizes())
            if (s % n != 0) divisible = false;
        if (!divisible) continue;
        FairnessReport rep = fairness_report(cm, random_perm(n, rng));
        Rat sum(0);
        for (const Rat& d : rep.deficits) sum += d;
        CHECK(sum == Rat(0));
    }
}

TEST_CASE("interval JSON round trip") {
    VertexPartition vp = VertexPartition::power_cycle(4, {0, 1, 0, 2, 1, 0});
    std::string text = io::render_interval(vp);
    VertexPartition back = io::parse_interval(text);
    CHECK(back.kind == vp.kind);
    CHECK(back.s == vp.s);
    CHECK(back.classes == vp.classes);
    CHECK(io::render_interval(back) == text);
}

TEST_CASE("bipartite JSON round trip") {
    ColorMatrix cm(3, 2, {0, 0, 1, 1, 0, 1, 0, 1, 0});
    std::string text = io::render_bipartite(cm);
    ColorMatrix back = io::parse_bipartite(text);
    CHECK(back.n == cm.n);
    CHECK(back.m == cm.m);
    CHECK(back.flat() == cm.flat());
    CHECK(io::render_bipartite(back) == text);
    CHECK(io::detect_kind(text) == io::InstanceKind::Bipartite);
}

TEST_CASE("edge-set JSON round trip") {
    BipartiteEdgeSets es;
    es.left = es.right = 2;
    es.edges = {{0, 0}, {0, 1}, {1, 0}};
    es.sets = {{0, 2}, {1}};
    es.labels = {1, 2, 1};
    std::string text = io::render_edge_sets(es);
    BipartiteEdgeSets back = io::parse_edge_sets(text);
    CHECK(back.edges == es.edges);
    CHECK(back.sets == es.sets);
    CHECK(back.labels == es.labels);
    CHECK(io::render_edge_sets(back) == text);
}

TEST_CASE("rational rendering") {
    CHECK(to_string(Rat(3, 2)) == "3/2");
    CHECK(to_string(Rat(4, 2)) == "2");
    CHECK(to_string(Rat(-1, 2)) == "-1/2");
}
