#include <doctest.h>

#include <numeric>
#include <random>
#include <set>

#include "fairrep/bipartite3.hpp"
#include "fairrep/lab.hpp"

using namespace fairrep;
using namespace fairrep::bipartite3;

namespace {

Permutation random_perm(int n, std::mt19937_64& rng) {
    std::vector<int> im(n);
    std::iota(im.begin(), im.end(), 0);
    std::shuffle(im.begin(), im.end(), rng);
    return Permutation(std::move(im));
}

// Random three-part coloring; when divisible is set, part sizes are forced
// to multiples of n by dealing cells from a shuffled balanced pool.
ColorMatrix random_three(int n, std::mt19937_64& rng, bool divisible) {
    std::vector<int> colors(n * n);
    if (divisible) {
        int k1 = 1 + static_cast<int>(rng() % (n - 1));
        int k2 = static_cast<int>(rng() % (n - k1 + 1));
        std::vector<int> pool;
        for (int t = 0; t < k1 * n; ++t) pool.push_back(0);
        for (int t = 0; t < k2 * n; ++t) pool.push_back(1);
        while (static_cast<int>(pool.size()) < n * n) pool.push_back(2);
        std::shuffle(pool.begin(), pool.end(), rng);
        colors = pool;
    } else {
        for (auto& c : colors) c = static_cast<int>(rng() % 3);
    }
    return ColorMatrix(n, 3, std::move(colors), true);
}

std::vector<int> d3(const ColorMatrix& a, const Permutation& p) {
    std::vector<int> d(3);
    auto counts = a.counts(p);
    for (int l = 0; l < 3; ++l)
        d[l] = static_cast<int>(counts[l] - a.part_sizes()[l] / a.n);
    return d;
}

Permutation from_cycle(int n, const std::vector<int>& cycle) {
    std::vector<int> im(n);
    std::iota(im.begin(), im.end(), 0);
    for (std::size_t t = 0; t < cycle.size(); ++t)
        im[cycle[t]] = cycle[(t + 1) % cycle.size()];
    return Permutation(std::move(im));
}

Permutation rotate_images(const Permutation& p, int a, int b, int c) {
    std::vector<int> im = p.images();
    int t = im[a];
    im[a] = im[b];
    im[b] = im[c];
    im[c] = t;
    return Permutation(std::move(im));
}

}  // namespace

TEST_CASE("shift examples") {
    Permutation id = Permutation::identity(4);
    CHECK(shift(0, id) == id);
    Permutation t01 = id.swapped(0, 1);  // the transposition (1 2)
    CHECK(shift(0, t01) == id);
    Permutation c = from_cycle(4, {0, 1, 2});
    Permutation shifted = shift(0, c);
    CHECK(shifted.images() == std::vector<int>{0, 2, 1, 3});  // the transposition (2 3)
}

TEST_CASE("shift fixes the target and keeps fixed points") {
    std::mt19937_64 rng(31);
    for (int trial = 0; trial < 1000; ++trial) {
        int n = 2 + static_cast<int>(rng() % 8);
        Permutation p = random_perm(n, rng);
        int i = static_cast<int>(rng() % n);
        Permutation q = shift(i, p);
        CHECK(q(i) == i);
        if (p(i) == i) CHECK(q == p);
        for (int x = 0; x < n; ++x)
            if (p(x) == x) CHECK(q(x) == x);
    }
}

TEST_CASE("shift preserves similarity") {
    std::mt19937_64 rng(37);
    int checked = 0;
    for (int trial = 0; trial < 20000; ++trial) {
        int n = 4 + static_cast<int>(rng() % 7);
        Permutation p = random_perm(n, rng);
        Permutation q = p;
        switch (rng() % 3) {
            case 0: break;
            case 1:
                q = p.swapped(static_cast<int>(rng() % n), static_cast<int>(rng() % n));
                break;
            default: {
                int a = static_cast<int>(rng() % n);
                int b = (a + 1 + static_cast<int>(rng() % (n - 1))) % n;
                int c = (a + 1 + static_cast<int>(rng() % (n - 1))) % n;
                if (c == b) c = (std::max(b, c) + 1) % n;
                if (a != b && b != c && a != c) q = rotate_images(p, a, b, c);
                break;
            }
        }
        if (!sim(p, q)) continue;
        int i = static_cast<int>(rng() % n);
        REQUIRE(sim(shift(i, p), shift(i, q)));
        checked++;
    }
    CHECK(checked > 10000);
}

TEST_CASE("composing all shifts reaches the identity, exhaustively to n = 6") {
    for (int n = 1; n <= 6; ++n) {
        lab::for_each_permutation(n, [&](const Permutation& p) {
            Permutation cur = p;
            for (int i = 0; i < n; ++i) cur = shift(i, cur);
            REQUIRE(cur == Permutation::identity(n));
        });
    }
}

TEST_CASE("lopsided matching on row partitions") {
    std::vector<int> colors(9);
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) colors[i * 3 + j] = i;
    ColorMatrix a(3, 3, std::move(colors));
    Permutation m = lopsided_matching(a, 0, 2);
    CHECK(a.counts(m) == std::vector<long long>{1, 1, 1});
}

TEST_CASE("lopsided matching bounds and coloring structure on random instances") {
    std::mt19937_64 rng(41);
    for (int trial = 0; trial < 1500; ++trial) {
        int n = 2 + static_cast<int>(rng() % 6);
        ColorMatrix a = random_three(n, rng, false);
        int boost = static_cast<int>(rng() % 3);
        int cap = (boost + 1 + static_cast<int>(rng() % 2)) % 3;
        LopsidedDetail detail = lopsided_matching_detail(a, boost, cap);
        auto counts = a.counts(detail.matching);
        long long need = (a.part_sizes()[boost] + n - 1) / n;
        long long limit = (a.part_sizes()[cap] + n - 1) / n;
        REQUIRE(counts[boost] >= need);
        REQUIRE(counts[cap] <= limit);

        long long h_edges = 0;
        std::size_t biggest = 0, smallest = static_cast<std::size_t>(n) * n;
        REQUIRE(detail.color_classes.size() <= static_cast<std::size_t>(n));
        std::set<std::pair<int, int>> seen;
        for (const auto& cls : detail.color_classes) {
            std::set<int> rows, cols;
            for (auto [i, j] : cls) {
                REQUIRE(rows.insert(i).second);   // proper at rows
                REQUIRE(cols.insert(j).second);   // proper at columns
                REQUIRE(a.color(i, j) != cap);
                REQUIRE(seen.insert({i, j}).second);
            }
            h_edges += static_cast<long long>(cls.size());
            biggest = std::max(biggest, cls.size());
            smallest = std::min(smallest, cls.size());
        }
        REQUIRE(h_edges == a.part_sizes()[boost] + a.part_sizes()[3 - boost - cap]);
        if (h_edges > 0) {
            REQUIRE(static_cast<long long>(biggest) <= (h_edges + n - 1) / n);
            REQUIRE(static_cast<long long>(smallest) >= h_edges / n);
        }
    }
}

TEST_CASE("boundary walk stays on the property and reaches the target") {
    std::mt19937_64 rng(43);
    int walked = 0;
    for (int trial = 0; trial < 300; ++trial) {
        int n = 3 + static_cast<int>(rng() % 4);
        ColorMatrix a = random_three(n, rng, true);
        PropertyTag tag{2, PropertyTag::Sense::Minus};
        std::optional<Permutation> from, to;
        for (int tries = 0; tries < 200 && (!from || !to); ++tries) {
            Permutation p = random_perm(n, rng);
            if (!satisfies(a, p, tag)) continue;
            if (!from) from = p;
            else to = p;
        }
        if (!from || !to) continue;
        auto path = boundary_walk(a, *from, *to, tag);
        REQUIRE(path.front() == *from);
        REQUIRE(path.back() == *to);
        for (std::size_t t = 0; t + 1 < path.size(); ++t) {
            REQUIRE(sim(path[t], path[t + 1]));
            REQUIRE(satisfies(a, path[t], tag));
        }
        REQUIRE(satisfies(a, path.back(), tag));
        walked++;
    }
    CHECK(walked > 100);
}

TEST_CASE("boundary walk trivial cases") {
    ColorMatrix a(3, 3, {0, 0, 0, 1, 1, 1, 2, 2, 2});
    Permutation id = Permutation::identity(3);
    PropertyTag tag{0, PropertyTag::Sense::Plus};
    auto path = boundary_walk(a, id, id, tag);
    CHECK(path.size() == 1);
    Permutation other = id.swapped(0, 1);
    path = boundary_walk(a, id, other, tag);
    CHECK(path.size() == 2);
    CHECK_THROWS_AS(boundary_walk(a, id, id, PropertyTag{0, PropertyTag::Sense::PlusPlus}),
                    PreconditionViolation);
}

TEST_CASE("fill_square degenerate and diagonal cases") {
    Permutation sigma = Permutation::identity(5).swapped(0, 1);
    CHECK(fill_square(sigma, sigma, 0).empty());
    Permutation tau = sigma.swapped(3, 4);
    auto tris = fill_square(sigma, tau, 2);  // position 2 fixed by both
    CHECK(tris.size() <= 2);
}

TEST_CASE("fill_square on the distance-2 normal form") {
    const int n = 5;
    Permutation sigma = Permutation::identity(n).swapped(0, 1);
    Permutation tau = sigma.swapped(2, 3);
    auto tris = fill_square(sigma, tau, 0);
    CHECK(tris.size() == 6);
    std::set<std::vector<int>> vertices;
    for (const auto& t : tris)
        for (const auto& p : t) vertices.insert(p.images());
    CHECK(vertices.size() == 6);  // four corners, two interior vertices
    CHECK(vertices.count(shift(0, sigma).images()) == 1);
    CHECK(vertices.count(shift(0, tau).images()) == 1);
}

TEST_CASE("fill_square over random nearby squares") {
    std::mt19937_64 rng(47);
    long long filled = 0;
    for (int trial = 0; trial < 4000; ++trial) {
        int n = 4 + static_cast<int>(rng() % 4);
        Permutation sigma = random_perm(n, rng);
        Permutation tau = sigma;
        if (rng() % 2) {
            tau = sigma.swapped(static_cast<int>(rng() % n), static_cast<int>(rng() % n));
        } else {
            int a = static_cast<int>(rng() % n);
            int b = (a + 1 + static_cast<int>(rng() % (n - 1))) % n;
            int c = (a + 1 + static_cast<int>(rng() % (n - 1))) % n;
            if (c == b) c = (std::max(b, c) + 1) % n;
            if (a != b && b != c && a != c) tau = rotate_images(sigma, a, b, c);
        }
        if (!sim(sigma, tau)) continue;
        int i = static_cast<int>(rng() % n);
        auto tris = fill_square(sigma, tau, i);  // throws on any broken triangle
        filled += static_cast<long long>(tris.size());
    }
    CHECK(filled > 0);
}

TEST_CASE("build_disk validates on random divisible instances") {
    std::mt19937_64 rng(53);
    int disks = 0, earlies = 0;
    for (int trial = 0; trial < 200; ++trial) {
        int n = 4 + static_cast<int>(rng() % 3);
        // quotas all in [1, n-2]
        int k1 = 1 + static_cast<int>(rng() % (n - 2));
        int k2 = 1 + static_cast<int>(rng() % (n - k1 - 1));
        std::vector<int> pool;
        for (int t = 0; t < k1 * n; ++t) pool.push_back(0);
        for (int t = 0; t < k2 * n; ++t) pool.push_back(1);
        while (static_cast<int>(pool.size()) < n * n) pool.push_back(2);
        std::shuffle(pool.begin(), pool.end(), rng);
        ColorMatrix a(n, 3, pool, true);
        BuildResult built = build_disk(a);  // validates internally
        if (built.disk) {
            disks++;
            validate_disk(a, *built.disk);
        } else {
            earlies++;
            REQUIRE(built.early.has_value());
        }
    }
    CHECK(disks + earlies == 200);
    CHECK(disks > 0);
}

TEST_CASE("build_disk early exit when a corner is already exact") {
    const int n = 4;
    std::vector<int> colors(16);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) colors[i * n + j] = i < 2 ? 0 : (i == 2 ? 1 : 2);
    ColorMatrix a(n, 3, std::move(colors));
    BuildResult built = build_disk(a);
    REQUIRE(built.early.has_value());
    CHECK(d3(a, *built.early) == std::vector<int>{0, 0, 0});
}

TEST_CASE("find_rainbow on a hand-built disk and its negative") {
    ColorMatrix a(3, 3, {0, 1, 2, 2, 0, 1, 1, 2, 0});
    Permutation s1 = Permutation::identity(3);
    Permutation s2 = from_cycle(3, {0, 1, 2});
    Permutation s3 = from_cycle(3, {0, 2, 1});
    SimplicialDisk disk;
    disk.vertices = {{0, s1, 0}, {1, s2, 1}, {2, s3, 2}};
    disk.triangles = {{0, 1, 2}};
    for (auto& arc : disk.boundary_arcs) arc = {0};
    auto rainbow = find_rainbow(a, disk);
    CHECK(rainbow[0] == s1);
    CHECK(rainbow[1] == s2);
    CHECK(rainbow[2] == s3);

    SimplicialDisk bad = disk;
    bad.vertices[2].color = 1;
    bad.vertices[2].perm = s2;
    CHECK_THROWS_AS(find_rainbow(a, bad), NoRainbow);
}

TEST_CASE("resolve_triangle on the cyclic 3x3 pattern") {
    ColorMatrix a(3, 3, {0, 1, 2, 2, 0, 1, 1, 2, 0});
    Permutation s1 = Permutation::identity(3);
    Permutation s2 = from_cycle(3, {0, 1, 2});
    Permutation s3 = from_cycle(3, {0, 2, 1});
    Permutation out = resolve_triangle(a, s1, s2, s3);
    CHECK(out == s1.swapped(0, 1));
    CHECK(d3(a, out) == std::vector<int>{0, 0, 0});
}

TEST_CASE("resolve_triangle over random similar triples") {
    std::mt19937_64 rng(59);
    int resolved = 0;
    reset_resolve_safety_net_count();
    for (int trial = 0; trial < 4000 && resolved < 400; ++trial) {
        int n = 4 + static_cast<int>(rng() % 4);
        ColorMatrix a = random_three(n, rng, true);
        Permutation base = random_perm(n, rng);
        // Assemble one representative per part among the permutations within
        // distance 3 of the base (greedy over transpositions and rotations).
        std::vector<Permutation> candidates{base};
        for (int x = 0; x < n; ++x)
            for (int y = x + 1; y < n; ++y) {
                candidates.push_back(base.swapped(x, y));
                for (int z = y + 1; z < n; ++z) {
                    candidates.push_back(rotate_images(base, x, y, z));
                    candidates.push_back(rotate_images(base, x, z, y));
                }
            }
        std::array<const Permutation*, 3> byPart{nullptr, nullptr, nullptr};
        for (const auto& c : candidates) {
            auto d = d3(a, c);
            for (int l = 0; l < 3; ++l)
                if (!byPart[l] && d[l] > 0) byPart[l] = &c;
        }
        if (!byPart[0] || !byPart[1] || !byPart[2]) continue;
        if (!sim(*byPart[0], *byPart[1]) || !sim(*byPart[0], *byPart[2]) ||
            !sim(*byPart[1], *byPart[2]))
            continue;
        Permutation out = resolve_triangle(a, *byPart[0], *byPart[1], *byPart[2]);
        auto d = d3(a, out);
        for (int l = 0; l < 3; ++l) REQUIRE(std::abs(d[l]) <= 1);
        resolved++;
    }
    CHECK(resolved >= 400);
    CHECK(resolve_safety_net_count() == 0);
}

TEST_CASE("solve_three examples") {
    ColorMatrix all(4, 3, std::vector<int>(16, 0), true);
    auto [p, rep] = solve_three(all);
    CHECK(rep.counts[0] == 4);

    std::vector<int> rows(9);
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) rows[i * 3 + j] = i;
    auto [p3, rep3] = solve_three(ColorMatrix(3, 3, std::move(rows)));
    CHECK(rep3.counts == std::vector<long long>{1, 1, 1});
}

TEST_CASE("solve_three window bounds on random instances") {
    std::mt19937_64 rng(61);
    for (int trial = 0; trial < 400; ++trial) {
        int n = 4 + static_cast<int>(rng() % 5);
        ColorMatrix a = random_three(n, rng, trial % 2 == 0);
        auto [p, rep] = solve_three(a);
        for (int l = 0; l < 3; ++l) {
            long long size = a.part_sizes()[l];
            long long lo = size / n - 1, hi = (size + n - 1) / n + 1;
            REQUIRE(rep.counts[l] >= lo);
            REQUIRE(rep.counts[l] <= hi);
        }
    }
}
