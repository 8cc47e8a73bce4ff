#include "fairrep/bipartite3.hpp"

#include <algorithm>
#include <atomic>
#include <cassert>
#include <map>
#include <numeric>

#include "fairrep/bipartite2.hpp"
#include "internal_matching.hpp"

namespace fairrep::bipartite3 {

namespace {

std::vector<int> integer_quotas(const ColorMatrix& a) {
    std::vector<int> k(a.m);
    for (int l = 0; l < a.m; ++l) {
        if (a.part_sizes()[l] % a.n != 0)
            throw PreconditionViolation("part sizes must be multiples of n here");
        k[l] = static_cast<int>(a.part_sizes()[l] / a.n);
    }
    return k;
}

std::vector<int> deficits3(const ColorMatrix& a, const Permutation& p) {
    std::vector<int> d(a.m);
    auto counts = a.counts(p);
    for (int l = 0; l < a.m; ++l)
        d[l] = static_cast<int>(counts[l] - a.part_sizes()[l] / a.n);
    return d;
}

bool all_within_one(const std::vector<int>& d) {
    return std::all_of(d.begin(), d.end(), [](int x) { return -1 <= x && x <= 1; });
}

Permutation compose(const Permutation& f, const Permutation& g) {
    // (f o g)(x) = f(g(x))
    std::vector<int> im(f.size());
    for (int x = 0; x < f.size(); ++x) im[x] = f(g(x));
    return Permutation(std::move(im));
}

Permutation rotate3(const Permutation& p, int a, int b, int c) {
    // a takes b's image, b takes c's, c takes a's
    std::vector<int> im = p.images();
    int ia = im[a], ib = im[b], ic = im[c];
    im[a] = ib;
    im[b] = ic;
    im[c] = ia;
    return Permutation(std::move(im));
}

}  // namespace

// ---------------------------------------------------------------------------
// Shifts

Permutation shift(int i, const Permutation& sigma) {
    if (i < 0 || i >= sigma.size()) throw OutOfRange("shift position out of range");
    if (sigma(i) == i) return sigma;
    std::vector<int> im = sigma.images();
    int t = sigma.inverse()(i);
    im[t] = sigma(i);
    im[i] = i;
    return Permutation(std::move(im));
}

bool satisfies(const ColorMatrix& a, const Permutation& p, PropertyTag tag) {
    std::vector<int> k = integer_quotas(a);
    long long count = a.counts(p)[tag.part];
    switch (tag.sense) {
        case PropertyTag::Sense::Plus: return count >= k[tag.part];
        case PropertyTag::Sense::PlusPlus: return count > k[tag.part];
        case PropertyTag::Sense::Minus: return count <= k[tag.part];
    }
    return false;
}

// ---------------------------------------------------------------------------
// Lopsided matchings via balanced proper edge colorings

namespace {

struct EdgeColoring {
    // rc[i][c] = column of the color-c edge at row i, or -1; cc mirrors columns.
    std::vector<std::vector<int>> rc, cc;
    int n;

    explicit EdgeColoring(int n_) : rc(n_, std::vector<int>(n_, -1)),
                                    cc(n_, std::vector<int>(n_, -1)), n(n_) {}

    void place(int u, int v, int c) { rc[u][c] = v; cc[v][c] = u; }
    void erase(int u, int v, int c) { rc[u][c] = -1; cc[v][c] = -1; }

    int free_at_row(int u) const {
        for (int c = 0; c < n; ++c)
            if (rc[u][c] < 0) return c;
        return -1;
    }
    int free_at_col(int v) const {
        for (int c = 0; c < n; ++c)
            if (cc[v][c] < 0) return c;
        return -1;
    }

    void add_edge(int u, int v) {
        for (int c = 0; c < n; ++c)
            if (rc[u][c] < 0 && cc[v][c] < 0) {
                place(u, v, c);
                return;
            }
        int a = free_at_row(u);
        int b = free_at_col(v);
        if (a < 0 || b < 0) throw InternalInvariantViolation("no free color at an endpoint");
        // Swap colors a and b along the alternating path starting at v; it
        // cannot reach u, so a becomes free at both endpoints.
        std::vector<std::pair<int, int>> a_edges, b_edges;
        int col = v;
        while (true) {
            int r = cc[col][a];
            if (r < 0) break;
            a_edges.emplace_back(r, col);
            int c2 = rc[r][b];
            if (c2 < 0) break;
            b_edges.emplace_back(r, c2);
            col = c2;
        }
        for (auto [r, c] : a_edges) erase(r, c, a);
        for (auto [r, c] : b_edges) erase(r, c, b);
        for (auto [r, c] : a_edges) place(r, c, b);
        for (auto [r, c] : b_edges) place(r, c, a);
        if (rc[u][a] >= 0 || cc[v][a] >= 0)
            throw InternalInvariantViolation("alternating path swap failed");
        place(u, v, a);
    }

    std::vector<std::vector<std::pair<int, int>>> classes() const {
        std::vector<std::vector<std::pair<int, int>>> out(n);
        for (int i = 0; i < n; ++i)
            for (int c = 0; c < n; ++c)
                if (rc[i][c] >= 0) out[c].emplace_back(i, rc[i][c]);
        return out;
    }
};

// Swap two color classes along one path component of their union so the
// larger class shrinks by one. Components are paths or even cycles.
bool rebalance_step(std::vector<std::vector<std::pair<int, int>>>& classes, int big, int small) {
    int n = 0;
    for (auto& cls : classes)
        for (auto [i, j] : cls) n = std::max({n, i + 1, j + 1});
    // vertices: rows 0..n-1, columns n..2n-1
    std::vector<std::vector<std::pair<int, int>>> adj(2 * n);  // (other, which)
    auto add = [&](const std::pair<int, int>& e, int which) {
        adj[e.first].push_back({n + e.second, which});
        adj[n + e.second].push_back({e.first, which});
    };
    for (auto& e : classes[big]) add(e, 0);
    for (auto& e : classes[small]) add(e, 1);

    std::vector<char> seen(2 * n, 0);
    for (int start = 0; start < 2 * n; ++start) {
        if (seen[start] || adj[start].size() != 1) continue;  // path endpoints only
        // walk the path, counting class members
        std::vector<int> path{start};
        seen[start] = 1;
        int balance = 0;
        int cur = start, prev = -1;
        while (true) {
            int next = -1, which = -1;
            for (auto [other, w] : adj[cur])
                if (other != prev || adj[cur].size() == 1) {
                    // avoid走 back over the same edge: track by vertex since
                    // components are simple paths here
                    if (other == prev) continue;
                    next = other;
                    which = w;
                }
            if (next < 0) break;
            balance += which == 0 ? 1 : -1;
            prev = cur;
            cur = next;
            seen[cur] = 1;
            path.push_back(cur);
        }
        if (balance <= 0) continue;
        // flip this component: edges alternate along the path
        auto member = [&](int u, int v) -> std::pair<int, int> {
            int r = std::min(u, v), c = std::max(u, v) - n;
            return {r, c};
        };
        std::vector<std::pair<int, int>> flip_edges;
        for (std::size_t t = 0; t + 1 < path.size(); ++t)
            flip_edges.push_back(member(path[t], path[t + 1]));
        auto in_list = [](std::vector<std::pair<int, int>>& lst, std::pair<int, int> e) {
            return std::find(lst.begin(), lst.end(), e) != lst.end();
        };
        for (auto e : flip_edges) {
            if (in_list(classes[big], e)) {
                classes[big].erase(std::find(classes[big].begin(), classes[big].end(), e));
                classes[small].push_back(e);
            } else {
                classes[small].erase(std::find(classes[small].begin(), classes[small].end(), e));
                classes[big].push_back(e);
            }
        }
        return true;
    }
    return false;
}

}  // namespace

LopsidedDetail lopsided_matching_detail(const ColorMatrix& a, int boost, int cap) {
    if (a.m != 3) throw PreconditionViolation("three-part instance required");
    if (boost == cap || boost < 0 || cap < 0 || boost >= 3 || cap >= 3)
        throw PreconditionViolation("boost and cap must be distinct parts");
    const int n = a.n;
    const int mid = 3 - boost - cap;

    EdgeColoring coloring(n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            if (a.color(i, j) == boost || a.color(i, j) == mid) coloring.add_edge(i, j);
    auto classes = coloring.classes();

    // Rebalance until every class size is floor or ceil of the average.
    while (true) {
        int big = 0, small = 0;
        for (int c = 1; c < n; ++c) {
            if (classes[c].size() > classes[big].size()) big = c;
            if (classes[c].size() < classes[small].size()) small = c;
        }
        if (classes[big].size() <= classes[small].size() + 1) break;
        if (!rebalance_step(classes, big, small))
            throw InternalInvariantViolation("class rebalancing stalled");
    }

    int best = 0;
    long long best_boost = -1;
    for (int c = 0; c < n; ++c) {
        long long cnt = 0;
        for (auto [i, j] : classes[c])
            if (a.color(i, j) == boost) cnt++;
        if (cnt > best_boost) {
            best_boost = cnt;
            best = c;
        }
    }
    std::vector<int> row_match(n, -1);
    for (auto [i, j] : classes[best]) row_match[i] = j;
    LopsidedDetail out{detail::complete_matching(std::move(row_match)), std::move(classes), best};

    auto counts = a.counts(out.matching);
    long long boost_need = (a.part_sizes()[boost] + n - 1) / n;
    long long cap_limit = (a.part_sizes()[cap] + n - 1) / n;
    if (counts[boost] < boost_need || counts[cap] > cap_limit)
        throw InternalInvariantViolation("lopsided matching bounds violated");
    return out;
}

Permutation lopsided_matching(const ColorMatrix& a, int boost, int cap) {
    return lopsided_matching_detail(a, boost, cap).matching;
}

// ---------------------------------------------------------------------------
// Property-preserving walks

namespace {

struct Weight01 {
    const ColorMatrix* a;
    int part;
    bool complemented;
    int operator()(int i, int j) const {
        return (a->color(i, j) == part) != complemented ? 1 : 0;
    }
};

int weight_of(const Weight01& w, const Permutation& p) {
    int s = 0;
    for (int i = 0; i < p.size(); ++i) s += w(i, p(i));
    return s;
}

// One descent step toward rho: fixes the smallest admissible disagreeing
// position, keeping the weight at or above k.
Permutation descend_step(const Weight01& w, const Permutation& sigma, const Permutation& rho,
                         int k) {
    int n = sigma.size();
    int ell = weight_of(w, sigma);
    Permutation inv = sigma.inverse();
    for (int j = 0; j < n; ++j) {
        if (sigma(j) == rho(j)) continue;
        bool ok;
        if (ell >= k + 2) ok = true;
        else if (ell == k + 1) ok = w(j, rho(j)) >= w(j, sigma(j));
        else ok = w(j, rho(j)) > w(j, sigma(j));
        if (!ok) continue;
        Permutation next = sigma.swapped(j, inv(rho(j)));
        if (weight_of(w, next) >= k) return next;
    }
    throw InternalInvariantViolation("descent step unavailable");
}

std::vector<Permutation> descend_path(const Weight01& w, Permutation from, const Permutation& rho,
                                      int k) {
    std::vector<Permutation> path{from};
    while (path.back() != rho) {
        Permutation next = descend_step(w, path.back(), rho, k);
        if (hamming_distance(next, rho) >= hamming_distance(path.back(), rho))
            throw InternalInvariantViolation("descent failed to progress");
        path.push_back(std::move(next));
    }
    return path;
}

}  // namespace

std::vector<Permutation> boundary_walk(const ColorMatrix& a, const Permutation& from,
                                       const Permutation& to, PropertyTag preserve) {
    if (preserve.sense == PropertyTag::Sense::PlusPlus)
        throw PreconditionViolation("walks preserve weak properties only");
    if (!satisfies(a, from, preserve) || !satisfies(a, to, preserve))
        throw PreconditionViolation("both endpoints must satisfy the preserved property");
    const int n = a.n;
    std::vector<int> quotas = integer_quotas(a);
    const bool minus = preserve.sense == PropertyTag::Sense::Minus;
    Weight01 w{&a, preserve.part, minus};
    const int k = minus ? n - quotas[preserve.part] : quotas[preserve.part];

    if (from == to) return {from};
    if (sim(from, to)) return {from, to};

    // A strict witness makes the greedy descent available from both ends.
    auto strict = detail::complete_matching(
        detail::max_matching(n, [&](int i, int j) { return w(i, j) == 1; }));
    if (weight_of(w, strict) >= k + 1) {
        const Permutation* rho = &strict;
        if (weight_of(w, to) >= k + 1) rho = &to;
        std::vector<Permutation> head = descend_path(w, from, *rho, k);
        if (*rho == to) return head;
        std::vector<Permutation> tail = descend_path(w, to, *rho, k);
        for (auto it = tail.rbegin() + 1; it != tail.rend(); ++it) head.push_back(*it);
        return head;
    }

    // No strict witness: the weight is constant over all matchings, so any
    // transposition path stays on the property.
    std::vector<Permutation> path{from};
    while (path.back() != to) {
        const Permutation& cur = path.back();
        int i = 0;
        while (cur(i) == to(i)) i++;
        Permutation next = cur.swapped(i, cur.inverse()(to(i)));
        if (!satisfies(a, next, preserve))
            throw InternalInvariantViolation("constant-weight walk left the property");
        path.push_back(std::move(next));
    }
    return path;
}

// ---------------------------------------------------------------------------
// Square filling

namespace {

// Labels 0..3 are the corners sigma, tau, shift(tau), shift(sigma); larger
// labels are interior vertices created through the sink.
struct FillSink {
    std::function<int(const Permutation&)> interior;
    std::function<void(int, int, int)> triangle;
};

void fill_quad_rec(int la, int lb, int lb2, int la2, const Permutation& sigma,
                   const Permutation& tau, int i, FillSink& sink) {
    Permutation sigma2 = shift(i, sigma);
    Permutation tau2 = shift(i, tau);
    if (sim(sigma2, tau)) {
        sink.triangle(la, lb, la2);
        sink.triangle(lb, lb2, la2);
        return;
    }
    if (sim(sigma, tau2)) {
        sink.triangle(la, lb, lb2);
        sink.triangle(la, lb2, la2);
        return;
    }
    int d = hamming_distance(sigma, tau);
    if (d == 2) {
        // Both moved by the shift and no diagonal: the square is, up to
        // relabeling, (12) - (12)(34) - (34) - id, filled with a 4-cycle and
        // a transposition as interior vertices.
        int t = sigma.inverse()(i);
        std::vector<int> diff;
        for (int x = 0; x < sigma.size(); ++x)
            if (sigma(x) != tau(x)) diff.push_back(x);
        int p = diff[0], q = diff[1];
        if (i == p || i == q || t == p || t == q || tau.inverse()(i) != t)
            throw InternalInvariantViolation("unexpected distance-2 square shape");
        std::vector<int> cyc(sigma.size());
        std::iota(cyc.begin(), cyc.end(), 0);
        cyc[i] = t;
        cyc[t] = p;
        cyc[p] = q;
        cyc[q] = i;
        Permutation mu1 = compose(sigma2, Permutation(std::move(cyc)));
        Permutation mu2 = compose(sigma2, Permutation::identity(sigma.size()).swapped(i, q));
        int l1 = sink.interior(mu1);
        int l2 = sink.interior(mu2);
        sink.triangle(la, lb, l1);
        sink.triangle(lb, lb2, l1);
        sink.triangle(lb2, l1, l2);
        sink.triangle(lb2, la2, l2);
        sink.triangle(la2, la, l2);
        sink.triangle(la, l1, l2);
        return;
    }
    if (d != 3) throw InternalInvariantViolation("square corners too far apart");
    // Split through a midpoint at distance 2 from both corners.
    int pstar = 0;
    while (sigma(pstar) == tau(pstar)) pstar++;
    Permutation rho = sigma.swapped(pstar, sigma.inverse()(tau(pstar)));
    Permutation rho2 = shift(i, rho);
    int lr = sink.interior(rho);
    int lr2 = sink.interior(rho2);
    sink.triangle(la, lr, lb);    // cap along the outer edge
    sink.triangle(la2, lr2, lb2); // cap along the inner edge
    fill_quad_rec(la, lr, lr2, la2, sigma, rho, i, sink);
    fill_quad_rec(lr, lb, lb2, lr2, rho, tau, i, sink);
}

}  // namespace

std::vector<std::array<Permutation, 3>> fill_square(const Permutation& sigma,
                                                    const Permutation& tau, int i) {
    if (!sim(sigma, tau)) throw PreconditionViolation("corners must be similar");
    std::vector<Permutation> byLabel{sigma, tau, shift(i, tau), shift(i, sigma)};
    std::vector<std::array<Permutation, 3>> out;
    if (sigma == tau) return out;
    FillSink sink;
    sink.interior = [&](const Permutation& p) {
        byLabel.push_back(p);
        return static_cast<int>(byLabel.size()) - 1;
    };
    sink.triangle = [&](int a, int b, int c) {
        const Permutation &pa = byLabel[a], &pb = byLabel[b], &pc = byLabel[c];
        if (pa == pb || pa == pc || pb == pc) return;
        if (!sim(pa, pb) || !sim(pa, pc) || !sim(pb, pc))
            throw InternalInvariantViolation("fill produced a non-similar triangle");
        out.push_back({pa, pb, pc});
    };
    fill_quad_rec(0, 1, 2, 3, sigma, tau, i, sink);
    return out;
}

// ---------------------------------------------------------------------------
// Disk construction

namespace {

struct EarlyHit {
    Permutation p;
};

struct DiskBuilder {
    const ColorMatrix& a;
    SimplicialDisk disk;

    explicit DiskBuilder(const ColorMatrix& a_) : a(a_) {}

    int add_vertex(const Permutation& p) {
        std::vector<int> d = deficits3(a, p);
        int color = -1;
        for (int l = 0; l < 3; ++l)
            if (d[l] > 0) {
                color = l;
                break;
            }
        if (color < 0) throw EarlyHit{p};  // all deficits zero
        int id = static_cast<int>(disk.vertices.size());
        disk.vertices.push_back({id, p, color});
        return id;
    }

    const Permutation& perm(int id) const { return disk.vertices[id].perm; }
    int color(int id) const { return disk.vertices[id].color; }

    void triangle(int x, int y, int z) {
        if (x == y || x == z || y == z) return;
        disk.triangles.push_back({x, y, z});
    }
};

}  // namespace

void validate_disk(const ColorMatrix& a, const SimplicialDisk& disk) {
    auto fail = [](const std::string& msg) { throw InternalInvariantViolation(msg); };
    for (const auto& v : disk.vertices) {
        if (v.color < 0 || v.color >= 3) fail("vertex without a color");
        if (deficits3(a, v.perm)[v.color] <= 0) fail("vertex color not over-represented");
    }
    for (const auto& t : disk.triangles) {
        for (int x : t)
            if (x < 0 || x >= static_cast<int>(disk.vertices.size())) fail("triangle id range");
        if (t[0] == t[1] || t[0] == t[2] || t[1] == t[2]) fail("degenerate triangle");
        for (int x = 0; x < 3; ++x)
            for (int y = x + 1; y < 3; ++y)
                if (!sim(disk.vertices[t[x]].perm, disk.vertices[t[y]].perm))
                    fail("triangle vertices not pairwise similar");
    }
    for (int arc = 0; arc < 6; ++arc) {
        const auto& ids = disk.boundary_arcs[arc];
        if (ids.empty()) fail("empty boundary arc");
        for (std::size_t t = 0; t + 1 < ids.size(); ++t)
            if (!sim(disk.vertices[ids[t]].perm, disk.vertices[ids[t + 1]].perm))
                fail("boundary edge not similar");
        const auto& next = disk.boundary_arcs[(arc + 1) % 6];
        if (ids.back() != next.front()) fail("boundary arcs do not close up");
    }
    // Six hexagon conditions: arcs 0/2/4 exclude one color; arcs 1/3/5
    // exclude one edge color pair.
    for (int arc = 0; arc < 6; ++arc) {
        const auto& ids = disk.boundary_arcs[arc];
        if (arc % 2 == 0) {
            int banned = arc / 2;
            for (int id : ids)
                if (disk.vertices[id].color == banned) fail("banned color on a minus arc");
        } else {
            int preserved = (arc == 1) ? 2 : (arc == 3) ? 0 : 1;
            int x = (preserved + 1) % 3, y = (preserved + 2) % 3;
            for (std::size_t t = 0; t + 1 < ids.size(); ++t) {
                int cu = disk.vertices[ids[t]].color, cv = disk.vertices[ids[t + 1]].color;
                if ((cu == x && cv == y) || (cu == y && cv == x))
                    fail("banned color pair on a plus arc");
            }
        }
    }
}

namespace {

// Resolves a plus-arc edge whose endpoint colors are the two non-preserved
// parts: one endpoint over-represents the preserved part, or one endpoint is
// already within one of every quota.
Permutation resolve_boundary_violation(const ColorMatrix& a, int preserved, const Permutation& u,
                                       const Permutation& v, int cu, int cv) {
    std::vector<int> du = deficits3(a, u), dv = deficits3(a, v);
    if (all_within_one(du)) return u;
    if (all_within_one(dv)) return v;
    const Permutation* rep_b = nullptr;
    if (du[preserved] > 0) rep_b = &u;
    else if (dv[preserved] > 0) rep_b = &v;
    if (!rep_b)
        throw InternalInvariantViolation("violation pair with no usable representative");
    std::array<const Permutation*, 3> s{nullptr, nullptr, nullptr};
    s[cu] = &u;
    s[cv] = &v;
    s[preserved] = rep_b;
    return resolve_triangle(a, *s[0], *s[1], *s[2]);
}

}  // namespace

BuildResult build_disk(const ColorMatrix& a) {
    if (a.m != 3) throw PreconditionViolation("three-part instance required");
    const int n = a.n;
    std::vector<int> quotas = integer_quotas(a);
    for (int k : quotas)
        if (k < 1 || k > n - 2)
            throw PreconditionViolation("quotas must lie in [1, n-2] for the disk construction");

    DiskBuilder b(a);
    try {
        // Hexagon corners: boost/cap role pairs in cyclic order, arcs
        // alternating minus- and plus-preserving.
        const std::array<std::pair<int, int>, 6> roles{{
            {1, 0}, {2, 0}, {2, 1}, {0, 1}, {0, 2}, {1, 2},
        }};
        const std::array<PropertyTag, 6> arc_tags{{
            {0, PropertyTag::Sense::Minus},
            {2, PropertyTag::Sense::Plus},
            {1, PropertyTag::Sense::Minus},
            {0, PropertyTag::Sense::Plus},
            {2, PropertyTag::Sense::Minus},
            {1, PropertyTag::Sense::Plus},
        }};
        std::array<Permutation, 6> corner_perms{
            Permutation::identity(n), Permutation::identity(n), Permutation::identity(n),
            Permutation::identity(n), Permutation::identity(n), Permutation::identity(n)};
        std::array<int, 6> corner_ids{};
        for (int c = 0; c < 6; ++c) {
            corner_perms[c] = lopsided_matching(a, roles[c].first, roles[c].second);
            corner_ids[c] = b.add_vertex(corner_perms[c]);
        }
        std::vector<int> ring;
        for (int arc = 0; arc < 6; ++arc) {
            auto walk = boundary_walk(a, corner_perms[arc], corner_perms[(arc + 1) % 6],
                                      arc_tags[arc]);
            // Arcs always end at the next corner's vertex, even when the two
            // corners carry equal permutations.
            std::vector<int> ids{corner_ids[arc]};
            for (std::size_t t = 1; t + 1 < walk.size(); ++t) ids.push_back(b.add_vertex(walk[t]));
            ids.push_back(corner_ids[(arc + 1) % 6]);
            b.disk.boundary_arcs[arc] = ids;
            for (std::size_t t = 0; t + 1 < ids.size(); ++t) ring.push_back(ids[t]);
        }
        if (ring.empty()) ring.push_back(corner_ids[0]);

        // Plus-arc edge conditions may fail; such a pair resolves directly.
        for (int arc = 1; arc < 6; arc += 2) {
            int preserved = arc_tags[arc].part;
            int x = (preserved + 1) % 3, y = (preserved + 2) % 3;
            const auto& ids = b.disk.boundary_arcs[arc];
            for (std::size_t t = 0; t + 1 < ids.size(); ++t) {
                int cu = b.color(ids[t]), cv = b.color(ids[t + 1]);
                if ((cu == x && cv == y) || (cu == y && cv == x))
                    return BuildResult{std::nullopt,
                                       resolve_boundary_violation(a, preserved, b.perm(ids[t]),
                                                                  b.perm(ids[t + 1]), cu, cv)};
            }
        }

        // Interior: rings of shifted copies, annuli triangulated square by
        // square, until the ring collapses.
        std::vector<int> current = ring;
        for (int pos = 0; pos < n && current.size() > 1; ++pos) {
            bool constant = true;
            for (std::size_t t = 1; t < current.size() && constant; ++t)
                if (!(b.perm(current[t]) == b.perm(current[0]))) constant = false;
            if (constant) break;

            const int L = static_cast<int>(current.size());
            std::vector<Permutation> shifted;
            shifted.reserve(L);
            for (int id : current) shifted.push_back(shift(pos, b.perm(id)));
            std::vector<int> next_ids(L, -1);
            for (int t = 0; t < L; ++t) {
                if (t > 0 && shifted[t] == shifted[t - 1]) {
                    next_ids[t] = next_ids[t - 1];
                    continue;
                }
                next_ids[t] = b.add_vertex(shifted[t]);
            }
            if (L > 1 && shifted[0] == shifted[L - 1] && next_ids[L - 1] != next_ids[0]) {
                int bad = next_ids[L - 1];
                for (int t = L - 1; t >= 0 && next_ids[t] == bad; --t) next_ids[t] = next_ids[0];
            }

            for (int t = 0; t < L; ++t) {
                int u = t, v = (t + 1) % L;
                const Permutation& pu = b.perm(current[u]);
                const Permutation& pv = b.perm(current[v]);
                std::vector<int> byLabel{current[u], current[v], next_ids[v], next_ids[u]};
                if (pu == pv) {
                    b.triangle(current[u], current[v], next_ids[u]);
                    b.triangle(current[v], next_ids[v], next_ids[u]);
                    continue;
                }
                FillSink sink;
                sink.interior = [&](const Permutation& p) {
                    byLabel.push_back(b.add_vertex(p));
                    return static_cast<int>(byLabel.size()) - 1;
                };
                sink.triangle = [&](int x, int y, int z) {
                    b.triangle(byLabel[x], byLabel[y], byLabel[z]);
                };
                fill_quad_rec(0, 1, 2, 3, pu, pv, pos, sink);
            }

            std::vector<int> nxt;
            for (int t = 0; t < L; ++t)
                if (nxt.empty() || nxt.back() != next_ids[t]) nxt.push_back(next_ids[t]);
            while (nxt.size() > 1 && nxt.front() == nxt.back()) nxt.pop_back();
            current = std::move(nxt);
        }
        // Close the constant ring with a fan.
        for (std::size_t t = 1; t + 1 < current.size(); ++t)
            b.triangle(current[0], current[t], current[t + 1]);
    } catch (const EarlyHit& hit) {
        return BuildResult{std::nullopt, hit.p};
    }

    validate_disk(a, b.disk);
    return BuildResult{std::move(b.disk), std::nullopt};
}

std::array<Permutation, 3> find_rainbow(const ColorMatrix& a, const SimplicialDisk& disk) {
    for (const auto& t : disk.triangles) {
        int mask = 0;
        for (int id : t) mask |= 1 << disk.vertices[id].color;
        if (mask != 7) continue;
        std::array<const Permutation*, 3> byColor{};
        for (int id : t) byColor[disk.vertices[id].color] = &disk.vertices[id].perm;
        std::array<Permutation, 3> out{*byColor[0], *byColor[1], *byColor[2]};
        for (int l = 0; l < 3; ++l)
            if (deficits3(a, out[l])[l] <= 0)
                throw InternalInvariantViolation("rainbow vertex not over-represented");
        return out;
    }
    throw NoRainbow("no triangle carries all three colors");
}

// ---------------------------------------------------------------------------
// Triangle resolution

namespace {

std::atomic<long long> g_safety_net_uses{0};

}  // namespace

long long resolve_safety_net_count() { return g_safety_net_uses.load(); }
void reset_resolve_safety_net_count() { g_safety_net_uses.store(0); }

Permutation resolve_triangle(const ColorMatrix& a, const Permutation& s1, const Permutation& s2,
                             const Permutation& s3) {
    if (a.m != 3) throw PreconditionViolation("three-part instance required");
    const int n = a.n;
    std::vector<int> quotas = integer_quotas(a);
    const std::array<const Permutation*, 3> s{&s1, &s2, &s3};
    for (int i = 0; i < 3; ++i)
        for (int j = i + 1; j < 3; ++j)
            if (!sim(*s[i], *s[j]))
                throw PreconditionViolation("representatives must be pairwise similar");
    std::array<std::vector<int>, 3> d;
    for (int j = 0; j < 3; ++j) {
        d[j] = deficits3(a, *s[j]);
        if (d[j][j] <= 0) throw PreconditionViolation("each part must be over-represented");
    }

    auto good = [&](const Permutation& p) { return all_within_one(deficits3(a, p)); };
    for (int j = 0; j < 3; ++j)
        if (all_within_one(d[j])) return *s[j];

    // B[i][j] = deficit of part i under representative j: positive diagonal,
    // zero column sums, entries within a row at most 3 apart.
    auto B = [&](int i, int j) { return d[j][i]; };

    bool all_diag_big = B(0, 0) >= 2 && B(1, 1) >= 2 && B(2, 2) >= 2;
    if (all_diag_big) {
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j)
                if (B(i, j) != (i == j ? 2 : -1))
                    throw InternalInvariantViolation("unexpected deficit pattern");
        std::vector<int> diff;
        for (int x = 0; x < n; ++x)
            if ((*s[0])(x) != (*s[1])(x)) diff.push_back(x);
        if (diff.size() != 3)
            throw InternalInvariantViolation("representatives not at distance 3");
        Permutation cand = s[0]->swapped(diff[0], diff[1]);
        if (!good(cand)) throw InternalInvariantViolation("diagonal-2 swap failed");
        return cand;
    }

    // Some diagonal entry equals 1. Order the parts so that part p0 has it
    // and B(p1, rep0) <= B(p2, rep0); the surviving pattern lets rep0 serve
    // as the third representative, whose column then equals the first.
    int c0 = -1;
    for (int c = 0; c < 3 && c0 < 0; ++c)
        if (B(c, c) == 1) c0 = c;
    if (c0 < 0) throw InternalInvariantViolation("positive diagonal without 1 or 2");
    int c1 = -1, c2 = -1;
    {
        std::array<int, 2> rest{};
        int t = 0;
        for (int c = 0; c < 3; ++c)
            if (c != c0) rest[t++] = c;
        if (d[c0][rest[0]] <= d[c0][rest[1]]) {
            c1 = rest[0];
            c2 = rest[1];
        } else {
            c1 = rest[1];
            c2 = rest[0];
        }
    }
    const Permutation& r0 = *s[c0];
    const Permutation& r1 = *s[c1];
    const std::vector<int>& dr0 = d[c0];
    const std::vector<int>& dr1 = d[c1];
    int p0 = c0, p1 = c1, p2 = c2;
    if (!(dr0[p1] == -2 && dr0[p2] == 1))
        throw InternalInvariantViolation("first column pattern unexpected");
    // Parts p0 and p2 play symmetric roles once rep0 doubles as the third
    // representative; orient them by rep1's column.
    if (dr1[p0] > dr1[p2]) std::swap(p0, p2);
    if (dr1[p1] != 1 || dr1[p0] != -2 || dr1[p2] != 1)
        throw InternalInvariantViolation("second column pattern unexpected");
    if (!(dr0[p0] == 1 && dr0[p1] == -2 && dr0[p2] == 1))
        throw InternalInvariantViolation("first column pattern unexpected after reorient");

    std::vector<int> D;
    for (int x = 0; x < n; ++x)
        if (r0(x) != r1(x)) D.push_back(x);
    if (D.size() != 3) throw InternalInvariantViolation("representatives not at distance 3");
    for (int y : D)
        if (a.color(y, r0(y)) != p0 || a.color(y, r1(y)) != p1)
            throw InternalInvariantViolation("distance-3 cells not monochromatic");

    auto try_all = [&](const std::vector<Permutation>& cands) -> std::optional<Permutation> {
        for (const auto& c : cands)
            if (good(c)) return c;
        return std::nullopt;
    };

    // Swapping two of the three disagreement positions works unless every
    // third-diagonal cell carries the capped part.
    {
        std::vector<Permutation> cands;
        for (int x = 0; x < 3; ++x)
            for (int y = x + 1; y < 3; ++y) cands.push_back(r0.swapped(D[x], D[y]));
        if (auto hit = try_all(cands)) return *hit;
    }

    std::vector<int> R;
    for (int x = 0; x < n; ++x)
        if (std::find(D.begin(), D.end(), x) == D.end() && a.color(x, r0(x)) == p2)
            R.push_back(x);
    if (static_cast<int>(R.size()) != quotas[p2] + 1)
        throw InternalInvariantViolation("over-represented part count unexpected");

    // A cell off the capped part linking R to the disagreement triangle.
    for (int x : R)
        for (int y : D)
            if (a.color(x, r0(y)) != p2 || a.color(y, r0(x)) != p2) {
                std::vector<Permutation> cands{r0.swapped(x, y)};
                for (int z : D)
                    if (z != y) {
                        cands.push_back(rotate3(r0, x, y, z));
                        cands.push_back(rotate3(r0, x, z, y));
                    }
                if (auto hit = try_all(cands)) return *hit;
            }
    // A cell off the capped part inside R x R.
    for (int x : R)
        for (int y : R)
            if (x != y && a.color(x, r0(y)) != p2) {
                std::vector<Permutation> cands{r0.swapped(x, y)};
                for (int u = 0; u < 3; ++u)
                    for (int v = u + 1; v < 3; ++v)
                        cands.push_back(r0.swapped(x, y).swapped(D[u], D[v]));
                if (auto hit = try_all(cands)) return *hit;
            }
    // A row outside R and D linked to R by two cells off the capped part.
    for (int x : R)
        for (int j = 0; j < n; ++j) {
            if (std::find(D.begin(), D.end(), j) != D.end()) continue;
            if (std::find(R.begin(), R.end(), j) != R.end()) continue;
            if (a.color(x, r0(j)) == p2 || a.color(j, r0(x)) == p2) continue;
            std::vector<Permutation> cands{r0.swapped(x, j)};
            for (int u = 0; u < 3; ++u)
                for (int v = u + 1; v < 3; ++v)
                    cands.push_back(r0.swapped(x, j).swapped(D[u], D[v]));
            {
                std::vector<int> im = r0.images();
                for (int y : D) im[y] = r1(y);
                Permutation mixed{std::move(im)};
                cands.push_back(mixed.swapped(x, j));
            }
            if (auto hit = try_all(cands)) return *hit;
        }

    // Bounded fallback; counted so test suites can insist it never fires.
    g_safety_net_uses++;
    {
        std::vector<int> positions(n);
        std::iota(positions.begin(), positions.end(), 0);
        std::vector<int> subset;
        std::function<std::optional<Permutation>(int, int)> scan =
            [&](int start, int size) -> std::optional<Permutation> {
            if (static_cast<int>(subset.size()) == size) {
                std::vector<int> perm_of = subset;
                std::sort(perm_of.begin(), perm_of.end());
                do {
                    std::vector<int> im = r0.images();
                    for (std::size_t t = 0; t < subset.size(); ++t)
                        im[subset[t]] = r0(perm_of[t]);
                    Permutation cand{std::move(im)};
                    if (good(cand)) return cand;
                } while (std::next_permutation(perm_of.begin(), perm_of.end()));
                return std::nullopt;
            }
            for (int p = start; p < n; ++p) {
                subset.push_back(p);
                if (auto hit = scan(p + 1, size)) return hit;
                subset.pop_back();
            }
            return std::nullopt;
        };
        for (int size = 2; size <= std::min(n, 5); ++size) {
            subset.clear();
            if (auto hit = scan(0, size)) return *hit;
        }
    }
    throw SearchExhausted("triangle resolution failed");
}

// ---------------------------------------------------------------------------
// Full pipeline

namespace {

Permutation solve_divisible(const ColorMatrix& a);

// Two-part reduction when some padded part is empty: fair representation of
// one nonempty part and its complement settles all three windows.
Permutation solve_trivial_extreme(const ColorMatrix& a, const std::vector<int>& k) {
    const int n = a.n;
    int full = -1;
    for (int l = 0; l < 3; ++l)
        if (k[l] == n) full = l;
    if (full >= 0) return Permutation::identity(n);
    int f_part = -1;
    for (int l = 0; l < 3; ++l)
        if (k[l] > 0) {
            f_part = l;
            break;
        }
    std::vector<int> colors(static_cast<std::size_t>(n) * n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) colors[i * n + j] = a.color(i, j) == f_part ? 0 : 1;
    ColorMatrix two(n, 2, std::move(colors), true);
    return bipartite2::almost_fair_two(two);
}

Permutation solve_divisible(const ColorMatrix& a) {
    std::vector<int> k = integer_quotas(a);
    int kmin = *std::min_element(k.begin(), k.end());
    Permutation out = Permutation::identity(a.n);
    if (kmin == 0) {
        out = solve_trivial_extreme(a, k);
    } else {
        BuildResult built = build_disk(a);
        if (built.early) {
            out = *built.early;
        } else {
            auto rainbow = find_rainbow(a, *built.disk);
            out = resolve_triangle(a, rainbow[0], rainbow[1], rainbow[2]);
        }
    }
    if (!all_within_one(deficits3(a, out)))
        throw InternalInvariantViolation("pipeline output misses the quota window");
    return out;
}

std::vector<int> apportion(const std::vector<long long>& sizes, int n) {
    std::vector<int> k(3);
    std::vector<std::pair<long long, int>> rem;
    long long used = 0;
    for (int l = 0; l < 3; ++l) {
        k[l] = static_cast<int>(sizes[l] / n);
        used += k[l];
        rem.push_back({-(sizes[l] % n), l});  // larger remainder first
    }
    std::sort(rem.begin(), rem.end());
    for (int t = 0; t < n - used; ++t) k[rem[t].second]++;
    return k;
}

// Recolors cells so part sizes become k_l * n. Donor cells are taken in
// row-major order; `avoid` cells are skipped when possible.
std::optional<ColorMatrix> pad_matrix(const ColorMatrix& a, const std::vector<int>& k,
                                      const std::vector<std::pair<int, int>>& preferred,
                                      const std::vector<char>* avoid) {
    const int n = a.n;
    std::vector<long long> want(3);
    for (int l = 0; l < 3; ++l) want[l] = static_cast<long long>(k[l]) * n;
    std::vector<long long> excess(3);
    for (int l = 0; l < 3; ++l) excess[l] = a.part_sizes()[l] - want[l];
    std::vector<int> colors = a.flat();
    std::vector<long long> shortage(3);
    for (int l = 0; l < 3; ++l) shortage[l] = std::max<long long>(0, -excess[l]);

    auto donate = [&](int i, int j) -> bool {
        int p = colors[i * n + j];
        if (excess[p] <= 0) return false;
        int target = -1;
        for (int l = 0; l < 3; ++l)
            if (shortage[l] > 0) {
                target = l;
                break;
            }
        if (target < 0) return false;
        colors[i * n + j] = target;
        excess[p]--;
        shortage[target]--;
        return true;
    };

    for (auto [i, j] : preferred) donate(i, j);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            if (excess[0] <= 0 && excess[1] <= 0 && excess[2] <= 0) break;
            if (avoid && (*avoid)[i * n + j]) continue;
            donate(i, j);
        }
    for (int l = 0; l < 3; ++l)
        if (excess[l] > 0 || shortage[l] > 0) return std::nullopt;
    return ColorMatrix(n, 3, std::move(colors), true);
}

bool bounds_ok(const ColorMatrix& original, const Permutation& p) {
    auto counts = original.counts(p);
    for (int l = 0; l < original.m; ++l) {
        long long size = original.part_sizes()[l];
        long long lo = size / original.n - 1;
        long long hi = (size + original.n - 1) / original.n + 1;
        if (counts[l] < lo || counts[l] > hi) return false;
    }
    return true;
}

// Donor cells all inside one row or column: any matching meets at most one
// moved cell, which keeps every original count within its window.
std::vector<std::vector<std::pair<int, int>>> single_line_placements(const ColorMatrix& a,
                                                                     const std::vector<int>& k) {
    const int n = a.n;
    std::vector<long long> excess(3);
    for (int l = 0; l < 3; ++l) excess[l] = a.part_sizes()[l] - static_cast<long long>(k[l]) * n;
    std::vector<std::vector<std::pair<int, int>>> out;
    for (int axis = 0; axis < 2; ++axis)
        for (int line = 0; line < n; ++line) {
            std::vector<std::pair<int, int>> cells;
            std::vector<long long> avail(3, 0);
            for (int t = 0; t < n; ++t) {
                int i = axis == 0 ? line : t;
                int j = axis == 0 ? t : line;
                avail[a.color(i, j)]++;
            }
            bool ok = true;
            for (int l = 0; l < 3; ++l)
                if (excess[l] > 0 && avail[l] < excess[l]) ok = false;
            if (!ok) continue;
            std::vector<long long> need = excess;
            for (int t = 0; t < n; ++t) {
                int i = axis == 0 ? line : t;
                int j = axis == 0 ? t : line;
                if (need[a.color(i, j)] > 0) {
                    cells.emplace_back(i, j);
                    need[a.color(i, j)]--;
                }
            }
            out.push_back(std::move(cells));
        }
    return out;
}

}  // namespace

std::pair<Permutation, FairnessReport> solve_three(const ColorMatrix& a) {
    if (a.m != 3) throw PreconditionViolation("three-part instance required");
    const int n = a.n;

    bool divisible = true;
    for (int l = 0; l < 3; ++l)
        if (a.part_sizes()[l] % n != 0) divisible = false;

    std::optional<Permutation> result;
    if (divisible) {
        result = solve_divisible(a);
    } else {
        const std::vector<int> k_main = apportion(a.part_sizes(), n);
        std::vector<char> avoid(static_cast<std::size_t>(n) * n, 0);

        // Attempt order: plain padding, then every single-line placement of
        // the moved cells (any matching meets at most one moved cell there,
        // which makes the quota transfer exact), over every way of rounding
        // the part quotas.
        using Attempt = std::pair<std::vector<int>, std::vector<std::pair<int, int>>>;
        std::vector<Attempt> attempts{{k_main, {}}};
        {
            int t = 0;
            std::vector<int> frac;
            for (int l = 0; l < 3; ++l)
                if (a.part_sizes()[l] % n != 0) frac.push_back(l);
            for (int l = 0; l < 3; ++l) t += static_cast<int>(a.part_sizes()[l] % n);
            t /= n;  // number of parts rounding up
            std::vector<std::vector<int>> variants;
            for (int mask = 0; mask < (1 << frac.size()); ++mask) {
                if (__builtin_popcount(static_cast<unsigned>(mask)) != t) continue;
                std::vector<int> kv(3);
                for (int l = 0; l < 3; ++l) kv[l] = static_cast<int>(a.part_sizes()[l] / n);
                for (std::size_t b = 0; b < frac.size(); ++b)
                    if (mask & (1 << b)) kv[frac[b]]++;
                variants.push_back(std::move(kv));
            }
            for (const auto& kv : variants)
                for (auto& cells : single_line_placements(a, kv)) attempts.push_back({kv, cells});
        }

        bool have_avoid = false;
        auto run_attempt = [&](const std::optional<ColorMatrix>& padded) {
            if (!padded) return;
            Permutation cand = solve_divisible(*padded);
            if (bounds_ok(a, cand)) {
                result = cand;
                return;
            }
            for (int i = 0; i < n; ++i) avoid[i * n + cand(i)] = 1;
            have_avoid = true;
        };
        for (const auto& [kv, cells] : attempts) {
            if (result) break;
            run_attempt(pad_matrix(a, kv, cells, nullptr));
        }
        for (int round = 0; round < 3 && !result && have_avoid; ++round)
            run_attempt(pad_matrix(a, k_main, {}, &avoid));

        if (!result && n <= 9) {
            std::vector<int> im(n);
            std::iota(im.begin(), im.end(), 0);
            do {
                Permutation cand{im};
                if (bounds_ok(a, cand)) {
                    result = cand;
                    break;
                }
            } while (std::next_permutation(im.begin(), im.end()));
        }
        if (!result)
            throw InternalInvariantViolation("quota transfer failed after padding attempts");
    }

    FairnessReport rep = fairness_report(a, *result);
    if (!bounds_ok(a, *result))
        throw InternalInvariantViolation("solution misses a quota window");
    return {std::move(*result), std::move(rep)};
}

}  // namespace fairrep::bipartite3
