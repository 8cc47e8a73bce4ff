#include "fairrep/bipartite2.hpp"

#include <algorithm>
#include <cassert>
#include <deque>
#include <numeric>
#include <unordered_set>

#include "internal_matching.hpp"

namespace fairrep::bipartite2 {

namespace {

void require_two_parts(const ColorMatrix& f) {
    if (f.m != 2) throw PreconditionViolation("two-part instance required");
}

bool in_f(const ColorMatrix& f, int i, int j) { return f.color(i, j) == 0; }

int count_f(const ColorMatrix& f, const Permutation& p) {
    int c = 0;
    for (int i = 0; i < f.n; ++i)
        if (in_f(f, i, p(i))) c++;
    return c;
}

}  // namespace

RigidityCertificate check_rigidity(const ColorMatrix& f) {
    require_two_parts(f);
    const int n = f.n;
    RigidityCertificate cert;

    // Rigid iff every row equals row 0's pattern or its complement.
    auto classify = [&](int i) -> int {  // 1 same, -1 complementary, 0 neither
        bool same = true, comp = true;
        for (int j = 0; j < n; ++j) {
            if (in_f(f, i, j) != in_f(f, 0, j)) same = false;
            if (in_f(f, i, j) == in_f(f, 0, j)) comp = false;
        }
        return same ? 1 : comp ? -1 : 0;
    };

    int bad_row = -1;
    std::vector<int> cls(n, 0);
    for (int i = 0; i < n && bad_row < 0; ++i) {
        cls[i] = classify(i);
        if (cls[i] == 0) bad_row = i;
    }

    if (bad_row < 0) {
        cert.rigid = true;
        for (int i = 0; i < n; ++i)
            if (cls[i] == 1) cert.K.push_back(i);
        for (int j = 0; j < n; ++j)
            if (in_f(f, 0, j)) cert.L.push_back(j);
        return cert;
    }

    // Witness pair: rows (0, bad_row) have a column agreeing and a column
    // disagreeing, so the 2x2 minor has odd F-weight and swapping it flips
    // the intersection parity.
    int j_same = -1, j_diff = -1;
    for (int j = 0; j < n; ++j) {
        if (in_f(f, bad_row, j) == in_f(f, 0, j)) {
            if (j_same < 0) j_same = j;
        } else if (j_diff < 0) {
            j_diff = j;
        }
    }
    std::vector<int> base(n, -1);
    base[0] = j_same;
    base[bad_row] = j_diff;
    Permutation p1 = detail::complete_matching(std::move(base));
    Permutation p2 = p1.swapped(0, bad_row);
    assert((count_f(f, p1) - count_f(f, p2)) % 2 != 0);
    cert.witness = {std::move(p1), std::move(p2)};
    return cert;
}

ExtremeCounts extreme_counts(const ColorMatrix& f) {
    require_two_parts(f);
    const int n = f.n;
    auto inside = detail::max_matching(n, [&](int i, int j) { return in_f(f, i, j); });
    auto outside = detail::max_matching(n, [&](int i, int j) { return !in_f(f, i, j); });
    ExtremeCounts out{0, 0, detail::complete_matching(outside),
                      detail::complete_matching(inside)};
    out.c_max = count_f(f, out.witness_max);
    out.c_min = count_f(f, out.witness_min);
    return out;
}

std::vector<int> rigid_achievable_counts(int n, int k_size, int l_size) {
    std::vector<int> counts;
    int t_lo = std::max(0, k_size + l_size - n);
    int t_hi = std::min(k_size, l_size);
    for (int t = t_lo; t <= t_hi; ++t) counts.push_back(n - k_size - l_size + 2 * t);
    return counts;
}

namespace {

Permutation rigid_exact(const ColorMatrix& f, const RigidityCertificate& cert, int c) {
    const int n = f.n;
    const int ks = static_cast<int>(cert.K.size());
    const int ls = static_cast<int>(cert.L.size());
    int t2 = c - (n - ks - ls);
    assert(t2 >= 0 && t2 % 2 == 0);
    int t = t2 / 2;
    std::vector<char> in_k(n, 0), in_l(n, 0);
    for (int i : cert.K) in_k[i] = 1;
    for (int j : cert.L) in_l[j] = 1;
    std::vector<int> l_cols, lbar_cols;
    for (int j = 0; j < n; ++j) (in_l[j] ? l_cols : lbar_cols).push_back(j);
    std::vector<int> images(n, -1);
    std::size_t li = 0, lbi = 0;
    int k_to_l = t;
    for (int i : cert.K) {
        if (k_to_l > 0) {
            images[i] = l_cols[li++];
            k_to_l--;
        } else {
            images[i] = lbar_cols[lbi++];
        }
    }
    for (int i = 0; i < n; ++i) {
        if (in_k[i]) continue;
        images[i] = (li < l_cols.size()) ? l_cols[li++] : lbar_cols[lbi++];
    }
    Permutation p{std::move(images)};
    assert(count_f(f, p) == c);
    return p;
}

// Transposition walk from `from` to `to`, resolving the smallest disagreeing
// position at each step. Visits counts changing by at most 2 per step.
std::optional<Permutation> walk_for_count(const ColorMatrix& f, const Permutation& from,
                                          const Permutation& to, int c,
                                          std::pair<Permutation, Permutation>* jump) {
    Permutation cur = from;
    int prev_count = count_f(f, cur);
    if (prev_count == c) return cur;
    while (cur != to) {
        int i = 0;
        while (cur(i) == to(i)) i++;
        int j = cur.inverse()(to(i));
        Permutation next = cur.swapped(i, j);
        int next_count = count_f(f, next);
        if (std::abs(next_count - prev_count) > 2)
            throw InternalInvariantViolation("transposition changed the count by more than 2");
        if (next_count == c) return next;
        if ((prev_count - c) * (next_count - c) < 0 && jump) {
            // Crossed c without landing on it: record the near side.
            *jump = {std::abs(prev_count - c) <= std::abs(next_count - c) ? cur : next,
                     std::abs(prev_count - c) <= std::abs(next_count - c) ? next : cur};
        }
        cur = std::move(next);
        prev_count = next_count;
    }
    return std::nullopt;
}

struct PermHash {
    std::size_t operator()(const Permutation& p) const { return hash_value(p); }
};

// Breadth-first search through permutations at Hamming distance 2 or 3,
// restricted to counts within one of c.
std::optional<Permutation> bfs_for_count(const ColorMatrix& f, const Permutation& start, int c,
                                         int depth_cap) {
    const int n = f.n;
    std::unordered_set<Permutation, PermHash> seen{start};
    std::deque<std::pair<Permutation, int>> queue{{start, 0}};
    auto try_push = [&](const Permutation& p, int depth) -> std::optional<Permutation> {
        int cnt = count_f(f, p);
        if (cnt == c) return p;
        if (std::abs(cnt - c) > 1) return std::nullopt;
        if (depth < depth_cap && seen.insert(p).second) queue.emplace_back(p, depth);
        return std::nullopt;
    };
    while (!queue.empty()) {
        auto [cur, depth] = queue.front();
        queue.pop_front();
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j) {
                if (auto hit = try_push(cur.swapped(i, j), depth + 1)) return hit;
                for (int k = j + 1; k < n; ++k) {
                    if (auto hit = try_push(cur.swapped(i, j).swapped(j, k), depth + 1))
                        return hit;
                    if (auto hit = try_push(cur.swapped(i, k).swapped(j, k), depth + 1))
                        return hit;
                }
            }
    }
    return std::nullopt;
}

}  // namespace

Permutation exact_count_matching(const ColorMatrix& f, int c) {
    require_two_parts(f);
    const int n = f.n;
    ExtremeCounts ext = extreme_counts(f);
    if (c < ext.c_min || c > ext.c_max)
        throw OutOfRange("no matching can meet " + std::to_string(c) + " edges");
    RigidityCertificate cert = check_rigidity(f);
    if (cert.rigid) {
        auto achievable =
            rigid_achievable_counts(n, static_cast<int>(cert.K.size()),
                                    static_cast<int>(cert.L.size()));
        if (!std::binary_search(achievable.begin(), achievable.end(), c))
            throw RigidInfeasible("rigid set attains only a fixed parity", achievable);
        return rigid_exact(f, cert, c);
    }

    std::pair<Permutation, Permutation> jump{ext.witness_min, ext.witness_max};
    if (auto hit = walk_for_count(f, ext.witness_min, ext.witness_max, c, &jump)) return *hit;
    if (auto hit = bfs_for_count(f, jump.first, c, 2 * n)) return *hit;
    if (n <= 8) {
        std::vector<int> im(n);
        std::iota(im.begin(), im.end(), 0);
        do {
            Permutation p{im};
            if (count_f(f, p) == c) return p;
        } while (std::next_permutation(im.begin(), im.end()));
    }
    // For counts strictly between 1 and n-1 this cannot happen; the boundary
    // counts of a non-rigid set can be genuinely unattainable.
    throw SearchExhausted("count " + std::to_string(c) + " not reached");
}

Permutation almost_fair_two(const ColorMatrix& f) {
    require_two_parts(f);
    const int n = f.n;
    const long long size_f = f.part_sizes()[0];
    const int lo = static_cast<int>(size_f / n);              // floor(|F|/n)
    const int hi = static_cast<int>((size_f + n - 1) / n);    // ceil(|F|/n)
    RigidityCertificate cert = check_rigidity(f);
    if (cert.rigid) {
        auto achievable = rigid_achievable_counts(n, static_cast<int>(cert.K.size()),
                                                  static_cast<int>(cert.L.size()));
        auto ok = [&](int c) {
            return std::binary_search(achievable.begin(), achievable.end(), c);
        };
        int c;
        if (ok(lo)) c = lo;
        else if (ok(hi)) c = hi;
        else if (ok(lo + 1)) c = lo + 1;  // n divides |F|: fall back to +-1
        else c = lo - 1;
        assert(ok(c));
        return rigid_exact(f, cert, c);
    }
    // Non-rigid: the counts lo and hi are almost always attainable, but the
    // boundary counts 1 and n-1 can be genuinely missing, so fall back to the
    // one-off window, which a +-2-step transposition walk cannot jump over.
    for (int c : {lo, hi, hi + 1, lo - 1}) {
        if (c < 0 || c > n) continue;
        try {
            return exact_count_matching(f, c);
        } catch (const OutOfRange&) {
        } catch (const SearchExhausted&) {
        }
    }
    throw InternalInvariantViolation("no matching close to the fair count");
}

Parity parity_signature(const ColorMatrix& f) {
    RigidityCertificate cert = check_rigidity(f);
    if (!cert.rigid) return Parity::Mixed;
    int par = (f.n - static_cast<int>(cert.K.size()) - static_cast<int>(cert.L.size())) % 2;
    return par == 0 ? Parity::Even : Parity::Odd;
}

}  // namespace fairrep::bipartite2
