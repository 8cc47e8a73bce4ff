#include "fairrep/interval.hpp"

#include <algorithm>
#include <array>
#include <cassert>
#include <cmath>
#include <functional>
#include <numeric>

namespace fairrep::interval {

namespace {

// Greedily adds every vertex whose neighborhood is disjoint from the current
// set, reusing the caller's membership buffer. Counts only grow, so no
// deficit gets worse.
void extend_in_place(const VertexPartition& inst, std::vector<char>& in) {
    const int n = inst.n;
    const int gap = inst.beta();
    const bool wraps = inst.kind != HostKind::Path;
    for (int p = 0; p < n; ++p) {
        if (in[p]) continue;
        bool ok = true;
        for (int d = 1; d < gap && ok; ++d) {
            int lo = p - d, hi = p + d;
            if (lo < 0) {
                if (wraps) lo += n;
                else lo = -1;
            }
            if (hi >= n) {
                if (wraps) hi -= n;
                else hi = -1;
            }
            if (lo >= 0 && lo != p && in[lo]) ok = false;
            if (hi >= 0 && hi != p && in[hi]) ok = false;
        }
        if (ok) in[p] = 1;
    }
}

void extend_maximally(const VertexPartition& inst, std::vector<int>& members) {
    std::vector<char> in(inst.n, 0);
    for (int p : members) in[p] = 1;
    extend_in_place(inst, in);
    members.clear();
    for (int p = 0; p < inst.n; ++p)
        if (in[p]) members.push_back(p);
}

// Total deficit in units of 1/beta.
long long deficit_units(const std::vector<int>& sizes, const std::vector<long long>& counts,
                        int beta) {
    long long total = 0;
    for (std::size_t i = 0; i < sizes.size(); ++i)
        total += std::max<long long>(0, sizes[i] - beta * counts[i]);
    return total;
}

}  // namespace

// ---------------------------------------------------------------------------
// Cut patterns

IndependentSet evaluate_cut_pattern(const VertexPartition& path, const CutPattern& pattern) {
    if (path.kind != HostKind::Path) throw PreconditionViolation("cut patterns live on paths");
    if (pattern.segment_signs.size() != pattern.cuts.size() + 1)
        throw PreconditionViolation("one sign per segment required");
    std::vector<char> cut(path.n, 0);
    for (int c : pattern.cuts) cut[c] = 1;
    std::vector<int> members;
    std::size_t seg = 0;
    for (int p = 0; p < path.n; ++p) {
        if (cut[p]) {
            seg++;
            continue;
        }
        bool odd_bead = (p % 2 == 0);  // first, third, ... vertex along the path
        if (pattern.segment_signs[seg] ? odd_bead : !odd_bead) members.push_back(p);
    }
    return IndependentSet{std::move(members)};
}

// ---------------------------------------------------------------------------
// Paths: total deficit at most m/2

namespace {

// Proper 3-coloring of the multigraph "path plus class-pair edges" when every
// class has exactly two vertices. Vertices are colored in decreasing BFS
// distance from an endpoint, so each one sees at most two colored neighbors.
std::vector<int> brooks_candidate(const VertexPartition& inst) {
    const int n = inst.n;
    std::vector<int> partner(n, -1);
    {
        std::vector<int> first(inst.m, -1);
        for (int p = 0; p < n; ++p) {
            int c = inst.classes[p];
            if (first[c] < 0) {
                first[c] = p;
            } else {
                partner[p] = first[c];
                partner[first[c]] = p;
            }
        }
    }
    auto neighbors = [&](int p) {
        std::vector<int> out;
        if (p > 0) out.push_back(p - 1);
        if (p + 1 < n) out.push_back(p + 1);
        if (partner[p] >= 0 && partner[p] != p) out.push_back(partner[p]);
        return out;
    };
    std::vector<int> order;
    order.reserve(n);
    {
        std::vector<char> seen(n, 0);
        std::vector<int> queue{0};
        seen[0] = 1;
        for (std::size_t h = 0; h < queue.size(); ++h) {
            int u = queue[h];
            order.push_back(u);
            for (int v : neighbors(u))
                if (!seen[v]) {
                    seen[v] = 1;
                    queue.push_back(v);
                }
        }
    }
    std::reverse(order.begin(), order.end());
    std::vector<int> color(n, -1);
    for (int u : order) {
        bool used[3] = {false, false, false};
        for (int v : neighbors(u))
            if (color[v] >= 0) used[color[v]] = true;
        int c = 0;
        while (c < 3 && used[c]) c++;
        assert(c < 3);
        color[u] = c;
    }
    int counts[3] = {0, 0, 0};
    for (int p = 0; p < n; ++p) counts[color[p]]++;
    int best = 0;
    for (int c = 1; c < 3; ++c)
        if (counts[c] > counts[best]) best = c;
    std::vector<int> members;
    for (int p = 0; p < n; ++p)
        if (color[p] == best) members.push_back(p);
    return members;
}

}  // namespace

std::pair<IndependentSet, FairnessReport> solve_path_total(const VertexPartition& inst) {
    if (inst.kind != HostKind::Path) throw PreconditionViolation("path instance required");
    const int n = inst.n;
    const int m = inst.m;
    const std::vector<int> sizes = inst.class_sizes();

    if (m == 1) {
        std::vector<int> members;
        for (int p = 0; p < n; p += 2) members.push_back(p);
        IndependentSet s{std::move(members)};
        FairnessReport rep = fairness_report(inst, s);
        return {std::move(s), std::move(rep)};
    }

    long long best_units = -1;
    std::vector<int> best_members;

    // Reused buffers; the pattern loop runs allocation-free.
    std::vector<char> in(n, 0);
    std::vector<long long> counts(m, 0);
    std::vector<int> members_buf;
    members_buf.reserve(n);

    auto consider_marked = [&]() {
        extend_in_place(inst, in);
        std::fill(counts.begin(), counts.end(), 0);
        for (int p = 0; p < n; ++p)
            if (in[p]) counts[inst.classes[p]]++;
        long long units = deficit_units(sizes, counts, 2);
        if (best_units >= 0 && units > best_units) return;
        members_buf.clear();
        for (int p = 0; p < n; ++p)
            if (in[p]) members_buf.push_back(p);
        if (best_units < 0 || units < best_units ||
            (units == best_units && members_buf < best_members)) {
            best_units = units;
            best_members = members_buf;
        }
    };
    auto consider = [&](const std::vector<int>& members) {
        std::fill(in.begin(), in.end(), 0);
        for (int p : members) in[p] = 1;
        consider_marked();
    };

    std::vector<char> cut(n, 0);
    std::vector<int> cuts;
    auto evaluate_signs = [&]() {
        int segs = static_cast<int>(cuts.size()) + 1;
        for (int mask = 0; mask < (1 << segs); ++mask) {
            int seg = 0;
            for (int p = 0; p < n; ++p) {
                if (cut[p]) {
                    seg++;
                    in[p] = 0;
                    continue;
                }
                bool odd_bead = (p % 2 == 0);
                bool plus = (mask >> seg) & 1;
                in[p] = (plus ? odd_bead : !odd_bead) ? 1 : 0;
            }
            consider_marked();
        }
    };

    auto run_patterns = [&](int max_cuts) {
        // Pattern space: all cut sets of size <= max_cuts times all sign
        // vectors over the resulting segments.
        double space = 0;
        for (int c = 0; c <= max_cuts; ++c) {
            double binom = 1;
            for (int i = 0; i < c; ++i) binom = binom * (n - i) / (i + 1);
            space += binom * std::pow(2.0, c + 1);
        }
        if (space > 1e8) throw CapExceeded("cut pattern space too large");

        std::function<void(int, int)> pick = [&](int start, int remaining) {
            evaluate_signs();
            if (remaining == 0) return;
            for (int p = start; p < n; ++p) {
                cuts.push_back(p);
                cut[p] = 1;
                pick(p + 1, remaining - 1);
                cut[p] = 0;
                cuts.pop_back();
            }
        };
        pick(0, max_cuts);
    };

    run_patterns(m);

    bool all_pairs = std::all_of(sizes.begin(), sizes.end(), [](int s) { return s == 2; });
    if (all_pairs) consider(brooks_candidate(inst));

    if (best_units > m) {
        // Escalation path: one extra cut. Not expected to be needed.
        run_patterns(m + 1);
        if (best_units > m)
            throw InternalInvariantViolation("no cut pattern reached total deficit m/2");
    }
    if (all_pairs && 3 * best_units > 2LL * m)
        throw InternalInvariantViolation("pair-class bound m/3 missed");

    IndependentSet s{std::move(best_members)};
    FairnessReport rep = fairness_report(inst, s);
    return {std::move(s), std::move(rep)};
}

// ---------------------------------------------------------------------------
// Cycles: exact per-class counts

namespace {

// Exact-count DP over cyclic positions. classes[] may mention only some of
// the target classes; absent classes must have target 0. Returns the
// lexicographically smallest solution, or nullopt if none exists.
std::optional<std::vector<int>> dp_cycle_exact(const std::vector<int>& classes,
                                               const std::vector<int>& targets) {
    const int n = static_cast<int>(classes.size());
    const int m = static_cast<int>(targets.size());
    long long radix_total = 1;
    std::vector<long long> step(m, 0);
    {
        long long r = 1;
        for (int c = 0; c < m; ++c) {
            step[c] = r;
            r *= targets[c] + 1;
            if (r > 50'000'000) throw CapExceeded("count state space too large");
        }
        radix_total = r;
    }
    if ((n + 1) * radix_total > 200'000'000) throw CapExceeded("count state space too large");
    long long full = 0;
    for (int c = 0; c < m; ++c) full += step[c] * targets[c];

    long long total_targets = std::accumulate(targets.begin(), targets.end(), 0LL);
    if (total_targets == 0) return std::vector<int>{};

    // feasible[(pos-1)*R*2 + code*2 + last], positions 1..n; entry n holds the
    // wrap acceptance. Recomputed per choice of vertex 0.
    const long long R = radix_total;
    std::vector<char> feasible(static_cast<std::size_t>(n) * R * 2);

    auto digit = [&](long long code, int c) { return (code / step[c]) % (targets[c] + 1); };

    for (int first = 1; first >= 0; --first) {
        if (first && targets[classes[0]] == 0) continue;
        auto idx = [&](int pos, long long code, int last) {
            return (static_cast<std::size_t>(pos - 1) * R + code) * 2 + last;
        };
        // pos == n boundary handled inline; fill backwards from pos = n-1.
        for (int pos = n - 1; pos >= 1; --pos) {
            for (long long code = 0; code <= full; ++code) {
                for (int last = 0; last < 2; ++last) {
                    auto accept = [&](long long c2, int l2) -> bool {
                        if (pos + 1 == n) return c2 == full && !(first && l2);
                        return feasible[idx(pos + 1, c2, l2)];
                    };
                    bool ok = accept(code, 0);
                    int cls = classes[pos];
                    if (!ok && !last && digit(code, cls) < targets[cls])
                        ok = accept(code + step[cls], 1);
                    feasible[idx(pos, code, last)] = ok;
                }
            }
        }
        long long code0 = first ? step[classes[0]] : 0;
        bool start_ok = (n == 1) ? (code0 == full) : feasible[idx(1, code0, first)];
        if (!start_ok) continue;

        std::vector<int> members;
        if (first) members.push_back(0);
        long long code = code0;
        int last = first;
        for (int pos = 1; pos < n; ++pos) {
            int cls = classes[pos];
            bool choose = false;
            if (!last && digit(code, cls) < targets[cls]) {
                long long c2 = code + step[cls];
                if (pos + 1 == n) {
                    choose = (c2 == full) && !first;
                } else {
                    choose = feasible[idx(pos + 1, c2, 1)];
                }
                if (choose) {
                    members.push_back(pos);
                    code = c2;
                    last = 1;
                    continue;
                }
            }
            last = 0;
        }
        assert(code == full);
        return members;
    }
    return std::nullopt;
}

}  // namespace

IndependentSet solve_cycle_exact(const VertexPartition& inst, const std::vector<int>& targets) {
    if (inst.kind != HostKind::Cycle) throw PreconditionViolation("cycle instance required");
    if (static_cast<int>(targets.size()) != inst.m)
        throw PreconditionViolation("one target per class required");
    const std::vector<int> sizes = inst.class_sizes();
    for (int i = 0; i < inst.m; ++i) {
        if (targets[i] < 0) throw PreconditionViolation("targets must be nonnegative");
        if (i + 1 < inst.m) {
            if (sizes[i] != 2 * targets[i] + 1)
                throw PreconditionViolation("class " + std::to_string(i + 1) +
                                            " must have size 2r+1");
        } else if (sizes[i] != 2 * targets[i] || targets[i] < 1) {
            throw PreconditionViolation("last class must have size 2r with r >= 1");
        }
    }
    auto members = dp_cycle_exact(inst.classes, targets);
    if (!members)
        throw InternalInvariantViolation("exact cycle solution must exist under the hypothesis");
    IndependentSet s{std::move(*members)};
    assert(inst.is_independent(s.members));
    return s;
}

std::pair<IndependentSet, FairnessReport> solve_cycle_individual(const VertexPartition& inst,
                                                                 std::optional<int> avoid) {
    if (inst.kind != HostKind::Cycle) throw PreconditionViolation("cycle instance required");
    const std::vector<int> sizes = inst.class_sizes();
    std::vector<char> deleted(inst.n, 0);

    int designated = -1;
    for (int c = 0; c < inst.m; ++c)
        if (sizes[c] % 2 == 0) {
            designated = c;
            break;
        }

    if (designated >= 0) {
        if (avoid)
            throw PreconditionViolation("a vertex can be avoided only when every class is odd");
        // Contract one vertex of every even class beyond the designated one.
        for (int c = 0; c < inst.m; ++c) {
            if (c == designated || sizes[c] % 2 != 0) continue;
            for (int p = 0; p < inst.n; ++p)
                if (inst.classes[p] == c) {
                    deleted[p] = 1;
                    break;
                }
        }
    } else {
        int v = avoid.value_or(0);
        if (v < 0 || v >= inst.n) throw PreconditionViolation("avoided vertex out of range");
        deleted[v] = 1;
        designated = inst.classes[v];
    }

    // Contracted cycle: surviving vertices in cyclic order; the designated
    // class is relabeled last so its (even) size takes the exact-count slot.
    std::vector<int> keep;
    for (int p = 0; p < inst.n; ++p)
        if (!deleted[p]) keep.push_back(p);
    std::vector<int> relabel(inst.m);
    {
        int next = 0;
        for (int c = 0; c < inst.m; ++c)
            if (c != designated) relabel[c] = next++;
        relabel[designated] = inst.m - 1;
    }
    std::vector<int> sub_classes(keep.size());
    std::vector<int> sub_sizes(inst.m, 0);
    for (std::size_t i = 0; i < keep.size(); ++i) {
        sub_classes[i] = relabel[inst.classes[keep[i]]];
        sub_sizes[sub_classes[i]]++;
    }
    std::vector<int> targets(inst.m, 0);
    for (int c = 0; c < inst.m; ++c)
        targets[c] = (c + 1 < inst.m) ? (sub_sizes[c] - 1) / 2 : sub_sizes[c] / 2;

    auto sub = dp_cycle_exact(sub_classes, targets);
    if (!sub)
        throw InternalInvariantViolation("contracted exact solution must exist");

    std::vector<int> members;
    for (int q : *sub) members.push_back(keep[q]);
    std::sort(members.begin(), members.end());
    extend_maximally(inst, members);

    IndependentSet s{std::move(members)};
    FairnessReport rep = fairness_report(inst, s);
    for (const Rat& b : rep.deficits)
        if (b > Rat(1)) throw InternalInvariantViolation("per-class deficit above 1");
    return {std::move(s), std::move(rep)};
}

// ---------------------------------------------------------------------------
// Powers of cycles

std::vector<int> power_cycle_targets(const VertexPartition& inst) {
    const std::vector<int> sizes = inst.class_sizes();
    std::vector<int> t(inst.m, 0);
    for (int c = 0; c < inst.m; ++c) {
        if (c + 1 < inst.m)
            t[c] = sizes[c] >= inst.s - 1 ? (sizes[c] - inst.s + 1) / inst.s : 0;
        else
            t[c] = sizes[c] / inst.s;
    }
    return t;
}

namespace {

std::optional<std::vector<int>> dp_power_exact(const std::vector<int>& classes,
                                               const std::vector<int>& targets, int s) {
    const int n = static_cast<int>(classes.size());
    const int m = static_cast<int>(targets.size());
    long long total_targets = std::accumulate(targets.begin(), targets.end(), 0LL);
    if (total_targets == 0) return std::vector<int>{};

    std::vector<long long> step(m, 0);
    long long R = 1;
    for (int c = 0; c < m; ++c) {
        step[c] = R;
        R *= targets[c] + 1;
        if (R > 5'000'000) throw CapExceeded("count state space too large");
    }
    if (static_cast<long long>(n) * n * (s + 1) * R > 200'000'000)
        throw CapExceeded("spacing state space too large");
    long long full = 0;
    for (int c = 0; c < m; ++c) full += step[c] * targets[c];
    auto digit = [&](long long code, int c) { return (code / step[c]) % (targets[c] + 1); };

    // Gap g = distance from the most recently chosen vertex, capped at s.
    std::vector<char> feasible(static_cast<std::size_t>(n + 1) * R * (s + 1));
    auto idx = [&](int pos, long long code, int g) {
        return (static_cast<std::size_t>(pos) * R + code) * (s + 1) + g;
    };

    for (int p0 = 0; p0 < n; ++p0) {
        if (targets[classes[p0]] == 0) continue;
        for (long long code = 0; code < R; ++code)
            for (int g = 1; g <= s; ++g)
                feasible[idx(n, code, g)] = (code == full) && (g + p0 >= s);
        for (int pos = n - 1; pos > p0; --pos) {
            for (long long code = 0; code < R; ++code) {
                for (int g = 1; g <= s; ++g) {
                    bool ok = feasible[idx(pos + 1, code, std::min(g + 1, s))];
                    int cls = classes[pos];
                    if (!ok && g >= s && digit(code, cls) < targets[cls])
                        ok = feasible[idx(pos + 1, code + step[cls], 1)];
                    feasible[idx(pos, code, g)] = ok;
                }
            }
        }
        long long code = step[classes[p0]];
        if (!(p0 + 1 <= n && feasible[idx(p0 + 1, code, 1)])) continue;

        std::vector<int> members{p0};
        int g = 1;
        for (int pos = p0 + 1; pos < n; ++pos) {
            int cls = classes[pos];
            if (g >= s && digit(code, cls) < targets[cls] &&
                feasible[idx(pos + 1, code + step[cls], 1)]) {
                members.push_back(pos);
                code += step[cls];
                g = 1;
            } else {
                g = std::min(g + 1, s);
            }
        }
        assert(code == full);
        return members;
    }
    return std::nullopt;
}

}  // namespace

IndependentSet solve_power_cycle(const VertexPartition& inst) {
    if (inst.kind != HostKind::PowerCycle)
        throw PreconditionViolation("power cycle instance required");
    if (inst.s < 2 || (inst.s & (inst.s - 1)) != 0)
        throw PreconditionViolation("spacing must be a power of 2");
    const int s = inst.s;
    const std::vector<int> sizes = inst.class_sizes();
    const std::vector<int> targets = power_cycle_targets(inst);

    // Contract each class to the theorem shape: s*t + s - 1 vertices for the
    // leading classes, s*t for the last; classes below that vanish entirely.
    std::vector<int> keep_quota(inst.m);
    for (int c = 0; c < inst.m; ++c) {
        int want = (c + 1 < inst.m) ? (targets[c] > 0 || sizes[c] >= s - 1 ? s * targets[c] + s - 1 : 0)
                                    : s * targets[c];
        keep_quota[c] = want;
    }
    std::vector<int> drop(inst.m);
    for (int c = 0; c < inst.m; ++c) drop[c] = sizes[c] - keep_quota[c];
    std::vector<int> keep;
    for (int p = 0; p < inst.n; ++p) {
        int c = inst.classes[p];
        if (drop[c] > 0) {
            drop[c]--;
            continue;
        }
        keep.push_back(p);
    }
    std::vector<int> sub_classes(keep.size());
    for (std::size_t i = 0; i < keep.size(); ++i) sub_classes[i] = inst.classes[keep[i]];

    auto sub = dp_power_exact(sub_classes, targets, s);
    if (!sub)
        throw InternalInvariantViolation("contracted power-cycle solution must exist");
    std::vector<int> members;
    for (int q : *sub) members.push_back(keep[q]);
    IndependentSet out{std::move(members)};
    assert(inst.is_independent(out.members));
    return out;
}

// ---------------------------------------------------------------------------
// Disjoint transversal pairs on C_{3k}

std::pair<IndependentSet, IndependentSet> solve_dhw(const VertexPartition& inst) {
    if (inst.kind != HostKind::Cycle) throw PreconditionViolation("cycle instance required");
    const int n = inst.n;
    if (n % 3 != 0) throw PreconditionViolation("cycle length must be 3k");
    const int k = n / 3;
    if (inst.m != k) throw PreconditionViolation("expected k classes of size 3");
    for (int size : inst.class_sizes())
        if (size != 3) throw PreconditionViolation("every class must have size 3");

    // Labels: 0 -> first set, 1 -> second set, 2 -> unused. Tried in that
    // order, so the first set collects the earliest possible vertices.
    std::vector<int> label(n, -1);
    std::vector<std::array<int, 2>> cnt(k, {0, 0});
    std::vector<int> remaining(k, 3);

    std::function<bool(int)> place = [&](int pos) -> bool {
        if (pos == n) return true;
        int cls = inst.classes[pos];
        for (int L = 0; L < 3; ++L) {
            if (L < 2) {
                if (pos > 0 && label[pos - 1] == L) continue;
                if (pos == n - 1 && label[0] == L) continue;
                if (cnt[cls][L] == 1) continue;
                cnt[cls][L]++;
            }
            remaining[cls]--;
            bool need_ok = (1 - cnt[cls][0]) + (1 - cnt[cls][1]) <= remaining[cls];
            label[pos] = L;
            if (need_ok && place(pos + 1)) return true;
            label[pos] = -1;
            remaining[cls]++;
            if (L < 2) cnt[cls][L]--;
        }
        return false;
    };
    if (!place(0))
        throw InternalInvariantViolation("disjoint transversal pair must exist");

    IndependentSet s1, s2;
    for (int p = 0; p < n; ++p) {
        if (label[p] == 0) s1.members.push_back(p);
        if (label[p] == 1) s2.members.push_back(p);
    }
    assert(inst.is_independent(s1.members) && inst.is_independent(s2.members));
    return {std::move(s1), std::move(s2)};
}

// ---------------------------------------------------------------------------
// Oracle

void for_each_independent_set(const VertexPartition& inst,
                              const std::function<void(const std::vector<int>&)>& visit,
                              OracleCaps caps) {
    int cap = inst.kind == HostKind::PowerCycle ? caps.power_cycle : caps.path_cycle;
    if (inst.n > cap) throw CapExceeded("instance too large for exhaustive enumeration");
    const int gap = inst.kind == HostKind::Path ? 2 : inst.beta();
    const bool wraps = inst.kind != HostKind::Path;
    std::vector<int> current;
    std::function<void(int)> dfs = [&](int start) {
        visit(current);
        for (int p = start; p < inst.n; ++p) {
            if (!current.empty()) {
                if (p - current.back() < gap) continue;
                if (wraps && inst.n - (p - current.front()) < gap) break;
            }
            current.push_back(p);
            dfs(p + 1);
            current.pop_back();
        }
    };
    dfs(0);
}

OracleOptimum oracle_best_total(const VertexPartition& inst, OracleCaps caps) {
    const std::vector<int> sizes = inst.class_sizes();
    const int beta = inst.beta();
    long long best = -1;
    std::vector<int> witness;
    std::vector<long long> counts(inst.m, 0);
    for_each_independent_set(
        inst,
        [&](const std::vector<int>& s) {
            std::fill(counts.begin(), counts.end(), 0);
            for (int p : s) counts[inst.classes[p]]++;
            long long units = deficit_units(sizes, counts, beta);
            if (best < 0 || units < best) {
                best = units;
                witness = s;
            }
        },
        caps);
    return OracleOptimum{Rat(best, beta), IndependentSet{std::move(witness)}};
}

std::vector<std::vector<int>> oracle_all_satisfying(
    const VertexPartition& inst, const std::function<bool(const std::vector<int>&)>& predicate,
    OracleCaps caps) {
    std::vector<std::vector<int>> out;
    for_each_independent_set(
        inst,
        [&](const std::vector<int>& s) {
            if (predicate(s)) out.push_back(s);
        },
        caps);
    return out;
}

}  // namespace fairrep::interval
