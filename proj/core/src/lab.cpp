#include "fairrep/lab.hpp"

#include <algorithm>
#include <cassert>
#include <numeric>
#include <atomic>
#include <mutex>
#include <random>
#include <sstream>
#include <thread>

#include "fairrep/bipartite2.hpp"
#include "fairrep/fairness.hpp"
#include "fairrep/interval.hpp"
#include "fairrep/json_io.hpp"

namespace fairrep::lab {

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t index) {
    std::uint64_t z = seed + 0x9e3779b97f4a7c15ull * (index + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

void parallel_for(long long count, int workers, const std::function<void(long long)>& fn) {
    if (count <= 0) return;
    workers = static_cast<int>(std::max<long long>(1, std::min<long long>(workers, count)));
    if (workers == 1) {
        for (long long i = 0; i < count; ++i) fn(i);
        return;
    }
    std::atomic<long long> next{0};
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w)
        pool.emplace_back([&]() {
            while (true) {
                long long chunk = next.fetch_add(1024);
                if (chunk >= count) return;
                long long end = std::min(count, chunk + 1024);
                for (long long i = chunk; i < end; ++i) fn(i);
            }
        });
    for (auto& t : pool) t.join();
}

void for_each_permutation(int n, const std::function<void(const Permutation&)>& visit) {
    std::vector<int> im(n);
    std::iota(im.begin(), im.end(), 0);
    do {
        visit(Permutation(im));
    } while (std::next_permutation(im.begin(), im.end()));
}

// ---------------------------------------------------------------------------
// Checkers

bool check_treesconj0(const VertexPartition& inst) {
    if (inst.kind != HostKind::Path) throw PreconditionViolation("path instance required");
    const std::vector<int> sizes = inst.class_sizes();
    bool found = false;
    interval::for_each_independent_set(inst, [&](const std::vector<int>& s) {
        if (found) return;
        std::vector<int> counts(inst.m, 0);
        for (int p : s) counts[inst.classes[p]]++;
        long long total_halves = 0;
        for (int i = 0; i < inst.m; ++i) {
            long long b2 = std::max<long long>(0, sizes[i] - 2LL * counts[i]);
            if (b2 > 2) return;  // some class deficit above 1
            total_halves += b2;
        }
        if (total_halves <= inst.m) found = true;
    });
    return found;
}

namespace {

void require_enumerable(const ColorMatrix& a) {
    if (a.n > 7) throw CapExceeded("factorial enumeration capped at n = 7");
}

}  // namespace

bool check_equirep00(const ColorMatrix& a, int j) {
    require_enumerable(a);
    if (j < 0 || j >= a.m) throw PreconditionViolation("part index out of range");
    std::vector<long long> quota(a.m);
    for (int l = 0; l < a.m; ++l) quota[l] = a.part_sizes()[l] / a.n;
    std::vector<int> im(a.n);
    std::iota(im.begin(), im.end(), 0);
    std::vector<long long> counts(a.m);
    do {
        std::fill(counts.begin(), counts.end(), 0);
        for (int i = 0; i < a.n; ++i) counts[a.color(i, im[i])]++;
        bool ok = true;
        for (int l = 0; l < a.m && ok; ++l)
            if (counts[l] < quota[l] - (l == j ? 1 : 0)) ok = false;
        if (ok) return true;
    } while (std::next_permutation(im.begin(), im.end()));
    return false;
}

bool check_stein(const ColorMatrix& a) {
    require_enumerable(a);
    std::vector<int> im(a.n);
    std::iota(im.begin(), im.end(), 0);
    do {
        std::vector<char> hit(a.m, 0);
        int distinct = 0;
        for (int i = 0; i < a.n; ++i) {
            int c = a.color(i, im[i]);
            if (!hit[c]) {
                hit[c] = 1;
                distinct++;
            }
        }
        if (distinct >= a.n - 1) return true;
    } while (std::next_permutation(im.begin(), im.end()));
    return false;
}

bool check_full_transversal(const ColorMatrix& a) {
    require_enumerable(a);
    std::vector<int> im(a.n);
    std::iota(im.begin(), im.end(), 0);
    do {
        std::vector<char> hit(a.m, 0);
        int distinct = 0;
        for (int i = 0; i < a.n; ++i) {
            int c = a.color(i, im[i]);
            if (!hit[c]) {
                hit[c] = 1;
                distinct++;
            }
        }
        if (distinct == a.m) return true;
    } while (std::next_permutation(im.begin(), im.end()));
    return false;
}

bool check_rainbow(const BipartiteEdgeSets& host) {
    host.validate();
    std::vector<char> left_used(host.left, 0), right_used(host.right, 0);
    std::function<bool(std::size_t)> place = [&](std::size_t set_idx) -> bool {
        if (set_idx == host.sets.size()) return true;
        for (int e : host.sets[set_idx]) {
            auto [u, v] = host.edges[e];
            if (left_used[u] || right_used[v]) continue;
            left_used[u] = right_used[v] = 1;
            if (place(set_idx + 1)) return true;
            left_used[u] = right_used[v] = 0;
        }
        return false;
    };
    return place(0);
}

namespace {

// Enumerates every matching of the host (by edge index, ascending), calling
// visit with the chosen edge ids.
void for_each_matching(const BipartiteEdgeSets& host,
                       const std::function<void(const std::vector<int>&)>& visit,
                       long long budget = 20'000'000) {
    std::vector<char> lu(host.left, 0), ru(host.right, 0);
    std::vector<int> chosen;
    long long nodes = 0;
    std::function<void(std::size_t)> dfs = [&](std::size_t e) {
        if (++nodes > budget) throw BudgetExceeded("matching enumeration budget exhausted");
        visit(chosen);
        for (std::size_t t = e; t < host.edges.size(); ++t) {
            auto [u, v] = host.edges[t];
            if (lu[u] || ru[v]) continue;
            lu[u] = ru[v] = 1;
            chosen.push_back(static_cast<int>(t));
            dfs(t + 1);
            chosen.pop_back();
            lu[u] = ru[v] = 0;
        }
    };
    // visit(empty) fires once at the root
    std::function<void(std::size_t)> run = dfs;
    run(0);
}

}  // namespace

UnderrepResult check_underrep(const BipartiteEdgeSets& host) {
    host.validate();
    const int delta = std::max(1, host.max_degree());
    const long long edge_count = static_cast<long long>(host.edges.size());
    std::vector<long long> caps(host.sets.size());
    for (std::size_t i = 0; i < host.sets.size(); ++i)
        caps[i] = (static_cast<long long>(host.sets[i].size()) + delta - 1) / delta;
    std::vector<int> set_of(host.edges.size(), -1);
    for (std::size_t i = 0; i < host.sets.size(); ++i)
        for (int e : host.sets[i]) set_of[e] = static_cast<int>(i);

    long long best = 0;
    for_each_matching(host, [&](const std::vector<int>& edges) {
        std::vector<long long> counts(host.sets.size(), 0);
        for (int e : edges)
            if (set_of[e] >= 0) counts[set_of[e]]++;
        for (std::size_t i = 0; i < counts.size(); ++i)
            if (counts[i] > caps[i]) return;
        best = std::max(best, static_cast<long long>(edges.size()));
    });
    Rat c = std::max(Rat(0), Rat(edge_count, delta) - Rat(best));
    return UnderrepResult{c, c <= Rat(static_cast<long long>(host.sets.size()), 2)};
}

bool check_prefix_fair(const BipartiteEdgeSets& host) {
    host.validate();
    if (host.labels.empty()) throw PreconditionViolation("edge labels required");
    const int delta = std::max(1, host.max_degree());
    int k = *std::max_element(host.labels.begin(), host.labels.end());
    std::vector<long long> level_total(k + 1, 0);
    for (int l : host.labels) level_total[l]++;
    for (int j = 1; j <= k; ++j) level_total[j] += level_total[j - 1];

    bool found = false;
    for_each_matching(host, [&](const std::vector<int>& edges) {
        if (found) return;
        std::vector<long long> level_count(k + 1, 0);
        for (int e : edges) level_count[host.labels[e]]++;
        long long acc = 0;
        for (int j = 1; j <= k; ++j) {
            acc += level_count[j];
            if (acc < level_total[j] / delta) return;
        }
        found = true;
    });
    return found;
}

// ---------------------------------------------------------------------------
// Sweeps

namespace {

// Second, separately written verification used before reporting a
// counterexample: a recursive search rather than the scan in the checker.
bool recheck_equirep00(const ColorMatrix& a, int j) {
    std::vector<long long> quota(a.m);
    for (int l = 0; l < a.m; ++l) quota[l] = a.part_sizes()[l] / a.n;
    std::vector<char> col_used(a.n, 0);
    std::vector<long long> counts(a.m, 0);
    std::function<bool(int)> rec = [&](int row) -> bool {
        if (row == a.n) {
            for (int l = 0; l < a.m; ++l)
                if (counts[l] < quota[l] - (l == j ? 1 : 0)) return false;
            return true;
        }
        for (int c = 0; c < a.n; ++c) {
            if (col_used[c]) continue;
            col_used[c] = 1;
            counts[a.color(row, c)]++;
            if (rec(row + 1)) return true;
            counts[a.color(row, c)]--;
            col_used[c] = 0;
        }
        return false;
    };
    return rec(0);
}

bool recheck_treesconj0(const VertexPartition& inst) {
    // Direct subset recursion with adjacency tests, independent of the
    // oracle's pruning enumeration.
    const std::vector<int> sizes = inst.class_sizes();
    std::vector<int> counts(inst.m, 0);
    std::function<bool(int, int)> rec = [&](int pos, int last) -> bool {
        if (pos == inst.n) {
            long long halves = 0;
            for (int i = 0; i < inst.m; ++i) {
                long long b2 = std::max<long long>(0, sizes[i] - 2LL * counts[i]);
                if (b2 > 2) return false;
                halves += b2;
            }
            return halves <= inst.m;
        }
        if (rec(pos + 1, last)) return true;
        if (last < 0 || !inst.adjacent(last, pos)) {
            counts[inst.classes[pos]]++;
            bool ok = rec(pos + 1, pos);
            counts[inst.classes[pos]]--;
            if (ok) return true;
        }
        return false;
    };
    return rec(0, -1);
}

std::string interval_json(const VertexPartition& vp) { return io::render_interval(vp); }
std::string bipartite_json(const ColorMatrix& cm) { return io::render_bipartite(cm); }

long long ipow(long long b, int e) {
    long long r = 1;
    while (e-- > 0) r *= b;
    return r;
}

}  // namespace

SweepOutcome run_sweep(const SweepConfig& cfg) {
    SweepOutcome out;
    out.conjecture = cfg.conjecture;
    out.seed = cfg.seed;
    const int workers = std::max(1, cfg.workers);

    if (cfg.conjecture == "treesconj0") {
        if (cfg.exhaustive) {
            long long total = ipow(cfg.m, cfg.n);
            if (total > cfg.budget) throw BudgetExceeded("labeling space exceeds budget");
            for (long long code = 0; code < total; ++code) {
                std::vector<int> classes(cfg.n);
                long long c = code;
                std::vector<char> seen(cfg.m, 0);
                for (int p = 0; p < cfg.n; ++p) {
                    classes[p] = static_cast<int>(c % cfg.m);
                    seen[classes[p]] = 1;
                    c /= cfg.m;
                }
                if (std::find(seen.begin(), seen.end(), 0) != seen.end()) continue;
                VertexPartition vp = VertexPartition::path(classes);
                out.tested++;
                if (!check_treesconj0(vp) && !recheck_treesconj0(vp))
                    out.counterexamples.push_back(interval_json(vp));
            }
        } else {
            std::vector<std::string> hits(cfg.samples);
            parallel_for(cfg.samples, workers, [&](long long idx) {
                std::mt19937_64 rng(mix_seed(cfg.seed, idx));
                std::vector<int> classes(cfg.n);
                while (true) {
                    std::vector<char> seen(cfg.m, 0);
                    for (int p = 0; p < cfg.n; ++p) {
                        classes[p] = static_cast<int>(rng() % cfg.m);
                        seen[classes[p]] = 1;
                    }
                    if (std::find(seen.begin(), seen.end(), 0) == seen.end()) break;
                }
                VertexPartition vp = VertexPartition::path(classes);
                if (!check_treesconj0(vp) && !recheck_treesconj0(vp))
                    hits[idx] = interval_json(vp);
            });
            out.tested = cfg.samples;
            for (auto& h : hits)
                if (!h.empty()) out.counterexamples.push_back(std::move(h));
        }
        return out;
    }

    if (cfg.conjecture == "equirep00" || cfg.conjecture == "stein") {
        const bool stein = cfg.conjecture == "stein";
        const int m = stein ? cfg.n : cfg.m;
        auto test_matrix = [&](const ColorMatrix& a) -> bool {  // true = fine
            if (stein) {
                for (long long s : a.part_sizes())
                    if (s != a.n) return true;  // outside the family
                return check_stein(a);
            }
            for (int j = 0; j < a.m; ++j)
                if (!check_equirep00(a, j) && !recheck_equirep00(a, j)) return false;
            return true;
        };
        if (cfg.exhaustive) {
            long long total = ipow(m, cfg.n * cfg.n);
            if (total > cfg.budget) throw BudgetExceeded("coloring space exceeds budget");
            std::atomic<long long> tested{0};
            std::vector<std::string> hits;
            std::mutex hits_mu;
            parallel_for(total, workers, [&](long long code) {
                std::vector<int> colors(cfg.n * cfg.n);
                long long c = code;
                for (int t = 0; t < cfg.n * cfg.n; ++t) {
                    colors[t] = static_cast<int>(c % m);
                    c /= m;
                }
                ColorMatrix a(cfg.n, m, std::move(colors), true);
                if (stein) {
                    for (long long s : a.part_sizes())
                        if (s != a.n) return;
                }
                tested++;
                if (!test_matrix(a)) {
                    std::lock_guard<std::mutex> lock(hits_mu);
                    hits.push_back(bipartite_json(a));
                }
            });
            out.tested = tested;
            std::sort(hits.begin(), hits.end());
            out.counterexamples = std::move(hits);
        } else {
            std::vector<std::string> hits(cfg.samples);
            parallel_for(cfg.samples, workers, [&](long long idx) {
                std::mt19937_64 rng(mix_seed(cfg.seed, idx));
                std::vector<int> colors(cfg.n * cfg.n);
                if (stein) {
                    for (int t = 0; t < cfg.n * cfg.n; ++t) colors[t] = t / cfg.n;
                    std::shuffle(colors.begin(), colors.end(), rng);
                } else {
                    for (auto& c : colors) c = static_cast<int>(rng() % m);
                }
                ColorMatrix a(cfg.n, m, std::move(colors), true);
                if (!test_matrix(a)) hits[idx] = bipartite_json(a);
            });
            out.tested = cfg.samples;
            for (auto& h : hits)
                if (!h.empty()) out.counterexamples.push_back(std::move(h));
        }
        return out;
    }

    if (cfg.conjecture == "rainbow" || cfg.conjecture == "underrep" ||
        cfg.conjecture == "prefix_fair") {
        if (cfg.exhaustive)
            throw BudgetExceeded("only sampled sweeps are supported for this family");
        std::vector<std::string> hits(cfg.samples);
        std::vector<std::string> stats(cfg.samples);
        std::atomic<long long> tested{0};
        parallel_for(cfg.samples, workers, [&](long long idx) {
            std::mt19937_64 rng(mix_seed(cfg.seed, idx));
            BipartiteEdgeSets host;
            host.left = host.right = cfg.n;
            if (cfg.conjecture == "rainbow") {
                // Disjoint random edge sets; instance counts only when every
                // set clears the degree threshold.
                std::vector<std::pair<int, int>> all;
                for (int i = 0; i < cfg.n; ++i)
                    for (int j = 0; j < cfg.n; ++j) all.push_back({i, j});
                std::shuffle(all.begin(), all.end(), rng);
                int per = 3;
                if (static_cast<int>(all.size()) < per * cfg.m) return;
                host.edges.assign(all.begin(), all.begin() + per * cfg.m);
                for (int s = 0; s < cfg.m; ++s) {
                    std::vector<int> ids;
                    for (int t = 0; t < per; ++t) ids.push_back(s * per + t);
                    host.sets.push_back(ids);
                }
                int delta = host.max_degree();
                if (per < delta + 2) return;  // hypothesis not met
                tested++;
                if (!check_rainbow(host)) hits[idx] = io::render_edge_sets(host);
                return;
            }
            // Full K_{n,n} host with random set structure.
            for (int i = 0; i < cfg.n; ++i)
                for (int j = 0; j < cfg.n; ++j) host.edges.push_back({i, j});
            if (cfg.conjecture == "underrep") {
                host.sets.assign(cfg.m, {});
                for (std::size_t e = 0; e < host.edges.size(); ++e)
                    host.sets[rng() % cfg.m].push_back(static_cast<int>(e));
                tested++;
                UnderrepResult r = check_underrep(host);
                stats[idx] = to_string(r.minimal_c);
                if (!r.within_m_half) hits[idx] = io::render_edge_sets(host);
                return;
            }
            for (std::size_t e = 0; e < host.edges.size(); ++e)
                host.labels.push_back(1 + static_cast<int>(rng() % cfg.m));
            tested++;
            if (!check_prefix_fair(host)) hits[idx] = io::render_edge_sets(host);
        });
        out.tested = tested;
        for (auto& h : hits)
            if (!h.empty()) out.counterexamples.push_back(std::move(h));
        if (cfg.conjecture == "underrep") {
            Rat worst(0);
            for (auto& s : stats)
                if (!s.empty()) {
                    std::istringstream in(s);
                    long long num = 0, den = 1;
                    char slash;
                    in >> num;
                    if (in >> slash >> den) {
                    }
                    worst = std::max(worst, Rat(num, den));
                }
            out.stats["max_minimal_c"] = to_string(worst);
        }
        return out;
    }

    throw PreconditionViolation("unknown conjecture id: " + cfg.conjecture);
}

// ---------------------------------------------------------------------------
// Fixtures

const std::vector<Fixture>& fixtures() {
    static const std::vector<Fixture> registry{
        {"p4_example", "p4_example.json", "p4_optimum",
         "four-vertex path with classes {1,2,4} and {3}; optimum total deficit 1/2 at {v1,v3}"},
        {"remark20_path", "remark20_path.json", "remark20_optimum",
         "twenty-vertex path with five classes; optimum total deficit exactly 2"},
        {"c6_pairs", "c6_pairs.json", "cycle_individual_ok",
         "six-cycle split into three consecutive pairs; every deficit at most 1"},
        {"c9_triples", "c9_triples.json", "dhw_ok",
         "nine-cycle split into three consecutive triples; two disjoint transversals"},
        {"rigid6", "rigid6.json", "rigid_block",
         "6x6 block set [3]x[3] + [4..6]x[4..6]; rigid, counts {0,2,4,6}, no 3"},
        {"three_c4", "three_c4.json", "no_rainbow",
         "three disjoint 4-cycles with four 3-edge sets; no rainbow matching"},
        {"z4_table", "z4_table.json", "latin_gap",
         "addition table of Z_4; no transversal, but an (n-1)-partial one"},
        {"z6_table", "z6_table.json", "latin_gap",
         "addition table of Z_6; no transversal, but an (n-1)-partial one"},
        {"stein4", "stein4.json", "latin_gap",
         "4x4 equal-part non-Latin square without a full transversal"},
        {"stein5", "stein5.json", "latin_gap",
         "5x5 equal-part non-Latin square without a full transversal"},
    };
    return registry;
}

bool run_fixture_check(const std::string& checker, const std::string& json_text) {
    if (checker == "p4_optimum") {
        VertexPartition vp = io::parse_interval(json_text);
        auto best = interval::oracle_best_total(vp);
        return best.best_total == Rat(1, 2) && best.witness.members == std::vector<int>{0, 2} &&
               check_treesconj0(vp);
    }
    if (checker == "remark20_optimum") {
        VertexPartition vp = io::parse_interval(json_text);
        return interval::oracle_best_total(vp).best_total == Rat(2);
    }
    if (checker == "cycle_individual_ok") {
        VertexPartition vp = io::parse_interval(json_text);
        auto [set, rep] = interval::solve_cycle_individual(vp);
        for (const Rat& b : rep.deficits)
            if (b > Rat(1)) return false;
        return vp.is_independent(set.members);
    }
    if (checker == "dhw_ok") {
        VertexPartition vp = io::parse_interval(json_text);
        auto [s1, s2] = interval::solve_dhw(vp);
        std::vector<int> both = s1.members;
        both.insert(both.end(), s2.members.begin(), s2.members.end());
        std::sort(both.begin(), both.end());
        if (std::adjacent_find(both.begin(), both.end()) != both.end()) return false;
        return vp.is_independent(s1.members) && vp.is_independent(s2.members);
    }
    if (checker == "rigid_block") {
        ColorMatrix f = io::parse_bipartite(json_text);
        auto cert = bipartite2::check_rigidity(f);
        if (!cert.rigid) return false;
        if (bipartite2::parity_signature(f) != bipartite2::Parity::Even) return false;
        try {
            bipartite2::exact_count_matching(f, 3);
            return false;
        } catch (const RigidInfeasible& e) {
            return e.achievable == std::vector<int>{0, 2, 4, 6};
        }
    }
    if (checker == "no_rainbow") {
        return !check_rainbow(io::parse_edge_sets(json_text));
    }
    if (checker == "latin_gap") {
        ColorMatrix a = io::parse_bipartite(json_text);
        return !check_full_transversal(a) && check_stein(a);
    }
    throw PreconditionViolation("unknown fixture checker: " + checker);
}

}  // namespace fairrep::lab
