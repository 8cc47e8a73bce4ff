#pragma once

#include <functional>
#include <optional>
#include <utility>

#include "fairrep/fairness.hpp"
#include "fairrep/types.hpp"

namespace fairrep::interval {

/// A discrete cut pattern over a path: cut positions split the path into
/// segments, each segment carries a sign, and evaluation picks the vertices
/// of matching global parity inside each segment (cut vertices are dropped,
/// which restores independence across sign changes).
struct CutPattern {
    std::vector<int> cuts;            // sorted, distinct positions
    std::vector<bool> segment_signs;  // cuts.size() + 1 entries
};

IndependentSet evaluate_cut_pattern(const VertexPartition& path, const CutPattern& pattern);

/// Independent set with total deficit at most m/2, found by searching cut
/// patterns with at most m cuts. Among the candidates examined, returns one
/// minimizing the total deficit, ties broken by lexicographically smallest
/// member list. When every class has size 2 a coloring-based candidate with
/// total deficit at most m/3 joins the pool.
std::pair<IndependentSet, FairnessReport> solve_path_total(const VertexPartition& instance);

/// Independent set meeting class i exactly targets[i] times on a cycle whose
/// class sizes are 2*targets[i]+1 for i < m and 2*targets[m-1] for the last.
IndependentSet solve_cycle_exact(const VertexPartition& instance, const std::vector<int>& targets);

/// Independent set on a cycle with every per-class deficit at most 1,
/// obtained by contracting one vertex in each even class beyond a designated
/// one (or at `avoid` when every class is odd) and solving exactly.
std::pair<IndependentSet, FairnessReport> solve_cycle_individual(
    const VertexPartition& instance, std::optional<int> avoid = std::nullopt);

/// Independent set of a power cycle (spacing s a power of 2) meeting class i
/// exactly floor((|V_i|-s+1)/s) times for i < m and floor(|V_m|/s) for the
/// last class. Classes too small to contribute are contracted away entirely.
IndependentSet solve_power_cycle(const VertexPartition& instance);

std::vector<int> power_cycle_targets(const VertexPartition& instance);

/// Two disjoint independent sets on a cycle of length 3k partitioned into k
/// triples, each set containing exactly one vertex of every triple.
std::pair<IndependentSet, IndependentSet> solve_dhw(const VertexPartition& instance);

// ---------------------------------------------------------------------------
// Exhaustive oracle

struct OracleCaps {
    int path_cycle = 24;
    int power_cycle = 20;
};

/// Enumerates every independent set of the instance (including the empty
/// set) in lexicographic order of the member list.
void for_each_independent_set(const VertexPartition& instance,
                              const std::function<void(const std::vector<int>&)>& visit,
                              OracleCaps caps = {});

struct OracleOptimum {
    Rat best_total;
    IndependentSet witness;  // lexicographically smallest optimizer
};

/// Minimum total deficit over all independent sets, by exhaustive search.
OracleOptimum oracle_best_total(const VertexPartition& instance, OracleCaps caps = {});

/// All independent sets satisfying a caller predicate.
std::vector<std::vector<int>> oracle_all_satisfying(
    const VertexPartition& instance,
    const std::function<bool(const std::vector<int>&)>& predicate, OracleCaps caps = {});

}  // namespace fairrep::interval
