#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <string>

#include "fairrep/types.hpp"

namespace fairrep::lab {

// ---------------------------------------------------------------------------
// Small utilities shared by sweeps and the acceptance suite

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t index);

/// Runs fn(0..count-1) across workers; callers keep determinism by writing
/// to index-addressed slots.
void parallel_for(long long count, int workers, const std::function<void(long long)>& fn);

/// All permutations of [n] in lexicographic order.
void for_each_permutation(int n, const std::function<void(const Permutation&)>& visit);

// ---------------------------------------------------------------------------
// Conjecture checkers (exhaustive at small sizes)

/// Both simultaneously: an independent set with total deficit at most m/2
/// and every per-class deficit at most 1.
bool check_treesconj0(const VertexPartition& path_instance);

/// Some perfect matching meets every part's quota floor(|E_i|/n), except
/// possibly part j where quota - 1 suffices. Enumeration cap n <= 7.
bool check_equirep00(const ColorMatrix& a, int j);

/// A perfect matching hitting at least n-1 distinct parts (n parts of size n).
bool check_stein(const ColorMatrix& a);

/// A perfect matching hitting every part (full transversal).
bool check_full_transversal(const ColorMatrix& a);

/// A matching picking one edge from each set of the host, pairwise disjoint.
bool check_rainbow(const BipartiteEdgeSets& host);

struct UnderrepResult {
    Rat minimal_c;       // least c with a matching of size >= |E|/Delta - c obeying all caps
    bool within_m_half;  // minimal_c <= m/2
};
UnderrepResult check_underrep(const BipartiteEdgeSets& host);

/// Some matching M with |{e in M : f(e) <= j}| >= floor(|{e : f(e) <= j}| / Delta)
/// for every label level j.
bool check_prefix_fair(const BipartiteEdgeSets& host);

// ---------------------------------------------------------------------------
// Sweeps

struct SweepConfig {
    std::string conjecture;  // treesconj0 | equirep00 | stein | rainbow | underrep | prefix_fair
    int n = 4;
    int m = 2;
    bool exhaustive = true;
    long long samples = 1000;
    std::uint64_t seed = 1;
    long long budget = 50'000'000;
    int workers = 1;
};

struct SweepOutcome {
    std::string conjecture;
    long long tested = 0;
    std::uint64_t seed = 0;
    std::vector<std::string> counterexamples;  // instance JSON dumps
    std::map<std::string, std::string> stats;
};

SweepOutcome run_sweep(const SweepConfig& config);

// ---------------------------------------------------------------------------
// Named regression fixtures

struct Fixture {
    std::string name;
    std::string file;     // relative path under the fixtures directory
    std::string checker;  // registered check id
    std::string description;
};

const std::vector<Fixture>& fixtures();

/// Runs the named check against an instance JSON document.
bool run_fixture_check(const std::string& checker, const std::string& json_text);

}  // namespace fairrep::lab
