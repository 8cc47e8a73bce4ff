#pragma once

#include <optional>
#include <utility>

#include "fairrep/fairness.hpp"
#include "fairrep/types.hpp"

namespace fairrep::bipartite2 {

/// F is part 1 (index 0) of a two-part ColorMatrix. F is rigid when it is of
/// the form K x L union (complement K) x (complement L); equivalently, every
/// perfect matching meets F with the same parity.
struct RigidityCertificate {
    bool rigid = false;
    std::vector<int> K, L;  // present iff rigid; rows equal to row 0's pattern
    std::optional<std::pair<Permutation, Permutation>> witness;  // opposite parities
};

RigidityCertificate check_rigidity(const ColorMatrix& f);

struct ExtremeCounts {
    int c_min = 0, c_max = 0;
    Permutation witness_min, witness_max;
};

/// Least and greatest |P cap F| over perfect matchings, via maximum matchings
/// in F and in its complement.
ExtremeCounts extreme_counts(const ColorMatrix& f);

/// Counts attainable by a rigid set: the arithmetic progression
/// n - |K| - |L| + 2t over max(0, |K|+|L|-n) <= t <= min(|K|, |L|).
std::vector<int> rigid_achievable_counts(int n, int k_size, int l_size);

/// A perfect matching with exactly c edges in F. For non-rigid F existence is
/// guaranteed for every c in [c_min, c_max]; found by a transposition walk
/// between the extreme witnesses, then a bounded similarity-graph search,
/// then exhaustive search for n <= 8.
Permutation exact_count_matching(const ColorMatrix& f, int c);

/// A matching meeting both F and its complement at least floor(size/n) times,
/// minus one only when F is rigid and n divides |F|.
Permutation almost_fair_two(const ColorMatrix& f);

enum class Parity { Even, Odd, Mixed };

/// Shared parity of |P cap F| over all matchings, or Mixed when F is not rigid.
Parity parity_signature(const ColorMatrix& f);

}  // namespace fairrep::bipartite2
