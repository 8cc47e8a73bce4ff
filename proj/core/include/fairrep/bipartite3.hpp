#pragma once

#include <array>
#include <optional>
#include <utility>

#include "fairrep/fairness.hpp"
#include "fairrep/types.hpp"

namespace fairrep::bipartite3 {

/// Reroutes value i: the result fixes position i, and the old preimage of i
/// takes over sigma(i). Equals sigma when sigma already fixes i.
Permutation shift(int i, const Permutation& sigma);

/// A matching property relative to integer part quotas k_l = |E_l| / n:
/// Plus: count_l >= k_l; PlusPlus: count_l > k_l; Minus: count_l <= k_l.
struct PropertyTag {
    enum class Sense { Plus, PlusPlus, Minus };
    int part = 0;
    Sense sense = Sense::Plus;
};

bool satisfies(const ColorMatrix& a, const Permutation& p, PropertyTag tag);

struct LopsidedDetail {
    Permutation matching;
    /// Proper edge coloring of E_boost union E_mid with at most n classes of
    /// near-equal size; classes hold (row, column) cells.
    std::vector<std::vector<std::pair<int, int>>> color_classes;
    int chosen_class = -1;
};

/// A perfect matching with at least ceil(|E_boost|/n) boost edges and at most
/// ceil(|E_cap|/n) cap edges, built from a balanced proper edge coloring of
/// the other two parts.
Permutation lopsided_matching(const ColorMatrix& a, int boost, int cap);
LopsidedDetail lopsided_matching_detail(const ColorMatrix& a, int boost, int cap);

/// A path of matchings from `from` to `to`, consecutive ones at Hamming
/// distance at most 3, every element satisfying `preserve`. Requires integer
/// quotas (n divides every part size) and endpoints with the property.
std::vector<Permutation> boundary_walk(const ColorMatrix& a, const Permutation& from,
                                       const Permutation& to, PropertyTag preserve);

/// Triangulates the quadrilateral sigma - tau - shift_i(tau) - shift_i(sigma)
/// (boundary exactly those four edges) using only vertices within Hamming
/// distance 3 of their triangle mates. Empty when the square degenerates.
std::vector<std::array<Permutation, 3>> fill_square(const Permutation& sigma,
                                                    const Permutation& tau, int i);

struct DiskVertex {
    int id;
    Permutation perm;
    int color;  // 0-based part index
};

/// Triangulated disk whose boundary is a hexagon of matchings: six arcs, each
/// preserving one property, with interior rings obtained by repeated shifts.
struct SimplicialDisk {
    std::vector<DiskVertex> vertices;
    std::vector<std::array<int, 3>> triangles;
    std::array<std::vector<int>, 6> boundary_arcs;  // inclusive endpoint ids
};

/// Checks every disk invariant: triangles pairwise similar, boundary edges
/// similar, arcs concatenating into a closed cycle, and the six boundary
/// coloring conditions. Throws InternalInvariantViolation on failure.
void validate_disk(const ColorMatrix& a, const SimplicialDisk& disk);

struct BuildResult {
    std::optional<SimplicialDisk> disk;
    /// Set when the construction short-circuits: either some vertex already
    /// has all deficits zero, or a boundary violation pair resolves directly.
    std::optional<Permutation> early;
};

BuildResult build_disk(const ColorMatrix& a);

/// A triangle whose vertices are colored 1, 2, 3; returns its permutations
/// ordered by color, so part l is over-represented by the l-th entry.
std::array<Permutation, 3> find_rainbow(const ColorMatrix& a, const SimplicialDisk& disk);

/// Given pairwise-similar matchings over-representing parts 1, 2, 3
/// respectively, produces one with every signed deficit in {-1, 0, 1}.
Permutation resolve_triangle(const ColorMatrix& a, const Permutation& s1, const Permutation& s2,
                             const Permutation& s3);

/// Number of times resolve_triangle had to fall back to its bounded search;
/// expected to stay zero.
long long resolve_safety_net_count();
void reset_resolve_safety_net_count();

/// Full pipeline for a three-part partition of E(K_{n,n}): a matching whose
/// count in each part lies within [floor(|E_l|/n) - 1, ceil(|E_l|/n) + 1].
std::pair<Permutation, FairnessReport> solve_three(const ColorMatrix& a);

}  // namespace fairrep::bipartite3
