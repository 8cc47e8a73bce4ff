#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <boost/rational.hpp>

namespace fairrep {

/// Exact rational arithmetic for quotas and deficits. Deficit bookkeeping
/// must never round: sums like "total deficit <= m/2" are compared exactly.
using Rat = boost::rational<long long>;

std::string to_string(const Rat& r);

// ---------------------------------------------------------------------------
// Errors

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct InvalidInstance : Error { using Error::Error; };
struct InvalidSolution : Error { using Error::Error; };
struct DimensionMismatch : Error { using Error::Error; };
struct PreconditionViolation : Error { using Error::Error; };
struct CapExceeded : Error { using Error::Error; };
struct BudgetExceeded : Error { using Error::Error; };
struct OutOfRange : Error { using Error::Error; };
struct SearchExhausted : Error { using Error::Error; };
struct InternalInvariantViolation : Error { using Error::Error; };
struct NoRainbow : Error { using Error::Error; };

/// Thrown when an exact intersection count is requested from a rigid edge set
/// that only attains counts in a fixed arithmetic progression.
struct RigidInfeasible : Error {
    std::vector<int> achievable;
    RigidInfeasible(const std::string& msg, std::vector<int> ach)
        : Error(msg), achievable(std::move(ach)) {}
};

// ---------------------------------------------------------------------------
// Interval-side instances (paths, cycles, powers of cycles)

enum class HostKind { Path, Cycle, PowerCycle };

/// A path/cycle/power-cycle whose vertices are labeled by classes.
/// Positions and class indices are 0-based internally; serialization is
/// 1-based and conversion happens only at the JSON boundary.
class VertexPartition {
public:
    VertexPartition(HostKind kind, int spacing, std::vector<int> classes);

    static VertexPartition path(std::vector<int> classes);
    static VertexPartition cycle(std::vector<int> classes);
    static VertexPartition power_cycle(int spacing, std::vector<int> classes);

    HostKind kind;
    int n;
    int s;  // spacing parameter; 2 for paths and cycles
    int m;  // number of classes
    std::vector<int> classes;  // classes[p] in [0, m)

    /// Covering number of the independence complex: 2 for paths/cycles,
    /// s for power cycles.
    int beta() const { return kind == HostKind::PowerCycle ? s : 2; }

    bool adjacent(int u, int v) const;
    std::vector<int> class_sizes() const;
    bool is_independent(const std::vector<int>& members) const;
};

/// Sorted vertex positions forming an independent set of some host instance.
struct IndependentSet {
    std::vector<int> members;
};

// ---------------------------------------------------------------------------
// Bipartite-side instances (edge partitions of K_{n,n})

/// A permutation of [n], identified with a perfect matching of K_{n,n}:
/// row i is matched to column images()[i].
class Permutation {
public:
    explicit Permutation(std::vector<int> images);
    static Permutation identity(int n);

    int size() const { return static_cast<int>(images_.size()); }
    int operator()(int i) const { return images_[i]; }
    const std::vector<int>& images() const { return images_; }

    Permutation inverse() const;
    /// Copy with the images at positions i and j exchanged.
    Permutation swapped(int i, int j) const;

    bool operator==(const Permutation& o) const { return images_ == o.images_; }
    bool operator!=(const Permutation& o) const { return images_ != o.images_; }
    bool operator<(const Permutation& o) const { return images_ < o.images_; }

private:
    std::vector<int> images_;
};

std::size_t hash_value(const Permutation& p);

/// An n x n array with entries in [0, m) encoding a partition of E(K_{n,n});
/// entry (i, j) is the part of edge (i, j). Parts must be nonempty unless the
/// instance is explicitly flagged as allowing empty parts.
class ColorMatrix {
public:
    ColorMatrix(int n, int m, std::vector<int> colors, bool allow_empty_parts = false);

    int n;
    int m;
    bool allow_empty_parts;

    int color(int i, int j) const { return colors_[i * n + j]; }
    const std::vector<int>& flat() const { return colors_; }
    const std::vector<long long>& part_sizes() const { return sizes_; }

    /// Number of edges of the matching lying in each part.
    std::vector<long long> counts(const Permutation& p) const;

private:
    std::vector<int> colors_;
    std::vector<long long> sizes_;
};

/// A general bipartite host with distinguished edge sets, used by the
/// conjecture checkers. Vertices are 0-based per side; sets hold edge indices.
/// labels, when present, give each edge a value in [1, k] for prefix checks.
struct BipartiteEdgeSets {
    int left = 0;
    int right = 0;
    std::vector<std::pair<int, int>> edges;
    std::vector<std::vector<int>> sets;
    std::vector<int> labels;

    int max_degree() const;
    void validate() const;
};

// ---------------------------------------------------------------------------
// Fairness reports

/// Per-class intersection counts, quotas and deficits of a solution.
///
/// Interval instances: quota_i = floor(|V_i| / beta); deficit_i is the least
/// b >= 0 with count_i >= |V_i|/beta - b, kept as an exact rational.
/// Bipartite instances: quota_l = |E_l| / n and deficit_l = count_l - quota_l
/// (signed). total_deficit sums the shortfalls below quota in both cases.
struct FairnessReport {
    std::vector<long long> counts;
    std::vector<Rat> quotas;
    std::vector<Rat> deficits;
    Rat total_deficit;
};

}  // namespace fairrep
