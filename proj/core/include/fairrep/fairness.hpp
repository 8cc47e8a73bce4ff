#pragma once

#include "fairrep/types.hpp"

namespace fairrep {

/// Validates the solution against the instance and computes counts, quotas
/// and deficits. Throws InvalidSolution on structural violations.
FairnessReport fairness_report(const VertexPartition& instance, const IndependentSet& s);
FairnessReport fairness_report(const ColorMatrix& instance, const Permutation& p);

/// |{i : sigma(i) != tau(i)}|. A metric that never takes the value 1.
int hamming_distance(const Permutation& sigma, const Permutation& tau);

/// Hamming distance at most 3.
bool sim(const Permutation& sigma, const Permutation& tau);

}  // namespace fairrep
