#include "fairrep/fairness.hpp"

#include <algorithm>

namespace fairrep {

FairnessReport fairness_report(const VertexPartition& instance, const IndependentSet& s) {
    if (!instance.is_independent(s.members))
        throw InvalidSolution("set is not independent in the host instance");
    FairnessReport rep;
    rep.counts.assign(instance.m, 0);
    for (int p : s.members) rep.counts[instance.classes[p]]++;
    const int beta = instance.beta();
    const std::vector<int> sizes = instance.class_sizes();
    rep.total_deficit = Rat(0);
    for (int i = 0; i < instance.m; ++i) {
        Rat target(sizes[i], beta);
        rep.quotas.push_back(Rat(sizes[i] / beta));
        Rat b = std::max(Rat(0), target - Rat(rep.counts[i]));
        rep.deficits.push_back(b);
        rep.total_deficit += b;
    }
    return rep;
}

FairnessReport fairness_report(const ColorMatrix& instance, const Permutation& p) {
    FairnessReport rep;
    rep.counts = instance.counts(p);
    rep.total_deficit = Rat(0);
    for (int l = 0; l < instance.m; ++l) {
        Rat quota(instance.part_sizes()[l], instance.n);
        rep.quotas.push_back(quota);
        Rat d = Rat(rep.counts[l]) - quota;
        rep.deficits.push_back(d);
        rep.total_deficit += std::max(Rat(0), -d);
    }
    return rep;
}

int hamming_distance(const Permutation& sigma, const Permutation& tau) {
    if (sigma.size() != tau.size())
        throw DimensionMismatch("permutations act on different ground sets");
    int d = 0;
    for (int i = 0; i < sigma.size(); ++i)
        if (sigma(i) != tau(i)) d++;
    return d;
}

bool sim(const Permutation& sigma, const Permutation& tau) {
    return hamming_distance(sigma, tau) <= 3;
}

}  // namespace fairrep
