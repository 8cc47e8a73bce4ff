#include "fairrep/types.hpp"

#include <algorithm>
#include <numeric>

namespace fairrep {

std::string to_string(const Rat& r) {
    if (r.denominator() == 1) return std::to_string(r.numerator());
    return std::to_string(r.numerator()) + "/" + std::to_string(r.denominator());
}

// ---------------------------------------------------------------------------

VertexPartition::VertexPartition(HostKind kind_, int spacing, std::vector<int> classes_)
    : kind(kind_), n(static_cast<int>(classes_.size())), s(spacing), m(0),
      classes(std::move(classes_)) {
    if (n <= 0) throw InvalidInstance("instance has no vertices");
    if (kind == HostKind::Cycle && n < 3)
        throw InvalidInstance("a cycle needs at least 3 vertices");
    if (kind == HostKind::PowerCycle) {
        if (s < 2) throw InvalidInstance("power cycle spacing must be >= 2");
    } else if (s != 2) {
        throw InvalidInstance("paths and cycles have spacing 2");
    }
    for (int c : classes) {
        if (c < 0) throw InvalidInstance("negative class index");
        m = std::max(m, c + 1);
    }
    std::vector<char> seen(m, 0);
    for (int c : classes) seen[c] = 1;
    if (std::find(seen.begin(), seen.end(), 0) != seen.end())
        throw InvalidInstance("classes must form a partition into nonempty parts");
}

VertexPartition VertexPartition::path(std::vector<int> classes) {
    return VertexPartition(HostKind::Path, 2, std::move(classes));
}
VertexPartition VertexPartition::cycle(std::vector<int> classes) {
    return VertexPartition(HostKind::Cycle, 2, std::move(classes));
}
VertexPartition VertexPartition::power_cycle(int spacing, std::vector<int> classes) {
    return VertexPartition(HostKind::PowerCycle, spacing, std::move(classes));
}

bool VertexPartition::adjacent(int u, int v) const {
    if (u == v) return false;
    int d = std::abs(u - v);
    switch (kind) {
        case HostKind::Path:
            return d == 1;
        case HostKind::Cycle:
            return d == 1 || d == n - 1;
        case HostKind::PowerCycle: {
            int cyc = std::min(d, n - d);
            return cyc < s;
        }
    }
    return false;
}

std::vector<int> VertexPartition::class_sizes() const {
    std::vector<int> sizes(m, 0);
    for (int c : classes) sizes[c]++;
    return sizes;
}

bool VertexPartition::is_independent(const std::vector<int>& members) const {
    for (int p : members)
        if (p < 0 || p >= n) return false;
    std::vector<int> sorted = members;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) return false;
    if (sorted.size() <= 1) return true;
    if (kind == HostKind::Path) {
        for (std::size_t i = 0; i + 1 < sorted.size(); ++i)
            if (sorted[i + 1] - sorted[i] < 2) return false;
        return true;
    }
    int gap = (kind == HostKind::PowerCycle) ? s : 2;
    for (std::size_t i = 0; i + 1 < sorted.size(); ++i)
        if (sorted[i + 1] - sorted[i] < gap) return false;
    // wrap-around distance between the last and the first member
    if (n - (sorted.back() - sorted.front()) < gap) return false;
    return true;
}

// ---------------------------------------------------------------------------

Permutation::Permutation(std::vector<int> images) : images_(std::move(images)) {
    int n = static_cast<int>(images_.size());
    if (n == 0) throw InvalidSolution("empty permutation");
    std::vector<char> seen(n, 0);
    for (int v : images_) {
        if (v < 0 || v >= n || seen[v]) throw InvalidSolution("not a bijection on [n]");
        seen[v] = 1;
    }
}

Permutation Permutation::identity(int n) {
    std::vector<int> im(n);
    std::iota(im.begin(), im.end(), 0);
    return Permutation(std::move(im));
}

Permutation Permutation::inverse() const {
    std::vector<int> inv(images_.size());
    for (int i = 0; i < size(); ++i) inv[images_[i]] = i;
    return Permutation(std::move(inv));
}

Permutation Permutation::swapped(int i, int j) const {
    std::vector<int> im = images_;
    std::swap(im[i], im[j]);
    return Permutation(std::move(im));
}

std::size_t hash_value(const Permutation& p) {
    std::size_t h = 1469598103934665603ull;
    for (int v : p.images()) {
        h ^= static_cast<std::size_t>(v) + 0x9e3779b97f4a7c15ull;
        h *= 1099511628211ull;
    }
    return h;
}

// ---------------------------------------------------------------------------

ColorMatrix::ColorMatrix(int n_, int m_, std::vector<int> colors, bool allow_empty)
    : n(n_), m(m_), allow_empty_parts(allow_empty), colors_(std::move(colors)) {
    if (n <= 0) throw InvalidInstance("matrix side must be positive");
    if (m <= 0) throw InvalidInstance("number of parts must be positive");
    if (static_cast<int>(colors_.size()) != n * n)
        throw InvalidInstance("color array must have n*n entries");
    sizes_.assign(m, 0);
    for (int c : colors_) {
        if (c < 0 || c >= m) throw InvalidInstance("color out of range");
        sizes_[c]++;
    }
    if (!allow_empty_parts) {
        for (int p = 0; p < m; ++p)
            if (sizes_[p] == 0)
                throw InvalidInstance("part " + std::to_string(p + 1) + " is empty");
    }
}

std::vector<long long> ColorMatrix::counts(const Permutation& p) const {
    if (p.size() != n) throw DimensionMismatch("permutation size does not match matrix");
    std::vector<long long> c(m, 0);
    for (int i = 0; i < n; ++i) c[color(i, p(i))]++;
    return c;
}

// ---------------------------------------------------------------------------

int BipartiteEdgeSets::max_degree() const {
    std::vector<int> dl(left, 0), dr(right, 0);
    int best = 0;
    for (auto [u, v] : edges) {
        best = std::max(best, ++dl[u]);
        best = std::max(best, ++dr[v]);
    }
    return best;
}

void BipartiteEdgeSets::validate() const {
    if (left <= 0 || right <= 0) throw InvalidInstance("host sides must be positive");
    for (auto [u, v] : edges)
        if (u < 0 || u >= left || v < 0 || v >= right)
            throw InvalidInstance("edge endpoint out of range");
    for (const auto& set : sets)
        for (int e : set)
            if (e < 0 || e >= static_cast<int>(edges.size()))
                throw InvalidInstance("set refers to a missing edge");
    if (!labels.empty()) {
        if (labels.size() != edges.size())
            throw InvalidInstance("labels must cover every edge");
        for (int l : labels)
            if (l < 1) throw InvalidInstance("labels start at 1");
    }
}

}  // namespace fairrep
