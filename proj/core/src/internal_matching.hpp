#pragma once

#include <algorithm>
#include <functional>
#include <vector>

#include "fairrep/types.hpp"

namespace fairrep::detail {

// Kuhn augmenting-path maximum matching on an n x n boolean adjacency.
// Returns the matched column per row, -1 where unmatched. Deterministic:
// rows and columns are scanned in ascending order.
template <class Adj>
std::vector<int> max_matching(int n, Adj adj) {
    std::vector<int> row_match(n, -1), col_match(n, -1);
    std::vector<char> used(n);
    std::function<bool(int)> augment = [&](int u) -> bool {
        for (int v = 0; v < n; ++v) {
            if (!adj(u, v) || used[v]) continue;
            used[v] = 1;
            if (col_match[v] < 0 || augment(col_match[v])) {
                row_match[u] = v;
                col_match[v] = u;
                return true;
            }
        }
        return false;
    };
    for (int u = 0; u < n; ++u) {
        std::fill(used.begin(), used.end(), 0);
        augment(u);
    }
    return row_match;
}

// Extends a partial row->column assignment to a permutation, giving each
// unmatched row the smallest free column.
inline Permutation complete_matching(std::vector<int> row_match) {
    int n = static_cast<int>(row_match.size());
    std::vector<char> used(n, 0);
    for (int v : row_match)
        if (v >= 0) used[v] = 1;
    int next = 0;
    for (int u = 0; u < n; ++u) {
        if (row_match[u] >= 0) continue;
        while (used[next]) next++;
        row_match[u] = next;
        used[next] = 1;
    }
    return Permutation(std::move(row_match));
}

}  // namespace fairrep::detail
