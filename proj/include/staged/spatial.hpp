#pragma once

#include <algorithm>
#include <vector>

#include "staged/common.hpp"
#include "staged/config.hpp"

namespace staged {

// Spatial neighbors of cell c under the given neighborhood config. Radius
// mode is boundary-inclusive; knn breaks distance ties toward the smaller
// canonical index. A cell is never its own neighbor. Returned sorted.
inline std::vector<size_t> spatial_neighbors(const std::vector<Vec2>& positions, size_t c,
                                             const Neighborhood& nb) {
    std::vector<size_t> out;
    const size_t n = positions.size();
    if (nb.mode == Neighborhood::Mode::Radius) {
        for (size_t s = 0; s < n; ++s)
            if (s != c && dist(positions[s], positions[c]) <= nb.radius) out.push_back(s);
        return out;
    }
    if (static_cast<size_t>(nb.k) >= n)
        throw DomainError("knn k=" + std::to_string(nb.k) + " needs more than " +
                          std::to_string(n) + " cells");
    std::vector<std::pair<double, size_t>> by_dist;
    by_dist.reserve(n - 1);
    for (size_t s = 0; s < n; ++s)
        if (s != c) by_dist.emplace_back(dist(positions[s], positions[c]), s);
    std::sort(by_dist.begin(), by_dist.end());  // ties fall to the smaller index
    for (size_t i = 0; i < static_cast<size_t>(nb.k) && i < by_dist.size(); ++i)
        out.push_back(by_dist[i].second);
    std::sort(out.begin(), out.end());
    return out;
}

}  // namespace staged
