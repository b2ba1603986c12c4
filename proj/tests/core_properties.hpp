#pragma once

#include <algorithm>
#include <cmath>

#include "helpers.hpp"
#include "hkmeans/core.hpp"

namespace hkm::testing {

/// Fuzz suite for the point calculus, shared between the unit tests and the
/// acceptance run. Returns the number of violated properties (0 on success).
inline long core_calculus_violations(std::uint64_t seed, int cases) {
    long bad = 0;
    Rng rng(seed);
    for (int it = 0; it < cases; ++it) {
        int d = 1 + static_cast<int>(rng.uniform_index(5));
        int n = 1 + static_cast<int>(rng.uniform_index(6));
        int delta = static_cast<int>(rng.uniform_index(d + 1));
        Dataset data = random_dataset(rng, n, d, delta);

        MissingPoint x = data.point(static_cast<int>(rng.uniform_index(n)));
        MissingPoint y = data.point(static_cast<int>(rng.uniform_index(n)));

        // Random nested index sets I within J.
        IndexSet J(d), I(d);
        for (int i = 0; i < d; ++i) {
            if (rng.coin()) {
                J.set(i);
                if (rng.coin()) I.set(i);
            }
        }

        double dij = distance_on(x, y, I);
        double dji = distance_on(y, x, I);
        if (!(dij >= 0.0) || dij != dji) ++bad;
        if (distance_on(x, y, J) + 1e-12 < dij) ++bad;  // monotone in the index set

        // Coordinate additivity over a disjoint split of J.
        IndexSet A(d), B(d);
        J.for_each([&](int i) { (rng.coin() ? A : B).set(i); });
        std::vector<int> pts = all_indices(data);
        double whole = cost_on(data, pts, y, J);
        double parts = cost_on(data, pts, y, A) + cost_on(data, pts, y, B);
        if (!close(whole, parts)) ++bad;

        // Coordinate-wise centroid optimality against arbitrary values.
        MissingPoint c = centroid(data, pts);
        for (int rep = 0; rep < 3; ++rep) {
            int i = static_cast<int>(rng.uniform_index(d));
            if (!c.defined.contains(i)) continue;
            MissingPoint alt = c;
            alt.values[i] += 20.0 * (rng.uniform_double() - 0.5);
            IndexSet only_i(d);
            only_i.set(i);
            if (cost_on(data, pts, c, only_i) > cost_on(data, pts, alt, only_i) + 1e-9) ++bad;
        }
    }
    return bad;
}

/// Exhaustive optimality of the Voronoi assignment for small instances.
inline long voronoi_minimality_violations(std::uint64_t seed, int cases) {
    long bad = 0;
    Rng rng(seed);
    for (int it = 0; it < cases; ++it) {
        int d = 1 + static_cast<int>(rng.uniform_index(3));
        int n = 1 + static_cast<int>(rng.uniform_index(6));
        int k = 1 + static_cast<int>(rng.uniform_index(3));
        Dataset data = random_dataset(rng, n, d, std::min(1, d - 1));
        std::vector<MissingPoint> centers;
        for (int t = 0; t < k; ++t) {
            Eigen::VectorXd v(d);
            for (int i = 0; i < d; ++i) v[i] = 10.0 * (rng.uniform_double() - 0.5);
            centers.push_back(MissingPoint::complete(v));
        }
        Assignment a = voronoi_assign(data, centers);

        long long combos = 1;
        for (int p = 0; p < n; ++p) combos *= k;
        for (long long code = 0; code < combos; ++code) {
            long long c = code;
            double alt = 0.0;
            for (int p = 0; p < n; ++p) {
                alt += squared_distance(data, p, centers[c % k]);
                c /= k;
            }
            if (alt + 1e-9 < a.cost) {
                ++bad;
                break;
            }
        }
    }
    return bad;
}

}  // namespace hkm::testing
