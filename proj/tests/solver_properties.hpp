#pragma once

#include <algorithm>

#include "helpers.hpp"
#include "hkmeans/solver.hpp"

namespace hkm::testing {

/// Fuzz the S_T domain partition: it must cover every remaining point exactly
/// once, with T the full set for none of them. Returns violations.
inline long partition_cover_violations(std::uint64_t seed, int cases) {
    long bad = 0;
    Rng rng(seed);
    for (int it = 0; it < cases; ++it) {
        int d = 1 + static_cast<int>(rng.uniform_index(6));
        int n = 1 + static_cast<int>(rng.uniform_index(12));
        int k = 1 + static_cast<int>(rng.uniform_index(4));
        int delta = static_cast<int>(rng.uniform_index(d + 1));
        Dataset data = random_dataset(rng, n, d, delta);

        CenterTuple centers;
        for (int t = 0; t < k; ++t) {
            Eigen::VectorXd v = Eigen::VectorXd::Zero(d);
            IndexSet mask(d);
            if (!rng.coin()) {  // half the centers stay null
                for (int i = 0; i < d; ++i)
                    if (rng.coin()) {
                        mask.set(i);
                        v[i] = rng.uniform_double();
                    }
            }
            centers.centers.push_back(MissingPoint(std::move(v), std::move(mask)));
        }

        // Strip the points the caller would have settled first.
        IndexSet icap = centers.domain_intersection();
        std::vector<int> R;
        for (int p = 0; p < n; ++p)
            if (!data.domain(p).subset_of(icap)) R.push_back(p);

        DomainPartition part = partition_by_domains(data, R, centers);
        std::vector<int> seen;
        for (auto& [T, members] : part) {
            if (T == (1u << k) - 1u) ++bad;  // full T must never appear
            for (int p : members) {
                seen.push_back(p);
                // Membership must match the defining predicate exactly.
                for (int t = 0; t < k; ++t) {
                    bool fits = data.domain(p).subset_of(centers.domain(t));
                    bool flagged = (T >> t) & 1u;
                    if (fits != flagged) ++bad;
                }
            }
        }
        std::sort(seen.begin(), seen.end());
        if (seen != R) ++bad;
    }
    return bad;
}

}  // namespace hkm::testing
