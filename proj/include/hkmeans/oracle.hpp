#pragma once

#include "hkmeans/core.hpp"
#include "hkmeans/rng.hpp"

namespace hkm {

struct ExactResult {
    double opt_cost = 0.0;
    std::vector<int> partition;          ///< canonical labels (first occurrence order)
    std::vector<MissingPoint> centers;   ///< per-cluster centroids; null for empty clusters
};

/// Exact k-means by enumerating assignments up to label permutation, scoring
/// each as the sum of per-cluster costs against the cluster centroid. Refuses
/// instances with k^n above `budget` evaluated partitions.
ExactResult exact_k_means(const Dataset& data, int k, long long budget = 10'000'000LL);

/// Lloyd-style alternating baseline: distinct random seed points (missing
/// coordinates filled with global coordinate means), then assignment /
/// centroid rounds until fixpoint or the iteration cap. `round_costs`, when
/// given, receives the cost after seeding and after every round.
Clustering lloyd_baseline(const Dataset& data, int k, int iterations, Rng& rng,
                          std::vector<double>* round_costs = nullptr);

}  // namespace hkm
