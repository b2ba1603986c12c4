#pragma once

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "hkmeans/core.hpp"
#include "hkmeans/rng.hpp"
#include "hkmeans/sampling.hpp"

namespace hkm {

struct SolveParams {
    int k = 1;
    double epsilon = 1.0;
    double alpha = 1.0 / 3.0;  ///< always epsilon / 3
    int delta = 0;             ///< effective Delta: max(observed, user override)
    SamplingParams sampling;
    int repeats = 1;
    std::uint64_t seed = 0;
    long long max_calls = 1'000'000'000LL;

    /// Derives alpha, the effective Delta, and the sampling sizes from the
    /// dataset. A Delta override below the observed value is rejected.
    static SolveParams make(const Dataset& data, int k, double epsilon, int repeats = 1,
                            std::uint64_t seed = 0, long long max_calls = 1'000'000'000LL,
                            int delta_override = -1);
};

/// Per-trial instrumentation. Violation counters stay zero on every run; they
/// exist so the test suites can assert the structural invariants wholesale.
struct SearchStats {
    long long calls = 0;
    long long sampling_branches = 0;
    long long pruning_branches = 0;
    long long points_scanned = 0;  ///< sum of |R| over calls
    int max_sampling_depth = 0;

    long long domain_size_violations = 0;  ///< |I_t| outside {0} U [d-Delta, d]
    long long depth_violations = 0;            ///< sampling depth above k(Delta+1)
    long long potential_violations = 0;        ///< sampling branch without potential drop
    long long prune_size_violations = 0;       ///< pruning removed too few points
    bool calls_within_bound = true;            ///< counter vs the closed-form bound

    std::vector<double> root_candidate_evals;  ///< candidate scores at the root
    double returned_eval = 0.0;
};

/// log of the closed-form recursion-count bound (2 d0 (2^k - 1))^(2 d0 + 1)
/// * (1 + 1/(2^(k+1) - 3))^(d0^2) with d0 = k (Delta + 1).
double log_call_bound(int k, int delta);

/// Recursion potential sum_t min{d - |I_t|, Delta + 1}.
int delta_potential(const CenterTuple& centers, int delta);

/// Map from T (bitmask over clusters, proper subset of [k]) to the points of R
/// whose domain fits exactly the centers indexed by T; includes T = empty.
/// Requires that no point of R has its domain inside the intersection of all
/// center domains (the caller strips those first).
using DomainPartition = std::vector<std::pair<std::uint32_t, std::vector<int>>>;
DomainPartition partition_by_domains(const Dataset& data, PointSpan R, const CenterTuple& centers);

/// The nonempty proper subset T maximizing |S_T| (ties: smallest bitmask) if
/// it clears the |R| / (2^k - 1) guard; nothing otherwise.
std::optional<std::pair<std::uint32_t, std::vector<int>>> select_pruning_set(
    const Dataset& data, PointSpan R, const CenterTuple& centers);

/// Candidate score used to pick among recursion results: sum over R of the
/// squared distance to the nearest non-null center (missing center
/// coordinates contribute zero, as everywhere else).
double evaluate_candidate(const Dataset& data, PointSpan R, const CenterTuple& centers);

/// The recursive oracle-free search. Explores every sampling branch (fresh
/// whole center when I_t is empty, one coordinate value per t, j otherwise)
/// plus the pruning branch when its guard holds, and keeps the candidate with
/// the lowest score, ties resolved by branch order.
CenterTuple k_means_search(const Dataset& data, const CenterTuple& centers, std::vector<int> R,
                           const SolveParams& params, Rng rng, SearchStats& stats);

struct SolveReport {
    Clustering best;
    std::vector<double> trial_costs;
    std::vector<SearchStats> trial_stats;
    long long total_calls = 0;
    double wall_seconds = 0.0;
};

/// Runs `repeats` independent searches from null centers, completes each
/// returned tuple against the full dataset, and keeps the clustering with the
/// lowest full Voronoi cost.
SolveReport run_trials(const Dataset& data, const SolveParams& params);

struct IdealizedStats {
    int sampling_phases = 0;
    int pruning_phases = 0;
    bool dichotomy_violation = false;
    bool all_assigned = false;
};

/// Single-pass variant backed by the known optimal partition: each phase
/// either fixes center coordinates by sampling inside the ground-truth
/// cluster or prunes the largest domain-compatible set. Test machinery for
/// the phase dichotomy and the invariants, not part of the shipping solver.
Clustering idealized_k_means(const Dataset& data, const std::vector<int>& ground_truth,
                             const SolveParams& params, Rng& rng,
                             IdealizedStats* stats = nullptr);

}  // namespace hkm
