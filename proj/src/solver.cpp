#include "hkmeans/solver.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <map>

namespace hkm {

namespace {

constexpr std::uint64_t salt(int tag, int a = 0, int b = 0) {
    return (static_cast<std::uint64_t>(tag) << 48) ^
           (static_cast<std::uint64_t>(static_cast<std::uint32_t>(a)) << 24) ^
           static_cast<std::uint64_t>(static_cast<std::uint32_t>(b));
}

constexpr int kSaltInitialDraw = 1;
constexpr int kSaltCoordinateDraw = 2;
constexpr int kSaltRecurseInitial = 3;
constexpr int kSaltRecurseCoordinate = 4;
constexpr int kSaltRecursePrune = 5;
constexpr int kSaltTrial = 6;

}  // namespace

SolveParams SolveParams::make(const Dataset& data, int k, double epsilon, int repeats,
                              std::uint64_t seed, long long max_calls, int delta_override) {
    if (k < 1) throw usage_error("k must be at least 1");
    if (k > 30) throw usage_error("k too large for the cluster-subset enumeration");
    if (!(epsilon > 0.0)) throw usage_error("epsilon must be positive");
    if (repeats < 1) throw usage_error("repeats must be at least 1");
    if (max_calls < 1) throw usage_error("max_calls must be positive");
    if (delta_override >= 0 && delta_override < data.delta())
        throw usage_error("delta override below the dataset's observed value");
    SolveParams p;
    p.k = k;
    p.epsilon = epsilon;
    p.alpha = epsilon / 3.0;
    p.delta = delta_override >= 0 ? delta_override : data.delta();
    p.sampling = SamplingParams::from_alpha_delta(p.alpha, p.delta);
    p.repeats = repeats;
    p.seed = seed;
    p.max_calls = max_calls;
    return p;
}

double log_call_bound(int k, int delta) {
    double d0 = static_cast<double>(k) * (delta + 1);
    double leaves = std::pow(2.0, k) - 1.0;
    return (2.0 * d0 + 1.0) * std::log(2.0 * d0 * leaves) +
           d0 * d0 * std::log1p(1.0 / (std::pow(2.0, k + 1) - 3.0));
}

int delta_potential(const CenterTuple& centers, int delta) {
    int d = centers.centers.front().dim();
    int acc = 0;
    for (const MissingPoint& c : centers.centers)
        acc += std::min(d - c.defined.count(), delta + 1);
    return acc;
}

DomainPartition partition_by_domains(const Dataset& data, PointSpan R,
                                     const CenterTuple& centers) {
    int k = centers.k();
    if (k < 1 || k > 30) throw usage_error("cluster count outside the supported range");
    std::uint32_t full = (1u << k) - 1u;
    std::map<std::uint32_t, std::vector<int>> groups;
    for (int p : R) {
        const IndexSet& dom = data.domain(p);
        std::uint32_t T = 0;
        for (int t = 0; t < k; ++t)
            if (dom.subset_of(centers.domain(t))) T |= (1u << t);
        if (T == full)
            throw usage_error("partition_by_domains: point fits every center domain");
        groups[T].push_back(p);
    }
    return DomainPartition(groups.begin(), groups.end());
}

std::optional<std::pair<std::uint32_t, std::vector<int>>> select_pruning_set(
    const Dataset& data, PointSpan R, const CenterTuple& centers) {
    DomainPartition part = partition_by_domains(data, R, centers);
    const std::vector<int>* best = nullptr;
    std::uint32_t best_T = 0;
    for (auto& [T, members] : part) {
        if (T == 0) continue;  // the empty set is never pruned against
        if (!best || members.size() > best->size()) {
            best = &members;
            best_T = T;
        }
    }
    if (!best) return std::nullopt;
    long long leaves = (1LL << centers.k()) - 1;
    if (static_cast<long long>(best->size()) * leaves < static_cast<long long>(R.size()))
        return std::nullopt;
    return std::make_pair(best_T, *best);
}

double evaluate_candidate(const Dataset& data, PointSpan R, const CenterTuple& centers) {
    double acc = 0.0;
    for (int p : R) {
        double best = std::numeric_limits<double>::infinity();
        for (const MissingPoint& c : centers.centers) {
            if (c.is_null()) continue;
            best = std::min(best, squared_distance(data, p, c));
        }
        if (!std::isfinite(best))
            throw std::logic_error("candidate tuple has no placed center for a nonempty R");
        acc += best;
    }
    return acc;
}

namespace {

struct SearchCtx {
    const Dataset& data;
    const SolveParams& params;
    SearchStats& stats;
    int depth_limit;  // k (Delta + 1)
};

void check_domain_invariant(SearchCtx& ctx, const CenterTuple& centers) {
    int d = ctx.data.dim();
    for (const MissingPoint& c : centers.centers) {
        int sz = c.defined.count();
        if (sz != 0 && sz < d - ctx.params.delta) ++ctx.stats.domain_size_violations;
    }
}

CenterTuple search(SearchCtx& ctx, const CenterTuple& centers, PointSpan R_in, Rng rng,
                   int sampling_depth, std::vector<double>* root_evals) {
    if (++ctx.stats.calls > ctx.params.max_calls)
        throw resource_error("recursion call budget exceeded (max_calls)");
    ctx.stats.points_scanned += static_cast<long long>(R_in.size());
    check_domain_invariant(ctx, centers);

    // (1) Points whose domain fits inside every center domain are settled.
    IndexSet icap = centers.domain_intersection();
    std::vector<int> R;
    R.reserve(R_in.size());
    for (int p : R_in)
        if (!ctx.data.domain(p).subset_of(icap)) R.push_back(p);
    if (R.empty()) return centers;

    const int k = ctx.params.k;
    const int d = ctx.data.dim();
    int pot = delta_potential(centers, ctx.params.delta);

    CenterTuple best;
    double best_eval = std::numeric_limits<double>::infinity();
    bool have_best = false;
    auto consider = [&](CenterTuple&& cand) {
        double e = evaluate_candidate(ctx.data, R, cand);
        if (root_evals) root_evals->push_back(e);
        if (!have_best || e < best_eval) {
            best = std::move(cand);
            best_eval = e;
            have_best = true;
        }
    };

    auto recurse_sampling = [&](CenterTuple&& child, std::uint64_t rec_salt) {
        ++ctx.stats.sampling_branches;
        if (sampling_depth + 1 > ctx.depth_limit) ++ctx.stats.depth_violations;
        ctx.stats.max_sampling_depth = std::max(ctx.stats.max_sampling_depth, sampling_depth + 1);
        if (delta_potential(child, ctx.params.delta) >= pot) ++ctx.stats.potential_violations;
        consider(search(ctx, child, R, rng.split(rec_salt), sampling_depth + 1, nullptr));
    };

    // (2) Sampling branches, t ascending, then j ascending.
    for (int t = 0; t < k; ++t) {
        const IndexSet& It = centers.domain(t);
        if (It.none()) {
            Rng draw = rng.split(salt(kSaltInitialDraw, t));
            MissingPoint u = ctx.params.delta == 0
                                 ? complete_mean_sample(ctx.data, R, ctx.params.sampling, draw)
                                 : initial_center_sample(ctx.data, R, ctx.params.sampling, draw);
            CenterTuple child = centers;
            child.centers[t] = std::move(u);
            recurse_sampling(std::move(child), salt(kSaltRecurseInitial, t));
        } else if (It.count() < d) {
            for (int j = 0; j < d; ++j) {
                if (It.contains(j)) continue;
                Rng draw = rng.split(salt(kSaltCoordinateDraw, t, j));
                double v = superset_sample_value(ctx.data, R, j, ctx.params.sampling, draw);
                CenterTuple child = centers;
                child.centers[t].values[j] = v;
                child.centers[t].defined.set(j);
                recurse_sampling(std::move(child), salt(kSaltRecurseCoordinate, t, j));
            }
        }
    }

    // (3) Pruning branch: settle the closest half of the largest S_T.
    if (auto pruned = select_pruning_set(ctx.data, R, centers)) {
        auto& [T, S] = *pruned;
        std::vector<std::pair<double, int>> keyed;
        keyed.reserve(S.size());
        for (int p : S) {
            double dmin = std::numeric_limits<double>::infinity();
            for (int t = 0; t < k; ++t)
                if (T & (1u << t))
                    dmin = std::min(dmin, squared_distance(ctx.data, p, centers.centers[t]));
            keyed.emplace_back(dmin, p);
        }
        std::stable_sort(keyed.begin(), keyed.end(),
                         [](const auto& a, const auto& b) { return a.first < b.first; });
        std::size_t take = (S.size() + 1) / 2;

        ++ctx.stats.pruning_branches;
        long long min_removed =
            (static_cast<long long>(R.size()) + 2 * ((1LL << k) - 1) - 1) / (2 * ((1LL << k) - 1));
        if (static_cast<long long>(take) < std::max(1LL, min_removed))
            ++ctx.stats.prune_size_violations;

        std::vector<int> removed;
        removed.reserve(take);
        for (std::size_t i = 0; i < take; ++i) removed.push_back(keyed[i].second);
        std::sort(removed.begin(), removed.end());
        std::vector<int> rest;
        rest.reserve(R.size() - take);
        std::size_t ri = 0;
        for (int p : R) {
            if (ri < removed.size() && removed[ri] == p) {
                ++ri;
                continue;
            }
            rest.push_back(p);
        }
        consider(search(ctx, centers, rest, rng.split(salt(kSaltRecursePrune)), sampling_depth,
                        nullptr));
    }

    if (!have_best) throw std::logic_error("search node produced no candidate");
    if (root_evals) ctx.stats.returned_eval = best_eval;
    return best;
}

}  // namespace

CenterTuple k_means_search(const Dataset& data, const CenterTuple& centers, std::vector<int> R,
                           const SolveParams& params, Rng rng, SearchStats& stats) {
    if (centers.k() != params.k) throw usage_error("center tuple size does not match k");
    SearchCtx ctx{data, params, stats, params.k * (params.delta + 1)};
    CenterTuple out = search(ctx, centers, R, rng, 0, &stats.root_candidate_evals);
    double log_bound = log_call_bound(params.k, params.delta);
    stats.calls_within_bound = std::log(static_cast<double>(stats.calls)) <= log_bound;
    return out;
}

SolveReport run_trials(const Dataset& data, const SolveParams& params) {
    if (params.k > data.size()) throw usage_error("k exceeds the number of points");
    auto t0 = std::chrono::steady_clock::now();

    Rng root(params.seed);
    SolveReport report;
    bool have_best = false;
    std::vector<int> everything = all_indices(data);
    for (int r = 0; r < params.repeats; ++r) {
        SearchStats stats;
        CenterTuple start = CenterTuple::null_tuple(params.k, data.dim());
        CenterTuple result = k_means_search(data, start, everything, params,
                                            root.split(salt(kSaltTrial, r)), stats);

        Assignment partial = voronoi_assign(data, result.centers);
        std::vector<Eigen::VectorXd> completed =
            complete_centers(result.centers, data, partial.labels);
        Clustering full = voronoi_clustering(data, std::move(completed));

        report.trial_costs.push_back(full.cost);
        report.total_calls += stats.calls;
        report.trial_stats.push_back(std::move(stats));
        if (!have_best || full.cost < report.best.cost) {
            report.best = std::move(full);
            have_best = true;
        }
    }

    report.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return report;
}

Clustering idealized_k_means(const Dataset& data, const std::vector<int>& ground_truth,
                             const SolveParams& params, Rng& rng, IdealizedStats* stats_out) {
    const int n = data.size();
    const int k = params.k;
    const int d = data.dim();
    if (static_cast<int>(ground_truth.size()) != n)
        throw usage_error("ground truth length does not match dataset");
    for (int label : ground_truth)
        if (label < 0 || label >= k) throw usage_error("ground truth label out of range");

    IdealizedStats stats;
    const double c_threshold = params.alpha / (8.0 * std::pow(2.0, k) * k * k *
                                               (params.delta + 1.0) * (params.delta + 1.0));

    CenterTuple centers = CenterTuple::null_tuple(k, d);
    std::vector<int> labels(n, -1);
    std::vector<int> R = all_indices(data);

    // Settle every point whose domain fits inside all current center domains.
    auto strip_and_assign = [&]() {
        IndexSet icap = centers.domain_intersection();
        std::vector<int> rest;
        rest.reserve(R.size());
        for (int p : R) {
            if (!data.domain(p).subset_of(icap)) {
                rest.push_back(p);
                continue;
            }
            int best = 0;
            double best_d = squared_distance(data, p, centers.centers[0]);
            for (int t = 1; t < k; ++t) {
                double dsq = squared_distance(data, p, centers.centers[t]);
                if (dsq < best_d) {
                    best_d = dsq;
                    best = t;
                }
            }
            labels[p] = best;
        }
        R = std::move(rest);
    };

    strip_and_assign();
    while (!R.empty()) {
        // Phase choice: the cluster with the most remaining partially-defined
        // mass on its center's missing coordinates.
        std::vector<std::vector<int>> cluster_members(k);
        for (int p : R) cluster_members[ground_truth[p]].push_back(p);

        int t_star = 0;
        long long pd_best = -1;
        for (int t = 0; t < k; ++t) {
            IndexSet missing = centers.domain(t).complement();
            long long pd = 0;
            for (int p : cluster_members[t])
                if (data.domain(p).intersects(missing)) ++pd;
            if (pd > pd_best) {
                pd_best = pd;
                t_star = t;
            }
        }
        bool sampling_fires = static_cast<double>(pd_best) >= c_threshold * R.size();

        // Dichotomy: either a sampling phase fires or some S_T holds a
        // c-fraction of R inside its own clusters.
        DomainPartition part = partition_by_domains(data, R, centers);
        bool prune_witness = false;
        for (auto& [T, members] : part) {
            if (T == 0) continue;
            long long inside = 0;
            for (int p : members)
                if (T & (1u << ground_truth[p])) ++inside;
            if (static_cast<double>(inside) >= c_threshold * R.size()) {
                prune_witness = true;
                break;
            }
        }
        if (!sampling_fires && !prune_witness) {
            stats.dichotomy_violation = true;
            if (stats_out) *stats_out = stats;
            throw std::logic_error("idealized run: neither phase condition fires");
        }

        if (sampling_fires) {
            ++stats.sampling_phases;
            const std::vector<int>& Q = cluster_members[t_star];
            if (centers.domain(t_star).none()) {
                centers.centers[t_star] =
                    params.delta == 0 ? complete_mean_sample(data, Q, params.sampling, rng)
                                      : initial_center_sample(data, Q, params.sampling, rng);
            } else {
                int j_star = -1;
                int pd_j_best = 0;
                for (int j = 0; j < d; ++j) {
                    if (centers.domain(t_star).contains(j)) continue;
                    int pd = 0;
                    for (int p : Q)
                        if (data.defined(p, j)) ++pd;
                    if (pd > pd_j_best) {
                        pd_j_best = pd;
                        j_star = j;
                    }
                }
                if (j_star < 0) throw std::logic_error("sampling phase with no coordinate mass");
                centers.centers[t_star].values[j_star] =
                    superset_sample_value(data, Q, j_star, params.sampling, rng);
                centers.centers[t_star].defined.set(j_star);
            }
            strip_and_assign();
        } else {
            ++stats.pruning_phases;
            const std::vector<int>* S = nullptr;
            std::uint32_t T_star = 0;
            for (auto& [T, members] : part) {
                if (T == 0) continue;
                if (!S || members.size() > S->size()) {
                    S = &members;
                    T_star = T;
                }
            }
            if (!S) throw std::logic_error("pruning phase with no nonempty S_T");
            std::vector<std::tuple<double, int, int>> keyed;  // (dist, point, nearest t in T)
            keyed.reserve(S->size());
            for (int p : *S) {
                double dmin = std::numeric_limits<double>::infinity();
                int tmin = -1;
                for (int t = 0; t < k; ++t) {
                    if (!(T_star & (1u << t))) continue;
                    double dsq = squared_distance(data, p, centers.centers[t]);
                    if (dsq < dmin) {
                        dmin = dsq;
                        tmin = t;
                    }
                }
                keyed.emplace_back(dmin, p, tmin);
            }
            std::stable_sort(keyed.begin(), keyed.end(), [](const auto& a, const auto& b) {
                return std::get<0>(a) < std::get<0>(b);
            });
            std::size_t take = (S->size() + 1) / 2;
            std::vector<int> removed;
            removed.reserve(take);
            for (std::size_t i = 0; i < take; ++i) {
                labels[std::get<1>(keyed[i])] = std::get<2>(keyed[i]);
                removed.push_back(std::get<1>(keyed[i]));
            }
            std::sort(removed.begin(), removed.end());
            std::vector<int> rest;
            rest.reserve(R.size() - take);
            std::size_t ri = 0;
            for (int p : R) {
                if (ri < removed.size() && removed[ri] == p) {
                    ++ri;
                    continue;
                }
                rest.push_back(p);
            }
            R = std::move(rest);
        }
    }

    stats.all_assigned = std::none_of(labels.begin(), labels.end(), [](int v) { return v < 0; });
    if (stats_out) *stats_out = stats;

    std::vector<Eigen::VectorXd> completed = complete_centers(centers.centers, data, labels);
    Clustering out;
    out.centers = std::move(completed);
    out.assignment = labels;
    out.cost = 0.0;
    for (int p = 0; p < n; ++p)
        out.cost += squared_distance(data, p, MissingPoint::complete(out.centers[labels[p]]));
    return out;
}

}  // namespace hkm
