#include "hkmeans/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace hkm {

namespace {

// Incremental per-cluster sufficient statistics. The cost of cluster t at
// coordinate i is sumsq - sum^2 / cnt over the assigned points defined at i.
struct ClusterStats {
    std::vector<double> sum, sumsq;
    std::vector<int> cnt;
    double cost = 0.0;

    explicit ClusterStats(int d) : sum(d, 0.0), sumsq(d, 0.0), cnt(d, 0) {}

    double term(int i) const { return cnt[i] > 0 ? sumsq[i] - sum[i] * sum[i] / cnt[i] : 0.0; }

    void add(const Dataset& data, int p, int sign) {
        data.domain(p).for_each([&](int i) {
            cost -= term(i);
            sum[i] += sign * data.value(p, i);
            sumsq[i] += sign * data.value(p, i) * data.value(p, i);
            cnt[i] += sign;
            cost += term(i);
        });
    }
};

struct Enumerator {
    const Dataset& data;
    int k;
    std::vector<ClusterStats> stats;
    std::vector<int> labels;
    double total = 0.0;
    double best = std::numeric_limits<double>::infinity();
    std::vector<int> best_labels;

    Enumerator(const Dataset& d, int k_) : data(d), k(k_), labels(d.size(), 0) {
        stats.assign(k, ClusterStats(d.dim()));
    }

    void run(int p, int used) {
        if (p == data.size()) {
            if (total < best) {
                best = total;
                best_labels = labels;
            }
            return;
        }
        int limit = std::min(used + 1, k);
        for (int t = 0; t < limit; ++t) {
            total -= stats[t].cost;
            stats[t].add(data, p, +1);
            total += stats[t].cost;
            labels[p] = t;
            run(p + 1, std::max(used, t + 1));
            total -= stats[t].cost;
            stats[t].add(data, p, -1);
            total += stats[t].cost;
        }
    }
};

}  // namespace

ExactResult exact_k_means(const Dataset& data, int k, long long budget) {
    int n = data.size();
    if (k < 1) throw usage_error("k must be at least 1");
    if (k > n) throw usage_error("exact_k_means requires n >= k");
    if (n * std::log(static_cast<double>(k)) > std::log(static_cast<double>(budget)))
        throw resource_error("exact enumeration budget exceeded (k^n too large)");

    Enumerator e(data, k);
    e.run(0, 0);

    ExactResult out;
    out.partition = std::move(e.best_labels);

    // Recompute from scratch; guards the incremental bookkeeping.
    out.opt_cost = 0.0;
    out.centers.assign(k, MissingPoint::null_point(data.dim()));
    for (int t = 0; t < k; ++t) {
        std::vector<int> members;
        for (int p = 0; p < n; ++p)
            if (out.partition[p] == t) members.push_back(p);
        if (members.empty()) continue;
        out.centers[t] = centroid(data, members);
        out.opt_cost += cost(data, members, out.centers[t]);
    }
    // The incremental terms cancel catastrophically when coordinates are far
    // from the origin, so the drift guard scales with the data's magnitude.
    double magnitude = 1.0;
    for (int p = 0; p < n; ++p)
        data.domain(p).for_each(
            [&](int i) { magnitude += data.value(p, i) * data.value(p, i); });
    if (std::abs(out.opt_cost - e.best) > 1e-9 * magnitude)
        throw std::logic_error("exact_k_means bookkeeping drifted from recomputation");
    return out;
}

Clustering lloyd_baseline(const Dataset& data, int k, int iterations, Rng& rng,
                          std::vector<double>* round_costs) {
    int n = data.size();
    int d = data.dim();
    if (k < 1) throw usage_error("k must be at least 1");
    if (k > n) throw usage_error("lloyd_baseline requires k <= n");

    Eigen::VectorXd gmean = Eigen::VectorXd::Zero(d);
    {
        std::vector<int> cnt(d, 0);
        for (int p = 0; p < n; ++p)
            data.domain(p).for_each([&](int i) {
                gmean[i] += data.value(p, i);
                ++cnt[i];
            });
        for (int i = 0; i < d; ++i)
            if (cnt[i] > 0) gmean[i] /= cnt[i];
    }

    // Distinct seed points, missing coordinates filled with the global means.
    std::vector<int> order = all_indices(data);
    for (int i = 0; i < k; ++i) {
        int j = i + static_cast<int>(rng.uniform_index(order.size() - i));
        std::swap(order[i], order[j]);
    }
    std::vector<Eigen::VectorXd> centers(k);
    for (int t = 0; t < k; ++t) {
        centers[t] = gmean;
        data.domain(order[t]).for_each([&](int i) { centers[t][i] = data.value(order[t], i); });
    }

    Clustering current = voronoi_clustering(data, centers);
    if (round_costs) round_costs->push_back(current.cost);

    for (int it = 0; it < iterations; ++it) {
        std::vector<Eigen::VectorXd> next = current.centers;
        Eigen::MatrixXd sum = Eigen::MatrixXd::Zero(k, d);
        std::vector<std::vector<int>> cnt(k, std::vector<int>(d, 0));
        for (int p = 0; p < n; ++p) {
            int t = current.assignment[p];
            data.domain(p).for_each([&](int i) {
                sum(t, i) += data.value(p, i);
                ++cnt[t][i];
            });
        }
        for (int t = 0; t < k; ++t)
            for (int i = 0; i < d; ++i)
                if (cnt[t][i] > 0) next[t][i] = sum(t, i) / cnt[t][i];

        Clustering updated = voronoi_clustering(data, std::move(next));
        bool fixpoint = updated.assignment == current.assignment;
        current = std::move(updated);
        if (round_costs) round_costs->push_back(current.cost);
        if (fixpoint) break;
    }
    return current;
}

}  // namespace hkm
