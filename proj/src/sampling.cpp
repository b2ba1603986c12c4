#include "hkmeans/sampling.hpp"

#include <cmath>

namespace hkm {

SamplingParams SamplingParams::from_alpha_delta(double alpha, int delta) {
    if (!(alpha > 0.0)) throw usage_error("alpha must be positive");
    if (delta < 0) throw usage_error("delta must be nonnegative");
    SamplingParams p;
    p.alpha = alpha;
    p.m = std::max(2, static_cast<int>(std::ceil(4.0 / alpha)));
    p.lambda_ceil = delta == 0 ? 8 : static_cast<int>(std::ceil(8.0 * lambda_of(alpha, delta)));
    p.retry_limit = 8;
    return p;
}

double lambda_of(double alpha, int delta) {
    if (!(alpha > 0.0)) throw usage_error("alpha must be positive");
    if (delta < 1) throw usage_error("lambda_of requires delta >= 1");
    double e = 1.0 / (2.0 * delta);
    return std::max(std::pow(3.0 / alpha, e), std::pow(128.0 * std::pow(delta, 3), e));
}

double superset_sample_value(const Dataset& data, PointSpan R, int coord,
                             const SamplingParams& params, Rng& rng) {
    if (R.empty()) throw usage_error("superset_sample_value on an empty point set");
    if (coord < 0 || coord >= data.dim()) throw usage_error("coordinate index out of range");

    for (int attempt = 0; attempt <= params.retry_limit; ++attempt) {
        int s = rng.geometric_size(params.m);
        double sum = 0.0;
        int kept = 0;
        for (int i = 0; i < s; ++i) {
            int p = R[rng.uniform_index(R.size())];
            if (data.defined(p, coord)) {
                sum += data.value(p, coord);
                ++kept;
            }
        }
        if (kept > 0) return sum / kept;
    }

    // Every subsample missed the coordinate; fall back to an actual entry.
    std::vector<int> pd;
    for (int p : R)
        if (data.defined(p, coord)) pd.push_back(p);
    if (pd.empty()) return 0.0;
    return data.value(pd[rng.uniform_index(pd.size())], coord);
}

namespace {

// Coordinate-wise subsample means over a geometric prefix of at most cap draws.
MissingPoint prefix_centroid(const Dataset& data, PointSpan R, int cap, Rng& rng) {
    int s = rng.geometric_size(cap);
    int d = data.dim();
    Eigen::VectorXd sum = Eigen::VectorXd::Zero(d);
    std::vector<int> cnt(d, 0);
    for (int i = 0; i < s; ++i) {
        int p = R[rng.uniform_index(R.size())];
        data.domain(p).for_each([&](int j) {
            sum[j] += data.value(p, j);
            ++cnt[j];
        });
    }
    Eigen::VectorXd v = Eigen::VectorXd::Zero(d);
    IndexSet mask(d);
    for (int j = 0; j < d; ++j) {
        if (cnt[j] > 0) {
            v[j] = sum[j] / cnt[j];
            mask.set(j);
        }
    }
    return MissingPoint(std::move(v), std::move(mask));
}

}  // namespace

MissingPoint initial_center_sample(const Dataset& data, PointSpan R,
                                   const SamplingParams& params, Rng& rng) {
    if (R.empty()) throw usage_error("initial_center_sample on an empty point set");

    int pivot = R[rng.uniform_index(R.size())];
    const IndexSet& pivot_dom = data.domain(pivot);
    if (pivot_dom.none()) throw usage_error("initial_center_sample pivot is the null point");

    MissingPoint sample = prefix_centroid(data, R, params.lambda_ceil, rng);

    int d = data.dim();
    Eigen::VectorXd v = Eigen::VectorXd::Zero(d);
    IndexSet mask(d);
    std::vector<int> uncovered;
    pivot_dom.for_each([&](int i) {
        if (sample.defined.contains(i)) {
            v[i] = sample.values[i];
            mask.set(i);
        } else {
            uncovered.push_back(i);
        }
    });

    for (int j : uncovered) {
        bool got = false;
        for (int attempt = 0; attempt <= params.retry_limit && !got; ++attempt) {
            MissingPoint tj = prefix_centroid(data, R, params.lambda_ceil, rng);
            if (tj.defined.contains(j)) {
                v[j] = tj.values[j];
                got = true;
            }
        }
        if (!got) {
            // The pivot itself is in PD(R, j), so this restriction is nonempty.
            std::vector<int> pd;
            for (int p : R)
                if (data.defined(p, j)) pd.push_back(p);
            MissingPoint tj = prefix_centroid(data, pd, params.lambda_ceil, rng);
            v[j] = tj.values[j];
        }
        mask.set(j);
    }

    return MissingPoint(std::move(v), std::move(mask));
}

MissingPoint complete_mean_sample(const Dataset& data, PointSpan R,
                                  const SamplingParams& params, Rng& rng) {
    if (R.empty()) throw usage_error("complete_mean_sample on an empty point set");
    int s = rng.geometric_size(params.m);
    int d = data.dim();
    Eigen::VectorXd sum = Eigen::VectorXd::Zero(d);
    for (int i = 0; i < s; ++i) {
        int p = R[rng.uniform_index(R.size())];
        for (int j = 0; j < d; ++j) sum[j] += data.value(p, j);
    }
    return MissingPoint::complete(sum / s);
}

}  // namespace hkm
