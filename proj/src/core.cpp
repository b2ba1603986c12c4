#include "hkmeans/core.hpp"

#include <cmath>
#include <limits>

namespace hkm {

namespace {

void require_same_dim(const MissingPoint& x, const MissingPoint& y) {
    if (x.dim() != y.dim()) throw usage_error("dimension mismatch between points");
}

// Accumulate sum of squared differences over the bits of (a & b [& c]).
double sq_diff_over(const double* xv, const double* yv,
                    std::span<const std::uint64_t> a, std::span<const std::uint64_t> b,
                    std::span<const std::uint64_t> c = {}) {
    double acc = 0.0;
    for (std::size_t w = 0; w < a.size(); ++w) {
        std::uint64_t bits = a[w] & b[w];
        if (!c.empty()) bits &= c[w];
        while (bits) {
            int i = static_cast<int>(w * 64) + __builtin_ctzll(bits);
            double diff = xv[i] - yv[i];
            acc += diff * diff;
            bits &= bits - 1;
        }
    }
    return acc;
}

}  // namespace

MissingPoint MissingPoint::from_nan_encoded(const std::vector<double>& row) {
    int d = static_cast<int>(row.size());
    Eigen::VectorXd v = Eigen::VectorXd::Zero(d);
    IndexSet mask(d);
    for (int i = 0; i < d; ++i) {
        if (!std::isnan(row[i])) {
            v[i] = row[i];
            mask.set(i);
        }
    }
    return MissingPoint(std::move(v), std::move(mask));
}

bool MissingPoint::operator==(const MissingPoint& o) const {
    if (!(defined == o.defined)) return false;
    bool eq = true;
    defined.for_each([&](int i) { eq = eq && values[i] == o.values[i]; });
    return eq;
}

Dataset::Dataset(std::vector<MissingPoint> points) {
    if (points.empty()) throw usage_error("dataset must contain at least one point");
    dim_ = points.front().dim();
    values_.resize(static_cast<Eigen::Index>(points.size()), dim_);
    values_.setZero();
    domains_.reserve(points.size());
    delta_ = 0;
    for (std::size_t p = 0; p < points.size(); ++p) {
        if (points[p].dim() != dim_) throw usage_error("dataset points must share one dimension");
        const MissingPoint& mp = points[p];
        mp.defined.for_each([&](int i) { values_(static_cast<Eigen::Index>(p), i) = mp.values[i]; });
        delta_ = std::max(delta_, mp.missing_count());
        domains_.push_back(mp.defined);
    }
}

bool Dataset::operator==(const Dataset& o) const {
    if (dim_ != o.dim_ || size() != o.size()) return false;
    for (int p = 0; p < size(); ++p)
        if (!(point(p) == o.point(p))) return false;
    return true;
}

std::vector<int> all_indices(const Dataset& data) {
    std::vector<int> idx(data.size());
    for (int p = 0; p < data.size(); ++p) idx[p] = p;
    return idx;
}

std::vector<int> restrict_fd(const Dataset& data, PointSpan pts, const IndexSet& I) {
    std::vector<int> out;
    for (int p : pts)
        if (data.domain(p).subset_of(I)) out.push_back(p);
    return out;
}

std::vector<int> restrict_pd(const Dataset& data, PointSpan pts, const IndexSet& I) {
    std::vector<int> out;
    for (int p : pts)
        if (data.domain(p).intersects(I)) out.push_back(p);
    return out;
}

double squared_distance_on(const MissingPoint& x, const MissingPoint& y, const IndexSet& I) {
    require_same_dim(x, y);
    if (I.dim() != x.dim()) throw usage_error("index set dimension mismatch");
    return sq_diff_over(x.values.data(), y.values.data(), x.defined.words(), y.defined.words(),
                        I.words());
}

double distance_on(const MissingPoint& x, const MissingPoint& y, const IndexSet& I) {
    return std::sqrt(squared_distance_on(x, y, I));
}

double squared_distance(const Dataset& data, int p, const MissingPoint& y) {
    if (y.dim() != data.dim()) throw usage_error("dimension mismatch between point and dataset");
    return sq_diff_over(data.row(p), y.values.data(), data.domain(p).words(), y.defined.words());
}

double squared_distance_on(const Dataset& data, int p, const MissingPoint& y, const IndexSet& I) {
    if (y.dim() != data.dim()) throw usage_error("dimension mismatch between point and dataset");
    return sq_diff_over(data.row(p), y.values.data(), data.domain(p).words(), y.defined.words(),
                        I.words());
}

double cost_on(const Dataset& data, PointSpan pts, const MissingPoint& y, const IndexSet& I) {
    double acc = 0.0;
    for (int p : pts) acc += squared_distance_on(data, p, y, I);
    return acc;
}

double cost(const Dataset& data, PointSpan pts, const MissingPoint& y) {
    double acc = 0.0;
    for (int p : pts) acc += squared_distance(data, p, y);
    return acc;
}

MissingPoint centroid(const Dataset& data, PointSpan pts) {
    if (pts.empty()) throw usage_error("centroid of an empty point set");
    int d = data.dim();
    Eigen::VectorXd sum = Eigen::VectorXd::Zero(d);
    std::vector<int> cnt(d, 0);
    for (int p : pts) {
        data.domain(p).for_each([&](int i) {
            sum[i] += data.value(p, i);
            ++cnt[i];
        });
    }
    Eigen::VectorXd v = Eigen::VectorXd::Zero(d);
    IndexSet mask(d);
    for (int i = 0; i < d; ++i) {
        if (cnt[i] > 0) {
            v[i] = sum[i] / cnt[i];
            mask.set(i);
        }
    }
    return MissingPoint(std::move(v), std::move(mask));
}

Assignment voronoi_assign(const Dataset& data, const std::vector<MissingPoint>& centers) {
    if (centers.empty()) throw usage_error("voronoi_assign requires at least one center");
    for (const MissingPoint& c : centers)
        if (c.dim() != data.dim()) throw usage_error("center dimension mismatch");
    Assignment out;
    out.labels.resize(data.size());
    for (int p = 0; p < data.size(); ++p) {
        int best = 0;
        double best_d = squared_distance(data, p, centers[0]);
        for (int t = 1; t < static_cast<int>(centers.size()); ++t) {
            double dsq = squared_distance(data, p, centers[t]);
            if (dsq < best_d) {
                best_d = dsq;
                best = t;
            }
        }
        out.labels[p] = best;
        out.cost += best_d;
    }
    return out;
}

std::vector<Eigen::VectorXd> complete_centers(const std::vector<MissingPoint>& centers,
                                              const Dataset& data,
                                              const std::vector<int>& labels) {
    if (static_cast<int>(labels.size()) != data.size())
        throw usage_error("assignment length does not match dataset");
    int d = data.dim();
    int k = static_cast<int>(centers.size());

    Eigen::VectorXd gsum = Eigen::VectorXd::Zero(d);
    std::vector<int> gcnt(d, 0);
    Eigen::MatrixXd asum = Eigen::MatrixXd::Zero(k, d);
    std::vector<std::vector<int>> acnt(k, std::vector<int>(d, 0));
    for (int p = 0; p < data.size(); ++p) {
        int t = labels[p];
        if (t < 0 || t >= k) throw usage_error("assignment label out of range");
        data.domain(p).for_each([&](int i) {
            gsum[i] += data.value(p, i);
            ++gcnt[i];
            asum(t, i) += data.value(p, i);
            ++acnt[t][i];
        });
    }

    std::vector<Eigen::VectorXd> out(k);
    for (int t = 0; t < k; ++t) {
        out[t] = Eigen::VectorXd::Zero(d);
        for (int i = 0; i < d; ++i) {
            if (centers[t].defined.contains(i))
                out[t][i] = centers[t].values[i];
            else if (acnt[t][i] > 0)
                out[t][i] = asum(t, i) / acnt[t][i];
            else if (gcnt[i] > 0)
                out[t][i] = gsum[i] / gcnt[i];
            else
                out[t][i] = 0.0;
        }
    }
    return out;
}

Clustering voronoi_clustering(const Dataset& data, std::vector<Eigen::VectorXd> centers) {
    std::vector<MissingPoint> as_points;
    as_points.reserve(centers.size());
    for (const Eigen::VectorXd& c : centers) as_points.push_back(MissingPoint::complete(c));
    Assignment a = voronoi_assign(data, as_points);
    Clustering out;
    out.centers = std::move(centers);
    out.assignment = std::move(a.labels);
    out.cost = a.cost;
    return out;
}

CenterTuple CenterTuple::null_tuple(int k, int dim) {
    CenterTuple u;
    u.centers.assign(k, MissingPoint::null_point(dim));
    return u;
}

IndexSet CenterTuple::domain_intersection() const {
    IndexSet acc = IndexSet::full(centers.front().dim());
    for (const MissingPoint& c : centers) acc = acc & c.defined;
    return acc;
}

}  // namespace hkm
