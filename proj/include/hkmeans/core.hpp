#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <span>
#include <vector>

#include "hkmeans/errors.hpp"

namespace hkm {

/// Set of coordinate indices over a universe [0, d), packed into 64-bit words.
/// Subset / intersection tests are word-parallel; these dominate the solver's
/// inner loops.
class IndexSet {
  public:
    IndexSet() = default;
    explicit IndexSet(int dim) : dim_(dim), words_((dim + 63) / 64, 0) {}

    static IndexSet full(int dim) {
        IndexSet s(dim);
        for (int i = 0; i < dim; ++i) s.set(i);
        return s;
    }

    int dim() const { return dim_; }

    bool contains(int i) const { return (words_[i >> 6] >> (i & 63)) & 1u; }
    void set(int i) { words_[i >> 6] |= (std::uint64_t{1} << (i & 63)); }
    void reset(int i) { words_[i >> 6] &= ~(std::uint64_t{1} << (i & 63)); }

    int count() const {
        int c = 0;
        for (std::uint64_t w : words_) c += __builtin_popcountll(w);
        return c;
    }

    bool none() const {
        for (std::uint64_t w : words_) if (w) return false;
        return true;
    }
    bool is_full() const { return count() == dim_; }

    bool subset_of(const IndexSet& o) const {
        for (std::size_t w = 0; w < words_.size(); ++w)
            if (words_[w] & ~o.words_[w]) return false;
        return true;
    }

    bool intersects(const IndexSet& o) const {
        for (std::size_t w = 0; w < words_.size(); ++w)
            if (words_[w] & o.words_[w]) return true;
        return false;
    }

    IndexSet operator&(const IndexSet& o) const {
        IndexSet r(dim_);
        for (std::size_t w = 0; w < words_.size(); ++w) r.words_[w] = words_[w] & o.words_[w];
        return r;
    }

    IndexSet operator|(const IndexSet& o) const {
        IndexSet r(dim_);
        for (std::size_t w = 0; w < words_.size(); ++w) r.words_[w] = words_[w] | o.words_[w];
        return r;
    }

    /// Complement within [0, dim).
    IndexSet complement() const {
        IndexSet r(dim_);
        for (std::size_t w = 0; w < words_.size(); ++w) r.words_[w] = ~words_[w];
        r.trim();
        return r;
    }

    bool operator==(const IndexSet& o) const { return dim_ == o.dim_ && words_ == o.words_; }

    /// Visit set bits in ascending order.
    template <class F>
    void for_each(F&& f) const {
        for (std::size_t w = 0; w < words_.size(); ++w) {
            std::uint64_t bits = words_[w];
            while (bits) {
                int b = __builtin_ctzll(bits);
                f(static_cast<int>(w * 64 + b));
                bits &= bits - 1;
            }
        }
    }

    std::vector<int> indices() const {
        std::vector<int> out;
        out.reserve(count());
        for_each([&](int i) { out.push_back(i); });
        return out;
    }

    std::span<const std::uint64_t> words() const { return words_; }

  private:
    void trim() {
        if (dim_ % 64 != 0 && !words_.empty())
            words_.back() &= (std::uint64_t{1} << (dim_ % 64)) - 1;
    }

    int dim_ = 0;
    std::vector<std::uint64_t> words_;
};

/// Point of H^d: real entries where `defined` has a bit, unspecified elsewhere.
/// Placeholder values under unspecified entries are stored as 0 but never read
/// through the mask.
struct MissingPoint {
    Eigen::VectorXd values;
    IndexSet defined;

    MissingPoint() = default;
    MissingPoint(Eigen::VectorXd v, IndexSet mask) : values(std::move(v)), defined(std::move(mask)) {
        if (values.size() != defined.dim()) throw usage_error("MissingPoint: mask/value size mismatch");
    }

    int dim() const { return defined.dim(); }
    bool is_null() const { return defined.none(); }
    int missing_count() const { return dim() - defined.count(); }

    static MissingPoint null_point(int dim) {
        return MissingPoint(Eigen::VectorXd::Zero(dim), IndexSet(dim));
    }

    static MissingPoint complete(Eigen::VectorXd v) {
        int d = static_cast<int>(v.size());
        return MissingPoint(std::move(v), IndexSet::full(d));
    }

    /// NaN entries mark unspecified coordinates; stored as 0 behind the mask.
    static MissingPoint from_nan_encoded(const std::vector<double>& row);

    bool operator==(const MissingPoint& o) const;
};

/// Indexed collection of points sharing a dimension; delta is the observed
/// maximum number of unspecified coordinates over the points.
class Dataset {
  public:
    Dataset() = default;
    explicit Dataset(std::vector<MissingPoint> points);

    int size() const { return static_cast<int>(domains_.size()); }
    int dim() const { return dim_; }
    int delta() const { return delta_; }

    double value(int p, int i) const { return values_(p, i); }
    bool defined(int p, int i) const { return domains_[p].contains(i); }
    const IndexSet& domain(int p) const { return domains_[p]; }

    /// Contiguous row of placeholder-filled values for point p.
    const double* row(int p) const { return values_.row(p).data(); }

    MissingPoint point(int p) const {
        return MissingPoint(values_.row(p).transpose(), domains_[p]);
    }

    bool operator==(const Dataset& o) const;

  private:
    Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor> values_;
    std::vector<IndexSet> domains_;
    int dim_ = 0;
    int delta_ = 0;
};

using PointSpan = std::span<const int>;

std::vector<int> all_indices(const Dataset& data);

/// FD(P, I): points fully defined on I (dom(x) subset of I), order preserved.
std::vector<int> restrict_fd(const Dataset& data, PointSpan pts, const IndexSet& I);

/// PD(P, I): points partially defined on I (dom(x) meets I), order preserved.
std::vector<int> restrict_pd(const Dataset& data, PointSpan pts, const IndexSet& I);

/// d_I(x, y)^2 with the convention |a - b| = 0 whenever either side is unspecified.
double squared_distance_on(const MissingPoint& x, const MissingPoint& y, const IndexSet& I);
double distance_on(const MissingPoint& x, const MissingPoint& y, const IndexSet& I);

/// Full-dimension squared distance between dataset point p and y.
double squared_distance(const Dataset& data, int p, const MissingPoint& y);

/// Squared distance between dataset point p and y restricted to I.
double squared_distance_on(const Dataset& data, int p, const MissingPoint& y, const IndexSet& I);

double cost_on(const Dataset& data, PointSpan pts, const MissingPoint& y, const IndexSet& I);
double cost(const Dataset& data, PointSpan pts, const MissingPoint& y);

/// Per-coordinate mean over the points defined there; unspecified where no
/// point of P is defined. P must be nonempty.
MissingPoint centroid(const Dataset& data, PointSpan pts);

struct Assignment {
    std::vector<int> labels;
    double cost = 0.0;
};

/// Nearest-center assignment under the unspecified-coordinate convention;
/// ties go to the smallest cluster index. Centers may be partial.
Assignment voronoi_assign(const Dataset& data, const std::vector<MissingPoint>& centers);

/// Fill each center's unspecified coordinates: mean of its assigned points
/// defined there, else the global mean of that coordinate, else 0. Defined
/// coordinates are never modified.
std::vector<Eigen::VectorXd> complete_centers(const std::vector<MissingPoint>& centers,
                                              const Dataset& data,
                                              const std::vector<int>& labels);

/// k completed centers, a point-to-cluster map, and the assignment's cost.
struct Clustering {
    std::vector<Eigen::VectorXd> centers;
    std::vector<int> assignment;
    double cost = 0.0;
};

/// Voronoi clustering of the dataset under complete centers.
Clustering voronoi_clustering(const Dataset& data, std::vector<Eigen::VectorXd> centers);

/// The solver's mutable state: k partial centers u_1..u_k.
struct CenterTuple {
    std::vector<MissingPoint> centers;

    CenterTuple() = default;
    static CenterTuple null_tuple(int k, int dim);

    int k() const { return static_cast<int>(centers.size()); }
    const IndexSet& domain(int t) const { return centers[t].defined; }
    IndexSet domain_intersection() const;
};

}  // namespace hkm
