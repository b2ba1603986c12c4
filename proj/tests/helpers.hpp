#pragma once

#include <cmath>
#include <limits>
#include <optional>
#include <vector>

#include "hkmeans/core.hpp"
#include "hkmeans/rng.hpp"

namespace hkm::testing {

inline constexpr double kMiss = std::numeric_limits<double>::quiet_NaN();

/// Point literal; NaN entries are unspecified coordinates.
inline MissingPoint pt(std::vector<double> row) { return MissingPoint::from_nan_encoded(row); }

/// Dataset literal from NaN-encoded rows.
inline Dataset ds(std::vector<std::vector<double>> rows) {
    std::vector<MissingPoint> pts;
    for (auto& r : rows) pts.push_back(pt(r));
    return Dataset(std::move(pts));
}

inline IndexSet iset(int dim, std::vector<int> members) {
    IndexSet s(dim);
    for (int i : members) s.set(i);
    return s;
}

/// Random dataset with uniform values and per-point missing patterns of at
/// most `delta` coordinates.
inline Dataset random_dataset(Rng& rng, int n, int d, int delta, double spread = 10.0) {
    std::vector<MissingPoint> pts;
    for (int p = 0; p < n; ++p) {
        Eigen::VectorXd v(d);
        for (int i = 0; i < d; ++i) v[i] = spread * (rng.uniform_double() - 0.5);
        IndexSet mask = IndexSet::full(d);
        int miss = static_cast<int>(rng.uniform_index(delta + 1));
        std::vector<int> coords(d);
        for (int i = 0; i < d; ++i) coords[i] = i;
        for (int i = 0; i < miss; ++i) {
            int j = i + static_cast<int>(rng.uniform_index(d - i));
            std::swap(coords[i], coords[j]);
            mask.reset(coords[i]);
            v[coords[i]] = 0.0;
        }
        pts.emplace_back(std::move(v), std::move(mask));
    }
    return Dataset(std::move(pts));
}

inline bool close(double a, double b, double rel = 1e-9) {
    return std::abs(a - b) <= rel * std::max({1.0, std::abs(a), std::abs(b)});
}

}  // namespace hkm::testing
