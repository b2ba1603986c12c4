#include <doctest.h>

#include "core_properties.hpp"
#include "helpers.hpp"
#include "hkmeans/core.hpp"

using namespace hkm;
using namespace hkm::testing;

TEST_CASE("restrict_fd keeps exactly the points fully defined on I") {
    Dataset data = ds({{1, kMiss}, {1, 2}});
    auto idx = all_indices(data);
    CHECK(restrict_fd(data, idx, iset(2, {0})) == std::vector<int>{0});
    CHECK(restrict_fd(data, idx, IndexSet::full(2)) == std::vector<int>{0, 1});

    Dataset with_null = ds({{1, 2}, {kMiss, kMiss}});
    auto idx2 = all_indices(with_null);
    CHECK(restrict_fd(with_null, idx2, IndexSet(2)) == std::vector<int>{1});
}

TEST_CASE("restrict_pd keeps exactly the points meeting I") {
    Dataset data = ds({{1, kMiss}, {kMiss, 2}, {kMiss, kMiss}});
    auto idx = all_indices(data);
    CHECK(restrict_pd(data, idx, iset(2, {0})) == std::vector<int>{0});
    CHECK(restrict_pd(data, idx, IndexSet(2)).empty());
    CHECK(restrict_pd(data, idx, IndexSet::full(2)) == std::vector<int>{0, 1});
}

TEST_CASE("distance_on follows the unspecified-coordinate convention") {
    CHECK(distance_on(pt({1, kMiss}), pt({kMiss, 2}), IndexSet::full(2)) == 0.0);
    CHECK(distance_on(pt({0, 0}), pt({3, 4}), IndexSet::full(2)) == 5.0);
    CHECK(distance_on(pt({3, 1, kMiss}), pt({0, 1, 7}), iset(3, {0, 1})) == 3.0);
    CHECK_THROWS_AS(distance_on(pt({1}), pt({1, 2}), IndexSet::full(2)), usage_error);
}

TEST_CASE("cost_on sums squared distances") {
    Dataset data = ds({{0, 0}, {2, 0}});
    CHECK(cost_on(data, all_indices(data), pt({1, 0}), IndexSet::full(2)) == 2.0);
    CHECK(cost_on(data, {}, pt({1, 0}), IndexSet::full(2)) == 0.0);
    Dataset one = ds({{kMiss, 3}});
    CHECK(cost_on(one, all_indices(one), pt({5, 1}), IndexSet::full(2)) == 4.0);
}

TEST_CASE("centroid averages over defined entries per coordinate") {
    Dataset a = ds({{1, kMiss}, {3, 4}});
    MissingPoint c = centroid(a, all_indices(a));
    CHECK(c == pt({2, 4}));

    Dataset null_only = ds({{kMiss, kMiss}});
    CHECK(centroid(null_only, all_indices(null_only)).is_null());

    Dataset b = ds({{0, 0}, {2, 0}, {kMiss, 6}});
    CHECK(centroid(b, all_indices(b)) == pt({1, 2}));

    CHECK_THROWS_AS(centroid(a, {}), usage_error);
}

TEST_CASE("voronoi_assign picks nearest centers, ties to the lowest index") {
    Dataset line = ds({{0}, {10}});
    Assignment a = voronoi_assign(line, {pt({1}), pt({9})});
    CHECK(a.labels == std::vector<int>{0, 1});
    CHECK(a.cost == 2.0);

    Dataset null_pt = ds({{kMiss, kMiss}});
    Assignment b = voronoi_assign(null_pt, {pt({5, 5}), pt({1, 1})});
    CHECK(b.labels == std::vector<int>{0});
    CHECK(b.cost == 0.0);

    Dataset half = ds({{0, kMiss}});
    Assignment c = voronoi_assign(half, {pt({5, 0}), pt({1, 99})});
    CHECK(c.labels == std::vector<int>{1});
    CHECK(c.cost == 1.0);

    CHECK_THROWS_AS(voronoi_assign(line, {}), usage_error);
}

TEST_CASE("complete_centers fills only unspecified coordinates") {
    Dataset data = ds({{2, kMiss}, {4, kMiss}});
    auto filled = complete_centers({pt({kMiss, 5})}, data, {0, 0});
    CHECK(filled[0][0] == 3.0);
    CHECK(filled[0][1] == 5.0);

    auto untouched = complete_centers({pt({7, 8})}, data, {0, 0});
    CHECK(untouched[0][0] == 7.0);
    CHECK(untouched[0][1] == 8.0);

    Dataset single = ds({{7}});
    auto fallback = complete_centers({pt({kMiss}), pt({kMiss})}, single, {0});
    CHECK(fallback[1][0] == 7.0);  // no assigned point: global mean
}

TEST_CASE("complete_centers per-coordinate means minimize the assigned cost") {
    Rng rng(99);
    for (int it = 0; it < 200; ++it) {
        int d = 1 + static_cast<int>(rng.uniform_index(4));
        int n = 2 + static_cast<int>(rng.uniform_index(5));
        Dataset data = random_dataset(rng, n, d, d - 1);
        int k = 1 + static_cast<int>(rng.uniform_index(2));
        std::vector<MissingPoint> centers(k, MissingPoint::null_point(d));
        std::vector<int> labels(n);
        for (int p = 0; p < n; ++p) labels[p] = static_cast<int>(rng.uniform_index(k));

        auto filled = complete_centers(centers, data, labels);
        auto assigned_cost = [&](const std::vector<Eigen::VectorXd>& cs) {
            double acc = 0.0;
            for (int p = 0; p < n; ++p)
                acc += squared_distance(data, p, MissingPoint::complete(cs[labels[p]]));
            return acc;
        };
        double base = assigned_cost(filled);
        for (int rep = 0; rep < 4; ++rep) {
            auto perturbed = filled;
            int t = static_cast<int>(rng.uniform_index(k));
            int i = static_cast<int>(rng.uniform_index(d));
            perturbed[t][i] += rng.coin() ? 0.1 : -0.1;
            CHECK(assigned_cost(perturbed) >= base - 1e-9);
        }
    }
}

TEST_CASE("calculus properties hold on random missing patterns") {
    CHECK(core_calculus_violations(2024, 800) == 0);
}

TEST_CASE("voronoi assignment is exhaustively minimal on small instances") {
    CHECK(voronoi_minimality_violations(77, 300) == 0);
}

TEST_CASE("dataset records the observed maximum missing count") {
    Dataset data = ds({{1, 2, 3}, {kMiss, 2, kMiss}, {1, kMiss, 3}});
    CHECK(data.delta() == 2);
    CHECK(data.dim() == 3);
    CHECK(data.size() == 3);
}
