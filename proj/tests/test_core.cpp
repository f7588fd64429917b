#include <gtest/gtest.h>

#include <numeric>
#include <random>

#include "oracles.hpp"
#include "sfcm/core.hpp"
#include "sfcm/error.hpp"

namespace sfcm {
namespace {

DistanceMatrix make_dist(std::initializer_list<std::initializer_list<double>> rows) {
    DistanceMatrix d(rows.size(), rows.begin()->size());
    std::size_t i = 0;
    for (const auto& r : rows) {
        std::size_t j = 0;
        for (double v : r) d(i, j++) = v;
        ++i;
    }
    return d;
}

MembershipMatrix make_u(std::initializer_list<std::initializer_list<double>> rows) {
    MembershipMatrix u(rows.size(), rows.begin()->size());
    std::size_t i = 0;
    for (const auto& r : rows) {
        std::size_t j = 0;
        for (double v : r) u(i, j++) = v;
        ++i;
    }
    return u;
}

TEST(ImageGrid, RejectsInvalidGrids) {
    EXPECT_THROW(ImageGrid::create(0, 1, 8, {}), ParameterError);
    EXPECT_THROW(ImageGrid::create(2, 2, 8, {1, 2, 3}), ParameterError);
    EXPECT_THROW(ImageGrid::create(1, 1, 8, {256}), ParameterError);
    EXPECT_THROW(ImageGrid::create(1, 1, 12, {0}), ParameterError);
    EXPECT_NO_THROW(ImageGrid::create(1, 1, 16, {65535}));
}

TEST(ClusterParams, Validation) {
    ClusterParams p;
    EXPECT_NO_THROW(p.validate());
    p.fuzziness = 1.0;
    EXPECT_THROW(p.validate(), ParameterError);
    p = {};
    p.clusters = 3;
    p.init = ExplicitInit{{25, 50}};
    EXPECT_THROW(p.validate(), ParameterError);
    p = {};
    p.epsilon = 0.0;
    EXPECT_THROW(p.validate(), ParameterError);
    p = {};
    p.radius = 0;
    EXPECT_THROW(p.validate(), ParameterError);
}

TEST(NormalizeIntensities, Examples) {
    const auto zeros = normalize_intensities(ImageGrid::create(2, 1, 8, {0, 0}));
    EXPECT_EQ(zeros.values, (std::vector<double>{0.0, 0.0}));

    const auto ends = normalize_intensities(ImageGrid::create(2, 1, 8, {0, 255}));
    EXPECT_EQ(ends.values, (std::vector<double>{0.0, 1.0}));

    const auto mid = normalize_intensities(ImageGrid::create(1, 1, 8, {100}));
    EXPECT_NEAR(mid[0], 0.392156862745098039, 1e-15);

    const auto deep = normalize_intensities(ImageGrid::create(1, 1, 16, {65535}));
    EXPECT_EQ(deep[0], 1.0);
}

TEST(DistanceMatrix, Examples) {
    auto d = distance_matrix(FeatureVector{0.5}, Centroids{0.5});
    EXPECT_EQ(d(0, 0), 0.0);

    d = distance_matrix(FeatureVector{0.0}, Centroids{0.2, 0.8});
    EXPECT_DOUBLE_EQ(d(0, 0), 0.2);
    EXPECT_DOUBLE_EQ(d(0, 1), 0.8);

    d = distance_matrix(FeatureVector{0.2, 0.9}, Centroids{0.0, 1.0});
    EXPECT_DOUBLE_EQ(d(0, 0), 0.2);
    EXPECT_DOUBLE_EQ(d(0, 1), 0.8);
    EXPECT_DOUBLE_EQ(d(1, 0), 0.9);
    EXPECT_NEAR(d(1, 1), 0.1, 1e-15);
}

TEST(UpdateMembership, Examples) {
    auto u = update_membership(make_dist({{0.4, 0.4}}), 2.0);
    EXPECT_DOUBLE_EQ(u(0, 0), 0.5);
    EXPECT_DOUBLE_EQ(u(0, 1), 0.5);

    for (double m : {1.1, 2.0, 7.5}) {
        u = update_membership(make_dist({{0.0, 0.7}}), m);
        EXPECT_EQ(u(0, 0), 1.0);
        EXPECT_EQ(u(0, 1), 0.0);
    }

    u = update_membership(make_dist({{0.2, 0.8}}), 2.0);
    EXPECT_NEAR(u(0, 0), 0.941176470588235294, 1e-15);  // 16/17
    EXPECT_NEAR(u(0, 1), 0.058823529411764706, 1e-15);  // 1/17
}

TEST(UpdateMembership, ZeroDistancesShareMassEqually) {
    const auto u = update_membership(make_dist({{0.0, 0.3, 0.0, 0.1}}), 2.0);
    EXPECT_EQ(u(0, 0), 0.5);
    EXPECT_EQ(u(0, 1), 0.0);
    EXPECT_EQ(u(0, 2), 0.5);
    EXPECT_EQ(u(0, 3), 0.0);
}

TEST(UpdateMembership, RejectsFuzzinessAtOrBelowOne) {
    EXPECT_THROW(update_membership(make_dist({{0.1, 0.2}}), 1.0), ParameterError);
}

TEST(UpdateCentroids, Examples) {
    // hard memberships reduce to an arithmetic mean
    auto c = update_centroids(FeatureVector{0.2, 0.4, 0.9}, make_u({{1, 0}, {1, 0}, {0, 1}}), 2.0);
    EXPECT_NEAR(c[0], 0.3, 1e-15);
    EXPECT_DOUBLE_EQ(c[1], 0.9);

    c = update_centroids(FeatureVector{0.1, 0.2, 0.6}, make_u({{1}, {1}, {1}}), 2.0);
    EXPECT_NEAR(c[0], 0.3, 1e-15);

    c = update_centroids(FeatureVector{0.0, 1.0}, make_u({{0.8, 0.2}, {0.2, 0.8}}), 2.0);
    EXPECT_NEAR(c[0], 0.058823529411764706, 1e-15);  // 0.04 / 0.68
}

TEST(UpdateCentroids, DegenerateColumnNamesCluster) {
    try {
        update_centroids(FeatureVector{0.1, 0.2}, make_u({{1, 0, 0}, {0, 0, 1}}), 2.0);
        FAIL() << "expected DegenerateClusterError";
    } catch (const DegenerateClusterError& e) {
        EXPECT_EQ(e.cluster(), 1u);
    }
}

TEST(Objective, Examples) {
    EXPECT_EQ(objective(make_dist({{0, 0}, {0, 0}}), make_u({{0.5, 0.5}, {1, 0}}), 2.0), 0.0);
    EXPECT_DOUBLE_EQ(objective(make_dist({{0.5}}), make_u({{1.0}}), 2.0), 0.25);

    const auto d = make_dist({{0.2, 0.8}, {0.9, 0.1}});
    const auto u = update_membership(d, 2.0);
    // extended-precision double sum of the four terms
    EXPECT_NEAR(objective(d, u, 2.0), 0.0475251076040172166, 1e-15);
}

TEST(Objective, ShapeMismatchIsContractViolation) {
    EXPECT_THROW(objective(make_dist({{0.1, 0.2}}), make_u({{1.0}}), 2.0), ContractViolation);
}

class CoreProperties : public ::testing::Test {
protected:
    std::mt19937_64 rng{20240611};

    DistanceMatrix random_dist(std::size_t n, std::size_t c, double lo = 0.0) {
        std::uniform_real_distribution<double> dist(lo, 1.0);
        DistanceMatrix d(n, c);
        for (auto& v : d.data()) v = dist(rng);
        return d;
    }
};

TEST_F(CoreProperties, RowStochasticAndBounded) {
    std::uniform_real_distribution<double> mdist(1.05, 5.0);
    for (int trial = 0; trial < 500; ++trial) {
        const auto d = random_dist(1 + trial % 20, 1 + trial % 7);
        const auto u = update_membership(d, mdist(rng));
        for (std::size_t i = 0; i < u.rows(); ++i) {
            const auto row = u.row(i);
            EXPECT_NEAR(std::accumulate(row.begin(), row.end(), 0.0), 1.0, 1e-9);
            for (double v : row) {
                EXPECT_GE(v, 0.0);
                EXPECT_LE(v, 1.0);
            }
        }
    }
}

TEST_F(CoreProperties, MembershipIsScaleInvariant) {
    std::uniform_real_distribution<double> scale(0.01, 100.0);
    for (int trial = 0; trial < 200; ++trial) {
        auto d = random_dist(5, 4, 1e-3);
        const auto u = update_membership(d, 2.0);
        for (std::size_t i = 0; i < d.rows(); ++i) {
            const double s = scale(rng);
            for (auto& v : d.row(i)) v *= s;
        }
        const auto scaled = update_membership(d, 2.0);
        for (std::size_t k = 0; k < u.data().size(); ++k) EXPECT_NEAR(u.data()[k], scaled.data()[k], 1e-12);
    }
}

TEST_F(CoreProperties, SingleZeroGivesIndicatorRow) {
    for (int trial = 0; trial < 100; ++trial) {
        auto d = random_dist(1, 5, 1e-3);
        const std::size_t j = trial % 5;
        d(0, j) = 0.0;
        const auto u = update_membership(d, 1.5 + trial % 3);
        for (std::size_t k = 0; k < 5; ++k) EXPECT_EQ(u(0, k), k == j ? 1.0 : 0.0);
    }
}

TEST_F(CoreProperties, CentroidsStayWithinFeatureRange) {
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (int trial = 0; trial < 300; ++trial) {
        const std::size_t n = 1 + trial % 12;
        std::vector<double> x(n);
        const double base = unit(rng);
        for (auto& v : x) v = trial % 4 == 0 ? base : unit(rng);  // some constant inputs
        const FeatureVector features(x);
        const auto u = update_membership(distance_matrix(features, Centroids{0.1, 0.5, 0.9}), 2.0);
        const auto c = update_centroids(features, u, 2.0);
        const auto [lo, hi] = std::minmax_element(x.begin(), x.end());
        for (double v : c) {
            EXPECT_GE(v, *lo);
            EXPECT_LE(v, *hi);
        }
    }
}

TEST_F(CoreProperties, MatchesDirectSummationOracles) {
    std::uniform_int_distribution<std::size_t> nd(1, 10), cd(1, 4);
    std::uniform_real_distribution<double> unit(0.0, 1.0), mdist(1.5, 3.0);
    for (int trial = 0; trial < 100; ++trial) {
        const std::size_t n = nd(rng), c = cd(rng);
        const double m = mdist(rng);
        std::vector<double> x(n), cs(c);
        for (auto& v : x) v = unit(rng);
        for (auto& v : cs) v = unit(rng);

        const auto d = distance_matrix(FeatureVector(x), Centroids(cs));
        const auto u = update_membership(d, m);
        const auto od = oracle::distances(x, cs);
        const auto ou = oracle::membership(od, m);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < c; ++j) EXPECT_LT(oracle::relative_error(ou[i][j], u(i, j)), 1e-12);

        // feed the same memberships to both centroid routes
        oracle::Grid lu(n, std::vector<long double>(c));
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < c; ++j) lu[i][j] = u(i, j);
        const auto centroids = update_centroids(FeatureVector(x), u, m);
        const auto oc = oracle::centroids(x, lu, m);
        for (std::size_t j = 0; j < c; ++j) EXPECT_LT(oracle::relative_error(oc[j], centroids[j]), 1e-12);

        EXPECT_LT(oracle::relative_error(oracle::objective(od, lu, m), objective(d, u, m)), 1e-12);
    }
}

}  // namespace
}  // namespace sfcm
