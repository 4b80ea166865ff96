#include "antilizer/kernel_features.hpp"
#include "oracles.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace antilizer;
using namespace antilizer::kernel;

namespace {

double Approx(const MetricVector& x, const MetricVector& y, const RandomFeatureMap& map)
{
    const auto fx = MapFeatures(x, map);
    const auto fy = MapFeatures(y, map);
    double dot = 0.0;
    for (std::size_t i = 0; i < fx.Size(); ++i)
    {
        dot += fx.Data()[i] * fy.Data()[i];
    }
    return dot;
}

} // namespace

TEST_CASE("normalization divides by the scale and saturates at one")
{
    const NormalizationScales s{20.0, 2.0, 512.0};
    auto v = NormalizeMetrics({10.0, 1.0, 256.0}, s);
    REQUIRE(v);
    CHECK(v->txCount == 0.5);
    CHECK(v->fwdRatio == 0.5);
    CHECK(v->rankAvg == 0.5);

    v = NormalizeMetrics({400.0, 7.0, 4096.0}, s);
    REQUIRE(v);
    CHECK(v->txCount == 1.0);
    CHECK(v->fwdRatio == 1.0);
    CHECK(v->rankAvg == 1.0);
}

TEST_CASE("normalization rejects non-finite or negative samples")
{
    const NormalizationScales s;
    CHECK_FALSE(NormalizeMetrics({NAN, 0.0, 0.0}, s));
    CHECK_FALSE(NormalizeMetrics({1.0, INFINITY, 0.0}, s));
    CHECK_FALSE(NormalizeMetrics({-1.0, 0.0, 0.0}, s));
    CHECK_THROWS_AS(NormalizeMetrics({1.0, 1.0, 1.0}, NormalizationScales{0.0, 1.0, 1.0}), ConfigError);
}

TEST_CASE("rbf kernel matches its closed form")
{
    const MetricVector x{0.1, 0.2, 0.3};
    const MetricVector y{0.4, 0.0, 0.9};
    const double sq = 0.09 + 0.04 + 0.36;
    CHECK(RbfKernel(x, y, 0.35) == doctest::Approx(std::exp(-sq / 0.7)).epsilon(1e-15));
    CHECK(RbfKernel(x, x, 0.35) == 1.0);
}

TEST_CASE("feature vectors have unit norm and self-similarity one")
{
    const RandomFeatureMap map(200, 0.35, 5);
    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int i = 0; i < 50; ++i)
    {
        const MetricVector x{u(rng), u(rng), u(rng)};
        const auto f = MapFeatures(x, map);
        CHECK(f.Size() == 400);
        CHECK(f.Norm() == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(Approx(x, x, map) == doctest::Approx(1.0).epsilon(1e-12));
    }
}

TEST_CASE("random features approximate the rbf kernel")
{
    const RandomFeatureMap map(200, 0.35, 17);
    std::mt19937_64 rng(2);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    double worst = 0.0;
    double sum = 0.0;
    for (int i = 0; i < 500; ++i)
    {
        const MetricVector x{u(rng), u(rng), u(rng)};
        const MetricVector y{u(rng), u(rng), u(rng)};
        const double err = std::abs(Approx(x, y, map) - RbfKernel(x, y, 0.35));
        worst = std::max(worst, err);
        sum += err;
    }
    CHECK(worst <= 0.2);
    CHECK(sum / 500 <= 0.08);
}

TEST_CASE("approximation error shrinks with more samples")
{
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::vector<std::pair<MetricVector, MetricVector>> pairs;
    for (int i = 0; i < 300; ++i)
    {
        pairs.push_back({{u(rng), u(rng), u(rng)}, {u(rng), u(rng), u(rng)}});
    }
    auto meanErr = [&](std::size_t m) {
        const RandomFeatureMap map(m, 0.35, 11);
        double sum = 0.0;
        for (const auto& [x, y] : pairs)
        {
            sum += std::abs(Approx(x, y, map) - RbfKernel(x, y, 0.35));
        }
        return sum / pairs.size();
    };
    CHECK(meanErr(2000) < meanErr(20));
}

TEST_CASE("feature map is reproducible from its seed")
{
    const RandomFeatureMap a(50, 0.35, 9);
    const RandomFeatureMap b(50, 0.35, 9);
    const RandomFeatureMap c(50, 0.35, 10);
    CHECK(a.Row(7) == b.Row(7));
    CHECK(a.Row(7) != c.Row(7));
    CHECK_THROWS_AS(RandomFeatureMap(0, 0.35, 1), ConfigError);
    CHECK_THROWS_AS(RandomFeatureMap(10, 0.0, 1), ConfigError);
}

TEST_CASE("kea bootstraps, decays and respects the gate")
{
    KeaVector kea;
    CHECK_FALSE(kea.Initialized());
    CHECK_FALSE(ExpectedSimilarity(FeatureVector({1.0, 0.0}), kea));

    kea.Update(FeatureVector({1.0, 0.0}), 0.2, false); // bootstrap ignores the gate
    REQUIRE(kea.Initialized());
    CHECK(kea.Data()[0] == 1.0);

    kea.Update(FeatureVector({0.0, 1.0}), 0.2, false);
    CHECK(kea.Data()[0] == 1.0);
    CHECK(kea.Data()[1] == 0.0);

    kea.Update(FeatureVector({0.0, 1.0}), 0.2, true);
    CHECK(kea.Data()[0] == doctest::Approx(0.8));
    CHECK(kea.Data()[1] == doctest::Approx(0.2));
    CHECK(*ExpectedSimilarity(FeatureVector({1.0, 0.0}), kea) == doctest::Approx(0.8));
    CHECK_THROWS_AS(kea.Update(FeatureVector({0.0, 1.0}), 1.5, true), ConfigError);
}

TEST_CASE("incremental kea equals the unrolled recurrence")
{
    std::mt19937_64 rng(21);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    std::bernoulli_distribution gate(0.5);
    for (int seq = 0; seq < 100; ++seq)
    {
        std::vector<std::vector<double>> feats;
        std::vector<bool> gates;
        KeaVector kea;
        for (int t = 0; t < 30; ++t)
        {
            std::vector<double> f{u(rng), u(rng), u(rng), u(rng)};
            const bool open = gate(rng);
            feats.push_back(f);
            gates.push_back(open);
            kea.Update(FeatureVector(f), 0.2, open);
        }
        const auto ref = oracle::UnrolledKea(feats, gates, 0.2);
        for (std::size_t d = 0; d < ref.size(); ++d)
        {
            CHECK(std::abs(kea.Data()[d] - ref[d]) <= 1e-12);
        }
    }
}

TEST_CASE("anomaly score clamps similarity")
{
    CHECK(AnomalyScore(1.0) == 0.0);
    CHECK(AnomalyScore(1.3) == 0.0);
    CHECK(AnomalyScore(-0.2) == 1.0);
    CHECK(AnomalyScore(0.25) == 0.75);
}
