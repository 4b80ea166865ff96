#include "antilizer/kernel_features.hpp"

#include "antilizer/types.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

namespace antilizer::kernel {

namespace {

double Dot(std::span<const double> a, std::span<const double> b)
{
    return std::inner_product(a.begin(), a.end(), b.begin(), 0.0);
}

} // namespace

bool MetricVector::IsFinite() const
{
    return std::isfinite(txCount) && std::isfinite(fwdRatio) && std::isfinite(rankAvg);
}

std::optional<MetricVector> NormalizeMetrics(const MetricVector& raw, const NormalizationScales& scales)
{
    if (!(scales.tx > 0.0) || !(scales.fwdRatio > 0.0) || !(scales.rank > 0.0))
    {
        throw ConfigError("normalization scales must be > 0");
    }
    if (!raw.IsFinite() || raw.txCount < 0.0 || raw.fwdRatio < 0.0 || raw.rankAvg < 0.0)
    {
        return std::nullopt;
    }
    return MetricVector{std::min(raw.txCount / scales.tx, 1.0),
                        std::min(raw.fwdRatio / scales.fwdRatio, 1.0),
                        std::min(raw.rankAvg / scales.rank, 1.0)};
}

double FeatureVector::Norm() const
{
    return std::sqrt(Dot(m_data, m_data));
}

RandomFeatureMap::RandomFeatureMap(std::size_t samples, double sigmaSq, std::uint64_t seed)
    : m_sigmaSq(sigmaSq),
      m_seed(seed)
{
    if (samples < 1)
    {
        throw ConfigError("feature map needs at least one Monte Carlo sample");
    }
    if (!(sigmaSq > 0.0))
    {
        throw ConfigError("sigma_sq must be > 0");
    }
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0 / std::sqrt(sigmaSq));
    m_rows.resize(samples);
    for (auto& row : m_rows)
    {
        for (auto& z : row)
        {
            z = gauss(rng);
        }
    }
}

FeatureVector MapFeatures(const MetricVector& v, const RandomFeatureMap& map)
{
    const std::size_t m = map.Samples();
    const double scale = 1.0 / std::sqrt(static_cast<double>(m));
    const auto x = v.AsArray();
    std::vector<double> out(2 * m);
    for (std::size_t j = 0; j < m; ++j)
    {
        const auto& z = map.Row(j);
        const double proj = z[0] * x[0] + z[1] * x[1] + z[2] * x[2];
        out[2 * j] = scale * std::cos(proj);
        out[2 * j + 1] = scale * std::sin(proj);
    }
    return FeatureVector(std::move(out));
}

double RbfKernel(const MetricVector& x, const MetricVector& y, double sigmaSq)
{
    const auto a = x.AsArray();
    const auto b = y.AsArray();
    double sq = 0.0;
    for (std::size_t i = 0; i < kMetricDims; ++i)
    {
        sq += (a[i] - b[i]) * (a[i] - b[i]);
    }
    return std::exp(-sq / (2.0 * sigmaSq));
}

double KeaVector::Norm() const
{
    return std::sqrt(Dot(m_data, m_data));
}

void KeaVector::Update(const FeatureVector& f, double gamma, bool gateOpen)
{
    if (!(gamma >= 0.0 && gamma <= 1.0))
    {
        throw ConfigError("KEA decay gamma must lie in [0, 1]");
    }
    const auto fd = f.Data();
    if (!m_initialized)
    {
        m_data.assign(fd.begin(), fd.end());
        m_initialized = true;
        return;
    }
    if (!gateOpen)
    {
        return;
    }
    for (std::size_t i = 0; i < m_data.size(); ++i)
    {
        m_data[i] = gamma * fd[i] + (1.0 - gamma) * m_data[i];
    }
}

std::optional<double> ExpectedSimilarity(const FeatureVector& f, const KeaVector& mu)
{
    if (!mu.Initialized())
    {
        return std::nullopt;
    }
    return Dot(f.Data(), mu.Data());
}

double AnomalyScore(double similarity)
{
    return 1.0 - std::clamp(similarity, 0.0, 1.0);
}

} // namespace antilizer::kernel
