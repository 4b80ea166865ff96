#pragma once

// Random Fourier feature approximation of the RBF kernel and the
// incrementally maintained kernel embedding (KEA) vector used to score how
// much a neighbour's overheard behaviour departs from its own history.

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace antilizer::kernel {

inline constexpr std::size_t kMetricDims = 3;

// Per-slot overheard metrics of one neighbour, in fixed order (Tx, Rx/Tx, Rank).
struct MetricVector
{
    double txCount = 0.0;
    double fwdRatio = 0.0;
    double rankAvg = 0.0;

    std::array<double, kMetricDims> AsArray() const { return {txCount, fwdRatio, rankAvg}; }
    bool IsFinite() const;
    bool operator==(const MetricVector&) const = default;
};

struct NormalizationScales
{
    double tx = 200.0;
    double fwdRatio = 1.0;
    double rank = 16.0;
};

// min(raw / scale, 1) per component. Returns nullopt for a non-finite or
// negative raw sample so the caller treats the slot as missing.
std::optional<MetricVector> NormalizeMetrics(const MetricVector& raw, const NormalizationScales& scales);

class FeatureVector
{
  public:
    FeatureVector() = default;
    explicit FeatureVector(std::vector<double> data) : m_data(std::move(data)) {}

    std::span<const double> Data() const { return m_data; }
    std::size_t Size() const { return m_data.size(); }
    double Norm() const;

  private:
    std::vector<double> m_data;
};

// m x d Gaussian projection with entries ~ N(0, 1/sigma_sq), drawn once.
class RandomFeatureMap
{
  public:
    RandomFeatureMap(std::size_t samples, double sigmaSq, std::uint64_t seed);

    std::size_t Samples() const { return m_rows.size(); }
    double SigmaSq() const { return m_sigmaSq; }
    std::uint64_t Seed() const { return m_seed; }
    const std::array<double, kMetricDims>& Row(std::size_t j) const { return m_rows[j]; }

  private:
    std::vector<std::array<double, kMetricDims>> m_rows;
    double m_sigmaSq;
    std::uint64_t m_seed;
};

// Interleaved (cos, sin) pairs scaled by 1/sqrt(m); unit norm.
FeatureVector MapFeatures(const MetricVector& v, const RandomFeatureMap& map);

// exp(-|x - y|^2 / (2 sigma_sq)), the kernel the feature map approximates.
double RbfKernel(const MetricVector& x, const MetricVector& y, double sigmaSq);

class KeaVector
{
  public:
    KeaVector() = default;

    bool Initialized() const { return m_initialized; }
    std::span<const double> Data() const { return m_data; }
    double Norm() const;

    // Absorbs the feature vector of the slot just scored.
    //  - uninitialized: bootstrap, mu := f regardless of the gate
    //  - gate open: mu := gamma * f + (1 - gamma) * mu
    //  - gate closed: unchanged
    void Update(const FeatureVector& f, double gamma, bool gateOpen);

  private:
    std::vector<double> m_data;
    bool m_initialized = false;
};

// <f, mu>; nullopt when mu holds no history yet.
std::optional<double> ExpectedSimilarity(const FeatureVector& f, const KeaVector& mu);

// 1 - clamp(similarity, 0, 1): 0 for unchanged behaviour, 1 for total change.
double AnomalyScore(double similarity);

} // namespace antilizer::kernel
