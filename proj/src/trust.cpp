#include "antilizer/trust.hpp"

#include "antilizer/types.hpp"

#include <cmath>

namespace antilizer::trust {

namespace {

double Csch(double x)
{
    return 1.0 / std::sinh(x);
}

} // namespace

void TrustParams::Validate() const
{
    if (!(k > 0.0))
    {
        throw ConfigError("k must be > 0");
    }
    if (!(alpha > 0.0 && alpha < 1.0))
    {
        throw ConfigError("alpha must lie in (0, 1)");
    }
    if (!(tauMax > 1.0))
    {
        throw ConfigError("tau_max must be > 1");
    }
    if (!(alphaEwma >= 0.0 && alphaEwma <= 1.0))
    {
        throw ConfigError("alpha_ewma must lie in [0, 1]");
    }
}

double SubjectiveTrust(double eta, const TrustParams& params)
{
    if (eta <= 0.0)
    {
        return 1.0;
    }
    if (eta >= 1.0)
    {
        return params.tauMax;
    }
    // -csch(k eta - k) == csch(k (1 - eta)); this form avoids the sign flip.
    const double tau = Csch(params.k * (1.0 - eta)) - Csch(params.k) + 1.0;
    if (!std::isfinite(tau) || tau > params.tauMax)
    {
        return params.tauMax;
    }
    return tau;
}

LinkPenaltyState TrustWeightedPenalty(LinkPenaltyState state, double tau, double etx, const TrustParams& params)
{
    const double sample = tau * etx;
    if (!state.initialized)
    {
        return LinkPenaltyState{sample, true};
    }
    state.pHat = params.alphaEwma * state.pHat + (1.0 - params.alphaEwma) * sample;
    return state;
}

bool IsFlagged(double eta, const TrustParams& params)
{
    return eta > params.alpha;
}

SlotScore NeighborTrust::Score(const kernel::MetricVector& normalized, const kernel::RandomFeatureMap& map,
                               const TrustParams& trustParams, const DetectorParams& detectorParams,
                               bool inRefractory)
{
    SlotScore score;
    const auto features = kernel::MapFeatures(normalized, map);
    const auto similarity = kernel::ExpectedSimilarity(features, m_kea);
    ++m_scoredSlots;

    if (!similarity)
    {
        score.bootstrap = true;
        score.warmup = true;
        m_kea.Update(features, detectorParams.gamma, true);
        return score;
    }

    score.similarity = *similarity;
    score.eta = kernel::AnomalyScore(*similarity);
    score.warmup = m_scoredSlots <= detectorParams.warmupSlots;
    score.refractory = inRefractory;

    if (score.warmup)
    {
        m_kea.Update(features, detectorParams.gamma, true);
        return score;
    }
    if (inRefractory)
    {
        m_kea.Update(features, 1.0, true);
        return score;
    }

    score.tau = SubjectiveTrust(score.eta, trustParams);
    score.flagged = IsFlagged(score.eta, trustParams);
    m_kea.Update(features, detectorParams.gamma, score.eta < trustParams.alpha);
    return score;
}

} // namespace antilizer::trust
