#pragma once

#include "antilizer/kernel_features.hpp"

#include <optional>

namespace antilizer::trust {

struct TrustParams
{
    double k = 6.0;          // csch sensitivity
    double alpha = 0.75;     // flag / KEA gating threshold
    double tauMax = 1e6;     // cap at the csch singularity
    double alphaEwma = 0.3;  // link-penalty smoothing weight (ALPHA)

    void Validate() const;
};

struct LinkPenaltyState
{
    double pHat = 0.0;
    bool initialized = false;
};

// tau = csch(k (1 - eta)) - csch(k) + 1, capped at tauMax.
// Equal to 1 at eta = 0 and nondecreasing in eta.
double SubjectiveTrust(double eta, const TrustParams& params);

// p_hat(t) = ALPHA p_hat(t-1) + (1 - ALPHA) tau ETX; first sample seeds p_hat = tau ETX.
LinkPenaltyState TrustWeightedPenalty(LinkPenaltyState state, double tau, double etx, const TrustParams& params);

// Strict eta > alpha.
bool IsFlagged(double eta, const TrustParams& params);

struct DetectorParams
{
    double gamma = 0.2;
    int warmupSlots = 3;
};

// Outcome of scoring one neighbour for one slot.
struct SlotScore
{
    double similarity = 1.0;
    double eta = 0.0;
    double tau = 1.0;
    bool flagged = false;
    bool warmup = false;
    bool refractory = false;
    bool bootstrap = false;
};

// Per-neighbour expected-similarity state: the KEA vector plus the slot
// counter driving warm-up.
class NeighborTrust
{
  public:
    // Scores one normalized metric vector and updates the KEA vector.
    // While in refractory the neighbour is treated as trusted and the KEA
    // vector is re-baselined to the current behaviour.
    SlotScore Score(const kernel::MetricVector& normalized, const kernel::RandomFeatureMap& map,
                    const TrustParams& trustParams, const DetectorParams& detectorParams, bool inRefractory);

    const kernel::KeaVector& Kea() const { return m_kea; }
    int ScoredSlots() const { return m_scoredSlots; }

  private:
    kernel::KeaVector m_kea;
    int m_scoredSlots = 0;
};

} // namespace antilizer::trust
