#pragma once

// Distance-vector routing with the trust-weighted link penalty: rank
// computation with hysteresis, beaconing and ETX estimation.

#include "antilizer/trust.hpp"
#include "antilizer/types.hpp"

#include <map>
#include <optional>

namespace antilizer::routing {

inline constexpr std::size_t kNeighborTableCap = 50;

// Byte sizes used for overhead accounting only.
inline constexpr int kDataPacketBytes = 160;
inline constexpr int kBeaconBytes = 32;
inline constexpr int kHelloBytes = 16;

struct RoutingParams
{
    double rootRank = 0.0;
    double hysteresis = 0.5;
    double trustBypassTau = 1.1;      // parent tau above this skips hysteresis
    double unreachableRank = 65535.0; // 2^16 - 1
    double neighborTimeout = 10.0;    // seconds without a beacon before a neighbour is unusable
    double etxFailCap = 8.0;
    double etxDefault = 2.0;
    double etxHistoryWeight = 0.7;

    void Validate() const;
};

struct NeighborRecord
{
    NodeId neighborId = kNoNode;
    std::optional<double> advertisedRank;
    NodeId advertisedParent = kNoNode;
    double etx = 2.0;
    trust::LinkPenaltyState penalty;
    trust::NeighborTrust trust;
    trust::SlotScore lastScore;
    double lastHeard = 0.0;
    SlotIndex refractoryUntil = 0;
    bool blacklisted = false;
    double warmupMaxRank = 0.0; // rank normalization reference

    // Unicast statistics for the slot in progress.
    int slotAttempts = 0;
    int slotSuccesses = 0;
};

class NeighborTable
{
  public:
    // Returns the record for id, creating it when there is room. A full table
    // evicts the stalest record that is not the current parent; returns
    // nullptr when nothing can be evicted.
    NeighborRecord* Touch(NodeId id, double now, NodeId currentParent);

    NeighborRecord* Find(NodeId id);
    const NeighborRecord* Find(NodeId id) const;
    std::size_t Size() const { return m_records.size(); }

    auto begin() { return m_records.begin(); }
    auto end() { return m_records.end(); }
    auto begin() const { return m_records.begin(); }
    auto end() const { return m_records.end(); }

  private:
    std::map<NodeId, NeighborRecord> m_records;
};

struct RankState
{
    double ownRank = 0.0;
    NodeId parentId = kNoNode;
    bool isRoot = false;

    bool Detached() const { return !isRoot && parentId == kNoNode; }
};

struct RankDecision
{
    RankState state;
    bool parentChanged = false;
    NodeId oldParent = kNoNode;
};

// Smoothed ETX: sample = attempts / successes (or the failure cap), blended
// 0.7 prev + 0.3 sample, clamped to [1, cap]. No attempts keeps prev.
double EstimateEtx(int attempts, int successes, double prevEtx, const RoutingParams& params);

bool IsCandidate(const NeighborRecord& rec, NodeId self, double now, const RoutingParams& params);

double CandidateCost(const NeighborRecord& rec);

RankDecision ComputeRank(const NeighborTable& table, const RankState& current, NodeId self, double now,
                         const RoutingParams& params);

struct BeaconMessage
{
    NodeId sender = kNoNode;
    double rank = 0.0;
    NodeId parent = kNoNode;
};

// Detached nodes advertise nothing.
std::optional<BeaconMessage> EmitBeacon(const RankState& state, NodeId self);

// Upward next hop; nullopt when detached (packet counts as a routing loss).
std::optional<NodeId> NextHop(const RankState& state);

} // namespace antilizer::routing
