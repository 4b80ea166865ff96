#include "antilizer/routing.hpp"

#include <algorithm>
#include <limits>

namespace antilizer::routing {

void RoutingParams::Validate() const
{
    if (rootRank < 0.0)
    {
        throw ConfigError("root_rank must be >= 0");
    }
    if (hysteresis < 0.0)
    {
        throw ConfigError("hysteresis must be >= 0");
    }
    if (!(neighborTimeout > 0.0))
    {
        throw ConfigError("neighbor_timeout must be > 0");
    }
    if (!(etxFailCap >= 1.0) || !(etxDefault >= 1.0))
    {
        throw ConfigError("ETX bounds must be >= 1");
    }
}

NeighborRecord* NeighborTable::Touch(NodeId id, double now, NodeId currentParent)
{
    if (auto it = m_records.find(id); it != m_records.end())
    {
        return &it->second;
    }
    if (m_records.size() >= kNeighborTableCap)
    {
        auto stalest = m_records.end();
        for (auto it = m_records.begin(); it != m_records.end(); ++it)
        {
            if (it->first == currentParent)
            {
                continue;
            }
            if (stalest == m_records.end() || it->second.lastHeard < stalest->second.lastHeard)
            {
                stalest = it;
            }
        }
        if (stalest == m_records.end())
        {
            return nullptr;
        }
        m_records.erase(stalest);
    }
    NeighborRecord rec;
    rec.neighborId = id;
    rec.lastHeard = now;
    return &m_records.emplace(id, std::move(rec)).first->second;
}

NeighborRecord* NeighborTable::Find(NodeId id)
{
    auto it = m_records.find(id);
    return it == m_records.end() ? nullptr : &it->second;
}

const NeighborRecord* NeighborTable::Find(NodeId id) const
{
    auto it = m_records.find(id);
    return it == m_records.end() ? nullptr : &it->second;
}

double EstimateEtx(int attempts, int successes, double prevEtx, const RoutingParams& params)
{
    if (attempts <= 0)
    {
        return prevEtx;
    }
    const double sample = successes > 0 ? static_cast<double>(attempts) / successes : params.etxFailCap;
    const double blended = params.etxHistoryWeight * prevEtx + (1.0 - params.etxHistoryWeight) * sample;
    return std::clamp(blended, 1.0, params.etxFailCap);
}

bool IsCandidate(const NeighborRecord& rec, NodeId self, double now, const RoutingParams& params)
{
    return rec.advertisedRank.has_value() && *rec.advertisedRank < params.unreachableRank &&
           rec.penalty.initialized && now - rec.lastHeard <= params.neighborTimeout && !rec.blacklisted &&
           !rec.lastScore.flagged && rec.advertisedParent != self;
}

double CandidateCost(const NeighborRecord& rec)
{
    return rec.penalty.pHat + rec.advertisedRank.value_or(std::numeric_limits<double>::infinity());
}

RankDecision ComputeRank(const NeighborTable& table, const RankState& current, NodeId self, double now,
                         const RoutingParams& params)
{
    RankDecision decision;
    decision.state = current;
    decision.oldParent = current.parentId;
    if (current.isRoot)
    {
        decision.state.ownRank = params.rootRank;
        decision.state.parentId = kNoNode;
        return decision;
    }

    const NeighborRecord* best = nullptr;
    double bestCost = std::numeric_limits<double>::infinity();
    const NeighborRecord* parent = nullptr;
    for (const auto& [id, rec] : table)
    {
        if (!IsCandidate(rec, self, now, params))
        {
            continue;
        }
        const double cost = CandidateCost(rec);
        // std::map iterates in ascending id, so strict < keeps the lowest id on ties.
        if (cost < bestCost)
        {
            bestCost = cost;
            best = &rec;
        }
        if (id == current.parentId)
        {
            parent = &rec;
        }
    }

    if (best == nullptr)
    {
        decision.state.parentId = kNoNode;
        decision.state.ownRank = params.unreachableRank;
        decision.parentChanged = current.parentId != kNoNode;
        return decision;
    }

    const NeighborRecord* chosen = best;
    if (parent != nullptr && parent != best)
    {
        const double parentCost = CandidateCost(*parent);
        const bool distrusted = parent->lastScore.tau > params.trustBypassTau;
        const double margin = distrusted ? 0.0 : params.hysteresis;
        if (!(bestCost < parentCost - margin))
        {
            chosen = parent;
        }
    }

    decision.state.parentId = chosen->neighborId;
    decision.state.ownRank = CandidateCost(*chosen);
    decision.parentChanged = chosen->neighborId != current.parentId;
    return decision;
}

std::optional<BeaconMessage> EmitBeacon(const RankState& state, NodeId self)
{
    if (state.Detached())
    {
        return std::nullopt;
    }
    return BeaconMessage{self, state.ownRank, state.parentId};
}

std::optional<NodeId> NextHop(const RankState& state)
{
    if (state.isRoot || state.parentId == kNoNode)
    {
        return std::nullopt;
    }
    return state.parentId;
}

} // namespace antilizer::routing
