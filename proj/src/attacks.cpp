#include "antilizer/attacks.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <random>

namespace antilizer::attacks {

std::string ToString(AttackKind kind)
{
    switch (kind)
    {
    case AttackKind::None:
        return "none";
    case AttackKind::Sinkhole:
        return "sinkhole";
    case AttackKind::Blackhole:
        return "blackhole";
    case AttackKind::HelloFlood:
        return "hello_flood";
    case AttackKind::AntFlood:
        return "ant_flood";
    }
    return "none";
}

AttackKind ParseAttackKind(const std::string& text)
{
    for (auto kind : {AttackKind::None, AttackKind::Sinkhole, AttackKind::Blackhole, AttackKind::HelloFlood,
                      AttackKind::AntFlood})
    {
        if (ToString(kind) == text)
        {
            return kind;
        }
    }
    throw ConfigError("unknown attack kind '" + text + "'");
}

bool AttackPlan::IsAttacker(NodeId node) const
{
    return kind != AttackKind::None && std::find(attackerIds.begin(), attackerIds.end(), node) != attackerIds.end();
}

bool AttackPlan::ActiveAt(NodeId node, double now) const
{
    return now >= startTime && IsAttacker(node);
}

double DefaultStartTime(int nodeCount)
{
    return nodeCount <= 25 ? 1200.0 : 2400.0;
}

double AdvertisedRank(const AttackPlan& plan, NodeId node, double now, double honestRank, double rootRank)
{
    if ((plan.kind == AttackKind::Sinkhole || plan.kind == AttackKind::Blackhole) && plan.ActiveAt(node, now))
    {
        return rootRank;
    }
    return honestRank;
}

bool DropsForwarded(const AttackPlan& plan, NodeId node, double now)
{
    return plan.kind == AttackKind::Blackhole && plan.ActiveAt(node, now);
}

bool SendsHellos(const AttackPlan& plan, NodeId node, double now)
{
    return plan.kind == AttackKind::HelloFlood && plan.ActiveAt(node, now);
}

bool FloodsAnts(const AttackPlan& plan, NodeId node, double now)
{
    return plan.kind == AttackKind::AntFlood && plan.ActiveAt(node, now);
}

std::vector<NodeId> SelectAttackers(const std::vector<std::vector<NodeId>>& adjacency,
                                    const std::vector<NodeId>& parentOf, NodeId root, int count, std::uint64_t seed)
{
    const int n = static_cast<int>(adjacency.size());
    if (count > n - 1)
    {
        throw ConfigError("not enough non-root nodes for " + std::to_string(count) + " attackers");
    }
    std::vector<bool> relay(n, false);
    for (NodeId v = 0; v < static_cast<NodeId>(parentOf.size()); ++v)
    {
        if (parentOf[v] >= 0 && parentOf[v] < n)
        {
            relay[parentOf[v]] = true;
        }
    }
    const auto& rootNeighbors = adjacency[root];
    auto nearRoot = [&](NodeId v) {
        return std::find(rootNeighbors.begin(), rootNeighbors.end(), v) != rootNeighbors.end();
    };

    // Tiers in order of preference: relays away from the root, relays next
    // to it, other nodes away from the root, everything else.
    std::array<std::vector<NodeId>, 4> tiers;
    for (NodeId v = 0; v < n; ++v)
    {
        if (v == root)
        {
            continue;
        }
        const int tier = relay[v] ? (nearRoot(v) ? 1 : 0) : (nearRoot(v) ? 3 : 2);
        tiers[tier].push_back(v);
    }

    std::mt19937_64 rng(seed);
    std::vector<NodeId> chosen;
    for (auto& tier : tiers)
    {
        const int missing = count - static_cast<int>(chosen.size());
        if (missing <= 0)
        {
            break;
        }
        std::sample(tier.begin(), tier.end(), std::back_inserter(chosen), missing, rng);
    }
    std::sort(chosen.begin(), chosen.end());
    return chosen;
}

int AttackerCountForFraction(double fraction, int nodeCount)
{
    if (!(fraction > 0.0 && fraction <= 1.0))
    {
        throw ConfigError("attacker_fraction must lie in (0, 1]");
    }
    return std::max(1, static_cast<int>(std::lround(fraction * nodeCount)));
}

} // namespace antilizer::attacks
