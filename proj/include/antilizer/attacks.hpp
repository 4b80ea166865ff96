#pragma once

// Malicious behaviour overrides consulted from inside the owning node's
// event handlers. Before start time an attacker behaves exactly like an
// honest node.

#include "antilizer/types.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace antilizer::attacks {

enum class AttackKind
{
    None,
    Sinkhole,
    Blackhole,
    HelloFlood,
    // Falsified-ANT flooding; exercises the compromised-ANT branch of the
    // base-station filter.
    AntFlood,
};

std::string ToString(AttackKind kind);
AttackKind ParseAttackKind(const std::string& text);

struct AttackPlan
{
    AttackKind kind = AttackKind::None;
    std::vector<NodeId> attackerIds;
    double startTime = 2400.0;
    double helloInterval = 0.1;
    double antFloodInterval = 2.0;

    bool IsAttacker(NodeId node) const;
    bool ActiveAt(NodeId node, double now) const;
};

// 1200 s for networks up to 25 nodes, 2400 s otherwise.
double DefaultStartTime(int nodeCount);

// Sinkhole and blackhole attackers advertise the root rank once active.
double AdvertisedRank(const AttackPlan& plan, NodeId node, double now, double honestRank, double rootRank);

// Blackhole attackers silently drop everything they are asked to forward.
bool DropsForwarded(const AttackPlan& plan, NodeId node, double now);

bool SendsHellos(const AttackPlan& plan, NodeId node, double now);

bool FloodsAnts(const AttackPlan& plan, NodeId node, double now);

// Uniformly random attackers drawn by tier: nodes that currently have a
// child in the routing tree and are not root neighbours first, then relays
// next to the root, then other non-root-neighbours, then anything non-root.
// parentOf[v] is v's current parent (kNoNode when unattached).
std::vector<NodeId> SelectAttackers(const std::vector<std::vector<NodeId>>& adjacency,
                                    const std::vector<NodeId>& parentOf, NodeId root, int count, std::uint64_t seed);

// max(1, round(fraction * n)).
int AttackerCountForFraction(double fraction, int nodeCount);

} // namespace antilizer::attacks
