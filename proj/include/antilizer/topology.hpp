#pragma once

// Node placement, the unit-disk neighbour graph and the distance-based
// link success model.

#include "antilizer/config.hpp"

#include <optional>
#include <vector>

namespace antilizer::topology {

struct Topology
{
    std::vector<Position> positions;
    std::vector<std::vector<NodeId>> adjacency; // ascending neighbour ids
    NodeId root = 0;
    int placementAttempts = 1;

    int NodeCount() const { return static_cast<int>(positions.size()); }
    double Distance(NodeId a, NodeId b) const;
    bool Adjacent(NodeId a, NodeId b) const;
};

// 1 - 0.3 (d / range)^2 inside range, 0 outside; a constant override
// replaces the model for in-range pairs.
double LinkProbability(double distance, double range, std::optional<double> override = std::nullopt);

std::vector<std::vector<NodeId>> BuildAdjacency(const std::vector<Position>& positions, double range);

bool Connected(const std::vector<std::vector<NodeId>>& adjacency);

// Hop distance from root, -1 when unreachable.
std::vector<int> HopDistances(const std::vector<std::vector<NodeId>>& adjacency, NodeId root);

// Custom positions are used verbatim and must form a connected graph.
// Otherwise the root sits at the area centre and the remaining nodes are
// uniform in the square, resampled until connected with a root degree of at
// least two (up to 1000 attempts).
Topology Generate(const ScenarioConfig& config);

} // namespace antilizer::topology
