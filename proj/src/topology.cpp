#include "antilizer/topology.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <random>

namespace antilizer::topology {

double Topology::Distance(NodeId a, NodeId b) const
{
    return std::hypot(positions[a].x - positions[b].x, positions[a].y - positions[b].y);
}

bool Topology::Adjacent(NodeId a, NodeId b) const
{
    const auto& n = adjacency[a];
    return std::binary_search(n.begin(), n.end(), b);
}

double LinkProbability(double distance, double range, std::optional<double> override)
{
    if (!(distance <= range))
    {
        return 0.0;
    }
    if (override)
    {
        return *override;
    }
    const double r = distance / range;
    return 1.0 - 0.3 * r * r;
}

std::vector<std::vector<NodeId>> BuildAdjacency(const std::vector<Position>& positions, double range)
{
    const auto n = positions.size();
    std::vector<std::vector<NodeId>> adjacency(n);
    for (std::size_t i = 0; i < n; ++i)
    {
        for (std::size_t j = 0; j < n; ++j)
        {
            if (i != j && std::hypot(positions[i].x - positions[j].x, positions[i].y - positions[j].y) <= range)
            {
                adjacency[i].push_back(static_cast<NodeId>(j));
            }
        }
    }
    return adjacency;
}

std::vector<int> HopDistances(const std::vector<std::vector<NodeId>>& adjacency, NodeId root)
{
    std::vector<int> hops(adjacency.size(), -1);
    std::queue<NodeId> frontier;
    hops[root] = 0;
    frontier.push(root);
    while (!frontier.empty())
    {
        const NodeId u = frontier.front();
        frontier.pop();
        for (NodeId v : adjacency[u])
        {
            if (hops[v] < 0)
            {
                hops[v] = hops[u] + 1;
                frontier.push(v);
            }
        }
    }
    return hops;
}

bool Connected(const std::vector<std::vector<NodeId>>& adjacency)
{
    if (adjacency.empty())
    {
        return true;
    }
    const auto hops = HopDistances(adjacency, 0);
    return std::none_of(hops.begin(), hops.end(), [](int h) { return h < 0; });
}

Topology Generate(const ScenarioConfig& config)
{
    Topology topo;
    topo.root = config.root;
    if (!config.positions.empty())
    {
        topo.positions = config.positions;
        topo.adjacency = BuildAdjacency(topo.positions, config.txRange);
        if (!Connected(topo.adjacency))
        {
            throw ConfigError("positions: custom topology is not connected at tx_range " +
                              std::to_string(config.txRange));
        }
        return topo;
    }

    std::seed_seq seq{static_cast<std::uint32_t>(config.seed), static_cast<std::uint32_t>(config.seed >> 32),
                      0x70700u};
    std::mt19937_64 rng(seq);
    const double side = config.AreaSide();
    std::uniform_real_distribution<double> coord(0.0, side);
    for (int attempt = 1; attempt <= 1000; ++attempt)
    {
        topo.positions.assign(config.nodeCount, Position{});
        for (int i = 0; i < config.nodeCount; ++i)
        {
            if (i == config.root)
            {
                topo.positions[i] = {side / 2.0, side / 2.0};
            }
            else
            {
                const double x = coord(rng);
                topo.positions[i] = {x, coord(rng)};
            }
        }
        topo.adjacency = BuildAdjacency(topo.positions, config.txRange);
        const auto rootDegree = topo.adjacency[config.root].size();
        if (Connected(topo.adjacency) && (rootDegree >= 2 || config.nodeCount <= 2))
        {
            topo.placementAttempts = attempt;
            return topo;
        }
    }
    throw ConfigError("node_count/area_side/tx_range: no connected placement found in 1000 attempts");
}

} // namespace antilizer::topology
