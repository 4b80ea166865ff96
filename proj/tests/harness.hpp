#pragma once

// Helpers shared by the unit tests and the acceptance runner.

#include "antilizer/config.hpp"
#include "antilizer/routing.hpp"
#include "oracles.hpp"

#include <map>
#include <string>
#include <vector>

namespace harness {

using namespace antilizer;

inline ScenarioConfig MakeConfig(const std::map<std::string, std::string>& values)
{
    ScenarioConfig config;
    for (const auto& [k, v] : values)
    {
        ApplyKeyValue(config, k, v);
    }
    config.Validate();
    return config;
}

// Synchronous distance-vector rounds over a static graph: every node hears
// every neighbour's current rank, link penalties are fixed at tau = 1 times
// the given ETX. Returns the converged ranks (unreachable rank when detached).
inline std::vector<double> ConvergeRanks(const std::vector<std::vector<oracle::Edge>>& out, NodeId root,
                                         const routing::RoutingParams& params, int maxRounds = 1000)
{
    const int n = static_cast<int>(out.size());
    std::vector<routing::RankState> state(n);
    state[root].isRoot = true;
    state[root].ownRank = params.rootRank;
    for (int round = 0; round < maxRounds; ++round)
    {
        bool changed = false;
        std::vector<routing::RankState> next = state;
        for (int v = 0; v < n; ++v)
        {
            routing::NeighborTable table;
            for (const auto& e : out[v])
            {
                auto* rec = table.Touch(e.to, 0.0, state[v].parentId);
                rec->etx = e.weight;
                rec->penalty = {e.weight, true};
                if (auto beacon = routing::EmitBeacon(state[e.to], e.to))
                {
                    rec->advertisedRank = beacon->rank;
                    rec->advertisedParent = beacon->parent;
                }
            }
            const auto decision = routing::ComputeRank(table, state[v], v, 0.0, params);
            if (decision.state.ownRank != state[v].ownRank || decision.state.parentId != state[v].parentId)
            {
                changed = true;
            }
            next[v] = decision.state;
        }
        state = next;
        if (!changed)
        {
            break;
        }
    }
    std::vector<double> ranks;
    for (const auto& s : state)
    {
        ranks.push_back(s.Detached() ? params.unreachableRank : s.ownRank);
    }
    return ranks;
}

// Random static link weights in [1, 4) on both directions of every edge.
inline std::vector<std::vector<oracle::Edge>> RandomWeights(const std::vector<std::vector<NodeId>>& adj,
                                                            std::mt19937_64& rng)
{
    std::uniform_real_distribution<double> w(1.0, 4.0);
    std::vector<std::vector<oracle::Edge>> out(adj.size());
    for (std::size_t v = 0; v < adj.size(); ++v)
    {
        for (NodeId u : adj[v])
        {
            out[v].push_back({u, w(rng)});
        }
    }
    return out;
}

} // namespace harness
