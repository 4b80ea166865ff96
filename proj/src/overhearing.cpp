#include "antilizer/overhearing.hpp"

#include <algorithm>

namespace antilizer::overhearing {

NeighborCounters* SlotAccumulator::Entry(NodeId id)
{
    if (id == m_observer || id < 0)
    {
        return nullptr;
    }
    if (auto it = m_counters.find(id); it != m_counters.end())
    {
        return &it->second;
    }
    if (m_counters.size() >= m_options.capacity)
    {
        return nullptr;
    }
    return &m_counters[id];
}

void SlotAccumulator::Observe(const RadioEvent& event, bool senderInRange, bool receiverInRange)
{
    if (senderInRange)
    {
        if (auto* c = Entry(event.sender))
        {
            if (event.kind != FrameKind::Beacon || m_options.countBeaconsInTx)
            {
                ++c->txHeard;
            }
            if (event.kind == FrameKind::Beacon && event.advertisedRank)
            {
                c->rankSum += *event.advertisedRank;
                ++c->rankSamples;
            }
        }
    }
    if (event.receiver != kBroadcast && event.receiver != m_observer && receiverInRange)
    {
        if (auto* c = Entry(event.receiver))
        {
            ++c->rxHeard;
        }
    }
}

void SlotAccumulator::ObserveOwnTransmission(NodeId receiver)
{
    if (auto* c = Entry(receiver))
    {
        ++c->rxHeard;
    }
}

std::map<NodeId, kernel::MetricVector> SlotAccumulator::CloseSlot()
{
    std::map<NodeId, kernel::MetricVector> out;
    for (auto& [id, c] : m_counters)
    {
        kernel::MetricVector v;
        v.txCount = c.txHeard;
        v.fwdRatio = static_cast<double>(c.rxHeard) / std::max(c.txHeard, 1);
        if (c.rankSamples > 0)
        {
            m_lastRank[id] = c.rankSum / c.rankSamples;
        }
        c = NeighborCounters{};
        // A neighbour whose rank was never heard has no usable vector: reading
        // rank 0 would mimic a sinkhole.
        auto last = m_lastRank.find(id);
        if (last == m_lastRank.end())
        {
            continue;
        }
        v.rankAvg = last->second;
        out.emplace(id, v);
    }
    return out;
}

const NeighborCounters* SlotAccumulator::Counters(NodeId neighbor) const
{
    auto it = m_counters.find(neighbor);
    return it == m_counters.end() ? nullptr : &it->second;
}

std::optional<double> SlotAccumulator::LastKnownRank(NodeId neighbor) const
{
    auto it = m_lastRank.find(neighbor);
    if (it == m_lastRank.end())
    {
        return std::nullopt;
    }
    return it->second;
}

} // namespace antilizer::overhearing
