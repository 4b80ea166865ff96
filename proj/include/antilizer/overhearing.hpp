#pragma once

// Per-slot neighbour metrics collected from radio event envelopes. The
// accumulator never sees payload bytes: RadioEvent carries only the
// envelope plus the rank advertised by beacons.

#include "antilizer/kernel_features.hpp"
#include "antilizer/types.hpp"

#include <map>
#include <optional>

namespace antilizer::overhearing {

enum class FrameKind
{
    Data,
    Beacon,
    Hello,
    AntUnicast,
    AntNotice,
};

struct RadioEvent
{
    NodeId sender = kNoNode;
    NodeId receiver = kBroadcast;
    FrameKind kind = FrameKind::Data;
    std::optional<double> advertisedRank; // beacons only
};

struct NeighborCounters
{
    int txHeard = 0;
    int rxHeard = 0;
    double rankSum = 0.0;
    int rankSamples = 0;
};

struct AccumulatorOptions
{
    bool countBeaconsInTx = true;
    std::size_t capacity = 50;
};

class SlotAccumulator
{
  public:
    explicit SlotAccumulator(NodeId observer, AccumulatorOptions options = {})
        : m_observer(observer),
          m_options(options)
    {
    }

    // An overheard transmission. senderInRange / receiverInRange describe the
    // observer's reception range; out-of-range parties are not counted.
    void Observe(const RadioEvent& event, bool senderInRange, bool receiverInRange);

    // The observer's own unicast to a neighbour is a known reception there.
    void ObserveOwnTransmission(NodeId receiver);

    // Per-neighbour metric vectors for the slot, then resets the counters.
    // Rank carries forward when no beacon was heard; neighbours with no rank
    // ever heard are omitted.
    std::map<NodeId, kernel::MetricVector> CloseSlot();

    const NeighborCounters* Counters(NodeId neighbor) const;
    std::optional<double> LastKnownRank(NodeId neighbor) const;
    std::size_t TrackedNeighbors() const { return m_counters.size(); }

  private:
    NeighborCounters* Entry(NodeId id);

    NodeId m_observer;
    AccumulatorOptions m_options;
    std::map<NodeId, NeighborCounters> m_counters;
    std::map<NodeId, double> m_lastRank;
};

} // namespace antilizer::overhearing
