#pragma once

// ANT (notification ticket) lifecycle: spawning on a trust-induced parent
// switch, hop-by-hop migration with a one-hop notice at every hop, and the
// refractory window receivers grant the notified node.

#include "antilizer/types.hpp"

#include <array>
#include <cstdint>
#include <map>
#include <optional>

namespace antilizer::ants {

struct AntParams
{
    int refractorySlots = 2;
    bool refractoryEnabled = true;
    double triggerTau = 1.1;
    int dedupWindowSlots = 10;
    int ttlSlots = 5;

    void Validate() const;
};

struct Ant
{
    std::uint64_t id = 0;
    NodeId suspectId = kNoNode;
    NodeId reporterId = kNoNode;
    SlotIndex createdSlot = 0;
    int hopsUnicast = 0;
    int hopsBroadcast = 0;
    bool falsified = false;

    // One spawn plus every unicast hop and every hop notice.
    int MessageCount() const { return 1 + hopsUnicast + hopsBroadcast; }
};

inline constexpr std::size_t kAntWireBytes = 12;
using AntWire = std::array<std::uint8_t, kAntWireBytes>;

// Fixed-width little-endian record: suspect, reporter, created slot (4 bytes each).
AntWire Serialize(const Ant& ant);
Ant Deserialize(const AntWire& wire);

// Reporter-side memory of which suspects were already reported, for the
// duplicate-report hold window.
class ReportHistory
{
  public:
    bool RecentlyReported(NodeId suspect, SlotIndex slot, int windowSlots) const;
    void Record(NodeId suspect, SlotIndex slot) { m_lastReported[suspect] = slot; }

  private:
    std::map<NodeId, SlotIndex> m_lastReported;
};

inline bool InRefractory(SlotIndex refractoryUntil, SlotIndex slot)
{
    return slot < refractoryUntil;
}

// Slot index until which a receiver of a hop notice suppresses flags on the
// hop node. Returns 0 (no refractory) when refractory is disabled.
SlotIndex RefractoryUntil(SlotIndex noticeSlot, const AntParams& params);

struct SpawnContext
{
    NodeId reporter = kNoNode;
    NodeId oldParent = kNoNode;
    NodeId newParent = kNoNode;
    double oldParentTau = 1.0;
    bool oldParentInRefractory = false;
    SlotIndex slot = 0;
};

// An ANT naming the old parent when the switch was trust-induced (old parent
// tau above the trigger), the old parent is not in refractory and was not
// reported within the hold window. Records the report on success.
std::optional<Ant> MaybeSpawnAnt(const SpawnContext& ctx, ReportHistory& history, const AntParams& params);

struct HopNotice
{
    NodeId hopNode = kNoNode;
    std::uint64_t antId = 0;
};

struct HopResult
{
    Ant forwarded;
    HopNotice notice;
};

// The node holding the ant unicasts it to its parent and broadcasts a
// one-hop notice naming itself.
HopResult AntHop(Ant ant, NodeId atNode);

// Buffered at a detached relay for longer than the TTL.
bool Expired(SlotIndex bufferedSince, SlotIndex now, const AntParams& params);

} // namespace antilizer::ants
