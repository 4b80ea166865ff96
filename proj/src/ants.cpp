#include "antilizer/ants.hpp"

namespace antilizer::ants {

namespace {

void PutU32(AntWire& wire, std::size_t offset, std::uint32_t value)
{
    for (std::size_t i = 0; i < 4; ++i)
    {
        wire[offset + i] = static_cast<std::uint8_t>((value >> (8 * i)) & 0xffu);
    }
}

std::uint32_t GetU32(const AntWire& wire, std::size_t offset)
{
    std::uint32_t value = 0;
    for (std::size_t i = 0; i < 4; ++i)
    {
        value |= static_cast<std::uint32_t>(wire[offset + i]) << (8 * i);
    }
    return value;
}

} // namespace

void AntParams::Validate() const
{
    if (refractorySlots < 0 || dedupWindowSlots < 0 || ttlSlots < 0)
    {
        throw ConfigError("ANT slot windows must be >= 0");
    }
    if (!(triggerTau >= 1.0))
    {
        throw ConfigError("ANT trigger tau must be >= 1");
    }
}

AntWire Serialize(const Ant& ant)
{
    AntWire wire{};
    PutU32(wire, 0, static_cast<std::uint32_t>(ant.suspectId));
    PutU32(wire, 4, static_cast<std::uint32_t>(ant.reporterId));
    PutU32(wire, 8, static_cast<std::uint32_t>(ant.createdSlot));
    return wire;
}

Ant Deserialize(const AntWire& wire)
{
    Ant ant;
    ant.suspectId = static_cast<NodeId>(GetU32(wire, 0));
    ant.reporterId = static_cast<NodeId>(GetU32(wire, 4));
    ant.createdSlot = static_cast<SlotIndex>(GetU32(wire, 8));
    return ant;
}

bool ReportHistory::RecentlyReported(NodeId suspect, SlotIndex slot, int windowSlots) const
{
    auto it = m_lastReported.find(suspect);
    return it != m_lastReported.end() && slot - it->second < windowSlots;
}

SlotIndex RefractoryUntil(SlotIndex noticeSlot, const AntParams& params)
{
    return params.refractoryEnabled ? noticeSlot + params.refractorySlots : 0;
}

std::optional<Ant> MaybeSpawnAnt(const SpawnContext& ctx, ReportHistory& history, const AntParams& params)
{
    if (ctx.oldParent == kNoNode || ctx.oldParent == ctx.reporter || ctx.oldParent == ctx.newParent)
    {
        return std::nullopt;
    }
    if (!(ctx.oldParentTau > params.triggerTau) || ctx.oldParentInRefractory)
    {
        return std::nullopt;
    }
    if (history.RecentlyReported(ctx.oldParent, ctx.slot, params.dedupWindowSlots))
    {
        return std::nullopt;
    }
    history.Record(ctx.oldParent, ctx.slot);
    Ant ant;
    ant.suspectId = ctx.oldParent;
    ant.reporterId = ctx.reporter;
    ant.createdSlot = ctx.slot;
    return ant;
}

HopResult AntHop(Ant ant, NodeId atNode)
{
    ++ant.hopsUnicast;
    ++ant.hopsBroadcast;
    return HopResult{ant, HopNotice{atNode, ant.id}};
}

bool Expired(SlotIndex bufferedSince, SlotIndex now, const AntParams& params)
{
    return now - bufferedSince > params.ttlSlots;
}

} // namespace antilizer::ants
