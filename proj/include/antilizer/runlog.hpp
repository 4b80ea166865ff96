#pragma once

// Structured record of one simulation run. Everything the summary needs is
// in here, so summaries can be recomputed from a saved log.

#include "antilizer/types.hpp"

#include <array>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace antilizer::runlog {

enum class PacketFate : std::uint8_t
{
    InFlight,
    Delivered,
    Dropped,
};

enum class DropReason : std::uint8_t
{
    None,
    Link,     // retries exhausted
    Queue,    // MAC queue overflow
    NoRoute,  // detached at transmission time
    Attack,   // blackhole
    HopLimit,
    Revoked,
};

struct PacketRecord
{
    NodeId origin = kNoNode;
    double created = 0.0;
    double fateTime = 0.0;
    PacketFate fate = PacketFate::InFlight;
    DropReason reason = DropReason::None;
    int hops = 0;
};

enum class AntFate : std::uint8_t
{
    InFlight,
    Delivered,
    Expired,
    Lost,
};

struct AntRecord
{
    std::uint64_t id = 0;
    NodeId suspect = kNoNode;
    NodeId reporter = kNoNode;
    SlotIndex createdSlot = 0;
    double created = 0.0;
    double endTime = 0.0;
    AntFate fate = AntFate::InFlight;
    int hopsUnicast = 0;
    int hopsBroadcast = 0;
    bool falsified = false;

    int MessageCount() const { return 1 + hopsUnicast + hopsBroadcast; }
};

struct VerdictRecord
{
    SlotIndex slot = 0;
    NodeId suspect = kNoNode;
    char verdict = 'F'; // 'G' genuine attack, 'C' compromised ANT, 'F' false positive
    NodeId culprit = kNoNode;
};

struct TrustRecord
{
    SlotIndex slot = 0;
    NodeId observer = kNoNode;
    NodeId neighbor = kNoNode;
    double eta = 0.0;
    double tau = 1.0;
    std::array<double, 3> metrics{}; // normalized (Tx, Rx/Tx, Rank)
    bool flagged = false;
    bool warmup = false;
    bool refractory = false;
};

// Logical messages created in one slot, by kind.
struct SlotMessages
{
    SlotIndex slot = 0;
    std::int64_t data = 0;
    std::int64_t beacon = 0;
    std::int64_t hello = 0;
    std::int64_t antSpawn = 0;
    std::int64_t antUnicast = 0;
    std::int64_t antNotice = 0;

    std::int64_t Defense() const { return antSpawn + antUnicast + antNotice; }
    std::int64_t Total() const { return data + beacon + hello + Defense(); }
};

enum class EventKind : std::uint8_t
{
    AttackOnset,
    Revoke,
    ParentChange,
    Reapprove,
    ForceDistrust,
};

struct EventRecord
{
    double time = 0.0;
    EventKind kind = EventKind::AttackOnset;
    NodeId a = kNoNode;
    NodeId b = kNoNode;
    NodeId c = kNoNode;
};

struct RunLog
{
    // Scalar run metadata, rendered as strings.
    std::map<std::string, std::string> meta;
    std::vector<NodeId> attackers;
    std::vector<std::vector<NodeId>> adjacency;
    std::vector<PacketRecord> packets;
    std::vector<AntRecord> ants;
    std::vector<VerdictRecord> verdicts;
    std::vector<TrustRecord> trust;
    std::vector<SlotMessages> messages;
    std::vector<EventRecord> events;

    double MetaDouble(const std::string& key) const;
    long long MetaInt(const std::string& key) const;
    const std::string& MetaString(const std::string& key) const;
};

// Line-delimited text; doubles use 17 significant digits so a parsed log
// reproduces the in-memory one exactly.
std::string Serialize(const RunLog& log);
RunLog Parse(const std::string& text);

void WriteFile(const RunLog& log, const std::string& path);
RunLog ReadFile(const std::string& path);

// FNV-1a 64 over the serialized form.
std::uint64_t Digest(const RunLog& log);

} // namespace antilizer::runlog
