#include "antilizer/simulator.hpp"

#include "antilizer/ants.hpp"
#include "antilizer/attacks.hpp"
#include "antilizer/basestation.hpp"
#include "antilizer/kernel_features.hpp"
#include "antilizer/overhearing.hpp"
#include "antilizer/routing.hpp"
#include "antilizer/topology.hpp"
#include "antilizer/trust.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <deque>
#include <memory>
#include <queue>
#include <random>
#include <set>

namespace antilizer::sim {

using overhearing::FrameKind;

std::uint64_t DeriveSeed(std::uint64_t seed, std::uint32_t stream, std::uint32_t node)
{
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32), stream, node};
    std::array<std::uint32_t, 2> out{};
    seq.generate(out.begin(), out.end());
    return (static_cast<std::uint64_t>(out[0]) << 32) | out[1];
}

namespace {

enum class EvKind : std::uint8_t
{
    AppSend,
    Beacon,
    MacTry,
    MacDone,
    SlotTick,
    Hello,
    AntFlood,
    AttackOnset,
    Revoke,
    ForceDistrust,
    Reapprove,
};

struct Event
{
    double time;
    std::uint64_t seq;
    EvKind kind;
    NodeId node;
    std::int64_t aux;
};

struct EventLater
{
    bool operator()(const Event& a, const Event& b) const
    {
        return a.time != b.time ? a.time > b.time : a.seq > b.seq;
    }
};

struct Frame
{
    FrameKind kind = FrameKind::Data;
    std::int64_t ref = -1; // packet or ant index
    int attempts = 0;
};

enum class MacState : std::uint8_t
{
    Idle,
    Waiting,
    Transmitting,
};

struct BufferedAnt
{
    std::int64_t ant;
    SlotIndex since;
};

struct Node
{
    NodeId id = kNoNode;
    bool revoked = false;
    routing::RankState rank;
    routing::NeighborTable table;
    overhearing::SlotAccumulator acc{kNoNode};
    ants::ReportHistory reports;
    std::deque<Frame> queue;
    MacState mac = MacState::Idle;
    double channelBusyUntil = 0.0;
    NodeId txDest = kNoNode;
    double txRank = 0.0;
    std::mt19937_64 rngApp;
    std::mt19937_64 rngBeacon;
    std::mt19937_64 rngMac;
    std::vector<BufferedAnt> antBuffer;
    std::unique_ptr<kernel::RandomFeatureMap> featureMap;
    std::set<NodeId> forced;
    NodeId floodVictim = kNoNode;
    double lastBeaconQueued = -1e300;
};

class Simulator
{
  public:
    explicit Simulator(const ScenarioConfig& config);
    runlog::RunLog Run();

  private:
    double Uniform(std::mt19937_64& rng, double lo, double hi)
    {
        return std::uniform_real_distribution<double>(lo, hi)(rng);
    }

    SlotIndex CurrentSlot() const { return static_cast<SlotIndex>(std::floor(m_now / m_cfg.slotSeconds)); }

    void Schedule(double time, EvKind kind, NodeId node, std::int64_t aux = 0)
    {
        m_events.push(Event{time, m_seq++, kind, node, aux});
    }

    void Dispatch(const Event& ev);
    void OnAppSend(Node& n);
    void OnBeacon(Node& n);
    void OnHello(Node& n);
    void OnAntFlood(Node& n);
    void OnMacTry(Node& n);
    void OnMacDone(Node& n);
    void OnSlotTick(SlotIndex slot);
    void OnRevoke(NodeId target);
    void OnAttackStart();

    void Enqueue(Node& n, Frame frame, bool countMessage = true);
    void WakeMac(Node& n);
    void DropFrame(const Frame& frame, runlog::DropReason reason);
    void DropPacket(std::int64_t packet, runlog::DropReason reason);
    void EndAnt(std::int64_t ant, runlog::AntFate fate);
    void ReceiveBeacon(Node& n, NodeId sender, double rank, NodeId parent);
    void ReceiveData(Node& n, std::int64_t packet);
    void ReceiveAnt(Node& n, std::int64_t ant);
    void ForwardAnt(Node& n, std::int64_t ant);
    void SpawnAnt(Node& n, NodeId suspect, bool falsified);
    void Reroute(Node& n);
    void OnParentChange(Node& n, NodeId oldParent, NodeId newParent);
    void CloseNodeSlot(Node& n, SlotIndex slot);
    void Log(runlog::EventKind kind, NodeId a, NodeId b = kNoNode, NodeId c = kNoNode)
    {
        m_log.events.push_back({m_now, kind, a, b, c});
    }

    ScenarioConfig m_cfg;
    topology::Topology m_topo;
    attacks::AttackPlan m_plan;
    basestation::BaseStation m_bs;
    std::vector<Node> m_nodes;
    std::vector<std::vector<double>> m_linkP;
    std::priority_queue<Event, std::vector<Event>, EventLater> m_events;
    std::uint64_t m_seq = 0;
    double m_now = 0.0;
    runlog::RunLog m_log;
    runlog::SlotMessages m_msgs;
    std::int64_t m_unicastAttempts = 0;
    std::int64_t m_unicastFrames = 0;
};

Simulator::Simulator(const ScenarioConfig& config)
    : m_cfg(config),
      m_bs(config.filter, config.adminDelaySlots)
{
    m_cfg.Validate();
    m_topo = topology::Generate(m_cfg);
    const int n = m_topo.NodeCount();

    m_plan.kind = m_cfg.attackKind;
    m_plan.startTime = m_cfg.AttackStart();
    m_plan.helloInterval = m_cfg.helloInterval;
    m_plan.antFloodInterval = m_cfg.antFloodInterval;
    if (m_plan.kind != attacks::AttackKind::None)
    {
        // Without explicit ids the attackers are drawn from the routing tree at onset.
        m_plan.attackerIds = m_cfg.attackers;
        std::sort(m_plan.attackerIds.begin(), m_plan.attackerIds.end());
    }

    m_linkP.assign(n, std::vector<double>(n, 0.0));
    for (int a = 0; a < n; ++a)
    {
        for (NodeId b : m_topo.adjacency[a])
        {
            m_linkP[a][b] = topology::LinkProbability(m_topo.Distance(a, b), m_cfg.txRange, m_cfg.linkProbability);
        }
    }

    overhearing::AccumulatorOptions accOptions;
    accOptions.countBeaconsInTx = m_cfg.txCountsBeacons;
    accOptions.capacity = routing::kNeighborTableCap;
    m_nodes.resize(n);
    for (int i = 0; i < n; ++i)
    {
        Node& node = m_nodes[i];
        node.id = i;
        node.acc = overhearing::SlotAccumulator(i, accOptions);
        node.rank.isRoot = i == m_topo.root;
        node.rank.ownRank = node.rank.isRoot ? m_cfg.routing.rootRank : m_cfg.routing.unreachableRank;
        const auto u = static_cast<std::uint32_t>(i);
        node.rngApp.seed(DeriveSeed(m_cfg.seed, kStreamApp, u));
        node.rngBeacon.seed(DeriveSeed(m_cfg.seed, kStreamBeacon, u));
        node.rngMac.seed(DeriveSeed(m_cfg.seed, kStreamMac, u));
        if (m_cfg.defenseEnabled)
        {
            node.featureMap = std::make_unique<kernel::RandomFeatureMap>(m_cfg.mcSamples, m_cfg.sigmaSq,
                                                                         DeriveSeed(m_cfg.seed, kStreamFeatureMap, u));
        }
    }

    auto& meta = m_log.meta;
    char buf[64];
    auto num = [&](double v) {
        std::snprintf(buf, sizeof(buf), "%.17g", v);
        return std::string(buf);
    };
    meta["seed"] = std::to_string(m_cfg.seed);
    meta["node_count"] = std::to_string(n);
    meta["root"] = std::to_string(m_topo.root);
    meta["attack_kind"] = attacks::ToString(m_plan.kind);
    meta["attack_start"] = num(m_plan.startTime);
    meta["slot_seconds"] = num(m_cfg.slotSeconds);
    meta["sim_duration"] = num(m_cfg.simDuration);
    meta["measure_start"] = num(m_cfg.measureStart);
    meta["defense_enabled"] = m_cfg.defenseEnabled ? "1" : "0";
    meta["alpha"] = num(m_cfg.trust.alpha);
    meta["feature_map_seed"] = "derived(seed," + std::to_string(kStreamFeatureMap) + ",node)";
    meta["placement_attempts"] = std::to_string(m_topo.placementAttempts);
    m_log.adjacency = m_topo.adjacency;

}

runlog::RunLog Simulator::Run()
{
    for (auto& node : m_nodes)
    {
        if (!node.rank.isRoot)
        {
            Schedule(Uniform(node.rngApp, 0.0, m_cfg.trafficPeriod), EvKind::AppSend, node.id);
        }
        Schedule(Uniform(node.rngBeacon, 0.0, m_cfg.beaconMax), EvKind::Beacon, node.id);
    }
    Schedule(m_cfg.slotSeconds, EvKind::SlotTick, kNoNode, 0);
    if (m_plan.kind != attacks::AttackKind::None)
    {
        Schedule(m_plan.startTime, EvKind::AttackOnset, kNoNode);
    }
    for (std::size_t i = 0; i < m_cfg.forceDistrust.size(); ++i)
    {
        Schedule(m_cfg.forceDistrust[i].time, EvKind::ForceDistrust, m_cfg.forceDistrust[i].observer,
                 static_cast<std::int64_t>(i));
    }
    for (const auto& r : m_cfg.reapprovals)
    {
        Schedule(r.time, EvKind::Reapprove, r.node);
    }

    while (!m_events.empty() && m_events.top().time <= m_cfg.simDuration)
    {
        const Event ev = m_events.top();
        m_events.pop();
        m_now = ev.time;
        Dispatch(ev);
    }

    m_log.meta["unicast_attempts"] = std::to_string(m_unicastAttempts);
    m_log.meta["unicast_frames"] = std::to_string(m_unicastFrames);
    return std::move(m_log);
}

void Simulator::Dispatch(const Event& ev)
{
    switch (ev.kind)
    {
    case EvKind::AppSend:
        OnAppSend(m_nodes[ev.node]);
        break;
    case EvKind::Beacon:
        OnBeacon(m_nodes[ev.node]);
        break;
    case EvKind::MacTry:
        OnMacTry(m_nodes[ev.node]);
        break;
    case EvKind::MacDone:
        OnMacDone(m_nodes[ev.node]);
        break;
    case EvKind::SlotTick:
        OnSlotTick(ev.aux);
        break;
    case EvKind::Hello:
        OnHello(m_nodes[ev.node]);
        break;
    case EvKind::AntFlood:
        OnAntFlood(m_nodes[ev.node]);
        break;
    case EvKind::AttackOnset:
        OnAttackStart();
        break;
    case EvKind::Revoke:
        OnRevoke(ev.node);
        break;
    case EvKind::ForceDistrust: {
        const auto& d = m_cfg.forceDistrust[static_cast<std::size_t>(ev.aux)];
        m_nodes[d.observer].forced.insert(d.target);
        Log(runlog::EventKind::ForceDistrust, d.observer, d.target);
        break;
    }
    case EvKind::Reapprove:
        for (auto& node : m_nodes)
        {
            if (auto* rec = node.table.Find(ev.node))
            {
                rec->blacklisted = false;
            }
        }
        Log(runlog::EventKind::Reapprove, ev.node);
        break;
    }
}

void Simulator::OnAttackStart()
{
    if (m_plan.attackerIds.empty())
    {
        std::vector<NodeId> parentOf;
        for (const auto& node : m_nodes)
        {
            parentOf.push_back(node.revoked ? kNoNode : node.rank.parentId);
        }
        m_plan.attackerIds = attacks::SelectAttackers(m_topo.adjacency, parentOf, m_topo.root,
                                                      m_cfg.ResolvedAttackerCount(),
                                                      DeriveSeed(m_cfg.seed, kStreamAttackers, 0));
    }
    m_log.attackers = m_plan.attackerIds;
    for (NodeId a : m_plan.attackerIds)
    {
        Log(runlog::EventKind::AttackOnset, a);
        if (m_plan.kind == attacks::AttackKind::HelloFlood)
        {
            Schedule(m_now, EvKind::Hello, a);
        }
        if (m_plan.kind == attacks::AttackKind::AntFlood)
        {
            // Falsified reports name an honest non-root neighbour.
            for (NodeId v : m_topo.adjacency[a])
            {
                if (v != m_topo.root && !m_plan.IsAttacker(v))
                {
                    m_nodes[a].floodVictim = v;
                    break;
                }
            }
            Schedule(m_now, EvKind::AntFlood, a);
        }
    }
}

void Simulator::OnAppSend(Node& n)
{
    if (n.revoked)
    {
        return;
    }
    runlog::PacketRecord p;
    p.origin = n.id;
    p.created = m_now;
    m_log.packets.push_back(p);
    Enqueue(n, Frame{FrameKind::Data, static_cast<std::int64_t>(m_log.packets.size() - 1), 0});
    Schedule(m_now + m_cfg.trafficPeriod, EvKind::AppSend, n.id);
}

void Simulator::OnBeacon(Node& n)
{
    if (n.revoked)
    {
        return;
    }
    const bool lying = attacks::AdvertisedRank(m_plan, n.id, m_now, 1.0, 0.0) == 0.0;
    if (!n.rank.Detached() || lying)
    {
        n.lastBeaconQueued = m_now;
        Enqueue(n, Frame{FrameKind::Beacon, -1, 0});
    }
    Schedule(m_now + Uniform(n.rngBeacon, m_cfg.beaconMin, m_cfg.beaconMax), EvKind::Beacon, n.id);
}

void Simulator::OnHello(Node& n)
{
    if (n.revoked || !attacks::SendsHellos(m_plan, n.id, m_now))
    {
        return;
    }
    Enqueue(n, Frame{FrameKind::Hello, -1, 0});
    Schedule(m_now + m_plan.helloInterval, EvKind::Hello, n.id);
}

void Simulator::OnAntFlood(Node& n)
{
    if (n.revoked || !attacks::FloodsAnts(m_plan, n.id, m_now))
    {
        return;
    }
    if (n.floodVictim != kNoNode)
    {
        SpawnAnt(n, n.floodVictim, true);
    }
    Schedule(m_now + m_plan.antFloodInterval, EvKind::AntFlood, n.id);
}

void Simulator::Enqueue(Node& n, Frame frame, bool countMessage)
{
    if (countMessage)
    {
        switch (frame.kind)
        {
        case FrameKind::Data:
            ++m_msgs.data;
            break;
        case FrameKind::Beacon:
            ++m_msgs.beacon;
            break;
        case FrameKind::Hello:
            ++m_msgs.hello;
            break;
        case FrameKind::AntUnicast:
            ++m_msgs.antUnicast;
            break;
        case FrameKind::AntNotice:
            ++m_msgs.antNotice;
            break;
        }
    }
    if (n.queue.size() >= m_cfg.mac.queueCapacity)
    {
        DropFrame(frame, runlog::DropReason::Queue);
        return;
    }
    n.queue.push_back(frame);
    WakeMac(n);
}

void Simulator::WakeMac(Node& n)
{
    if (n.mac == MacState::Idle && !n.queue.empty())
    {
        n.mac = MacState::Waiting;
        Schedule(m_now, EvKind::MacTry, n.id);
    }
}

void Simulator::DropFrame(const Frame& frame, runlog::DropReason reason)
{
    if (frame.kind == FrameKind::Data)
    {
        DropPacket(frame.ref, reason);
    }
    else if (frame.kind == FrameKind::AntUnicast)
    {
        EndAnt(frame.ref, runlog::AntFate::Lost);
    }
}

void Simulator::DropPacket(std::int64_t packet, runlog::DropReason reason)
{
    auto& p = m_log.packets[static_cast<std::size_t>(packet)];
    p.fate = runlog::PacketFate::Dropped;
    p.reason = reason;
    p.fateTime = m_now;
}

void Simulator::EndAnt(std::int64_t ant, runlog::AntFate fate)
{
    auto& a = m_log.ants[static_cast<std::size_t>(ant)];
    a.fate = fate;
    a.endTime = m_now;
}

void Simulator::OnMacTry(Node& n)
{
    n.mac = MacState::Idle;
    if (n.revoked)
    {
        return;
    }
    while (!n.queue.empty())
    {
        if (m_now < n.channelBusyUntil)
        {
            n.mac = MacState::Waiting;
            Schedule(n.channelBusyUntil + Uniform(n.rngMac, 0.0, m_cfg.mac.backoffMin), EvKind::MacTry, n.id);
            return;
        }
        Frame& f = n.queue.front();
        NodeId dest = kBroadcast;
        if (f.kind == FrameKind::Data || f.kind == FrameKind::AntUnicast)
        {
            const auto hop = routing::NextHop(n.rank);
            if (!hop)
            {
                if (f.kind == FrameKind::Data)
                {
                    DropPacket(f.ref, runlog::DropReason::NoRoute);
                }
                else
                {
                    n.antBuffer.push_back({f.ref, CurrentSlot()});
                }
                n.queue.pop_front();
                continue;
            }
            dest = *hop;
        }
        else if (f.kind == FrameKind::Beacon)
        {
            const double adv =
                attacks::AdvertisedRank(m_plan, n.id, m_now, n.rank.ownRank, m_cfg.routing.rootRank);
            const bool lying = adv != n.rank.ownRank || (n.rank.isRoot && adv == m_cfg.routing.rootRank);
            if (n.rank.Detached() && !lying)
            {
                n.queue.pop_front();
                continue;
            }
            n.txRank = adv;
        }
        n.txDest = dest;
        const double end = m_now + m_cfg.mac.serviceTime;
        n.channelBusyUntil = std::max(n.channelBusyUntil, end);
        for (NodeId v : m_topo.adjacency[n.id])
        {
            m_nodes[v].channelBusyUntil = std::max(m_nodes[v].channelBusyUntil, end);
        }
        n.mac = MacState::Transmitting;
        Schedule(end, EvKind::MacDone, n.id);
        return;
    }
}

void Simulator::OnMacDone(Node& n)
{
    n.mac = MacState::Idle;
    if (n.revoked || n.queue.empty())
    {
        return;
    }
    Frame& f = n.queue.front();
    const NodeId dest = n.txDest;

    overhearing::RadioEvent ev;
    ev.sender = n.id;
    ev.receiver = dest;
    ev.kind = f.kind;
    if (f.kind == FrameKind::Beacon)
    {
        ev.advertisedRank = n.txRank;
    }
    for (NodeId o : m_topo.adjacency[n.id])
    {
        Node& obs = m_nodes[o];
        if (obs.revoked)
        {
            continue;
        }
        const bool receiverInRange = dest >= 0 && (dest == o || m_topo.Adjacent(o, dest));
        obs.acc.Observe(ev, true, receiverInRange);
    }

    if (dest == kBroadcast)
    {
        const Frame frame = f;
        n.queue.pop_front();
        const NodeId parentField = n.rank.isRoot || n.txRank == m_cfg.routing.rootRank ? kNoNode : n.rank.parentId;
        for (NodeId o : m_topo.adjacency[n.id])
        {
            Node& recv = m_nodes[o];
            if (recv.revoked)
            {
                continue;
            }
            if (frame.kind == FrameKind::Beacon)
            {
                ReceiveBeacon(recv, n.id, n.txRank, parentField);
            }
            else if (frame.kind == FrameKind::Hello)
            {
                // A solicitation: answer with a beacon unless one went out recently.
                if (!recv.rank.Detached() && m_now - recv.lastBeaconQueued >= m_cfg.beaconMin)
                {
                    recv.lastBeaconQueued = m_now;
                    Enqueue(recv, Frame{FrameKind::Beacon, -1, 0});
                }
            }
            else if (frame.kind == FrameKind::AntNotice && m_cfg.defenseEnabled)
            {
                if (auto* rec = recv.table.Find(n.id))
                {
                    rec->refractoryUntil =
                        std::max(rec->refractoryUntil, ants::RefractoryUntil(CurrentSlot(), m_cfg.ants));
                }
            }
        }
    }
    else
    {
        n.acc.ObserveOwnTransmission(dest);
        auto* rec = n.table.Find(dest);
        if (rec)
        {
            ++rec->slotAttempts;
        }
        ++m_unicastAttempts;
        const bool ok = !m_nodes[dest].revoked &&
                        std::uniform_real_distribution<double>(0.0, 1.0)(n.rngMac) < m_linkP[n.id][dest];
        if (ok)
        {
            if (rec)
            {
                ++rec->slotSuccesses;
            }
            const Frame frame = f;
            n.queue.pop_front();
            ++m_unicastFrames;
            if (frame.kind == FrameKind::Data)
            {
                ReceiveData(m_nodes[dest], frame.ref);
            }
            else
            {
                ReceiveAnt(m_nodes[dest], frame.ref);
            }
        }
        else if (++f.attempts >= m_cfg.mac.maxAttempts)
        {
            const Frame frame = f;
            n.queue.pop_front();
            ++m_unicastFrames;
            DropFrame(frame, runlog::DropReason::Link);
        }
        else
        {
            const double window =
                std::min(m_cfg.mac.backoffMax, m_cfg.mac.backoffMin * std::ldexp(1.0, f.attempts));
            n.mac = MacState::Waiting;
            Schedule(m_now + Uniform(n.rngMac, m_cfg.mac.backoffMin, window), EvKind::MacTry, n.id);
            return;
        }
    }
    WakeMac(n);
}

void Simulator::ReceiveBeacon(Node& n, NodeId sender, double rank, NodeId parent)
{
    auto* rec = n.table.Touch(sender, m_now, n.rank.parentId);
    if (!rec)
    {
        return;
    }
    rec->lastHeard = m_now;
    rec->advertisedRank = rank;
    rec->advertisedParent = parent;
    if (!rec->penalty.initialized)
    {
        rec->penalty = trust::TrustWeightedPenalty(rec->penalty, 1.0, rec->etx, m_cfg.trust);
    }
    if (!n.rank.isRoot)
    {
        Reroute(n);
    }
}

void Simulator::ReceiveData(Node& n, std::int64_t packet)
{
    auto& p = m_log.packets[static_cast<std::size_t>(packet)];
    ++p.hops;
    if (n.rank.isRoot)
    {
        p.fate = runlog::PacketFate::Delivered;
        p.fateTime = m_now;
        return;
    }
    if (attacks::DropsForwarded(m_plan, n.id, m_now))
    {
        DropPacket(packet, runlog::DropReason::Attack);
        return;
    }
    if (p.hops >= m_cfg.mac.maxHops)
    {
        DropPacket(packet, runlog::DropReason::HopLimit);
        return;
    }
    Enqueue(n, Frame{FrameKind::Data, packet, 0});
}

void Simulator::ReceiveAnt(Node& n, std::int64_t ant)
{
    if (n.rank.isRoot)
    {
        const auto& a = m_log.ants[static_cast<std::size_t>(ant)];
        m_bs.Ingest(a.suspect, a.reporter);
        EndAnt(ant, runlog::AntFate::Delivered);
        return;
    }
    if (attacks::DropsForwarded(m_plan, n.id, m_now))
    {
        EndAnt(ant, runlog::AntFate::Lost);
        return;
    }
    ForwardAnt(n, ant);
}

void Simulator::ForwardAnt(Node& n, std::int64_t ant)
{
    auto& a = m_log.ants[static_cast<std::size_t>(ant)];
    ++a.hopsUnicast;
    ++a.hopsBroadcast;
    Enqueue(n, Frame{FrameKind::AntNotice, ant, 0});
    Enqueue(n, Frame{FrameKind::AntUnicast, ant, 0});
}

void Simulator::SpawnAnt(Node& n, NodeId suspect, bool falsified)
{
    runlog::AntRecord a;
    a.id = m_log.ants.size() + 1;
    a.suspect = suspect;
    a.reporter = n.id;
    a.createdSlot = CurrentSlot();
    a.created = m_now;
    a.falsified = falsified;
    m_log.ants.push_back(a);
    ++m_msgs.antSpawn;
    ForwardAnt(n, static_cast<std::int64_t>(m_log.ants.size() - 1));
}

void Simulator::Reroute(Node& n)
{
    const auto decision = routing::ComputeRank(n.table, n.rank, n.id, m_now, m_cfg.routing);
    n.rank = decision.state;
    if (decision.parentChanged)
    {
        OnParentChange(n, decision.oldParent, n.rank.parentId);
    }
}

void Simulator::OnParentChange(Node& n, NodeId oldParent, NodeId newParent)
{
    Log(runlog::EventKind::ParentChange, n.id, oldParent, newParent);
    if (!m_cfg.defenseEnabled || oldParent == kNoNode)
    {
        return;
    }
    auto* rec = n.table.Find(oldParent);
    if (!rec)
    {
        return;
    }
    const SlotIndex slot = CurrentSlot();
    ants::SpawnContext ctx;
    ctx.reporter = n.id;
    ctx.oldParent = oldParent;
    ctx.newParent = newParent;
    ctx.oldParentTau = rec->lastScore.tau;
    ctx.oldParentInRefractory = ants::InRefractory(rec->refractoryUntil, slot);
    ctx.slot = slot;
    if (ctx.oldParentTau > m_cfg.ants.triggerTau && !ctx.oldParentInRefractory)
    {
        rec->blacklisted = true;
    }
    if (auto ant = ants::MaybeSpawnAnt(ctx, n.reports, m_cfg.ants))
    {
        SpawnAnt(n, ant->suspectId, false);
    }
}

void Simulator::CloseNodeSlot(Node& n, SlotIndex slot)
{
    auto metrics = n.acc.CloseSlot();
    for (auto& [id, rec] : n.table)
    {
        rec.etx = routing::EstimateEtx(rec.slotAttempts, rec.slotSuccesses, rec.etx, m_cfg.routing);
        rec.slotAttempts = 0;
        rec.slotSuccesses = 0;
    }
    if (m_cfg.defenseEnabled && static_cast<double>(slot) * m_cfg.slotSeconds >= m_cfg.detectStart)
    {
        for (const auto& [neighbor, raw] : metrics)
        {
            auto* rec = n.table.Find(neighbor);
            if (!rec)
            {
                continue;
            }
            auto scales = m_cfg.scales;
            if (m_cfg.rankScaleAuto)
            {
                if (rec->trust.ScoredSlots() < m_cfg.detector.warmupSlots)
                {
                    rec->warmupMaxRank = std::max(rec->warmupMaxRank, raw.rankAvg);
                }
                if (rec->warmupMaxRank > 0.0)
                {
                    scales.rank = rec->warmupMaxRank;
                }
            }
            const auto normalized = kernel::NormalizeMetrics(raw, scales);
            if (!normalized)
            {
                continue;
            }
            auto score = rec->trust.Score(*normalized, *n.featureMap, m_cfg.trust, m_cfg.detector,
                                          ants::InRefractory(rec->refractoryUntil, slot));
            if (n.forced.count(neighbor))
            {
                score.eta = 1.0;
                score.tau = trust::SubjectiveTrust(1.0, m_cfg.trust);
                score.flagged = true;
                score.warmup = false;
                score.refractory = false;
            }
            rec->lastScore = score;
            if (m_cfg.logTrust)
            {
                m_log.trust.push_back({slot, n.id, neighbor, score.eta, score.tau, normalized->AsArray(), score.flagged,
                                       score.warmup, score.refractory});
            }
        }
        n.forced.clear();
    }
    for (auto& [id, rec] : n.table)
    {
        if (rec.penalty.initialized)
        {
            const double tau = m_cfg.defenseEnabled ? rec.lastScore.tau : 1.0;
            rec.penalty = trust::TrustWeightedPenalty(rec.penalty, tau, rec.etx, m_cfg.trust);
        }
    }
    if (!n.rank.isRoot)
    {
        Reroute(n);
    }
    if (!n.antBuffer.empty())
    {
        std::vector<BufferedAnt> keep;
        for (const auto& b : n.antBuffer)
        {
            if (!n.rank.Detached())
            {
                Enqueue(n, Frame{FrameKind::AntUnicast, b.ant, 0}, false);
            }
            else if (ants::Expired(b.since, slot, m_cfg.ants))
            {
                EndAnt(b.ant, runlog::AntFate::Expired);
            }
            else
            {
                keep.push_back(b);
            }
        }
        n.antBuffer = std::move(keep);
    }
}

void Simulator::OnSlotTick(SlotIndex slot)
{
    for (auto& n : m_nodes)
    {
        if (!n.revoked)
        {
            CloseNodeSlot(n, slot);
        }
    }
    const auto outcome = m_bs.CloseSlot(slot);
    for (const auto& v : outcome.verdicts)
    {
        m_log.verdicts.push_back({slot, v.suspectId, basestation::ToString(v.verdict)[0], v.culpritId});
    }
    for (const auto& action : outcome.actions)
    {
        // The verdict is issued at the end of `slot`; the action lands adminDelaySlots later.
        const double when = static_cast<double>(action.effectiveSlot + 1) * m_cfg.slotSeconds;
        Schedule(when, EvKind::Revoke, action.target);
    }
    m_msgs.slot = slot;
    m_log.messages.push_back(m_msgs);
    m_msgs = runlog::SlotMessages{};
    Schedule(static_cast<double>(slot + 2) * m_cfg.slotSeconds, EvKind::SlotTick, kNoNode, slot + 1);
}

void Simulator::OnRevoke(NodeId target)
{
    Node& n = m_nodes[target];
    if (n.revoked || n.rank.isRoot)
    {
        return;
    }
    n.revoked = true;
    Log(runlog::EventKind::Revoke, target);
    for (const auto& f : n.queue)
    {
        DropFrame(f, runlog::DropReason::Revoked);
    }
    n.queue.clear();
    for (const auto& b : n.antBuffer)
    {
        EndAnt(b.ant, runlog::AntFate::Lost);
    }
    n.antBuffer.clear();
}

} // namespace

runlog::RunLog Simulate(const ScenarioConfig& config)
{
    Simulator sim(config);
    return sim.Run();
}

} // namespace antilizer::sim
