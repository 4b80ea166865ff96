#include "antilizer/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <map>
#include <set>
#include <stdexcept>

namespace antilizer::metrics {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::string Fmt(double v)
{
    if (std::isnan(v))
    {
        return "nan";
    }
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.6g", v);
    return buf;
}

struct PairHistory
{
    bool scored = false;
    bool flagged = false;
};

// Mean over observers of (flagged pairs / scored pairs).
double PerObserverRate(const std::map<NodeId, std::map<NodeId, PairHistory>>& pairs)
{
    double sum = 0.0;
    int observers = 0;
    for (const auto& [observer, neighbors] : pairs)
    {
        int scored = 0;
        int flagged = 0;
        for (const auto& [neighbor, h] : neighbors)
        {
            if (h.scored)
            {
                ++scored;
                flagged += h.flagged ? 1 : 0;
            }
        }
        if (scored > 0)
        {
            sum += static_cast<double>(flagged) / scored;
            ++observers;
        }
    }
    return observers > 0 ? sum / observers : kNaN;
}

} // namespace

RunSummary Summarize(const runlog::RunLog& log)
{
    Window w;
    w.start = log.MetaDouble("measure_start");
    w.end = log.MetaDouble("sim_duration");
    return Summarize(log, w);
}

RunSummary Summarize(const runlog::RunLog& log, const Window& window)
{
    RunSummary s;
    const double end = window.end > 0.0 ? window.end : log.MetaDouble("sim_duration");
    const double slotSeconds = log.MetaDouble("slot_seconds");
    const double onset = log.MetaDouble("attack_start");
    const std::set<NodeId> attackers(log.attackers.begin(), log.attackers.end());
    auto inWindow = [&](double t) { return t >= window.start && t <= end; };

    double delaySum = 0.0;
    for (const auto& p : log.packets)
    {
        if (!inWindow(p.created) || p.fate == runlog::PacketFate::InFlight)
        {
            continue;
        }
        ++s.packetsSent;
        if (p.fate == runlog::PacketFate::Delivered)
        {
            ++s.packetsDelivered;
            delaySum += p.fateTime - p.created;
        }
    }
    if (s.packetsSent == 0)
    {
        throw std::runtime_error("no completed packets in the measurement window");
    }
    s.dataLoss = 1.0 - static_cast<double>(s.packetsDelivered) / static_cast<double>(s.packetsSent);
    s.avgDelay = s.packetsDelivered > 0 ? delaySum / static_cast<double>(s.packetsDelivered) : kNaN;

    for (const auto& m : log.messages)
    {
        const double slotStart = static_cast<double>(m.slot) * slotSeconds;
        if (slotStart >= window.start && slotStart < end)
        {
            s.defenseMessages += m.Defense();
            s.totalMessages += m.Total();
        }
    }
    s.overheadPct = s.totalMessages > 0
                        ? 100.0 * static_cast<double>(s.defenseMessages) / static_cast<double>(s.totalMessages)
                        : 0.0;

    // Detection rates per observer. Attacker pairs count only while the
    // attack is active; honest pairs count outside warm-up.
    std::map<NodeId, std::map<NodeId, PairHistory>> tpPairs;
    std::map<NodeId, std::map<NodeId, PairHistory>> fpPairs;
    for (const auto& t : log.trust)
    {
        const double tick = static_cast<double>(t.slot + 1) * slotSeconds;
        if (!inWindow(tick) || attackers.count(t.observer))
        {
            continue;
        }
        if (attackers.count(t.neighbor))
        {
            if (tick > onset)
            {
                auto& h = tpPairs[t.observer][t.neighbor];
                h.scored = true;
                h.flagged = h.flagged || t.flagged;
            }
        }
        else if (!t.warmup)
        {
            auto& h = fpPairs[t.observer][t.neighbor];
            h.scored = true;
            h.flagged = h.flagged || t.flagged;
        }
    }
    s.tpRate = PerObserverRate(tpPairs);
    s.fpRate = PerObserverRate(fpPairs);

    std::map<NodeId, double> firstReport;
    for (const auto& a : log.ants)
    {
        if (a.fate != runlog::AntFate::Delivered || !attackers.count(a.suspect) || a.created < onset)
        {
            continue;
        }
        auto it = firstReport.find(a.suspect);
        if (it == firstReport.end() || a.endTime < it->second)
        {
            firstReport[a.suspect] = a.endTime;
        }
    }
    if (firstReport.empty())
    {
        s.detectLatencySlots = kNaN;
    }
    else
    {
        double sum = 0.0;
        for (const auto& [attacker, when] : firstReport)
        {
            sum += (when - onset) / slotSeconds;
        }
        s.detectLatencySlots = sum / static_cast<double>(firstReport.size());
    }
    return s;
}

CsvRow MakeRow(const std::string& scenarioId, const runlog::RunLog& log, const RunSummary& summary)
{
    CsvRow row;
    row.scenarioId = scenarioId;
    row.seed = std::stoull(log.MetaString("seed"));
    row.nodeCount = static_cast<int>(log.MetaInt("node_count"));
    row.attackKind = log.MetaString("attack_kind");
    row.attackers = static_cast<int>(log.attackers.size());
    row.alpha = log.MetaDouble("alpha");
    row.summary = summary;
    return row;
}

std::string CsvHeader()
{
    return "scenario_id,seed,node_count,attack_kind,attackers,alpha,data_loss,avg_delay_s,overhead_pct,tp_rate,"
           "fp_rate,detect_latency_slots";
}

std::string CsvLine(const CsvRow& row)
{
    const auto& s = row.summary;
    return row.scenarioId + "," + std::to_string(row.seed) + "," + std::to_string(row.nodeCount) + "," +
           row.attackKind + "," + std::to_string(row.attackers) + "," + Fmt(row.alpha) + "," + Fmt(s.dataLoss) +
           "," + Fmt(s.avgDelay) + "," + Fmt(s.overheadPct) + "," + Fmt(s.tpRate) + "," + Fmt(s.fpRate) + "," +
           Fmt(s.detectLatencySlots);
}

std::string RenderCsv(const std::vector<CsvRow>& rows)
{
    std::string out = CsvHeader() + "\n";
    for (const auto& row : rows)
    {
        out += CsvLine(row) + "\n";
    }
    return out;
}

std::string RenderSummary(const RunSummary& s)
{
    char buf[512];
    std::snprintf(buf, sizeof(buf),
                  "data_loss            %.17g\n"
                  "avg_delay_s          %.17g\n"
                  "overhead_pct         %.17g\n"
                  "tp_rate              %.17g\n"
                  "fp_rate              %.17g\n"
                  "detect_latency_slots %.17g\n"
                  "packets_sent         %lld\n"
                  "packets_delivered    %lld\n"
                  "defense_messages     %lld\n"
                  "total_messages       %lld\n",
                  s.dataLoss, s.avgDelay, s.overheadPct, s.tpRate, s.fpRate, s.detectLatencySlots,
                  static_cast<long long>(s.packetsSent), static_cast<long long>(s.packetsDelivered),
                  static_cast<long long>(s.defenseMessages), static_cast<long long>(s.totalMessages));
    return buf;
}

} // namespace antilizer::metrics
