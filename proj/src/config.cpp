#include "antilizer/config.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <sstream>

namespace antilizer {

namespace {

std::string Trim(const std::string& s)
{
    const auto first = s.find_first_not_of(" \t\r\n");
    if (first == std::string::npos)
    {
        return {};
    }
    const auto last = s.find_last_not_of(" \t\r\n");
    return s.substr(first, last - first + 1);
}

std::vector<std::string> Split(const std::string& s, char sep)
{
    std::vector<std::string> parts;
    std::string item;
    std::istringstream in(s);
    while (std::getline(in, item, sep))
    {
        item = Trim(item);
        if (!item.empty())
        {
            parts.push_back(item);
        }
    }
    return parts;
}

[[noreturn]] void Bad(const std::string& key, const std::string& value, const std::string& what)
{
    throw ConfigError(key + ": " + what + " (got '" + value + "')");
}

double ToDouble(const std::string& key, const std::string& value)
{
    try
    {
        std::size_t used = 0;
        double v = std::stod(value, &used);
        if (used != value.size())
        {
            Bad(key, value, "expected a number");
        }
        return v;
    }
    catch (const std::logic_error&)
    {
        Bad(key, value, "expected a number");
    }
}

long long ToInt(const std::string& key, const std::string& value)
{
    try
    {
        std::size_t used = 0;
        long long v = std::stoll(value, &used);
        if (used != value.size())
        {
            Bad(key, value, "expected an integer");
        }
        return v;
    }
    catch (const std::logic_error&)
    {
        Bad(key, value, "expected an integer");
    }
}

std::uint64_t ToUnsigned(const std::string& key, const std::string& value)
{
    if (value.empty() || value[0] == '-')
    {
        Bad(key, value, "expected a non-negative integer");
    }
    try
    {
        std::size_t used = 0;
        unsigned long long v = std::stoull(value, &used);
        if (used != value.size())
        {
            Bad(key, value, "expected a non-negative integer");
        }
        return v;
    }
    catch (const std::logic_error&)
    {
        Bad(key, value, "expected a non-negative integer");
    }
}

bool ToBool(const std::string& key, const std::string& value)
{
    if (value == "true" || value == "1" || value == "yes" || value == "on")
    {
        return true;
    }
    if (value == "false" || value == "0" || value == "no" || value == "off")
    {
        return false;
    }
    Bad(key, value, "expected true/false");
}

std::string Num(double v)
{
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::string Bool(bool v)
{
    return v ? "true" : "false";
}

struct KeyHandler
{
    std::function<void(ScenarioConfig&, const std::string&, const std::string&)> set;
    std::function<std::string(const ScenarioConfig&)> get;
};

#define DOUBLE_KEY(name, field)                                                                                        \
    {                                                                                                                  \
        name, KeyHandler                                                                                               \
        {                                                                                                              \
            [](ScenarioConfig& c, const std::string& k, const std::string& v) { c.field = ToDouble(k, v); },           \
                [](const ScenarioConfig& c) { return Num(c.field); }                                                   \
        }                                                                                                              \
    }

#define INT_KEY(name, field, type)                                                                                     \
    {                                                                                                                  \
        name, KeyHandler                                                                                               \
        {                                                                                                              \
            [](ScenarioConfig& c, const std::string& k, const std::string& v) {                                        \
                c.field = static_cast<type>(ToInt(k, v));                                                              \
            },                                                                                                         \
                [](const ScenarioConfig& c) { return std::to_string(c.field); }                                        \
        }                                                                                                              \
    }

#define BOOL_KEY(name, field)                                                                                          \
    {                                                                                                                  \
        name, KeyHandler                                                                                               \
        {                                                                                                              \
            [](ScenarioConfig& c, const std::string& k, const std::string& v) { c.field = ToBool(k, v); },             \
                [](const ScenarioConfig& c) { return Bool(c.field); }                                                  \
        }                                                                                                              \
    }

const std::map<std::string, KeyHandler>& Handlers()
{
    static const std::map<std::string, KeyHandler> handlers = {
        INT_KEY("node_count", nodeCount, int),
        {"area_side",
         {[](ScenarioConfig& c, const std::string& k, const std::string& v) { c.areaSide = ToDouble(k, v); },
          [](const ScenarioConfig& c) { return Num(c.AreaSide()); }}},
        DOUBLE_KEY("tx_range", txRange),
        DOUBLE_KEY("traffic_period", trafficPeriod),
        DOUBLE_KEY("slot_seconds", slotSeconds),
        DOUBLE_KEY("sim_duration", simDuration),
        {"seed",
         {[](ScenarioConfig& c, const std::string& k, const std::string& v) { c.seed = ToUnsigned(k, v); },
          [](const ScenarioConfig& c) { return std::to_string(c.seed); }}},
        BOOL_KEY("defense_enabled", defenseEnabled),
        {"attack_kind",
         {[](ScenarioConfig& c, const std::string& k, const std::string& v) {
              try
              {
                  c.attackKind = attacks::ParseAttackKind(v);
              }
              catch (const ConfigError&)
              {
                  Bad(k, v, "expected none|sinkhole|blackhole|hello_flood|ant_flood");
              }
          },
          [](const ScenarioConfig& c) { return attacks::ToString(c.attackKind); }}},
        {"attackers",
         {[](ScenarioConfig& c, const std::string& k, const std::string& v) {
              c.attackers.clear();
              for (const auto& part : Split(v, ','))
              {
                  c.attackers.push_back(static_cast<NodeId>(ToInt(k, part)));
              }
          },
          [](const ScenarioConfig& c) {
              std::string out;
              for (std::size_t i = 0; i < c.attackers.size(); ++i)
              {
                  out += (i ? "," : "") + std::to_string(c.attackers[i]);
              }
              return out;
          }}},
        {"attacker_count",
         {[](ScenarioConfig& c, const std::string& k, const std::string& v) {
              c.attackerCount = static_cast<int>(ToInt(k, v));
          },
          [](const ScenarioConfig& c) {
              return c.attackerCount ? std::to_string(*c.attackerCount) : std::string();
          }}},
        {"attacker_fraction",
         {[](ScenarioConfig& c, const std::string& k, const std::string& v) { c.attackerFraction = ToDouble(k, v); },
          [](const ScenarioConfig& c) { return c.attackerFraction ? Num(*c.attackerFraction) : std::string(); }}},
        {"attack_start",
         {[](ScenarioConfig& c, const std::string& k, const std::string& v) { c.attackStart = ToDouble(k, v); },
          [](const ScenarioConfig& c) { return Num(c.AttackStart()); }}},
        DOUBLE_KEY("hello_interval", helloInterval),
        DOUBLE_KEY("ant_flood_interval", antFloodInterval),
        INT_KEY("mc_samples", mcSamples, std::size_t),
        DOUBLE_KEY("sigma_sq", sigmaSq),
        DOUBLE_KEY("alpha", trust.alpha),
        DOUBLE_KEY("k", trust.k),
        DOUBLE_KEY("tau_max", trust.tauMax),
        DOUBLE_KEY("penalty_ewma", trust.alphaEwma),
        DOUBLE_KEY("gamma", detector.gamma),
        INT_KEY("warmup_slots", detector.warmupSlots, int),
        DOUBLE_KEY("root_rank", routing.rootRank),
        DOUBLE_KEY("hysteresis", routing.hysteresis),
        DOUBLE_KEY("trust_bypass_tau", routing.trustBypassTau),
        DOUBLE_KEY("neighbor_timeout", routing.neighborTimeout),
        INT_KEY("refractory_slots", ants.refractorySlots, int),
        BOOL_KEY("refractory_enabled", ants.refractoryEnabled),
        DOUBLE_KEY("ant_trigger_tau", ants.triggerTau),
        INT_KEY("dedup_window_slots", ants.dedupWindowSlots, int),
        INT_KEY("ant_ttl_slots", ants.ttlSlots, int),
        INT_KEY("theta_b", filter.thetaB, int),
        INT_KEY("theta_n", filter.thetaN, int),
        INT_KEY("admin_delay_slots", adminDelaySlots, int),
        DOUBLE_KEY("tx_scale", scales.tx),
        DOUBLE_KEY("fwd_ratio_scale", scales.fwdRatio),
        DOUBLE_KEY("rank_scale", scales.rank),
        BOOL_KEY("rank_scale_auto", rankScaleAuto),
        DOUBLE_KEY("detect_start", detectStart),
        BOOL_KEY("tx_counts_beacons", txCountsBeacons),
        DOUBLE_KEY("beacon_min", beaconMin),
        DOUBLE_KEY("beacon_max", beaconMax),
        DOUBLE_KEY("service_time", mac.serviceTime),
        DOUBLE_KEY("backoff_min", mac.backoffMin),
        DOUBLE_KEY("backoff_max", mac.backoffMax),
        INT_KEY("max_attempts", mac.maxAttempts, int),
        INT_KEY("queue_capacity", mac.queueCapacity, std::size_t),
        INT_KEY("max_hops", mac.maxHops, int),
        {"link_p",
         {[](ScenarioConfig& c, const std::string& k, const std::string& v) {
              if (v == "distance")
              {
                  c.linkProbability.reset();
              }
              else
              {
                  c.linkProbability = ToDouble(k, v);
              }
          },
          [](const ScenarioConfig& c) { return c.linkProbability ? Num(*c.linkProbability) : "distance"; }}},
        {"positions",
         {[](ScenarioConfig& c, const std::string& k, const std::string& v) {
              c.positions.clear();
              for (const auto& pair : Split(v, ';'))
              {
                  auto xy = Split(pair, ',');
                  if (xy.size() != 2)
                  {
                      Bad(k, pair, "expected x,y");
                  }
                  c.positions.push_back({ToDouble(k, xy[0]), ToDouble(k, xy[1])});
              }
          },
          [](const ScenarioConfig& c) {
              std::string out;
              for (std::size_t i = 0; i < c.positions.size(); ++i)
              {
                  out += (i ? ";" : "") + Num(c.positions[i].x) + "," + Num(c.positions[i].y);
              }
              return out;
          }}},
        INT_KEY("root", root, NodeId),
        DOUBLE_KEY("measure_start", measureStart),
        BOOL_KEY("log_trust", logTrust),
        {"force_distrust",
         {[](ScenarioConfig& c, const std::string& k, const std::string& v) {
              // observer:target@time;...
              c.forceDistrust.clear();
              for (const auto& item : Split(v, ';'))
              {
                  const auto colon = item.find(':');
                  const auto at = item.find('@');
                  if (colon == std::string::npos || at == std::string::npos || at < colon)
                  {
                      Bad(k, item, "expected observer:target@time");
                  }
                  ForceDistrust d;
                  d.observer = static_cast<NodeId>(ToInt(k, Trim(item.substr(0, colon))));
                  d.target = static_cast<NodeId>(ToInt(k, Trim(item.substr(colon + 1, at - colon - 1))));
                  d.time = ToDouble(k, Trim(item.substr(at + 1)));
                  c.forceDistrust.push_back(d);
              }
          },
          [](const ScenarioConfig& c) {
              std::string out;
              for (std::size_t i = 0; i < c.forceDistrust.size(); ++i)
              {
                  const auto& d = c.forceDistrust[i];
                  out += (i ? ";" : "") + std::to_string(d.observer) + ":" + std::to_string(d.target) + "@" +
                         Num(d.time);
              }
              return out;
          }}},
        {"reapprove",
         {[](ScenarioConfig& c, const std::string& k, const std::string& v) {
              // node@time;...
              c.reapprovals.clear();
              for (const auto& item : Split(v, ';'))
              {
                  const auto at = item.find('@');
                  if (at == std::string::npos)
                  {
                      Bad(k, item, "expected node@time");
                  }
                  Reapproval r;
                  r.node = static_cast<NodeId>(ToInt(k, Trim(item.substr(0, at))));
                  r.time = ToDouble(k, Trim(item.substr(at + 1)));
                  c.reapprovals.push_back(r);
              }
          },
          [](const ScenarioConfig& c) {
              std::string out;
              for (std::size_t i = 0; i < c.reapprovals.size(); ++i)
              {
                  out += (i ? ";" : "") + std::to_string(c.reapprovals[i].node) + "@" + Num(c.reapprovals[i].time);
              }
              return out;
          }}},
    };
    return handlers;
}

#undef DOUBLE_KEY
#undef INT_KEY
#undef BOOL_KEY

void Require(bool ok, const std::string& field, const std::string& what)
{
    if (!ok)
    {
        throw ConfigError(field + ": " + what);
    }
}

} // namespace

double ScenarioConfig::AreaSide() const
{
    if (areaSide)
    {
        return *areaSide;
    }
    if (nodeCount <= 25)
    {
        return 100.0;
    }
    return nodeCount <= 50 ? 200.0 : 400.0;
}

double ScenarioConfig::AttackStart() const
{
    return attackStart ? *attackStart : attacks::DefaultStartTime(nodeCount);
}

int ScenarioConfig::ResolvedAttackerCount() const
{
    if (attackKind == attacks::AttackKind::None)
    {
        return 0;
    }
    if (!attackers.empty())
    {
        return static_cast<int>(attackers.size());
    }
    if (attackerCount)
    {
        return *attackerCount;
    }
    if (attackerFraction)
    {
        return attacks::AttackerCountForFraction(*attackerFraction, nodeCount);
    }
    return 1;
}

void ScenarioConfig::Validate() const
{
    Require(nodeCount >= 2, "node_count", "must be >= 2 (got " + std::to_string(nodeCount) + ")");
    Require(AreaSide() > 0.0 && std::isfinite(AreaSide()), "area_side", "must be > 0");
    Require(txRange > 0.0 && std::isfinite(txRange), "tx_range", "must be > 0 (got " + Num(txRange) + ")");
    Require(trafficPeriod > 0.0, "traffic_period", "must be > 0");
    Require(slotSeconds > 0.0, "slot_seconds", "must be > 0");
    Require(simDuration > 0.0, "sim_duration", "must be > 0");
    Require(helloInterval > 0.0, "hello_interval", "must be > 0");
    Require(antFloodInterval > 0.0, "ant_flood_interval", "must be > 0");
    Require(mcSamples >= 1, "mc_samples", "must be >= 1");
    Require(sigmaSq > 0.0, "sigma_sq", "must be > 0");
    Require(trust.alpha > 0.0 && trust.alpha < 1.0, "alpha", "must lie in (0, 1) (got " + Num(trust.alpha) + ")");
    Require(trust.k > 0.0, "k", "must be > 0");
    Require(trust.tauMax > 1.0, "tau_max", "must be > 1");
    Require(trust.alphaEwma >= 0.0 && trust.alphaEwma < 1.0, "penalty_ewma", "must lie in [0, 1)");
    Require(detector.gamma > 0.0 && detector.gamma <= 1.0, "gamma", "must lie in (0, 1]");
    Require(detector.warmupSlots >= 0, "warmup_slots", "must be >= 0");
    Require(routing.hysteresis >= 0.0, "hysteresis", "must be >= 0");
    Require(routing.neighborTimeout > 0.0, "neighbor_timeout", "must be > 0");
    Require(ants.refractorySlots >= 0, "refractory_slots", "must be >= 0");
    Require(ants.triggerTau >= 1.0, "ant_trigger_tau", "must be >= 1");
    Require(ants.dedupWindowSlots >= 0, "dedup_window_slots", "must be >= 0");
    Require(ants.ttlSlots >= 0, "ant_ttl_slots", "must be >= 0");
    Require(filter.thetaB >= 1, "theta_b", "must be >= 1");
    Require(filter.thetaN >= 1, "theta_n", "must be >= 1");
    Require(adminDelaySlots >= 0, "admin_delay_slots", "must be >= 0");
    Require(detectStart >= 0.0, "detect_start", "must be >= 0");
    Require(scales.tx > 0.0, "tx_scale", "must be > 0");
    Require(scales.fwdRatio > 0.0, "fwd_ratio_scale", "must be > 0");
    Require(scales.rank > 0.0, "rank_scale", "must be > 0");
    Require(beaconMin > 0.0 && beaconMax >= beaconMin, "beacon_min", "need 0 < beacon_min <= beacon_max");
    Require(mac.serviceTime > 0.0, "service_time", "must be > 0");
    Require(mac.backoffMin > 0.0 && mac.backoffMax >= mac.backoffMin, "backoff_min",
            "need 0 < backoff_min <= backoff_max");
    Require(mac.maxAttempts >= 1, "max_attempts", "must be >= 1");
    Require(mac.queueCapacity >= 1, "queue_capacity", "must be >= 1");
    Require(mac.maxHops >= 1, "max_hops", "must be >= 1");
    if (linkProbability)
    {
        Require(*linkProbability > 0.0 && *linkProbability <= 1.0, "link_p", "must lie in (0, 1]");
    }
    Require(positions.empty() || static_cast<int>(positions.size()) == nodeCount, "positions",
            "needs exactly node_count entries (got " + std::to_string(positions.size()) + ")");
    Require(root >= 0 && root < nodeCount, "root", "must be a node id");
    Require(measureStart >= 0.0 && measureStart < simDuration, "measure_start", "must lie in [0, sim_duration)");
    if (attackerFraction)
    {
        Require(*attackerFraction > 0.0 && *attackerFraction < 1.0, "attacker_fraction", "must lie in (0, 1)");
    }
    if (attackKind != attacks::AttackKind::None)
    {
        const int count = ResolvedAttackerCount();
        Require(count >= 1 && count < nodeCount, "attacker_count", "must lie in [1, node_count)");
        Require(AttackStart() >= 0.0, "attack_start", "must be >= 0");
    }
    for (NodeId a : attackers)
    {
        Require(a >= 0 && a < nodeCount && a != root, "attackers",
                "ids must be non-root nodes (got " + std::to_string(a) + ")");
    }
    for (const auto& d : forceDistrust)
    {
        Require(d.observer >= 0 && d.observer < nodeCount && d.target >= 0 && d.target < nodeCount &&
                    d.observer != d.target,
                "force_distrust", "observer and target must be distinct node ids");
    }
    for (const auto& r : reapprovals)
    {
        Require(r.node >= 0 && r.node < nodeCount, "reapprove", "node must be a node id");
    }
}

KeyValues ParseKeyValues(const std::string& text)
{
    KeyValues values;
    std::istringstream in(text);
    std::string line;
    int lineNo = 0;
    while (std::getline(in, line))
    {
        ++lineNo;
        const auto hash = line.find('#');
        if (hash != std::string::npos)
        {
            line = line.substr(0, hash);
        }
        line = Trim(line);
        if (line.empty())
        {
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos)
        {
            throw ConfigError("line " + std::to_string(lineNo) + ": expected key = value");
        }
        auto key = Trim(line.substr(0, eq));
        if (key.empty())
        {
            throw ConfigError("line " + std::to_string(lineNo) + ": empty key");
        }
        values.emplace_back(key, Trim(line.substr(eq + 1)));
    }
    return values;
}

KeyValues LoadKeyValueFile(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
    {
        throw ConfigError("cannot read config file " + path);
    }
    std::stringstream buf;
    buf << in.rdbuf();
    try
    {
        return ParseKeyValues(buf.str());
    }
    catch (const ConfigError& e)
    {
        throw ConfigError(path + ": " + e.what());
    }
}

std::pair<std::string, std::string> ParseOverride(const std::string& text)
{
    const auto eq = text.find('=');
    if (eq == std::string::npos || Trim(text.substr(0, eq)).empty())
    {
        throw ConfigError("override '" + text + "': expected key=value");
    }
    return {Trim(text.substr(0, eq)), Trim(text.substr(eq + 1))};
}

void ApplyKeyValue(ScenarioConfig& config, const std::string& key, const std::string& value)
{
    const auto& handlers = Handlers();
    auto it = handlers.find(key);
    if (it == handlers.end())
    {
        throw ConfigError("unknown key '" + key + "'");
    }
    it->second.set(config, key, value);
}

void ApplyKeyValues(ScenarioConfig& config, const KeyValues& values)
{
    for (const auto& [key, value] : values)
    {
        ApplyKeyValue(config, key, value);
    }
}

std::vector<std::string> KnownKeys()
{
    std::vector<std::string> keys;
    for (const auto& entry : Handlers())
    {
        keys.push_back(entry.first);
    }
    return keys;
}

ScenarioConfig BuildConfig(const std::optional<std::string>& path, const KeyValues& overrides)
{
    ScenarioConfig config;
    if (path)
    {
        ApplyKeyValues(config, LoadKeyValueFile(*path));
    }
    ApplyKeyValues(config, overrides);
    config.Validate();
    return config;
}

std::string RenderConfig(const ScenarioConfig& config)
{
    std::string out;
    for (const auto& [key, handler] : Handlers())
    {
        const auto value = handler.get(config);
        if (value.empty())
        {
            continue;
        }
        out += key + " = " + value + "\n";
    }
    return out;
}

} // namespace antilizer
