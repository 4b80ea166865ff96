#pragma once

// Scenario configuration: a flat "key = value" text format with '#'
// comments. Precedence is built-in defaults < config file < command-line
// overrides; unknown keys are rejected.

#include "antilizer/ants.hpp"
#include "antilizer/attacks.hpp"
#include "antilizer/basestation.hpp"
#include "antilizer/kernel_features.hpp"
#include "antilizer/routing.hpp"
#include "antilizer/trust.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace antilizer {

struct Position
{
    double x = 0.0;
    double y = 0.0;
};

// Scenario directive: at `time`, observer treats target as fully distrusted
// for its next slot evaluation (models a trust-induced switch on demand).
struct ForceDistrust
{
    NodeId observer = kNoNode;
    NodeId target = kNoNode;
    double time = 0.0;
};

// Scenario directive: base-station re-approval of a blacklisted node.
struct Reapproval
{
    NodeId node = kNoNode;
    double time = 0.0;
};

struct MacParams
{
    double serviceTime = 0.008;
    double backoffMin = 0.001;
    double backoffMax = 0.016;
    int maxAttempts = 5;
    std::size_t queueCapacity = 64;
    int maxHops = 64;
};

struct ScenarioConfig
{
    int nodeCount = 25;
    std::optional<double> areaSide; // 100 / 200 / 400 m by node count when unset
    double txRange = 50.0;
    double trafficPeriod = 4.0;
    double slotSeconds = 20.0;
    double simDuration = 14400.0;
    std::uint64_t seed = 1;
    bool defenseEnabled = true;

    attacks::AttackKind attackKind = attacks::AttackKind::None;
    std::vector<NodeId> attackers;         // explicit ids; empty = drawn from the seed
    std::optional<int> attackerCount;      // default 1 when an attack is configured
    std::optional<double> attackerFraction;
    std::optional<double> attackStart;     // 1200 s / 2400 s by node count when unset
    double helloInterval = 0.1;
    double antFloodInterval = 2.0;

    std::size_t mcSamples = 200;
    double sigmaSq = 0.35;
    trust::TrustParams trust;
    trust::DetectorParams detector;
    routing::RoutingParams routing;
    ants::AntParams ants;
    basestation::FilterParams filter;
    int adminDelaySlots = 1;

    kernel::NormalizationScales scales;
    // Rank scale = largest rank the neighbour advertised during its warm-up
    // slots; scales.rank is the fallback when none was heard.
    bool rankScaleAuto = true;
    // Neighbour scoring starts with the first slot that begins at or after
    // this time, so warm-up sees converged routes rather than boot transients.
    double detectStart = 300.0;
    bool txCountsBeacons = false;

    double beaconMin = 0.512;
    double beaconMax = 1.024;
    MacParams mac;
    std::optional<double> linkProbability; // constant override of the distance model

    std::vector<Position> positions; // custom topology when non-empty
    NodeId root = 0;
    double measureStart = 600.0;
    bool logTrust = true;

    std::vector<ForceDistrust> forceDistrust;
    std::vector<Reapproval> reapprovals;

    double AreaSide() const;
    double AttackStart() const;
    int ResolvedAttackerCount() const;

    // Throws ConfigError naming the offending field.
    void Validate() const;
};

using KeyValues = std::vector<std::pair<std::string, std::string>>;

// Parses "key = value" lines; '#' starts a comment. Throws ConfigError with
// the line number on malformed input.
KeyValues ParseKeyValues(const std::string& text);
KeyValues LoadKeyValueFile(const std::string& path);

// Parses a command-line override of the form "key=value".
std::pair<std::string, std::string> ParseOverride(const std::string& text);

void ApplyKeyValue(ScenarioConfig& config, const std::string& key, const std::string& value);
void ApplyKeyValues(ScenarioConfig& config, const KeyValues& values);

std::vector<std::string> KnownKeys();

// Builds a configuration from defaults, an optional file and overrides, then validates it.
ScenarioConfig BuildConfig(const std::optional<std::string>& path, const KeyValues& overrides);

// Canonical "key = value" rendering of every field (round-trips through ApplyKeyValues).
std::string RenderConfig(const ScenarioConfig& config);

} // namespace antilizer
