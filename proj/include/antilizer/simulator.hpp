#pragma once

// Discrete-event network simulation: CSMA-style MAC with unicast retries,
// periodic beacons and data, per-node overhearing and trust scoring at slot
// boundaries, ANT forwarding and the base-station filter at the root.

#include "antilizer/config.hpp"
#include "antilizer/runlog.hpp"

#include <cstdint>

namespace antilizer::sim {

// Independent seed for one purpose (stream) of one node, derived from the
// scenario seed. Streams are fixed per purpose so runs that differ only in
// defense settings share their randomness.
std::uint64_t DeriveSeed(std::uint64_t seed, std::uint32_t stream, std::uint32_t node);

enum SeedStream : std::uint32_t
{
    kStreamFeatureMap = 1,
    kStreamApp = 2,
    kStreamBeacon = 3,
    kStreamMac = 4,
    kStreamAttackers = 5,
};

// Runs one scenario to completion. Throws ConfigError on invalid input.
runlog::RunLog Simulate(const ScenarioConfig& config);

} // namespace antilizer::sim
