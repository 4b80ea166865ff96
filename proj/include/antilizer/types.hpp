#pragma once

#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>

namespace antilizer {

using NodeId = std::int32_t;
using SlotIndex = std::int64_t;

inline constexpr NodeId kNoNode = -1;
inline constexpr NodeId kBroadcast = -2;

// Thrown for invalid parameters or scenario files; the CLI maps it to exit status 1.
class ConfigError : public std::runtime_error
{
  public:
    using std::runtime_error::runtime_error;
};

} // namespace antilizer
