#pragma once

#include <compare>
#include <cstdint>
#include <string>

namespace paxad {

// Simulated time; real time never enters the core.
using SimTime = std::uint64_t;

// Leadership generation used to fence packets from deposed proposers.
using Epoch = std::uint64_t;

struct NodeId {
  std::uint32_t value = 0;

  constexpr auto operator<=>(const NodeId&) const = default;
};

inline std::string to_string(NodeId id) { return std::to_string(id.value); }

}  // namespace paxad
