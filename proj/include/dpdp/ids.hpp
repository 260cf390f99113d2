#pragma once

#include <compare>
#include <cstdint>
#include <string>

namespace dpdp {

// String identifiers tagged by the kind of entity they name, so a DepotId
// cannot be passed where a ClientId is expected.
template <class Tag>
struct StrongId {
  std::string value;

  StrongId() = default;
  explicit StrongId(std::string v) : value(std::move(v)) {}

  auto operator<=>(const StrongId&) const = default;
  bool operator==(const StrongId&) const = default;
};

using ArticleId = StrongId<struct ArticleTag>;
using DepotId = StrongId<struct DepotTag>;
using ClientId = StrongId<struct ClientTag>;
using ChargerId = StrongId<struct ChargerTag>;
using AgentId = StrongId<struct AgentTag>;

// Requests are numbered; arbitration orders them numerically.
struct RequestId {
  int value = 0;

  auto operator<=>(const RequestId&) const = default;
  bool operator==(const RequestId&) const = default;
};

inline std::string to_string(RequestId id) { return "R" + std::to_string(id.value); }

using Tick = std::int64_t;

}  // namespace dpdp
