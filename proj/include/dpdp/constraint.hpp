#pragma once

#include <string_view>

namespace dpdp {

enum class ConstraintKind { distance, obstacles };

/// One weighted objective an agent wants its plan to satisfy.
struct ConstraintSpec {
  ConstraintKind kind = ConstraintKind::distance;
  double coefficient = 1.0;

  bool operator==(const ConstraintSpec&) const = default;
};

constexpr std::string_view to_string(ConstraintKind k) noexcept {
  return k == ConstraintKind::distance ? "distance" : "obstacles";
}

}  // namespace dpdp
