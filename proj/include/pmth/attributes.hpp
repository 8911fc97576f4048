#pragma once

// Quantified per-thread attributes. Workload is held in basis points so a
// population can sum to exactly 10000 per component without rounding drift.

#include <array>
#include <map>
#include <string>
#include <string_view>

#include "pmth/errors.hpp"

namespace pmth {

inline constexpr int kWorkloadTotalBp = 10000;

enum class WorkloadComponent { subjective, objective, intended, expected };

inline const char* workload_component_name(WorkloadComponent c) {
  switch (c) {
    case WorkloadComponent::subjective: return "subjective";
    case WorkloadComponent::objective: return "objective";
    case WorkloadComponent::intended: return "intended";
    case WorkloadComponent::expected: return "expected";
  }
  return "?";
}

inline WorkloadComponent workload_component_from_name(std::string_view s) {
  if (s == "subjective") return WorkloadComponent::subjective;
  if (s == "objective") return WorkloadComponent::objective;
  if (s == "intended") return WorkloadComponent::intended;
  if (s == "expected") return WorkloadComponent::expected;
  fail(Errc::parse_error, "unknown workload component '" + std::string(s) + "'");
}

struct WorkloadQuad {
  int subjective = 0;
  int objective = 0;
  int intended = 0;
  int expected = 0;

  int& operator[](WorkloadComponent c) {
    switch (c) {
      case WorkloadComponent::subjective: return subjective;
      case WorkloadComponent::objective: return objective;
      case WorkloadComponent::intended: return intended;
      case WorkloadComponent::expected: return expected;
    }
    return subjective;
  }
  int operator[](WorkloadComponent c) const {
    return const_cast<WorkloadQuad&>(*this)[c];
  }
  friend bool operator==(const WorkloadQuad&, const WorkloadQuad&) = default;
};

// Effectiveness is a judgment per thread, not a share of anything: the four
// versions each live on 0..100 and are not constrained to sum.
struct EffectivenessQuad {
  int internal = 50;
  int external = 50;
  int intended = 50;
  int expected = 50;
  friend bool operator==(const EffectivenessQuad&, const EffectivenessQuad&) = default;
};

// Generic four-version 0..100 attribute value.
struct Quad100 {
  int internal = 50;
  int external = 50;
  int intended = 50;
  int expected = 50;
  friend bool operator==(const Quad100&, const Quad100&) = default;
};

inline const std::array<std::string_view, 9>& known_other_attributes() {
  static const std::array<std::string_view, 9> names = {
      "external-visibility", "rewardingness", "appreciation",
      "rationality",         "avoidability",  "removal-risk",
      "good-order",          "preciousness",  "subthread-structure"};
  return names;
}

inline bool is_known_other_attribute(std::string_view s) {
  for (auto n : known_other_attributes())
    if (n == s) return true;
  return false;
}

struct AttributeSet {
  std::string mission;
  std::string targets;
  int prominence_objective = 3;   // 1..5
  int prominence_subjective = 3;  // 1..5
  WorkloadQuad workload;          // basis points of the population total
  EffectivenessQuad effectiveness;
  int flow = 3;            // 0..5
  int satisfaction = 3;    // 0..5
  int identification = 3;  // 0..5
  int clarity = 3;         // 0..5
  std::map<std::string, Quad100> other;
  friend bool operator==(const AttributeSet&, const AttributeSet&) = default;
};

}  // namespace pmth
