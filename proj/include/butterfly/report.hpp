#pragma once

#include <cstdint>
#include <string>

#include "butterfly/oracle.hpp"

namespace bfly {

/// One estimator run.
struct EstimateReport {
  double estimate = 0.0;
  QueryCounts queries;
  double wall_millis = 0.0;
  std::uint64_t rounds_used = 0;
  std::uint64_t seed = 0;

  bool budget_exhausted = false;
  bool time_limited = false;
  bool not_converged = false;
  /// False when a limit struck before any usable estimate existed.
  bool estimate_available = true;

  /// Comma-separated flag names, empty when none are set.
  std::string flags() const {
    std::string out;
    auto add = [&](bool on, const char* name) {
      if (!on) return;
      if (!out.empty()) out += ',';
      out += name;
    };
    add(budget_exhausted, "budget_exhausted");
    add(time_limited, "time_limited");
    add(not_converged, "not_converged");
    add(!estimate_available, "estimate_unavailable");
    return out;
  }
};

/// Records which limit ended a run.
inline void note_limit(EstimateReport& r, const LimitReached& e) {
  if (dynamic_cast<const TimeLimitReached*>(&e) != nullptr) {
    r.time_limited = true;
  } else {
    r.budget_exhausted = true;
  }
}

}  // namespace bfly
