#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace ovr {

struct PropertyCheck {
  std::string name;
  bool pass = false;
  double observed = 0.0;
  double threshold = 0.0;
  std::string note;
};

struct PropertyReport {
  std::vector<PropertyCheck> checks;
  bool all_pass() const {
    for (const PropertyCheck& c : checks)
      if (!c.pass) return false;
    return true;
  }
};

/// Fast end-to-end run of the library's property families: simplex oracle
/// optimality probes, tree-vs-scan agreement and frequency law, closed-form
/// sampler distributions, estimate unbiasedness, theorem ceilings, the
/// sequence-sum constant, the hindsight decomposition on converging episodes,
/// variance-reduction dominance on a heavy-tailed stationary adversary, and
/// bitwise repeatability.
PropertyReport run_property_suite(std::uint64_t master);

}  // namespace ovr
