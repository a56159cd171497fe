#pragma once

#include <stdexcept>

#include "ace/json.hpp"

namespace ace {

// Run-wide tunables. Defaults are the documented policy values; all are
// overridable from the CLI within the stated ranges.
struct Params {
  // Per-layer northbound forward thresholds, indexed by rank-1.
  double forward_threshold[6] = {0.5, 0.5, 0.5, 0.5, 0.5, 0.5};

  // Task selection score weights.
  double weight_urgency = 0.4;
  double weight_importance = 0.4;
  double weight_cost = 0.2;

  int frustration_window = 5;
  double frustration_threshold = 0.6;
  int retry_cap = 2;

  // Capability confidence update rule.
  double capability_alpha = 0.2;
  double capability_beta = 0.3;
  double capability_floor = 0.05;
  double capability_prior = 0.5;
  double feasibility_threshold = 0.3;

  double salience_success = 0.4;
  double salience_failure = 0.8;

  // Aspirational escalation policy.
  int halt_denials = 3;
  int halt_window_ticks = 10;
  bool auto_reboot = false;

  long seed = 0;

  Json to_json() const;
  static Params from_json(const Json& j);
  void validate() const;  // throws std::invalid_argument on range violations
};

}  // namespace ace
