#include "ace/params.hpp"

namespace ace {

Json Params::to_json() const {
  Json j;
  Json ft = Json::array();
  for (double t : forward_threshold) ft.push_back(t);
  j["forward_threshold"] = ft;
  j["weight_urgency"] = weight_urgency;
  j["weight_importance"] = weight_importance;
  j["weight_cost"] = weight_cost;
  j["frustration_window"] = frustration_window;
  j["frustration_threshold"] = frustration_threshold;
  j["retry_cap"] = retry_cap;
  j["capability_alpha"] = capability_alpha;
  j["capability_beta"] = capability_beta;
  j["capability_floor"] = capability_floor;
  j["capability_prior"] = capability_prior;
  j["feasibility_threshold"] = feasibility_threshold;
  j["salience_success"] = salience_success;
  j["salience_failure"] = salience_failure;
  j["halt_denials"] = halt_denials;
  j["halt_window_ticks"] = halt_window_ticks;
  j["auto_reboot"] = auto_reboot;
  j["seed"] = seed;
  return j;
}

Params Params::from_json(const Json& j) {
  Params p;
  if (j.contains("forward_threshold")) {
    for (int i = 0; i < 6 && i < static_cast<int>(j["forward_threshold"].size()); ++i) {
      p.forward_threshold[i] = j["forward_threshold"][i].get<double>();
    }
  }
  p.weight_urgency = j.value("weight_urgency", p.weight_urgency);
  p.weight_importance = j.value("weight_importance", p.weight_importance);
  p.weight_cost = j.value("weight_cost", p.weight_cost);
  p.frustration_window = j.value("frustration_window", p.frustration_window);
  p.frustration_threshold = j.value("frustration_threshold", p.frustration_threshold);
  p.retry_cap = j.value("retry_cap", p.retry_cap);
  p.capability_alpha = j.value("capability_alpha", p.capability_alpha);
  p.capability_beta = j.value("capability_beta", p.capability_beta);
  p.capability_floor = j.value("capability_floor", p.capability_floor);
  p.capability_prior = j.value("capability_prior", p.capability_prior);
  p.feasibility_threshold = j.value("feasibility_threshold", p.feasibility_threshold);
  p.salience_success = j.value("salience_success", p.salience_success);
  p.salience_failure = j.value("salience_failure", p.salience_failure);
  p.halt_denials = j.value("halt_denials", p.halt_denials);
  p.halt_window_ticks = j.value("halt_window_ticks", p.halt_window_ticks);
  p.auto_reboot = j.value("auto_reboot", p.auto_reboot);
  p.seed = j.value("seed", p.seed);
  p.validate();
  return p;
}

void Params::validate() const {
  auto in01 = [](double v) { return v >= 0.0 && v <= 1.0; };
  for (double t : forward_threshold) {
    if (!in01(t)) throw std::invalid_argument("forward threshold outside [0,1]");
  }
  if (!in01(weight_urgency) || !in01(weight_importance) || !in01(weight_cost)) {
    throw std::invalid_argument("selection weight outside [0,1]");
  }
  if (frustration_window < 1) throw std::invalid_argument("frustration window < 1");
  if (!in01(frustration_threshold)) {
    throw std::invalid_argument("frustration threshold outside [0,1]");
  }
  if (retry_cap < 0) throw std::invalid_argument("retry cap < 0");
  if (!in01(capability_alpha) || !in01(capability_beta) ||
      !in01(capability_floor) || !in01(capability_prior) ||
      !in01(feasibility_threshold) || !in01(salience_success) ||
      !in01(salience_failure)) {
    throw std::invalid_argument("capability/salience parameter outside [0,1]");
  }
  if (halt_denials < 1 || halt_window_ticks < 1) {
    throw std::invalid_argument("halt escalation parameters must be >= 1");
  }
}

}  // namespace ace
