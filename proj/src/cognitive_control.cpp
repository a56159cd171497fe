#include "ace/cognitive_control.hpp"

#include <algorithm>

namespace ace {

void FrustrationState::update(bool failure, int window_size, double threshold) {
  window.push_back(failure);
  while (static_cast<int>(window.size()) > window_size) window.pop_front();
  if (window.empty()) {
    failure_ratio = 0;
  } else {
    int failures = static_cast<int>(std::count(window.begin(), window.end(), true));
    failure_ratio = static_cast<double>(failures) / window.size();
  }
  frustrated = static_cast<int>(window.size()) == window_size &&
               failure_ratio >= threshold;
}

Json FrustrationState::to_json() const {
  Json j;
  Json w = Json::array();
  for (bool b : window) w.push_back(b);
  j["window"] = w;
  j["failure_ratio"] = failure_ratio;
  j["frustrated"] = frustrated;
  return j;
}

FrustrationState FrustrationState::from_json(const Json& j) {
  FrustrationState s;
  for (const auto& b : j.at("window")) s.window.push_back(b.get<bool>());
  s.failure_ratio = j.at("failure_ratio").get<double>();
  s.frustrated = j.at("frustrated").get<bool>();
  return s;
}

double task_score(const Json& task, double max_cost, const Params& params) {
  double cost = task.contains("cost") ? task["cost"].value("energy", 0.0) : 0.0;
  double normalized = max_cost > 0 ? cost / max_cost : 0.0;
  return params.weight_urgency * task.value("urgency", 0.0) +
         params.weight_importance * task.value("importance", 0.0) -
         params.weight_cost * normalized;
}

std::optional<std::string> select_task(const std::vector<Json>& candidates,
                                       const Params& params,
                                       const std::optional<std::string>& excluded) {
  double max_cost = 0;
  for (const auto& t : candidates) {
    if (excluded && t.value("id", "") == *excluded) continue;
    double c = t.contains("cost") ? t["cost"].value("energy", 0.0) : 0.0;
    max_cost = std::max(max_cost, c);
  }
  std::optional<std::string> best;
  double best_score = 0;
  for (const auto& t : candidates) {
    std::string id = t.value("id", "");
    if (excluded && id == *excluded) continue;
    double s = task_score(t, max_cost, params);
    if (!best || s > best_score || (s == best_score && id < *best)) {
      best = id;
      best_score = s;
    }
  }
  return best;
}

SwitchDecision should_switch(const Json& current_task,
                             const std::optional<Json>& outcome,
                             const std::optional<Json>& world_event,
                             const FrustrationState& frustration, int retries,
                             const std::vector<Json>& candidates,
                             const Params& params) {
  // Moral conflicts are never resolved here; tag-driven escalation only.
  for (const auto& c : candidates) {
    if (c.contains("tags")) {
      const Json& tags = c["tags"];
      bool moral = (tags.is_array() &&
                    std::find(tags.begin(), tags.end(), Json("prevents-suffering")) !=
                        tags.end()) ||
                   (tags.is_object() && tags.value("prevents-suffering", false));
      if (moral && candidates.size() >= 2) return {SwitchDecision::Escalate, "dilemma"};
    }
  }
  if (outcome) {
    std::string status = outcome->value("status", "");
    if (status == "success") {
      auto next = select_task(candidates, params);
      return {SwitchDecision::Switch, next.value_or("")};
    }
    if (status == "failure") {
      if (frustration.frustrated) {
        return {SwitchDecision::Escalate, "frustration"};
      }
      if (retries < params.retry_cap) return {SwitchDecision::Retry, ""};
      auto next = select_task(candidates, params);
      return {SwitchDecision::Switch, next.value_or("")};
    }
  }
  if (world_event) {
    double max_cost = 0;
    for (const auto& t : candidates) {
      max_cost = std::max(max_cost,
                          t.contains("cost") ? t["cost"].value("energy", 0.0) : 0.0);
    }
    double current = task_score(current_task, max_cost, params);
    for (const auto& t : candidates) {
      if (task_score(t, max_cost, params) > current) {
        return {SwitchDecision::Switch, t.value("id", "")};
      }
    }
  }
  return {SwitchDecision::Continue, ""};
}

FailureAction handle_failure(const Json& outcome, const Json& roadmap,
                             const FrustrationState& frustration, int retries,
                             const std::set<std::string>& inserted,
                             const Params& params) {
  std::string task = outcome.value("task", "");
  std::string reason = outcome.value("reason", "");
  for (const auto& risk : roadmap.value("risks", Json::array())) {
    const Json& cond = risk.value("condition", Json::object());
    if (cond.value("task", "") != task) continue;
    if (cond.value("failure_reason", "") != reason) continue;
    for (const auto& cid : risk.value("contingency", Json::array())) {
      if (!inserted.count(cid.get<std::string>())) {
        return {FailureAction::InsertPrerequisite, cid.get<std::string>()};
      }
    }
  }
  if (frustration.frustrated) return {FailureAction::Escalate, ""};
  if (retries < params.retry_cap) return {FailureAction::Retry, ""};
  return {FailureAction::SwitchTask, ""};
}

Json damp(const std::vector<Json>& options, CognitionEngine& engine, long seed) {
  if (options.size() < 2) {
    throw ProtocolError("cognitive damping requires at least two options");
  }
  CognitionRequest req;
  req.kind = RequestKind::Deliberate;
  Json jo = Json::array();
  for (const auto& o : options) jo.push_back(o);
  req.context["options"] = jo;
  req.seed = seed;
  return engine.evaluate(req).payload;
}

std::vector<Json> CognitiveControlLayer::eligible_tasks() const {
  std::vector<Json> out;
  if (!roadmap_.contains("tasks")) return out;
  for (const auto& t : roadmap_["tasks"]) {
    std::string id = t.value("id", "");
    if (completed_.count(id) || blocked_.count(id)) continue;
    if (dispatched_ && *dispatched_ == id) continue;
    bool dispatchable = t.value("allocated", false) || inserted_.count(id);
    if (!dispatchable) continue;
    bool ready = true;
    for (const auto& p : t.value("prerequisites", Json::array())) {
      if (!completed_.count(p.get<std::string>())) {
        ready = false;
        break;
      }
    }
    if (ready) out.push_back(t);
  }
  return out;
}

const Json* CognitiveControlLayer::find_task(const std::string& id) const {
  if (!roadmap_.contains("tasks")) return nullptr;
  for (const auto& t : roadmap_["tasks"]) {
    if (t.value("id", "") == id) return &t;
  }
  return nullptr;
}

void CognitiveControlLayer::dispatch(LayerServices& svc, const Json& task) {
  Json payload;
  payload["task"] = task;
  std::string id = task.value("id", "");
  publish(svc, LayerName::TaskProsecution, MessageKind::TaskInstruction, 0.7,
          payload, id);
  dispatched_ = id;
  idle_reported_ = false;
  Json note;
  note["event"] = "switch";
  note["to"] = id;
  publish(svc, LayerName::ExecutiveFunction, MessageKind::Telemetry, 0.3, note);
}

void CognitiveControlLayer::on_tick(LayerServices& svc) {
  if (dispatched_ || !roadmap_.contains("tasks")) return;

  if (retry_next_) {
    if (const Json* t = find_task(*retry_next_)) {
      Json task = *t;
      retry_next_.reset();
      dispatch(svc, task);
      return;
    }
    retry_next_.reset();
  }
  if (forced_next_) {
    if (const Json* t = find_task(*forced_next_)) {
      Json task = *t;
      forced_next_.reset();
      dispatch(svc, task);
      return;
    }
    forced_next_.reset();
  }

  auto candidates = eligible_tasks();
  std::optional<std::string> excluded;
  if (frustration_.frustrated && last_failed_) excluded = last_failed_;

  std::vector<Json> selectable;
  for (const auto& t : candidates) {
    if (excluded && t.value("id", "") == *excluded) continue;
    selectable.push_back(t);
  }
  if (selectable.empty()) {
    if (!idle_reported_) {
      Json note;
      note["event"] = "idle";
      publish(svc, LayerName::ExecutiveFunction, MessageKind::Telemetry, 0.3, note);
      idle_reported_ = true;
    }
    return;
  }

  // Tag-driven moral conflict: never resolved here, escalated upward.
  if (selectable.size() >= 2 && !dilemma_pending_) {
    bool moral = false;
    for (const auto& t : selectable) {
      if (t.contains("tags")) {
        const Json& tags = t["tags"];
        if ((tags.is_array() &&
             std::find(tags.begin(), tags.end(), Json("prevents-suffering")) !=
                 tags.end()) ||
            (tags.is_object() && tags.value("prevents-suffering", false))) {
          moral = true;
        }
      }
    }
    if (moral) {
      Json esc;
      esc["event"] = "moral-dilemma";
      Json opts = Json::array();
      for (const auto& t : selectable) opts.push_back(t);
      esc["options"] = opts;
      publish(svc, LayerName::ExecutiveFunction, MessageKind::DilemmaEscalation,
              0.9, esc, dispatched_.value_or("dilemma"));
      dilemma_pending_ = true;
      return;
    }
  }
  if (dilemma_pending_) return;  // waiting for a MoralJudgment

  // Cognitive damping on real choices: >= 2 mutually non-dominated options.
  if (selectable.size() >= 2) {
    int non_dominated = 0;
    for (const auto& a : selectable) {
      bool dominated = false;
      for (const auto& b : selectable) {
        if (&a == &b) continue;
        if (b.value("urgency", 0.0) >= a.value("urgency", 0.0) &&
            b.value("importance", 0.0) >= a.value("importance", 0.0) &&
            (b.value("urgency", 0.0) > a.value("urgency", 0.0) ||
             b.value("importance", 0.0) > a.value("importance", 0.0))) {
          dominated = true;
          break;
        }
      }
      if (!dominated) ++non_dominated;
    }
    if (non_dominated >= 2) {
      std::vector<Json> options;
      for (const auto& t : selectable) {
        Json o;
        o["id"] = t.value("id", "");
        Json pros = Json::array();
        if (t.value("essential", false)) pros.push_back("essential");
        if (t.value("urgency", 0.0) > 0.5) pros.push_back("urgent");
        if (t.value("importance", 0.0) > 0.5) pros.push_back("important");
        Json cons = Json::array();
        if (t.contains("cost") && t["cost"].value("energy", 0.0) > 10) {
          cons.push_back("costly");
        }
        o["pros"] = pros;
        o["cons"] = cons;
        options.push_back(o);
      }
      Json deliberation = damp(options, svc.engine, params_.seed);
      Json note;
      note["event"] = "deliberation";
      note["record"] = deliberation["record"];
      note["chosen"] = deliberation["chosen"];
      publish(svc, LayerName::ExecutiveFunction, MessageKind::Telemetry, 0.3, note);
    }
  }

  auto pick = select_task(candidates, params_, excluded);
  if (!pick) return;
  if (const Json* t = find_task(*pick)) dispatch(svc, *t);
}

void CognitiveControlLayer::on_outcome(const Envelope& envelope,
                                       LayerServices& svc) {
  std::string task = envelope.payload.value("task", "");
  if (!dispatched_ || *dispatched_ != task) {
    Json note;
    note["event"] = "protocol-error";
    note["reason"] = "outcome for task that is not dispatched";
    note["task"] = task;
    publish(svc, LayerName::ExecutiveFunction, MessageKind::Telemetry, 0.6, note);
    return;
  }
  dispatched_.reset();
  bool success = envelope.payload.value("status", "") == "success";
  frustration_.update(!success, params_.frustration_window,
                      params_.frustration_threshold);
  if (success) {
    completed_.insert(task);
    retries_.erase(task);
    escalated_.erase(task);
    return;
  }

  last_failed_ = task;
  FailureAction action =
      handle_failure(envelope.payload, roadmap_, frustration_, retries_[task],
                     inserted_, params_);
  switch (action.kind) {
    case FailureAction::InsertPrerequisite: {
      // Patch the failed task's prerequisites in the held roadmap copy and
      // run the contingency next.
      inserted_.insert(action.contingency);
      for (auto& t : roadmap_["tasks"]) {
        if (t.value("id", "") == task) {
          t["prerequisites"].push_back(action.contingency);
        }
      }
      Json note;
      note["event"] = "insert-prerequisite";
      note["task"] = task;
      note["prerequisite"] = action.contingency;
      publish(svc, LayerName::ExecutiveFunction, MessageKind::Telemetry, 0.3, note);
      break;
    }
    case FailureAction::Retry:
      retries_[task] += 1;
      retry_next_ = task;
      break;
    case FailureAction::Escalate: {
      if (!escalated_.count(task)) {
        escalated_.insert(task);
        Json esc;
        esc["event"] = "frustration";
        esc["task"] = task;
        esc["failure_ratio"] = frustration_.failure_ratio;
        esc["reason"] = envelope.payload.value("reason", "");
        publish(svc, LayerName::ExecutiveFunction, MessageKind::Telemetry,
                params_.salience_failure, esc, task);
      }
      break;
    }
    case FailureAction::SwitchTask:
      break;  // next selection happens on_tick
  }
}

void CognitiveControlLayer::handle(const Envelope& envelope, LayerServices& svc) {
  switch (envelope.kind) {
    case MessageKind::Roadmap: {
      std::int64_t version = envelope.payload.value("version", std::int64_t{0});
      if (version <= roadmap_version_) break;
      roadmap_ = envelope.payload;
      roadmap_version_ = version;
      dilemma_pending_ = false;
      idle_reported_ = false;
      break;
    }
    case MessageKind::OutcomeSignal:
      on_outcome(envelope, svc);
      break;
    case MessageKind::MoralJudgment: {
      dilemma_pending_ = false;
      if (envelope.payload.contains("preferred") &&
          envelope.payload["preferred"].is_string()) {
        forced_next_ = envelope.payload["preferred"].get<std::string>();
      } else if (envelope.payload.contains("option_verdicts")) {
        // Both options denied: block them and wait for a replan.
        for (auto it = envelope.payload["option_verdicts"].begin();
             it != envelope.payload["option_verdicts"].end(); ++it) {
          blocked_.insert(it.key());
        }
      }
      break;
    }
    case MessageKind::WorldEvent:
      // Re-selection happens every tick; a world event only matters if it
      // shipped a new candidate, which arrives via a fresh roadmap.
      break;
    default:
      break;
  }
}

Json CognitiveControlLayer::snapshot() const {
  Json j;
  j["roadmap"] = roadmap_;
  j["roadmap_version"] = roadmap_version_;
  auto set_to_json = [](const std::set<std::string>& s) {
    Json a = Json::array();
    for (const auto& v : s) a.push_back(v);
    return a;
  };
  j["completed"] = set_to_json(completed_);
  j["inserted"] = set_to_json(inserted_);
  j["blocked"] = set_to_json(blocked_);
  j["escalated"] = set_to_json(escalated_);
  Json r = Json::object();
  for (const auto& [k, v] : retries_) r[k] = v;
  j["retries"] = r;
  j["dispatched"] = dispatched_ ? Json(*dispatched_) : Json();
  j["retry_next"] = retry_next_ ? Json(*retry_next_) : Json();
  j["forced_next"] = forced_next_ ? Json(*forced_next_) : Json();
  j["last_failed"] = last_failed_ ? Json(*last_failed_) : Json();
  j["frustration"] = frustration_.to_json();
  j["dilemma_pending"] = dilemma_pending_;
  j["idle_reported"] = idle_reported_;
  return j;
}

void CognitiveControlLayer::restore(const Json& snap) {
  roadmap_ = snap.at("roadmap");
  roadmap_version_ = snap.at("roadmap_version").get<std::int64_t>();
  auto set_from = [](const Json& a) {
    std::set<std::string> s;
    for (const auto& v : a) s.insert(v.get<std::string>());
    return s;
  };
  completed_ = set_from(snap.at("completed"));
  inserted_ = set_from(snap.at("inserted"));
  blocked_ = set_from(snap.at("blocked"));
  escalated_ = set_from(snap.value("escalated", Json::array()));
  retries_.clear();
  for (auto it = snap.at("retries").begin(); it != snap.at("retries").end(); ++it) {
    retries_[it.key()] = it.value().get<int>();
  }
  auto opt_from = [](const Json& v) -> std::optional<std::string> {
    if (v.is_null()) return std::nullopt;
    return v.get<std::string>();
  };
  dispatched_ = opt_from(snap.at("dispatched"));
  retry_next_ = opt_from(snap.at("retry_next"));
  forced_next_ = opt_from(snap.at("forced_next"));
  last_failed_ = opt_from(snap.at("last_failed"));
  frustration_ = FrustrationState::from_json(snap.at("frustration"));
  dilemma_pending_ = snap.at("dilemma_pending").get<bool>();
  idle_reported_ = snap.at("idle_reported").get<bool>();
}

}  // namespace ace
