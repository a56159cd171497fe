#include "ace/task_prosecution.hpp"

#include "ace/predicates.hpp"

namespace ace {

bool TaskProsecutionLayer::supported_verb(const std::string& verb) {
  return verb == "move" || verb == "clean_cell" || verb == "grasp" ||
         verb == "release" || verb == "ask_owner" || verb == "speak" ||
         verb == "recharge" || verb == "api_call";
}

bool TaskProsecutionLayer::predicate_holds(const Json& pred) const {
  if (pred.is_null()) return false;
  return eval_predicate(pred, env_.oracle_snapshot());
}

void TaskProsecutionLayer::finish(LayerServices& svc, const std::string& status,
                                  const std::string& reason) {
  Json payload;
  payload["task"] = task_json_.value("id", "");
  payload["status"] = status;
  if (!reason.empty()) payload["reason"] = reason;
  if (task_json_.contains("required_capabilities")) {
    payload["required_capabilities"] = task_json_["required_capabilities"];
  }
  payload["telemetry"] = env_.oracle_snapshot();
  double salience = status == "success" ? params_.salience_success
                                        : params_.salience_failure;
  std::string corr = task_json_.value("id", "");
  task_json_ = Json();
  next_command_ = 0;
  first_rejection_.clear();
  publish(svc, LayerName::CognitiveControl, MessageKind::OutcomeSignal, salience,
          payload, corr);
}

void TaskProsecutionLayer::handle(const Envelope& envelope, LayerServices& svc) {
  if (envelope.kind != MessageKind::TaskInstruction) return;
  if (!task_json_.is_null()) {
    Json note;
    note["event"] = "protocol-error";
    note["reason"] = "task instruction while a task is already executing";
    note["task"] = envelope.payload.value("task", Json::object()).value("id", "");
    publish(svc, LayerName::CognitiveControl, MessageKind::Telemetry, 0.6, note);
    return;
  }
  task_json_ = envelope.payload.value("task", Json::object());
  next_command_ = 0;
  first_rejection_.clear();

  // An unsupported effector is detectable before touching the world.
  for (const auto& c : task_json_.value("approach", Json::array())) {
    if (!supported_verb(c.value("verb", ""))) {
      finish(svc, "failure", "unsupported-effector:" + c.value("verb", ""));
      return;
    }
  }
}

void TaskProsecutionLayer::on_tick(LayerServices& svc) {
  if (task_json_.is_null()) return;

  const Json success_def = task_json_.value("success_def", Json());
  const Json failure_def = task_json_.value("failure_def", Json());

  // Early stop: success/failure may become true before the command list
  // runs out (e.g. a prerequisite already cleaned the zone).
  if (predicate_holds(failure_def)) {
    finish(svc, "failure",
           first_rejection_.empty() ? "failure-condition-met" : first_rejection_);
    return;
  }
  if (predicate_holds(success_def)) {
    finish(svc, "success", "");
    return;
  }

  const Json& commands = task_json_.value("approach", Json::array());
  if (next_command_ >= commands.size()) {
    finish(svc, "failure",
           first_rejection_.empty() ? "success-not-achieved" : first_rejection_);
    return;
  }

  const Json& cj = commands[next_command_++];
  Command cmd;
  cmd.verb = cj.value("verb", "");
  cmd.args = cj.value("args", Json::object());
  StepResult result = env_.step(cmd);

  Json steplog;
  steplog["type"] = "envstep";
  steplog["tick"] = env_.tick();
  steplog["command"] = cj;
  steplog["accepted"] = result.accepted;
  if (!result.accepted) steplog["reason"] = result.reason;
  steplog["energy_spent"] = result.energy_spent;
  svc.trace(steplog);

  if (!result.accepted && first_rejection_.empty()) {
    first_rejection_ = result.reason;
  }

  // Post-step status telemetry northward.
  Json tel = result.telemetry;
  tel["event"] = "status";
  double salience = tel.value("battery", 100.0) <= 20.0 ? 0.6 : 0.1;
  publish(svc, LayerName::CognitiveControl, MessageKind::Telemetry, salience,
          tel, task_json_.value("id", ""));

  // Evaluate after the step as well so terminal states resolve in the
  // same tick as the command that produced them.
  if (predicate_holds(failure_def)) {
    finish(svc, "failure",
           first_rejection_.empty() ? "failure-condition-met" : first_rejection_);
    return;
  }
  if (predicate_holds(success_def)) {
    finish(svc, "success", "");
    return;
  }
  if (next_command_ >= commands.size()) {
    finish(svc, "failure",
           first_rejection_.empty() ? "success-not-achieved" : first_rejection_);
  }
}

Json TaskProsecutionLayer::snapshot() const {
  Json j;
  j["task"] = task_json_;
  j["next_command"] = next_command_;
  j["first_rejection"] = first_rejection_;
  return j;
}

void TaskProsecutionLayer::restore(const Json& snap) {
  task_json_ = snap.at("task");
  next_command_ = snap.at("next_command").get<std::size_t>();
  first_rejection_ = snap.at("first_rejection").get<std::string>();
}

}  // namespace ace
