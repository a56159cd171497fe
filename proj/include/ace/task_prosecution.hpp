#pragma once

#include "ace/layer.hpp"
#include "ace/sim_env.hpp"

namespace ace {

// Bottom layer: executes one compiled command per tick against the
// environment and reports success/failure northward.
class TaskProsecutionLayer : public Layer {
 public:
  TaskProsecutionLayer(const Params& params, Environment& env)
      : Layer(LayerName::TaskProsecution), params_(params), env_(env) {}

  void handle(const Envelope& envelope, LayerServices& svc) override;
  void on_tick(LayerServices& svc) override;
  Json snapshot() const override;
  void restore(const Json& snap) override;

  bool executing() const { return !task_json_.is_null(); }

 private:
  void finish(LayerServices& svc, const std::string& status,
              const std::string& reason);
  bool predicate_holds(const Json& pred) const;
  // Known effector verbs the actuator suite supports.
  static bool supported_verb(const std::string& verb);

  const Params& params_;
  Environment& env_;

  Json task_json_;  // current TaskInstruction task (null when idle)
  std::size_t next_command_ = 0;
  std::string first_rejection_;
};

}  // namespace ace
