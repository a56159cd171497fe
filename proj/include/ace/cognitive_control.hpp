#pragma once

#include <deque>
#include <map>
#include <set>

#include "ace/layer.hpp"

namespace ace {

// Windowed failure-ratio state driving task switching.
struct FrustrationState {
  std::deque<bool> window;  // true = failure
  double failure_ratio = 0;
  bool frustrated = false;

  void update(bool failure, int window_size, double threshold);

  Json to_json() const;
  static FrustrationState from_json(const Json& j);
};

// Argmax of 0.4*urgency + 0.4*importance - 0.2*normalized_cost over the
// candidate list (cost normalized by the candidates' max energy cost).
// Ties break to the lexicographically smallest id; `excluded` drops the
// most recently failed task while frustrated.
std::optional<std::string> select_task(
    const std::vector<Json>& candidates, const Params& params,
    const std::optional<std::string>& excluded = std::nullopt);

double task_score(const Json& task, double max_cost, const Params& params);

struct SwitchDecision {
  enum Kind { Continue, Retry, Switch, Escalate } kind = Continue;
  std::string detail;  // next task id or escalation reason
};

SwitchDecision should_switch(const Json& current_task,
                             const std::optional<Json>& outcome,
                             const std::optional<Json>& world_event,
                             const FrustrationState& frustration, int retries,
                             const std::vector<Json>& candidates,
                             const Params& params);

struct FailureAction {
  enum Kind { Retry, InsertPrerequisite, SwitchTask, Escalate } kind = Retry;
  std::string contingency;  // for InsertPrerequisite
};

FailureAction handle_failure(const Json& outcome, const Json& roadmap,
                             const FrustrationState& frustration, int retries,
                             const std::set<std::string>& inserted,
                             const Params& params);

// Cognitive damping: scored pro/con deliberation. Requires >= 2 options.
Json damp(const std::vector<Json>& options, CognitionEngine& engine, long seed);

class CognitiveControlLayer : public Layer {
 public:
  explicit CognitiveControlLayer(const Params& params)
      : Layer(LayerName::CognitiveControl), params_(params) {}

  void handle(const Envelope& envelope, LayerServices& svc) override;
  void on_tick(LayerServices& svc) override;
  Json snapshot() const override;
  void restore(const Json& snap) override;

  const FrustrationState& frustration() const { return frustration_; }
  bool has_dispatched() const { return dispatched_.has_value(); }
  const std::set<std::string>& completed() const { return completed_; }

 private:
  std::vector<Json> eligible_tasks() const;
  const Json* find_task(const std::string& id) const;
  void dispatch(LayerServices& svc, const Json& task);
  void on_outcome(const Envelope& envelope, LayerServices& svc);

  const Params& params_;
  Json roadmap_;
  std::int64_t roadmap_version_ = 0;
  std::set<std::string> completed_;
  std::set<std::string> inserted_;  // contingencies already inserted
  std::set<std::string> blocked_;   // morally denied options
  std::map<std::string, int> retries_;
  std::optional<std::string> dispatched_;
  std::optional<std::string> retry_next_;
  std::optional<std::string> forced_next_;  // from a MoralJudgment
  std::optional<std::string> last_failed_;
  FrustrationState frustration_;
  bool dilemma_pending_ = false;
  bool idle_reported_ = false;
  std::set<std::string> escalated_;  // tasks already escalated northward
};

}  // namespace ace
