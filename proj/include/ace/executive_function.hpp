#pragma once

#include <map>
#include <set>

#include "ace/layer.hpp"

namespace ace {

struct ResourceState {
  double energy = 0;
  std::int64_t time = 0;
  double money = 0;

  Json to_json() const;
  static ResourceState from_json(const Json& j);
};

// Greedy allocation result: reserved cost per task id plus deferrals.
struct Allocation {
  std::map<std::string, double> reserved;
  std::vector<std::pair<std::string, std::string>> deferred;  // id, reason
};

// Tasks are Json TaskSpec documents:
//   {id, objective_ref, methodology, approach: [commands], success_def,
//    failure_def, cost: {energy,...}, prerequisites: [ids], essential,
//    urgency, importance, required_capabilities, zone?}
// Allocation in priority order: essential first, then urgency*importance
// descending, ties by id.
Allocation allocate_tasks(const std::vector<Json>& tasks, double energy_budget);

// Throws if the task+contingency dependency graph has a cycle or a
// contingency references a missing task.
void validate_roadmap(const Json& roadmap);

class ExecutiveFunctionLayer : public Layer {
 public:
  explicit ExecutiveFunctionLayer(const Params& params)
      : Layer(LayerName::ExecutiveFunction), params_(params) {}

  void handle(const Envelope& envelope, LayerServices& svc) override;
  Json snapshot() const override;
  void restore(const Json& snap) override;

  // Builds, risk-annotates, allocates, and publishes a roadmap for the
  // held mission parameters.
  void plan(LayerServices& svc);

  // Compiles concrete effector command sequences for task outlines using
  // the geometry view. Exposed for tests.
  std::vector<Json> compile_tasks(const Json& outlines) const;

  Json assess_risks(const std::vector<Json>& tasks) const;

  void set_geometry(const Json& geometry) { geometry_ = geometry; }
  const Json& geometry() const { return geometry_; }
  double energy() const { return resources_.energy; }
  const Json& last_roadmap() const { return roadmap_; }

 private:
  void replan(LayerServices& svc, const std::string& reason,
              const std::string& failed_task);
  void publish_roadmap(LayerServices& svc, std::vector<Json> tasks,
                       const Allocation& alloc, const Json& risks);

  const Params& params_;
  Json geometry_;
  ResourceState resources_;
  Json mission_params_;
  bool have_params_ = false;
  Json roadmap_;
  std::int64_t version_ = 0;
  std::set<std::string> completed_;
  std::set<std::string> dropped_;  // tasks removed by escalated replan
  Json urgent_task_;               // prepended on sudden world events
};

}  // namespace ace
