#pragma once

#include <memory>

#include "ace/agent_model.hpp"
#include "ace/aspirational.hpp"
#include "ace/cognitive_control.hpp"
#include "ace/constitution.hpp"
#include "ace/executive_function.hpp"
#include "ace/global_strategy.hpp"
#include "ace/sim_env.hpp"
#include "ace/task_prosecution.hpp"

namespace ace {

struct RunConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct TraceError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct RunConfig {
  std::string constitution_text;
  Json scenario;
  Params params;
  int max_ticks = 60;
  std::string cognition = "rule";  // rule | external
  std::string external_address;    // host:port for the external engine

  // Loads and validates the two documents; throws RunConfigError.
  static RunConfig load(const std::string& constitution_path,
                        const std::string& scenario_path);

  Json to_json() const;  // embedded in the trace config line
  static RunConfig from_json(const Json& j);
  void validate() const;
};

struct RunResult {
  std::vector<std::string> trace_lines;
  Json final_snapshots;  // layer name -> snapshot, plus "Environment"
  Json oracle;           // final environment fact map
  std::int64_t ticks = 0;
  bool quiescent = false;
  bool failed = false;
  std::string error;
};

// Deterministic single-threaded scheduler wiring the six layers, the
// bus, and the environment. One instance per run.
class Runtime {
 public:
  explicit Runtime(RunConfig config);

  RunResult run();

  Bus& bus() { return bus_; }
  Environment& environment() { return env_; }
  AgentModelLayer& agent_model() { return *agent_model_; }
  CognitiveControlLayer& cognitive_control() { return *cognitive_control_; }
  ExecutiveFunctionLayer& executive_function() { return *executive_function_; }

 private:
  void trace_line(const Json& j);
  void flush_audit();
  void inject_events(std::int64_t tick);
  void apply_interventions(Layer& layer);
  bool quiescent(std::int64_t tick) const;
  Json layer_snapshots() const;

  RunConfig config_;
  Constitution constitution_;
  Environment env_;
  Bus bus_;
  std::unique_ptr<CognitionEngine> engine_;
  std::unique_ptr<AspirationalLayer> aspirational_;
  std::unique_ptr<GlobalStrategyLayer> global_strategy_;
  std::unique_ptr<AgentModelLayer> agent_model_;
  std::unique_ptr<ExecutiveFunctionLayer> executive_function_;
  std::unique_ptr<CognitiveControlLayer> cognitive_control_;
  std::unique_ptr<TaskProsecutionLayer> task_prosecution_;
  std::vector<Layer*> layers_;  // rank order 1..6
  std::map<int, bool> halted_;
  std::map<int, Json> last_snapshot_;  // per rank, last tick boundary
  std::vector<std::string> trace_;
  std::size_t audit_cursor_ = 0;
};

// Re-executes the embedded config and verifies the trace line-by-line.
// Returns the reconstructed final snapshots. Throws TraceError naming the
// last verified seq on mismatch or truncation; an empty trace yields
// default states.
Json replay_trace(const std::vector<std::string>& lines);

std::vector<std::string> read_trace_file(const std::string& path);

struct InspectFilters {
  std::optional<std::string> layer;  // source or target name
  std::optional<std::string> kind;
  std::optional<std::int64_t> tick_from;
  std::optional<std::int64_t> tick_to;
  bool interventions = false;
  bool roadmaps = false;
  bool decisions = false;
  bool outcomes = false;
};

std::vector<Json> inspect_trace(const std::vector<std::string>& lines,
                                const InspectFilters& filters);

}  // namespace ace
