#pragma once

#include <map>
#include <set>
#include <span>

#include "ace/layer.hpp"

namespace ace {

struct CorruptionError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct EpisodicRecord {
  std::uint64_t seq = 0;
  std::int64_t tick = 0;
  std::string kind;  // event | action | observation | decision
  Json payload;
  Json metadata = Json::object();

  Json to_json() const;
  static EpisodicRecord from_json(const Json& j);
};

// Self-representation: operational parameters, configuration, capability
// confidences, limitations. Every mutation flows through an episodic
// record so online state and log replay coincide exactly.
struct AgentState {
  std::map<std::string, Json> operational;  // param -> {value, tick}
  Json configuration = Json::object();
  std::map<std::string, double> capabilities;
  std::set<std::string> limitations;

  Json to_json() const;
  static AgentState from_json(const Json& j);
  bool operator==(const AgentState&) const = default;
};

class AgentModelLayer : public Layer {
 public:
  explicit AgentModelLayer(const Params& params)
      : Layer(LayerName::AgentModel), params_(params) {}

  void handle(const Envelope& envelope, LayerServices& svc) override;
  Json snapshot() const override;
  void restore(const Json& snap) override;

  // Appends and applies; seq must be last+1.
  void record(const EpisodicRecord& rec);

  // Folds a log over an empty state. Throws CorruptionError on a seq gap
  // or regression.
  static AgentState replay(std::span<const EpisodicRecord> log,
                           const Params& params);

  // Telemetry fold: monotone by tick, recorded as an observation.
  void ingest_telemetry(const Json& readings, std::int64_t tick);

  // Trial-and-error confidence update; returns the new confidence.
  double update_capability(const std::string& name, bool success,
                           std::int64_t tick);

  // Seeds capabilities/limitations from a scenario's agent section.
  void init_agent(const Json& agent_section);

  Json shape_mission(const Json& strategic_doc, LayerServices& svc);

  const AgentState& state() const { return state_; }
  const std::vector<EpisodicRecord>& log() const { return log_; }

 private:
  static void apply(AgentState& state, const EpisodicRecord& rec,
                    const Params& params);

  const Params& params_;
  AgentState state_;
  std::vector<EpisodicRecord> log_;
  std::int64_t held_world_version_ = -1;
};

}  // namespace ace
