#include "ace/agent_model.hpp"

#include <algorithm>

namespace ace {

Json EpisodicRecord::to_json() const {
  Json j;
  j["seq"] = seq;
  j["tick"] = tick;
  j["kind"] = kind;
  j["payload"] = payload;
  j["metadata"] = metadata;
  return j;
}

EpisodicRecord EpisodicRecord::from_json(const Json& j) {
  EpisodicRecord r;
  r.seq = j.at("seq").get<std::uint64_t>();
  r.tick = j.at("tick").get<std::int64_t>();
  r.kind = j.at("kind").get<std::string>();
  r.payload = j.at("payload");
  r.metadata = j.value("metadata", Json::object());
  return r;
}

Json AgentState::to_json() const {
  Json j;
  Json op = Json::object();
  for (const auto& [k, v] : operational) op[k] = v;
  j["operational"] = op;
  j["configuration"] = configuration;
  Json caps = Json::object();
  for (const auto& [k, v] : capabilities) caps[k] = v;
  j["capabilities"] = caps;
  Json lims = Json::array();
  for (const auto& l : limitations) lims.push_back(l);
  j["limitations"] = lims;
  return j;
}

AgentState AgentState::from_json(const Json& j) {
  AgentState s;
  for (auto it = j.at("operational").begin(); it != j.at("operational").end(); ++it) {
    s.operational[it.key()] = it.value();
  }
  s.configuration = j.value("configuration", Json::object());
  for (auto it = j.at("capabilities").begin(); it != j.at("capabilities").end(); ++it) {
    s.capabilities[it.key()] = it.value().get<double>();
  }
  for (const auto& l : j.at("limitations")) s.limitations.insert(l.get<std::string>());
  return s;
}

void AgentModelLayer::apply(AgentState& state, const EpisodicRecord& rec,
                            const Params& params) {
  if (rec.kind == "observation") {
    for (auto it = rec.payload.begin(); it != rec.payload.end(); ++it) {
      auto existing = state.operational.find(it.key());
      if (existing != state.operational.end() &&
          existing->second.value("tick", std::int64_t{-1}) > rec.tick) {
        continue;  // out-of-order telemetry, older value ignored
      }
      Json entry;
      entry["value"] = it.value();
      entry["tick"] = rec.tick;
      state.operational[it.key()] = entry;
    }
    return;
  }
  if (rec.kind == "decision" && rec.payload.contains("capability")) {
    std::string name = rec.payload["capability"].get<std::string>();
    bool success = rec.payload["outcome"].get<std::string>() == "success";
    double conf = params.capability_prior;
    if (auto it = state.capabilities.find(name); it != state.capabilities.end()) {
      conf = it->second;
    }
    conf = success ? conf + params.capability_alpha * (1.0 - conf)
                   : conf * (1.0 - params.capability_beta);
    conf = std::clamp(conf, 0.0, 1.0);
    state.capabilities[name] = conf;
    if (conf < params.capability_floor) {
      state.capabilities.erase(name);
      state.limitations.insert(name);
    } else {
      state.limitations.erase(name);
    }
    return;
  }
  if (rec.kind == "event" && rec.payload.contains("capability_init")) {
    state.capabilities[rec.payload["capability_init"].get<std::string>()] =
        rec.payload["confidence"].get<double>();
    return;
  }
  if (rec.kind == "event" && rec.payload.contains("limitation_init")) {
    state.limitations.insert(rec.payload["limitation_init"].get<std::string>());
    return;
  }
  // Plain events and actions carry no state delta.
}

void AgentModelLayer::record(const EpisodicRecord& rec) {
  std::uint64_t expected = log_.empty() ? 1 : log_.back().seq + 1;
  if (rec.seq != expected) {
    throw CorruptionError("episodic seq " + std::to_string(rec.seq) +
                          ", expected " + std::to_string(expected));
  }
  log_.push_back(rec);
  apply(state_, rec, params_);
}

AgentState AgentModelLayer::replay(std::span<const EpisodicRecord> log,
                                   const Params& params) {
  AgentState state;
  std::uint64_t expected = 1;
  for (const auto& rec : log) {
    if (rec.seq != expected) {
      throw CorruptionError("episodic log gap at seq " + std::to_string(rec.seq) +
                            ", expected " + std::to_string(expected));
    }
    apply(state, rec, params);
    ++expected;
  }
  return state;
}

void AgentModelLayer::ingest_telemetry(const Json& readings, std::int64_t tick) {
  EpisodicRecord rec;
  rec.seq = log_.empty() ? 1 : log_.back().seq + 1;
  rec.tick = tick;
  rec.kind = "observation";
  rec.payload = readings;
  record(rec);
}

double AgentModelLayer::update_capability(const std::string& name, bool success,
                                          std::int64_t tick) {
  EpisodicRecord rec;
  rec.seq = log_.empty() ? 1 : log_.back().seq + 1;
  rec.tick = tick;
  rec.kind = "decision";
  rec.payload["capability"] = name;
  rec.payload["outcome"] = success ? "success" : "failure";
  record(rec);
  if (auto it = state_.capabilities.find(name); it != state_.capabilities.end()) {
    return it->second;
  }
  return 0.0;  // demoted to limitations
}

void AgentModelLayer::init_agent(const Json& agent_section) {
  std::int64_t tick = 0;
  if (agent_section.contains("capabilities")) {
    for (auto it = agent_section["capabilities"].begin();
         it != agent_section["capabilities"].end(); ++it) {
      EpisodicRecord rec;
      rec.seq = log_.empty() ? 1 : log_.back().seq + 1;
      rec.tick = tick;
      rec.kind = "event";
      rec.payload["capability_init"] = it.key();
      rec.payload["confidence"] = it.value().get<double>();
      record(rec);
    }
  }
  if (agent_section.contains("limitations")) {
    for (const auto& l : agent_section["limitations"]) {
      EpisodicRecord rec;
      rec.seq = log_.empty() ? 1 : log_.back().seq + 1;
      rec.tick = tick;
      rec.kind = "event";
      rec.payload["limitation_init"] = l.get<std::string>();
      record(rec);
    }
  }
}

Json AgentModelLayer::shape_mission(const Json& strategic_doc,
                                    LayerServices& svc) {
  Json caps = Json::object();
  for (const auto& [k, v] : state_.capabilities) caps[k] = v;
  Json lims = Json::array();
  for (const auto& l : state_.limitations) lims.push_back(l);

  CognitionRequest req;
  req.kind = RequestKind::ShapeMission;
  req.context["objectives"] = strategic_doc.value("objectives", Json::array());
  req.context["capabilities"] = caps;
  req.context["limitations"] = lims;
  req.context["feasibility_threshold"] = params_.feasibility_threshold;
  req.seed = params_.seed;
  CognitionResponse resp = svc.engine.evaluate(req);

  Json mp;
  mp["strategic_ref"] = strategic_doc.value("mission_ref", Json());
  mp["world_version"] = strategic_doc.value("world_version", Json());
  mp["feasible"] = resp.payload["feasible"];
  mp["deferred"] = resp.payload["deferred"];
  mp["state_snapshot_ref"] =
      "episodic:" + std::to_string(log_.empty() ? 0 : log_.back().seq);
  Json op = Json::object();
  for (const auto& [k, v] : state_.operational) op[k] = v;
  mp["operational"] = op;
  return mp;
}

void AgentModelLayer::handle(const Envelope& envelope, LayerServices& svc) {
  switch (envelope.kind) {
    case MessageKind::Telemetry:
      if (envelope.payload.is_object() && envelope.payload.contains("readings")) {
        ingest_telemetry(envelope.payload["readings"], envelope.tick);
      } else if (envelope.payload.is_object()) {
        ingest_telemetry(envelope.payload, envelope.tick);
      }
      break;
    case MessageKind::StrategicDocument: {
      std::int64_t version = envelope.payload.value("world_version", std::int64_t{0});
      if (version < held_world_version_) break;  // superseded
      held_world_version_ = version;
      Json mp = shape_mission(envelope.payload, svc);
      std::optional<std::string> corr = envelope.correlation;
      publish(svc, LayerName::ExecutiveFunction, MessageKind::MissionParams, 0.9,
              std::move(mp), corr);
      break;
    }
    case MessageKind::OutcomeSignal: {
      bool success = envelope.payload.value("status", "") == "success";
      if (envelope.payload.contains("required_capabilities")) {
        for (const auto& c : envelope.payload["required_capabilities"]) {
          update_capability(c.get<std::string>(), success, envelope.tick);
        }
      }
      break;
    }
    case MessageKind::Directive:
    case MessageKind::Censor:
    case MessageKind::MoralJudgment:
    case MessageKind::Mission: {
      EpisodicRecord rec;
      rec.seq = log_.empty() ? 1 : log_.back().seq + 1;
      rec.tick = envelope.tick;
      rec.kind = "event";
      rec.payload["envelope_kind"] = std::string(to_string(envelope.kind));
      rec.payload["payload"] = envelope.payload;
      record(rec);
      break;
    }
    default:
      break;
  }
}

Json AgentModelLayer::snapshot() const {
  Json j;
  j["state"] = state_.to_json();
  Json log = Json::array();
  for (const auto& rec : log_) log.push_back(rec.to_json());
  j["episodic"] = log;
  j["held_world_version"] = held_world_version_;
  return j;
}

void AgentModelLayer::restore(const Json& snap) {
  state_ = AgentState::from_json(snap.at("state"));
  log_.clear();
  for (const auto& jr : snap.at("episodic")) {
    log_.push_back(EpisodicRecord::from_json(jr));
  }
  held_world_version_ = snap.value("held_world_version", std::int64_t{-1});
}

}  // namespace ace
