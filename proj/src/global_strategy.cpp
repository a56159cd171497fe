#include "ace/global_strategy.hpp"

#include <algorithm>

namespace ace {

std::vector<std::string> WorldModel::ingest(const Json& facts, std::int64_t tick,
                                            std::uint64_t seq,
                                            const std::string& source) {
  std::vector<std::string> changed;
  for (auto it = facts.begin(); it != facts.end(); ++it) {
    auto existing = facts_.find(it.key());
    if (existing != facts_.end()) {
      const Fact& f = existing->second;
      // Last writer wins by tick, ties by seq.
      if (f.tick > tick || (f.tick == tick && f.seq > seq)) continue;
      if (f.value == it.value()) {
        existing->second.tick = tick;
        existing->second.seq = seq;
        continue;
      }
    }
    facts_[it.key()] = Fact{it.value(), tick, seq, source};
    changed.push_back(it.key());
  }
  if (!changed.empty()) ++version_;
  return changed;
}

Json WorldModel::plain_facts() const {
  Json out = Json::object();
  for (const auto& [k, f] : facts_) out[k] = f.value;
  return out;
}

Json WorldModel::to_json() const {
  Json jf = Json::object();
  for (const auto& [k, f] : facts_) {
    Json e;
    e["value"] = f.value;
    e["tick"] = f.tick;
    e["seq"] = f.seq;
    e["source"] = f.source;
    jf[k] = e;
  }
  Json j;
  j["facts"] = jf;
  j["version"] = version_;
  return j;
}

WorldModel WorldModel::from_json(const Json& j) {
  WorldModel m;
  for (auto it = j.at("facts").begin(); it != j.at("facts").end(); ++it) {
    const Json& e = it.value();
    m.facts_[it.key()] = Fact{e.at("value"), e.at("tick").get<std::int64_t>(),
                              e.at("seq").get<std::uint64_t>(),
                              e.value("source", "")};
  }
  m.version_ = j.at("version").get<std::int64_t>();
  return m;
}

Json GlobalStrategyLayer::formulate(LayerServices& svc) {
  CognitionRequest req;
  req.kind = RequestKind::Strategize;
  req.context["mission"] = mission_;
  req.context["facts"] = world_.plain_facts();
  Json sup = Json::array();
  for (const auto& s : suppressed_) sup.push_back(s);
  req.context["suppressed"] = sup;
  req.seed = params_.seed;
  CognitionResponse resp = svc.engine.evaluate(req);

  Json doc;
  doc["mission_ref"] = mission_.value("correlation", "mission-1");
  doc["objectives"] = resp.payload["objectives"];
  doc["strategies"] = resp.payload["strategies"];
  doc["principles"] = resp.payload["principles"];
  Json prio = Json::array();
  for (const auto& o : resp.payload["objectives"]) prio.push_back(o["id"]);
  doc["priorities"] = prio;
  doc["world_version"] = world_.version();
  return doc;
}

bool GlobalStrategyLayer::material(
    const std::vector<std::string>& changed_keys) const {
  if (!have_mission_) return false;
  for (const auto& key : changed_keys) {
    // New or changed grounding facts and suggestions are material; pure
    // telemetry-style facts are not.
    if (key.rfind("zone.", 0) == 0 || key.rfind("suggestion.", 0) == 0) {
      return true;
    }
    if (current_doc_.contains("objectives")) {
      for (const auto& o : current_doc_["objectives"]) {
        if (o.contains("tags") && o["tags"].is_object()) {
          for (auto it = o["tags"].begin(); it != o["tags"].end(); ++it) {
            if (it.value().is_string() &&
                key.find(it.value().get<std::string>()) != std::string::npos) {
              return true;
            }
          }
        }
      }
    }
  }
  return false;
}

void GlobalStrategyLayer::emit_document(LayerServices& svc) {
  Json doc = formulate(svc);
  // Re-issues with unchanged content are suppressed except for the first.
  if (!current_doc_.is_null()) {
    Json a = current_doc_;
    Json b = doc;
    a.erase("world_version");
    b.erase("world_version");
    if (a == b) return;
  }
  current_doc_ = doc;
  ++doc_counter_;
  publish(svc, LayerName::AgentModel, MessageKind::StrategicDocument, 0.9, doc,
          doc.value("mission_ref", "mission-1"));
}

void GlobalStrategyLayer::handle(const Envelope& envelope, LayerServices& svc) {
  switch (envelope.kind) {
    case MessageKind::WorldEvent: {
      Json facts = envelope.payload.value("facts", Json::object());
      auto changed = world_.ingest(facts, envelope.tick, envelope.seq,
                                   std::string(envelope.source.name()));
      if (material(changed)) emit_document(svc);
      break;
    }
    case MessageKind::Mission: {
      mission_ = envelope.payload;
      if (envelope.correlation) mission_["correlation"] = *envelope.correlation;
      have_mission_ = true;
      emit_document(svc);
      break;
    }
    case MessageKind::Directive: {
      if (envelope.payload.contains("drop_objectives")) {
        for (const auto& t : envelope.payload["drop_objectives"]) {
          std::string text = t.get<std::string>();
          if (std::find(suppressed_.begin(), suppressed_.end(), text) ==
              suppressed_.end()) {
            suppressed_.push_back(text);
          }
        }
        if (have_mission_) emit_document(svc);
      }
      break;
    }
    case MessageKind::Telemetry: {
      // Northbound pass-through context; fold salient readings into the
      // world model as agent.* facts.
      if (envelope.payload.is_object()) {
        Json facts = Json::object();
        for (auto it = envelope.payload.begin(); it != envelope.payload.end(); ++it) {
          if (it.value().is_primitive()) facts["agent." + it.key()] = it.value();
        }
        world_.ingest(facts, envelope.tick, envelope.seq,
                      std::string(envelope.source.name()));
      }
      break;
    }
    default:
      break;
  }
}

Json GlobalStrategyLayer::snapshot() const {
  Json j;
  j["world"] = world_.to_json();
  j["mission"] = mission_;
  j["have_mission"] = have_mission_;
  j["current_doc"] = current_doc_;
  Json sup = Json::array();
  for (const auto& s : suppressed_) sup.push_back(s);
  j["suppressed"] = sup;
  j["doc_counter"] = doc_counter_;
  return j;
}

void GlobalStrategyLayer::restore(const Json& snap) {
  world_ = WorldModel::from_json(snap.at("world"));
  mission_ = snap.at("mission");
  have_mission_ = snap.at("have_mission").get<bool>();
  current_doc_ = snap.at("current_doc");
  suppressed_.clear();
  for (const auto& s : snap.at("suppressed")) {
    suppressed_.push_back(s.get<std::string>());
  }
  doc_counter_ = snap.value("doc_counter", std::int64_t{0});
}

}  // namespace ace
