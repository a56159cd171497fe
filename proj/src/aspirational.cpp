#include "ace/aspirational.hpp"

#include <algorithm>

namespace ace {

namespace {

Json constitution_payload(const Constitution& c) {
  Json j;
  Json imps = Json::array();
  for (const auto& i : c.imperatives()) imps.push_back(i);
  j["imperatives"] = imps;
  Json fws = Json::array();
  for (const auto& f : c.frameworks()) {
    Json jf;
    jf["name"] = f.name;
    jf["body"] = f.body;
    fws.push_back(jf);
  }
  j["frameworks"] = fws;
  return j;
}

}  // namespace

void AspirationalLayer::attach(Bus& bus, CognitionEngine& engine) {
  engine_ = &engine;
  monitor_token_ = bus.register_monitor("Aspirational");
  bus.set_gate(
      {MessageKind::StrategicDocument, MessageKind::Roadmap},
      [this](const Envelope& e) -> std::optional<std::string> {
        CognitionRequest req;
        req.kind = RequestKind::Judge;
        req.context["option"] = e.payload;
        req.context["constitution"] = constitution_payload(constitution_);
        req.seed = params_.seed;
        Judgment j = Judgment::from_payload(engine_->evaluate(req).payload);
        if (j.verdict != JudgmentVerdict::Deny) return std::nullopt;

        // The denied objectives, named so Global Strategy can drop them.
        Json drop = Json::array();
        const Json& objs = e.kind == MessageKind::StrategicDocument
                               ? e.payload.value("objectives", Json::array())
                               : e.payload.value("tasks", Json::array());
        for (const auto& o : objs) {
          CognitionRequest one;
          one.kind = RequestKind::Judge;
          one.context["option"] = o;
          one.seed = params_.seed;
          Judgment jo = Judgment::from_payload(engine_->evaluate(one).payload);
          if (jo.verdict == JudgmentVerdict::Deny && o.contains("text")) {
            drop.push_back(o["text"]);
          }
        }

        record_denial(e);
        if (e.source.layer) {
          Json censor;
          censor["subject"] = e.seq;
          censor["rationale"] = j.rationale;
          censor["already_censored"] = true;  // the gate wrote the record
          pending_.push_back({MessageKind::Censor, *e.source.layer, censor});
          Json directive;
          directive["rationale"] = j.rationale;
          directive["drop_objectives"] = drop;
          pending_.push_back({MessageKind::Directive, *e.source.layer, directive});
        }
        return j.rationale;
      });
}

void AspirationalLayer::issue_missions(LayerServices& svc) {
  Json payload = constitution_payload(constitution_);
  if (constitution_.mission()) {
    payload["statement"] = *constitution_.mission();
  } else {
    payload["statement"] = nullptr;
  }
  publish(svc, LayerName::GlobalStrategy, MessageKind::Mission, 1.0, payload,
          "mission-1");
}

void AspirationalLayer::record_denial(const Envelope& envelope) {
  std::string who(envelope.source.name());
  auto& ticks = denials_[who];
  ticks.push_back(current_tick_);
  while (!ticks.empty() &&
         current_tick_ - ticks.front() >= params_.halt_window_ticks) {
    ticks.pop_front();
  }
  if (static_cast<int>(ticks.size()) >= params_.halt_denials &&
      !halted_[who] && envelope.source.layer) {
    halted_[who] = true;
    Json halt;
    halt["rationale"] = "repeated denials: " + std::to_string(ticks.size()) +
                        " within " + std::to_string(params_.halt_window_ticks) +
                        " ticks";
    pending_.push_back({MessageKind::Halt, *envelope.source.layer, halt});
    if (params_.auto_reboot) {
      Json reboot;
      reboot["rationale"] = "auto reboot after halt";
      pending_.push_back({MessageKind::Reboot, *envelope.source.layer, reboot});
    }
  }
}

void AspirationalLayer::review(const Envelope& envelope) {
  // The gate already judged StrategicDocument and Roadmap pre-delivery;
  // post-delivery review covers everything else that got through.
  if (envelope.source.layer && *envelope.source.layer == LayerName::Aspirational) {
    return;
  }
  if (engine_ == nullptr) return;
  CognitionRequest req;
  req.kind = RequestKind::Judge;
  req.context["option"] = envelope.payload;
  req.seed = params_.seed;
  Judgment j = Judgment::from_payload(engine_->evaluate(req).payload);
  if (j.verdict != JudgmentVerdict::Deny) return;

  record_denial(envelope);
  if (!envelope.source.layer) return;  // no interventions against Environment
  Json censor;
  censor["subject"] = envelope.seq;
  censor["rationale"] = j.rationale;
  pending_.push_back({MessageKind::Censor, *envelope.source.layer, censor});
  Json directive;
  directive["rationale"] = j.rationale;
  directive["drop_objectives"] = Json::array();
  pending_.push_back({MessageKind::Directive, *envelope.source.layer, directive});
}

void AspirationalLayer::resolve_dilemma(const Envelope& envelope,
                                        LayerServices& svc) {
  if (!envelope.payload.contains("options") ||
      !envelope.payload["options"].is_array() ||
      envelope.payload["options"].empty()) {
    Json note;
    note["event"] = "rejected-escalation";
    note["rationale"] = "malformed dilemma escalation: no options";
    svc.trace(note);
    return;
  }
  CognitionRequest req;
  req.kind = RequestKind::Judge;
  req.context["options"] = envelope.payload["options"];
  req.context["constitution"] = constitution_payload(constitution_);
  req.seed = params_.seed;
  Json payload = svc.engine.evaluate(req).payload;
  publish(svc, LayerName::CognitiveControl, MessageKind::MoralJudgment, 0.9,
          payload, envelope.correlation);
}

void AspirationalLayer::handle(const Envelope& envelope, LayerServices& svc) {
  if (envelope.kind == MessageKind::DilemmaEscalation) {
    resolve_dilemma(envelope, svc);
  }
}

void AspirationalLayer::on_tick(LayerServices& svc) {
  current_tick_ = svc.bus.tick();
  for (const Envelope& e : svc.bus.tap(monitor_token_)) review(e);
  auto pending = std::move(pending_);
  pending_.clear();
  for (const auto& p : pending) {
    publish(svc, p.target, p.kind, 1.0, p.payload);
  }
}

Json AspirationalLayer::snapshot() const {
  Json j;
  j["constitution"] = constitution_.serialize();
  Json d = Json::object();
  for (const auto& [who, ticks] : denials_) {
    Json a = Json::array();
    for (auto t : ticks) a.push_back(t);
    d[who] = a;
  }
  j["denials"] = d;
  Json h = Json::object();
  for (const auto& [who, v] : halted_) h[who] = v;
  j["halted"] = h;
  Json pq = Json::array();
  for (const auto& p : pending_) {
    Json jp;
    jp["kind"] = std::string(to_string(p.kind));
    jp["target"] = std::string(to_string(p.target));
    jp["payload"] = p.payload;
    pq.push_back(jp);
  }
  j["pending"] = pq;
  j["tick"] = current_tick_;
  return j;
}

void AspirationalLayer::restore(const Json& snap) {
  denials_.clear();
  for (auto it = snap.at("denials").begin(); it != snap.at("denials").end(); ++it) {
    std::deque<std::int64_t> ticks;
    for (const auto& t : it.value()) ticks.push_back(t.get<std::int64_t>());
    denials_[it.key()] = ticks;
  }
  halted_.clear();
  for (auto it = snap.at("halted").begin(); it != snap.at("halted").end(); ++it) {
    halted_[it.key()] = it.value().get<bool>();
  }
  pending_.clear();
  for (const auto& jp : snap.at("pending")) {
    PendingIntervention p;
    p.kind = *kind_from_string(jp.at("kind").get<std::string>());
    p.target = *layer_from_string(jp.at("target").get<std::string>());
    p.payload = jp.at("payload");
    pending_.push_back(p);
  }
  current_tick_ = snap.at("tick").get<std::int64_t>();
}

}  // namespace ace
