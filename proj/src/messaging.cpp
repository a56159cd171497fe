#include "ace/messaging.hpp"

#include <algorithm>
#include <stdexcept>

namespace ace {

namespace {

constexpr std::string_view kLayerNames[] = {
    "Aspirational",      "GlobalStrategy",   "AgentModel",
    "ExecutiveFunction", "CognitiveControl", "TaskProsecution",
};

constexpr std::string_view kKindNames[] = {
    "Mission",        "MoralJudgment", "StrategicDocument", "MissionParams",
    "Roadmap",        "TaskInstruction", "Telemetry",       "OutcomeSignal",
    "DilemmaEscalation", "Directive",  "Censor",            "Halt",
    "Reboot",         "WorldEvent",
};

}  // namespace

std::string_view to_string(LayerName layer) {
  return kLayerNames[static_cast<int>(layer) - 1];
}

std::optional<LayerName> layer_from_string(std::string_view name) {
  for (int i = 0; i < kNumLayers; ++i) {
    if (kLayerNames[i] == name) return static_cast<LayerName>(i + 1);
  }
  return std::nullopt;
}

std::vector<LayerName> all_layers() {
  std::vector<LayerName> out;
  for (int i = 1; i <= kNumLayers; ++i) out.push_back(static_cast<LayerName>(i));
  return out;
}

std::optional<Origin> origin_from_string(std::string_view name) {
  if (name == "Environment") return Origin::environment();
  if (auto l = layer_from_string(name)) return Origin::of(*l);
  return std::nullopt;
}

std::string_view to_string(MessageKind kind) {
  return kKindNames[static_cast<int>(kind)];
}

std::optional<MessageKind> kind_from_string(std::string_view name) {
  for (int i = 0; i < kNumKinds; ++i) {
    if (kKindNames[i] == name) return static_cast<MessageKind>(i);
  }
  return std::nullopt;
}

std::vector<MessageKind> all_kinds() {
  std::vector<MessageKind> out;
  for (int i = 0; i < kNumKinds; ++i) out.push_back(static_cast<MessageKind>(i));
  return out;
}

bool is_control_kind(MessageKind kind) {
  switch (kind) {
    case MessageKind::Directive:
    case MessageKind::Censor:
    case MessageKind::Halt:
    case MessageKind::Reboot:
      return true;
    default:
      return false;
  }
}

bool is_northbound_kind(MessageKind kind) {
  switch (kind) {
    case MessageKind::Telemetry:
    case MessageKind::OutcomeSignal:
    case MessageKind::DilemmaEscalation:
      return true;
    default:
      return false;
  }
}

bool is_southbound_kind(MessageKind kind) {
  switch (kind) {
    case MessageKind::Mission:
    case MessageKind::MoralJudgment:
    case MessageKind::StrategicDocument:
    case MessageKind::MissionParams:
    case MessageKind::Roadmap:
    case MessageKind::TaskInstruction:
    case MessageKind::Directive:
    case MessageKind::Censor:
    case MessageKind::Halt:
    case MessageKind::Reboot:
      return true;
    default:
      return false;
  }
}

std::string_view to_string(Direction d) {
  return d == Direction::Southbound ? "southbound" : "northbound";
}

std::string_view to_string(Verdict v) {
  switch (v) {
    case Verdict::Delivered: return "delivered";
    case Verdict::Rejected: return "rejected";
    case Verdict::Censored: return "censored";
  }
  return "delivered";
}

Json Envelope::to_json() const {
  Json j;
  j["seq"] = seq;
  j["tick"] = tick;
  j["source"] = std::string(source.name());
  j["target"] = std::string(to_string(target));
  j["direction"] = std::string(to_string(direction));
  j["kind"] = std::string(to_string(kind));
  j["salience"] = salience;
  if (correlation) {
    j["correlation"] = *correlation;
  } else {
    j["correlation"] = nullptr;
  }
  j["payload"] = payload;
  return j;
}

Envelope Envelope::from_json(const Json& j) {
  Envelope e;
  e.seq = j.at("seq").get<std::uint64_t>();
  e.tick = j.at("tick").get<std::int64_t>();
  auto src = origin_from_string(j.at("source").get<std::string>());
  auto tgt = layer_from_string(j.at("target").get<std::string>());
  auto kind = kind_from_string(j.at("kind").get<std::string>());
  if (!src || !tgt || !kind) throw std::runtime_error("bad envelope identity fields");
  e.source = *src;
  e.target = *tgt;
  e.kind = *kind;
  e.direction = j.at("direction").get<std::string>() == "northbound"
                    ? Direction::Northbound
                    : Direction::Southbound;
  e.salience = j.at("salience").get<double>();
  if (!j.at("correlation").is_null()) {
    e.correlation = j.at("correlation").get<std::string>();
  }
  e.payload = j.at("payload");
  return e;
}

Json AuditRecord::to_json() const {
  Json j = envelope.to_json();
  j["verdict"] = std::string(to_string(verdict));
  j["reason"] = reason;
  return j;
}

Decision authorize(Origin source, LayerName target, MessageKind kind) {
  const int tgt_rank = rank_of(target);
  if (source.is_environment()) {
    const bool env_kind =
        kind == MessageKind::WorldEvent || kind == MessageKind::Telemetry;
    const bool env_target = target == LayerName::GlobalStrategy ||
                            target == LayerName::ExecutiveFunction ||
                            target == LayerName::CognitiveControl;
    if (env_kind && env_target) return {true, "environment-input"};
    if (!env_kind) return {false, "environment-kind-not-permitted"};
    return {false, "environment-target-not-permitted"};
  }

  const int src_rank = source.rank();
  if (source.layer == LayerName::Aspirational &&
      target != LayerName::Aspirational) {
    switch (kind) {
      case MessageKind::Directive:
      case MessageKind::Censor:
      case MessageKind::Halt:
      case MessageKind::Reboot:
      case MessageKind::Mission:
      case MessageKind::MoralJudgment:
        return {true, "aspirational-privilege"};
      default:
        break;
    }
  }
  if (src_rank == tgt_rank - 1 && is_southbound_kind(kind)) {
    return {true, "adjacent-southbound"};
  }
  if (src_rank == tgt_rank + 1 && is_northbound_kind(kind)) {
    return {true, "adjacent-northbound"};
  }
  if (src_rank == tgt_rank) return {false, "self-addressed"};
  if (src_rank < tgt_rank) {
    if (src_rank != tgt_rank - 1) return {false, "non-adjacent-southbound"};
    return {false, "kind-not-southbound"};
  }
  if (src_rank != tgt_rank + 1) return {false, "non-adjacent-northbound"};
  if (is_control_kind(kind)) return {false, "control-kind-northbound"};
  return {false, "kind-not-northbound"};
}

bool should_percolate(const Envelope& envelope, double layer_threshold) {
  if (envelope.direction != Direction::Northbound) {
    throw std::logic_error("should_percolate: envelope is not northbound");
  }
  return envelope.salience >= layer_threshold;
}

PublishResult Bus::publish(Envelope draft) {
  draft.seq = next_seq_++;
  draft.tick = tick_;
  draft.direction = draft.source.rank() < rank_of(draft.target)
                        ? Direction::Southbound
                        : Direction::Northbound;

  auto reject = [&](std::string reason) {
    audit_.push_back({draft.seq, Verdict::Rejected, reason, draft});
    return PublishResult{false, draft.seq, std::move(reason)};
  };

  if (draft.salience < 0.0 || draft.salience > 1.0) {
    return reject("validation:salience-out-of-range");
  }
  Decision d = authorize(draft.source, draft.target, draft.kind);
  if (!d.allow) return reject(d.reason);

  if (gate_ && std::find(gated_kinds_.begin(), gated_kinds_.end(), draft.kind) !=
                   gated_kinds_.end()) {
    if (auto rationale = gate_(draft)) {
      audit_.push_back({draft.seq, Verdict::Censored, *rationale, draft});
      return PublishResult{false, draft.seq, "censored:" + *rationale};
    }
  }

  inboxes_[rank_of(draft.target) - 1].push_back(draft);
  delivered_.push_back(draft);
  audit_.push_back({draft.seq, Verdict::Delivered, d.reason, draft});
  return PublishResult{true, draft.seq, {}};
}

std::deque<Envelope>& Bus::inbox(LayerName layer) {
  return inboxes_[rank_of(layer) - 1];
}

const std::deque<Envelope>& Bus::inbox(LayerName layer) const {
  return inboxes_[rank_of(layer) - 1];
}

std::optional<Envelope> Bus::pop(LayerName layer) {
  auto& q = inboxes_[rank_of(layer) - 1];
  if (q.empty()) return std::nullopt;
  Envelope e = q.front();
  q.pop_front();
  return e;
}

void Bus::set_gate(std::vector<MessageKind> kinds, Gate gate) {
  gated_kinds_ = std::move(kinds);
  gate_ = std::move(gate);
}

void Bus::censor(std::uint64_t seq, const std::string& rationale) {
  for (auto& q : inboxes_) {
    auto it = std::find_if(q.begin(), q.end(),
                           [&](const Envelope& e) { return e.seq == seq; });
    if (it != q.end()) {
      audit_.push_back({it->seq, Verdict::Censored, rationale, *it});
      q.erase(it);
      return;
    }
  }
  // Already delivered to a handler (or never delivered): audit only.
  for (const auto& e : delivered_) {
    if (e.seq == seq) {
      audit_.push_back({seq, Verdict::Censored, "late-censor:" + rationale, e});
      return;
    }
  }
  Envelope ghost;
  ghost.seq = seq;
  ghost.tick = tick_;
  audit_.push_back({seq, Verdict::Censored, "late-censor:unknown-seq", ghost});
}

int Bus::register_monitor(const std::string&) {
  monitor_cursors_.push_back(0);
  return static_cast<int>(monitor_cursors_.size()) - 1;
}

std::vector<Envelope> Bus::tap(int monitor_token) {
  if (monitor_token < 0 ||
      monitor_token >= static_cast<int>(monitor_cursors_.size())) {
    throw std::runtime_error("privilege error: caller is not a registered monitor");
  }
  auto& cursor = monitor_cursors_[monitor_token];
  std::vector<Envelope> out(delivered_.begin() + cursor, delivered_.end());
  cursor = delivered_.size();
  return out;
}

}  // namespace ace
