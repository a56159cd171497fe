#pragma once

#include <cstdint>
#include <deque>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ace/json.hpp"

namespace ace {

enum class LayerName : int {
  Aspirational = 1,
  GlobalStrategy = 2,
  AgentModel = 3,
  ExecutiveFunction = 4,
  CognitiveControl = 5,
  TaskProsecution = 6,
};

constexpr int kNumLayers = 6;

std::string_view to_string(LayerName layer);
std::optional<LayerName> layer_from_string(std::string_view name);
constexpr int rank_of(LayerName layer) { return static_cast<int>(layer); }
std::vector<LayerName> all_layers();

// Message source: a layer, or the distinguished Environment pseudo-source
// (rank 0, outside the privilege hierarchy).
struct Origin {
  std::optional<LayerName> layer;

  static Origin environment() { return Origin{std::nullopt}; }
  static Origin of(LayerName l) { return Origin{l}; }
  bool is_environment() const { return !layer.has_value(); }
  int rank() const { return layer ? rank_of(*layer) : 0; }
  std::string_view name() const {
    return layer ? to_string(*layer) : std::string_view{"Environment"};
  }
  bool operator==(const Origin&) const = default;
};

std::optional<Origin> origin_from_string(std::string_view name);

enum class MessageKind {
  Mission,
  MoralJudgment,
  StrategicDocument,
  MissionParams,
  Roadmap,
  TaskInstruction,
  Telemetry,
  OutcomeSignal,
  DilemmaEscalation,
  Directive,
  Censor,
  Halt,
  Reboot,
  WorldEvent,
};

constexpr int kNumKinds = 14;

std::string_view to_string(MessageKind kind);
std::optional<MessageKind> kind_from_string(std::string_view name);
std::vector<MessageKind> all_kinds();

// {Directive, Censor, Halt, Reboot}: permitted only southward.
bool is_control_kind(MessageKind kind);
// {Telemetry, OutcomeSignal, DilemmaEscalation}: northbound-only.
bool is_northbound_kind(MessageKind kind);
// Everything a superior layer may send its direct subordinate.
bool is_southbound_kind(MessageKind kind);

enum class Direction { Southbound, Northbound };
std::string_view to_string(Direction d);

struct Envelope {
  std::uint64_t seq = 0;  // assigned by the bus
  std::int64_t tick = 0;
  Origin source;
  LayerName target = LayerName::GlobalStrategy;
  Direction direction = Direction::Southbound;
  MessageKind kind = MessageKind::Telemetry;
  double salience = 0.0;
  std::optional<std::string> correlation;
  Json payload;

  // Field order fixed: seq, tick, source, target, direction, kind,
  // salience, correlation, payload.
  Json to_json() const;
  static Envelope from_json(const Json& j);
};

enum class Verdict { Delivered, Rejected, Censored };
std::string_view to_string(Verdict v);

struct AuditRecord {
  std::uint64_t seq = 0;
  Verdict verdict = Verdict::Delivered;
  std::string reason;
  Envelope envelope;

  Json to_json() const;  // envelope fields first, then verdict/reason
};

struct Decision {
  bool allow = false;
  std::string reason;
};

// The privilege rule table. Total function, never throws.
Decision authorize(Origin source, LayerName target, MessageKind kind);

// True iff a northbound envelope clears the receiving layer's forward
// threshold and should be re-wrapped for the next layer up.
bool should_percolate(const Envelope& envelope, double layer_threshold);

struct PublishResult {
  bool delivered = false;
  std::uint64_t seq = 0;
  std::string reason;  // set when not delivered
};

// Single ordered append point between layers. Owns inboxes and the audit
// trail; read-only taps are restricted to registered monitors.
class Bus {
 public:
  using Gate = std::function<std::optional<std::string>(const Envelope&)>;

  // Drafts carry source/target/kind/salience/correlation/payload; the bus
  // stamps seq, tick, and direction.
  PublishResult publish(Envelope draft);

  void set_tick(std::int64_t tick) { tick_ = tick; }
  std::int64_t tick() const { return tick_; }

  std::deque<Envelope>& inbox(LayerName layer);
  const std::deque<Envelope>& inbox(LayerName layer) const;
  std::optional<Envelope> pop(LayerName layer);

  // Pre-delivery censorship gate, applied to the given kinds after
  // authorization. A non-empty return censors the envelope.
  void set_gate(std::vector<MessageKind> kinds, Gate gate);

  // Removes a delivered-but-unprocessed envelope from its target inbox.
  // Already-processed envelopes are recorded as a late censor, audit only.
  void censor(std::uint64_t seq, const std::string& rationale);

  // Monitor registration for taps (Aspirational and the trace recorder).
  int register_monitor(const std::string& who);

  // Delivered envelopes in global seq order, starting at the monitor's
  // cursor. Advances the cursor; never touches inboxes.
  std::vector<Envelope> tap(int monitor_token);

  const std::vector<AuditRecord>& audit() const { return audit_; }
  std::uint64_t attempts() const { return next_seq_ - 1; }

 private:
  std::int64_t tick_ = 0;
  std::uint64_t next_seq_ = 1;
  std::deque<Envelope> inboxes_[kNumLayers];
  std::vector<AuditRecord> audit_;
  std::vector<Envelope> delivered_;
  std::vector<MessageKind> gated_kinds_;
  Gate gate_;
  std::vector<std::size_t> monitor_cursors_;
};

}  // namespace ace
