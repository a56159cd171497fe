#pragma once

#include <deque>
#include <map>

#include "ace/constitution.hpp"
#include "ace/layer.hpp"

namespace ace {

// Layer 1: holds the constitution, seeds the mission, polices everything
// below through the tap and a pre-delivery gate, and intervenes with
// Directive / Censor / Halt / Reboot.
class AspirationalLayer : public Layer {
 public:
  AspirationalLayer(const Params& params, Constitution constitution)
      : Layer(LayerName::Aspirational),
        params_(params),
        constitution_(std::move(constitution)) {}

  // Registers the pre-delivery gate (StrategicDocument, Roadmap) and the
  // monitor token for the review tap. Call once before the first tick.
  void attach(Bus& bus, CognitionEngine& engine);

  // One Mission envelope per mission statement (principles-only when the
  // constitution has no statement); target is always GlobalStrategy.
  void issue_missions(LayerServices& svc);

  void handle(const Envelope& envelope, LayerServices& svc) override;
  void on_tick(LayerServices& svc) override;
  Json snapshot() const override;
  void restore(const Json& snap) override;

  const Constitution& constitution() const { return constitution_; }
  bool quiet() const { return pending_.empty(); }

 private:
  struct PendingIntervention {
    MessageKind kind = MessageKind::Directive;
    LayerName target = LayerName::GlobalStrategy;
    Json payload;
  };

  // Judges one delivered envelope from the tap; queues interventions.
  void review(const Envelope& envelope);
  void record_denial(const Envelope& envelope);
  void resolve_dilemma(const Envelope& envelope, LayerServices& svc);

  const Params& params_;
  Constitution constitution_;
  CognitionEngine* engine_ = nullptr;
  int monitor_token_ = -1;
  std::vector<PendingIntervention> pending_;
  // Source-layer name -> ticks of recent denials (for halt escalation).
  std::map<std::string, std::deque<std::int64_t>> denials_;
  std::map<std::string, bool> halted_;
  std::int64_t current_tick_ = 0;
};

}  // namespace ace
