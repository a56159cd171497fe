#include "ace/layer.hpp"

namespace ace {

void Layer::process_inbox(LayerServices& svc) {
  while (auto e = svc.bus.pop(id_)) {
    handle(*e, svc);
    if (e->direction == Direction::Northbound && is_northbound_kind(e->kind) &&
        rank() > 1 &&
        should_percolate(*e, svc.params.forward_threshold[rank() - 1])) {
      forward_north(*e, svc);
    }
  }
}

PublishResult Layer::publish(LayerServices& svc, LayerName target,
                             MessageKind kind, double salience, Json payload,
                             std::optional<std::string> correlation) {
  Envelope draft;
  draft.source = Origin::of(id_);
  draft.target = target;
  draft.kind = kind;
  draft.salience = salience;
  draft.correlation = std::move(correlation);
  draft.payload = std::move(payload);
  return svc.bus.publish(std::move(draft));
}

void Layer::forward_north(const Envelope& envelope, LayerServices& svc) {
  publish(svc, static_cast<LayerName>(rank() - 1), envelope.kind,
          envelope.salience, envelope.payload, envelope.correlation);
}

}  // namespace ace
