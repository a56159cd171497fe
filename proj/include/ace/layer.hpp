#pragma once

#include <functional>

#include "ace/cognition.hpp"
#include "ace/messaging.hpp"
#include "ace/params.hpp"

namespace ace {

struct ProtocolError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// What a layer may touch while handling an envelope: the bus, its
// cognition engine, the run parameters, and a trace note sink.
struct LayerServices {
  Bus& bus;
  CognitionEngine& engine;
  const Params& params;
  std::function<void(const Json&)> note;  // extra trace records (may be empty)

  void trace(const Json& j) const {
    if (note) note(j);
  }
};

class Layer {
 public:
  explicit Layer(LayerName id) : id_(id) {}
  virtual ~Layer() = default;

  LayerName id() const { return id_; }
  int rank() const { return rank_of(id_); }

  virtual void handle(const Envelope& envelope, LayerServices& svc) = 0;
  // Spontaneous work after the inbox drains (dispatching, execution).
  virtual void on_tick(LayerServices& svc) {}

  virtual Json snapshot() const = 0;
  virtual void restore(const Json& snap) = 0;

  // Drains the inbox in seq order; northbound envelopes that clear this
  // layer's threshold are re-wrapped with this layer as source and
  // forwarded one hop up.
  void process_inbox(LayerServices& svc);

 protected:
  PublishResult publish(LayerServices& svc, LayerName target, MessageKind kind,
                        double salience, Json payload,
                        std::optional<std::string> correlation = std::nullopt);

  void forward_north(const Envelope& envelope, LayerServices& svc);

 private:
  LayerName id_;
};

}  // namespace ace
