#pragma once

#include <map>

#include "ace/layer.hpp"

namespace ace {

struct Fact {
  Json value;
  std::int64_t tick = 0;
  std::uint64_t seq = 0;
  std::string source;
};

// Environmental context: last-writer-wins facts with (tick, seq) ordering
// and full provenance.
class WorldModel {
 public:
  // Returns the keys whose values changed.
  std::vector<std::string> ingest(const Json& facts, std::int64_t tick,
                                  std::uint64_t seq, const std::string& source);

  const std::map<std::string, Fact>& facts() const { return facts_; }
  std::int64_t version() const { return version_; }
  Json plain_facts() const;

  Json to_json() const;
  static WorldModel from_json(const Json& j);

 private:
  std::map<std::string, Fact> facts_;
  std::int64_t version_ = 0;
};

class GlobalStrategyLayer : public Layer {
 public:
  explicit GlobalStrategyLayer(const Params& params)
      : Layer(LayerName::GlobalStrategy), params_(params) {}

  void handle(const Envelope& envelope, LayerServices& svc) override;
  Json snapshot() const override;
  void restore(const Json& snap) override;

  // Builds a strategic document for the current mission and world model.
  Json formulate(LayerServices& svc);

  // True when a world delta warrants re-issuing the document.
  bool material(const std::vector<std::string>& changed_keys) const;

  const WorldModel& world() const { return world_; }

 private:
  void emit_document(LayerServices& svc);

  const Params& params_;
  WorldModel world_;
  Json mission_;  // {statement, imperatives, correlation}
  bool have_mission_ = false;
  Json current_doc_;
  std::vector<std::string> suppressed_;
  std::int64_t doc_counter_ = 0;
};

}  // namespace ace
