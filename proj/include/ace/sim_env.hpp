#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "ace/json.hpp"

namespace ace {

struct ScenarioError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Cell {
  int x = 0, y = 0;
  std::string room;
  std::string zone;  // "<room>.<area>"
  int dirt = 0;
  bool blocked = false;
};

struct SimObject {
  std::string id;
  int x = 0, y = 0;
  bool graspable = true;
  std::vector<std::string> hazards;
  bool removed = false;
  bool held = false;
};

struct Robot {
  int x = 0, y = 0;
  double battery = 100;
  std::optional<std::string> holding;
};

struct Owner {
  int x = 0, y = 0;
  int responds_after = 2;
};

struct SimConstants {
  double move_cost = 1;
  double clean_cost = 2;
  double grasp_cost = 1;
  double recharge_rate = 10;
  double battery_cap = 100;
};

struct ScheduledEvent {
  std::int64_t tick = 0;
  std::string target = "GlobalStrategy";
  Json payload;
};

struct Fault {
  std::string verb;
  std::string zone;
  std::string reason;
};

struct Command {
  std::string verb;
  Json args = Json::object();
};

struct StepResult {
  bool accepted = false;
  std::string reason;       // rejection reason when not accepted
  double energy_spent = 0;  // rejected commands spend nothing
  Json telemetry;           // battery and position after the step
};

// Deterministic household grid world. State changes only through step(),
// advance_tick(), and scheduled event injection handled by the runtime.
class Environment {
 public:
  static Environment from_json(const Json& scenario);
  static Environment load(const std::string& path);

  StepResult step(const Command& command);

  // Owner responses due this tick are applied, then the clock advances.
  void advance_tick();

  std::int64_t tick() const { return tick_; }

  // Pure projection of the state as a flat fact map.
  Json oracle_snapshot() const;

  // Full state for trace snapshots.
  Json snapshot() const;

  std::vector<ScheduledEvent> events_due(std::int64_t tick) const;

  // Initial world facts published to Global Strategy at tick 0.
  Json initial_world_facts() const;
  // Grid geometry view published to Executive Function at tick 0.
  Json geometry() const;

  const Json& scenario() const { return scenario_; }
  const Robot& robot() const { return robot_; }
  const std::vector<Cell>& cells() const { return cells_; }
  const std::vector<SimObject>& objects() const { return objects_; }
  const SimConstants& constants() const { return constants_; }
  const std::vector<Json>& api_log() const { return api_log_; }

  // Applies an injected world-state change (event payloads may carry a
  // "world" section, e.g. extra dirt).
  void apply_world_change(const Json& change);

 private:
  const Cell* cell_at(int x, int y) const;
  Cell* cell_at(int x, int y);
  SimObject* object_by_id(const std::string& id);
  const SimObject* object_on(int x, int y) const;
  bool adjacent_or_same(int x, int y, int tx, int ty) const;

  std::int64_t tick_ = 0;
  std::vector<Cell> cells_;
  std::vector<SimObject> objects_;
  Robot robot_;
  Owner owner_;
  int dock_x_ = 0, dock_y_ = 0;
  SimConstants constants_;
  std::vector<ScheduledEvent> schedule_;
  std::vector<Fault> faults_;
  // object id -> tick at which the owner moves it away
  std::map<std::string, std::int64_t> owner_pending_;
  std::vector<Json> api_log_;
  Json scenario_;
};

}  // namespace ace
