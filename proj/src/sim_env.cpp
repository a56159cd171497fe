#include "ace/sim_env.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

namespace ace {

Environment Environment::from_json(const Json& scenario) {
  Environment env;
  env.scenario_ = scenario;
  const Json& grid = scenario.at("grid");
  for (const auto& jc : grid.at("cells")) {
    Cell c;
    c.x = jc.at("x").get<int>();
    c.y = jc.at("y").get<int>();
    c.room = jc.value("room", "room");
    c.zone = jc.value("zone", c.room + ".area");
    c.dirt = jc.value("dirt", 0);
    c.blocked = jc.value("blocked", false);
    if (c.dirt < 0 || c.dirt > 9) throw ScenarioError("cell dirt out of 0..9");
    env.cells_.push_back(c);
  }
  if (scenario.contains("objects")) {
    for (const auto& jo : scenario["objects"]) {
      SimObject o;
      o.id = jo.at("id").get<std::string>();
      o.x = jo.at("x").get<int>();
      o.y = jo.at("y").get<int>();
      o.graspable = jo.value("graspable", true);
      if (jo.contains("hazards")) {
        for (const auto& h : jo["hazards"]) o.hazards.push_back(h.get<std::string>());
      }
      env.objects_.push_back(o);
    }
  }
  const Json& jr = scenario.at("robot");
  env.robot_.x = jr.at("x").get<int>();
  env.robot_.y = jr.at("y").get<int>();
  env.robot_.battery = jr.value("battery", 100.0);
  if (scenario.contains("dock")) {
    env.dock_x_ = scenario["dock"].at("x").get<int>();
    env.dock_y_ = scenario["dock"].at("y").get<int>();
  }
  if (scenario.contains("owner")) {
    const Json& jw = scenario["owner"];
    env.owner_.x = jw.value("x", 0);
    env.owner_.y = jw.value("y", 0);
    env.owner_.responds_after = jw.value("responds_after", 2);
  }
  if (scenario.contains("constants")) {
    const Json& k = scenario["constants"];
    env.constants_.move_cost = k.value("move_cost", 1.0);
    env.constants_.clean_cost = k.value("clean_cost", 2.0);
    env.constants_.grasp_cost = k.value("grasp_cost", 1.0);
    env.constants_.recharge_rate = k.value("recharge_rate", 10.0);
    env.constants_.battery_cap = k.value("battery_cap", 100.0);
  }
  if (scenario.contains("events")) {
    for (const auto& je : scenario["events"]) {
      ScheduledEvent e;
      e.tick = je.at("tick").get<std::int64_t>();
      e.target = je.value("target", "GlobalStrategy");
      e.payload = je.at("payload");
      env.schedule_.push_back(e);
    }
    std::stable_sort(env.schedule_.begin(), env.schedule_.end(),
                     [](const ScheduledEvent& a, const ScheduledEvent& b) {
                       return a.tick < b.tick;
                     });
  }
  if (scenario.contains("faults")) {
    for (const auto& jf : scenario["faults"]) {
      env.faults_.push_back({jf.at("verb").get<std::string>(),
                             jf.value("zone", ""),
                             jf.value("reason", "actuator-fault")});
    }
  }
  if (!env.cell_at(env.robot_.x, env.robot_.y)) {
    throw ScenarioError("robot start cell is not part of the grid");
  }
  return env;
}

Environment Environment::load(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw ScenarioError("cannot read scenario file: " + path);
  Json j = Json::parse(f, nullptr, true, true);
  return from_json(j);
}

const Cell* Environment::cell_at(int x, int y) const {
  for (const auto& c : cells_) {
    if (c.x == x && c.y == y) return &c;
  }
  return nullptr;
}

Cell* Environment::cell_at(int x, int y) {
  return const_cast<Cell*>(std::as_const(*this).cell_at(x, y));
}

SimObject* Environment::object_by_id(const std::string& id) {
  for (auto& o : objects_) {
    if (o.id == id) return &o;
  }
  return nullptr;
}

const SimObject* Environment::object_on(int x, int y) const {
  for (const auto& o : objects_) {
    if (!o.removed && !o.held && o.x == x && o.y == y) return &o;
  }
  return nullptr;
}

bool Environment::adjacent_or_same(int x, int y, int tx, int ty) const {
  return std::abs(x - tx) + std::abs(y - ty) <= 1;
}

StepResult Environment::step(const Command& command) {
  auto telemetry = [&]() {
    Json t;
    t["battery"] = robot_.battery;
    t["position"] = Json::array({robot_.x, robot_.y});
    return t;
  };
  auto reject = [&](std::string reason) {
    return StepResult{false, std::move(reason), 0, telemetry()};
  };
  auto accept = [&](double cost) {
    robot_.battery -= cost;
    return StepResult{true, "", cost, telemetry()};
  };

  if (robot_.battery <= 0) return reject("no-power");

  for (const auto& f : faults_) {
    if (f.verb != command.verb) continue;
    if (!f.zone.empty()) {
      int tx = robot_.x, ty = robot_.y;
      if (command.args.contains("at")) {
        tx = command.args["at"][0].get<int>();
        ty = command.args["at"][1].get<int>();
      }
      const Cell* c = cell_at(tx, ty);
      if (!c || c->zone != f.zone) continue;
    }
    return reject(f.reason);
  }

  if (command.verb == "move") {
    int tx = command.args.at("to")[0].get<int>();
    int ty = command.args.at("to")[1].get<int>();
    if (tx == robot_.x && ty == robot_.y) return accept(0);
    if (!adjacent_or_same(robot_.x, robot_.y, tx, ty)) return reject("not-adjacent");
    const Cell* c = cell_at(tx, ty);
    if (!c || c->blocked) return reject("blocked");
    if (object_on(tx, ty)) return reject("cell-occupied");
    if (robot_.battery < constants_.move_cost) return reject("no-power");
    robot_.x = tx;
    robot_.y = ty;
    return accept(constants_.move_cost);
  }
  if (command.verb == "clean_cell") {
    int tx = robot_.x, ty = robot_.y;
    if (command.args.contains("at")) {
      tx = command.args["at"][0].get<int>();
      ty = command.args["at"][1].get<int>();
    }
    if (!adjacent_or_same(robot_.x, robot_.y, tx, ty)) return reject("not-adjacent");
    Cell* c = cell_at(tx, ty);
    if (!c) return reject("blocked");
    if (object_on(tx, ty)) return reject("cell-occupied");
    if (c->dirt <= 0) return reject("no-dirt");
    if (robot_.battery < constants_.clean_cost) return reject("no-power");
    c->dirt -= 1;
    return accept(constants_.clean_cost);
  }
  if (command.verb == "grasp") {
    if (robot_.holding) return reject("hands-full");
    SimObject* o = object_by_id(command.args.at("object").get<std::string>());
    if (!o || o->removed || o->held) return reject("no-such-object");
    if (!adjacent_or_same(robot_.x, robot_.y, o->x, o->y)) return reject("not-here");
    if (!o->graspable) return reject("cannot-grasp");
    if (robot_.battery < constants_.grasp_cost) return reject("no-power");
    o->held = true;
    robot_.holding = o->id;
    return accept(constants_.grasp_cost);
  }
  if (command.verb == "release") {
    if (!robot_.holding) return reject("hands-empty");
    SimObject* o = object_by_id(*robot_.holding);
    o->held = false;
    o->x = robot_.x;
    o->y = robot_.y;
    robot_.holding.reset();
    return accept(0);
  }
  if (command.verb == "ask_owner") {
    std::string id = command.args.at("object").get<std::string>();
    SimObject* o = object_by_id(id);
    if (!o || o->removed) return reject("no-such-object");
    if (!owner_pending_.count(id)) {
      owner_pending_[id] = tick_ + owner_.responds_after;
    }
    return accept(0);
  }
  if (command.verb == "speak") {
    return accept(0);
  }
  if (command.verb == "recharge") {
    if (robot_.x != dock_x_ || robot_.y != dock_y_) return reject("not-at-station");
    robot_.battery = std::min(constants_.battery_cap,
                              robot_.battery + constants_.recharge_rate);
    return StepResult{true, "", 0, telemetry()};
  }
  if (command.verb == "api_call") {
    api_log_.push_back(command.args);
    return accept(0);
  }
  return reject("unsupported-effector");
}

void Environment::advance_tick() {
  for (auto it = owner_pending_.begin(); it != owner_pending_.end();) {
    if (it->second <= tick_) {
      if (SimObject* o = object_by_id(it->first)) o->removed = true;
      it = owner_pending_.erase(it);
    } else {
      ++it;
    }
  }
  ++tick_;
}

Json Environment::oracle_snapshot() const {
  std::map<std::string, double> zone_dirt;
  for (const auto& c : cells_) zone_dirt[c.zone] += c.dirt;
  Json facts;
  for (const auto& [zone, dirt] : zone_dirt) {
    facts["zone." + zone + ".dirt"] = dirt;
  }
  facts["robot.battery"] = robot_.battery;
  facts["robot.x"] = robot_.x;
  facts["robot.y"] = robot_.y;
  for (const auto& o : objects_) {
    bool present = !o.removed && !o.held;
    facts["object." + o.id + ".present"] = present;
    if (present) {
      if (const Cell* c = cell_at(o.x, o.y); c) {
        facts["object." + o.id + ".zone"] = c->zone;
      }
    }
  }
  facts["tick"] = tick_;
  return facts;
}

Json Environment::snapshot() const {
  Json j;
  j["tick"] = tick_;
  j["robot"] = Json{{"x", robot_.x},
                    {"y", robot_.y},
                    {"battery", robot_.battery},
                    {"holding", robot_.holding ? Json(*robot_.holding) : Json()}};
  Json jcells = Json::array();
  for (const auto& c : cells_) {
    jcells.push_back(Json{{"x", c.x}, {"y", c.y}, {"zone", c.zone}, {"dirt", c.dirt}});
  }
  j["cells"] = jcells;
  Json jobjs = Json::array();
  for (const auto& o : objects_) {
    jobjs.push_back(Json{{"id", o.id},
                         {"x", o.x},
                         {"y", o.y},
                         {"removed", o.removed},
                         {"held", o.held}});
  }
  j["objects"] = jobjs;
  return j;
}

std::vector<ScheduledEvent> Environment::events_due(std::int64_t tick) const {
  std::vector<ScheduledEvent> due;
  for (const auto& e : schedule_) {
    if (e.tick == tick) due.push_back(e);
  }
  return due;
}

Json Environment::initial_world_facts() const {
  std::map<std::string, double> zone_dirt;
  std::map<std::string, std::pair<bool, std::string>> zone_meta;
  for (const auto& c : cells_) zone_dirt[c.zone] += c.dirt;
  if (scenario_.contains("zones")) {
    for (const auto& z : scenario_["zones"]) {
      zone_meta[z.at("name").get<std::string>()] = {
          z.value("essential", false), z.value("capability", "clean")};
    }
  }
  Json facts;
  for (const auto& [zone, dirt] : zone_dirt) {
    facts["zone." + zone + ".dirt"] = dirt;
    auto it = zone_meta.find(zone);
    facts["zone." + zone + ".essential"] = it != zone_meta.end() && it->second.first;
    facts["zone." + zone + ".capability"] =
        it != zone_meta.end() ? it->second.second : "clean";
  }
  for (const auto& o : objects_) {
    if (o.removed || o.held) continue;
    if (const Cell* c = cell_at(o.x, o.y); c) {
      facts["object." + o.id + ".zone"] = c->zone;
    }
  }
  if (scenario_.contains("suggestions")) {
    for (auto it = scenario_["suggestions"].begin();
         it != scenario_["suggestions"].end(); ++it) {
      facts["suggestion." + it.key()] = it.value();
    }
  }
  return facts;
}

Json Environment::geometry() const {
  Json j;
  Json jcells = Json::array();
  for (const auto& c : cells_) {
    jcells.push_back(Json{{"x", c.x},
                          {"y", c.y},
                          {"room", c.room},
                          {"zone", c.zone},
                          {"dirt", c.dirt},
                          {"blocked", c.blocked}});
  }
  j["cells"] = jcells;
  Json jobjs = Json::array();
  for (const auto& o : objects_) {
    if (o.removed || o.held) continue;
    Json jo;
    jo["id"] = o.id;
    jo["x"] = o.x;
    jo["y"] = o.y;
    jo["graspable"] = o.graspable;
    jo["hazards"] = o.hazards;
    jobjs.push_back(jo);
  }
  j["objects"] = jobjs;
  j["robot"] = Json{{"x", robot_.x}, {"y", robot_.y}};
  j["dock"] = Json{{"x", dock_x_}, {"y", dock_y_}};
  j["owner"] = Json{{"x", owner_.x},
                    {"y", owner_.y},
                    {"responds_after", owner_.responds_after}};
  j["costs"] = Json{{"move", constants_.move_cost},
                    {"clean", constants_.clean_cost},
                    {"grasp", constants_.grasp_cost}};
  if (scenario_.contains("hazard_classes")) {
    j["hazard_classes"] = scenario_["hazard_classes"];
  }
  return j;
}

void Environment::apply_world_change(const Json& change) {
  if (change.contains("add_dirt")) {
    for (const auto& d : change["add_dirt"]) {
      std::string zone = d.at("zone").get<std::string>();
      int amount = d.at("amount").get<int>();
      for (auto& c : cells_) {
        if (c.zone == zone && amount > 0) {
          int add = std::min(amount, 9 - c.dirt);
          c.dirt += add;
          amount -= add;
        }
      }
    }
  }
}

}  // namespace ace
