#include "ace/executive_function.hpp"

#include <algorithm>
#include <queue>

namespace ace {

Json ResourceState::to_json() const {
  Json j;
  j["energy"] = energy;
  j["time"] = time;
  j["money"] = money;
  return j;
}

ResourceState ResourceState::from_json(const Json& j) {
  ResourceState r;
  r.energy = j.value("energy", 0.0);
  r.time = j.value("time", std::int64_t{0});
  r.money = j.value("money", 0.0);
  return r;
}

Allocation allocate_tasks(const std::vector<Json>& tasks, double energy_budget) {
  std::vector<const Json*> order;
  for (const auto& t : tasks) order.push_back(&t);
  std::sort(order.begin(), order.end(), [](const Json* a, const Json* b) {
    bool ea = a->value("essential", false);
    bool eb = b->value("essential", false);
    if (ea != eb) return ea;
    double pa = a->value("urgency", 0.0) * a->value("importance", 0.0);
    double pb = b->value("urgency", 0.0) * b->value("importance", 0.0);
    if (pa != pb) return pa > pb;
    return a->value("id", "") < b->value("id", "");
  });

  Allocation alloc;
  double remaining = energy_budget;
  bool essential_starved = false;
  for (const Json* t : order) {
    std::string id = t->value("id", "");
    double cost = t->contains("cost") ? (*t)["cost"].value("energy", 0.0) : 0.0;
    bool essential = t->value("essential", false);
    // No non-essential work may take energy an essential task was denied.
    if (!essential && essential_starved) {
      alloc.deferred.emplace_back(id, "insufficient-energy");
      continue;
    }
    if (cost <= remaining) {
      alloc.reserved[id] = cost;
      remaining -= cost;
    } else {
      alloc.deferred.emplace_back(id, "insufficient-energy");
      if (essential) essential_starved = true;
    }
  }
  return alloc;
}

void validate_roadmap(const Json& roadmap) {
  std::map<std::string, std::vector<std::string>> deps;
  for (const auto& t : roadmap.at("tasks")) {
    std::string id = t.at("id").get<std::string>();
    for (const auto& p : t.value("prerequisites", Json::array())) {
      deps[id].push_back(p.get<std::string>());
    }
    if (!deps.count(id)) deps[id] = {};
  }
  for (const auto& r : roadmap.value("risks", Json::array())) {
    for (const auto& c : r.value("contingency", Json::array())) {
      if (!deps.count(c.get<std::string>())) {
        throw std::runtime_error("roadmap contingency references unknown task " +
                                 c.get<std::string>());
      }
    }
  }
  // Cycle check over prerequisites.
  std::map<std::string, int> mark;  // 0 unseen, 1 in progress, 2 done
  std::function<void(const std::string&)> visit = [&](const std::string& id) {
    int& m = mark[id];
    if (m == 2) return;
    if (m == 1) throw std::runtime_error("roadmap dependency cycle at " + id);
    m = 1;
    for (const auto& p : deps[id]) visit(p);
    m = 2;
  };
  for (const auto& [id, _] : deps) visit(id);
}

namespace {

struct Pos {
  int x = 0, y = 0;
  bool operator==(const Pos&) const = default;
  bool operator<(const Pos& o) const { return std::tie(y, x) < std::tie(o.y, o.x); }
};

struct GridView {
  std::map<Pos, Json> cells;
  std::map<Pos, Json> objects;  // objects by position
  Pos robot;

  explicit GridView(const Json& geometry) {
    for (const auto& c : geometry.value("cells", Json::array())) {
      cells[{c["x"].get<int>(), c["y"].get<int>()}] = c;
    }
    for (const auto& o : geometry.value("objects", Json::array())) {
      objects[{o["x"].get<int>(), o["y"].get<int>()}] = o;
    }
    if (geometry.contains("robot")) {
      robot = {geometry["robot"]["x"].get<int>(), geometry["robot"]["y"].get<int>()};
    }
  }

  bool passable(Pos p) const {
    auto it = cells.find(p);
    if (it == cells.end() || it->second.value("blocked", false)) return false;
    return !objects.count(p);
  }

  // Shortest path (excluding the start) to any goal cell; empty when the
  // start already satisfies the goal, no entry when unreachable.
  std::optional<std::vector<Pos>> path(Pos from, const std::vector<Pos>& goals) const {
    auto is_goal = [&](Pos p) {
      return std::find(goals.begin(), goals.end(), p) != goals.end();
    };
    if (is_goal(from)) return std::vector<Pos>{};
    std::map<Pos, Pos> parent;
    std::queue<Pos> frontier;
    frontier.push(from);
    parent[from] = from;
    while (!frontier.empty()) {
      Pos cur = frontier.front();
      frontier.pop();
      for (Pos next : {Pos{cur.x + 1, cur.y}, Pos{cur.x - 1, cur.y},
                       Pos{cur.x, cur.y + 1}, Pos{cur.x, cur.y - 1}}) {
        if (parent.count(next) || !passable(next)) continue;
        parent[next] = cur;
        if (is_goal(next)) {
          std::vector<Pos> out;
          for (Pos p = next; p != from; p = parent[p]) out.push_back(p);
          std::reverse(out.begin(), out.end());
          return out;
        }
        frontier.push(next);
      }
    }
    return std::nullopt;
  }
};

Json move_cmd(Pos p) {
  Json c;
  c["verb"] = "move";
  c["args"] = Json{{"to", Json::array({p.x, p.y})}};
  return c;
}

Json clean_cmd(Pos p) {
  Json c;
  c["verb"] = "clean_cell";
  c["args"] = Json{{"at", Json::array({p.x, p.y})}};
  return c;
}

Json verb_cmd(const std::string& verb, Json args = Json::object()) {
  Json c;
  c["verb"] = verb;
  c["args"] = std::move(args);
  return c;
}

}  // namespace

std::vector<Json> ExecutiveFunctionLayer::compile_tasks(const Json& outlines) const {
  GridView grid(geometry_);
  const Json costs = geometry_.value(
      "costs", Json{{"move", 1.0}, {"clean", 2.0}, {"grasp", 1.0}});
  Pos cursor = grid.robot;

  std::vector<Json> tasks;
  for (const auto& outline : outlines) {
    Json task = outline;
    Json approach = Json::array();
    double energy = 0;
    if (outline.value("kind", "") == "clean" && outline.contains("zone")) {
      std::string zone = outline["zone"].get<std::string>();
      std::vector<Pos> dirty;
      for (const auto& [p, c] : grid.cells) {
        if (c.value("zone", "") == zone && c.value("dirt", 0) > 0) {
          dirty.push_back(p);
        }
      }
      for (Pos cell : dirty) {
        auto obj = grid.objects.find(cell);
        std::vector<Pos> goals;
        if (obj != grid.objects.end()) {
          // Occupied cell: park adjacent, try to grasp the obstruction
          // clear, then clean from the side.
          for (Pos a : {Pos{cell.x + 1, cell.y}, Pos{cell.x - 1, cell.y},
                        Pos{cell.x, cell.y + 1}, Pos{cell.x, cell.y - 1}}) {
            if (grid.passable(a)) goals.push_back(a);
          }
        } else {
          goals.push_back(cell);
        }
        auto path = grid.path(cursor, goals);
        if (!path) continue;  // unreachable, leave to risk handling
        for (Pos p : *path) {
          approach.push_back(move_cmd(p));
          energy += costs.value("move", 1.0);
        }
        if (!path->empty()) cursor = path->back();
        if (obj != grid.objects.end()) {
          approach.push_back(verb_cmd(
              "grasp", Json{{"object", obj->second["id"].get<std::string>()}}));
          energy += costs.value("grasp", 1.0);
        }
        int dirt = grid.cells[cell].value("dirt", 0);
        for (int i = 0; i < dirt; ++i) {
          approach.push_back(clean_cmd(cell));
          energy += costs.value("clean", 2.0);
        }
      }
      task["success_def"] = Json{{"zone_dirt_zero", zone}};
      task["failure_def"] =
          Json{{"fact", "robot.battery"}, {"op", "lt"}, {"value", 2}};
    } else {
      approach.push_back(
          verb_cmd("speak", Json{{"text", outline.value("text", "")}}));
      task["success_def"] = Json{{"const", true}};
      task["failure_def"] = Json{{"const", false}};
    }
    task["approach"] = approach;
    task["cost"] = Json{{"energy", energy}, {"time", approach.size()}, {"money", 0}};
    task["prerequisites"] = Json::array();
    tasks.push_back(task);
  }
  return tasks;
}

Json ExecutiveFunctionLayer::assess_risks(const std::vector<Json>& tasks) const {
  Json risks = Json::array();
  Json hazard_classes = geometry_.value("hazard_classes", Json::object());
  int responds_after = 2;
  if (geometry_.contains("owner")) {
    responds_after = geometry_["owner"].value("responds_after", 2);
  }
  for (const auto& task : tasks) {
    if (!task.contains("zone")) continue;
    std::string zone = task["zone"].get<std::string>();
    for (const auto& obj : geometry_.value("objects", Json::array())) {
      // Object sits in this task's zone?
      bool in_zone = false;
      for (const auto& c : geometry_.value("cells", Json::array())) {
        if (c["x"] == obj["x"] && c["y"] == obj["y"] &&
            c.value("zone", "") == zone) {
          in_zone = true;
          break;
        }
      }
      if (!in_zone) continue;
      for (const auto& hazard : obj.value("hazards", Json::array())) {
        std::string hclass = hazard.get<std::string>();
        if (!hazard_classes.contains(hclass)) continue;
        const Json& spec = hazard_classes[hclass];
        std::string oid = obj["id"].get<std::string>();
        Json risk;
        risk["condition"] = Json{{"failure_reason", spec.value("reason", hclass)},
                                 {"task", task.value("id", "")}};
        Json contingency = Json::array();
        if (spec.value("contingency", "") == "ask_owner") {
          contingency.push_back("ask-owner-" + oid);
        } else {
          contingency.push_back("report-" + oid);
        }
        risk["contingency"] = contingency;
        risk["hazard"] = hclass;
        risk["object"] = oid;
        risk["responds_after"] = responds_after;
        risks.push_back(risk);
      }
    }
  }
  return risks;
}

void ExecutiveFunctionLayer::publish_roadmap(LayerServices& svc,
                                             std::vector<Json> tasks,
                                             const Allocation& alloc,
                                             const Json& risks) {
  // Allocated tasks execute in allocation order; chaining them as
  // prerequisites keeps the compiled movement paths valid.
  std::vector<std::string> allocated_order;
  {
    std::vector<const Json*> order;
    for (const auto& t : tasks) order.push_back(&t);
    std::sort(order.begin(), order.end(), [](const Json* a, const Json* b) {
      bool ea = a->value("essential", false);
      bool eb = b->value("essential", false);
      if (ea != eb) return ea;
      double pa = a->value("urgency", 0.0) * a->value("importance", 0.0);
      double pb = b->value("urgency", 0.0) * b->value("importance", 0.0);
      if (pa != pb) return pa > pb;
      return a->value("id", "") < b->value("id", "");
    });
    for (const Json* t : order) {
      std::string id = t->value("id", "");
      if (alloc.reserved.count(id)) allocated_order.push_back(id);
    }
  }
  for (auto& t : tasks) {
    std::string id = t.value("id", "");
    auto it = std::find(allocated_order.begin(), allocated_order.end(), id);
    t["allocated"] = it != allocated_order.end();
    if (it != allocated_order.end() && it != allocated_order.begin()) {
      t["prerequisites"].push_back(*(it - 1));
    }
  }

  // Contingency tasks from risks, dispatchable only as inserted
  // prerequisites.
  for (const auto& risk : risks) {
    for (const auto& cid : risk.value("contingency", Json::array())) {
      Json t;
      t["id"] = cid;
      t["objective_ref"] = "contingency";
      t["methodology"] = "contingency for " + risk["condition"].value("task", "");
      t["kind"] = "contingency";
      t["essential"] = false;
      t["urgency"] = 0.95;
      t["importance"] = 0.95;
      t["required_capabilities"] = Json::array();
      Json approach = Json::array();
      if (risk.value("hazard", "") != "" &&
          cid.get<std::string>().rfind("ask-owner-", 0) == 0) {
        std::string oid = risk.value("object", "");
        approach.push_back(verb_cmd("ask_owner", Json{{"object", oid}}));
        int waits = risk.value("responds_after", 2) + 2;
        for (int i = 0; i < waits; ++i) {
          approach.push_back(verb_cmd("speak", Json{{"text", "waiting for owner"}}));
        }
        t["success_def"] = Json{{"object_absent", oid}};
        t["failure_def"] = Json{{"const", false}};
      } else {
        approach.push_back(verb_cmd(
            "speak", Json{{"text", "reporting hazard " + risk.value("hazard", "")}}));
        t["success_def"] = Json{{"const", true}};
        t["failure_def"] = Json{{"const", false}};
      }
      t["approach"] = approach;
      t["cost"] = Json{{"energy", 0}, {"time", approach.size()}, {"money", 0}};
      t["prerequisites"] = Json::array();
      t["allocated"] = false;
      t["triggered_by"] = risk["condition"].value("task", "");
      tasks.push_back(t);
    }
  }

  Json roadmap;
  roadmap["version"] = ++version_;
  roadmap["mission_ref"] = mission_params_.value("strategic_ref", Json());
  Json jtasks = Json::array();
  for (const auto& t : tasks) jtasks.push_back(t);
  roadmap["tasks"] = jtasks;
  Json deferred = Json::array();
  for (const auto& [id, reason] : alloc.deferred) {
    deferred.push_back(Json{{"id", id}, {"reason", reason}});
  }
  roadmap["deferred"] = deferred;
  Json checkpoints = Json::array();
  if (!allocated_order.empty()) {
    Json tests = Json::array();
    for (const auto& t : tasks) {
      if (t.value("allocated", false) && t.contains("zone")) {
        tests.push_back(Json{{"zone_dirt_zero", t["zone"].get<std::string>()}});
      }
    }
    if (!tests.empty()) {
      checkpoints.push_back(Json{{"after", Json::array({allocated_order.back()})},
                                 {"test", Json{{"all", tests}}}});
    }
  }
  roadmap["checkpoints"] = checkpoints;
  roadmap["risks"] = risks;
  roadmap["budget"] = Json{{"energy", resources_.energy},
                           {"time", resources_.time},
                           {"money", resources_.money}};
  validate_roadmap(roadmap);
  roadmap_ = roadmap;
  publish(svc, LayerName::CognitiveControl, MessageKind::Roadmap, 0.9, roadmap,
          mission_params_.contains("strategic_ref") &&
                  mission_params_["strategic_ref"].is_string()
              ? std::optional<std::string>(
                    mission_params_["strategic_ref"].get<std::string>())
              : std::nullopt);
}

void ExecutiveFunctionLayer::plan(LayerServices& svc) {
  const Json& feasible = mission_params_.value("feasible", Json::array());
  if (feasible.empty()) {
    Json t;
    t["event"] = "nothing-plannable";
    publish(svc, LayerName::AgentModel, MessageKind::Telemetry, 0.6, t);
    return;
  }
  CognitionRequest req;
  req.kind = RequestKind::Plan;
  req.context["feasible"] = feasible;
  req.context["resources"] = resources_.to_json();
  req.seed = params_.seed;
  CognitionResponse resp = svc.engine.evaluate(req);

  Json outlines = Json::array();
  for (const auto& o : resp.payload["tasks"]) {
    std::string id = o.value("id", "");
    if (completed_.count(id) || dropped_.count(id)) continue;
    outlines.push_back(o);
  }
  std::vector<Json> tasks = compile_tasks(outlines);
  if (!urgent_task_.is_null() && !urgent_task_.empty()) {
    Json u;
    u["id"] = urgent_task_.value("id", "urgent");
    u["objective_ref"] = "urgent";
    u["kind"] = "generic";
    u["text"] = urgent_task_.value("text", "");
    u["methodology"] = "respond to: " + urgent_task_.value("text", "");
    u["essential"] = true;
    u["urgency"] = urgent_task_.value("urgency", 1.0);
    u["importance"] = urgent_task_.value("importance", 1.0);
    u["required_capabilities"] = Json::array();
    Json approach = Json::array();
    approach.push_back(verb_cmd("speak", Json{{"text", u["text"].get<std::string>()}}));
    u["approach"] = approach;
    u["success_def"] = Json{{"const", true}};
    u["failure_def"] = Json{{"const", false}};
    u["cost"] = Json{{"energy", 0}, {"time", 1}, {"money", 0}};
    u["prerequisites"] = Json::array();
    if (!completed_.count(u["id"].get<std::string>())) {
      tasks.insert(tasks.begin(), u);
    }
  }
  Json risks = assess_risks(tasks);
  Allocation alloc = allocate_tasks(tasks, resources_.energy);
  if (alloc.reserved.empty()) {
    Json t;
    t["event"] = "nothing-plannable";
    t["reason"] = "no task fits the energy budget";
    publish(svc, LayerName::AgentModel, MessageKind::Telemetry, 0.6, t);
    if (alloc.deferred.empty()) return;
  }
  publish_roadmap(svc, std::move(tasks), alloc, risks);
}

void ExecutiveFunctionLayer::replan(LayerServices& svc, const std::string& reason,
                                    const std::string& failed_task) {
  if (!have_params_) return;
  if (!failed_task.empty()) dropped_.insert(failed_task);
  plan(svc);
}

void ExecutiveFunctionLayer::handle(const Envelope& envelope, LayerServices& svc) {
  switch (envelope.kind) {
    case MessageKind::Telemetry: {
      const Json& p = envelope.payload;
      if (p.contains("battery")) {
        resources_.energy = p["battery"].get<double>();
      }
      if (p.contains("position") && geometry_.contains("robot")) {
        geometry_["robot"] =
            Json{{"x", p["position"][0].get<int>()}, {"y", p["position"][1].get<int>()}};
      }
      if (p.value("event", "") == "frustration") {
        replan(svc, "escalated-frustration", p.value("task", ""));
      }
      break;
    }
    case MessageKind::WorldEvent: {
      const Json& p = envelope.payload;
      if (p.contains("geometry")) {
        set_geometry(p["geometry"]);
        break;
      }
      if (p.contains("urgent_task")) {
        // Sudden environmental change: prepend a high-urgency task and
        // re-issue; the mission itself is unchanged.
        urgent_task_ = p["urgent_task"];
        replan(svc, "urgent-world-event", "");
        break;
      }
      if (p.contains("facts") && have_params_ && roadmap_.contains("tasks")) {
        bool touches = false;
        for (auto it = p["facts"].begin(); it != p["facts"].end() && !touches; ++it) {
          for (const auto& t : roadmap_["tasks"]) {
            if (t.contains("zone") &&
                it.key() == "zone." + t["zone"].get<std::string>() + ".dirt") {
              touches = true;
              break;
            }
          }
        }
        if (touches) replan(svc, "material-world-delta", "");
      }
      break;
    }
    case MessageKind::MissionParams:
      mission_params_ = envelope.payload;
      have_params_ = true;
      plan(svc);
      break;
    case MessageKind::OutcomeSignal: {
      std::string task = envelope.payload.value("task", "");
      if (envelope.payload.value("status", "") == "success") {
        completed_.insert(task);
      }
      break;
    }
    default:
      break;
  }
}

Json ExecutiveFunctionLayer::snapshot() const {
  Json j;
  j["geometry"] = geometry_;
  j["resources"] = resources_.to_json();
  j["mission_params"] = mission_params_;
  j["have_params"] = have_params_;
  j["roadmap"] = roadmap_;
  j["version"] = version_;
  Json comp = Json::array();
  for (const auto& c : completed_) comp.push_back(c);
  j["completed"] = comp;
  Json drop = Json::array();
  for (const auto& d : dropped_) drop.push_back(d);
  j["dropped"] = drop;
  j["urgent_task"] = urgent_task_;
  return j;
}

void ExecutiveFunctionLayer::restore(const Json& snap) {
  geometry_ = snap.at("geometry");
  resources_ = ResourceState::from_json(snap.at("resources"));
  mission_params_ = snap.at("mission_params");
  have_params_ = snap.at("have_params").get<bool>();
  roadmap_ = snap.at("roadmap");
  version_ = snap.at("version").get<std::int64_t>();
  completed_.clear();
  for (const auto& c : snap.at("completed")) completed_.insert(c.get<std::string>());
  dropped_.clear();
  for (const auto& d : snap.at("dropped")) dropped_.insert(d.get<std::string>());
  urgent_task_ = snap.value("urgent_task", Json());
}

}  // namespace ace
