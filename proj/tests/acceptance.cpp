// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit when
// any criterion fails. Each check runs the real runtime against the
// shipped scenarios and inspects only externally observable artifacts
// (trace lines, audit records, environment facts).
#include <algorithm>
#include <chrono>
#include <cstdio>
#include <deque>
#include <functional>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "ace/cognitive_control.hpp"
#include "ace/executive_function.hpp"
#include "ace/runtime.hpp"

using namespace ace;

namespace {

const std::string kAssets = ACE_ASSETS_DIR;

RunConfig load(const std::string& scenario) {
  return RunConfig::load(kAssets + "/constitutions/jeeves.txt",
                         kAssets + "/scenarios/" + scenario);
}

struct Audit {
  std::vector<Json> records;

  explicit Audit(const RunResult& r) {
    for (const auto& line : r.trace_lines) {
      Json j = Json::parse(line);
      if (j.value("type", "") == "audit") records.push_back(j);
    }
  }

  int count(std::function<bool(const Json&)> pred) const {
    int n = 0;
    for (const auto& j : records) {
      if (pred(j)) ++n;
    }
    return n;
  }

  // Seq of the first delivered record of the kind, or 0 when absent.
  std::uint64_t first_seq(const std::string& kind) const {
    for (const auto& j : records) {
      if (j.value("kind", "") == kind && j.value("verdict", "") == "delivered") {
        return j.value("seq", std::uint64_t{0});
      }
    }
    return 0;
  }
};

bool tp_outcome(const Json& j, const std::string& status) {
  return j.value("kind", "") == "OutcomeSignal" &&
         j.value("source", "") == "TaskProsecution" &&
         j.value("verdict", "") == "delivered" &&
         j.value("payload", Json::object()).value("status", "") == status;
}

// --- Criterion 1: full command chain cleans the kitchen -------------------

bool criterion_full_mission(std::string& detail) {
  auto start = std::chrono::steady_clock::now();
  RunResult r = Runtime(load("jeeves_kitchen.json")).run();
  double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                              start)
                    .count();
  if (r.failed) {
    detail = "run failed: " + r.error;
    return false;
  }
  if (!r.quiescent) {
    detail = "run did not reach quiescence";
    return false;
  }
  if (secs >= 5.0) {
    detail = "run took " + std::to_string(secs) + "s";
    return false;
  }
  Audit audit(r);
  const char* chain[] = {"Mission",       "StrategicDocument", "MissionParams",
                         "Roadmap",       "TaskInstruction",   "OutcomeSignal"};
  std::uint64_t prev = 0;
  for (const char* kind : chain) {
    std::uint64_t seq = audit.first_seq(kind);
    if (seq == 0 || seq <= prev) {
      detail = std::string("message chain broken at ") + kind;
      return false;
    }
    prev = seq;
  }
  std::set<std::string> completed;
  for (const auto& j : audit.records) {
    if (tp_outcome(j, "success")) completed.insert(j["payload"].value("task", ""));
  }
  if (completed.size() < 3) {
    detail = "only " + std::to_string(completed.size()) + " tasks completed";
    return false;
  }
  for (const char* zone : {"zone.kitchen.counters.dirt", "zone.kitchen.dishwasher.dirt",
                           "zone.kitchen.floors.dirt"}) {
    if (r.oracle.value(zone, -1.0) != 0.0) {
      detail = std::string(zone) + " not zero";
      return false;
    }
  }
  return true;
}

// --- Criterion 2: scarce energy protects essential work -------------------

bool criterion_energy_triage(std::string& detail) {
  RunResult r = Runtime(load("jeeves_lowbattery.json")).run();
  if (r.failed) {
    detail = "run failed: " + r.error;
    return false;
  }
  Audit audit(r);
  bool counters_done = audit.count([](const Json& j) {
                         return tp_outcome(j, "success") &&
                                j["payload"].value("task", "") == "kitchen.counters";
                       }) > 0;
  if (!counters_done) {
    detail = "essential counters task did not complete";
    return false;
  }
  if (r.oracle.value("zone.kitchen.counters.dirt", -1.0) != 0.0) {
    detail = "essential zone still dirty";
    return false;
  }
  for (const char* id : {"kitchen.dishwasher", "kitchen.floors"}) {
    int dispatched = audit.count([&](const Json& j) {
      return j.value("kind", "") == "TaskInstruction" &&
             j.value("payload", Json::object())
                     .value("task", Json::object())
                     .value("id", "") == id;
    });
    if (dispatched != 0) {
      detail = std::string(id) + " was dispatched despite the deficit";
      return false;
    }
  }
  // The roadmap names both deferrals with an explicit reason.
  bool deferred_ok = false;
  for (const auto& j : audit.records) {
    if (j.value("kind", "") != "Roadmap") continue;
    const Json& deferred = j["payload"].value("deferred", Json::array());
    std::set<std::string> ids;
    for (const auto& d : deferred) {
      if (d.value("reason", "") == "insufficient-energy") {
        ids.insert(d.value("id", ""));
      }
    }
    if (ids.count("kitchen.dishwasher") && ids.count("kitchen.floors")) {
      deferred_ok = true;
    }
  }
  if (!deferred_ok) {
    detail = "deferrals with reason insufficient-energy not reported";
    return false;
  }
  return true;
}

// --- Criterion 3: obstruction triggers the ask-owner contingency ----------

bool criterion_obstacle_contingency(std::string& detail) {
  RunResult r = Runtime(load("jeeves_obstacle.json")).run();
  if (r.failed || !r.quiescent) {
    detail = r.failed ? "run failed: " + r.error : "no quiescence";
    return false;
  }
  Audit audit(r);
  bool grasp_failed = audit.count([](const Json& j) {
                        return tp_outcome(j, "failure") &&
                               j["payload"].value("reason", "") == "cannot-grasp";
                      }) > 0;
  if (!grasp_failed) {
    detail = "no cannot-grasp failure observed";
    return false;
  }
  bool asked = false;
  for (const auto& line : r.trace_lines) {
    Json j = Json::parse(line);
    if (j.value("type", "") == "envstep" && j.value("accepted", false) &&
        j.value("command", Json::object()).value("verb", "") == "ask_owner") {
      asked = true;
    }
  }
  if (!asked) {
    detail = "robot never asked the owner";
    return false;
  }
  bool counters_done = audit.count([](const Json& j) {
                         return tp_outcome(j, "success") &&
                                j["payload"].value("task", "") == "kitchen.counters";
                       }) > 0;
  if (!counters_done || r.oracle.value("zone.kitchen.counters.dirt", -1.0) != 0.0) {
    detail = "counters task did not finish after the contingency";
    return false;
  }
  return true;
}

// --- Criterion 4: repeated failure escalates instead of looping -----------

bool criterion_frustration_escalation(std::string& detail) {
  RunResult r = Runtime(load("frustration.json")).run();
  if (r.failed || !r.quiescent) {
    detail = r.failed ? "run failed: " + r.error : "no quiescence";
    return false;
  }
  Audit audit(r);
  int failures = audit.count([](const Json& j) { return tp_outcome(j, "failure"); });
  if (failures == 0 || failures > 5) {
    detail = std::to_string(failures) + " failures (expected 1..5)";
    return false;
  }
  std::uint64_t escalation_seq = 0;
  for (const auto& j : audit.records) {
    if (j.value("kind", "") == "Telemetry" &&
        j.value("source", "") == "CognitiveControl" &&
        j.value("target", "") == "ExecutiveFunction" &&
        j.value("verdict", "") == "delivered" &&
        j.value("payload", Json::object()).value("event", "") == "frustration") {
      escalation_seq = j.value("seq", std::uint64_t{0});
      break;
    }
  }
  if (escalation_seq == 0) {
    detail = "no frustration escalation reached the planning layer";
    return false;
  }
  // Once escalated, the failing task is never dispatched again.
  int late_dispatches = audit.count([&](const Json& j) {
    return j.value("kind", "") == "TaskInstruction" &&
           j.value("seq", std::uint64_t{0}) > escalation_seq &&
           j.value("payload", Json::object())
                   .value("task", Json::object())
                   .value("id", "") == "den.rug";
  });
  if (late_dispatches != 0) {
    detail = "failing task was re-dispatched after escalation";
    return false;
  }
  return true;
}

// --- Criterion 5: privilege enforcement under fuzzing ---------------------

// Independent restatement of the privilege policy.
bool oracle_allow(const Origin& src, LayerName tgt, MessageKind kind) {
  const bool southbound_kind =
      kind == MessageKind::Mission || kind == MessageKind::MoralJudgment ||
      kind == MessageKind::StrategicDocument ||
      kind == MessageKind::MissionParams || kind == MessageKind::Roadmap ||
      kind == MessageKind::TaskInstruction || kind == MessageKind::Directive ||
      kind == MessageKind::Censor || kind == MessageKind::Halt ||
      kind == MessageKind::Reboot;
  const bool northbound_kind = kind == MessageKind::Telemetry ||
                               kind == MessageKind::OutcomeSignal ||
                               kind == MessageKind::DilemmaEscalation;
  if (src.is_environment()) {
    bool ok_target = tgt == LayerName::GlobalStrategy ||
                     tgt == LayerName::ExecutiveFunction ||
                     tgt == LayerName::CognitiveControl;
    return ok_target &&
           (kind == MessageKind::WorldEvent || kind == MessageKind::Telemetry);
  }
  int s = src.rank(), t = rank_of(tgt);
  if (s == t - 1 && southbound_kind) return true;
  if (s == t + 1 && northbound_kind) return true;
  if (*src.layer == LayerName::Aspirational && t > 1 &&
      (kind == MessageKind::Directive || kind == MessageKind::Censor ||
       kind == MessageKind::Halt || kind == MessageKind::Reboot ||
       kind == MessageKind::Mission || kind == MessageKind::MoralJudgment)) {
    return true;
  }
  return false;
}

bool criterion_privilege_fuzz(std::string& detail) {
  Bus bus;
  std::mt19937 rng(4242);
  std::vector<Origin> origins{Origin::environment()};
  for (LayerName l : all_layers()) origins.push_back(Origin::of(l));
  std::vector<LayerName> targets = all_layers();
  std::vector<MessageKind> kinds = all_kinds();
  std::uniform_int_distribution<std::size_t> pick_o(0, origins.size() - 1);
  std::uniform_int_distribution<std::size_t> pick_t(0, targets.size() - 1);
  std::uniform_int_distribution<std::size_t> pick_k(0, kinds.size() - 1);
  std::uniform_real_distribution<double> sal(0.0, 1.0);

  for (int i = 0; i < 10000; ++i) {
    Envelope draft;
    draft.source = origins[pick_o(rng)];
    draft.target = targets[pick_t(rng)];
    draft.kind = kinds[pick_k(rng)];
    draft.salience = sal(rng);
    draft.payload = Json{{"i", i}};
    bool want = oracle_allow(draft.source, draft.target, draft.kind);
    PublishResult got = bus.publish(draft);
    if (got.delivered != want) {
      detail = "publish " + std::to_string(i) + ": delivered=" +
               (got.delivered ? "true" : "false") + " but policy says " +
               (want ? "allow" : "deny");
      return false;
    }
  }
  if (bus.audit().size() != 10000 || bus.attempts() != 10000) {
    detail = "audit trail incomplete: " + std::to_string(bus.audit().size());
    return false;
  }
  return true;
}

// --- Criterion 6: harmful objectives are censored, not executed -----------

bool criterion_harm_censorship(std::string& detail) {
  RunResult r = Runtime(load("harm.json")).run();
  if (r.failed) {
    detail = "run failed: " + r.error;
    return false;
  }
  Audit audit(r);
  int censored = audit.count(
      [](const Json& j) { return j.value("verdict", "") == "censored"; });
  if (censored != 1) {
    detail = std::to_string(censored) + " censored records (expected 1)";
    return false;
  }
  for (const auto& j : audit.records) {
    if (j.value("kind", "") == "Roadmap" && j.value("verdict", "") == "delivered" &&
        j["payload"].dump().find("pesticide") != std::string::npos) {
      detail = "harmful objective leaked into a delivered roadmap";
      return false;
    }
  }
  bool directive = audit.count([](const Json& j) {
                     return j.value("kind", "") == "Directive" &&
                            j.value("source", "") == "Aspirational" &&
                            j.value("target", "") == "GlobalStrategy" &&
                            j.value("verdict", "") == "delivered" &&
                            !j["payload"].value("drop_objectives", Json::array())
                                 .empty();
                   }) > 0;
  if (!directive) {
    detail = "no corrective directive reached the strategy layer";
    return false;
  }
  // The benign part of the mission still ran: counters got cleaned.
  if (r.oracle.value("zone.kitchen.counters.dirt", -1.0) != 0.0) {
    detail = "benign cleaning work was lost with the censored objective";
    return false;
  }
  return true;
}

// --- Criterion 7: byte-identical traces across repeated runs --------------

bool criterion_determinism(std::string& detail) {
  for (const char* scenario :
       {"jeeves_kitchen.json", "jeeves_lowbattery.json", "jeeves_obstacle.json",
        "frustration.json"}) {
    RunResult a = Runtime(load(scenario)).run();
    RunResult b = Runtime(load(scenario)).run();
    if (a.trace_lines != b.trace_lines) {
      detail = std::string(scenario) + ": traces differ";
      return false;
    }
  }
  return true;
}

// --- Criterion 8: replay reconstructs identical state ---------------------

bool criterion_replay(std::string& detail) {
  RunResult r = Runtime(load("jeeves_kitchen.json")).run();
  Json snaps;
  try {
    snaps = replay_trace(r.trace_lines);
  } catch (const TraceError& e) {
    detail = std::string("replay rejected a pristine trace: ") + e.what();
    return false;
  }
  if (snaps.dump() != r.final_snapshots.dump()) {
    detail = "replayed snapshots differ from the live run";
    return false;
  }
  // The episodic log alone reproduces the self-model.
  const Json& am = r.final_snapshots["AgentModel"];
  std::vector<EpisodicRecord> log;
  for (const auto& jr : am["episodic"]) log.push_back(EpisodicRecord::from_json(jr));
  Params params;
  AgentState folded = AgentModelLayer::replay(log, params);
  if (folded.to_json().dump() != am["state"].dump()) {
    detail = "episodic log replay diverged from the recorded state";
    return false;
  }
  return true;
}

// --- Criterion 9: property suites over randomized inputs ------------------

bool property_allocation(std::string& detail) {
  std::mt19937 rng(11);
  std::uniform_int_distribution<int> n_tasks(0, 8);
  std::uniform_real_distribution<double> frac(0.0, 1.0);
  for (int trial = 0; trial < 300; ++trial) {
    std::vector<Json> tasks;
    int n = n_tasks(rng);
    double total = 0;
    for (int i = 0; i < n; ++i) {
      Json t;
      t["id"] = "t" + std::to_string(i);
      t["essential"] = frac(rng) < 0.3;
      t["urgency"] = frac(rng);
      t["importance"] = frac(rng);
      double cost = frac(rng) * 40;
      t["cost"] = Json{{"energy", cost}};
      total += cost;
      tasks.push_back(t);
    }
    double budget = frac(rng) * 120;
    Allocation alloc = allocate_tasks(tasks, budget);
    // Invariants: reservations never exceed the budget; every task is
    // either reserved or deferred, never both or neither.
    double reserved = 0;
    for (const auto& [id, c] : alloc.reserved) reserved += c;
    if (reserved > budget + 1e-9) {
      detail = "allocation overspent the budget";
      return false;
    }
    if (alloc.reserved.size() + alloc.deferred.size() != tasks.size()) {
      detail = "allocation lost or duplicated a task";
      return false;
    }
    for (const auto& [id, reason] : alloc.deferred) {
      if (alloc.reserved.count(id)) {
        detail = "task both reserved and deferred";
        return false;
      }
    }
  }
  return true;
}

bool property_selection(std::string& detail) {
  Params params;
  std::mt19937 rng(12);
  std::uniform_int_distribution<int> n_tasks(1, 6);
  std::uniform_int_distribution<int> level(0, 4);
  std::uniform_int_distribution<int> cost(0, 50);
  for (int trial = 0; trial < 300; ++trial) {
    std::vector<Json> tasks;
    int n = n_tasks(rng);
    for (int i = 0; i < n; ++i) {
      Json t;
      t["id"] = "t" + std::to_string(i);
      t["urgency"] = level(rng) / 4.0;
      t["importance"] = level(rng) / 4.0;
      t["cost"] = Json{{"energy", double(cost(rng))}};
      tasks.push_back(t);
    }
    auto chosen = select_task(tasks, params);
    if (!chosen) {
      detail = "selection returned nothing for a non-empty roster";
      return false;
    }
    // Invariant: no candidate scores strictly higher than the winner, and
    // equal scorers never have a smaller id.
    double max_cost = 0;
    for (const auto& t : tasks) {
      max_cost = std::max(max_cost, t["cost"]["energy"].get<double>());
    }
    double best = -1;
    for (const auto& t : tasks) {
      if (t["id"] == *chosen) best = task_score(t, max_cost, params);
    }
    for (const auto& t : tasks) {
      double s = task_score(t, max_cost, params);
      if (s > best + 1e-12 ||
          (s == best && t["id"].get<std::string>() < *chosen)) {
        detail = "selection missed a better candidate";
        return false;
      }
    }
  }
  return true;
}

bool property_frustration(std::string& detail) {
  Params params;
  std::mt19937 rng(13);
  std::bernoulli_distribution coin(0.5);
  for (int trial = 0; trial < 300; ++trial) {
    FrustrationState f;
    std::deque<bool> window;
    for (int i = 0; i < 15; ++i) {
      bool failure = coin(rng);
      f.update(failure, params.frustration_window, params.frustration_threshold);
      window.push_back(failure);
      if (window.size() > 5) window.pop_front();
      int fails = int(std::count(window.begin(), window.end(), true));
      bool want = window.size() == 5 && fails / 5.0 >= 0.6;
      if (f.frustrated != want) {
        detail = "frustration disagreed with the windowed fold";
        return false;
      }
    }
  }
  return true;
}

bool property_capabilities(std::string& detail) {
  Params params;
  AgentModelLayer am(params);
  std::mt19937 rng(14);
  std::bernoulli_distribution coin(0.4);
  for (int i = 1; i <= 2000; ++i) {
    am.update_capability("prop", coin(rng), i);
    auto it = am.state().capabilities.find("prop");
    if (it != am.state().capabilities.end() &&
        (it->second < 0.0 || it->second > 1.0)) {
      detail = "confidence escaped [0,1]";
      return false;
    }
    if (it == am.state().capabilities.end() &&
        !am.state().limitations.count("prop")) {
      detail = "capability vanished without becoming a limitation";
      return false;
    }
  }
  if (!(AgentModelLayer::replay(am.log(), params) == am.state())) {
    detail = "log replay diverged after 2000 updates";
    return false;
  }
  return true;
}

bool criterion_properties(std::string& detail) {
  return property_allocation(detail) && property_selection(detail) &&
         property_frustration(detail) && property_capabilities(detail);
}

struct Criterion {
  const char* name;
  bool (*check)(std::string&);
};

}  // namespace

int main() {
  const Criterion criteria[] = {
      {"full mission: kitchen cleaned through the complete command chain",
       criterion_full_mission},
      {"energy triage: essential work only under a low battery",
       criterion_energy_triage},
      {"obstacle: ask-owner contingency unblocks the cleaning task",
       criterion_obstacle_contingency},
      {"frustration: repeated failure escalates and stops the retry loop",
       criterion_frustration_escalation},
      {"privilege: 10,000 fuzzed publishes match the policy oracle",
       criterion_privilege_fuzz},
      {"censorship: harmful objective blocked once, benign work preserved",
       criterion_harm_censorship},
      {"determinism: byte-identical traces across repeated runs",
       criterion_determinism},
      {"replay: re-executed trace reproduces identical final state",
       criterion_replay},
      {"properties: allocation, selection, frustration, capability suites",
       criterion_properties},
  };

  int failures = 0;
  for (const Criterion& c : criteria) {
    std::string detail;
    bool ok = false;
    try {
      ok = c.check(detail);
    } catch (const std::exception& e) {
      detail = std::string("exception: ") + e.what();
    }
    if (ok) {
      std::printf("PASS: %s\n", c.name);
    } else {
      std::printf("FAIL: %s (%s)\n", c.name, detail.c_str());
      ++failures;
    }
  }
  return failures == 0 ? 0 : 1;
}
