// Environment physics tests. Expected energy costs and fact projections are
// computed by hand from the scenario literals below and frozen here.
#include <string>
#include <vector>

#include "ace/sim_env.hpp"
#include "doctest.h"

using namespace ace;

namespace {

Json small_scenario() {
  return Json{
      {"grid",
       {{"cells",
         Json::array({
             Json{{"x", 0}, {"y", 0}, {"room", "kitchen"}, {"zone", "kitchen.floor"}, {"dirt", 0}},
             Json{{"x", 1}, {"y", 0}, {"room", "kitchen"}, {"zone", "kitchen.floor"}, {"dirt", 3}},
             Json{{"x", 2}, {"y", 0}, {"room", "kitchen"}, {"zone", "kitchen.counters"}, {"dirt", 2}},
             Json{{"x", 2}, {"y", 1}, {"room", "kitchen"}, {"zone", "kitchen.counters"}, {"dirt", 0}, {"blocked", true}},
         })}}},
      {"objects",
       Json::array({Json{{"id", "mug"}, {"x", 2}, {"y", 0}, {"graspable", true}},
                    Json{{"id", "crate"},
                         {"x", 1},
                         {"y", 0},
                         {"graspable", false},
                         {"hazards", Json::array({"obstruction"})}}})},
      {"robot", {{"x", 0}, {"y", 0}, {"battery", 50.0}}},
      {"dock", {{"x", 0}, {"y", 0}}},
      {"owner", {{"x", 3}, {"y", 3}, {"responds_after", 2}}},
  };
}

StepResult run(Environment& env, const std::string& verb, Json args = Json::object()) {
  return env.step(Command{verb, std::move(args)});
}

}  // namespace

TEST_CASE("command cost table matches the frozen physics constants") {
  Environment env = Environment::from_json(small_scenario());
  CHECK(env.robot().battery == 50.0);

  // move: 1 energy.
  auto r = run(env, "move", Json{{"to", Json::array({0, 1})}});
  // (0,1) is off grid -> blocked, no cost.
  CHECK_FALSE(r.accepted);
  CHECK(r.reason == "blocked");
  CHECK(r.energy_spent == 0.0);
  CHECK(env.robot().battery == 50.0);

  // crate occupies (1,0); the robot cannot enter it.
  r = run(env, "move", Json{{"to", Json::array({1, 0})}});
  CHECK_FALSE(r.accepted);
  CHECK(r.reason == "cell-occupied");

  // Cleaning an adjacent dirty cell costs 2.
  r = run(env, "clean_cell", Json{{"at", Json::array({1, 0})}});
  CHECK_FALSE(r.accepted);  // still occupied by the crate
  CHECK(r.reason == "cell-occupied");

  // Move in place is free and accepted.
  r = run(env, "move", Json{{"to", Json::array({0, 0})}});
  CHECK(r.accepted);
  CHECK(r.energy_spent == 0.0);

  // speak costs nothing.
  r = run(env, "speak", Json{{"text", "hello"}});
  CHECK(r.accepted);
  CHECK(r.energy_spent == 0.0);

  // Unknown verbs are rejected before any physics runs.
  r = run(env, "fly");
  CHECK_FALSE(r.accepted);
  CHECK(r.reason == "unsupported-effector");
  CHECK(env.robot().battery == 50.0);
}

TEST_CASE("movement, cleaning and grasping spend the documented energy") {
  Json scenario = small_scenario();
  scenario["objects"] = Json::array({scenario["objects"][0]});  // keep only the mug
  Environment env = Environment::from_json(scenario);

  auto r = run(env, "move", Json{{"to", Json::array({1, 0})}});
  CHECK(r.accepted);
  CHECK(r.energy_spent == 1.0);
  CHECK(env.robot().battery == 49.0);
  CHECK(r.telemetry["position"] == Json::array({1, 0}));

  // Clean the cell under the robot three times: 3 dirt at 2 energy each.
  for (int i = 0; i < 3; ++i) {
    r = run(env, "clean_cell");
    CHECK(r.accepted);
    CHECK(r.energy_spent == 2.0);
  }
  CHECK(env.robot().battery == 43.0);
  r = run(env, "clean_cell");
  CHECK_FALSE(r.accepted);
  CHECK(r.reason == "no-dirt");

  // Grasp the adjacent mug: 1 energy; second grasp fails with hands-full.
  r = run(env, "grasp", Json{{"object", "mug"}});
  CHECK(r.accepted);
  CHECK(r.energy_spent == 1.0);
  CHECK(env.robot().battery == 42.0);
  r = run(env, "grasp", Json{{"object", "mug"}});
  CHECK_FALSE(r.accepted);
  CHECK(r.reason == "hands-full");

  // Release drops the object in place for free.
  r = run(env, "release");
  CHECK(r.accepted);
  CHECK(r.energy_spent == 0.0);
  CHECK(env.objects()[0].x == 1);
  CHECK(env.objects()[0].y == 0);
  r = run(env, "release");
  CHECK_FALSE(r.accepted);
  CHECK(r.reason == "hands-empty");
}

TEST_CASE("grasp rejections: missing, distant and ungraspable objects") {
  Environment env = Environment::from_json(small_scenario());
  auto r = run(env, "grasp", Json{{"object", "ghost"}});
  CHECK_FALSE(r.accepted);
  CHECK(r.reason == "no-such-object");

  // The mug sits at (2,0), two cells from the robot.
  r = run(env, "grasp", Json{{"object", "mug"}});
  CHECK_FALSE(r.accepted);
  CHECK(r.reason == "not-here");

  // The crate is adjacent but not graspable.
  r = run(env, "grasp", Json{{"object", "crate"}});
  CHECK_FALSE(r.accepted);
  CHECK(r.reason == "cannot-grasp");
}

TEST_CASE("recharge works only at the dock and caps at battery_cap") {
  Json scenario = small_scenario();
  scenario["robot"]["battery"] = 95.0;
  Environment env = Environment::from_json(scenario);

  auto r = run(env, "recharge");
  CHECK(r.accepted);
  CHECK(env.robot().battery == 100.0);  // 95 + 10 clamped to 100

  scenario["objects"] = Json::array();
  Environment away = Environment::from_json(scenario);
  run(away, "move", Json{{"to", Json::array({1, 0})}});
  r = run(away, "recharge");
  CHECK_FALSE(r.accepted);
  CHECK(r.reason == "not-at-station");
}

TEST_CASE("a drained battery rejects every command with no-power") {
  Json scenario = small_scenario();
  scenario["robot"]["battery"] = 0.0;
  Environment env = Environment::from_json(scenario);
  for (const char* verb : {"move", "clean_cell", "grasp", "speak", "recharge"}) {
    auto r = env.step(Command{verb, Json{{"to", Json::array({0, 0})},
                                         {"object", "mug"}}});
    CHECK_FALSE(r.accepted);
    CHECK(r.reason == "no-power");
  }
}

TEST_CASE("ask_owner removes the object exactly responds_after ticks later") {
  Environment env = Environment::from_json(small_scenario());
  auto r = run(env, "ask_owner", Json{{"object", "crate"}});
  CHECK(r.accepted);
  CHECK(r.energy_spent == 0.0);

  // responds_after is 2: asked during tick 0, the owner acts at the
  // boundary of tick 2, so the object is present through ticks 0..2.
  env.advance_tick();  // -> tick 1
  CHECK_FALSE(env.objects()[1].removed);
  env.advance_tick();  // -> tick 2
  CHECK_FALSE(env.objects()[1].removed);
  env.advance_tick();  // -> tick 3, pending 2 <= 2 fired
  CHECK(env.objects()[1].removed);

  // Asking about a removed object is rejected.
  r = run(env, "ask_owner", Json{{"object", "crate"}});
  CHECK_FALSE(r.accepted);
  CHECK(r.reason == "no-such-object");
}

TEST_CASE("oracle snapshot projects zone dirt sums and object presence") {
  Environment env = Environment::from_json(small_scenario());
  Json facts = env.oracle_snapshot();
  // kitchen.floor = 0 + 3, kitchen.counters = 2 + 0 (hand-summed).
  CHECK(facts["zone.kitchen.floor.dirt"] == 3.0);
  CHECK(facts["zone.kitchen.counters.dirt"] == 2.0);
  CHECK(facts["robot.battery"] == 50.0);
  CHECK(facts["robot.x"] == 0);
  CHECK(facts["robot.y"] == 0);
  CHECK(facts["object.mug.present"] == true);
  CHECK(facts["object.mug.zone"] == "kitchen.counters");
  CHECK(facts["object.crate.present"] == true);
  CHECK(facts["tick"] == 0);

  // After asking the owner and waiting, the crate leaves the fact map.
  run(env, "ask_owner", Json{{"object", "crate"}});
  env.advance_tick();
  env.advance_tick();
  env.advance_tick();
  facts = env.oracle_snapshot();
  CHECK(facts["object.crate.present"] == false);
  CHECK_FALSE(facts.contains("object.crate.zone"));
  CHECK(facts["tick"] == 3);
}

TEST_CASE("faults override physics for matching verb and zone") {
  Json scenario = small_scenario();
  scenario["objects"] = Json::array();
  scenario["faults"] = Json::array(
      {Json{{"verb", "clean_cell"}, {"zone", "kitchen.floor"}, {"reason", "actuator-fault"}}});
  Environment env = Environment::from_json(scenario);
  run(env, "move", Json{{"to", Json::array({1, 0})}});
  auto r = run(env, "clean_cell");
  CHECK_FALSE(r.accepted);
  CHECK(r.reason == "actuator-fault");
  // The fault is zone-scoped: counters still clean normally.
  run(env, "move", Json{{"to", Json::array({2, 0})}});
  r = run(env, "clean_cell");
  CHECK(r.accepted);
}

TEST_CASE("scenario validation rejects malformed worlds") {
  Json scenario = small_scenario();
  scenario["grid"]["cells"][1]["dirt"] = 10;
  CHECK_THROWS_AS(Environment::from_json(scenario), ScenarioError);

  scenario = small_scenario();
  scenario["robot"]["x"] = 9;
  CHECK_THROWS_AS(Environment::from_json(scenario), ScenarioError);
}

TEST_CASE("identical command sequences give byte-identical snapshots") {
  auto play = [](Environment& env) {
    run(env, "move", Json{{"to", Json::array({0, 0})}});
    run(env, "speak", Json{{"text", "hi"}});
    run(env, "ask_owner", Json{{"object", "crate"}});
    env.advance_tick();
    run(env, "clean_cell", Json{{"at", Json::array({0, 0})}});
    env.advance_tick();
    env.advance_tick();
    return env.snapshot().dump();
  };
  Environment a = Environment::from_json(small_scenario());
  Environment b = Environment::from_json(small_scenario());
  CHECK(play(a) == play(b));
}

TEST_CASE("apply_world_change adds dirt and clamps each cell at 9") {
  Environment env = Environment::from_json(small_scenario());
  env.apply_world_change(Json{{"add_dirt", Json::array({Json{{"zone", "kitchen.floor"}, {"amount", 20}}})}});
  // Two floor cells at 0 and 3 dirt can absorb 9 and 6 -> 15 of the 20.
  Json facts = env.oracle_snapshot();
  CHECK(facts["zone.kitchen.floor.dirt"] == 18.0);
  CHECK(env.cells()[0].dirt == 9);
  CHECK(env.cells()[1].dirt == 9);
}

TEST_CASE("geometry exposes cells, hazards, dock and cost table") {
  Json scenario = small_scenario();
  scenario["hazard_classes"] = Json{{"obstruction", {{"reason", "cannot-grasp"}, {"contingency", "ask_owner"}}}};
  Environment env = Environment::from_json(scenario);
  Json g = env.geometry();
  CHECK(g["cells"].size() == 4);
  CHECK(g["objects"].size() == 2);
  CHECK(g["objects"][1]["hazards"] == Json::array({"obstruction"}));
  CHECK(g["dock"] == Json({{"x", 0}, {"y", 0}}));
  CHECK(g["costs"] == Json({{"move", 1.0}, {"clean", 2.0}, {"grasp", 1.0}}));
  CHECK(g["hazard_classes"].contains("obstruction"));
}
