// Aspirational-layer tests: mission seeding, the pre-delivery gate, the
// repeated-denial halt policy, and dilemma resolution.
#include <fstream>
#include <sstream>

#include "ace/aspirational.hpp"
#include "doctest.h"

using namespace ace;

namespace {

std::string read_file(const std::string& path) {
  std::ifstream f(path);
  REQUIRE(f.good());
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

struct Fixture {
  Params params;
  Bus bus;
  RuleEngine engine;
  std::vector<Json> notes;
  AspirationalLayer asp;
  LayerServices svc;

  explicit Fixture(const std::string& constitution_file)
      : asp(params, load_constitution(std::string(ACE_ASSETS_DIR) +
                                      "/constitutions/" + constitution_file)),
        svc{bus, engine, params, [this](const Json& j) { notes.push_back(j); }} {
    asp.attach(bus, engine);
  }

  // A strategic document from Global Strategy headed south to Agent Model.
  PublishResult publish_doc(Json payload) {
    Envelope draft;
    draft.source = Origin::of(LayerName::GlobalStrategy);
    draft.target = LayerName::AgentModel;
    draft.kind = MessageKind::StrategicDocument;
    draft.salience = 0.9;
    draft.payload = std::move(payload);
    return bus.publish(std::move(draft));
  }

  int count_inbox(LayerName layer, MessageKind kind) {
    int n = 0;
    for (const auto& e : bus.inbox(layer)) {
      if (e.kind == kind) ++n;
    }
    return n;
  }
};

Json harmful_doc() {
  Json doc;
  doc["objectives"] = Json::array(
      {Json{{"text", "spray industrial pesticide"}, {"harm", true}},
       Json{{"text", "wipe the counters"}}});
  return doc;
}

}  // namespace

TEST_CASE("issue_missions publishes one Mission carrying the statement") {
  Fixture fx("jeeves.txt");
  fx.asp.issue_missions(fx.svc);
  REQUIRE(fx.bus.inbox(LayerName::GlobalStrategy).size() == 1);
  const Envelope& m = fx.bus.inbox(LayerName::GlobalStrategy).front();
  CHECK(m.kind == MessageKind::Mission);
  CHECK(m.salience == 1.0);
  CHECK(m.correlation == "mission-1");
  CHECK(m.payload["statement"] ==
        "Assist residents through helpful actions and responsibilities.");
  CHECK(m.payload["imperatives"].size() == fx.asp.constitution().imperatives().size());
}

TEST_CASE("each constitution produces its own mission statement") {
  Fixture med("medical.txt");
  med.asp.issue_missions(med.svc);
  const Envelope& m = med.bus.inbox(LayerName::GlobalStrategy).front();
  CHECK(m.payload["statement"] ==
        "Achieve the best possible health outcome for the patient.");
  // The statement text really comes from the file, not a constant.
  CHECK(read_file(std::string(ACE_ASSETS_DIR) + "/constitutions/medical.txt")
            .find(m.payload["statement"].get<std::string>()) != std::string::npos);
}

TEST_CASE("the gate censors harmful strategic documents before delivery") {
  Fixture fx("default.txt");
  PublishResult r = fx.publish_doc(harmful_doc());
  CHECK_FALSE(r.delivered);
  // Exactly one audit record, verdict censored, nothing in the target inbox.
  REQUIRE(fx.bus.audit().size() == 1);
  CHECK(fx.bus.audit()[0].verdict == Verdict::Censored);
  CHECK_FALSE(fx.bus.audit()[0].reason.empty());
  CHECK(fx.bus.inbox(LayerName::AgentModel).empty());

  // The queued interventions flush on the next tick: a Censor that marks
  // the record as already written, plus a Directive naming the objective
  // to drop.
  CHECK_FALSE(fx.asp.quiet());
  fx.asp.on_tick(fx.svc);
  CHECK(fx.asp.quiet());
  REQUIRE(fx.count_inbox(LayerName::GlobalStrategy, MessageKind::Censor) == 1);
  REQUIRE(fx.count_inbox(LayerName::GlobalStrategy, MessageKind::Directive) == 1);
  for (const auto& e : fx.bus.inbox(LayerName::GlobalStrategy)) {
    if (e.kind == MessageKind::Censor) {
      CHECK(e.payload["already_censored"] == true);
      CHECK(e.payload["subject"] == r.seq);
    }
    if (e.kind == MessageKind::Directive) {
      CHECK(e.payload["drop_objectives"] ==
            Json::array({"spray industrial pesticide"}));
    }
  }
}

TEST_CASE("benign strategic documents pass the gate untouched") {
  Fixture fx("default.txt");
  Json doc;
  doc["objectives"] = Json::array({Json{{"text", "wipe the counters"}}});
  PublishResult r = fx.publish_doc(doc);
  CHECK(r.delivered);
  CHECK(fx.bus.audit()[0].verdict == Verdict::Delivered);
  CHECK(fx.bus.inbox(LayerName::AgentModel).size() == 1);
  fx.asp.on_tick(fx.svc);
  CHECK(fx.count_inbox(LayerName::GlobalStrategy, MessageKind::Censor) == 0);
}

TEST_CASE("repeated denials inside the window trigger exactly one Halt") {
  Fixture fx("default.txt");
  REQUIRE(fx.params.halt_denials == 3);
  for (int i = 0; i < 5; ++i) fx.publish_doc(harmful_doc());
  fx.asp.on_tick(fx.svc);
  // Five denials, one halt: the flag latches after the third.
  CHECK(fx.count_inbox(LayerName::GlobalStrategy, MessageKind::Halt) == 1);
  CHECK(fx.count_inbox(LayerName::GlobalStrategy, MessageKind::Censor) == 5);
  // auto_reboot defaults off, so no Reboot follows.
  CHECK(fx.count_inbox(LayerName::GlobalStrategy, MessageKind::Reboot) == 0);
}

TEST_CASE("denials outside the window do not accumulate to a halt") {
  Fixture fx("default.txt");
  fx.publish_doc(harmful_doc());
  fx.asp.on_tick(fx.svc);
  // Move far past the window; the old denial must expire.
  fx.bus.set_tick(50);
  fx.publish_doc(harmful_doc());
  fx.asp.on_tick(fx.svc);
  fx.bus.set_tick(51);
  fx.publish_doc(harmful_doc());
  fx.asp.on_tick(fx.svc);
  CHECK(fx.count_inbox(LayerName::GlobalStrategy, MessageKind::Halt) == 0);
}

TEST_CASE("dilemma resolution prefers the option that prevents suffering") {
  Fixture fx("default.txt");
  Envelope e;
  e.source = Origin::of(LayerName::CognitiveControl);
  e.target = LayerName::Aspirational;
  e.kind = MessageKind::DilemmaEscalation;
  e.correlation = "dilemma-7";
  e.payload["options"] = Json::array({
      Json{{"id", "mop-floor"}},
      Json{{"id", "rescue-kitten"}, {"tags", Json::array({"prevents-suffering"})}},
  });
  fx.asp.handle(e, fx.svc);
  REQUIRE(fx.bus.inbox(LayerName::CognitiveControl).size() == 1);
  const Envelope& mj = fx.bus.inbox(LayerName::CognitiveControl).front();
  CHECK(mj.kind == MessageKind::MoralJudgment);
  CHECK(mj.payload["preferred"] == "rescue-kitten");
  CHECK(mj.correlation == "dilemma-7");
}

TEST_CASE("malformed dilemmas are rejected with a trace note, not a crash") {
  Fixture fx("default.txt");
  Envelope e;
  e.source = Origin::of(LayerName::CognitiveControl);
  e.target = LayerName::Aspirational;
  e.kind = MessageKind::DilemmaEscalation;
  e.payload = Json{{"note", "no options key"}};
  fx.asp.handle(e, fx.svc);
  CHECK(fx.bus.inbox(LayerName::CognitiveControl).empty());
  REQUIRE(fx.notes.size() == 1);
  CHECK(fx.notes[0]["event"] == "rejected-escalation");
}

TEST_CASE("review never turns the machinery against the Aspirational layer") {
  Fixture fx("default.txt");
  // Aspirational's own mission flows through the tap on the next tick;
  // it must not be judged, censored, or counted as a denial.
  fx.asp.issue_missions(fx.svc);
  fx.asp.on_tick(fx.svc);
  fx.asp.on_tick(fx.svc);
  for (const auto& rec : fx.bus.audit()) {
    CHECK(rec.verdict == Verdict::Delivered);
  }
  CHECK(fx.count_inbox(LayerName::GlobalStrategy, MessageKind::Censor) == 0);
  CHECK(fx.count_inbox(LayerName::GlobalStrategy, MessageKind::Halt) == 0);
}

TEST_CASE("snapshot and restore preserve denial history and pending queue") {
  Fixture fx("default.txt");
  fx.publish_doc(harmful_doc());
  Json snap = fx.asp.snapshot();
  CHECK(snap["pending"].size() == 2);  // Censor + Directive still queued

  Fixture fresh("default.txt");
  fresh.asp.restore(snap);
  CHECK_FALSE(fresh.asp.quiet());
  fresh.asp.on_tick(fresh.svc);
  CHECK(fresh.count_inbox(LayerName::GlobalStrategy, MessageKind::Censor) == 1);
  CHECK(fresh.count_inbox(LayerName::GlobalStrategy, MessageKind::Directive) == 1);
}
