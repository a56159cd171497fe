#include "ace/cognition.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include <httplib.h>

namespace ace {

namespace {

constexpr std::string_view kRequestKindNames[] = {
    "Judge", "Strategize", "ShapeMission", "Plan", "Deliberate",
};

bool truthy(const Json& v) {
  if (v.is_boolean()) return v.get<bool>();
  if (v.is_number()) return v.get<double>() != 0.0;
  if (v.is_string()) return !v.get<std::string>().empty();
  return !v.is_null();
}

bool has_tag(const Json& doc, const std::string& name) {
  if (!doc.is_object()) return false;
  auto it = doc.find("tags");
  if (it == doc.end()) return false;
  if (it->is_object()) {
    auto t = it->find(name);
    return t != it->end() && truthy(*t);
  }
  if (it->is_array()) {
    for (const auto& v : *it) {
      if (v.is_string() && v.get<std::string>() == name) return true;
    }
  }
  return false;
}

bool harm_flagged(const Json& doc) {
  if (doc.is_object()) {
    for (auto it = doc.begin(); it != doc.end(); ++it) {
      if (it.key() == "harm" && truthy(it.value())) return true;
      if (harm_flagged(it.value())) return true;
    }
  } else if (doc.is_array()) {
    for (const auto& v : doc) {
      if (harm_flagged(v)) return true;
    }
  }
  return false;
}

std::string option_id(const Json& opt, std::size_t index) {
  if (opt.is_object() && opt.contains("id") && opt["id"].is_string()) {
    return opt["id"].get<std::string>();
  }
  return "option-" + std::to_string(index);
}

Json judge_one(const Json& option) {
  Json j;
  if (harm_flagged(option)) {
    j["verdict"] = "deny";
    j["rationale"] = "option is harm-flagged; conflicts with imperative 1";
    j["cited_principles"] = Json::array({1});
  } else {
    j["verdict"] = "approve";
    j["rationale"] = "no conflict with the constitution";
    j["cited_principles"] = Json::array();
  }
  return j;
}

struct ZoneInfo {
  std::string name;
  double dirt = 0;
  bool essential = false;
  std::string capability = "clean";
};

CognitionResponse do_strategize(const CognitionRequest& req) {
  const Json& mission = req.context.at("mission");
  const Json& facts = req.context.at("facts");
  std::vector<std::string> suppressed;
  if (req.context.contains("suppressed")) {
    for (const auto& s : req.context["suppressed"]) {
      suppressed.push_back(s.get<std::string>());
    }
  }

  struct Objective {
    std::string text;
    Json tags = Json::object();
    std::vector<std::string> required_capabilities;
    double priority = 0;
    std::vector<ZoneInfo> zones;
  };

  // Cleaning objectives: one per room, grounded in zone.<room>.<area>.dirt.
  std::map<std::string, std::vector<ZoneInfo>> rooms;
  for (auto it = facts.begin(); it != facts.end(); ++it) {
    const std::string& key = it.key();
    if (key.rfind("zone.", 0) != 0) continue;
    if (key.size() < 6 || key.substr(key.size() - 5) != ".dirt") continue;
    std::string zone = key.substr(5, key.size() - 5 - 5);  // <room>.<area>
    auto dot = zone.find('.');
    if (dot == std::string::npos) continue;
    if (!it.value().is_number() || it.value().get<double>() <= 0) continue;
    ZoneInfo z;
    z.name = zone;
    z.dirt = it.value().get<double>();
    std::string base = "zone." + zone;
    if (facts.contains(base + ".essential")) {
      z.essential = truthy(facts[base + ".essential"]);
    }
    if (facts.contains(base + ".capability")) {
      z.capability = facts[base + ".capability"].get<std::string>();
    }
    rooms[zone.substr(0, dot)].push_back(z);
  }

  std::vector<Objective> objectives;
  for (auto& [room, zones] : rooms) {
    std::sort(zones.begin(), zones.end(),
              [](const ZoneInfo& a, const ZoneInfo& b) { return a.name < b.name; });
    Objective o;
    o.text = "tidy " + room;
    o.tags["room"] = room;
    double total = 0;
    for (const auto& z : zones) {
      total += z.dirt;
      if (std::find(o.required_capabilities.begin(), o.required_capabilities.end(),
                    z.capability) == o.required_capabilities.end()) {
        o.required_capabilities.push_back(z.capability);
      }
    }
    o.priority = total;
    o.zones = zones;
    objectives.push_back(std::move(o));
  }

  // Suggested objectives arrive as suggestion.<id> facts.
  for (auto it = facts.begin(); it != facts.end(); ++it) {
    if (it.key().rfind("suggestion.", 0) != 0) continue;
    const Json& s = it.value();
    if (!s.is_object() || !s.contains("text")) continue;
    Objective o;
    o.text = s["text"].get<std::string>();
    if (std::find(suppressed.begin(), suppressed.end(), o.text) !=
        suppressed.end()) {
      continue;
    }
    if (s.contains("tags")) o.tags = s["tags"];
    if (s.contains("required_capabilities")) {
      for (const auto& c : s["required_capabilities"]) {
        o.required_capabilities.push_back(c.get<std::string>());
      }
    }
    o.priority = s.contains("priority") ? s["priority"].get<double>() : 1.0;
    if (s.contains("boost_if") && facts.contains(s["boost_if"].get<std::string>()) &&
        truthy(facts[s["boost_if"].get<std::string>()])) {
      o.priority += 100.0;
    }
    objectives.push_back(std::move(o));
  }

  std::sort(objectives.begin(), objectives.end(),
            [](const Objective& a, const Objective& b) {
              if (a.priority != b.priority) return a.priority > b.priority;
              return a.text < b.text;
            });

  Json out;
  out["objectives"] = Json::array();
  int n = 0;
  for (const auto& o : objectives) {
    Json jo;
    jo["id"] = "o" + std::to_string(++n);
    jo["text"] = o.text;
    jo["tags"] = o.tags;
    jo["required_capabilities"] = o.required_capabilities;
    jo["priority"] = o.priority;
    if (!o.zones.empty()) {
      Json zs = Json::array();
      for (const auto& z : o.zones) {
        Json jz;
        jz["name"] = z.name;
        jz["dirt"] = z.dirt;
        jz["essential"] = z.essential;
        jz["capability"] = z.capability;
        zs.push_back(jz);
      }
      jo["zones"] = zs;
    }
    out["objectives"].push_back(jo);
  }
  out["strategies"] = Json::array(
      {"address objectives in priority order", "prefer essential work first"});
  Json principles = Json::array();
  if (mission.contains("imperatives")) principles = mission["imperatives"];
  out["principles"] = principles;
  return {RequestKind::Strategize, out};
}

CognitionResponse do_shape(const CognitionRequest& req) {
  const Json& objectives = req.context.at("objectives");
  const Json& capabilities = req.context.at("capabilities");
  const Json& limitations = req.context.at("limitations");
  double threshold = req.context.value("feasibility_threshold", 0.3);

  auto limited = [&](const std::string& name) {
    for (const auto& l : limitations) {
      if (l.get<std::string>() == name) return true;
    }
    return false;
  };

  Json feasible = Json::array();
  Json deferred = Json::array();
  for (const auto& obj : objectives) {
    std::string block_reason;
    std::string annotation;
    if (obj.contains("required_capabilities")) {
      for (const auto& c : obj["required_capabilities"]) {
        std::string name = c.get<std::string>();
        if (limited(name)) {
          block_reason = "limitation:" + name;
          annotation = "redirect: seek an agent capable of " + name;
          break;
        }
        // Unregistered capabilities fall back to the 0.5 prior.
        double conf = capabilities.contains(name)
                          ? capabilities[name].get<double>()
                          : 0.5;
        if (conf < threshold) {
          block_reason = "capability:" + name + ":confidence-below-threshold";
          break;
        }
      }
    }
    if (block_reason.empty()) {
      Json f;
      f["objective"] = obj;
      f["required_capabilities"] = obj.value("required_capabilities", Json::array());
      f["min_confidence_met"] = true;
      f["annotations"] = Json::array();
      feasible.push_back(f);
    } else {
      Json d;
      d["objective"] = obj;
      d["reason"] = block_reason;
      if (!annotation.empty()) d["annotation"] = annotation;
      deferred.push_back(d);
    }
  }
  Json out;
  out["feasible"] = feasible;
  out["deferred"] = deferred;
  return {RequestKind::ShapeMission, out};
}

CognitionResponse do_plan(const CognitionRequest& req) {
  const Json& feasible = req.context.at("feasible");

  struct TaskOutline {
    std::string id;
    std::string objective_ref;
    std::string methodology;
    std::string kind;
    std::string zone;
    std::string text;
    Json required_capabilities = Json::array();
    bool essential = false;
    double weight = 0;  // ordering key within the plan
  };
  std::vector<TaskOutline> tasks;
  for (const auto& entry : feasible) {
    const Json& obj = entry.at("objective");
    std::string oid = obj.value("id", "o?");
    if (obj.contains("zones")) {
      for (const auto& z : obj["zones"]) {
        TaskOutline t;
        t.zone = z["name"].get<std::string>();
        t.id = t.zone;
        t.objective_ref = oid;
        t.kind = "clean";
        t.methodology = "clean every cell of " + t.zone;
        t.essential = z.value("essential", false);
        t.weight = z.value("dirt", 0.0);
        Json caps = Json::array();
        caps.push_back(z.value("capability", "clean"));
        t.required_capabilities = caps;
        tasks.push_back(t);
      }
    } else {
      TaskOutline t;
      t.id = oid;
      t.objective_ref = oid;
      t.kind = "generic";
      t.text = obj.value("text", "");
      t.methodology = "carry out: " + t.text;
      t.essential = has_tag(obj, "essential");
      t.weight = obj.value("priority", 0.0);
      t.required_capabilities = obj.value("required_capabilities", Json::array());
      tasks.push_back(t);
    }
  }
  std::sort(tasks.begin(), tasks.end(),
            [](const TaskOutline& a, const TaskOutline& b) {
              if (a.essential != b.essential) return a.essential;
              if (a.weight != b.weight) return a.weight > b.weight;
              return a.id < b.id;
            });

  Json out;
  out["tasks"] = Json::array();
  int idx = 0;
  for (const auto& t : tasks) {
    double level = std::max(0.1, 0.9 - 0.08 * idx++);
    Json jt;
    jt["id"] = t.id;
    jt["objective_ref"] = t.objective_ref;
    jt["kind"] = t.kind;
    jt["methodology"] = t.methodology;
    if (!t.zone.empty()) jt["zone"] = t.zone;
    if (!t.text.empty()) jt["text"] = t.text;
    jt["required_capabilities"] = t.required_capabilities;
    jt["essential"] = t.essential;
    jt["urgency"] = level;
    jt["importance"] = level;
    out["tasks"].push_back(jt);
  }
  return {RequestKind::Plan, out};
}

CognitionResponse do_deliberate(const CognitionRequest& req) {
  const Json& options = req.context.at("options");
  Json scored = Json::array();
  std::string chosen;
  double best = 0;
  std::size_t i = 0;
  for (const auto& opt : options) {
    std::string id = option_id(opt, i++);
    double adjustment = 0.0;  // rule engine applies no adjustment
    double score = static_cast<double>(opt.value("pros", Json::array()).size()) -
                   static_cast<double>(opt.value("cons", Json::array()).size()) +
                   adjustment;
    Json so;
    so["id"] = id;
    so["pros"] = opt.value("pros", Json::array());
    so["cons"] = opt.value("cons", Json::array());
    so["score"] = score;
    scored.push_back(so);
    if (chosen.empty() || score > best || (score == best && id < chosen)) {
      chosen = id;
      best = score;
    }
  }
  Json out;
  out["options"] = scored;
  out["chosen"] = chosen;
  out["record"] = "deliberated over " + std::to_string(scored.size()) +
                  " options; chose " + chosen + " with score " +
                  std::to_string(best);
  return {RequestKind::Deliberate, out};
}

CognitionResponse do_judge(const CognitionRequest& req) {
  if (req.context.contains("options")) {
    const Json& options = req.context["options"];
    Json verdicts = Json::object();
    std::vector<std::string> candidates;
    std::vector<std::string> rescuers;
    std::size_t i = 0;
    for (const auto& opt : options) {
      std::string id = option_id(opt, i++);
      Json j = judge_one(opt);
      verdicts[id] = j;
      if (j["verdict"] == "approve") {
        candidates.push_back(id);
        if (has_tag(opt, "prevents-suffering")) rescuers.push_back(id);
      }
    }
    std::sort(candidates.begin(), candidates.end());
    std::sort(rescuers.begin(), rescuers.end());
    Json out;
    if (!rescuers.empty()) {
      out["verdict"] = "approve";
      out["preferred"] = rescuers.front();
      out["rationale"] =
          "preferring the option that prevents suffering (imperative 1)";
      out["cited_principles"] = Json::array({1});
    } else if (!candidates.empty()) {
      out["verdict"] = "approve";
      out["preferred"] = candidates.front();
      out["rationale"] = "no ethical objection; first acceptable option";
      out["cited_principles"] = Json::array();
    } else {
      out["verdict"] = "deny";
      out["preferred"] = nullptr;
      out["rationale"] = "every option is harm-flagged; replan required";
      out["cited_principles"] = Json::array({1});
      out["directive"] = "replan";
    }
    out["option_verdicts"] = verdicts;
    return {RequestKind::Judge, out};
  }
  Json out = judge_one(req.context.at("option"));
  return {RequestKind::Judge, out};
}

}  // namespace

std::string_view to_string(RequestKind kind) {
  return kRequestKindNames[static_cast<int>(kind)];
}

std::optional<RequestKind> request_kind_from_string(std::string_view name) {
  for (int i = 0; i < 5; ++i) {
    if (kRequestKindNames[i] == name) return static_cast<RequestKind>(i);
  }
  return std::nullopt;
}

std::string_view to_string(JudgmentVerdict v) {
  switch (v) {
    case JudgmentVerdict::Approve: return "approve";
    case JudgmentVerdict::Deny: return "deny";
    case JudgmentVerdict::Amend: return "amend";
  }
  return "approve";
}

std::optional<JudgmentVerdict> verdict_from_string(std::string_view name) {
  if (name == "approve") return JudgmentVerdict::Approve;
  if (name == "deny") return JudgmentVerdict::Deny;
  if (name == "amend") return JudgmentVerdict::Amend;
  return std::nullopt;
}

Json CognitionRequest::to_json() const {
  Json j;
  j["kind"] = std::string(to_string(kind));
  j["context"] = context;
  j["seed"] = seed;
  return j;
}

CognitionRequest CognitionRequest::from_json(const Json& j) {
  auto kind = request_kind_from_string(j.at("kind").get<std::string>());
  if (!kind) throw RequestError("unknown request kind");
  return {*kind, j.at("context"), j.value("seed", 0L)};
}

Json CognitionResponse::to_json() const {
  Json j;
  j["kind"] = std::string(to_string(kind));
  j["payload"] = payload;
  return j;
}

CognitionResponse CognitionResponse::from_json(const Json& j) {
  auto kind = request_kind_from_string(j.at("kind").get<std::string>());
  if (!kind) throw RequestError("unknown response kind");
  return {*kind, j.at("payload")};
}

Judgment Judgment::from_payload(const Json& payload) {
  Judgment out;
  auto v = verdict_from_string(payload.at("verdict").get<std::string>());
  if (!v) throw RequestError("unknown judgment verdict");
  out.verdict = *v;
  out.rationale = payload.value("rationale", "");
  if (payload.contains("cited_principles")) {
    for (const auto& p : payload["cited_principles"]) {
      out.cited_principles.push_back(p.get<int>());
    }
  }
  out.extra = payload;
  return out;
}

Json Judgment::to_payload() const {
  Json j;
  j["verdict"] = std::string(to_string(verdict));
  j["rationale"] = rationale;
  j["cited_principles"] = cited_principles;
  return j;
}

void check_request(const CognitionRequest& request) {
  auto need = [&](const char* section) {
    if (!request.context.contains(section)) {
      throw RequestError(std::string("missing required context section '") +
                         section + "' for " +
                         std::string(to_string(request.kind)));
    }
  };
  switch (request.kind) {
    case RequestKind::Judge:
      if (!request.context.contains("option") &&
          !request.context.contains("options")) {
        throw RequestError("Judge requires 'option' or 'options'");
      }
      break;
    case RequestKind::Strategize:
      need("mission");
      need("facts");
      break;
    case RequestKind::ShapeMission:
      need("objectives");
      need("capabilities");
      need("limitations");
      break;
    case RequestKind::Plan:
      need("feasible");
      break;
    case RequestKind::Deliberate:
      need("options");
      if (request.context["options"].empty()) {
        throw RequestError("Deliberate requires a non-empty option list");
      }
      break;
  }
}

bool validate_response(RequestKind kind, const Json& payload) {
  if (!payload.is_object()) return false;
  switch (kind) {
    case RequestKind::Judge: {
      if (!payload.contains("verdict") || !payload["verdict"].is_string()) {
        return false;
      }
      if (!verdict_from_string(payload["verdict"].get<std::string>())) {
        return false;
      }
      std::string v = payload["verdict"].get<std::string>();
      if (v != "approve" && payload.value("rationale", "").empty()) return false;
      return payload.contains("cited_principles") &&
             payload["cited_principles"].is_array();
    }
    case RequestKind::Strategize:
      return payload.contains("objectives") && payload["objectives"].is_array() &&
             payload.contains("strategies") && payload.contains("principles");
    case RequestKind::ShapeMission:
      return payload.contains("feasible") && payload["feasible"].is_array() &&
             payload.contains("deferred") && payload["deferred"].is_array();
    case RequestKind::Plan:
      return payload.contains("tasks") && payload["tasks"].is_array();
    case RequestKind::Deliberate:
      return payload.contains("options") && payload["options"].is_array() &&
             payload.contains("chosen") && payload.contains("record") &&
             !payload["record"].get<std::string>().empty();
  }
  return false;
}

CognitionResponse RuleEngine::evaluate(const CognitionRequest& request) {
  check_request(request);
  switch (request.kind) {
    case RequestKind::Judge: return do_judge(request);
    case RequestKind::Strategize: return do_strategize(request);
    case RequestKind::ShapeMission: return do_shape(request);
    case RequestKind::Plan: return do_plan(request);
    case RequestKind::Deliberate: return do_deliberate(request);
  }
  throw RequestError("unreachable request kind");
}

ExternalEngine::ExternalEngine(std::string address, int timeout_ms)
    : timeout_ms_(timeout_ms) {
  std::string a = std::move(address);
  if (a.rfind("http://", 0) == 0) a = a.substr(7);
  auto colon = a.rfind(':');
  if (colon == std::string::npos) {
    host_ = a;
  } else {
    host_ = a.substr(0, colon);
    port_ = std::stoi(a.substr(colon + 1));
  }
}

CognitionResponse ExternalEngine::evaluate(const CognitionRequest& request) {
  check_request(request);
  httplib::Client client(host_, port_);
  client.set_connection_timeout(0, timeout_ms_ * 1000);
  client.set_read_timeout(timeout_ms_ / 1000, (timeout_ms_ % 1000) * 1000);
  auto res = client.Post("/evaluate", request.to_json().dump(), "application/json");
  if (!res || res->status != 200) {
    throw EngineUnavailable("external cognition service at " + host_ + ":" +
                            std::to_string(port_) + " unavailable");
  }
  return CognitionResponse::from_json(Json::parse(res->body));
}

Judgment ensemble_judge(const std::vector<CognitionEngine*>& engines,
                        const CognitionRequest& request) {
  if (engines.empty() || engines.size() % 2 == 0) {
    throw ConfigError("ensemble_judge requires an odd number of engines");
  }
  int counts[3] = {0, 0, 0};
  std::string rationale;
  std::vector<int> cited;
  for (auto* engine : engines) {
    CognitionResponse r = engine->evaluate(request);
    Judgment j = Judgment::from_payload(r.payload);
    counts[static_cast<int>(j.verdict)]++;
    if (!rationale.empty()) rationale += "; ";
    rationale += j.rationale;
    for (int p : j.cited_principles) {
      if (std::find(cited.begin(), cited.end(), p) == cited.end()) {
        cited.push_back(p);
      }
    }
  }
  // Mode of the member verdicts; a three-way tie (possible only with all
  // three verdict values in play) resolves safety-first: deny, amend, approve.
  Judgment out;
  int best = -1;
  for (JudgmentVerdict v : {JudgmentVerdict::Deny, JudgmentVerdict::Amend,
                            JudgmentVerdict::Approve}) {
    if (counts[static_cast<int>(v)] > best) {
      best = counts[static_cast<int>(v)];
      out.verdict = v;
    }
  }
  out.rationale = rationale;
  out.cited_principles = cited;
  return out;
}

}  // namespace ace
