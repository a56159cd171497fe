#include "ace/runtime.hpp"

#include <fstream>
#include <sstream>

namespace ace {

RunConfig RunConfig::load(const std::string& constitution_path,
                          const std::string& scenario_path) {
  RunConfig c;
  {
    std::ifstream f(constitution_path);
    if (!f) {
      throw RunConfigError("cannot read constitution file: " + constitution_path);
    }
    std::ostringstream ss;
    ss << f.rdbuf();
    c.constitution_text = ss.str();
  }
  {
    std::ifstream f(scenario_path);
    if (!f) throw RunConfigError("cannot read scenario file: " + scenario_path);
    try {
      c.scenario = Json::parse(f, nullptr, true, true);
    } catch (const Json::parse_error& e) {
      throw RunConfigError(std::string("scenario is not valid JSON: ") + e.what());
    }
  }
  c.validate();
  return c;
}

void RunConfig::validate() const {
  if (max_ticks <= 0) throw RunConfigError("max_ticks must be > 0");
  if (cognition != "rule" && cognition != "external") {
    throw RunConfigError("cognition mode must be 'rule' or 'external'");
  }
  if (cognition == "external" && external_address.empty()) {
    throw RunConfigError("external cognition requires a service address");
  }
  try {
    params.validate();
  } catch (const std::invalid_argument& e) {
    throw RunConfigError(std::string("invalid parameter: ") + e.what());
  }
  try {
    parse_constitution(constitution_text);
  } catch (const ParseError& e) {
    throw RunConfigError(std::string("invalid constitution: ") + e.what());
  }
  try {
    Environment::from_json(scenario);
  } catch (const std::exception& e) {
    throw RunConfigError(std::string("invalid scenario: ") + e.what());
  }
}

Json RunConfig::to_json() const {
  Json j;
  j["type"] = "config";
  j["constitution"] = constitution_text;
  j["scenario"] = scenario;
  j["params"] = params.to_json();
  j["max_ticks"] = max_ticks;
  j["cognition"] = cognition;
  return j;
}

RunConfig RunConfig::from_json(const Json& j) {
  RunConfig c;
  c.constitution_text = j.at("constitution").get<std::string>();
  c.scenario = j.at("scenario");
  c.params = Params::from_json(j.at("params"));
  c.max_ticks = j.at("max_ticks").get<int>();
  c.cognition = j.at("cognition").get<std::string>();
  return c;
}

namespace {

// External engines fall back to the rule engine when unreachable so a
// flaky service degrades the run instead of killing it.
class FallbackEngine : public CognitionEngine {
 public:
  explicit FallbackEngine(std::string address) : external_(std::move(address)) {}
  CognitionResponse evaluate(const CognitionRequest& request) override {
    try {
      return external_.evaluate(request);
    } catch (const EngineUnavailable&) {
      return rule_.evaluate(request);
    }
  }

 private:
  ExternalEngine external_;
  RuleEngine rule_;
};

std::unique_ptr<CognitionEngine> make_engine(const RunConfig& config) {
  if (config.cognition == "external") {
    return std::make_unique<FallbackEngine>(config.external_address);
  }
  return std::make_unique<RuleEngine>();
}

}  // namespace

Runtime::Runtime(RunConfig config)
    : config_(std::move(config)),
      constitution_(parse_constitution(config_.constitution_text)),
      env_(Environment::from_json(config_.scenario)),
      engine_(make_engine(config_)) {
  aspirational_ =
      std::make_unique<AspirationalLayer>(config_.params, constitution_);
  global_strategy_ = std::make_unique<GlobalStrategyLayer>(config_.params);
  agent_model_ = std::make_unique<AgentModelLayer>(config_.params);
  executive_function_ = std::make_unique<ExecutiveFunctionLayer>(config_.params);
  cognitive_control_ = std::make_unique<CognitiveControlLayer>(config_.params);
  task_prosecution_ =
      std::make_unique<TaskProsecutionLayer>(config_.params, env_);
  layers_ = {aspirational_.get(),      global_strategy_.get(),
             agent_model_.get(),       executive_function_.get(),
             cognitive_control_.get(), task_prosecution_.get()};
  if (config_.scenario.contains("agent")) {
    agent_model_->init_agent(config_.scenario["agent"]);
  }
}

void Runtime::trace_line(const Json& j) { trace_.push_back(j.dump()); }

void Runtime::flush_audit() {
  const auto& audit = bus_.audit();
  for (; audit_cursor_ < audit.size(); ++audit_cursor_) {
    Json j;
    j["type"] = "audit";
    Json rec = audit[audit_cursor_].to_json();
    for (auto it = rec.begin(); it != rec.end(); ++it) j[it.key()] = it.value();
    trace_line(j);
  }
}

void Runtime::inject_events(std::int64_t tick) {
  if (tick == 0) {
    Json facts;
    facts["facts"] = env_.initial_world_facts();
    bus_.publish({0, 0, Origin::environment(), LayerName::GlobalStrategy,
                  Direction::Southbound, MessageKind::WorldEvent, 0.9,
                  std::nullopt, facts});
    Json geo;
    geo["geometry"] = env_.geometry();
    bus_.publish({0, 0, Origin::environment(), LayerName::ExecutiveFunction,
                  Direction::Southbound, MessageKind::WorldEvent, 0.9,
                  std::nullopt, geo});
    Json tel;
    tel["battery"] = env_.robot().battery;
    tel["position"] = Json::array({env_.robot().x, env_.robot().y});
    bus_.publish({0, 0, Origin::environment(), LayerName::ExecutiveFunction,
                  Direction::Southbound, MessageKind::Telemetry, 0.6,
                  std::nullopt, tel});
  }
  for (const auto& ev : env_.events_due(tick)) {
    env_.apply_world_change(ev.payload);
    auto target = layer_from_string(ev.target);
    Json payload = ev.payload;
    if (!payload.contains("facts")) {
      // Fact deltas for injected changes come from the live state.
      Json facts = Json::object();
      if (payload.contains("add_dirt")) {
        Json oracle = env_.oracle_snapshot();
        for (const auto& d : payload["add_dirt"]) {
          std::string key = "zone." + d.at("zone").get<std::string>() + ".dirt";
          facts[key] = oracle[key];
        }
      }
      payload["facts"] = facts;
    }
    bus_.publish({0, tick, Origin::environment(),
                  target.value_or(LayerName::GlobalStrategy),
                  Direction::Southbound, MessageKind::WorldEvent, 0.9,
                  std::nullopt, payload});
  }
}

void Runtime::apply_interventions(Layer& layer) {
  auto& inbox = bus_.inbox(layer.id());
  for (auto it = inbox.begin(); it != inbox.end();) {
    if (it->kind == MessageKind::Halt) {
      halted_[layer.rank()] = true;
      trace_line({{"type", "intervention"},
                  {"kind", "Halt"},
                  {"target", std::string(to_string(layer.id()))},
                  {"tick", bus_.tick()}});
      it = inbox.erase(it);
    } else if (it->kind == MessageKind::Reboot) {
      if (last_snapshot_.count(layer.rank())) {
        layer.restore(last_snapshot_[layer.rank()]);
      }
      halted_[layer.rank()] = false;
      trace_line({{"type", "intervention"},
                  {"kind", "Reboot"},
                  {"target", std::string(to_string(layer.id()))},
                  {"tick", bus_.tick()}});
      it = inbox.erase(it);
    } else if (it->kind == MessageKind::Censor) {
      if (!it->payload.value("already_censored", false) &&
          it->payload.contains("subject")) {
        bus_.censor(it->payload["subject"].get<std::uint64_t>(),
                    it->payload.value("rationale", "censored"));
      }
      trace_line({{"type", "intervention"},
                  {"kind", "Censor"},
                  {"target", std::string(to_string(layer.id()))},
                  {"tick", bus_.tick()},
                  {"subject", it->payload.value("subject", Json())}});
      it = inbox.erase(it);
    } else {
      ++it;
    }
  }
}

bool Runtime::quiescent(std::int64_t tick) const {
  for (const Layer* l : layers_) {
    if (!bus_.inbox(l->id()).empty()) return false;
  }
  if (cognitive_control_->has_dispatched()) return false;
  if (task_prosecution_->executing()) return false;
  if (!aspirational_->quiet()) return false;
  for (const auto& ev : env_.scenario().value("events", Json::array())) {
    if (ev.at("tick").get<std::int64_t>() > tick) return false;
  }
  return true;
}

Json Runtime::layer_snapshots() const {
  Json j = Json::object();
  for (const Layer* l : layers_) {
    j[std::string(to_string(l->id()))] = l->snapshot();
  }
  j["Environment"] = env_.snapshot();
  return j;
}

RunResult Runtime::run() {
  RunResult result;
  trace_line(config_.to_json());

  LayerServices svc{bus_, *engine_, config_.params,
                    [this](const Json& j) { trace_line(j); }};

  aspirational_->attach(bus_, *engine_);

  std::int64_t tick = 0;
  try {
    for (tick = 0; tick < config_.max_ticks; ++tick) {
      bus_.set_tick(tick);
      inject_events(tick);
      flush_audit();
      if (tick == 0) {
        aspirational_->issue_missions(svc);
        flush_audit();
      }
      for (Layer* l : layers_) {
        apply_interventions(*l);
        if (halted_[l->rank()]) continue;
        l->process_inbox(svc);
        l->on_tick(svc);
        flush_audit();
      }
      env_.advance_tick();
      for (Layer* l : layers_) {
        last_snapshot_[l->rank()] = l->snapshot();
      }
      if (quiescent(tick)) {
        result.quiescent = true;
        ++tick;
        break;
      }
    }
  } catch (const std::exception& e) {
    flush_audit();
    trace_line({{"type", "end"},
                {"error", e.what()},
                {"ticks", tick},
                {"quiescent", false}});
    result.failed = true;
    result.error = e.what();
    result.ticks = tick;
    result.trace_lines = trace_;
    return result;
  }

  flush_audit();
  Json snaps = layer_snapshots();
  for (auto it = snaps.begin(); it != snaps.end(); ++it) {
    trace_line({{"type", "snapshot"}, {"layer", it.key()}, {"state", it.value()}});
  }
  trace_line({{"type", "end"},
              {"ticks", tick},
              {"quiescent", result.quiescent},
              {"attempts", bus_.attempts()}});

  result.trace_lines = trace_;
  result.final_snapshots = snaps;
  result.oracle = env_.oracle_snapshot();
  result.ticks = tick;
  return result;
}

std::vector<std::string> read_trace_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw TraceError("cannot read trace file: " + path);
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty()) lines.push_back(line);
  }
  return lines;
}

Json replay_trace(const std::vector<std::string>& lines) {
  if (lines.empty()) {
    // Empty trace: nothing ever ran; every layer is in its default state.
    Params params;
    Json snaps = Json::object();
    snaps["Aspirational"] = Json::object();
    snaps["GlobalStrategy"] = GlobalStrategyLayer(params).snapshot();
    snaps["AgentModel"] = AgentModelLayer(params).snapshot();
    snaps["ExecutiveFunction"] = ExecutiveFunctionLayer(params).snapshot();
    snaps["CognitiveControl"] = CognitiveControlLayer(params).snapshot();
    return snaps;
  }

  RunConfig config;
  try {
    Json header = Json::parse(lines.front());
    if (header.value("type", "") != "config") {
      throw TraceError("trace does not start with a config line");
    }
    config = RunConfig::from_json(header);
  } catch (const Json::parse_error&) {
    throw TraceError("corrupt trace: unparseable config line (last good seq 0)");
  }

  Runtime runtime(config);
  RunResult result = runtime.run();

  std::uint64_t last_seq = 0;
  std::size_t n = std::min(lines.size(), result.trace_lines.size());
  for (std::size_t i = 0; i < n; ++i) {
    if (lines[i] != result.trace_lines[i]) {
      throw TraceError("corrupt trace: mismatch at line " + std::to_string(i + 1) +
                       " (last good seq " + std::to_string(last_seq) + ")");
    }
    Json j = Json::parse(lines[i]);
    if (j.value("type", "") == "audit") last_seq = j.value("seq", last_seq);
  }
  if (lines.size() < result.trace_lines.size()) {
    throw TraceError("corrupt trace: truncated (last good seq " +
                     std::to_string(last_seq) + ")");
  }
  if (lines.size() > result.trace_lines.size()) {
    throw TraceError("corrupt trace: trailing lines (last good seq " +
                     std::to_string(last_seq) + ")");
  }
  return result.final_snapshots;
}

std::vector<Json> inspect_trace(const std::vector<std::string>& lines,
                                const InspectFilters& filters) {
  std::vector<Json> out;
  for (const auto& line : lines) {
    Json j;
    try {
      j = Json::parse(line);
    } catch (const Json::parse_error&) {
      throw TraceError("unparseable trace line");
    }
    std::string type = j.value("type", "");

    if (filters.interventions) {
      bool censored = type == "audit" && j.value("verdict", "") == "censored";
      bool control = type == "audit" &&
                     (j.value("kind", "") == "Censor" ||
                      j.value("kind", "") == "Halt" ||
                      j.value("kind", "") == "Reboot" ||
                      j.value("kind", "") == "Directive") &&
                     j.value("verdict", "") == "delivered";
      bool marker = type == "intervention";
      if (!censored && !control && !marker) continue;
    } else if (filters.roadmaps) {
      if (type != "audit" || j.value("kind", "") != "Roadmap") continue;
    } else if (filters.decisions) {
      bool decision = j.value("event", "") == "deliberation" ||
                      j.value("event", "") == "switch" ||
                      (type == "audit" &&
                       j.value("payload", Json::object()).is_object() &&
                       (j["payload"].value("event", "") == "deliberation" ||
                        j["payload"].value("event", "") == "switch"));
      if (!decision) continue;
    } else if (filters.outcomes) {
      if (type != "audit" || j.value("kind", "") != "OutcomeSignal") continue;
    } else {
      if (type != "audit") continue;
    }

    if (filters.layer && type == "audit") {
      if (j.value("source", "") != *filters.layer &&
          j.value("target", "") != *filters.layer) {
        continue;
      }
    }
    if (filters.kind && type == "audit" && j.value("kind", "") != *filters.kind) {
      continue;
    }
    std::int64_t tick = j.value("tick", std::int64_t{0});
    if (filters.tick_from && tick < *filters.tick_from) continue;
    if (filters.tick_to && tick > *filters.tick_to) continue;
    out.push_back(j);
  }
  return out;
}

}  // namespace ace
