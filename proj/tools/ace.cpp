#include <cstdlib>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "ace/memory_store.hpp"
#include "ace/runtime.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitRuntime = 3;

int cmd_run(const std::string& constitution, const std::string& scenario,
            long seed, const std::string& cognition, int max_ticks,
            const std::string& trace_path,
            const std::vector<std::string>& overrides) {
  ace::RunConfig config;
  try {
    config = ace::RunConfig::load(constitution, scenario);
    config.params.seed = seed;
    config.max_ticks = max_ticks;
    config.cognition = cognition;
    if (cognition == "external") {
      const char* addr = std::getenv("ACE_COGNITION_ADDR");
      if (addr == nullptr) {
        std::cerr << "error: --cognition external requires ACE_COGNITION_ADDR\n";
        return kExitConfig;
      }
      config.external_address = addr;
    }
    ace::Json pj = config.params.to_json();
    for (const auto& o : overrides) {
      auto eq = o.find('=');
      if (eq == std::string::npos) {
        std::cerr << "error: --param expects key=value, got '" << o << "'\n";
        return kExitConfig;
      }
      std::string key = o.substr(0, eq);
      if (!pj.contains(key)) {
        std::cerr << "error: unknown parameter '" << key << "'\n";
        return kExitConfig;
      }
      try {
        pj[key] = ace::Json::parse(o.substr(eq + 1));
      } catch (const ace::Json::parse_error&) {
        std::cerr << "error: unparseable value for parameter '" << key << "'\n";
        return kExitConfig;
      }
    }
    config.params = ace::Params::from_json(pj);
    config.params.seed = seed;
    config.validate();
  } catch (const std::exception& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  }

  try {
    ace::Runtime runtime(std::move(config));
    ace::RunResult result = runtime.run();
    if (!trace_path.empty()) {
      std::ofstream out(trace_path, std::ios::trunc);
      if (!out) {
        std::cerr << "error: cannot write trace file: " << trace_path << "\n";
        return kExitRuntime;
      }
      for (const auto& line : result.trace_lines) out << line << '\n';
    }
    if (result.failed) {
      std::cerr << "runtime failure: " << result.error << "\n";
      return kExitRuntime;
    }
    std::cout << "run complete: " << result.ticks << " ticks, "
              << (result.quiescent ? "quiescent" : "max-ticks reached") << "\n";
    return kExitOk;
  } catch (const std::exception& e) {
    std::cerr << "runtime failure: " << e.what() << "\n";
    return kExitRuntime;
  }
}

int cmd_replay(const std::string& trace_path) {
  try {
    auto lines = ace::read_trace_file(trace_path);
    ace::Json snaps = ace::replay_trace(lines);
    std::cout << "replay verified: " << lines.size() << " lines, "
              << snaps.size() << " layer snapshots reconstructed\n";
    return kExitOk;
  } catch (const ace::TraceError& e) {
    std::cerr << "replay failure: " << e.what() << "\n";
    return kExitRuntime;
  } catch (const std::exception& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  }
}

int cmd_inspect(const std::string& trace_path, const ace::InspectFilters& f) {
  try {
    auto lines = ace::read_trace_file(trace_path);
    for (const auto& j : ace::inspect_trace(lines, f)) {
      std::cout << j.dump() << "\n";
    }
    return kExitOk;
  } catch (const std::exception& e) {
    std::cerr << "inspect failure: " << e.what() << "\n";
    return kExitRuntime;
  }
}

int cmd_memory_add(const std::string& dir, const std::string& store_path) {
  try {
    ace::MemoryStore store = ace::MemoryStore::load(store_path);
    int added = store.add_dir(dir, store_path);
    std::cout << "added " << added << " documents to " << store_path << "\n";
    return kExitOk;
  } catch (const std::exception& e) {
    std::cerr << "memory error: " << e.what() << "\n";
    return kExitConfig;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"ace: layered cognitive agent runtime"};
  app.require_subcommand(1);

  // run
  std::string constitution, scenario, trace_path;
  std::string cognition = "rule";
  long seed = 0;
  int max_ticks = 60;
  std::vector<std::string> overrides;
  auto* run = app.add_subcommand("run", "run a scenario");
  run->add_option("--constitution", constitution, "constitution file")->required();
  run->add_option("--scenario", scenario, "scenario file")->required();
  run->add_option("--seed", seed, "deterministic seed");
  run->add_option("--cognition", cognition, "cognition mode: rule|external");
  run->add_option("--max-ticks", max_ticks, "tick budget");
  run->add_option("--trace", trace_path, "trace output file (JSON lines)");
  run->add_option("--param", overrides, "parameter override key=value");

  // replay
  std::string replay_path;
  auto* replay = app.add_subcommand("replay", "re-execute and verify a trace");
  replay->add_option("trace", replay_path, "trace file")->required();

  // inspect
  std::string inspect_path;
  ace::InspectFilters filters;
  std::string f_layer, f_kind;
  std::int64_t f_from = -1, f_to = -1;
  auto* inspect = app.add_subcommand("inspect", "filter and view a trace");
  inspect->add_option("trace", inspect_path, "trace file")->required();
  inspect->add_option("--layer", f_layer, "filter by source or target layer");
  inspect->add_option("--kind", f_kind, "filter by message kind");
  inspect->add_option("--tick-from", f_from, "first tick to include");
  inspect->add_option("--tick-to", f_to, "last tick to include");
  inspect->add_flag("--interventions", filters.interventions,
                    "only intervention records");
  inspect->add_flag("--roadmaps", filters.roadmaps, "only roadmap envelopes");
  inspect->add_flag("--decisions", filters.decisions,
                    "only deliberation/switch records");
  inspect->add_flag("--outcomes", filters.outcomes, "only outcome envelopes");

  // memory add
  std::string mem_dir, mem_store = "memory.jsonl";
  auto* memory = app.add_subcommand("memory", "declarative memory store");
  auto* mem_add = memory->add_subcommand("add", "ingest a document directory");
  mem_add->add_option("dir", mem_dir, "directory of text documents")->required();
  mem_add->add_option("--store", mem_store, "store file path");
  memory->require_subcommand(1);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }

  if (run->parsed()) {
    return cmd_run(constitution, scenario, seed, cognition, max_ticks,
                   trace_path, overrides);
  }
  if (replay->parsed()) return cmd_replay(replay_path);
  if (inspect->parsed()) {
    if (!f_layer.empty()) filters.layer = f_layer;
    if (!f_kind.empty()) filters.kind = f_kind;
    if (f_from >= 0) filters.tick_from = f_from;
    if (f_to >= 0) filters.tick_to = f_to;
    return cmd_inspect(inspect_path, filters);
  }
  if (memory->parsed()) return cmd_memory_add(mem_dir, mem_store);
  return kExitConfig;
}
