// Declarative memory store tests: directory ingestion, persistence, and
// tag queries over temporary files.
#include <filesystem>
#include <fstream>

#include "ace/memory_store.hpp"
#include "doctest.h"

using namespace ace;
namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() /
           ("memstore-" + std::to_string(::getpid()) + "-" +
            std::to_string(counter()++));
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  static int& counter() {
    static int c = 0;
    return c;
  }
  void write(const std::string& name, const std::string& text) const {
    std::ofstream f(path / name);
    f << text;
  }
};

}  // namespace

TEST_CASE("loading a missing store file yields an empty store") {
  TempDir tmp;
  MemoryStore store = MemoryStore::load((tmp.path / "missing.jsonl").string());
  CHECK(store.docs().empty());
}

TEST_CASE("corrupt store lines raise MemoryError") {
  TempDir tmp;
  tmp.write("store.jsonl", "{\"id\":\"ok\",\"title\":\"t\",\"body\":\"b\",\"tags\":[]}\nnot json\n");
  CHECK_THROWS_AS(MemoryStore::load((tmp.path / "store.jsonl").string()), MemoryError);
}

TEST_CASE("add_dir parses title, tags and body from text files") {
  TempDir tmp;
  fs::create_directories(tmp.path / "docs");
  std::ofstream(tmp.path / "docs" / "cleaning.txt")
      << "# Cleaning guide\ntags: housework, chemicals\nUse mild detergent.\nRinse well.\n";
  std::ofstream(tmp.path / "docs" / "allergies.txt")
      << "# Resident allergies\ntags: residents\nNo peanuts.\n";
  std::string store_path = (tmp.path / "store.jsonl").string();

  MemoryStore store = MemoryStore::load(store_path);
  int added = store.add_dir((tmp.path / "docs").string(), store_path);
  CHECK(added == 2);
  // Files ingest in sorted name order: allergies before cleaning.
  REQUIRE(store.docs().size() == 2);
  CHECK(store.docs()[0].id == "allergies");
  CHECK(store.docs()[0].title == "Resident allergies");
  CHECK(store.docs()[0].body == "No peanuts.\n");
  CHECK(store.docs()[1].id == "cleaning");
  CHECK(store.docs()[1].tags == std::vector<std::string>{"housework", "chemicals"});
  CHECK(store.docs()[1].body == "Use mild detergent.\nRinse well.\n");

  // The store file was persisted; reloading round-trips everything.
  MemoryStore back = MemoryStore::load(store_path);
  REQUIRE(back.docs().size() == 2);
  CHECK(back.docs()[1].to_json() == store.docs()[1].to_json());
}

TEST_CASE("duplicate ids are rejected") {
  MemoryStore store = MemoryStore::load("/nonexistent/none.jsonl");
  DeclarativeDoc d{"dup", "Title", "Body", {}};
  store.add(d);
  CHECK_THROWS_AS(store.add(d), MemoryError);
}

TEST_CASE("query_tag returns exactly the docs carrying the tag") {
  MemoryStore store = MemoryStore::load("/nonexistent/none.jsonl");
  store.add({"a", "A", "", {"pets", "safety"}});
  store.add({"b", "B", "", {"safety"}});
  store.add({"c", "C", "", {}});
  auto hits = store.query_tag("safety");
  REQUIRE(hits.size() == 2);
  CHECK(hits[0].id == "a");
  CHECK(hits[1].id == "b");
  CHECK(store.query_tag("pets").size() == 1);
  CHECK(store.query_tag("nonexistent").empty());
}

TEST_CASE("DeclarativeDoc serialization round-trips") {
  DeclarativeDoc d{"id1", "A title", "line1\nline2", {"x", "y"}};
  DeclarativeDoc back = DeclarativeDoc::from_json(d.to_json());
  CHECK(back.id == d.id);
  CHECK(back.title == d.title);
  CHECK(back.body == d.body);
  CHECK(back.tags == d.tags);
}
