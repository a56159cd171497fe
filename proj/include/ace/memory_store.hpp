#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "ace/json.hpp"

namespace ace {

struct MemoryError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct DeclarativeDoc {
  std::string id;
  std::string title;
  std::string body;
  std::vector<std::string> tags;

  Json to_json() const;
  static DeclarativeDoc from_json(const Json& j);
};

// Read-only declarative document store. Documents are ingested from a
// directory of text files (first line "# title", optional "tags: a, b"
// line, rest body) and persisted as one JSON record per line.
class MemoryStore {
 public:
  // Loads an existing store file; missing file means an empty store.
  static MemoryStore load(const std::string& path);

  // Ingests every regular file in the directory (sorted by name) and
  // appends the new docs to the store file. Duplicate ids are an error.
  int add_dir(const std::string& dir, const std::string& store_path);

  void add(const DeclarativeDoc& doc);

  const std::vector<DeclarativeDoc>& docs() const { return docs_; }
  std::vector<DeclarativeDoc> query_tag(const std::string& tag) const;

  void save(const std::string& path) const;

 private:
  std::vector<DeclarativeDoc> docs_;
};

}  // namespace ace
