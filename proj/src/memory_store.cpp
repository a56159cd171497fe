#include "ace/memory_store.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace ace {

namespace fs = std::filesystem;

Json DeclarativeDoc::to_json() const {
  Json j;
  j["id"] = id;
  j["title"] = title;
  j["body"] = body;
  Json t = Json::array();
  for (const auto& tag : tags) t.push_back(tag);
  j["tags"] = t;
  return j;
}

DeclarativeDoc DeclarativeDoc::from_json(const Json& j) {
  DeclarativeDoc d;
  d.id = j.at("id").get<std::string>();
  d.title = j.at("title").get<std::string>();
  d.body = j.at("body").get<std::string>();
  for (const auto& t : j.at("tags")) d.tags.push_back(t.get<std::string>());
  return d;
}

MemoryStore MemoryStore::load(const std::string& path) {
  MemoryStore store;
  std::ifstream in(path);
  if (!in) return store;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    try {
      store.add(DeclarativeDoc::from_json(Json::parse(line)));
    } catch (const Json::parse_error&) {
      throw MemoryError("corrupt memory store line: " + line);
    }
  }
  return store;
}

void MemoryStore::add(const DeclarativeDoc& doc) {
  for (const auto& d : docs_) {
    if (d.id == doc.id) throw MemoryError("duplicate document id: " + doc.id);
  }
  docs_.push_back(doc);
}

namespace {

DeclarativeDoc parse_doc_file(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw MemoryError("cannot read document: " + path.string());
  DeclarativeDoc doc;
  doc.id = path.stem().string();
  doc.title = doc.id;
  std::ostringstream body;
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    if (first && line.rfind("# ", 0) == 0) {
      doc.title = line.substr(2);
      first = false;
      continue;
    }
    first = false;
    if (line.rfind("tags:", 0) == 0 && doc.tags.empty()) {
      std::istringstream ts(line.substr(5));
      std::string tag;
      while (std::getline(ts, tag, ',')) {
        auto b = tag.find_first_not_of(" \t");
        auto e = tag.find_last_not_of(" \t");
        if (b != std::string::npos) doc.tags.push_back(tag.substr(b, e - b + 1));
      }
      continue;
    }
    body << line << '\n';
  }
  doc.body = body.str();
  return doc;
}

}  // namespace

int MemoryStore::add_dir(const std::string& dir, const std::string& store_path) {
  if (!fs::is_directory(dir)) {
    throw MemoryError("not a directory: " + dir);
  }
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (entry.is_regular_file()) files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());
  int added = 0;
  for (const auto& f : files) {
    add(parse_doc_file(f));
    ++added;
  }
  save(store_path);
  return added;
}

std::vector<DeclarativeDoc> MemoryStore::query_tag(const std::string& tag) const {
  std::vector<DeclarativeDoc> out;
  for (const auto& d : docs_) {
    if (std::find(d.tags.begin(), d.tags.end(), tag) != d.tags.end()) {
      out.push_back(d);
    }
  }
  return out;
}

void MemoryStore::save(const std::string& path) const {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw MemoryError("cannot write memory store: " + path);
  for (const auto& d : docs_) out << d.to_json().dump() << '\n';
}

}  // namespace ace
