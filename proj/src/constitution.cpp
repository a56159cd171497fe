#include "ace/constitution.hpp"

#include <fstream>
#include <sstream>

namespace ace {

namespace {

std::string trim(const std::string& s) {
  auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

}  // namespace

Constitution::Constitution(std::vector<std::string> imperatives,
                           std::vector<Framework> frameworks,
                           std::optional<std::string> mission)
    : imperatives_(std::move(imperatives)),
      frameworks_(std::move(frameworks)),
      mission_(std::move(mission)) {
  if (imperatives_.empty()) {
    throw ParseError("constitution requires at least one imperative");
  }
}

std::vector<std::string> Constitution::render_sections() const {
  std::vector<std::string> sections;
  std::string imp;
  for (const auto& i : imperatives_) imp += i + "\n";
  sections.push_back(imp);
  if (!frameworks_.empty()) {
    std::string fw;
    for (const auto& f : frameworks_) fw += "[" + f.name + "]\n" + f.body + "\n";
    sections.push_back(fw);
  }
  if (mission_) sections.push_back(*mission_ + "\n");
  return sections;
}

std::string Constitution::render() const {
  std::string out;
  for (const auto& s : render_sections()) out += s;
  return out;
}

std::string Constitution::serialize() const {
  std::string out = "IMPERATIVES\n";
  for (const auto& i : imperatives_) out += i + "\n";
  if (!frameworks_.empty()) {
    out += "\nFRAMEWORKS\n";
    for (const auto& f : frameworks_) {
      out += "[" + f.name + "]\n" + f.body + "\n";
    }
  }
  if (mission_) out += "\nMISSION\n" + *mission_ + "\n";
  return out;
}

Constitution parse_constitution(const std::string& text) {
  enum Section { None, Imperatives, Frameworks, Mission };
  Section section = None;
  bool saw_imperatives = false;

  std::vector<std::string> imperatives;
  std::vector<Framework> frameworks;
  std::vector<std::string> mission_lines;

  std::vector<std::string> lines;
  {
    std::istringstream in(text);
    std::string raw;
    while (std::getline(in, raw)) lines.push_back(raw);
  }
  auto is_header = [](const std::string& t) {
    return t == "IMPERATIVES" || t == "FRAMEWORKS" || t == "MISSION";
  };
  auto looks_like_header = [](const std::string& t) {
    return !t.empty() && t.size() > 2 &&
           t.find_first_not_of("ABCDEFGHIJKLMNOPQRSTUVWXYZ") ==
               std::string::npos;
  };

  for (std::size_t n = 0; n < lines.size(); ++n) {
    const int lineno = static_cast<int>(n) + 1;
    std::string line = trim(lines[n]);
    if (line == "IMPERATIVES") { section = Imperatives; saw_imperatives = true; continue; }
    if (line == "FRAMEWORKS") { section = Frameworks; continue; }
    if (line == "MISSION") { section = Mission; continue; }
    if (looks_like_header(line)) {
      throw ParseError("unknown section '" + line + "' at line " +
                       std::to_string(lineno));
    }
    switch (section) {
      case None:
        if (!line.empty()) {
          throw ParseError("content before any section header at line " +
                           std::to_string(lineno));
        }
        break;
      case Imperatives:
        if (line.empty()) {
          // A blank line followed by more imperatives is an empty
          // imperative; a blank before the next header is a separator.
          for (std::size_t m = n + 1; m < lines.size(); ++m) {
            std::string next = trim(lines[m]);
            if (next.empty()) continue;
            if (!is_header(next)) {
              throw ParseError("empty imperative line at line " +
                               std::to_string(lineno));
            }
            break;
          }
          break;
        }
        imperatives.push_back(line);
        break;
      case Frameworks:
        if (line.empty()) break;
        if (line.front() == '[' && line.back() == ']') {
          frameworks.push_back({line.substr(1, line.size() - 2), ""});
        } else {
          if (frameworks.empty()) {
            throw ParseError("framework body before [name] at line " +
                             std::to_string(lineno));
          }
          auto& body = frameworks.back().body;
          if (!body.empty()) body += "\n";
          body += line;
        }
        break;
      case Mission:
        if (!line.empty()) mission_lines.push_back(line);
        break;
    }
  }

  if (!saw_imperatives) throw ParseError("missing IMPERATIVES section");
  if (imperatives.empty()) throw ParseError("IMPERATIVES section is empty");

  std::optional<std::string> mission;
  if (!mission_lines.empty()) {
    std::string m;
    for (const auto& l : mission_lines) {
      if (!m.empty()) m += " ";
      m += l;
    }
    mission = m;
  }
  return Constitution(std::move(imperatives), std::move(frameworks),
                      std::move(mission));
}

Constitution load_constitution(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw ParseError("cannot read constitution file: " + path);
  std::ostringstream ss;
  ss << f.rdbuf();
  return parse_constitution(ss.str());
}

}  // namespace ace
