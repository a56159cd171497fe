#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace ace {

struct ParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Framework {
  std::string name;
  std::string body;
  bool operator==(const Framework&) const = default;
};

// Plain-text value document: heuristic imperatives, named secondary
// frameworks, optional mission statement. Immutable after load.
class Constitution {
 public:
  Constitution(std::vector<std::string> imperatives,
               std::vector<Framework> frameworks,
               std::optional<std::string> mission);

  const std::vector<std::string>& imperatives() const { return imperatives_; }
  const std::vector<Framework>& frameworks() const { return frameworks_; }
  const std::optional<std::string>& mission() const { return mission_; }

  // Sections in precedence order: imperatives, frameworks, mission.
  // Stable bytes for identical inputs.
  std::vector<std::string> render_sections() const;
  std::string render() const;

  std::string serialize() const;

  bool operator==(const Constitution&) const = default;

 private:
  std::vector<std::string> imperatives_;
  std::vector<Framework> frameworks_;
  std::optional<std::string> mission_;
};

// File grammar: upper-case section headers IMPERATIVES / FRAMEWORKS /
// MISSION; one imperative per line; frameworks as [Name] blocks.
Constitution parse_constitution(const std::string& text);

Constitution load_constitution(const std::string& path);

}  // namespace ace
