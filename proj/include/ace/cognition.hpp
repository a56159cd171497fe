#pragma once

#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include "ace/json.hpp"

namespace ace {

enum class RequestKind { Judge, Strategize, ShapeMission, Plan, Deliberate };

std::string_view to_string(RequestKind kind);
std::optional<RequestKind> request_kind_from_string(std::string_view name);

struct RequestError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct EngineUnavailable : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct CognitionRequest {
  RequestKind kind = RequestKind::Judge;
  Json context;  // named sections; required set depends on kind
  long seed = 0;

  Json to_json() const;
  static CognitionRequest from_json(const Json& j);
};

struct CognitionResponse {
  RequestKind kind = RequestKind::Judge;
  Json payload;

  Json to_json() const;
  static CognitionResponse from_json(const Json& j);
};

enum class JudgmentVerdict { Approve, Deny, Amend };
std::string_view to_string(JudgmentVerdict v);
std::optional<JudgmentVerdict> verdict_from_string(std::string_view name);

struct Judgment {
  JudgmentVerdict verdict = JudgmentVerdict::Approve;
  std::string rationale;
  std::vector<int> cited_principles;  // 1-based imperative indices
  Json extra;                         // preferred option, per-option verdicts

  static Judgment from_payload(const Json& payload);
  Json to_payload() const;
};

// Throws RequestError when a required context section is missing.
void check_request(const CognitionRequest& request);

// True iff the payload matches the response schema for the kind.
bool validate_response(RequestKind kind, const Json& payload);

class CognitionEngine {
 public:
  virtual ~CognitionEngine() = default;
  virtual CognitionResponse evaluate(const CognitionRequest& request) = 0;
};

// Deterministic keyword/flag-driven engine; a pure function of
// (request, seed).
class RuleEngine : public CognitionEngine {
 public:
  CognitionResponse evaluate(const CognitionRequest& request) override;
};

// Adapter for an external cognition service: POST /evaluate with a
// CognitionRequest document, hard timeout. Throws EngineUnavailable so
// callers can fall back to the rule engine.
class ExternalEngine : public CognitionEngine {
 public:
  explicit ExternalEngine(std::string address, int timeout_ms = 2000);
  CognitionResponse evaluate(const CognitionRequest& request) override;

 private:
  std::string host_;
  int port_ = 80;
  int timeout_ms_;
};

// Majority verdict across an odd number of engines; rationales are
// concatenated. Even engine counts are a configuration error.
Judgment ensemble_judge(const std::vector<CognitionEngine*>& engines,
                        const CognitionRequest& request);

}  // namespace ace
