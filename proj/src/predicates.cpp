#include "ace/predicates.hpp"

#include <stdexcept>

namespace ace {

namespace {

double as_number(const Json& v) {
  if (v.is_boolean()) return v.get<bool>() ? 1.0 : 0.0;
  if (v.is_number()) return v.get<double>();
  throw std::runtime_error("predicate compares a non-numeric fact");
}

bool compare(const Json& fact, const std::string& op, const Json& value) {
  if (op == "eq") return fact == value;
  if (op == "ne") return fact != value;
  double a = as_number(fact);
  double b = as_number(value);
  if (op == "lt") return a < b;
  if (op == "le") return a <= b;
  if (op == "gt") return a > b;
  if (op == "ge") return a >= b;
  throw std::runtime_error("unknown predicate op: " + op);
}

}  // namespace

bool eval_predicate(const Json& pred, const Json& facts) {
  if (!pred.is_object()) throw std::runtime_error("predicate must be an object");
  if (pred.contains("const")) return pred["const"].get<bool>();
  if (pred.contains("all")) {
    for (const auto& p : pred["all"]) {
      if (!eval_predicate(p, facts)) return false;
    }
    return true;
  }
  if (pred.contains("any")) {
    for (const auto& p : pred["any"]) {
      if (eval_predicate(p, facts)) return true;
    }
    return false;
  }
  if (pred.contains("zone_dirt_zero")) {
    std::string key = "zone." + pred["zone_dirt_zero"].get<std::string>() + ".dirt";
    return facts.contains(key) && facts[key].get<double>() == 0.0;
  }
  if (pred.contains("object_absent")) {
    std::string key = "object." + pred["object_absent"].get<std::string>() + ".present";
    return !facts.contains(key) || !facts[key].get<bool>();
  }
  if (pred.contains("fact")) {
    std::string key = pred["fact"].get<std::string>();
    if (!facts.contains(key)) return false;
    return compare(facts[key], pred.value("op", "eq"), pred.at("value"));
  }
  throw std::runtime_error("unrecognized predicate form: " + pred.dump());
}

std::vector<std::string> predicate_fact_keys(const Json& pred) {
  std::vector<std::string> keys;
  if (!pred.is_object()) return keys;
  if (pred.contains("all") || pred.contains("any")) {
    const Json& list = pred.contains("all") ? pred["all"] : pred["any"];
    for (const auto& p : list) {
      for (auto& k : predicate_fact_keys(p)) keys.push_back(std::move(k));
    }
    return keys;
  }
  if (pred.contains("zone_dirt_zero")) {
    keys.push_back("zone." + pred["zone_dirt_zero"].get<std::string>() + ".dirt");
  } else if (pred.contains("object_absent")) {
    keys.push_back("object." + pred["object_absent"].get<std::string>() + ".present");
  } else if (pred.contains("fact")) {
    keys.push_back(pred["fact"].get<std::string>());
  }
  return keys;
}

bool predicates_may_overlap(const Json& a, const Json& b) {
  if (a.contains("const") && !a["const"].get<bool>()) return false;
  if (b.contains("const") && !b["const"].get<bool>()) return false;
  if (a.contains("const") && b.contains("const")) {
    return a["const"].get<bool>() && b["const"].get<bool>();
  }
  auto ka = predicate_fact_keys(a);
  auto kb = predicate_fact_keys(b);
  for (const auto& x : ka) {
    for (const auto& y : kb) {
      if (x == y) {
        // Same fact on both sides: only provably disjoint for opposed
        // simple comparisons.
        if (a.contains("fact") && b.contains("fact")) {
          std::string oa = a.value("op", "eq");
          std::string ob = b.value("op", "eq");
          if (oa == "eq" && ob == "eq" && a["value"] != b["value"]) continue;
          if ((oa == "lt" && ob == "ge") || (oa == "ge" && ob == "lt") ||
              (oa == "le" && ob == "gt") || (oa == "gt" && ob == "le")) {
            if (a["value"] == b["value"]) continue;
          }
        }
        if (a.contains("zone_dirt_zero") && b.contains("fact") &&
            y == x && b.value("op", "eq") == "gt") {
          continue;
        }
        return true;
      }
    }
  }
  // Disjoint fact vocabularies: treat as independently satisfiable but not
  // forced to co-occur; the TaskSpec invariant only forbids predicates that
  // must both hold, so disjoint keys pass.
  return false;
}

}  // namespace ace
