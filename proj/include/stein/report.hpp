#pragma once

#include <optional>
#include <string>

#include "json.hpp"

namespace stein {

struct DistanceEstimate {
  double value = 0.0;
  double error_bound = 0.0;
  std::string method;
};

inline void to_json(nlohmann::json& j, const DistanceEstimate& d) {
  j = {{"value", d.value}, {"error_bound", d.error_bound}, {"method", d.method}};
}

// A named bound with its inputs, plus (optionally) the empirical estimate it
// is checked against. `satisfied` is present only when `empirical` is:
// empirical.value - empirical.error_bound <= bound.
struct BoundReport {
  std::string name;
  nlohmann::json inputs;
  double bound = 0.0;
  std::optional<DistanceEstimate> empirical;
  std::optional<bool> satisfied;

  void attach(const DistanceEstimate& est) {
    empirical = est;
    satisfied = est.value - est.error_bound <= bound;
  }
};

inline void to_json(nlohmann::json& j, const BoundReport& r) {
  j = {{"name", r.name}, {"inputs", r.inputs}, {"bound", r.bound}};
  if (r.empirical) j["empirical"] = *r.empirical;
  if (r.satisfied) j["satisfied"] = *r.satisfied;
}

}  // namespace stein
