#pragma once

#include "bjump/ershov.hpp"

#include <json.hpp>

#include <string>
#include <vector>

namespace bjump {

struct PropertyResult {
  std::string name;
  std::size_t checked = 0;
  std::size_t failed = 0;
  nlohmann::json failures = nlohmann::json::array();  // first few counterexamples
  bool ok() const { return failed == 0; }
  void record(bool pass, const nlohmann::json& detail);
  nlohmann::json to_json() const;
};

struct SuiteReport {
  std::string suite;
  std::vector<PropertyResult> properties;
  nlohmann::json metrics = nlohmann::json::object();  // counts a caller may hold to a tolerance
  double seconds = 0;
  bool ok() const;
  const PropertyResult& property(const std::string& name) const;
  nlohmann::json to_json() const;
};

// system, ordinals, jump, ershov, erbase, shoenfield, strinc, ttsep
std::vector<std::string> suite_names();
// throws std::invalid_argument for an unknown name
SuiteReport run_suite(const std::string& name);

// Scripted w^2 witness on six points used by the Shoenfield suite and the CLI
// examples: rows 2 -> 1 at n = 0, value flips inside a row elsewhere.
Script shoenfield_demo_script();

}  // namespace bjump
