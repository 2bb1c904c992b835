#ifndef CHIRALWG_SCENARIO_HPP
#define CHIRALWG_SCENARIO_HPP

#include <string>
#include <vector>

#include "json.hpp"

namespace chiralwg {

// Scenario configuration and dispatch. Configs are strict JSON documents:
// unknown keys are rejected by name, defaults are filled in and echoed into
// every output file for provenance.

struct Scenario {
  std::string kind;
  nlohmann::json params;  // resolved: all defaults filled
};

// Validates a raw config document (must carry "kind") and fills defaults.
Scenario make_scenario(const nlohmann::json& doc);

Scenario parse_scenario(const std::string& path);

// Resolved round-trip form: parse(serialize(s)) == s.
nlohmann::json serialize(const Scenario& s);

struct RunOutcome {
  std::string summary;                  // one line, printed to stdout
  std::vector<std::string> artifacts;   // files written
};

// Dispatches to the owning module and writes CSV/JSON artifacts into out_dir.
RunOutcome run_scenario(const Scenario& s, const std::string& out_dir);

const std::vector<std::string>& scenario_kinds();

}  // namespace chiralwg

#endif
