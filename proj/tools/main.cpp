#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "chiralwg/scenario.hpp"

namespace {

using chiralwg::Scenario;

nlohmann::json parse_set_value(const std::string& text) {
  // values parse as JSON where possible (numbers, booleans, arrays), and fall
  // back to plain strings so `--set coupling=cascaded` works unquoted
  const auto parsed = nlohmann::json::parse(text, nullptr, false);
  if (!parsed.is_discarded()) return parsed;
  return nlohmann::json(text);
}

int run(const std::string& kind, const std::string& config_path,
        const std::vector<std::string>& sets, const std::string& out_dir,
        bool seed_given, uint64_t seed) {
  nlohmann::json doc = nlohmann::json::object();
  if (!config_path.empty()) {
    doc = chiralwg::serialize(chiralwg::parse_scenario(config_path));
    if (doc["kind"].get<std::string>() != kind) {
      throw std::invalid_argument("config kind '" +
                                  doc["kind"].get<std::string>() +
                                  "' does not match subcommand '" + kind + "'");
    }
  }
  doc["kind"] = kind;
  for (const auto& kv : sets) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos) {
      throw std::invalid_argument("--set expects key=value, got '" + kv + "'");
    }
    doc[kv.substr(0, eq)] = parse_set_value(kv.substr(eq + 1));
  }
  if (seed_given) doc["seed"] = seed;

  const Scenario scenario = chiralwg::make_scenario(doc);
  const chiralwg::RunOutcome outcome = chiralwg::run_scenario(scenario, out_dir);
  std::cout << outcome.summary << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"chiralwg: directional light-matter coupling in 1D channels"};
  app.require_subcommand(1);

  std::string config_path, out_dir = ".";
  std::vector<std::string> sets;
  uint64_t seed = 0;
  bool seed_given = false;

  std::vector<CLI::App*> subs;
  for (const auto& kind : chiralwg::scenario_kinds()) {
    subs.push_back(app.add_subcommand(kind, "run a '" + kind + "' scenario"));
  }
  app.add_option("--config", config_path, "JSON scenario config")->expected(1);
  app.add_option("--set", sets, "override a config key (key=value, repeatable)");
  app.add_option("--out", out_dir, "output directory");
  app.add_option("--seed", seed, "override the RNG seed")
      ->each([&](const std::string&) { seed_given = true; });

  // options are global: accept them before or after the subcommand
  for (auto* sub : subs) {
    sub->add_option("--config", config_path, "JSON scenario config");
    sub->add_option("--set", sets, "override a config key (key=value, repeatable)");
    sub->add_option("--out", out_dir, "output directory");
    sub->add_option("--seed", seed, "override the RNG seed")
        ->each([&](const std::string&) { seed_given = true; });
  }

  CLI11_PARSE(app, argc, argv);

  try {
    const std::string kind = app.get_subcommands().front()->get_name();
    return run(kind, config_path, sets, out_dir, seed_given, seed);
  } catch (const std::invalid_argument& err) {
    std::cerr << nlohmann::json{{"error", {{"type", "invalid_argument"},
                                           {"message", err.what()}}}}
                     .dump()
              << "\n";
    return 1;
  } catch (const std::exception& err) {
    std::cerr << nlohmann::json{{"error", {{"type", "runtime_error"},
                                           {"message", err.what()}}}}
                     .dump()
              << "\n";
    return 1;
  }
}
