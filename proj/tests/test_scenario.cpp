#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "chiralwg/scenario.hpp"

using namespace chiralwg;
using nlohmann::json;

namespace {

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in.good());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string temp_dir(const std::string& tag) {
  const auto dir = std::filesystem::temp_directory_path() / ("chiralwg_" + tag);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir.string();
}

json trajectories_config() {
  return json{{"kind", "trajectories"},
              {"coupling", "cascaded"},
              {"emitters",
               json::array({{{"x", 0.0}, {"gamma_right", 1.0}},
                            {{"x", 1.0}, {"gamma_right", 1.0}}})},
              {"initial", "eg"},
              {"t_final", 6.0},
              {"n_samples", 5},
              {"n_trajectories", 200},
              {"seed", 42}};
}

}  // namespace

TEST_CASE("minimal scatter config validates and fills nothing extra") {
  const Scenario s = make_scenario(
      json{{"kind", "scatter"}, {"beta_plus", 1.0}, {"beta_minus", 0.0}});
  CHECK(s.kind == "scatter");
  CHECK(s.params["beta_plus"] == 1.0);
}

TEST_CASE("unknown keys are rejected by name") {
  CHECK_THROWS_WITH_AS(
      make_scenario(json{{"kind", "scatter"}, {"betta_plus", 1.0}, {"beta_minus", 0.0}}),
      doctest::Contains("betta_plus"), std::invalid_argument);
  CHECK_THROWS_WITH_AS(
      make_scenario(json{{"kind", "scatter"}, {"beta_plus", 1.0}}),
      doctest::Contains("beta_minus"), std::invalid_argument);
  CHECK_THROWS_WITH_AS(
      make_scenario(json{{"kind", "scatter"},
                         {"beta_plus", "one"},
                         {"beta_minus", 0.0}}),
      doctest::Contains("number"), std::invalid_argument);
  CHECK_THROWS_AS(make_scenario(json{{"kind", "warp"}}), std::invalid_argument);
  // nested emitter objects are strict too
  json bad = trajectories_config();
  bad["emitters"][0]["gamma_rihgt"] = 1.0;
  CHECK_THROWS_WITH_AS(make_scenario(bad), doctest::Contains("gamma_rihgt"),
                       std::invalid_argument);
}

TEST_CASE("defaults are filled and echoed") {
  const Scenario s = make_scenario(
      json{{"kind", "spectrum"}, {"beta_plus", 0.4}, {"beta_minus", 0.1}});
  CHECK(s.params["delta_min"] == -5.0);
  CHECK(s.params["delta_max"] == 5.0);
  CHECK(s.params["n_points"] == 201);
}

TEST_CASE("resolved configs round-trip: parse(serialize(s)) == s") {
  const Scenario s = make_scenario(trajectories_config());
  const Scenario again = make_scenario(serialize(s));
  CHECK(again.kind == s.kind);
  CHECK(again.params == s.params);
  // and a second round is byte-stable
  CHECK(serialize(again).dump() == serialize(s).dump());
}

TEST_CASE("parse_scenario reads files and reports JSON errors") {
  const std::string dir = temp_dir("parse");
  const std::string path = dir + "/config.json";
  {
    std::ofstream out(path);
    out << trajectories_config().dump(2);
  }
  const Scenario s = parse_scenario(path);
  CHECK(s.kind == "trajectories");
  CHECK(s.params["seed"] == 42);

  {
    std::ofstream out(path);
    out << "{not json";
  }
  CHECK_THROWS_WITH_AS(parse_scenario(path), doctest::Contains("not valid JSON"),
                       std::invalid_argument);
  CHECK_THROWS_AS(parse_scenario(dir + "/missing.json"), std::invalid_argument);
  std::filesystem::remove_all(dir);
}

TEST_CASE("scatter scenario writes the Box-2 point") {
  const std::string dir = temp_dir("scatter");
  const Scenario s = make_scenario(
      json{{"kind", "scatter"}, {"beta_plus", 1.0}, {"beta_minus", 0.0}});
  const RunOutcome out = run_scenario(s, dir);
  CHECK(out.summary.find("t+=-1") != std::string::npos);
  const std::string csv = slurp(dir + "/scatter.csv");
  CHECK(csv.find("# config=") == 0);
  CHECK(csv.find("A_plus,A_minus") != std::string::npos);
  CHECK(csv.find("1,0,-1,0,1,0,0,0,0,0") != std::string::npos);
  std::filesystem::remove_all(dir);
}

TEST_CASE("evolve scenario: header and monotone decay") {
  const std::string dir = temp_dir("evolve");
  const Scenario s = make_scenario(
      json{{"kind", "evolve"},
           {"coupling", "cascaded"},
           {"emitters", json::array({{{"x", 0.0}, {"gamma_right", 1.0}}})},
           {"initial", "e"},
           {"t_final", 5.0},
           {"n_samples", 21}});
  run_scenario(s, dir);
  std::ifstream in(dir + "/evolve.csv");
  std::string line;
  std::getline(in, line);  // config comment
  std::getline(in, line);
  CHECK(line == "t,pop_e_0,purity");
  double prev = 2.0;
  int rows = 0;
  while (std::getline(in, line)) {
    const auto c1 = line.find(','), c2 = line.rfind(',');
    const double pop = std::stod(line.substr(c1 + 1, c2 - c1 - 1));
    CHECK(pop < prev);
    prev = pop;
    ++rows;
  }
  CHECK(rows == 21);
  std::filesystem::remove_all(dir);
}

TEST_CASE("trajectories scenario is byte-identical across runs and thread counts") {
  const std::string dir1 = temp_dir("traj1");
  const std::string dir2 = temp_dir("traj2");
  const std::string dir3 = temp_dir("traj3");
  const Scenario s = make_scenario(trajectories_config());

  setenv("CHIRALWG_THREADS", "1", 1);
  run_scenario(s, dir1);
  run_scenario(s, dir2);
  setenv("CHIRALWG_THREADS", "8", 1);
  run_scenario(s, dir3);
  unsetenv("CHIRALWG_THREADS");

  CHECK(slurp(dir1 + "/trajectories.csv") == slurp(dir2 + "/trajectories.csv"));
  CHECK(slurp(dir1 + "/trajectories.json") == slurp(dir2 + "/trajectories.json"));
  CHECK(slurp(dir1 + "/trajectories.csv") == slurp(dir3 + "/trajectories.csv"));
  CHECK(slurp(dir1 + "/trajectories.json") == slurp(dir3 + "/trajectories.json"));

  // a different seed changes the artifacts
  Scenario other = s;
  other.params["seed"] = 43;
  const std::string dir4 = temp_dir("traj4");
  run_scenario(other, dir4);
  CHECK(slurp(dir1 + "/trajectories.csv") != slurp(dir4 + "/trajectories.csv"));

  for (const auto& d : {dir1, dir2, dir3, dir4}) std::filesystem::remove_all(d);
}

TEST_CASE("steady scenario embeds inputs and reports the dimer") {
  const std::string dir = temp_dir("steady");
  const Scenario s = make_scenario(
      json{{"kind", "steady"},
           {"coupling", "cascaded"},
           {"emitters",
            json::array({{{"x", 0.0}, {"gamma_right", 1.0}, {"drive", {0.3, 0.0}}},
                         {{"x", 1.0}, {"gamma_right", 1.0}, {"drive", {0.3, 0.0}}}})}});
  run_scenario(s, dir);
  const json doc = json::parse(slurp(dir + "/steady.json"));
  CHECK(doc["schema_version"] == 1);
  CHECK(doc["inputs"]["emitters"][0]["gamma_loss"] == 0.0);  // default echoed
  CHECK(doc["results"]["purity"].get<double>() > 0.999);
  CHECK(doc["results"]["dimer"]["fidelity"].get<double>() > 0.999);
  CHECK(doc["results"]["flux"]["right"].get<double>() < 1e-6);
  std::filesystem::remove_all(dir);
}

TEST_CASE("field-map scenario computes the paper spin benchmark") {
  const std::string dir = temp_dir("fieldmap");
  const Scenario s = make_scenario(json{{"kind", "field-map"},
                                        {"source", "tir"},
                                        {"theta_deg", 90.0},
                                        {"nx", 101}});
  run_scenario(s, dir);
  const json doc = json::parse(slurp(dir + "/field_map.json"));
  const double spin_y = doc["results"]["photon_spin"][1].get<double>();
  CHECK(std::abs(spin_y - 0.96) < 0.01);
  // the written map loads back through the documented CSV schema
  const Scenario load = make_scenario(json{
      {"kind", "field-map"}, {"source", "file"}, {"path", dir + "/field_map.csv"}});
  const std::string dir2 = temp_dir("fieldmap2");
  run_scenario(load, dir2);
  const json doc2 = json::parse(slurp(dir2 + "/field_map.json"));
  CHECK(doc2["results"]["photon_spin"][1].get<double>() ==
        doctest::Approx(spin_y).epsilon(1e-12));
  std::filesystem::remove_all(dir);
  std::filesystem::remove_all(dir2);
}

TEST_CASE("device scenario: circulator defaults give cyclic routing") {
  const std::string dir = temp_dir("device");
  const Scenario s =
      make_scenario(json{{"kind", "device"}, {"device_type", "circulator"}});
  const RunOutcome out = run_scenario(s, dir);
  CHECK(out.summary.find("cyclic=true") != std::string::npos);
  const json doc = json::parse(slurp(dir + "/device.json"));
  CHECK(doc["inputs"]["reflectivity"] == 0.5);  // defaults echoed
  std::filesystem::remove_all(dir);
}

TEST_CASE("transfer scenario") {
  const std::string dir = temp_dir("transfer");
  const Scenario s = make_scenario(json{{"kind", "transfer"},
                                        {"c_g", {0.0, 0.0}},
                                        {"c_e", {1.0, 0.0}},
                                        {"optimize", false}});
  const RunOutcome out = run_scenario(s, dir);
  const json doc = json::parse(slurp(dir + "/transfer.json"));
  CHECK(doc["results"]["fidelity"].get<double>() > 0.99);
  CHECK(out.summary.find("fidelity=") != std::string::npos);
  std::filesystem::remove_all(dir);
}
