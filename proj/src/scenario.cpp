#include "chiralwg/scenario.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "chiralwg/dynamics.hpp"
#include "chiralwg/field_optics.hpp"
#include "chiralwg/io_format.hpp"
#include "chiralwg/protocols.hpp"
#include "chiralwg/scattering.hpp"

namespace chiralwg {

namespace {

using nlohmann::json;

// ---------------------------------------------------------------------------
// schema: per-kind key tables with defaults
// ---------------------------------------------------------------------------

struct KeySpec {
  const char* name;
  json::value_t type;
  bool required;
  json fallback;  // used when not required
};

const json kComplexZero = json::array({0.0, 0.0});

// channel emitter sub-schema (evolve / steady / trajectories)
const std::vector<KeySpec> kChannelEmitterKeys = {
    {"x", json::value_t::number_float, true, {}},
    {"gamma_right", json::value_t::number_float, false, 0.0},
    {"gamma_left", json::value_t::number_float, false, 0.0},
    {"gamma_loss", json::value_t::number_float, false, 0.0},
    {"detuning", json::value_t::number_float, false, 0.0},
    {"drive", json::value_t::array, false, kComplexZero},
};

// chain emitter sub-schema (chain / device isolator)
const std::vector<KeySpec> kChainEmitterKeys = {
    {"beta_plus", json::value_t::number_float, true, {}},
    {"beta_minus", json::value_t::number_float, true, {}},
    {"delta", json::value_t::number_float, false, 0.0},
};

bool type_matches(const json& v, json::value_t want) {
  if (want == json::value_t::number_float) return v.is_number();
  if (want == json::value_t::number_unsigned) {
    return v.is_number_integer() && v.get<long long>() >= 0;
  }
  return v.type() == want;
}

const char* type_name(json::value_t t) {
  switch (t) {
    case json::value_t::number_float:
      return "number";
    case json::value_t::number_unsigned:
      return "nonnegative integer";
    case json::value_t::string:
      return "string";
    case json::value_t::boolean:
      return "boolean";
    case json::value_t::array:
      return "array";
    default:
      return "value";
  }
}

void apply_schema(json& obj, const std::vector<KeySpec>& keys,
                  const std::string& context) {
  require(obj.is_object(), context + " must be a JSON object");
  for (const auto& item : obj.items()) {
    bool known = false;
    for (const auto& k : keys) known = known || item.key() == k.name;
    if (!known) {
      throw std::invalid_argument("unknown key '" + item.key() + "' in " + context);
    }
  }
  for (const auto& k : keys) {
    if (!obj.contains(k.name)) {
      if (k.required) {
        throw std::invalid_argument("missing required key '" + std::string(k.name) +
                                    "' in " + context);
      }
      obj[k.name] = k.fallback;
    }
    if (!type_matches(obj[k.name], k.type)) {
      throw std::invalid_argument("key '" + std::string(k.name) + "' in " + context +
                                  " must be a " + type_name(k.type));
    }
  }
}

void apply_emitter_schema(json& params, const std::vector<KeySpec>& sub,
                          const std::string& context) {
  require(params["emitters"].is_array() && !params["emitters"].empty(),
          "'emitters' must be a nonempty array in " + context);
  int j = 0;
  for (auto& e : params["emitters"]) {
    apply_schema(e, sub, context + " emitters[" + std::to_string(j++) + "]");
  }
}

std::vector<KeySpec> schema_for(const std::string& kind) {
  if (kind == "scatter") {
    return {{"beta_plus", json::value_t::number_float, true, {}},
            {"beta_minus", json::value_t::number_float, true, {}}};
  }
  if (kind == "spectrum") {
    return {{"beta_plus", json::value_t::number_float, true, {}},
            {"beta_minus", json::value_t::number_float, true, {}},
            {"delta_min", json::value_t::number_float, false, -5.0},
            {"delta_max", json::value_t::number_float, false, 5.0},
            {"n_points", json::value_t::number_unsigned, false, 201}};
  }
  if (kind == "chain") {
    return {{"emitters", json::value_t::array, true, {}},
            {"phases", json::value_t::array, false, json::array()}};
  }
  if (kind == "evolve" || kind == "steady" || kind == "trajectories") {
    std::vector<KeySpec> keys = {
        {"coupling", json::value_t::string, true, {}},
        {"emitters", json::value_t::array, true, {}},
        {"wavenumber", json::value_t::number_float, false, 2.0 * kPi},
    };
    if (kind == "evolve" || kind == "trajectories") {
      keys.push_back({"initial", json::value_t::string, false, "ground"});
      keys.push_back({"t_final", json::value_t::number_float, true, {}});
      keys.push_back({"n_samples", json::value_t::number_unsigned, false, 201});
    }
    if (kind == "evolve") {
      keys.push_back({"abs_tol", json::value_t::number_float, false, 1e-10});
      keys.push_back({"rel_tol", json::value_t::number_float, false, 1e-8});
    }
    if (kind == "trajectories") {
      keys.push_back({"n_trajectories", json::value_t::number_unsigned, false, 1000});
      keys.push_back({"seed", json::value_t::number_unsigned, false, 0});
    }
    return keys;
  }
  if (kind == "field-map") {
    return {{"source", json::value_t::string, true, {}},
            {"path", json::value_t::string, false, ""},
            {"n1", json::value_t::number_float, false, 1.45},
            {"n2", json::value_t::number_float, false, 1.0},
            {"theta_deg", json::value_t::number_float, false, 89.9},
            {"lambda_nm", json::value_t::number_float, false, 852.0},
            {"x_max", json::value_t::number_float, false, 0.5},
            {"nx", json::value_t::number_unsigned, false, 101}};
  }
  if (kind == "transfer") {
    return {{"c_g", json::value_t::array, true, {}},
            {"c_e", json::value_t::array, true, {}},
            {"t_final", json::value_t::number_float, false, 16.0},
            {"bandwidth", json::value_t::number_float, false, 1.0},
            {"optimize", json::value_t::boolean, false, true},
            {"gamma_loss", json::value_t::number_float, false, 0.0},
            {"n_samples", json::value_t::number_unsigned, false, 201}};
  }
  if (kind == "dimer-scan") {
    return {{"amplitudes", json::value_t::array, true, {}},
            {"phases", json::value_t::array, true, {}},
            {"ratios", json::value_t::array, true, {}}};
  }
  if (kind == "device") {
    return {{"device_type", json::value_t::string, true, {}},
            {"emitters", json::value_t::array, false, json::array()},
            {"phases", json::value_t::array, false, json::array()},
            {"phi_fwd", json::value_t::number_float, false, kPi},
            {"phi_bwd", json::value_t::number_float, false, 0.0},
            {"reflectivity", json::value_t::number_float, false, 0.5},
            {"arm_beta_plus", json::value_t::number_float, false, -1.0},
            {"arm_beta_minus", json::value_t::number_float, false, 0.0}};
  }
  throw std::invalid_argument("unknown scenario kind '" + kind + "'");
}

// ---------------------------------------------------------------------------
// typed readers
// ---------------------------------------------------------------------------

Complex read_complex(const json& v, const std::string& what) {
  require(v.is_array() && v.size() == 2 && v[0].is_number() && v[1].is_number(),
          what + " must be a [re, im] pair");
  return Complex(v[0].get<double>(), v[1].get<double>());
}

std::vector<double> read_number_array(const json& v, const std::string& what) {
  require(v.is_array(), what + " must be an array of numbers");
  std::vector<double> out;
  for (const auto& x : v) {
    require(x.is_number(), what + " must contain only numbers");
    out.push_back(x.get<double>());
  }
  return out;
}

ChiralChannel read_channel(const json& params) {
  ChiralChannel ch;
  ch.wavenumber = params["wavenumber"].get<double>();
  for (const auto& e : params["emitters"]) {
    EmitterSpec spec;
    spec.x = e["x"].get<double>();
    spec.gamma_right = e["gamma_right"].get<double>();
    spec.gamma_left = e["gamma_left"].get<double>();
    spec.gamma_loss = e["gamma_loss"].get<double>();
    spec.detuning = e["detuning"].get<double>();
    spec.drive = read_complex(e["drive"], "emitter drive");
    ch.emitters.push_back(spec);
  }
  return ch;
}

Generator build_generator(const std::string& coupling, const ChiralChannel& ch) {
  if (coupling == "cascaded") return build_cascaded(ch);
  if (coupling == "bidirectional") return build_bidirectional(ch);
  if (coupling == "chiral") return build_chiral(ch);
  throw std::invalid_argument(
      "coupling must be cascaded, bidirectional or chiral, got '" + coupling + "'");
}

PureState read_initial(const json& params, int n_sites) {
  const std::string label = params["initial"].get<std::string>();
  if (label == "ground") return ground_state(n_sites);
  require(static_cast<int>(label.size()) == n_sites,
          "initial state pattern '" + label + "' does not match emitter count");
  return basis_state(label);
}

ChainSpec read_chain(const json& params) {
  ChainSpec chain;
  for (const auto& e : params["emitters"]) {
    chain.emitters.push_back({e["beta_plus"].get<double>(),
                              e["beta_minus"].get<double>(),
                              e["delta"].get<double>()});
  }
  chain.phases = read_number_array(params["phases"], "'phases'");
  if (chain.phases.empty() && chain.emitters.size() > 1) {
    chain.phases.assign(chain.emitters.size() - 1, 0.0);
  }
  chain.validate();
  return chain;
}

// ---------------------------------------------------------------------------
// writers
// ---------------------------------------------------------------------------

class CsvWriter {
 public:
  CsvWriter(const std::string& path, const Scenario& s, const std::string& header)
      : path_(path), out_(path, std::ios::binary) {
    require(out_.good(), "cannot open '" + path + "' for writing");
    out_ << "# config=" << serialize(s).dump() << "\n" << header << "\n";
  }

  void row(const std::vector<double>& values) {
    for (size_t i = 0; i < values.size(); ++i) {
      if (i) out_ << ',';
      out_ << format_double(values[i]);
    }
    out_ << "\n";
  }

  void close() {
    out_.flush();
    require(out_.good(), "write to '" + path_ + "' failed");
  }

 private:
  std::string path_;
  std::ofstream out_;
};

void write_json(const std::string& path, const json& doc) {
  std::ofstream out(path, std::ios::binary);
  require(out.good(), "cannot open '" + path + "' for writing");
  out << doc.dump(2) << "\n";
  out.flush();
  require(out.good(), "write to '" + path + "' failed");
}

json report_envelope(const Scenario& s, json results) {
  return json{{"schema_version", 1},
              {"kind", s.kind},
              {"inputs", s.params},
              {"results", std::move(results)}};
}

std::string join_path(const std::string& dir, const std::string& name) {
  return (std::filesystem::path(dir) / name).string();
}

json complex_json(const Complex& z) { return json::array({z.real(), z.imag()}); }

// ---------------------------------------------------------------------------
// per-kind runners
// ---------------------------------------------------------------------------

RunOutcome run_scatter(const Scenario& s, const std::string& out_dir) {
  const ScatterSet sc = scatter_on_resonance(s.params["beta_plus"].get<double>(),
                                             s.params["beta_minus"].get<double>());
  const std::string path = join_path(out_dir, "scatter.csv");
  CsvWriter csv(path, s,
                "beta_plus,beta_minus,re_t_plus,im_t_plus,re_t_minus,im_t_minus,"
                "re_r,im_r,A_plus,A_minus");
  csv.row({s.params["beta_plus"].get<double>(), s.params["beta_minus"].get<double>(),
           sc.t_plus.real(), sc.t_plus.imag(), sc.t_minus.real(), sc.t_minus.imag(),
           sc.r.real(), sc.r.imag(), sc.a_plus, sc.a_minus});
  csv.close();
  std::ostringstream msg;
  msg << "scatter: t+=" << format_complex(sc.t_plus)
      << " t-=" << format_complex(sc.t_minus) << " r=" << format_complex(sc.r)
      << " A+=" << format_double(sc.a_plus) << " A-=" << format_double(sc.a_minus);
  return {msg.str(), {path}};
}

RunOutcome run_spectrum(const Scenario& s, const std::string& out_dir) {
  const double bp = s.params["beta_plus"].get<double>();
  const double bm = s.params["beta_minus"].get<double>();
  const double lo = s.params["delta_min"].get<double>();
  const double hi = s.params["delta_max"].get<double>();
  const int n = s.params["n_points"].get<int>();
  require(n >= 2 && hi > lo, "spectrum needs n_points >= 2 and delta_max > delta_min");
  const std::string path = join_path(out_dir, "spectrum.csv");
  CsvWriter csv(path, s,
                "delta,re_t_plus,im_t_plus,re_t_minus,im_t_minus,re_r,im_r,"
                "A_plus,A_minus");
  for (int i = 0; i < n; ++i) {
    const double delta = lo + (hi - lo) * i / (n - 1);
    const ScatterSet sc = scatter_spectrum(bp, bm, delta);
    csv.row({delta, sc.t_plus.real(), sc.t_plus.imag(), sc.t_minus.real(),
             sc.t_minus.imag(), sc.r.real(), sc.r.imag(), sc.a_plus, sc.a_minus});
  }
  csv.close();
  return {"spectrum: wrote " + std::to_string(n) + " points", {path}};
}

RunOutcome run_chain(const Scenario& s, const std::string& out_dir) {
  const ChainSpec chain = read_chain(s.params);
  const TwoPortScatter tw = chain_smatrix(chain);
  const IsolationMetrics m = isolation_metrics(chain);
  json results;
  results["t_fwd"] = complex_json(tw.t_fwd);
  results["t_bwd"] = complex_json(tw.t_bwd);
  results["r_left"] = complex_json(tw.r_left);
  results["r_right"] = complex_json(tw.r_right);
  results["transmission_fwd"] = std::norm(tw.t_fwd);
  results["transmission_bwd"] = std::norm(tw.t_bwd);
  results["insertion_loss_db"] = m.insertion_loss_db;
  if (std::isinf(m.isolation_db)) {
    results["isolation_db"] = "inf";
  } else {
    results["isolation_db"] = m.isolation_db;
  }
  results["pass_direction"] = to_string(m.pass);
  results["reciprocal"] = m.reciprocal;
  const std::string path = join_path(out_dir, "chain.json");
  write_json(path, report_envelope(s, results));
  std::ostringstream msg;
  msg << "chain: |t_fwd|^2=" << format_double(std::norm(tw.t_fwd))
      << " |t_bwd|^2=" << format_double(std::norm(tw.t_bwd));
  return {msg.str(), {path}};
}

RunOutcome run_evolve(const Scenario& s, const std::string& out_dir) {
  const ChiralChannel ch = read_channel(s.params);
  const Generator gen = build_generator(s.params["coupling"].get<std::string>(), ch);
  const PureState psi0 = read_initial(s.params, ch.size());
  EvolveOptions opt;
  opt.abs_tol = s.params["abs_tol"].get<double>();
  opt.rel_tol = s.params["rel_tol"].get<double>();
  opt.n_samples = s.params["n_samples"].get<int>();
  opt.store_states = false;
  const Trajectory traj =
      evolve(gen, density_from_pure(psi0), s.params["t_final"].get<double>(), opt);

  std::string header = "t";
  for (int j = 0; j < ch.size(); ++j) header += ",pop_e_" + std::to_string(j);
  header += ",purity";
  const std::string path = join_path(out_dir, "evolve.csv");
  CsvWriter csv(path, s, header);
  for (size_t i = 0; i < traj.times.size(); ++i) {
    std::vector<double> row{traj.times[i]};
    row.insert(row.end(), traj.populations[i].begin(), traj.populations[i].end());
    row.push_back(traj.purity[i]);
    csv.row(row);
  }
  csv.close();
  std::ostringstream msg;
  msg << "evolve: " << traj.times.size()
      << " samples, final purity=" << format_double(traj.purity.back());
  return {msg.str(), {path}};
}

RunOutcome run_steady(const Scenario& s, const std::string& out_dir) {
  const ChiralChannel ch = read_channel(s.params);
  const Generator gen = build_generator(s.params["coupling"].get<std::string>(), ch);
  const SteadyStateResult ss = steady_state(gen);

  json results;
  results["degenerate"] = ss.degenerate;
  results["zero_multiplicity"] = ss.zero_multiplicity;
  results["residual"] = ss.residual;
  if (!ss.degenerate) {
    results["purity"] = purity(ss.rho);
    std::vector<double> pops;
    for (int j = 0; j < ch.size(); ++j) {
      pops.push_back(
          expectation(ss.rho, embed_operator(number_op(), j, ch.size())).real());
    }
    results["populations"] = pops;
    json flux = json::object();
    for (const auto& [label, f] : photon_flux(gen, ss.rho)) flux[label] = f;
    results["flux"] = flux;
    if (ch.size() == 2) {
      const DimerReport rep = dimer_analysis(ss.rho);
      results["dimer"] = {{"alpha", complex_json(rep.alpha)},
                          {"fidelity", rep.fidelity},
                          {"singlet_weight", rep.singlet_weight},
                          {"fit_residual", rep.fit_residual}};
    }
  }
  const std::string path = join_path(out_dir, "steady.json");
  write_json(path, report_envelope(s, results));
  std::ostringstream msg;
  if (ss.degenerate) {
    msg << "steady: degenerate null space, multiplicity " << ss.zero_multiplicity;
  } else {
    msg << "steady: purity=" << format_double(purity(ss.rho))
        << " residual=" << format_double(ss.residual);
  }
  return {msg.str(), {path}};
}

RunOutcome run_trajectories(const Scenario& s, const std::string& out_dir) {
  const ChiralChannel ch = read_channel(s.params);
  const Generator gen = build_generator(s.params["coupling"].get<std::string>(), ch);
  const PureState psi0 = read_initial(s.params, ch.size());
  McOptions opt;
  opt.n_trajectories = s.params["n_trajectories"].get<int>();
  opt.seed = s.params["seed"].get<uint64_t>();
  opt.n_samples = s.params["n_samples"].get<int>();
  opt.record_states = false;
  const McResult mc =
      mc_trajectories(gen, psi0, s.params["t_final"].get<double>(), opt);

  std::string header = "t";
  for (int j = 0; j < ch.size(); ++j) header += ",pop_e_" + std::to_string(j);
  const std::string csv_path = join_path(out_dir, "trajectories.csv");
  CsvWriter csv(csv_path, s, header);
  for (size_t i = 0; i < mc.times.size(); ++i) {
    std::vector<double> row{mc.times[i]};
    row.insert(row.end(), mc.mean_populations[i].begin(),
               mc.mean_populations[i].end());
    csv.row(row);
  }
  csv.close();

  long total = 0;
  json counts = json::object();
  for (size_t m = 0; m < gen.jumps.size(); ++m) {
    counts[gen.jumps[m].label] = mc.jump_counts[m];
    total += mc.jump_counts[m];
  }
  json results;
  results["jump_counts"] = counts;
  results["total_jumps"] = total;
  results["mean_jumps_per_trajectory"] =
      static_cast<double>(total) / opt.n_trajectories;
  double first_sum = 0.0;
  long first_n = 0;
  for (const auto& ev : mc.record.events) {
    if (!ev.empty()) {
      first_sum += ev.front().time;
      ++first_n;
    }
  }
  results["mean_first_jump_time"] =
      first_n > 0 ? json(first_sum / static_cast<double>(first_n)) : json();
  const std::string json_path = join_path(out_dir, "trajectories.json");
  write_json(json_path, report_envelope(s, results));

  std::ostringstream msg;
  msg << "trajectories: " << opt.n_trajectories << " runs, " << total << " jumps";
  return {msg.str(), {csv_path, json_path}};
}

RunOutcome run_field_map(const Scenario& s, const std::string& out_dir) {
  const std::string source = s.params["source"].get<std::string>();
  FieldMap map;
  json results;
  std::vector<std::string> artifacts;
  if (source == "tir") {
    const double theta = s.params["theta_deg"].get<double>() * kPi / 180.0;
    const double n1 = s.params["n1"].get<double>();
    const double n2 = s.params["n2"].get<double>();
    GridSpec grid;
    grid.x0 = 0.0;
    grid.x1 = s.params["x_max"].get<double>();
    grid.nx = s.params["nx"].get<int>();
    map = tir_evanescent_field(n1, n2, theta, s.params["lambda_nm"].get<double>(),
                               grid);
    const std::string map_path = join_path(out_dir, "field_map.csv");
    save_field_map(map, map_path);
    artifacts.push_back(map_path);
    const double beta = tir_propagation_constant(n1, theta);
    const double kappa = tir_decay_constant(n1, n2, theta);
    results["propagation_constant"] = beta;
    results["decay_constant"] = kappa;
    results["spin_formula"] = 2.0 * beta * kappa / (beta * beta + kappa * kappa);
  } else if (source == "file") {
    require(!s.params["path"].get<std::string>().empty(),
            "field-map source 'file' requires 'path'");
    map = load_field_map(s.params["path"].get<std::string>());
  } else {
    throw std::invalid_argument("field-map source must be 'tir' or 'file'");
  }

  const Vector3d spin = photon_spin_expectation(map);
  results["photon_spin"] = {spin(0), spin(1), spin(2)};
  results["samples"] = map.nx() * map.ny();
  const std::string json_path = join_path(out_dir, "field_map.json");
  write_json(json_path, report_envelope(s, results));
  artifacts.push_back(json_path);
  std::ostringstream msg;
  msg << "field-map: photon spin = (" << format_double(spin(0)) << ", "
      << format_double(spin(1)) << ", " << format_double(spin(2)) << ")";
  return {msg.str(), artifacts};
}

RunOutcome run_transfer(const Scenario& s, const std::string& out_dir) {
  TransferOptions opt;
  opt.t_final = s.params["t_final"].get<double>();
  opt.bandwidth = s.params["bandwidth"].get<double>();
  opt.optimize = s.params["optimize"].get<bool>();
  opt.gamma_loss = s.params["gamma_loss"].get<double>();
  opt.n_samples = s.params["n_samples"].get<int>();
  const Complex c_g = read_complex(s.params["c_g"], "'c_g'");
  const Complex c_e = read_complex(s.params["c_e"], "'c_e'");
  const TransferResult res = state_transfer(c_g, c_e, opt);

  const std::string csv_path = join_path(out_dir, "transfer.csv");
  CsvWriter csv(csv_path, s, "t,gamma_1,gamma_2");
  for (size_t i = 0; i < res.times.size(); ++i) {
    csv.row({res.times[i], res.gamma1[i], res.gamma2[i]});
  }
  csv.close();

  json results;
  results["fidelity"] = res.fidelity;
  results["bandwidth"] = res.bandwidth;
  results["center"] = res.center;
  const std::string json_path = join_path(out_dir, "transfer.json");
  write_json(json_path, report_envelope(s, results));
  return {"transfer: fidelity=" + format_double(res.fidelity),
          {csv_path, json_path}};
}

RunOutcome run_dimer_scan(const Scenario& s, const std::string& out_dir) {
  const ScanResult res =
      dimer_scan(read_number_array(s.params["amplitudes"], "'amplitudes'"),
                 read_number_array(s.params["phases"], "'phases'"),
                 read_number_array(s.params["ratios"], "'ratios'"));
  const std::string path = join_path(out_dir, "dimer_scan.csv");
  CsvWriter csv(path, s, "amplitude,phase,ratio,purity,dimer_fidelity,right_flux");
  double best = 0.0;
  for (const auto& pt : res.points) {
    csv.row({pt.amplitude, pt.phase, pt.ratio, pt.purity, pt.dimer_fidelity,
             pt.right_flux});
    best = std::max(best, pt.purity);
  }
  csv.close();
  return {"dimer-scan: " + std::to_string(res.points.size()) +
              " points, max purity=" + format_double(best),
          {path}};
}

RunOutcome run_device(const Scenario& s, const std::string& out_dir) {
  const std::string type = s.params["device_type"].get<std::string>();
  json report;
  std::string summary;
  if (type == "isolator") {
    require(!s.params["emitters"].empty(), "isolator device requires 'emitters'");
    IsolatorSpec spec;
    spec.chain = read_chain(s.params);
    report = device_report(spec);
    summary = "device: isolator, isolation_db=" +
              (report["results"]["isolation_db"].is_string()
                   ? report["results"]["isolation_db"].get<std::string>()
                   : format_double(report["results"]["isolation_db"].get<double>()));
  } else if (type == "circulator") {
    CirculatorSpec spec;
    spec.reflectivity = s.params["reflectivity"].get<double>();
    if (s.params["arm_beta_plus"].get<double>() >= 0.0) {
      spec.arm_from_emitter = true;
      spec.beta_plus = s.params["arm_beta_plus"].get<double>();
      spec.beta_minus = s.params["arm_beta_minus"].get<double>();
    } else {
      spec.phi_fwd = s.params["phi_fwd"].get<double>();
      spec.phi_bwd = s.params["phi_bwd"].get<double>();
    }
    report = device_report(spec);
    summary = std::string("device: circulator, cyclic=") +
              (report["diagnostics"]["cyclic"].get<bool>() ? "true" : "false");
  } else {
    throw std::invalid_argument("device_type must be 'isolator' or 'circulator'");
  }
  report["inputs"] = s.params;  // full resolved parameter set for provenance
  const std::string path = join_path(out_dir, "device.json");
  write_json(path, report);
  return {summary, {path}};
}

}  // namespace

const std::vector<std::string>& scenario_kinds() {
  static const std::vector<std::string> kinds = {
      "scatter", "spectrum",  "chain",    "evolve",     "steady",
      "trajectories", "field-map", "transfer", "dimer-scan", "device"};
  return kinds;
}

Scenario make_scenario(const nlohmann::json& doc) {
  require(doc.is_object(), "scenario config must be a JSON object");
  require(doc.contains("kind"), "scenario config must set 'kind'");
  require(doc["kind"].is_string(), "'kind' must be a string");
  Scenario s;
  s.kind = doc["kind"].get<std::string>();
  bool known = false;
  for (const auto& k : scenario_kinds()) known = known || k == s.kind;
  require(known, "unknown scenario kind '" + s.kind + "'");

  s.params = doc;
  s.params.erase("kind");
  apply_schema(s.params, schema_for(s.kind), "kind '" + s.kind + "'");
  if (s.kind == "chain" || (s.kind == "device" && s.params.contains("emitters") &&
                            !s.params["emitters"].empty())) {
    apply_emitter_schema(s.params, kChainEmitterKeys, "kind '" + s.kind + "'");
  } else if (s.kind == "evolve" || s.kind == "steady" || s.kind == "trajectories") {
    apply_emitter_schema(s.params, kChannelEmitterKeys, "kind '" + s.kind + "'");
  }
  return s;
}

Scenario parse_scenario(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  require(in.good(), "cannot open scenario config '" + path + "'");
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& err) {
    throw std::invalid_argument("config '" + path + "' is not valid JSON: " +
                                err.what());
  }
  return make_scenario(doc);
}

nlohmann::json serialize(const Scenario& s) {
  json doc = s.params;
  doc["kind"] = s.kind;
  return doc;
}

RunOutcome run_scenario(const Scenario& s, const std::string& out_dir) {
  std::filesystem::create_directories(out_dir);
  if (s.kind == "scatter") return run_scatter(s, out_dir);
  if (s.kind == "spectrum") return run_spectrum(s, out_dir);
  if (s.kind == "chain") return run_chain(s, out_dir);
  if (s.kind == "evolve") return run_evolve(s, out_dir);
  if (s.kind == "steady") return run_steady(s, out_dir);
  if (s.kind == "trajectories") return run_trajectories(s, out_dir);
  if (s.kind == "field-map") return run_field_map(s, out_dir);
  if (s.kind == "transfer") return run_transfer(s, out_dir);
  if (s.kind == "dimer-scan") return run_dimer_scan(s, out_dir);
  if (s.kind == "device") return run_device(s, out_dir);
  throw std::invalid_argument("unknown scenario kind '" + s.kind + "'");
}

}  // namespace chiralwg
