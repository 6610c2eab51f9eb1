// Command-line front end: model ingestion, classification, simulation,
// spectra, Floquet analysis, and report emission.
//
// Exit codes: 0 success, 1 usage error, 2 numerical inconsistency,
// 3 model-contract violation.

#include <CLI11.hpp>
#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <numbers>

#include "qsteady/dynamics.hpp"
#include "qsteady/floquet.hpp"
#include "qsteady/zoo.hpp"

using namespace qsteady;
using nlohmann::json;

namespace {

// ---------------------------------------------------------------------------
// Model-file ingestion
// ---------------------------------------------------------------------------

Complex parse_entry(const json& e) {
  if (e.is_number()) return Complex(e.get<double>(), 0.0);
  if (e.is_array() && e.size() == 2) {
    return Complex(e[0].get<double>(), e[1].get<double>());
  }
  throw std::invalid_argument("matrix entries must be numbers or [re, im] pairs");
}

Operator parse_matrix(const json& m, int dim) {
  if (!m.is_array() || static_cast<int>(m.size()) != dim) {
    throw std::invalid_argument("matrix must have one row per dimension");
  }
  Operator out(dim, dim);
  for (int i = 0; i < dim; ++i) {
    const auto& row = m[i];
    if (!row.is_array() || static_cast<int>(row.size()) != dim) {
      throw std::invalid_argument("matrix rows must have d entries");
    }
    for (int j = 0; j < dim; ++j) out(i, j) = parse_entry(row[j]);
  }
  return out;
}

Profile parse_profile(const json& p) {
  const std::string type = p.at("type");
  if (type == "constant") return Profile(TrigProfile::constant(p.at("value")));
  if (type == "cosine") {
    return Profile(TrigProfile::cosine(p.at("amplitude"), p.at("frequency"),
                                       p.value("phase", 0.0)));
  }
  if (type == "trig") {
    TrigProfile out = TrigProfile::constant(p.value("constant", 0.0));
    for (const auto& term : p.value("terms", json::array())) {
      out += TrigProfile::cosine(term.at("amplitude"), term.at("frequency"),
                                 term.value("phase", 0.0));
    }
    return Profile(out);
  }
  if (type == "exp") return Profile(ExpProfile{p.at("amplitude"), p.at("rate")});
  if (type == "piecewise" || type == "fibonacci") {
    const double cell = p.at("cell");
    const auto values = p.at("values").get<std::vector<double>>();
    const double width = p.value("coarse_width", 0.0);
    const bool sqrt_flag = p.value("sqrt", false);
    if (type == "fibonacci") {
      return Profile(PiecewiseProfile(cell, fibonacci_word(p.value("truncation", 20)),
                                      values, false, width, sqrt_flag));
    }
    return Profile(PiecewiseProfile(cell, p.at("word").get<std::vector<uint8_t>>(),
                                    values, p.value("periodic", true), width,
                                    sqrt_flag));
  }
  throw std::invalid_argument("unknown profile type '" + type + "'");
}

TimeDependentOperator parse_tdo(const json& terms, int dim) {
  std::vector<ProfiledTerm> out;
  for (const auto& term : terms) {
    out.push_back({parse_profile(term.at("profile")), parse_matrix(term.at("matrix"), dim)});
  }
  return TimeDependentOperator(dim, std::move(out));
}

GkslModel parse_model_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open model file '" + path + "'");
  json doc = json::parse(in);

  const auto& space_doc = doc.at("space");
  const std::string kind = space_doc.at("kind");
  HilbertSpec spec;
  if (kind == "qubits") spec = HilbertSpec::qubit_chain(space_doc.at("qubits"));
  else if (kind == "generic") spec = HilbertSpec::generic(space_doc.at("dim"));
  else if (kind == "spinful-fermions") spec = HilbertSpec::fermion_chain(space_doc.at("sites"));
  else throw std::invalid_argument("unknown space kind '" + kind + "'");

  TimeDependentOperator h = doc.contains("hamiltonian")
      ? parse_tdo(doc["hamiltonian"], spec.dim)
      : TimeDependentOperator::constant(Operator::Zero(spec.dim, spec.dim));
  std::vector<TimeDependentOperator> jumps;
  for (const auto& jump_doc : doc.value("jumps", json::array())) {
    jumps.push_back(parse_tdo(jump_doc, spec.dim));
  }
  return GkslModel(spec, std::move(h), std::move(jumps));
}

// ---------------------------------------------------------------------------
// Run configuration
// ---------------------------------------------------------------------------

struct ModelHandle {
  GkslModel model;
  std::optional<ZooEntry> entry;
};

ModelHandle resolve_model(const std::string& source, const json& params) {
  if (source.starts_with("zoo:")) {
    ZooEntry entry = build_zoo(source.substr(4), params);
    GkslModel model = entry.model;
    return {std::move(model), std::move(entry)};
  }
  if (source.starts_with("file:")) {
    if (!params.empty()) {
      throw std::invalid_argument("--param applies to zoo models only");
    }
    return {parse_model_file(source.substr(5)), std::nullopt};
  }
  throw std::invalid_argument("model source must be zoo:<name> or file:<path>");
}

json parse_param_list(const std::vector<std::string>& raw) {
  json out = json::object();
  for (const auto& kv : raw) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos) {
      throw std::invalid_argument("expected key=value, got '" + kv + "'");
    }
    const std::string key = kv.substr(0, eq);
    const std::string value = kv.substr(eq + 1);
    const json parsed = json::parse(value, nullptr, false);
    out[key] = parsed.is_discarded() ? json(value) : parsed;
  }
  return out;
}

void apply_tolerance_overrides(const json& overrides) {
  auto& tol = tolerances();
  const std::map<std::string, double*> table = {
      {"steady_eps", &tol.steady_eps},
      {"sampled_null_rel", &tol.sampled_null_rel},
      {"route_inclusion", &tol.route_inclusion},
      {"rank_rel", &tol.rank_rel},
      {"contains_rel", &tol.contains_rel},
      {"charge_drift", &tol.charge_drift},
      {"purity_slack", &tol.purity_slack},
  };
  for (auto it = overrides.begin(); it != overrides.end(); ++it) {
    auto entry = table.find(it.key());
    if (entry == table.end()) {
      throw std::invalid_argument("unknown tolerance '" + it.key() + "'");
    }
    *entry->second = it.value().get<double>();
  }
}

void write_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << content;
}

// Echo the resolved configuration and persist it next to the outputs.
void echo_config(const json& config, const std::filesystem::path& out_dir,
                 const std::string& command) {
  std::cout << config.dump(2) << "\n";
  std::filesystem::create_directories(out_dir);
  write_file(out_dir / (command + "_config.json"), config.dump(2) + "\n");
}

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

json base_config(const std::string& command, const std::string& model,
                 const json& params, const std::string& out, std::uint64_t seed,
                 const json& tol) {
  json config;
  config["schema"] = "v1";
  config["command"] = command;
  config["model"] = model;
  config["params"] = params;
  config["out"] = out;
  config["seed"] = seed;
  config["tolerances"] = tol;
  return config;
}

// ---------------------------------------------------------------------------
// Commands
// ---------------------------------------------------------------------------

int cmd_classify(const json& config) {
  const std::filesystem::path out_dir = config.at("out").get<std::string>();
  echo_config(config, out_dir, "classify");
  auto handle = resolve_model(config.at("model"), config.at("params"));

  GkslModel model = handle.model;
  if (!config.at("sector").is_null()) {
    model = model.restrict_to_number_sector(config.at("sector").get<int>());
  }

  CIntOptions opts;
  const std::string route = config.at("route");
  if (route == "ad-ladder") opts.route = Route::AdLadder;
  else if (route == "sampled") opts.route = Route::Sampled;
  else if (route == "both") opts.route = Route::Both;
  else throw std::invalid_argument("route must be ad-ladder, sampled or both");
  opts.n_samples = config.at("n_samples");
  opts.dt = config.at("dt");

  const auto report = classify(model, opts);
  write_file(out_dir / "classify_report.json", report.to_json() + "\n");
  std::cout << "class " << to_string(report.steady_class) << " (dim C^Sch = "
            << report.dim_c_sch << ", dim C^Int = " << report.dim_c_int << ")\n";
  return 0;
}

std::vector<std::string> default_observables(const HilbertSpec& spec) {
  if (spec.kind == HilbertSpec::Kind::SpinfulFermions) return {"S1x", "S1y"};
  if (spec.kind == HilbertSpec::Kind::Qubits) return {"x1", "y1", "z1"};
  if (spec.dim == 3) return {"Tx"};
  return {};
}

void write_trajectory_csv(const std::filesystem::path& path, const Trajectory& traj,
                          const std::vector<std::string>& names,
                          const std::vector<Operator>& obs) {
  std::string csv = "time";
  for (const auto& n : names) csv += "," + n;
  csv += ",purity\n";
  for (std::size_t k = 0; k < traj.times.size(); ++k) {
    csv += format_double(traj.times[k]);
    for (const auto& op : obs) {
      csv += "," + format_double((op * traj.states[k]).trace().real());
    }
    csv += "," + format_double(traj.purity(k));
    csv += "\n";
  }
  write_file(path, csv);
}

int cmd_simulate(const json& config) {
  const std::filesystem::path out_dir = config.at("out").get<std::string>();
  echo_config(config, out_dir, "simulate");
  auto handle = resolve_model(config.at("model"), config.at("params"));

  GkslModel model = handle.model;
  std::vector<int> sector_indices;
  if (!config.at("sector").is_null()) {
    sector_indices = number_sector_indices(model.space(), config.at("sector").get<int>());
    model = model.restrict_to_number_sector(config.at("sector").get<int>());
  }

  const double t_end = config.at("t_end");
  const double dt = config.at("dt");
  const int record_every = config.at("record_every");
  const int n_states = config.at("states");
  const std::uint64_t seed = config.at("seed");

  const auto names = config.at("observables").get<std::vector<std::string>>();
  std::vector<Operator> obs;
  for (const auto& name : names) {
    Operator full = named_observable(handle.model.space(), name);
    obs.push_back(sector_indices.empty() ? full
                                         : restrict_to_indices(full, sector_indices));
  }

  std::vector<Trajectory> trajectories;
  for (int k = 0; k < n_states; ++k) {
    const Operator rho0 = haar_random_state(model.dim(), seed + k);
    trajectories.push_back(evolve(model, rho0, t_end, dt, record_every));
    write_trajectory_csv(out_dir / ("trajectory_" + std::to_string(k) + ".csv"),
                         trajectories.back(), names, obs);
  }

  // Steadiness window: ten natural periods of the drive (or ten time units
  // for a time-independent model), capped by the trajectory length.
  double period = std::max(handle.model.hamiltonian().longest_period(), 0.0);
  for (const auto& l : handle.model.jumps()) period = std::max(period, l.longest_period());
  if (period == 0.0) period = 1.0;
  const double window = std::min(10.0 * period, t_end / 2);
  const auto probe = steady_state_probe(model, trajectories, window);

  json summary;
  summary["schema"] = "v1";
  summary["window"] = window;
  summary["verdicts"] = json::array();
  for (const auto& v : probe.verdicts) summary["verdicts"].push_back(to_string(v));
  summary["conclusive"] = probe.conclusive;
  summary["empirical_class"] =
      probe.conclusive ? json(to_string(probe.empirical_class)) : json();

  // Algebraic class alongside, for the agreement flag.
  try {
    const auto report = classify(model);
    summary["algebraic_class"] = to_string(report.steady_class);
    summary["agreement"] =
        probe.conclusive && probe.empirical_class == report.steady_class;
  } catch (const ModelContractError& e) {
    summary["algebraic_class"] = nullptr;
    summary["algebraic_refusal"] = e.what();
    summary["agreement"] = nullptr;
  }

  write_file(out_dir / "simulate_summary.json", summary.dump(2) + "\n");
  std::cout << summary.dump(2) << "\n";
  return 0;
}

int cmd_spectrum(const json& config) {
  const std::filesystem::path out_dir = config.at("out").get<std::string>();
  echo_config(config, out_dir, "spectrum");
  auto handle = resolve_model(config.at("model"), config.at("params"));

  GkslModel model = handle.model;
  std::vector<int> sector_indices;
  if (!config.at("sector").is_null()) {
    sector_indices = number_sector_indices(model.space(), config.at("sector").get<int>());
    model = model.restrict_to_number_sector(config.at("sector").get<int>());
  }

  const std::string name = config.at("observable");
  Operator obs = named_observable(handle.model.space(), name);
  if (!sector_indices.empty()) obs = restrict_to_indices(obs, sector_indices);

  const double t_end = config.at("t_end");
  const double dt = config.at("dt");
  const Operator rho0 = haar_random_state(model.dim(), config.at("seed"));
  const std::vector<Operator> observables = {obs};
  const auto series = evolve_observables(model, rho0, t_end, dt,
                                         config.at("record_every"), observables);
  const auto spec = fourier_spectrum(series.times, series.values[0],
                                     config.at("window_center"),
                                     config.at("window_width"));

  std::string csv = "frequency,magnitude\n";
  for (std::size_t k = 0; k < spec.frequencies.size(); ++k) {
    csv += format_double(spec.frequencies[k]) + "," +
           format_double(spec.magnitudes[k]) + "\n";
  }
  write_file(out_dir / "spectrum.csv", csv);

  json report;
  report["schema"] = "v1";
  report["observable"] = name;
  report["window"] = {{"center", config.at("window_center")},
                      {"width", config.at("window_width")}};
  report["peaks"] = json::array();
  for (const auto& peak : spec.peaks) {
    report["peaks"].push_back({{"frequency", peak.frequency},
                               {"magnitude", peak.magnitude},
                               {"prominence", peak.prominence}});
  }
  report["peak_count"] = spec.peaks.size();
  write_file(out_dir / "spectrum_report.json", report.dump(2) + "\n");
  std::cout << report.dump(2) << "\n";
  return 0;
}

int cmd_floquet(const json& config) {
  const std::filesystem::path out_dir = config.at("out").get<std::string>();
  echo_config(config, out_dir, "floquet");
  auto handle = resolve_model(config.at("model"), config.at("params"));

  double period = config.at("period");
  if (period <= 0) {
    const auto p = handle.model.period();
    if (!p) {
      throw std::invalid_argument(
          "--period required: the model does not declare a drive period");
    }
    period = *p;
  }
  const auto report = floquet_analysis(handle.model, period, config.at("dt"));
  write_file(out_dir / "floquet_report.json", report.to_json() + "\n");
  std::cout << report.to_json() << "\n";
  return 0;
}

int cmd_zoo_list() {
  for (const auto& name : zoo_names()) {
    const auto entry = build_zoo(name);
    std::cout << name << "  -  " << entry.description << "\n";
  }
  return 0;
}

// ---------------------------------------------------------------------------

int dispatch(const json& config) {
  apply_tolerance_overrides(config.value("tolerances", json::object()));
  const std::string command = config.at("command");
  if (command == "classify") return cmd_classify(config);
  if (command == "simulate") return cmd_simulate(config);
  if (command == "spectrum") return cmd_spectrum(config);
  if (command == "floquet") return cmd_floquet(config);
  if (command == "zoo-list") return cmd_zoo_list();
  throw std::invalid_argument("unknown command '" + command + "'");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"steady-state analysis of driven Lindblad models"};
  app.require_subcommand(1);

  std::string model = "zoo:rotating-dephasing";
  std::string out = ".";
  std::uint64_t seed = 0;
  std::vector<std::string> params;
  std::vector<std::string> tol_overrides;
  std::string config_path;
  int sector = -1;
  double dt = 0.0;

  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--model", model, "zoo:<name> or file:<path>");
    cmd->add_option("--out", out, "output directory");
    cmd->add_option("--seed", seed, "random seed");
    cmd->add_option("--param", params, "zoo parameter override key=value");
    cmd->add_option("--tol", tol_overrides, "tolerance override key=value");
    cmd->add_option("--config", config_path, "re-run a previously echoed config");
    cmd->add_option("--sector", sector, "restrict to a particle-number sector");
    cmd->add_option("--dt", dt, "integration step (0 = default)");
  };

  auto* classify_cmd = app.add_subcommand("classify", "algebraic steady-state class");
  std::string route = "both";
  int n_samples = 64;
  classify_cmd->add_option("--route", route, "ad-ladder | sampled | both");
  classify_cmd->add_option("--n-samples", n_samples, "sampled-route grid size");
  add_common(classify_cmd);

  auto* simulate_cmd = app.add_subcommand("simulate", "trajectory ensemble + probe");
  double t_end = 0.0;
  int record_every = 10;
  int n_states = 5;
  std::vector<std::string> observables;
  simulate_cmd->add_option("--t-end", t_end, "integration horizon");
  simulate_cmd->add_option("--record-every", record_every, "steps between records");
  simulate_cmd->add_option("--states", n_states, "ensemble size");
  simulate_cmd->add_option("--observables", observables, "comma-separated names")
      ->delimiter(',');
  add_common(simulate_cmd);

  auto* spectrum_cmd = app.add_subcommand("spectrum", "windowed Fourier spectrum");
  std::string observable;
  double window_center = 300.0, window_width = 100.0;
  spectrum_cmd->add_option("--observable", observable, "observable name");
  spectrum_cmd->add_option("--t-end", t_end, "integration horizon");
  spectrum_cmd->add_option("--record-every", record_every, "steps between records");
  spectrum_cmd->add_option("--window-center", window_center, "Gaussian window center");
  spectrum_cmd->add_option("--window-width", window_width, "Gaussian window width");
  add_common(spectrum_cmd);

  auto* floquet_cmd = app.add_subcommand("floquet", "one-cycle channel analysis");
  double period = 0.0;
  floquet_cmd->add_option("--period", period, "drive period");
  add_common(floquet_cmd);

  app.add_subcommand("zoo-list", "list the model catalogue");

  CLI11_PARSE(app, argc, argv);

  try {
    json config;
    if (!config_path.empty()) {
      std::ifstream in(config_path);
      if (!in) throw std::invalid_argument("cannot open config '" + config_path + "'");
      config = json::parse(in);
    } else {
      const json tol = parse_param_list(tol_overrides);
      const json param_json = parse_param_list(params);
      if (app.got_subcommand("zoo-list")) {
        config = base_config("zoo-list", "", {}, out, seed, tol);
      } else if (app.got_subcommand(classify_cmd)) {
        config = base_config("classify", model, param_json, out, seed, tol);
        config["route"] = route;
        config["n_samples"] = n_samples;
        config["dt"] = dt;
        config["sector"] = sector >= 0 ? json(sector) : json();
      } else if (app.got_subcommand(simulate_cmd)) {
        config = base_config("simulate", model, param_json, out, seed, tol);
        auto handle = resolve_model(model, param_json);
        config["t_end"] =
            t_end > 0 ? t_end : (handle.entry ? handle.entry->default_t_end : 100.0);
        config["dt"] = dt > 0 ? dt : 1e-2;
        config["record_every"] = record_every;
        config["states"] = n_states;
        config["observables"] = observables.empty()
                                    ? default_observables(handle.model.space())
                                    : observables;
        config["sector"] = sector >= 0 ? json(sector) : json();
      } else if (app.got_subcommand(spectrum_cmd)) {
        config = base_config("spectrum", model, param_json, out, seed, tol);
        auto handle = resolve_model(model, param_json);
        if (observable.empty()) {
          const auto defaults = default_observables(handle.model.space());
          if (defaults.empty()) throw std::invalid_argument("--observable required");
          observable = defaults.back();
        }
        config["observable"] = observable;
        config["t_end"] = t_end > 0 ? t_end : 500.0;
        config["dt"] = dt > 0 ? dt : 1e-2;
        config["record_every"] = record_every;
        config["window_center"] = window_center;
        config["window_width"] = window_width;
        config["sector"] = sector >= 0 ? json(sector) : json();
      } else if (app.got_subcommand(floquet_cmd)) {
        config = base_config("floquet", model, param_json, out, seed, tol);
        config["period"] = period;
        config["dt"] = dt;
      }
    }
    return dispatch(config);
  } catch (const NumericalInconsistencyError& e) {
    std::cerr << "numerical inconsistency: " << e.what() << "\n";
    return 2;
  } catch (const ModelContractError& e) {
    std::cerr << "model contract violation: " << e.what() << "\n";
    return 3;
  } catch (const std::invalid_argument& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
