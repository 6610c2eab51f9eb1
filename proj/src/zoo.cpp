#include "qsteady/zoo.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

namespace qsteady {

namespace {

using nlohmann::json;

constexpr double kGolden = 1.618033988749895;

json merged(json defaults, const json& overrides) {
  for (auto it = overrides.begin(); it != overrides.end(); ++it) {
    if (!defaults.contains(it.key())) {
      throw std::invalid_argument("zoo: unknown parameter '" + it.key() + "'");
    }
    defaults[it.key()] = it.value();
  }
  return defaults;
}

TimeDependentOperator constant_op(const Operator& op) {
  return TimeDependentOperator::constant(op);
}

ProfiledTerm cosine_term(double amplitude, double omega, double phase, Operator op) {
  return {Profile(TrigProfile::cosine(amplitude, omega, phase)), std::move(op)};
}

// Caption site potentials, padded cyclically to the requested site count.
std::vector<double> default_potentials(int sites) {
  static const std::vector<double> printed = {-0.786, 0.657, -0.133, -0.176};
  std::vector<double> mu(static_cast<std::size_t>(sites));
  for (int j = 0; j < sites; ++j) mu[j] = printed[j % printed.size()];
  return mu;
}

Operator hubbard_static_part(const FermionOps& f, double tau, double u,
                             const std::vector<double>& mu, double zeeman_b) {
  const auto& spec = f.spec;
  Operator h = Operator::Zero(spec.dim, spec.dim);
  for (auto [j, k] : spec.bonds) {
    for (Spin s : {Spin::Up, Spin::Down}) {
      const Operator hop = f.create(j, s) * f.annihilate(k, s);
      h += -tau * (hop + hop.adjoint());
    }
  }
  for (int j = 1; j <= spec.sites; ++j) {
    h += u * f.number(j, Spin::Up) * f.number(j, Spin::Down);
    h += mu[static_cast<std::size_t>(j - 1)] * f.number(j);
    if (zeeman_b != 0.0) {
      h += 0.5 * zeeman_b * (f.number(j, Spin::Up) - f.number(j, Spin::Down));
    }
  }
  return h;
}

std::vector<TimeDependentOperator> hubbard_jumps(const FermionOps& f,
                                                 const std::vector<double>& kappa) {
  std::vector<TimeDependentOperator> jumps;
  for (int j = 1; j <= f.spec.sites; ++j) {
    jumps.push_back(constant_op(std::sqrt(kappa[static_cast<std::size_t>(j - 1)]) *
                                f.number(j)));
  }
  return jumps;
}

std::vector<double> kappa_list(const json& params, int sites) {
  std::vector<double> kappa(static_cast<std::size_t>(sites), 1.0);
  if (params.contains("kappa")) {
    if (params["kappa"].is_array()) {
      auto values = params["kappa"].get<std::vector<double>>();
      for (int j = 0; j < sites; ++j) kappa[j] = values[j % values.size()];
    } else {
      std::fill(kappa.begin(), kappa.end(), params["kappa"].get<double>());
    }
  }
  for (double k : kappa) {
    if (k <= 0) throw std::invalid_argument("zoo: kappa must be positive");
  }
  return kappa;
}

std::vector<double> mu_list(const json& params, int sites) {
  if (!params.contains("mu") || params["mu"].is_null()) return default_potentials(sites);
  auto values = params["mu"].get<std::vector<double>>();
  std::vector<double> mu(static_cast<std::size_t>(sites));
  for (int j = 0; j < sites; ++j) mu[j] = values[j % values.size()];
  return mu;
}

// Drive (B/2)(e^{-iwt} S+ + e^{iwt} S-) = B cos(wt) Sx + B sin(wt) Sy.
void add_circular_drive(std::vector<ProfiledTerm>& terms, const FermionOps& f,
                        double b, double omega) {
  const Operator sx = 0.5 * (f.s_plus() + f.s_minus());
  const Operator sy = (0.5 / kImag) * (f.s_plus() - f.s_minus());
  terms.push_back(cosine_term(b, omega, 0.0, sx));
  terms.push_back(cosine_term(b, omega, -std::numbers::pi / 2, sy));
}

}  // namespace

std::vector<std::string> zoo_names() {
  return {"ex-3.1",        "ex-3.2",          "rotating-dephasing",
          "decaying-dephasing", "driven-dephasing", "multi-frequency",
          "fibonacci",     "spin-chain",      "hubbard-static",
          "hubbard-1freq", "three-level-quasi", "hubbard-2freq",
          "bump"};
}

ZooEntry build_zoo(const std::string& name, const json& overrides) {
  const double pi = std::numbers::pi;

  if (name == "ex-3.1") {
    json params = merged({{"omega", 1.0}, {"kappa", 1.0}}, overrides);
    const double w = params["omega"], k = params["kappa"];
    if (w <= 0 || k <= 0) throw std::invalid_argument("ex-3.1: omega, kappa > 0");
    auto spec = HilbertSpec::qubit_chain(1);
    GkslModel model(spec, constant_op(0.5 * w * pauli_x()),
                    {constant_op(std::sqrt(k) * pauli_z())});
    ZooEntry entry{name, "time-independent qubit, transverse H with dephasing",
                   params, std::move(model), {}, 40.0};
    entry.expected.steady_class = SteadyClass::I;
    entry.expected.dim_c_sch = 1;
    entry.expected.dim_c_int = 1;
    return entry;
  }

  if (name == "ex-3.2") {
    json params = merged({{"omega", 1.0}, {"kappa", 1.0}}, overrides);
    const double w = params["omega"], k = params["kappa"];
    auto spec = HilbertSpec::qubit_chain(1);
    GkslModel model(spec, constant_op(0.5 * w * pauli_z()),
                    {constant_op(std::sqrt(k) * pauli_z())});
    ZooEntry entry{name, "time-independent qubit, commuting H and dephasing",
                   params, std::move(model), {}, 40.0};
    entry.expected.steady_class = SteadyClass::II;
    entry.expected.dim_c_sch = 2;
    entry.expected.dim_c_int = 2;
    return entry;
  }

  if (name == "rotating-dephasing") {
    json params = merged({{"omega", 1.0}, {"kappa", 1.0}}, overrides);
    const double w = params["omega"], k = params["kappa"];
    auto spec = HilbertSpec::qubit_chain(1);
    std::vector<ProfiledTerm> jump_terms;
    jump_terms.push_back(cosine_term(std::sqrt(k), w, 0.0, pauli_x()));
    jump_terms.push_back(cosine_term(std::sqrt(k), w, -std::numbers::pi / 2, pauli_y()));
    GkslModel model(spec, constant_op(0.5 * w * pauli_z()),
                    {TimeDependentOperator(2, std::move(jump_terms))});
    ZooEntry entry{name, "qubit with co-rotating dephasing axis",
                   params, std::move(model), {}, 80.0};
    entry.expected.steady_class = SteadyClass::IV;
    entry.expected.dim_c_sch = 1;
    entry.expected.dim_c_int = 2;
    return entry;
  }

  if (name == "decaying-dephasing") {
    json params = merged({{"rate", 1.0}}, overrides);
    const double r = params["rate"];
    if (r <= 0) throw std::invalid_argument("decaying-dephasing: rate > 0");
    auto spec = HilbertSpec::qubit_chain(1);
    std::vector<TimeDependentOperator> jumps;
    jumps.push_back(TimeDependentOperator(
        2, {{Profile(ExpProfile{1.0, -r}), pauli_x()}}));
    jumps.push_back(TimeDependentOperator(
        2, {{Profile(ExpProfile{1.0, -r}), pauli_y()}}));
    GkslModel model(spec, TimeDependentOperator::constant(Operator::Zero(2, 2)),
                    std::move(jumps));
    ZooEntry entry{name, "exponentially decaying dephasing (not quasiperiodic)",
                   params, std::move(model), {}, 12.0};
    entry.expected.refuses_classification = true;
    entry.expected.notes = "decaying envelope violates the recurrence condition";
    return entry;
  }

  if (name == "driven-dephasing") {
    json params = merged({{"l", 1},
                          {"b", json::array({1.0, 1.0})},
                          {"omega", json::array({1.0, kGolden})},
                          {"kappa", 1.0}},
                         overrides);
    const int l = params["l"];
    if (l < 1) throw std::invalid_argument("driven-dephasing: l >= 1");
    const double k = params["kappa"];
    auto b = params["b"].get<std::vector<double>>();
    auto w = params["omega"].get<std::vector<double>>();
    auto spec = HilbertSpec::qubit_chain(1);
    std::vector<ProfiledTerm> h_terms;
    h_terms.push_back({Profile(TrigProfile::constant(1.0)), pauli_z()});
    for (int j = 0; j < l; ++j) {
      h_terms.push_back(cosine_term(b[j % b.size()], w[j % w.size()], 0.0, pauli_x()));
    }
    GkslModel model(spec, TimeDependentOperator(2, std::move(h_terms)),
                    {constant_op(std::sqrt(k) * pauli_z())});
    ZooEntry entry{name, "driven qubit with static dephasing",
                   params, std::move(model), {}, 120.0};
    entry.expected.steady_class = SteadyClass::I;
    entry.expected.dim_c_sch = 1;
    entry.expected.dim_c_int = 1;
    return entry;
  }

  if (name == "multi-frequency") {
    json params = merged({{"b1", 1.0}, {"b2", 1.0}, {"omega1", 1.0},
                          {"omega2", std::sqrt(2.0)}, {"kappa", 1.0}},
                         overrides);
    const double k = params["kappa"];
    auto spec = HilbertSpec::qubit_chain(1);
    std::vector<ProfiledTerm> h_terms;
    h_terms.push_back(cosine_term(params["b1"], params["omega1"], 0.0, pauli_x()));
    h_terms.push_back(cosine_term(params["b2"], params["omega2"], 0.0, pauli_z()));
    GkslModel model(spec, TimeDependentOperator(2, std::move(h_terms)),
                    {constant_op(std::sqrt(k) * pauli_z())});
    ZooEntry entry{name, "two-frequency driven qubit with dephasing",
                   params, std::move(model), {}, 120.0};
    entry.expected.steady_class = SteadyClass::I;
    entry.expected.dim_c_sch = 1;
    entry.expected.dim_c_int = 1;
    return entry;
  }

  if (name == "fibonacci") {
    json params = merged({{"cell", 1.0},
                          {"coarse_width", 0.1},
                          {"truncation", 20},
                          {"kappa", 1.0}},
                         overrides);
    const double cell = params["cell"];
    const double a = params["coarse_width"];
    const int trunc = params["truncation"];
    const double k = params["kappa"];
    auto spec = HilbertSpec::qubit_chain(1);
    // Generator 0: dephasing along z; generator 1: dephasing along x. The
    // jump envelope is sqrt of the coarse-grained indicator so that the
    // dissipator equals the coarse-grained Liouvillian.
    PiecewiseProfile on0(cell, fibonacci_word(trunc), {1.0, 0.0}, false, a, true);
    PiecewiseProfile on1(cell, fibonacci_word(trunc), {0.0, 1.0}, false, a, true);
    std::vector<TimeDependentOperator> jumps;
    jumps.push_back(TimeDependentOperator(
        2, {{Profile(on0), std::sqrt(k) * pauli_z()}}));
    jumps.push_back(TimeDependentOperator(
        2, {{Profile(on1), std::sqrt(k) * pauli_x()}}));
    GkslModel model(spec, TimeDependentOperator::constant(Operator::Zero(2, 2)),
                    std::move(jumps));
    ZooEntry entry{name, "Fibonacci-word switching between z and x dephasing",
                   params, std::move(model), {}, 100.0};
    entry.expected.steady_class = SteadyClass::I;
    entry.expected.dim_c_sch = 1;
    entry.expected.dim_c_int = 1;
    entry.expected.notes = "sampled route only (non-analytic)";
    return entry;
  }

  if (name == "spin-chain") {
    json params = merged({{"v", 2}, {"b", 1.0}, {"omega", 1.0}, {"kappa", 1.0}},
                         overrides);
    const int v = params["v"];
    if (v < 2) throw std::invalid_argument("spin-chain: v >= 2");
    const double b = params["b"], w = params["omega"], k = params["kappa"];
    if (b <= 0 || w <= 0 || k <= 0) {
      throw std::invalid_argument("spin-chain: b, omega, kappa > 0");
    }
    auto spec = HilbertSpec::qubit_chain(v);
    Operator zz = Operator::Zero(spec.dim, spec.dim);
    for (int j = 1; j < v; ++j) {
      zz += pauli_string(spec, {{j, 'z'}, {j + 1, 'z'}});
    }
    Operator xsum = Operator::Zero(spec.dim, spec.dim);
    for (int j = 1; j <= v; ++j) xsum += pauli_string(spec, {{j, 'x'}});
    std::vector<ProfiledTerm> h_terms;
    h_terms.push_back({Profile(TrigProfile::constant(1.0)), zz});
    h_terms.push_back(cosine_term(b, w, 0.0, xsum));
    GkslModel model(spec, TimeDependentOperator(spec.dim, std::move(h_terms)),
                    {constant_op(std::sqrt(k) * pauli_string(spec, {{1, 'z'}}))});
    ZooEntry entry{name, "driven Ising chain with boundary dephasing",
                   params, std::move(model), {}, 400.0};
    entry.expected.steady_class = SteadyClass::I;
    entry.expected.dim_c_sch = 1;
    entry.expected.dim_c_int = 1;
    return entry;
  }

  if (name == "three-level-quasi") {
    json params = merged({{"omega1", 1.0}, {"omega2", std::sqrt(2.0)}, {"kappa", 1.0}},
                         overrides);
    const double w1 = params["omega1"], w2 = params["omega2"], k = params["kappa"];
    if (w1 <= 0 || w2 <= 0) throw std::invalid_argument("three-level-quasi: omega > 0");
    auto spec = HilbertSpec::generic(3);
    Operator h = Operator::Zero(3, 3);
    h(0, 0) = w1;
    h(2, 2) = -w2;
    Operator x12 = Operator::Zero(3, 3), y12 = Operator::Zero(3, 3);
    x12(0, 1) = x12(1, 0) = 1.0;
    y12(0, 1) = -kImag;
    y12(1, 0) = kImag;
    Operator x23 = Operator::Zero(3, 3), y23 = Operator::Zero(3, 3);
    x23(1, 2) = x23(2, 1) = 1.0;
    y23(1, 2) = -kImag;
    y23(2, 1) = kImag;
    std::vector<ProfiledTerm> jump_terms;
    const double rk = std::sqrt(k);
    jump_terms.push_back(cosine_term(rk, w1, 0.0, x12));
    jump_terms.push_back(cosine_term(rk, w1, -std::numbers::pi / 2, y12));
    jump_terms.push_back(cosine_term(rk, w2, 0.0, x23));
    jump_terms.push_back(cosine_term(rk, w2, -std::numbers::pi / 2, y23));
    GkslModel model(spec, constant_op(h),
                    {TimeDependentOperator(3, std::move(jump_terms))});
    ZooEntry entry{name, "three-level system with two-frequency rotating coupling",
                   params, std::move(model), {}, 120.0};
    entry.expected.steady_class = SteadyClass::IV;
    entry.expected.dim_c_sch = 1;
    entry.expected.dim_c_int = 3;
    return entry;
  }

  if (name == "bump") {
    json params = merged({{"period", 1.0}, {"g_times_period", std::numbers::pi},
                          {"kappa", 1.0}},
                         overrides);
    const double t_period = params["period"];
    const double gt = params["g_times_period"];
    const double k = params["kappa"];
    const double g = gt / t_period;
    auto spec = HilbertSpec::qubit_chain(1);
    const double quarter = t_period / 4;
    PiecewiseProfile h_on(quarter, {0, 1, 2, 3}, {0.0, 0.0, 1.0, 0.0}, true);
    PiecewiseProfile l_on(quarter, {0, 1, 2, 3}, {1.0, 0.0, 0.0, 0.0}, true);
    GkslModel model(
        spec,
        TimeDependentOperator(2, {{Profile(h_on), g * pauli_x()}}),
        {TimeDependentOperator(2, {{Profile(l_on), std::sqrt(k) * pauli_z()}})});
    ZooEntry entry{name, "quarter-cycle pulsed Hamiltonian and dephasing",
                   params, std::move(model), {}, 60.0};
    const bool resonant =
        std::abs(std::remainder(gt, 2 * std::numbers::pi)) < 1e-12;
    entry.expected.steady_class = resonant ? SteadyClass::IV : SteadyClass::I;
    entry.expected.dim_c_sch = 1;
    entry.expected.dim_c_int = resonant ? 2 : 1;
    entry.expected.notes = "class depends on g*period mod 2*pi";
    return entry;
  }

  // Hubbard family.
  const bool is_static = (name == "hubbard-static");
  const bool is_1freq = (name == "hubbard-1freq");
  const bool is_2freq = (name == "hubbard-2freq");
  if (is_static || is_1freq || is_2freq) {
    json defaults = {{"sites", 2}, {"tau", 1.0}, {"u", 1.0},
                     {"mu", nullptr}, {"kappa", 1.0}};
    if (is_static) defaults["b"] = 1.0;
    if (is_1freq) {
      defaults["b"] = pi;
      defaults["omega"] = pi;
    }
    if (is_2freq) {
      defaults["b1"] = pi;
      defaults["b2"] = pi;
      defaults["omega1"] = pi;
      defaults["omega2"] = kGolden * pi;
    }
    json params = merged(defaults, overrides);
    const int sites = params["sites"];
    if (sites < 2) throw std::invalid_argument(name + ": at least two sites");
    auto spec = HilbertSpec::fermion_chain(sites);
    const auto f = fermion_ops(spec);
    const auto mu = mu_list(params, sites);
    const auto kappa = kappa_list(params, sites);

    std::vector<ProfiledTerm> h_terms;
    const double zeeman = is_static ? params["b"].get<double>() : 0.0;
    h_terms.push_back({Profile(TrigProfile::constant(1.0)),
                       hubbard_static_part(f, params["tau"], params["u"], mu, zeeman)});
    if (is_1freq) add_circular_drive(h_terms, f, params["b"], params["omega"]);
    if (is_2freq) {
      add_circular_drive(h_terms, f, params["b1"], params["omega1"]);
      add_circular_drive(h_terms, f, params["b2"], params["omega2"]);
    }

    GkslModel model(spec, TimeDependentOperator(spec.dim, std::move(h_terms)),
                    hubbard_jumps(f, kappa));
    ZooEntry entry{name, "", params, std::move(model), {}, 500.0};
    entry.expected.sector = sites;  // half filling
    if (is_static) {
      entry.description = "dissipative Hubbard chain with a static Zeeman field";
      entry.expected.steady_class = SteadyClass::III;
      entry.expected.dim_c_sch = 10;  // <I, N, S+S-, Sz>
      entry.expected.dim_c_int = 20;  // <I, N, S+, S-, Sz>
      entry.expected.sector_class = SteadyClass::III;
      entry.expected.sector_dim_c_sch = 4;
      entry.expected.sector_dim_c_int = 10;
      entry.expected.notes = "spin ladder operators survive within a number sector";
    } else {
      entry.description = is_1freq
          ? "dissipative Hubbard chain with one circular spin drive"
          : "dissipative Hubbard chain with two incommensurate spin drives";
      entry.expected.steady_class = SteadyClass::III;
      // Every generator is either invariant under global spin rotations or a
      // total-spin component, so the squared total spin commutes with the
      // whole family and joins <I, N> as a strong symmetry.
      entry.expected.dim_c_sch = 6;   // <I, N, S^2> on the dimer
      entry.expected.dim_c_int = 20;  // <I, N, S+, S-, Sz>
      entry.expected.sector_class = SteadyClass::III;
      entry.expected.sector_dim_c_sch = 2;  // <I, S^2> within half filling
      entry.expected.sector_dim_c_int = 10;
      entry.expected.notes =
          "total-spin Casimir remains conserved, so fixing the particle "
          "number still leaves time-independent steady states";
    }
    if (sites != 2) {
      // Printed dims above are for the dimer.
      entry.expected.dim_c_sch.reset();
      entry.expected.dim_c_int.reset();
      entry.expected.sector_dim_c_sch.reset();
      entry.expected.sector_dim_c_int.reset();
    }
    return entry;
  }

  std::ostringstream msg;
  msg << "unknown zoo model '" << name << "'; catalogue:";
  for (const auto& n : zoo_names()) msg << " " << n;
  throw std::invalid_argument(msg.str());
}

// ---------------------------------------------------------------------------

Operator named_observable(const HilbertSpec& spec, const std::string& name) {
  if (name == "Tx" && spec.dim == 3) {
    Operator t = Operator::Zero(3, 3);
    t(0, 1) = t(1, 0) = t(1, 2) = t(2, 1) = 1.0;
    return t;
  }
  if (spec.kind == HilbertSpec::Kind::Qubits) {
    // Pauli string syntax: axis-site pairs, e.g. "z1" or "x1y2".
    std::map<int, char> assignment;
    std::size_t pos = 0;
    while (pos < name.size()) {
      const char axis = name[pos++];
      if (axis != 'x' && axis != 'y' && axis != 'z') {
        throw std::invalid_argument("observable '" + name + "': expected x/y/z");
      }
      std::size_t len = 0;
      while (pos + len < name.size() && std::isdigit(name[pos + len])) ++len;
      if (len == 0) throw std::invalid_argument("observable '" + name + "': missing site");
      assignment[std::stoi(name.substr(pos, len))] = axis;
      pos += len;
    }
    return pauli_string(spec, assignment);
  }
  if (spec.kind == HilbertSpec::Kind::SpinfulFermions) {
    const auto f = fermion_ops(spec);
    if (name == "N") return f.total_number();
    if (name == "Sz") return f.s_z();
    if (name.size() >= 2 && name[0] == 'n') {
      return f.number(std::stoi(name.substr(1)));
    }
    if (name.size() >= 3 && name[0] == 'S') {
      const char axis = name.back();
      const int site = std::stoi(name.substr(1, name.size() - 2));
      if (axis == 'x') return f.spin_x(site);
      if (axis == 'y') return f.spin_y(site);
      if (axis == 'z') {
        return 0.5 * (f.number(site, Spin::Up) - f.number(site, Spin::Down));
      }
    }
  }
  throw std::invalid_argument("unknown observable '" + name + "' for this space");
}

}  // namespace qsteady
