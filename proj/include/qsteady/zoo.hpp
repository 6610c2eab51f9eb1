#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "qsteady/classifier.hpp"

namespace qsteady {

struct ZooExpectation {
  std::optional<SteadyClass> steady_class;     // full-space classification
  std::optional<int> dim_c_sch;
  std::optional<int> dim_c_int;
  std::optional<int> sector;                   // particle-number restriction
  std::optional<SteadyClass> sector_class;     // class within that sector
  std::optional<int> sector_dim_c_sch;
  std::optional<int> sector_dim_c_int;
  bool refuses_classification = false;         // non-quasiperiodic model
  std::string notes;
};

struct ZooEntry {
  std::string name;
  std::string description;
  nlohmann::json params;   // defaults merged with overrides
  GkslModel model;
  ZooExpectation expected;
  double default_t_end = 100.0;
};

// Catalogue of named models. Unknown names raise std::invalid_argument with
// the catalogue listing.
ZooEntry build_zoo(const std::string& name, const nlohmann::json& overrides = {});
std::vector<std::string> zoo_names();

// Named observables: Pauli strings like "z1" or "x1y2" on qubit spaces;
// "S1x", "S1y", "S1z", "N", "n1" on fermion spaces; "Tx" on the three-level
// model.
Operator named_observable(const HilbertSpec& spec, const std::string& name);

}  // namespace qsteady
