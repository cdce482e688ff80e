#pragma once

// JSON configs for the CLI. Every object is checked against its allowed keys;
// anything else is a ConfigError.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "lancaster/covariance.hpp"
#include "lancaster/design.hpp"
#include "lancaster/errors.hpp"
#include "lancaster/mtp.hpp"

namespace lancaster::cli {

using Json = nlohmann::json;

Json load_json(const std::string& path);

FamilyParams parse_family(const Json& j);
Json family_to_json(const FamilyParams& family);

/// "seed" is required.
DependenceDesign parse_design(const Json& j);
Json design_to_json(const DependenceDesign& d);

DesignTemplate parse_template(const Json& j);
Truncation parse_truncation(const Json& j);

struct SimulateConfig {
  DependenceDesign design;
  Count replications = 0;
  RunOptions run;
  Truncation trunc;
};

struct SweepConfig {
  DesignTemplate tmpl;
  std::vector<Count> m_grid;
  std::vector<double> t_grid;  // weak-dep only
  Count replications = 0;
  std::uint64_t seed = 0;
  RunOptions run;
  Truncation trunc;
};

struct LyonsConfig {
  DesignTemplate tmpl;
  Count k_max = 0;
  double t = 0.05;
  Truncation trunc;
};

SimulateConfig parse_simulate(const Json& j);
SweepConfig parse_sweep(const Json& j, bool weak_dependence);
LyonsConfig parse_lyons(const Json& j);

}  // namespace lancaster::cli
