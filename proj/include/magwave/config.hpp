#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "magwave/analysis.hpp"

namespace magwave {

/// Raw `[section]` / `key = value` entries keyed as "section.key".
using ConfigEntries = std::map<std::string, std::string>;

/// Parses INI-style text. Comments start with '#' or ';'. Throws ConfigError on
/// malformed lines, duplicate keys or keys outside a section.
ConfigEntries parse_ini(std::string_view text);

struct WeylBlock {
  std::vector<double> n{4.0, 8.0, 16.0, 32.0};
  double k = 0.0;
};

struct Effective1DBlock {
  double L1 = 80.0;
  int N1 = 8000;
};

enum class HardyWeightKind { unit, plateau };

struct HardyBlock {
  HardyWeightKind weight = HardyWeightKind::unit;
  double height = 1.0;
  double width = 1.0;
  HardyThreshold threshold = HardyThreshold::discrete;
};

struct GfBlock {
  double x_min = -50.0;
  double x_max = 50.0;
  int samples = 2048;
  GfDenominator denominator = GfDenominator::sup;
  double h_fd = 1e-4;
};

struct GaugeBlock {
  int nquad = 64;
  std::vector<double> h_fd{4e-3, 2e-3, 1e-3};
};

struct SweepBlock {
  std::vector<double> alphas;
  int bisection_steps = 8;
};

struct RunConfig {
  ProfileDescriptor profile;
  FieldDescriptor field;
  GridSpec grid{10.0, 199, 31};
  EigenOptions solver;
  SweepBlock sweep;
  WeylBlock weyl;
  Effective1DBlock effective1d;
  HardyBlock hardy;
  GfBlock gf;
  GaugeBlock gauge;
  std::vector<GridSpec> convergence;
  std::string output_dir = "magwave_out";
};

/// Builds a RunConfig from parsed entries. Unknown keys and invalid values throw
/// ConfigError naming the key; every block is validated before returning.
RunConfig resolve_config(const ConfigEntries& entries);

RunConfig load_config_file(const std::string& path);

}  // namespace magwave
