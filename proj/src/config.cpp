#include "magwave/config.hpp"

#include <charconv>
#include <fstream>
#include <set>
#include <sstream>

#include "magwave/errors.hpp"

namespace magwave {
namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  while (true) {
    const auto pos = s.find(sep, start);
    parts.push_back(trim(s.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return parts;
}

double to_double(const std::string& key, std::string_view text) {
  double v = 0.0;
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, v);
  if (text.empty() || ec != std::errc{} || ptr != end) throw ConfigError(key, "expected a number, got '" + std::string(text) + "'");
  return v;
}

long long to_integer(const std::string& key, std::string_view text) {
  long long v = 0;
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, v);
  if (text.empty() || ec != std::errc{} || ptr != end) throw ConfigError(key, "expected an integer, got '" + std::string(text) + "'");
  return v;
}

std::vector<double> to_list(const std::string& key, std::string_view text) {
  std::vector<double> out;
  for (std::string_view part : split(text, ',')) out.push_back(to_double(key, part));
  return out;
}

class Reader {
 public:
  explicit Reader(const ConfigEntries& e) : entries_(e) {}

  const std::string* find(const std::string& key) {
    used_.insert(key);
    const auto it = entries_.find(key);
    return it == entries_.end() ? nullptr : &it->second;
  }

  const std::string& require(const std::string& key) {
    const std::string* v = find(key);
    if (v == nullptr) throw ConfigError(key, "missing required key");
    return *v;
  }

  void number(const std::string& key, double& out) {
    if (const std::string* v = find(key)) out = to_double(key, *v);
  }

  template <class Int>
  void integer(const std::string& key, Int& out) {
    if (const std::string* v = find(key)) out = static_cast<Int>(to_integer(key, *v));
  }

  void list(const std::string& key, std::vector<double>& out) {
    if (const std::string* v = find(key)) out = to_list(key, *v);
  }

  void reject_unknown() const {
    for (const auto& [key, value] : entries_)
      if (!used_.contains(key)) throw ConfigError(key, "unknown key");
  }

 private:
  const ConfigEntries& entries_;
  std::set<std::string> used_;
};

void check(bool ok, const std::string& key, const std::string& what) {
  if (!ok) throw ConfigError(key, what);
}

}  // namespace

ConfigEntries parse_ini(std::string_view text) {
  ConfigEntries out;
  std::string section;
  int line_no = 0;
  for (std::string_view raw : split(text, '\n')) {
    ++line_no;
    std::string_view line = raw;
    if (const auto c = line.find_first_of("#;"); c != std::string_view::npos) line = line.substr(0, c);
    line = trim(line);
    if (line.empty()) continue;
    const std::string where = "line " + std::to_string(line_no);
    if (line.front() == '[') {
      check(line.back() == ']' && line.size() > 2, where, "malformed section header");
      section = std::string(trim(line.substr(1, line.size() - 2)));
      continue;
    }
    const auto eq = line.find('=');
    check(eq != std::string_view::npos, where, "expected key = value");
    check(!section.empty(), where, "key outside of a section");
    const std::string key = section + "." + std::string(trim(line.substr(0, eq)));
    check(!out.contains(key), key, "duplicate key");
    out.emplace(key, std::string(trim(line.substr(eq + 1))));
  }
  return out;
}

RunConfig resolve_config(const ConfigEntries& entries) {
  RunConfig cfg;
  Reader r(entries);

  cfg.profile.family = profile_family_from_string(r.require("profile.family"));
  r.number("profile.amplitude", cfg.profile.amplitude);
  r.number("profile.center", cfg.profile.center);
  r.number("profile.width", cfg.profile.width);

  if (const std::string* v = r.find("field.family")) {
    try {
      cfg.field.family = field_family_from_string(*v);
    } catch (const std::exception& e) {
      throw ConfigError("field.family", e.what());
    }
  }
  r.number("field.strength", cfg.field.strength);
  r.number("field.x0", cfg.field.x0);
  r.number("field.y0", cfg.field.y0);
  r.number("field.radius", cfg.field.radius);

  cfg.grid.L = to_double("grid.L", r.require("grid.L"));
  cfg.grid.Nx = static_cast<int>(to_integer("grid.Nx", r.require("grid.Nx")));
  cfg.grid.Ny = static_cast<int>(to_integer("grid.Ny", r.require("grid.Ny")));

  r.integer("solver.k", cfg.solver.k);
  r.number("solver.tol", cfg.solver.tol);
  r.integer("solver.max_iter", cfg.solver.max_iter);
  r.integer("solver.seed", cfg.solver.seed);
  if (const std::string* v = r.find("solver.shift"); v != nullptr && *v != "auto")
    cfg.solver.shift = to_double("solver.shift", *v);

  r.list("sweep.alphas", cfg.sweep.alphas);
  r.integer("sweep.bisection_steps", cfg.sweep.bisection_steps);

  r.list("weyl.n", cfg.weyl.n);
  r.number("weyl.k", cfg.weyl.k);

  r.number("effective1d.L1", cfg.effective1d.L1);
  r.integer("effective1d.N1", cfg.effective1d.N1);

  if (const std::string* v = r.find("hardy.weight")) {
    if (*v == "unit")
      cfg.hardy.weight = HardyWeightKind::unit;
    else if (*v == "plateau")
      cfg.hardy.weight = HardyWeightKind::plateau;
    else
      throw ConfigError("hardy.weight", "expected unit or plateau");
  }
  r.number("hardy.height", cfg.hardy.height);
  r.number("hardy.width", cfg.hardy.width);
  if (const std::string* v = r.find("hardy.threshold")) {
    if (*v == "discrete")
      cfg.hardy.threshold = HardyThreshold::discrete;
    else if (*v == "continuum")
      cfg.hardy.threshold = HardyThreshold::continuum;
    else
      throw ConfigError("hardy.threshold", "expected discrete or continuum");
  }

  r.number("gf.x_min", cfg.gf.x_min);
  r.number("gf.x_max", cfg.gf.x_max);
  r.integer("gf.samples", cfg.gf.samples);
  r.number("gf.h_fd", cfg.gf.h_fd);
  if (const std::string* v = r.find("gf.denominator")) {
    if (*v == "sup")
      cfg.gf.denominator = GfDenominator::sup;
    else if (*v == "inf")
      cfg.gf.denominator = GfDenominator::inf;
    else
      throw ConfigError("gf.denominator", "expected sup or inf");
  }

  r.integer("gauge.nquad", cfg.gauge.nquad);
  r.list("gauge.h_fd", cfg.gauge.h_fd);

  if (const std::string* v = r.find("convergence.grids")) {
    for (std::string_view triple : split(*v, ',')) {
      std::istringstream in{std::string(triple)};
      GridSpec g;
      std::string extra;
      if (!(in >> g.L >> g.Nx >> g.Ny) || (in >> extra))
        throw ConfigError("convergence.grids", "expected comma-separated 'L Nx Ny' triples");
      cfg.convergence.push_back(g);
    }
  }

  if (const std::string* v = r.find("output.dir")) cfg.output_dir = *v;

  r.reject_unknown();

  try {
    validate(cfg.profile);
  } catch (const std::exception& e) {
    throw ConfigError("profile", e.what());
  }
  try {
    validate(cfg.field);
  } catch (const std::exception& e) {
    throw ConfigError("field", e.what());
  }
  check(cfg.grid.L > 0.0, "grid.L", "must be positive");
  check(cfg.grid.Nx >= 3, "grid.Nx", "must be at least 3");
  check(cfg.grid.Ny >= 3, "grid.Ny", "must be at least 3");
  check(cfg.solver.k >= 1, "solver.k", "must be at least 1");
  check(cfg.solver.tol > 0.0 && cfg.solver.tol < 1.0, "solver.tol", "must lie in (0, 1)");
  check(cfg.solver.max_iter >= 1, "solver.max_iter", "must be at least 1");
  check(cfg.sweep.bisection_steps >= 0, "sweep.bisection_steps", "must be non-negative");
  for (std::size_t i = 0; i < cfg.sweep.alphas.size(); ++i)
    check(cfg.sweep.alphas[i] > 0.0 && (i == 0 || cfg.sweep.alphas[i] > cfg.sweep.alphas[i - 1]), "sweep.alphas",
          "must be positive and strictly ascending");
  check(!cfg.weyl.n.empty(), "weyl.n", "must not be empty");
  for (double n : cfg.weyl.n)
    check(n > 0.0, "weyl.n", "every n must be positive");
  check(cfg.effective1d.L1 > 0.0, "effective1d.L1", "must be positive");
  check(cfg.effective1d.N1 >= 100, "effective1d.N1", "must be at least 100");
  check(cfg.hardy.height > -1.0, "hardy.height", "must exceed -1");
  check(cfg.hardy.width > 0.0, "hardy.width", "must be positive");
  check(cfg.gf.x_max > cfg.gf.x_min, "gf.x_max", "must exceed gf.x_min");
  check(cfg.gf.samples >= 2, "gf.samples", "must be at least 2");
  check(cfg.gf.h_fd > 0.0, "gf.h_fd", "must be positive");
  check(cfg.gauge.nquad >= 8, "gauge.nquad", "must be at least 8");
  check(!cfg.gauge.h_fd.empty(), "gauge.h_fd", "must not be empty");
  for (double h : cfg.gauge.h_fd) check(h > 0.0, "gauge.h_fd", "steps must be positive");
  for (const GridSpec& g : cfg.convergence)
    check(g.L > 0.0 && g.Nx >= 3 && g.Ny >= 3, "convergence.grids", "invalid grid triple");
  check(!cfg.output_dir.empty(), "output.dir", "must not be empty");
  return cfg;
}

RunConfig load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::ios_base::failure("cannot open config file '" + path + "'");
  std::ostringstream text;
  text << in.rdbuf();
  return resolve_config(parse_ini(text.str()));
}

}  // namespace magwave
