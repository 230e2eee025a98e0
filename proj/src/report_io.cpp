#include "magwave/report_io.hpp"

#include <cmath>
#include <iomanip>
#include <ostream>

#include "magwave/errors.hpp"

namespace magwave {
namespace {

Json number_or_null(double v) { return std::isfinite(v) ? Json(v) : Json(nullptr); }

Json numbers(const std::vector<double>& v) {
  Json out = Json::array();
  for (double x : v) out.push_back(number_or_null(x));
  return out;
}

std::string_view to_string(GfDenominator d) { return d == GfDenominator::sup ? "sup" : "inf"; }
std::string_view to_string(HardyThreshold t) { return t == HardyThreshold::discrete ? "discrete" : "continuum"; }
std::string_view to_string(HardyWeightKind w) { return w == HardyWeightKind::unit ? "unit" : "plateau"; }

}  // namespace

Json to_json(const ProfileDescriptor& p) {
  return Json{{"family", std::string(to_string(p.family))},
              {"amplitude", p.amplitude},
              {"center", p.center},
              {"width", p.width}};
}

Json to_json(const FieldDescriptor& field) {
  return Json{{"family", std::string(to_string(field.family))},
              {"strength", field.strength},
              {"x0", field.x0},
              {"y0", field.y0},
              {"radius", field.radius}};
}

Json to_json(const GridSpec& grid) { return Json{{"L", grid.L}, {"Nx", grid.Nx}, {"Ny", grid.Ny}}; }

Json to_json(const EigenOptions& opts) {
  Json out{{"k", opts.k}, {"tol", opts.tol}, {"max_iter", opts.max_iter}, {"seed", opts.seed}};
  out["shift"] = std::isnan(opts.shift) ? Json("auto") : Json(opts.shift);
  return out;
}

Json to_json(const RunConfig& cfg) {
  Json conv = Json::array();
  for (const GridSpec& g : cfg.convergence) conv.push_back(to_json(g));
  return Json{
      {"profile", to_json(cfg.profile)},
      {"field", to_json(cfg.field)},
      {"grid", to_json(cfg.grid)},
      {"solver", to_json(cfg.solver)},
      {"sweep", {{"alphas", numbers(cfg.sweep.alphas)}, {"bisection_steps", cfg.sweep.bisection_steps}}},
      {"weyl", {{"n", numbers(cfg.weyl.n)}, {"k", cfg.weyl.k}}},
      {"effective1d", {{"L1", cfg.effective1d.L1}, {"N1", cfg.effective1d.N1}}},
      {"hardy",
       {{"weight", std::string(to_string(cfg.hardy.weight))},
        {"height", cfg.hardy.height},
        {"width", cfg.hardy.width},
        {"threshold", std::string(to_string(cfg.hardy.threshold))}}},
      {"gf",
       {{"x_min", cfg.gf.x_min},
        {"x_max", cfg.gf.x_max},
        {"samples", cfg.gf.samples},
        {"denominator", std::string(to_string(cfg.gf.denominator))},
        {"h_fd", cfg.gf.h_fd}}},
      {"gauge", {{"nquad", cfg.gauge.nquad}, {"h_fd", numbers(cfg.gauge.h_fd)}}},
      {"convergence", {{"grids", conv}}},
      {"output", {{"dir", cfg.output_dir}}},
  };
}

Json spectrum_json(const SpectrumResult& s, const GridSpec& grid, const ProfileDescriptor& p,
                   const FieldDescriptor& field) {
  Json flags = Json::array();
  for (bool b : s.below_threshold) flags.push_back(b);
  const ThresholdCount tc = count_below_threshold(s, s.delta);
  return Json{{"eigenvalues", numbers(s.eigenvalues)},
              {"residuals", numbers(s.residual_norms)},
              {"flags", flags},
              {"count_below", tc.count},
              {"delta", s.delta},
              {"converged", s.converged},
              {"iterations", s.iterations},
              {"shift", number_or_null(s.shift)},
              {"grid", to_json(grid)},
              {"profile", to_json(p)},
              {"field", to_json(field)}};
}

Json to_json(const SweepResult& s) {
  Json pts = Json::array();
  for (const SweepPoint& pt : s.points)
    pts.push_back(Json{{"alpha", pt.alpha},
                       {"lambda_magnetic", number_or_null(pt.lambda_magnetic)},
                       {"lambda_nonmagnetic", number_or_null(pt.lambda_nonmagnetic)},
                       {"flag_magnetic", pt.flag_magnetic},
                       {"flag_nonmagnetic", pt.flag_nonmagnetic},
                       {"converged", pt.converged},
                       {"from_bisection", pt.from_bisection}});
  Json out{{"points", pts}, {"delta", s.delta}, {"monotone", s.monotone}};
  if (s.alpha_critical)
    out["alpha_critical"] = Json::array({s.alpha_critical->first, s.alpha_critical->second});
  else
    out["alpha_critical"] = nullptr;
  return out;
}

Json to_json(const ConvergenceReport& r) {
  Json runs = Json::array();
  for (const LadderEntry& e : r.runs)
    runs.push_back(Json{{"grid", to_json(e.grid)}, {"eigenvalues", numbers(e.eigenvalues)}, {"converged", e.converged}});
  Json extrap = Json::array();
  for (const auto& v : r.extrapolated) extrap.push_back(numbers(v));
  Json discrete = Json::array();
  for (bool b : r.discrete) discrete.push_back(b);
  return Json{{"runs", runs},
              {"ladder_L", r.ladder_L},
              {"measured_order", numbers(r.measured_order)},
              {"L_values", numbers(r.L_values)},
              {"extrapolated", extrap},
              {"h_error", numbers(r.h_error)},
              {"L_sensitivity", numbers(r.L_sensitivity)},
              {"discrete", discrete}};
}

CsvWriter::CsvWriter(std::ostream& out, const std::vector<std::string>& header) : out_(out), columns_(header.size()) {
  if (header.empty()) throw ArgumentError("CsvWriter: empty header");
  for (std::size_t i = 0; i < header.size(); ++i) out_ << (i ? "," : "") << header[i];
  out_ << '\n';
  out_ << std::setprecision(17);
}

void CsvWriter::sep() {
  if (filled_ == columns_) throw ArgumentError("CsvWriter: too many columns in row");
  if (filled_ > 0) out_ << ',';
  ++filled_;
}

CsvWriter& CsvWriter::operator<<(double v) {
  sep();
  out_ << v;
  return *this;
}

CsvWriter& CsvWriter::operator<<(long long v) {
  sep();
  out_ << v;
  return *this;
}

CsvWriter& CsvWriter::operator<<(const std::string& v) {
  sep();
  out_ << v;
  return *this;
}

void CsvWriter::end_row() {
  if (filled_ != columns_) throw ArgumentError("CsvWriter: incomplete row");
  out_ << '\n';
  filled_ = 0;
}

void write_spectrum_csv(std::ostream& out, const SpectrumResult& s) {
  CsvWriter csv(out, {"index", "eigenvalue", "residual", "below_threshold"});
  for (std::size_t i = 0; i < s.eigenvalues.size(); ++i) {
    csv << static_cast<long long>(i) << s.eigenvalues[i] << s.residual_norms[i] << static_cast<bool>(s.below_threshold[i]);
    csv.end_row();
  }
}

void write_sweep_csv(std::ostream& out, const SweepResult& s) {
  CsvWriter csv(out, {"alpha", "lambda1_magnetic", "lambda1_nonmagnetic", "flag_magnetic", "flag_nonmagnetic",
                      "converged", "from_bisection"});
  for (const SweepPoint& pt : s.points) {
    csv << pt.alpha << pt.lambda_magnetic << pt.lambda_nonmagnetic << pt.flag_magnetic << pt.flag_nonmagnetic
        << pt.converged << pt.from_bisection;
    csv.end_row();
  }
}

void write_sweep_gnuplot(std::ostream& out, const SweepResult& s) {
  out << "# alpha lambda1_magnetic lambda1_nonmagnetic\n" << std::setprecision(17);
  for (const SweepPoint& pt : s.points) out << pt.alpha << ' ' << pt.lambda_magnetic << ' ' << pt.lambda_nonmagnetic << '\n';
}

}  // namespace magwave
