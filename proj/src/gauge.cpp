#include "magwave/gauge.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <ostream>

#include "magwave/errors.hpp"
#include "magwave/quadrature.hpp"

namespace magwave {

std::string_view to_string(FieldFamily family) {
  return family == FieldFamily::smooth_disk_bump ? "smooth_disk_bump" : "zero";
}

FieldFamily field_family_from_string(std::string_view name) {
  if (name == "zero") return FieldFamily::zero;
  if (name == "smooth_disk_bump") return FieldFamily::smooth_disk_bump;
  throw ConfigError("field.family", "unknown field family '" + std::string(name) + "'");
}

void validate(const FieldDescriptor& field) {
  if (field.family == FieldFamily::zero) return;
  if (!std::isfinite(field.strength) || !std::isfinite(field.x0) || !std::isfinite(field.y0))
    throw ArgumentError("field parameters must be finite");
  if (!(field.radius > 0.0)) throw ArgumentError("field radius must be positive");
  if (field.y0 - field.radius <= 0.0 || field.y0 + field.radius >= std::numbers::pi)
    throw ArgumentError("field support disk must lie strictly inside 0 < y < pi");
}

double field_value(const FieldDescriptor& field, double x, double y) {
  if (field.family == FieldFamily::zero) return 0.0;
  const double dx = x - field.x0;
  const double dy = y - field.y0;
  const double t = 1.0 - (dx * dx + dy * dy) / (field.radius * field.radius);
  if (t <= 0.0) return 0.0;
  const double q = 1.0 - 1.0 / t;
  if (q < -700.0) return 0.0;
  return field.strength * std::exp(q);
}

namespace {

// Parameters u in [0,1] where (ux, uy) lies inside the support disk; false if none.
bool support_chord(const FieldDescriptor& field, double x, double y, double& lo, double& hi) {
  const double pp = x * x + y * y;
  if (pp == 0.0) return false;
  const double pc = x * field.x0 + y * field.y0;
  const double cc = field.x0 * field.x0 + field.y0 * field.y0 - field.radius * field.radius;
  const double disc = pc * pc - pp * cc;
  if (disc <= 0.0) return false;
  const double root = std::sqrt(disc);
  lo = std::max(0.0, (pc - root) / pp);
  hi = std::min(1.0, (pc + root) / pp);
  return lo < hi;
}

double radial_moment(const FieldDescriptor& field, double x, double y, const GaugeOptions& opts) {
  if (field.family == FieldFamily::zero) return 0.0;
  double lo = 0.0;
  double hi = 1.0;
  if (opts.split_at_support && !support_chord(field, x, y, lo, hi)) return 0.0;
  const QuadratureRule& rule = gauss_legendre(opts.nquad);
  return integrate(rule, lo, hi, [&](double u) { return field_value(field, u * x, u * y) * u; });
}

}  // namespace

VectorPotential poincare_gauge(const FieldDescriptor& field, double x, double y, const GaugeOptions& opts) {
  if (opts.nquad < 8) throw ArgumentError("poincare_gauge: nquad must be at least 8");
  const double m = radial_moment(field, x, y, opts);
  return {-y * m, x * m};
}

double curl_check(const FieldDescriptor& field, const Grid& grid, double h_fd, const GaugeOptions& opts) {
  if (!(h_fd > 0.0)) throw ArgumentError("curl_check: h_fd must be positive");
  validate(field);
  double worst = 0.0;
  for (int j = 0; j < grid.Ny; ++j) {
    for (int i = 0; i < grid.Nx; ++i) {
      const double x = grid.x(i);
      const double y = grid.eta(j);
      const double da2dx =
          (poincare_gauge(field, x + h_fd, y, opts).a2 - poincare_gauge(field, x - h_fd, y, opts).a2) / (2.0 * h_fd);
      const double da1dy =
          (poincare_gauge(field, x, y + h_fd, opts).a1 - poincare_gauge(field, x, y - h_fd, opts).a1) / (2.0 * h_fd);
      worst = std::max(worst, std::abs(da2dx - da1dy - field_value(field, x, y)));
    }
  }
  return worst;
}

GaugeSamples zero_gauge(const Grid& grid, const ProfileDescriptor& profile) {
  GaugeSamples gs;
  gs.grid = grid;
  gs.profile = profile;
  gs.a1.assign(grid.size(), 0.0);
  gs.a2.assign(grid.size(), 0.0);
  gs.phase_x.assign(grid.x_link_count(), 0.0);
  gs.phase_eta.assign(grid.eta_link_count(), 0.0);
  return gs;
}

namespace {

void update_sup_norms(GaugeSamples& gs) {
  gs.sup_a1 = 0.0;
  gs.sup_a2 = 0.0;
  for (double v : gs.a1) gs.sup_a1 = std::max(gs.sup_a1, std::abs(v));
  for (double v : gs.a2) gs.sup_a2 = std::max(gs.sup_a2, std::abs(v));
}

}  // namespace

GaugeSamples pullback_gauge(const FieldDescriptor& field, const ProfileDescriptor& profile, const Grid& grid,
                            const GaugeOptions& opts) {
  validate(field);
  validate(profile);
  GaugeSamples gs = zero_gauge(grid, profile);
  gs.field = field;
  if (field.family == FieldFamily::zero) return gs;

  for (int i = 0; i < grid.Nx; ++i) {
    const double x = grid.x(i);
    const double g = width_function(profile, x);
    for (int j = 0; j < grid.Ny; ++j) {
      const VectorPotential a = poincare_gauge(field, x, g * grid.eta(j), opts);
      gs.a1[grid.index(i, j)] = a.a1;
      gs.a2[grid.index(i, j)] = a.a2;
    }
    for (int m = 0; m <= grid.Ny; ++m) {
      const double eta = grid.eta_link(m);
      gs.phase_eta[grid.eta_link_index(i, m)] = grid.hy * g * poincare_gauge(field, x, g * eta, opts).a2;
    }
  }
  for (int k = 0; k <= grid.Nx; ++k) {
    const double x = grid.x_link(k);
    const ProfileJet jet = eval_profile(profile, x);
    const double g = 1.0 + jet.f;
    for (int j = 0; j < grid.Ny; ++j) {
      const double eta = grid.eta(j);
      const VectorPotential a = poincare_gauge(field, x, g * eta, opts);
      gs.phase_x[grid.x_link_index(k, j)] = grid.hx * (a.a1 + jet.d1 * eta * a.a2);
    }
  }
  update_sup_norms(gs);
  return gs;
}

GaugeSamples apply_gauge_transform(const GaugeSamples& gs, std::span<const double> chi) {
  const Grid& grid = gs.grid;
  if (chi.size() != grid.size()) throw ArgumentError("apply_gauge_transform: chi does not match the grid");
  auto at = [&](int i, int j) { return chi[grid.index(i, j)]; };
  auto d_x = [&](int i, int j) {
    if (i == 0) return (at(1, j) - at(0, j)) / grid.hx;
    if (i == grid.Nx - 1) return (at(i, j) - at(i - 1, j)) / grid.hx;
    return (at(i + 1, j) - at(i - 1, j)) / (2.0 * grid.hx);
  };
  auto d_eta = [&](int i, int j) {
    if (j == 0) return (at(i, 1) - at(i, 0)) / grid.hy;
    if (j == grid.Ny - 1) return (at(i, j) - at(i, j - 1)) / grid.hy;
    return (at(i, j + 1) - at(i, j - 1)) / (2.0 * grid.hy);
  };
  // Values including the implicit zero boundary ring.
  auto ext = [&](int i, int j) {
    if (i < 0 || i >= grid.Nx || j < 0 || j >= grid.Ny) return 0.0;
    return at(i, j);
  };

  GaugeSamples out = gs;
  for (int i = 0; i < grid.Nx; ++i) {
    const ProfileJet jet = eval_profile(gs.profile, grid.x(i));
    const double g = 1.0 + jet.f;
    for (int j = 0; j < grid.Ny; ++j) {
      const double de = d_eta(i, j);
      out.a1[grid.index(i, j)] += d_x(i, j) - jet.d1 * grid.eta(j) / g * de;
      out.a2[grid.index(i, j)] += de / g;
    }
  }
  for (int j = 0; j < grid.Ny; ++j)
    for (int k = 0; k <= grid.Nx; ++k) out.phase_x[grid.x_link_index(k, j)] += ext(k, j) - ext(k - 1, j);
  for (int m = 0; m <= grid.Ny; ++m)
    for (int i = 0; i < grid.Nx; ++i) out.phase_eta[grid.eta_link_index(i, m)] += ext(i, m) - ext(i, m - 1);
  update_sup_norms(out);
  return out;
}

void write_gauge_csv(std::ostream& out, const GaugeSamples& gs) {
  const Grid& grid = gs.grid;
  out << "x,eta,a1,a2\n" << std::setprecision(17);
  for (int j = 0; j < grid.Ny; ++j)
    for (int i = 0; i < grid.Nx; ++i)
      out << grid.x(i) << ',' << grid.eta(j) << ',' << gs.a1[grid.index(i, j)] << ',' << gs.a2[grid.index(i, j)]
          << '\n';
}

}  // namespace magwave
