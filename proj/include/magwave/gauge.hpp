#pragma once

#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "magwave/grid.hpp"
#include "magwave/profiles.hpp"

namespace magwave {

enum class FieldFamily { zero, smooth_disk_bump };

std::string_view to_string(FieldFamily family);
FieldFamily field_family_from_string(std::string_view name);

/// Compactly supported magnetic field in the physical plane.
/// smooth_disk_bump: B = strength * exp(1 - 1/(1 - r^2/R^2)) for r < R, zero outside,
/// with r the distance to (x0, y0).
struct FieldDescriptor {
  FieldFamily family = FieldFamily::zero;
  double strength = 0.0;
  double x0 = 0.0;
  double y0 = std::numbers::pi / 2.0;
  double radius = 1.0;
};

/// The support disk must sit strictly inside 0 < y < pi. Throws ArgumentError.
void validate(const FieldDescriptor& field);

double field_value(const FieldDescriptor& field, double x, double y);

struct VectorPotential {
  double a1 = 0.0;
  double a2 = 0.0;
};

struct GaugeOptions {
  int nquad = 64;
  /// Restrict the radial integral to the chord of the ray through the support disk.
  bool split_at_support = true;
};

/// Poincare gauge centred at the origin:
///   a1 = -y * int_0^1 B(ux, uy) u du,   a2 = x * int_0^1 B(ux, uy) u du.
VectorPotential poincare_gauge(const FieldDescriptor& field, double x, double y, const GaugeOptions& opts = {});

/// Sup over the grid nodes (read as physical points (x_i, eta_j)) of
/// |d_x a2 - d_y a1 - B| with central differences of step h_fd.
double curl_check(const FieldDescriptor& field, const Grid& grid, double h_fd, const GaugeOptions& opts = {});

/// Vector potential sampled on the straightened strip.
///
/// a1, a2 hold the pulled-back components a_k(x, g(x) eta) at the nodes. The operator
/// itself is built from the link phases: phase_x is the integral of the pulled-back
/// one-form (a1 + g' eta a2) dx + g a2 deta along each x-link, phase_eta along each
/// eta-link (midpoint rule). Gauge transforms shift link phases by exact differences
/// of the gauge function, which keeps the discrete spectrum gauge invariant.
struct GaugeSamples {
  Grid grid;
  ProfileDescriptor profile;
  FieldDescriptor field;
  std::vector<double> a1;
  std::vector<double> a2;
  std::vector<double> phase_x;
  std::vector<double> phase_eta;
  double sup_a1 = 0.0;
  double sup_a2 = 0.0;
};

/// All-zero potential on `grid`.
GaugeSamples zero_gauge(const Grid& grid, const ProfileDescriptor& profile);

GaugeSamples pullback_gauge(const FieldDescriptor& field, const ProfileDescriptor& profile, const Grid& grid,
                            const GaugeOptions& opts = {});

/// A -> A + grad chi, with chi sampled at the interior nodes (row-major, grid.size()).
/// chi is taken to vanish on the Dirichlet boundary; link phases of boundary links do
/// not enter the form, so that choice is immaterial. Node samples are updated with
/// central differences (one-sided at the outermost nodes):
///   a1 += d_x chi - (g' eta / g) d_eta chi,   a2 += d_eta chi / g.
GaugeSamples apply_gauge_transform(const GaugeSamples& gs, std::span<const double> chi);

/// CSV with header "x,eta,a1,a2", one row per node, 17 significant digits.
void write_gauge_csv(std::ostream& out, const GaugeSamples& gs);

}  // namespace magwave
