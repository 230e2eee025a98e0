#include <cmath>

#include "magwave/analysis.hpp"
#include "magwave/assembly.hpp"
#include "magwave/errors.hpp"

namespace magwave {

BumpJet weyl_bump(double t) {
  const double p = (t - 1.0) * (2.0 - t);
  if (p <= 0.0) return {};
  const double q = -1.0 / p;
  if (q < -700.0) return {};
  const double dp = 3.0 - 2.0 * t;
  const double q1 = dp / (p * p);
  const double q2 = (-2.0 * p - 2.0 * dp * dp) / (p * p * p);
  const double h = kWeylBumpConstant * std::exp(q);
  return {h, h * q1, h * (q1 * q1 + q2)};
}

WeylResidual weyl_residual(const ProfileDescriptor& p, const FieldDescriptor& field, double k, double n,
                           const Grid& grid) {
  if (!(n > 0.0)) throw ArgumentError("weyl_residual: n must be positive");
  if (!(2.0 * n < grid.L)) throw ArgumentError("weyl_residual: quasi-mode support (n, 2n) does not fit in [-L, L]");

  const GaugeSamples gs = pullback_gauge(field, p, grid);
  const OperatorMatrix M = assemble_form(p, gs, grid);
  const double cell = grid.hx * grid.hy;
  const double mu = 1.0 + k * k;

  Eigen::VectorXcd phi = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(grid.size()));
  const double amplitude = 1.0 / std::sqrt(n);
  for (int i = 0; i < grid.Nx; ++i) {
    const double x = grid.x(i);
    const double h = weyl_bump(x / n).h;
    if (h == 0.0) continue;
    const Complex longitudinal = std::sqrt(width_function(p, x)) * amplitude * h * std::polar(1.0, k * x);
    for (int j = 0; j < grid.Ny; ++j) phi[grid.index(i, j)] = longitudinal * std::sin(grid.eta(j));
  }

  const Eigen::VectorXcd r = M.matrix * phi - (mu * cell) * phi;
  WeylResidual out;
  out.norm_sq = cell * phi.squaredNorm();
  out.residual_sq = r.squaredNorm() / cell / out.norm_sq;
  return out;
}

}  // namespace magwave
