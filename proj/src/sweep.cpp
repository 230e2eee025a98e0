#include <algorithm>
#include <cmath>

#include "magwave/analysis.hpp"
#include "magwave/errors.hpp"

namespace magwave {

std::vector<double> SweepResult::alphas() const {
  std::vector<double> out;
  out.reserve(points.size());
  for (const SweepPoint& pt : points) out.push_back(pt.alpha);
  return out;
}

SpectrumResult ground_state(const ProfileDescriptor& p, const FieldDescriptor& field, const Grid& grid,
                            const EigenOptions& opts) {
  const GaugeSamples gs = pullback_gauge(field, p, grid);
  return smallest_eigenpairs(assemble_form(p, gs, grid), mass_matrix(grid), opts);
}

SweepResult alpha_sweep(const ProfileDescriptor& family_template, const FieldDescriptor& field,
                        std::span<const double> alphas, const SweepOptions& opts) {
  if (alphas.empty()) throw ArgumentError("alpha_sweep: empty amplitude list");
  for (std::size_t i = 0; i < alphas.size(); ++i) {
    if (!(alphas[i] > 0.0)) throw ArgumentError("alpha_sweep: amplitudes must be positive");
    if (i > 0 && !(alphas[i] > alphas[i - 1])) throw ArgumentError("alpha_sweep: amplitudes must be ascending");
  }
  validate(field);
  if (opts.bisection_steps < 0) throw ArgumentError("alpha_sweep: bisection_steps must be non-negative");

  const Grid grid = build_grid(opts.grid.L, opts.grid.Nx, opts.grid.Ny);
  EigenOptions eig = opts.eigen;
  eig.k = 1;
  if (eig.delta < 0.0) eig.delta = default_delta(grid.L, eig.tol);

  SweepResult result;
  result.delta = eig.delta;

  auto evaluate = [&](double alpha, bool bisection) {
    ProfileDescriptor p = family_template;
    p.amplitude = alpha;
    const SpectrumResult mag = ground_state(p, field, grid, eig);
    const SpectrumResult non = ground_state(p, FieldDescriptor{}, grid, eig);
    SweepPoint pt;
    pt.alpha = alpha;
    pt.lambda_magnetic = mag.eigenvalues.front();
    pt.lambda_nonmagnetic = non.eigenvalues.front();
    pt.converged = mag.converged && non.converged;
    pt.flag_magnetic = mag.converged && mag.below_threshold.front();
    pt.flag_nonmagnetic = non.converged && non.below_threshold.front();
    pt.from_bisection = bisection;
    return pt;
  };

  for (double alpha : alphas) result.points.push_back(evaluate(alpha, false));

  // First off -> on transition of the magnetic flag among converged points.
  const SweepPoint* last_off = nullptr;
  std::optional<std::pair<double, double>> bracket;
  for (const SweepPoint& pt : result.points) {
    if (!pt.converged) continue;
    if (!pt.flag_magnetic) {
      last_off = &pt;
    } else if (last_off != nullptr) {
      bracket = std::make_pair(last_off->alpha, pt.alpha);
      break;
    } else {
      break;
    }
  }

  if (bracket) {
    auto [lo, hi] = *bracket;
    for (int step = 0; step < opts.bisection_steps; ++step) {
      const double mid = 0.5 * (lo + hi);
      const SweepPoint pt = evaluate(mid, true);
      result.points.push_back(pt);
      if (!pt.converged) break;
      if (pt.flag_magnetic)
        hi = mid;
      else
        lo = mid;
    }
    result.alpha_critical = std::make_pair(lo, hi);
    std::ranges::sort(result.points, {}, &SweepPoint::alpha);
  }

  bool seen_on = false;
  for (const SweepPoint& pt : result.points) {
    if (!pt.converged) continue;
    if (pt.flag_magnetic) seen_on = true;
    if (seen_on && !pt.flag_magnetic) result.monotone = false;
  }
  return result;
}

}  // namespace magwave
