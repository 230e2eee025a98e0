#include <algorithm>
#include <cmath>
#include <utility>

#include "magwave/analysis.hpp"
#include "magwave/assembly.hpp"
#include "magwave/errors.hpp"

namespace magwave {

HardyWeight HardyWeight::unit() {
  return {[](double) { return 1.0; }, [](double) { return 0.0; }};
}

HardyWeight HardyWeight::plateau(double height, double width) {
  if (!(height > -1.0) || !(width > 0.0)) throw ArgumentError("HardyWeight::plateau: weight must stay positive");
  return {[=](double x) { return 1.0 + height * std::exp(-x * x / (width * width)); },
          [=](double x) {
            const double s2 = x * x / (width * width);
            return height * std::exp(-s2) * (4.0 * s2 - 2.0) / (width * width);
          }};
}

HardyWeight HardyWeight::sampled(std::vector<double> xs, std::vector<double> h, std::vector<double> h2) {
  if (xs.empty() || xs.size() != h.size() || xs.size() != h2.size())
    throw ArgumentError("HardyWeight::sampled: sample arrays must be non-empty and of equal length");
  if (!std::ranges::is_sorted(xs)) throw ArgumentError("HardyWeight::sampled: xs must be ascending");
  if (std::ranges::any_of(h, [](double v) { return !(v > 0.0); }))
    throw ArgumentError("HardyWeight::sampled: h must be positive");
  auto interp = [xs](const std::vector<double>& ys) {
    return [xs, ys](double x) {
      if (x <= xs.front()) return ys.front();
      if (x >= xs.back()) return ys.back();
      const std::size_t hi = static_cast<std::size_t>(std::ranges::upper_bound(xs, x) - xs.begin());
      const double t = (x - xs[hi - 1]) / (xs[hi] - xs[hi - 1]);
      return (1.0 - t) * ys[hi - 1] + t * ys[hi];
    };
  };
  return {interp(h), interp(h2)};
}

HardyResult hardy_estimate(const FieldDescriptor& field, const HardyWeight& weight, const Grid& grid,
                           const EigenOptions& opts, HardyThreshold threshold) {
  if (!weight.h || !weight.h2) throw ArgumentError("hardy_estimate: weight functions missing");
  for (int i = 0; i < grid.Nx; ++i)
    if (!(weight.h(grid.x(i)) > 0.0)) throw ArgumentError("hardy_estimate: weight must be positive");

  const ProfileDescriptor straight{};
  const GaugeSamples gs = pullback_gauge(field, straight, grid);
  auto h_sq = [&](double x) {
    const double h = weight.h(x);
    return h * h;
  };
  FormOptions form;
  form.x_weight = h_sq;
  OperatorMatrix K = assemble_form(straight, gs, grid, form);

  const double s = std::sin(0.5 * grid.hy);
  const double level = threshold == HardyThreshold::discrete ? 4.0 * s * s / (grid.hy * grid.hy) : 1.0;
  const double cell = grid.hx * grid.hy;
  for (int j = 0; j < grid.Ny; ++j) {
    for (int i = 0; i < grid.Nx; ++i) {
      const double x = grid.x(i);
      const auto idx = static_cast<Eigen::Index>(grid.index(i, j));
      K.matrix.coeffRef(idx, idx) -= cell * (level * h_sq(x) + weight.h2(x));
    }
  }
  const OperatorMatrix W = weighted_mass_matrix(grid, [&](double x) { return h_sq(x) / (1.0 + x * x); });

  EigenOptions o = opts;
  o.k = 1;
  o.delta = 0.0;
  const SpectrumResult s1 = smallest_eigenpairs(K.matrix, W.matrix, o);
  return {s1.eigenvalues.front(), level, s1.converged};
}

}  // namespace magwave
