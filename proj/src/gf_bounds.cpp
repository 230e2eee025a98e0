#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "magwave/analysis.hpp"
#include "magwave/errors.hpp"

namespace magwave {

GfReport gf_bounds(const ProfileDescriptor& p, double sup_a1, double sup_a2, std::span<const double> xs,
                   const GfOptions& opts) {
  if (xs.empty()) throw ArgumentError("gf_bounds: empty sample sequence");
  if (!(opts.h_fd > 0.0)) throw ArgumentError("gf_bounds: h_fd must be positive");
  constexpr double pi = std::numbers::pi;

  double fmax = 0.0;
  double fmin = std::numeric_limits<double>::infinity();
  for (double x : xs) {
    const double f = eval_profile(p, x).f;
    fmax = std::max(fmax, f);
    fmin = std::min(fmin, f);
  }
  const double gn = 1.0 + (opts.denominator == GfDenominator::sup ? fmax : fmin);

  auto G1 = [&](double x) {
    const ProfileJet jet = eval_profile(p, x);
    const double af = std::abs(jet.d1);
    const double f = jet.f;
    return (1.0 + 2.0 * pi) / (2.0 * gn) * af + pi * af / gn * (1.0 + sup_a1 + af * pi / gn) + 2.0 * f -
           f * f * (3.0 + 2.0 * f) / (gn * gn) + sup_a2 * f / gn;
  };
  auto G2 = [&](double x) {
    const ProfileJet jet = eval_profile(p, x);
    const double af = std::abs(jet.d1);
    return af / (2.0 * gn) * (1.0 + 2.0 * sup_a1 * pi + af / (2.0 * gn)) + sup_a2 * jet.f / gn;
  };

  GfReport report;
  report.g_norm = gn;
  report.xs.assign(xs.begin(), xs.end());
  const double h = opts.h_fd;
  double worst = 0.0;
  for (double x : xs) {
    const double c = G1(x);
    const double plus = G1(x + h);
    const double minus = G1(x - h);
    const double d1 = (plus - minus) / (2.0 * h);
    const double d2 = (plus - 2.0 * c + minus) / (h * h);
    const double g2 = G2(x);
    report.G1.push_back(c);
    report.G1_d1.push_back(d1);
    report.G1_d2.push_back(d2);
    report.G2.push_back(g2);
    const double m = std::max({std::abs(c), std::abs(d1), std::abs(d2), std::abs(g2)});
    worst = std::max(worst, (1.0 + x * x) * m);
  }
  if (worst == 0.0)
    report.C = 0.0;
  else
    report.C = p.amplitude > 0.0 ? worst / p.amplitude : std::numeric_limits<double>::infinity();
  return report;
}

}  // namespace magwave
