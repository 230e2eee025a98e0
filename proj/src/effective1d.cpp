#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "magwave/analysis.hpp"
#include "magwave/errors.hpp"

namespace magwave {

EffectivePotential1D effective_potential(const ProfileDescriptor& p, std::span<const double> xs) {
  if (xs.empty()) throw ArgumentError("effective_potential: empty sample sequence");
  constexpr double pi2 = std::numbers::pi * std::numbers::pi;
  EffectivePotential1D out;
  out.profile = p;
  out.xs.assign(xs.begin(), xs.end());
  out.V.reserve(xs.size());
  for (double x : xs) {
    const ProfileJet jet = eval_profile(p, x);
    const double g2 = (1.0 + jet.f) * (1.0 + jet.f);
    out.V.push_back(jet.d1 * jet.d1 * (4.0 * pi2 + 3.0) / (12.0 * g2) - (2.0 * jet.f + jet.f * jet.f) / g2);
  }
  return out;
}

namespace {

double interpolate(const std::vector<double>& xs, const std::vector<double>& ys, double x) {
  if (xs.size() == 1) return x == xs.front() ? ys.front() : 0.0;
  if (x < xs.front() || x > xs.back()) return 0.0;
  const auto it = std::ranges::upper_bound(xs, x);
  if (it == xs.end()) return ys.back();
  const std::size_t hi = static_cast<std::size_t>(it - xs.begin());
  const std::size_t lo = hi - 1;
  const double t = (x - xs[lo]) / (xs[hi] - xs[lo]);
  return (1.0 - t) * ys[lo] + t * ys[hi];
}

}  // namespace

Operator1D build_operator_1d(const EffectivePotential1D& V, double L1, int N1) {
  if (!(L1 > 0.0)) throw ArgumentError("solve_1d: L1 must be positive");
  if (N1 < 100) throw ArgumentError("solve_1d: N1 must be at least 100");
  if (V.xs.size() != V.V.size() || V.xs.empty()) throw ArgumentError("solve_1d: malformed potential samples");
  if (!std::ranges::is_sorted(V.xs)) throw ArgumentError("solve_1d: potential samples must be ascending");
  Operator1D op;
  op.L1 = L1;
  op.N1 = N1;
  op.h = 2.0 * L1 / (N1 + 1);
  op.off_diagonal = -1.0 / (op.h * op.h);
  op.diagonal.resize(N1);
  for (int i = 0; i < N1; ++i) op.diagonal[i] = 2.0 / (op.h * op.h) + interpolate(V.xs, V.V, -L1 + (i + 1) * op.h);
  return op;
}

int Operator1D::count_below(double x) const {
  const double b2 = off_diagonal * off_diagonal;
  const double tiny = std::numeric_limits<double>::min() / std::numeric_limits<double>::epsilon();
  int count = 0;
  double d = 1.0;
  for (std::size_t i = 0; i < diagonal.size(); ++i) {
    d = diagonal[i] - x - (i == 0 ? 0.0 : b2 / d);
    if (d == 0.0) d = -tiny;
    if (d < 0.0) ++count;
  }
  return count;
}

double Operator1D::eigenvalue(int m) const {
  if (m < 0 || m >= N1) throw ArgumentError("Operator1D::eigenvalue: index out of range");
  const auto [dmin, dmax] = std::ranges::minmax(diagonal);
  double lo = dmin - 2.0 * std::abs(off_diagonal);
  double hi = dmax + 2.0 * std::abs(off_diagonal);
  for (int iter = 0; iter < 200; ++iter) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (count_below(mid) > m)
      hi = mid;
    else
      lo = mid;
  }
  return 0.5 * (lo + hi);
}

std::vector<double> solve_1d(const EffectivePotential1D& V, double L1, int N1) {
  const Operator1D op = build_operator_1d(V, L1, N1);
  const int negatives = op.count_below(-kNegativeCutoff1D);
  std::vector<double> out;
  out.reserve(negatives);
  for (int m = 0; m < negatives; ++m) out.push_back(op.eigenvalue(m));
  return out;
}

CrossCheck variational_crosscheck(const ProfileDescriptor& p, const Grid& grid, const EigenOptions& opts, double L1,
                                  int N1) {
  const ConditionReport cond = check_discrete_condition(p, default_profile_samples(p));
  if (!cond.satisfied) {
    std::ostringstream msg;
    msg << "variational_crosscheck: bound-state condition violated (max |f'| - c* sqrt(f(2+f)) = "
        << cond.max_violation << "); the 1D potential is not guaranteed non-positive";
    throw ArgumentError(msg.str());
  }
  EigenOptions o = opts;
  o.k = 1;
  const SpectrumResult s2 = ground_state(p, FieldDescriptor{}, grid, o);

  std::vector<double> xs(static_cast<std::size_t>(N1));
  const double h = 2.0 * L1 / (N1 + 1);
  for (int i = 0; i < N1; ++i) xs[i] = -L1 + (i + 1) * h;
  const Operator1D op = build_operator_1d(effective_potential(p, xs), L1, N1);

  CrossCheck out;
  out.lambda2d = s2.eigenvalues.front();
  out.one_plus_lambda1d = 1.0 + op.eigenvalue(0);
  out.converged = s2.converged;
  return out;
}

}  // namespace magwave
