#include "magwave/profiles.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "magwave/errors.hpp"

namespace magwave {

std::string_view to_string(ProfileFamily family) {
  switch (family) {
    case ProfileFamily::zero: return "zero";
    case ProfileFamily::lorentzian: return "lorentzian";
    case ProfileFamily::gaussian_bump: return "gaussian_bump";
    case ProfileFamily::compact_bump: return "compact_bump";
  }
  return "zero";
}

ProfileFamily profile_family_from_string(std::string_view name) {
  if (name == "zero") return ProfileFamily::zero;
  if (name == "lorentzian") return ProfileFamily::lorentzian;
  if (name == "gaussian_bump") return ProfileFamily::gaussian_bump;
  if (name == "compact_bump") return ProfileFamily::compact_bump;
  throw ConfigError("profile.family", "unknown profile family '" + std::string(name) + "'");
}

void validate(const ProfileDescriptor& p) {
  if (!std::isfinite(p.width) || p.width <= 0.0) throw ArgumentError("profile width must be positive");
  if (!std::isfinite(p.amplitude) || p.amplitude < 0.0)
    throw ArgumentError("profile amplitude must be non-negative");
  if (!std::isfinite(p.center)) throw ArgumentError("profile center must be finite");
}

double ProfileJet::operator[](int order) const {
  switch (order) {
    case 0: return f;
    case 1: return d1;
    case 2: return d2;
    case 3: return d3;
  }
  throw ArgumentError("derivative order must be in 0..3");
}

namespace {

// Derivatives with respect to the scaled variable s = (x - c)/w, unit amplitude.
ProfileJet lorentzian_jet(double s) {
  const double q = 1.0 / (1.0 + s * s);
  const double q2 = q * q;
  return {q, -2.0 * s * q2, (6.0 * s * s - 2.0) * q2 * q, 24.0 * s * (1.0 - s * s) * q2 * q2};
}

ProfileJet gaussian_jet(double s) {
  const double e = std::exp(-s * s);
  return {e, -2.0 * s * e, (4.0 * s * s - 2.0) * e, (12.0 * s - 8.0 * s * s * s) * e};
}

// exp(q) with q = 1 - 1/(1 - s^2); f' = f q', f'' = f (q'^2 + q''), f''' = f (q'^3 + 3 q' q'' + q''').
ProfileJet compact_jet(double s) {
  const double t = 1.0 - s * s;
  if (t <= 0.0) return {};
  const double q = 1.0 - 1.0 / t;
  if (q < -700.0) return {};
  const double e = std::exp(q);
  const double q1 = -2.0 * s / (t * t);
  const double q2 = (-2.0 - 6.0 * s * s) / (t * t * t);
  const double q3 = -24.0 * s * (1.0 + s * s) / (t * t * t * t);
  return {e, e * q1, e * (q1 * q1 + q2), e * (q1 * q1 * q1 + 3.0 * q1 * q2 + q3)};
}

}  // namespace

ProfileJet eval_profile(const ProfileDescriptor& p, double x) {
  validate(p);
  if (p.family == ProfileFamily::zero) return {};
  const double s = (x - p.center) / p.width;
  ProfileJet unit;
  switch (p.family) {
    case ProfileFamily::lorentzian: unit = lorentzian_jet(s); break;
    case ProfileFamily::gaussian_bump: unit = gaussian_jet(s); break;
    case ProfileFamily::compact_bump: unit = compact_jet(s); break;
    case ProfileFamily::zero: break;
  }
  const double iw = 1.0 / p.width;
  const double a = p.amplitude;
  return {a * unit.f, a * unit.d1 * iw, a * unit.d2 * iw * iw, a * unit.d3 * iw * iw * iw};
}

BoundReport check_decay_bounds(const ProfileDescriptor& p, double claimed_alpha, std::span<const double> xs) {
  if (xs.empty()) throw ArgumentError("check_decay_bounds: empty sample sequence");
  BoundReport report;
  report.claimed_alpha = claimed_alpha;
  for (double x : xs) {
    const ProfileJet jet = eval_profile(p, x);
    const double weight = 1.0 + x * x;
    for (int j = 0; j < 4; ++j)
      report.observed_sup[j] = std::max(report.observed_sup[j], weight * std::abs(jet[j]));
  }
  report.satisfied = std::ranges::all_of(report.observed_sup, [&](double s) { return s <= claimed_alpha; });
  return report;
}

double bound_state_constant() {
  return 2.0 * std::sqrt(3.0) / std::sqrt(4.0 * std::numbers::pi * std::numbers::pi + 3.0);
}

ConditionReport check_discrete_condition(const ProfileDescriptor& p, std::span<const double> xs) {
  if (xs.empty()) throw ArgumentError("check_discrete_condition: empty sample sequence");
  const double cstar = bound_state_constant();
  ConditionReport report;
  report.max_violation = -std::numeric_limits<double>::infinity();
  for (double x : xs) {
    const ProfileJet jet = eval_profile(p, x);
    const double rhs = cstar * std::sqrt(jet.f * (2.0 + jet.f));
    const double lhs = std::abs(jet.d1);
    report.max_violation = std::max(report.max_violation, lhs - rhs);
    if (lhs < rhs) report.strict_somewhere = true;
  }
  report.satisfied = report.max_violation <= 0.0;
  return report;
}

std::vector<double> default_profile_samples(const ProfileDescriptor& p, int count, double half_window_widths) {
  if (count < 2) throw ArgumentError("default_profile_samples: need at least two points");
  validate(p);
  const double half = half_window_widths * p.width;
  std::vector<double> xs(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) xs[i] = p.center - half + 2.0 * half * i / (count - 1);
  return xs;
}

}  // namespace magwave
