#pragma once

#include <array>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace magwave {

enum class ProfileFamily { zero, lorentzian, gaussian_bump, compact_bump };

std::string_view to_string(ProfileFamily family);
/// Throws ConfigError for unknown names.
ProfileFamily profile_family_from_string(std::string_view name);

/// Deformation f of the strip 0 < y < pi(1 + f(x)).
///
///   lorentzian     f = amplitude * w^2 / (w^2 + (x - c)^2)
///   gaussian_bump  f = amplitude * exp(-(x - c)^2 / w^2)
///   compact_bump   f = amplitude * exp(1 - 1 / (1 - s^2)),  s = (x - c) / w, |s| < 1
///   zero           f = 0
struct ProfileDescriptor {
  ProfileFamily family = ProfileFamily::zero;
  double amplitude = 0.0;
  double center = 0.0;
  double width = 1.0;
};

/// Throws ArgumentError unless width > 0, amplitude >= 0 and both are finite.
void validate(const ProfileDescriptor& p);

/// f and its first three derivatives, all analytic.
struct ProfileJet {
  double f = 0.0;
  double d1 = 0.0;
  double d2 = 0.0;
  double d3 = 0.0;

  double operator[](int order) const;
};

ProfileJet eval_profile(const ProfileDescriptor& p, double x);

/// Width function g = 1 + f.
inline double width_function(const ProfileDescriptor& p, double x) { return 1.0 + eval_profile(p, x).f; }

/// Suprema of (1 + x^2)|f^(j)(x)| over the samples, j = 0..3.
struct BoundReport {
  double claimed_alpha = 0.0;
  std::array<double, 4> observed_sup{};
  bool satisfied = false;
};

BoundReport check_decay_bounds(const ProfileDescriptor& p, double claimed_alpha, std::span<const double> xs);

/// Ratio constant of the bound-state condition |f'| <= c* sqrt(f (2 + f)).
double bound_state_constant();

struct ConditionReport {
  double max_violation = 0.0;  ///< sup of |f'| - c* sqrt(f(2+f))
  bool strict_somewhere = false;
  bool satisfied = false;
};

ConditionReport check_discrete_condition(const ProfileDescriptor& p, std::span<const double> xs);

/// Uniform samples on [c - half_window_widths*w, c + half_window_widths*w].
/// Defaults follow the checker defaults (2048 points, 50 widths).
std::vector<double> default_profile_samples(const ProfileDescriptor& p, int count = 2048,
                                            double half_window_widths = 50.0);

/// For width 1 and center 0, the lorentzian family satisfies the decay bounds with
/// claimed_alpha = kLorentzianDecayConstant * amplitude. The constant is
/// max(1, 1, 2, sup 24|x(1 - x^2)|/(1 + x^2)^3), the last term from the third derivative.
inline constexpr double kLorentzianDecayConstant = 5.217713969871;

}  // namespace magwave
