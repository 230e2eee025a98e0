#pragma once

#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "magwave/eigensolve.hpp"
#include "magwave/gauge.hpp"
#include "magwave/profiles.hpp"

namespace magwave {

// ---------------------------------------------------------------------------
// Effective one-dimensional reduction
// ---------------------------------------------------------------------------

/// V(x) = f'^2 (4 pi^2 + 3) / (12 (1+f)^2) - (2f + f^2) / (1+f)^2 sampled on xs.
struct EffectivePotential1D {
  std::vector<double> xs;
  std::vector<double> V;
  ProfileDescriptor profile;
};

EffectivePotential1D effective_potential(const ProfileDescriptor& p, std::span<const double> xs);

/// Cutoff below which a 1D eigenvalue counts as negative.
inline constexpr double kNegativeCutoff1D = 1e-8;

/// Eigenvalues of -d^2/dx^2 + V on [-L1, L1] with Dirichlet ends, N1 interior nodes,
/// three-point differences, V interpolated linearly from its samples (zero outside
/// them). Eigenvalues come from Sturm-sequence bisection.
struct Operator1D {
  double L1 = 0.0;
  int N1 = 0;
  double h = 0.0;
  std::vector<double> diagonal;  ///< 2/h^2 + V(x_i)
  double off_diagonal = 0.0;     ///< -1/h^2

  /// Number of eigenvalues strictly below x.
  int count_below(double x) const;
  /// The m-th smallest eigenvalue (0-based).
  double eigenvalue(int m) const;
};

Operator1D build_operator_1d(const EffectivePotential1D& V, double L1, int N1);

/// Ascending eigenvalues below -kNegativeCutoff1D. Throws ArgumentError for L1 <= 0 or N1 < 100.
std::vector<double> solve_1d(const EffectivePotential1D& V, double L1, int N1);

struct CrossCheck {
  double lambda2d = 0.0;
  double one_plus_lambda1d = 0.0;
  bool converged = false;
};

/// Non-magnetic 2D ground state against 1 + (lowest 1D eigenvalue). The separable trial
/// function r(x) sin(y/g(x)) makes lambda2d <= one_plus_lambda1d on the continuum.
/// Throws ArgumentError (with the violation in the message) if the bound-state
/// condition fails for p.
CrossCheck variational_crosscheck(const ProfileDescriptor& p, const Grid& grid, const EigenOptions& opts, double L1,
                                  int N1);

// ---------------------------------------------------------------------------
// Weyl quasi-modes
// ---------------------------------------------------------------------------

/// Normalization of the bump h(t) = c exp(-1/((t-1)(2-t))) on (1, 2), chosen so that
/// int h^2 = 1 (computed once with 40-digit quadrature).
inline constexpr double kWeylBumpConstant = 101.541608713741;

struct BumpJet {
  double h = 0.0;
  double d1 = 0.0;
  double d2 = 0.0;
};

BumpJet weyl_bump(double t);

struct WeylResidual {
  double residual_sq = 0.0;  ///< |(M - (1+k^2) mass) phi|^2_{mass^-1} / |phi|^2_mass
  double norm_sq = 0.0;      ///< |phi|^2_mass
};

/// Quasi-mode phi_n = n^{-1/2} h(x/n) e^{ikx} sin(y/g(x)) carried to the straight strip
/// (times g^{1/2}) and sampled at the nodes. Requires 2n < L. Throws ArgumentError.
WeylResidual weyl_residual(const ProfileDescriptor& p, const FieldDescriptor& field, double k, double n,
                           const Grid& grid);

// ---------------------------------------------------------------------------
// Hardy-type inequality
// ---------------------------------------------------------------------------

/// Positive longitudinal weight h(x) and its second derivative.
struct HardyWeight {
  std::function<double(double)> h;
  std::function<double(double)> h2;

  static HardyWeight unit();
  /// h = 1 + height * exp(-x^2 / width^2).
  static HardyWeight plateau(double height, double width);
  /// Piecewise-linear interpolation of sampled h and h'' (constant extension beyond the ends).
  static HardyWeight sampled(std::vector<double> xs, std::vector<double> h, std::vector<double> h2);
};

enum class HardyThreshold {
  discrete,  ///< subtract the lowest transverse eigenvalue of the grid, (4/hy^2) sin^2(hy/2)
  continuum  ///< subtract 1
};

struct HardyResult {
  double C_est = 0.0;
  double threshold = 0.0;
  bool converged = false;
};

/// Smallest eigenvalue of
///   int (h^2 |(i grad + A) u|^2 - threshold h^2 |u|^2 - h'' |u|^2)  against  int h^2/(1+x^2) |u|^2
/// on the straight strip truncated to [-L, L]. Throws ArgumentError for a non-positive weight.
HardyResult hardy_estimate(const FieldDescriptor& field, const HardyWeight& weight, const Grid& grid,
                           const EigenOptions& opts, HardyThreshold threshold = HardyThreshold::discrete);

// ---------------------------------------------------------------------------
// Correction functionals of the absence proof
// ---------------------------------------------------------------------------

enum class GfDenominator { sup, inf };

struct GfOptions {
  GfDenominator denominator = GfDenominator::sup;
  /// Step of the central differences for (G1)' and (G1)''.
  double h_fd = 1e-4;
};

struct GfReport {
  std::vector<double> xs;
  std::vector<double> G1;
  std::vector<double> G1_d1;
  std::vector<double> G1_d2;
  std::vector<double> G2;
  double g_norm = 1.0;  ///< the value used for ||g||
  double C = 0.0;       ///< smallest C with (1+x^2) max(|G1|,|G1'|,|G1''|,|G2|) <= C alpha on xs
};

/// Pointwise G1, G2 as printed, with ||g|| = 1 + max f (or 1 + min f for the inf variant):
///   G1 = (1+2pi)/(2||g||)|f'| + pi|f'|/||g|| (1 + ||a1|| + pi|f'|/||g||) + 2f - f^2(3+2f)/||g||^2 + ||a2|| f/||g||
///   G2 = |f'|/(2||g||) (1 + 2 pi ||a1|| + |f'|/(2||g||)) + ||a2|| f/||g||
GfReport gf_bounds(const ProfileDescriptor& p, double sup_a1, double sup_a2, std::span<const double> xs,
                   const GfOptions& opts = {});

// ---------------------------------------------------------------------------
// Amplitude sweep
// ---------------------------------------------------------------------------

struct SweepOptions {
  GridSpec grid{40.0, 799, 31};
  EigenOptions eigen{};
  int bisection_steps = 8;
};

struct SweepPoint {
  double alpha = 0.0;
  double lambda_magnetic = 0.0;
  double lambda_nonmagnetic = 0.0;
  bool flag_magnetic = false;
  bool flag_nonmagnetic = false;
  bool converged = false;
  bool from_bisection = false;
};

struct SweepResult {
  std::vector<SweepPoint> points;  ///< ascending alpha, bisection points included
  double delta = 0.0;
  std::optional<std::pair<double, double>> alpha_critical;
  /// False if the magnetic flag turns off again after turning on (reported, not an error).
  bool monotone = true;

  std::vector<double> alphas() const;
};

/// Ground eigenvalue with and without the field for every amplitude. The template
/// supplies family, center and width; its amplitude is ignored.
SweepResult alpha_sweep(const ProfileDescriptor& family_template, const FieldDescriptor& field,
                        std::span<const double> alphas, const SweepOptions& opts);

/// One ground-state solve; `field` may be the zero field.
SpectrumResult ground_state(const ProfileDescriptor& p, const FieldDescriptor& field, const Grid& grid,
                            const EigenOptions& opts);

}  // namespace magwave
