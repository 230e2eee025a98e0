#pragma once

#include <cstdint>
#include <limits>
#include <vector>

#include <Eigen/Dense>

#include "magwave/assembly.hpp"

namespace magwave {

/// Lowest eigenpairs of M v = lambda mass v.
struct SpectrumResult {
  std::vector<double> eigenvalues;     ///< ascending
  std::vector<double> residual_norms;  ///< relative, see smallest_eigenpairs
  std::vector<bool> below_threshold;   ///< lambda < 1 - delta
  double delta = 0.0;
  int iterations = 0;
  bool converged = false;
  double shift = 0.0;  ///< shift actually used by the shift-invert iteration
  /// Mass-normalized eigenvectors (v^H mass v = 1), one column per eigenvalue.
  Eigen::MatrixXcd eigenvectors;
};

struct EigenOptions {
  int k = 3;
  double tol = 1e-9;
  /// Restart cycles of the Lanczos iteration.
  int max_iter = 200;
  std::uint64_t seed = 20240917;
  /// Shift-invert pole. NaN selects it automatically from a short pilot run.
  double shift = std::numeric_limits<double>::quiet_NaN();
  /// Krylov basis size; 0 picks max(2k + 30, 60).
  int krylov_dim = 0;
  /// Problems up to this size are solved densely.
  int dense_threshold = 400;
  /// Classification margin; negative selects the default max(2 (pi/2L)^2, 10 tol).
  double delta = -1.0;
};

/// Default classification margin for a grid of half-length L.
double default_delta(double L, double tol);

/// Thick-restart Lanczos on (A - sigma)^{-1} with A = mass^{-1/2} M mass^{-1/2}, sparse
/// LDL^H factorization and full reorthogonalization. The shift is kept below the
/// spectrum: the factorization inertia is checked and the shift lowered until D > 0.
///
/// residual_norms[i] = |(A - lambda_i) w_i| / |lambda_i| for unit w_i = mass^{1/2} v_i, i.e.
/// |M v - lambda mass v| measured in the mass^{-1} norm, relative to |lambda|. A pair is
/// converged when this is <= tol. Non-convergence is reported, never thrown.
/// Throws ArgumentError for k < 1, tol <= 0, size mismatch or a non-diagonal mass.
SpectrumResult smallest_eigenpairs(const SparseMatrix& M, const SparseMatrix& mass, const EigenOptions& opts);
SpectrumResult smallest_eigenpairs(const OperatorMatrix& M, const OperatorMatrix& mass, const EigenOptions& opts);

struct ThresholdCount {
  int count = 0;
  double margin = std::numeric_limits<double>::quiet_NaN();  ///< 1 - lambda_1, NaN when empty
};

ThresholdCount count_below_threshold(const SpectrumResult& s, double delta);

struct GridSpec {
  double L = 0.0;
  int Nx = 0;
  int Ny = 0;
};

struct LadderEntry {
  GridSpec grid;
  std::vector<double> eigenvalues;
  bool converged = false;
};

struct ConvergenceReport {
  std::vector<LadderEntry> runs;
  /// Largest L with at least three grids: the h-refinement ladder used for extrapolation.
  double ladder_L = 0.0;
  std::vector<double> measured_order;  ///< per eigenvalue, log((l1-l2)/(l2-l3))/log(r)
  /// Richardson extrapolation (nominal order 2) per L that has >= 3 grids; the best
  /// available eigenvalue for other L.
  std::vector<double> L_values;
  std::vector<std::vector<double>> extrapolated;
  std::vector<double> h_error;        ///< |extrapolated - finest| on the ladder
  std::vector<double> L_sensitivity;  ///< |lambda(L_prev) - lambda(L_max)| for the two largest L
  std::vector<bool> discrete;         ///< L_sensitivity < h_error
};

/// Runs the spectrum on every grid and classifies eigenvalues as discrete (stable in L)
/// or truncation artifacts. Needs >= 3 grids sharing one L with a constant refinement
/// ratio, and >= 2 distinct L. Throws ArgumentError otherwise.
ConvergenceReport convergence_study(const ProfileDescriptor& p, const FieldDescriptor& field,
                                    const std::vector<GridSpec>& grids, const EigenOptions& opts);

}  // namespace magwave
