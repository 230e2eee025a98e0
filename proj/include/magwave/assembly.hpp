#pragma once

#include <complex>
#include <functional>
#include <iosfwd>

#include <Eigen/SparseCore>

#include "magwave/gauge.hpp"
#include "magwave/grid.hpp"
#include "magwave/profiles.hpp"

namespace magwave {

using Complex = std::complex<double>;
using SparseMatrix = Eigen::SparseMatrix<Complex>;

/// Sparse Hermitian matrix on the nodes of `grid` together with what it was built from.
struct OperatorMatrix {
  SparseMatrix matrix;
  Grid grid;
  ProfileDescriptor profile;
  FieldDescriptor field;

  Eigen::Index dimension() const { return matrix.rows(); }
};

struct FormOptions {
  /// Optional positive weight w(x) multiplying the integrand (used by the Hardy estimator).
  std::function<double(double)> x_weight;
};

/// Discrete magnetic form on the straightened strip, M = D1^H W D1 + D2^H W D2 with
///
///   D1 phi = i d_x phi - i (g'/2g) phi - i (g' eta / g) d_eta phi + a1 phi   at x-link midpoints,
///   D2 phi = (i/g) d_eta phi + a2 phi                                        at eta-link midpoints,
///
/// and W = hx*hy (times the optional weight). Derivatives along a link are compact
/// differences, d_eta inside D1 is the average of the central differences at the two
/// link ends, and the potential enters through the link phases of `gs` (covariant
/// differences), so M is gauge covariant. For f = 0 and B = 0 it reduces to hx*hy times
/// the 5-point Dirichlet Laplacian. Hermitian symmetry is exact: each off-diagonal
/// entry is stored as the conjugate of its mirror.
OperatorMatrix assemble_form(const ProfileDescriptor& p, const GaugeSamples& gs, const Grid& grid,
                             const FormOptions& opts = {});

/// Diagonal hx*hy*I: the straightening map is unitary, so the discrete L2 measure is flat.
OperatorMatrix mass_matrix(const Grid& grid);

/// Diagonal matrix with entries hx*hy*weight(x_i).
OperatorMatrix weighted_mass_matrix(const Grid& grid, const std::function<double(double)>& weight);

/// Coordinate triplets "row,col,re,im" (0-based) with a header row, 17 significant digits.
void write_triplets(std::ostream& out, const SparseMatrix& m);

/// Largest absolute column sum.
double norm1(const SparseMatrix& m);

}  // namespace magwave
