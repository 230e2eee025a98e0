#pragma once

#include <cstddef>
#include <numbers>

namespace magwave {

/// Truncated tensor grid on the straightened strip [-L, L] x (0, pi).
///
/// Only interior nodes carry unknowns: x_i = -L + (i+1) hx, i in [0, Nx), and
/// eta_j = (j+1) hy, j in [0, Ny). Dirichlet values on the boundary are implicit
/// zeros. Nodes are numbered row by row: index(i, j) = j*Nx + i.
///
/// Link numbering used by gauge phases:
///   x-link k in [0, Nx] joins node k-1 to node k of a row (k = 0 and k = Nx touch the wall),
///   eta-link m in [0, Ny] joins node m-1 to node m of a column.
struct Grid {
  double L = 0.0;
  int Nx = 0;
  int Ny = 0;
  double hx = 0.0;
  double hy = 0.0;

  std::size_t size() const { return static_cast<std::size_t>(Nx) * static_cast<std::size_t>(Ny); }
  std::size_t index(int i, int j) const { return static_cast<std::size_t>(j) * Nx + i; }
  double x(int i) const { return -L + (i + 1) * hx; }
  double eta(int j) const { return (j + 1) * hy; }
  double x_link(int k) const { return -L + (k + 0.5) * hx; }
  double eta_link(int m) const { return (m + 0.5) * hy; }

  std::size_t x_link_count() const { return static_cast<std::size_t>(Nx + 1) * Ny; }
  std::size_t eta_link_count() const { return static_cast<std::size_t>(Ny + 1) * Nx; }
  std::size_t x_link_index(int k, int j) const { return static_cast<std::size_t>(j) * (Nx + 1) + k; }
  std::size_t eta_link_index(int i, int m) const { return static_cast<std::size_t>(m) * Nx + i; }

  bool operator==(const Grid&) const = default;
};

/// Throws ArgumentError for L <= 0 or Nx, Ny < 3.
Grid build_grid(double L, int Nx, int Ny);

}  // namespace magwave
