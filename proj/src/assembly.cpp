#include "magwave/assembly.hpp"

#include <array>
#include <cmath>
#include <iomanip>
#include <ostream>
#include <vector>

#include "magwave/errors.hpp"

namespace magwave {

Grid build_grid(double L, int Nx, int Ny) {
  if (!(L > 0.0) || !std::isfinite(L)) throw ArgumentError("build_grid: L must be positive");
  if (Nx < 3 || Ny < 3) throw ArgumentError("build_grid: Nx and Ny must be at least 3");
  Grid grid;
  grid.L = L;
  grid.Nx = Nx;
  grid.Ny = Ny;
  grid.hx = 2.0 * L / (Nx + 1);
  grid.hy = std::numbers::pi / (Ny + 1);
  return grid;
}

namespace {

constexpr Complex I{0.0, 1.0};

// Stencil offsets of M: di in [-1, 1], dj in [-2, 2].
constexpr int kOffsets = 15;
constexpr int offset_slot(int di, int dj) { return (di + 1) * 5 + (dj + 2); }

struct Term {
  int i;
  int j;
  Complex c;
};

// One row of D1 or D2: at most six distinct nodes.
class Row {
 public:
  void add(const Grid& grid, int i, int j, Complex c) {
    if (i < 0 || i >= grid.Nx || j < 0 || j >= grid.Ny) return;
    for (int t = 0; t < count_; ++t) {
      if (terms_[t].i == i && terms_[t].j == j) {
        terms_[t].c += c;
        return;
      }
    }
    terms_[count_++] = {i, j, c};
  }
  int size() const { return count_; }
  const Term& operator[](int t) const { return terms_[t]; }

 private:
  std::array<Term, 8> terms_{};
  int count_ = 0;
};

class Accumulator {
 public:
  explicit Accumulator(const Grid& grid) : grid_(grid), acc_(grid.size() * kOffsets, Complex{}) {}

  void add_row(const Row& row, double weight) {
    for (int a = 0; a < row.size(); ++a) {
      const Term& ta = row[a];
      const std::size_t ia = grid_.index(ta.i, ta.j);
      acc_[ia * kOffsets + offset_slot(0, 0)] += weight * std::norm(ta.c);
      for (int b = a + 1; b < row.size(); ++b) {
        const Term& tb = row[b];
        const std::size_t ib = grid_.index(tb.i, tb.j);
        const Complex v = weight * std::conj(ta.c) * tb.c;
        acc_[ia * kOffsets + offset_slot(tb.i - ta.i, tb.j - ta.j)] += v;
        acc_[ib * kOffsets + offset_slot(ta.i - tb.i, ta.j - tb.j)] += std::conj(v);
      }
    }
  }

  SparseMatrix finish() const {
    std::vector<Eigen::Triplet<Complex>> triplets;
    triplets.reserve(acc_.size());
    for (int j = 0; j < grid_.Ny; ++j) {
      for (int i = 0; i < grid_.Nx; ++i) {
        const std::size_t row = grid_.index(i, j);
        for (int di = -1; di <= 1; ++di) {
          for (int dj = -2; dj <= 2; ++dj) {
            const int ci = i + di;
            const int cj = j + dj;
            if (ci < 0 || ci >= grid_.Nx || cj < 0 || cj >= grid_.Ny) continue;
            Complex v = acc_[row * kOffsets + offset_slot(di, dj)];
            if (v == Complex{}) continue;
            if (di == 0 && dj == 0) v = Complex(v.real(), 0.0);
            triplets.emplace_back(static_cast<Eigen::Index>(row), static_cast<Eigen::Index>(grid_.index(ci, cj)), v);
          }
        }
      }
    }
    const auto n = static_cast<Eigen::Index>(grid_.size());
    SparseMatrix m(n, n);
    m.setFromTriplets(triplets.begin(), triplets.end());
    m.makeCompressed();
    return m;
  }

 private:
  const Grid& grid_;
  std::vector<Complex> acc_;
};

}  // namespace

OperatorMatrix assemble_form(const ProfileDescriptor& p, const GaugeSamples& gs, const Grid& grid,
                             const FormOptions& opts) {
  validate(p);
  if (!(gs.grid == grid)) throw ArgumentError("assemble_form: gauge samples live on a different grid");
  if (gs.phase_x.size() != grid.x_link_count() || gs.phase_eta.size() != grid.eta_link_count())
    throw ArgumentError("assemble_form: gauge link arrays do not match the grid");

  const double hx = grid.hx;
  const double hy = grid.hy;
  auto weight_at = [&](double x) {
    const double w = opts.x_weight ? opts.x_weight(x) : 1.0;
    if (!(w > 0.0) || !std::isfinite(w)) throw ArgumentError("assemble_form: weight must be positive");
    return hx * hy * w;
  };
  auto eta_phase = [&](int i, int m) { return gs.phase_eta[grid.eta_link_index(i, m)]; };

  Accumulator acc(grid);

  // Covariant central eta-difference at node (i, j), transported by `transport`:
  // i [e^{-i th(j+1)} phi(j+1) - e^{i th(j)} phi(j-1)] / (2 hy).
  auto add_eta_central = [&](Row& row, int i, int j, Complex scale) {
    if (i < 0 || i >= grid.Nx) return;
    const Complex up = std::polar(1.0, -eta_phase(i, j + 1));
    const Complex down = std::polar(1.0, eta_phase(i, j));
    row.add(grid, i, j + 1, scale * I * up / (2.0 * hy));
    row.add(grid, i, j - 1, -scale * I * down / (2.0 * hy));
  };

  // D1 on x-links.
  for (int k = 0; k <= grid.Nx; ++k) {
    const double xm = grid.x_link(k);
    const ProfileJet jet = eval_profile(p, xm);
    const double g = 1.0 + jet.f;
    const double w = weight_at(xm);
    const int left = k - 1;
    const int right = k;
    for (int j = 0; j < grid.Ny; ++j) {
      const double theta = gs.phase_x[grid.x_link_index(k, j)];
      const Complex to_mid_left = std::polar(1.0, 0.5 * theta);
      const Complex to_mid_right = std::polar(1.0, -0.5 * theta);
      const double slope = jet.d1 * grid.eta(j) / g;
      const double dilation = jet.d1 / (2.0 * g);
      Row row;
      row.add(grid, right, j, I * to_mid_right / hx);
      row.add(grid, left, j, -I * to_mid_left / hx);
      row.add(grid, left, j, -I * dilation * 0.5 * to_mid_left);
      row.add(grid, right, j, -I * dilation * 0.5 * to_mid_right);
      if (slope != 0.0) {
        add_eta_central(row, left, j, -0.5 * slope * to_mid_left);
        add_eta_central(row, right, j, -0.5 * slope * to_mid_right);
      }
      acc.add_row(row, w);
    }
  }

  // D2 on eta-links.
  for (int i = 0; i < grid.Nx; ++i) {
    const double x = grid.x(i);
    const double g = width_function(p, x);
    const double w = weight_at(x);
    for (int m = 0; m <= grid.Ny; ++m) {
      const double theta = eta_phase(i, m);
      Row row;
      row.add(grid, i, m, I * std::polar(1.0, -0.5 * theta) / (g * hy));
      row.add(grid, i, m - 1, -I * std::polar(1.0, 0.5 * theta) / (g * hy));
      acc.add_row(row, w);
    }
  }

  OperatorMatrix out;
  out.matrix = acc.finish();
  out.grid = grid;
  out.profile = p;
  out.field = gs.field;
  return out;
}

OperatorMatrix weighted_mass_matrix(const Grid& grid, const std::function<double(double)>& weight) {
  const auto n = static_cast<Eigen::Index>(grid.size());
  SparseMatrix m(n, n);
  m.reserve(Eigen::VectorXi::Constant(n, 1));
  for (int j = 0; j < grid.Ny; ++j) {
    for (int i = 0; i < grid.Nx; ++i) {
      const double w = weight ? weight(grid.x(i)) : 1.0;
      if (!(w > 0.0) || !std::isfinite(w)) throw ArgumentError("weighted_mass_matrix: weight must be positive");
      const auto idx = static_cast<Eigen::Index>(grid.index(i, j));
      m.insert(idx, idx) = grid.hx * grid.hy * w;
    }
  }
  m.makeCompressed();
  OperatorMatrix out;
  out.matrix = std::move(m);
  out.grid = grid;
  return out;
}

OperatorMatrix mass_matrix(const Grid& grid) { return weighted_mass_matrix(grid, nullptr); }

void write_triplets(std::ostream& out, const SparseMatrix& m) {
  out << "row,col,re,im\n" << std::setprecision(17);
  for (Eigen::Index col = 0; col < m.outerSize(); ++col)
    for (SparseMatrix::InnerIterator it(m, col); it; ++it)
      out << it.row() << ',' << it.col() << ',' << it.value().real() << ',' << it.value().imag() << '\n';
}

double norm1(const SparseMatrix& m) {
  double best = 0.0;
  for (Eigen::Index col = 0; col < m.outerSize(); ++col) {
    double sum = 0.0;
    for (SparseMatrix::InnerIterator it(m, col); it; ++it) sum += std::abs(it.value());
    best = std::max(best, sum);
  }
  return best;
}

}  // namespace magwave
