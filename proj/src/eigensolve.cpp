#include "magwave/eigensolve.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <random>

#include <Eigen/SparseCholesky>

#include "magwave/errors.hpp"

namespace magwave {

double default_delta(double L, double tol) {
  const double trunc = L > 0.0 ? 2.0 * std::pow(std::numbers::pi / (2.0 * L), 2) : 0.0;
  return std::max(trunc, 10.0 * tol);
}

namespace {

using Vector = Eigen::VectorXcd;
using Dense = Eigen::MatrixXcd;
using Factorization = Eigen::SimplicialLDLT<SparseMatrix, Eigen::Lower, Eigen::AMDOrdering<int>>;

Eigen::VectorXd diagonal_of(const SparseMatrix& mass) {
  Eigen::VectorXd d = Eigen::VectorXd::Zero(mass.rows());
  for (Eigen::Index col = 0; col < mass.outerSize(); ++col) {
    for (SparseMatrix::InnerIterator it(mass, col); it; ++it) {
      if (it.row() != it.col()) {
        if (it.value() != Complex{}) throw ArgumentError("smallest_eigenpairs: mass matrix must be diagonal");
        continue;
      }
      if (it.value().imag() != 0.0 || !(it.value().real() > 0.0))
        throw ArgumentError("smallest_eigenpairs: mass diagonal must be positive");
      d[col] = it.value().real();
    }
  }
  for (Eigen::Index i = 0; i < d.size(); ++i)
    if (!(d[i] > 0.0)) throw ArgumentError("smallest_eigenpairs: mass diagonal must be positive");
  return d;
}

struct RitzSet {
  std::vector<double> values;
  Dense vectors;  // unit columns
  std::vector<double> residuals;
};

// Rayleigh quotients and relative residuals of the given unit vectors.
RitzSet refine(const SparseMatrix& A, const Dense& X) {
  RitzSet out;
  out.vectors = X;
  const Dense AX = A * X;
  for (Eigen::Index c = 0; c < X.cols(); ++c) {
    const double lambda = X.col(c).dot(AX.col(c)).real();
    const double scale = std::max(std::abs(lambda), std::numeric_limits<double>::min());
    out.values.push_back(lambda);
    out.residuals.push_back((AX.col(c) - lambda * X.col(c)).norm() / scale);
  }
  return out;
}

class ShiftInvert {
 public:
  ShiftInvert(const SparseMatrix& A, double sigma) : A_(A) { factor(sigma); }

  // Lowers sigma until A - sigma I has no negative pivots (Sylvester inertia).
  void factor(double sigma) {
    double step = std::max(1e-3, 0.05 * std::abs(sigma));
    for (int attempt = 0; attempt < 60; ++attempt) {
      SparseMatrix shifted = A_;
      for (Eigen::Index i = 0; i < shifted.rows(); ++i) shifted.coeffRef(i, i) -= sigma;
      solver_.compute(shifted);
      if (solver_.info() == Eigen::Success && (solver_.vectorD().real().array() > 0.0).all()) {
        sigma_ = sigma;
        return;
      }
      sigma -= step;
      step *= 2.0;
    }
    throw ArgumentError("smallest_eigenpairs: could not find a shift below the spectrum");
  }

  double sigma() const { return sigma_; }
  Vector apply(const Vector& x) const { return solver_.solve(x); }

 private:
  const SparseMatrix& A_;
  Factorization solver_;
  double sigma_ = 0.0;
};

struct LanczosOutcome {
  RitzSet ritz;
  int cycles = 0;
  bool converged = false;
};

// Thick-restart Lanczos for the largest eigenvalues of the Hermitian operator op.apply.
LanczosOutcome thick_restart_lanczos(const SparseMatrix& A, const ShiftInvert& op, int k, int m, int max_cycles,
                                     double tol, std::mt19937_64& rng) {
  const Eigen::Index n = A.rows();
  Dense V = Dense::Zero(n, m + 1);
  Dense H = Dense::Zero(m, m);

  std::normal_distribution<double> normal;
  auto random_vector = [&] {
    Vector v(n);
    for (Eigen::Index i = 0; i < n; ++i) v[i] = Complex(normal(rng), normal(rng));
    return v;
  };

  V.col(0) = random_vector().normalized();
  int kept = 0;
  const int keep = std::min(k + (m - k) / 2, m - 1);
  LanczosOutcome outcome;

  for (int cycle = 1; cycle <= max_cycles; ++cycle) {
    double beta = 0.0;
    for (int j = kept; j < m; ++j) {
      Vector w = op.apply(V.col(j));
      Vector h = V.leftCols(j + 1).adjoint() * w;
      w -= V.leftCols(j + 1) * h;
      const Vector h2 = V.leftCols(j + 1).adjoint() * w;
      w -= V.leftCols(j + 1) * h2;
      h += h2;
      H.col(j).head(j + 1) = h;
      beta = w.norm();
      if (beta <= 1e-13 * h.norm()) {
        // Invariant subspace: continue with a fresh orthogonal direction, uncoupled.
        Vector r = random_vector();
        for (int pass = 0; pass < 2; ++pass) r -= V.leftCols(j + 1) * (V.leftCols(j + 1).adjoint() * r);
        w = r;
        beta = 0.0;
        V.col(j + 1) = w.normalized();
      } else {
        V.col(j + 1) = w / beta;
      }
      if (j + 1 < m) H(j + 1, j) = beta;
    }

    const Dense T = 0.5 * (H + H.adjoint());
    Eigen::SelfAdjointEigenSolver<Dense> eig(T);
    // Descending order of the shift-inverted values = ascending lambda.
    const Eigen::VectorXd mu = eig.eigenvalues().reverse();
    const Dense Y = eig.eigenvectors().rowwise().reverse();

    const Dense X = V.leftCols(m) * Y.leftCols(k);
    Dense Xn = X;
    for (Eigen::Index c = 0; c < Xn.cols(); ++c) Xn.col(c).normalize();
    outcome.ritz = refine(A, Xn);
    outcome.cycles = cycle;
    const bool done = std::ranges::all_of(outcome.ritz.residuals, [&](double r) { return r <= tol; });
    if (done) {
      outcome.converged = true;
      return outcome;
    }

    // Restart: keep the leading Ritz vectors and the current residual direction.
    kept = keep;
    const Dense Vk = V.leftCols(m) * Y.leftCols(kept);
    const Vector next = V.col(m);
    V.leftCols(kept) = Vk;
    V.col(kept) = next;
    H.setZero();
    for (int i = 0; i < kept; ++i) {
      H(i, i) = mu[i];
      H(kept, i) = beta * Y(m - 1, i);
    }
  }
  return outcome;
}

SpectrumResult finish(const RitzSet& ritz, const Eigen::VectorXd& inv_sqrt_d, int k, double delta) {
  std::vector<int> order(ritz.values.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = static_cast<int>(i);
  std::ranges::stable_sort(order, [&](int a, int b) { return ritz.values[a] < ritz.values[b]; });
  SpectrumResult s;
  s.delta = delta;
  s.eigenvectors.resize(ritz.vectors.rows(), k);
  for (int c = 0; c < k; ++c) {
    const int src = order[c];
    s.eigenvalues.push_back(ritz.values[src]);
    s.residual_norms.push_back(ritz.residuals[src]);
    s.below_threshold.push_back(ritz.values[src] < 1.0 - delta);
    s.eigenvectors.col(c) = inv_sqrt_d.asDiagonal() * ritz.vectors.col(src);
  }
  return s;
}

}  // namespace

SpectrumResult smallest_eigenpairs(const SparseMatrix& M, const SparseMatrix& mass, const EigenOptions& opts) {
  if (opts.k < 1) throw ArgumentError("smallest_eigenpairs: k must be at least 1");
  if (!(opts.tol > 0.0)) throw ArgumentError("smallest_eigenpairs: tol must be positive");
  if (M.rows() != M.cols() || mass.rows() != mass.cols() || M.rows() != mass.rows())
    throw ArgumentError("smallest_eigenpairs: dimension mismatch");
  const Eigen::Index n = M.rows();
  if (opts.k > n) throw ArgumentError("smallest_eigenpairs: k exceeds the problem size");

  const Eigen::VectorXd d = diagonal_of(mass);
  const Eigen::VectorXd inv_sqrt_d = d.array().rsqrt();
  SparseMatrix A = inv_sqrt_d.asDiagonal() * M * inv_sqrt_d.asDiagonal();
  A.makeCompressed();
  const double delta = opts.delta >= 0.0 ? opts.delta : 10.0 * opts.tol;

  if (n <= opts.dense_threshold) {
    Eigen::SelfAdjointEigenSolver<Dense> eig{Dense(A)};
    RitzSet ritz = refine(A, eig.eigenvectors().leftCols(opts.k));
    SpectrumResult s = finish(ritz, inv_sqrt_d, opts.k, delta);
    s.converged = std::ranges::all_of(s.residual_norms, [&](double r) { return r <= opts.tol; });
    s.shift = 0.0;
    return s;
  }

  const int m = static_cast<int>(
      std::min<Eigen::Index>(opts.krylov_dim > 0 ? opts.krylov_dim : std::max(2 * opts.k + 30, 60), n - 1));
  if (m <= opts.k) throw ArgumentError("smallest_eigenpairs: Krylov dimension must exceed k");
  std::mt19937_64 rng(opts.seed);

  double sigma = opts.shift;
  if (std::isnan(sigma)) {
    // Pilot: one Lanczos cycle at sigma = 0 gives an upper estimate of lambda_1.
    ShiftInvert pilot_op(A, 0.0);
    const LanczosOutcome pilot = thick_restart_lanczos(A, pilot_op, 1, std::min(m, 40), 1, opts.tol, rng);
    const double theta = pilot.ritz.values.front();
    const double spread = std::max(std::abs(theta - pilot_op.sigma()), 1e-12);
    sigma = theta - std::max(0.02 * spread, 4.0 * pilot.ritz.residuals.front() * std::abs(theta));
    sigma = std::max(sigma, pilot_op.sigma());
  }
  ShiftInvert op(A, sigma);
  const LanczosOutcome run = thick_restart_lanczos(A, op, opts.k, m, opts.max_iter, opts.tol, rng);
  SpectrumResult s = finish(run.ritz, inv_sqrt_d, opts.k, delta);
  s.iterations = run.cycles;
  s.converged = run.converged;
  s.shift = op.sigma();
  return s;
}

SpectrumResult smallest_eigenpairs(const OperatorMatrix& M, const OperatorMatrix& mass, const EigenOptions& opts) {
  EigenOptions o = opts;
  if (o.delta < 0.0) o.delta = default_delta(M.grid.L, o.tol);
  return smallest_eigenpairs(M.matrix, mass.matrix, o);
}

ThresholdCount count_below_threshold(const SpectrumResult& s, double delta) {
  if (delta < 0.0) throw ArgumentError("count_below_threshold: delta must be non-negative");
  ThresholdCount out;
  for (double lambda : s.eigenvalues)
    if (lambda < 1.0 - delta) ++out.count;
  if (!s.eigenvalues.empty()) out.margin = 1.0 - s.eigenvalues.front();
  return out;
}

ConvergenceReport convergence_study(const ProfileDescriptor& p, const FieldDescriptor& field,
                                    const std::vector<GridSpec>& grids, const EigenOptions& opts) {
  std::map<double, std::vector<GridSpec>> by_L;
  for (const GridSpec& g : grids) by_L[g.L].push_back(g);
  if (by_L.size() < 2) throw ArgumentError("convergence_study: need at least two values of L");
  double ladder_L = -1.0;
  for (const auto& [L, list] : by_L)
    if (list.size() >= 3) ladder_L = L;
  if (ladder_L < 0.0) throw ArgumentError("convergence_study: need three grids at one L");

  ConvergenceReport report;
  report.ladder_L = ladder_L;
  const std::size_t k = static_cast<std::size_t>(opts.k);

  auto solve = [&](const GridSpec& spec) {
    const Grid grid = build_grid(spec.L, spec.Nx, spec.Ny);
    const GaugeSamples gs = pullback_gauge(field, p, grid);
    const SpectrumResult s = smallest_eigenpairs(assemble_form(p, gs, grid), mass_matrix(grid), opts);
    report.runs.push_back({spec, s.eigenvalues, s.converged});
    return s.eigenvalues;
  };

  for (auto& [L, list] : by_L) {
    std::ranges::sort(list, [](const GridSpec& a, const GridSpec& b) { return a.Nx < b.Nx; });
    std::vector<std::vector<double>> values;
    for (const GridSpec& spec : list) values.push_back(solve(spec));
    std::vector<double> best = values.back();
    if (list.size() >= 3) {
      const std::size_t n = list.size();
      const double h1 = 2.0 * L / (list[n - 2].Nx + 1);
      const double h2 = 2.0 * L / (list[n - 1].Nx + 1);
      const double hprev = 2.0 * L / (list[n - 3].Nx + 1);
      const double ratio = h1 / h2;
      if (std::abs(hprev / h1 - ratio) > 1e-6 * ratio)
        throw ArgumentError("convergence_study: refinement ratio must be constant");
      const double factor = ratio * ratio - 1.0;
      std::vector<double> order(k);
      std::vector<double> herr(k);
      for (std::size_t e = 0; e < k; ++e) {
        const double l1 = values[n - 3][e];
        const double l2 = values[n - 2][e];
        const double l3 = values[n - 1][e];
        order[e] = std::log(std::abs((l1 - l2) / (l2 - l3))) / std::log(ratio);
        best[e] = l3 + (l3 - l2) / factor;
        herr[e] = std::abs(best[e] - l3);
      }
      if (L == ladder_L) {
        report.measured_order = order;
        report.h_error = herr;
      }
    }
    report.L_values.push_back(L);
    report.extrapolated.push_back(best);
  }

  const std::size_t nl = report.L_values.size();
  for (std::size_t e = 0; e < k; ++e) {
    const double sens = std::abs(report.extrapolated[nl - 2][e] - report.extrapolated[nl - 1][e]);
    report.L_sensitivity.push_back(sens);
    report.discrete.push_back(sens < report.h_error[e]);
  }
  return report;
}

}  // namespace magwave
