#include <doctest.h>

#include <cmath>
#include <numbers>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>
#include <boost/math/tools/roots.hpp>

#include "magwave/analysis.hpp"
#include "magwave/errors.hpp"

using namespace magwave;
using boost::math::quadrature::gauss_kronrod;

namespace {

constexpr double pi = std::numbers::pi;
const FieldDescriptor kDisk{FieldFamily::smooth_disk_bump, 1.0, 0.0, pi / 2, 1.0};
const ProfileDescriptor kLor{ProfileFamily::lorentzian, 0.1, 0.0, 1.0};

// Even ground state of the well -V0 on |x| < a: q tan(q a) = sqrt(V0 - q^2), E = q^2 - V0.
double square_well_ground(double V0, double a) {
  auto fn = [&](double q) { return q * std::tan(q * a) - std::sqrt(V0 - q * q); };
  const double hi = std::min(std::sqrt(V0), pi / (2 * a)) * (1 - 1e-12);
  auto [lo, up] = boost::math::tools::bisect(fn, 1e-9, hi, boost::math::tools::eps_tolerance<double>(50));
  const double q = 0.5 * (lo + up);
  return q * q - V0;
}

EffectivePotential1D square_well(double V0, double a) {
  EffectivePotential1D V;
  const double eps = 1e-9;
  V.xs = {-a - eps, -a, a, a + eps};
  V.V = {0.0, -V0, -V0, 0.0};
  return V;
}

double bump(double t) {
  const double p = (t - 1) * (2 - t);
  return p > 0 ? std::exp(-1 / p) : 0.0;
}

}  // namespace

TEST_CASE("effective potential closed form") {
  const ProfileDescriptor p{ProfileFamily::gaussian_bump, 0.3, 0.0, 1.0};
  const std::vector<double> xs{-1.0, 0.0, 0.4};
  const EffectivePotential1D V = effective_potential(p, xs);
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const ProfileJet j = eval_profile(p, xs[i]);
    const double g = 1 + j.f;
    CHECK(V.V[i] == doctest::Approx(j.d1 * j.d1 * (4 * pi * pi + 3) / (12 * g * g) - (2 * j.f + j.f * j.f) / (g * g)));
  }
  CHECK(std::ranges::all_of(effective_potential({}, xs).V, [](double v) { return v == 0.0; }));
}

TEST_CASE("square well ground state") {
  const double E = square_well_ground(1.0, 1.0);
  CHECK(E == doctest::Approx(-0.453753165860328).epsilon(1e-12));
  const std::vector<double> ev = solve_1d(square_well(1.0, 1.0), 20.0, 8000);
  REQUIRE(!ev.empty());
  CHECK(ev.front() == doctest::Approx(E).epsilon(2e-3));
  // a sqrt(V0) = 1 < pi/2: no odd bound state.
  CHECK(ev.size() == 1);
}

TEST_CASE("sturm counts are consistent") {
  const Operator1D op = build_operator_1d(square_well(4.0, 1.5), 10.0, 2000);
  CHECK(op.count_below(-10.0) == 0);
  const double e0 = op.eigenvalue(0), e1 = op.eigenvalue(1);
  CHECK(e0 < e1);
  CHECK(op.count_below(0.5 * (e0 + e1)) == 1);
  CHECK(op.count_below(e1 + 1e-6) == 2);
}

TEST_CASE("one-dimensional reduction") {
  CHECK(solve_1d(effective_potential({}, default_profile_samples({})), 50.0, 2000).empty());
  const std::vector<double> ev = solve_1d(effective_potential(kLor, default_profile_samples(kLor)), 80.0, 8000);
  REQUIRE(ev.size() >= 1);
  CHECK(ev.front() < -kNegativeCutoff1D);
  const EffectivePotential1D V = effective_potential(kLor, default_profile_samples(kLor));
  CHECK_THROWS_AS(solve_1d(V, 0.0, 1000), ArgumentError);
  CHECK_THROWS_AS(solve_1d(V, 10.0, 50), ArgumentError);
}

TEST_CASE("variational cross-check") {
  const Grid grid = build_grid(20.0, 399, 31);
  const CrossCheck c = variational_crosscheck(kLor, grid, EigenOptions{.k = 1}, 80.0, 8000);
  REQUIRE(c.converged);
  CHECK(c.lambda2d < 1.0);
  CHECK(c.lambda2d <= c.one_plus_lambda1d + 1e-3);
  const ProfileDescriptor steep{ProfileFamily::gaussian_bump, 2.0, 0.0, 0.1};
  CHECK_THROWS_AS(variational_crosscheck(steep, grid, {}, 80.0, 8000), ArgumentError);
}

TEST_CASE("bump normalization and derivative integrals") {
  boost::math::quadrature::tanh_sinh<double> ts;
  const double c = 1.0 / std::sqrt(ts.integrate([](double t) { return bump(t) * bump(t); }, 1.0, 2.0));
  CHECK(kWeylBumpConstant == doctest::Approx(c).epsilon(1e-11));
  auto sq = [](auto fn) { return gauss_kronrod<double, 61>::integrate(fn, 1.0, 2.0, 20, 1e-13); };
  CHECK(sq([](double t) { return std::pow(weyl_bump(t).h, 2); }) == doctest::Approx(1.0).epsilon(1e-10));
  // Derivatives of the jet against five-point differences of h.
  for (double t : {1.2, 1.5, 1.77}) {
    const double s = 1e-4;
    auto h = [](double u) { return weyl_bump(u).h; };
    const double d1 = (-h(t + 2 * s) + 8 * h(t + s) - 8 * h(t - s) + h(t - 2 * s)) / (12 * s);
    const double d2 = (-h(t + 2 * s) + 16 * h(t + s) - 30 * h(t) + 16 * h(t - s) - h(t - 2 * s)) / (12 * s * s);
    CHECK(weyl_bump(t).d1 == doctest::Approx(d1).epsilon(1e-6));
    CHECK(weyl_bump(t).d2 == doctest::Approx(d2).epsilon(1e-5));
  }
  CHECK(sq([](double t) { return std::pow(weyl_bump(t).d1, 2); }) == doctest::Approx(22.5747164838098).epsilon(1e-9));
  CHECK(sq([](double t) { return std::pow(weyl_bump(t).d2, 2); }) == doctest::Approx(1472.3588729863).epsilon(1e-9));
  CHECK(weyl_bump(0.5).h == 0.0);
  CHECK(weyl_bump(2.5).d2 == 0.0);
}

TEST_CASE("flat-strip quasi-mode residual") {
  const Grid grid = build_grid(40.0, 1599, 31);
  const double n = 16.0;
  const WeylResidual w0 = weyl_residual({}, {}, 0.0, n, grid);
  CHECK(w0.norm_sq == doctest::Approx(pi / 2).epsilon(1e-6));
  CHECK(w0.residual_sq * std::pow(n, 4) == doctest::Approx(1472.3588729863).epsilon(0.02));
  const WeylResidual w1 = weyl_residual({}, {}, 1.0, n, grid);
  const double expected = 4.0 * 22.5747164838098 / (n * n) + 1472.3588729863 / std::pow(n, 4);
  CHECK(w1.residual_sq == doctest::Approx(expected).epsilon(0.02));
  CHECK_THROWS_AS(weyl_residual({}, {}, 0.0, 25.0, grid), ArgumentError);
  CHECK_THROWS_AS(weyl_residual({}, {}, 0.0, 0.0, grid), ArgumentError);
}

TEST_CASE("quasi-mode residual decays on a deformed magnetic strip") {
  const Grid grid = build_grid(40.0, 799, 15);
  double prev = INFINITY;
  for (double n : {4.0, 8.0, 16.0}) {
    const WeylResidual w = weyl_residual(kLor, kDisk, 1.0, n, grid);
    CHECK(w.residual_sq < prev);
    prev = w.residual_sq;
  }
}

TEST_CASE("Hardy weights") {
  const HardyWeight p = HardyWeight::plateau(0.5, 2.0);
  const double x = 0.7, s = 1e-3;
  const double fd = (p.h(x + s) - 2 * p.h(x) + p.h(x - s)) / (s * s);
  CHECK(p.h2(x) == doctest::Approx(fd).epsilon(1e-5));
  CHECK_THROWS_AS(HardyWeight::plateau(-1.5, 1.0), ArgumentError);
  const HardyWeight smp = HardyWeight::sampled({0.0, 1.0}, {1.0, 3.0}, {0.0, 0.0});
  CHECK(smp.h(0.25) == doctest::Approx(1.5));
  CHECK(smp.h(-4.0) == 1.0);
  CHECK_THROWS_AS(HardyWeight::sampled({0.0, 1.0}, {1.0, -3.0}, {0.0, 0.0}), ArgumentError);
  CHECK_THROWS_AS(HardyWeight::sampled({1.0, 0.0}, {1.0, 3.0}, {0.0, 0.0}), ArgumentError);
}

TEST_CASE("Hardy estimate") {
  double prev = INFINITY;
  for (auto [L, Nx] : {std::pair{5.0, 49}, {10.0, 99}, {20.0, 199}}) {
    const HardyResult r = hardy_estimate({}, HardyWeight::unit(), build_grid(L, Nx, 11), {});
    REQUIRE(r.converged);
    CHECK(r.C_est > 0.0);
    CHECK(r.C_est < prev);
    prev = r.C_est;
  }
  const Grid grid = build_grid(20.0, 199, 11);
  const HardyResult b = hardy_estimate(kDisk, HardyWeight::unit(), grid, {});
  CHECK(b.C_est > prev);
  const HardyResult cont = hardy_estimate({}, HardyWeight::unit(), grid, {}, HardyThreshold::continuum);
  CHECK(cont.threshold == 1.0);
  CHECK(cont.C_est < prev);
  const HardyWeight bad{[](double x) { return x; }, [](double) { return 0.0; }};
  CHECK_THROWS_AS(hardy_estimate({}, bad, grid, {}), ArgumentError);
}

TEST_CASE("correction functionals") {
  std::vector<double> xs;
  for (int i = 0; i < 400; ++i) xs.push_back(-20.0 + 40.0 * i / 399);
  const GfReport z = gf_bounds({}, 0.0, 0.0, xs);
  for (std::size_t i = 0; i < xs.size(); ++i)
    CHECK((z.G1[i] == 0.0 && z.G1_d1[i] == 0.0 && z.G1_d2[i] == 0.0 && z.G2[i] == 0.0));
  CHECK(z.C == 0.0);

  const double a1 = 0.3, a2 = 0.7;
  const GfReport r = gf_bounds(kLor, a1, a2, xs);
  double fmax = 0.0;
  for (double x : xs) fmax = std::max(fmax, eval_profile(kLor, x).f);
  CHECK(r.g_norm == 1.0 + fmax);
  const std::size_t i = 215;
  const ProfileJet j = eval_profile(kLor, xs[i]);
  const double G = r.g_norm, af = std::abs(j.d1), f = j.f;
  const double G1 = (1 + 2 * pi) / (2 * G) * af + pi * af / G * (1 + a1 + pi * af / G) + 2 * f -
                    f * f * (3 + 2 * f) / (G * G) + a2 * f / G;
  const double G2 = af / (2 * G) * (1 + 2 * pi * a1 + af / (2 * G)) + a2 * f / G;
  CHECK(r.G1[i] == doctest::Approx(G1));
  CHECK(r.G2[i] == doctest::Approx(G2));
  double worst = 0.0;
  for (std::size_t k = 0; k < xs.size(); ++k)
    worst = std::max(worst, (1 + xs[k] * xs[k]) *
                                std::max({std::abs(r.G1[k]), std::abs(r.G1_d1[k]), std::abs(r.G1_d2[k]), std::abs(r.G2[k])}));
  CHECK(r.C == doctest::Approx(worst / 0.1));
  const GfReport inf = gf_bounds(kLor, a1, a2, xs, GfOptions{GfDenominator::inf});
  CHECK(inf.g_norm == doctest::Approx(1.0 + eval_profile(kLor, 20.0).f));
  CHECK_THROWS_AS(gf_bounds(kLor, a1, a2, {}), ArgumentError);
}

TEST_CASE("amplitude sweep") {
  const std::vector<double> none;
  CHECK_THROWS_AS(alpha_sweep(kLor, kDisk, none, {}), ArgumentError);
  const std::vector<double> unordered{0.2, 0.1};
  CHECK_THROWS_AS(alpha_sweep(kLor, kDisk, unordered, {}), ArgumentError);
  const std::vector<double> negative{-0.1, 0.1};
  CHECK_THROWS_AS(alpha_sweep(kLor, kDisk, negative, {}), ArgumentError);

  SweepOptions opts;
  opts.grid = {40.0, 399, 15};
  opts.bisection_steps = 2;
  const FieldDescriptor strong{FieldFamily::smooth_disk_bump, 3.0, 0.0, pi / 2, 1.0};
  const std::vector<double> alphas{0.05, 0.1, 0.2};
  const SweepResult s = alpha_sweep(kLor, strong, alphas, opts);
  CHECK(s.delta == doctest::Approx(default_delta(40.0, 1e-9)));
  for (const SweepPoint& pt : s.points) {
    CHECK(pt.converged);
    CHECK(pt.flag_nonmagnetic);
    CHECK(pt.lambda_nonmagnetic <= pt.lambda_magnetic + 1e-9);
  }
  CHECK(std::ranges::is_sorted(s.alphas()));
  if (s.alpha_critical) {
    const auto [lo, hi] = *s.alpha_critical;
    CHECK(lo < hi);
    int bisected = 0;
    for (const SweepPoint& pt : s.points) {
      if (pt.alpha == lo) CHECK_FALSE(pt.flag_magnetic);
      if (pt.alpha == hi) CHECK(pt.flag_magnetic);
      bisected += pt.from_bisection;
    }
    CHECK(bisected == 2);
  }
}
