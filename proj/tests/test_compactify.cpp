#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "ahvol/compactify.hpp"
#include "ahvol/error.hpp"
#include "ahvol/specfun.hpp"

using namespace ahvol;
using namespace ahvol::compactify;
using geometry::linspace;
using geometry::make_warped_metric;
using geometry::WarpSpec;
using doctest::Approx;

namespace {
geometry::WarpedMetric hyp(int n) { return make_warped_metric(n, WarpSpec::hyperbolic()); }
Compactification type_i(int n, double g) { return build_compactification(CompactKind::type_i, n, g, hyp(n)); }
double max_abs(const std::vector<double>& v) {
  double m = 0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}
const LogFactor kOne = [](double) { return Jet<double>{1.0, 0.0, 0.0}; };
}  // namespace

TEST_CASE("type II distance function at n = 3, gamma = 1/2") {
  const auto c = build_compactification(CompactKind::type_ii, 3, 0.5, hyp(3));
  CHECK(c.boundary_distance(1e-4) == Approx(std::log(4.0)).epsilon(1e-8));
  for (double t : {0.5, 3.0, 12.0})
    CHECK(c.boundary_distance(t) == Approx(t + 2 * std::log1p(std::exp(-t))).epsilon(1e-12));
}

TEST_CASE("hemisphere defining function") {
  const auto c = build_compactification(CompactKind::hemisphere, 3, 0.5, hyp(3));
  CHECK(c.m() == 0.0);
  CHECK(c.rho(1e-6).value == Approx(1.0).epsilon(1e-12));
  for (double t : {0.2, 1.0, 5.0, 25.0}) {
    CHECK(c.rho(t).value * std::cosh(t) == Approx(1.0).epsilon(1e-15));
    CHECK(std::exp(c.boundary_distance(t)) / 2 == Approx(std::cosh(t)).epsilon(1e-14));
  }
}

TEST_CASE("type I and type II coincide on the model") {
  for (double g : {0.25, 0.5, 0.75}) {
    const auto a = type_i(3, g);
    const auto b = build_compactification(CompactKind::type_ii, 3, g, hyp(3));
    for (double t : linspace(0.1, 20.0, 100)) CHECK(std::abs(a.rho(t).value - b.rho(t).value) <= 1e-9);
  }
}

TEST_CASE("defining function behaves like 2 e^{-t}") {
  for (double g : {0.25, 0.75}) {
    const auto c = type_i(4, g);
    CHECK(c.rho(30.0).value * std::exp(30.0) / 2 == Approx(1.0).epsilon(1e-5));
    CHECK(c.rho(29.0).value > c.rho(30.0).value);
  }
}

TEST_CASE("weighted scalar curvature vanishes for the adapted compactification") {
  const auto grid = linspace(0.5, 20.0, 60);
  for (int n : {2, 3, 4, 5})
    for (double g : {0.1, 0.25, 0.5, 0.75, 0.9}) {
      const auto J = weighted_J_detailed(type_i(n, g), hyp(n), grid);
      CHECK(J.cross_checked);
      CHECK(max_abs(J.values) <= 1e-8);
      CHECK(J.max_deviation <= 1e-7);
    }
}

TEST_CASE("type II on the unperturbed member of the perturbed family") {
  const auto metric = make_warped_metric(3, WarpSpec::perturbed(0.0, 3.0));
  const auto c = build_compactification(CompactKind::type_ii, 3, 0.5, metric);
  const auto J = weighted_J_detailed(c, metric, linspace(0.5, 20.0, 40));
  CHECK(J.cross_checked);
  for (double v : J.values) CHECK(v <= 1e-8);
}

TEST_CASE("weighted scalar curvature on a non-Einstein metric uses the definition") {
  const auto metric = make_warped_metric(3, WarpSpec::perturbed(0.05, 3.0));
  const auto c = build_compactification(CompactKind::type_ii, 3, 0.5, metric);
  const auto J = weighted_J_detailed(c, metric, {0.5, 1.0, 2.0});
  CHECK(!J.cross_checked);
  CHECK(J.values == J.definition);
  CHECK(max_abs(J.values) > 1e-6);
}

TEST_CASE("hemisphere curvature") {
  const auto metric = hyp(3);
  const auto c = build_compactification(CompactKind::hemisphere, 3, 0.5, metric);
  for (double J : weighted_J(c, metric, {0.5, 5.0, 20.0})) CHECK(J == Approx(2.0).epsilon(1e-12));
  for (double t : {0.5, 4.0, 15.0}) {
    const auto k = sectional_curvatures(c, metric, t);
    CHECK(k.k_rad == Approx(1.0).epsilon(1e-12));
    CHECK(k.k_tan == Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("weighted Laplacian of the Poisson lift") {
  const auto metric = hyp(3);
  const auto grid = linspace(0.5, 15.0, 60);
  for (double g : {0.25, 0.5, 0.75}) {
    const auto c = type_i(3, g);
    for (int k : {0, 1, 3})
      CHECK(max_abs(apply_weighted_laplacian(c, metric, poisson_lift(c, k), grid, k)) <= 1e-7);
    const QuadProfile one = [](double) { return Jet<quad>{quad(1), quad(0), quad(0)}; };
    CHECK(max_abs(apply_weighted_laplacian(c, metric, one, grid, 0)) <= 1e-8);
  }
}

TEST_CASE("an identity conformal factor leaves the operator unchanged") {
  const auto metric = hyp(3);
  const auto c = type_i(3, 0.5);
  const auto same = rescale(c, [](double) { return Jet<double>{0.0, 0.0, 0.0}; });
  const QuadProfile U = [](double t) {
    const quad e = exp(quad(-t));
    return Jet<quad>{e, -e, e};
  };
  const auto grid = linspace(0.5, 10.0, 20);
  CHECK(apply_weighted_laplacian(c, metric, U, grid, 2) == apply_weighted_laplacian(same, metric, U, grid, 2));
}

TEST_CASE("mean curvature limit") {
  const auto metric = hyp(3);
  const auto grid = linspace(1.0, 30.0, 30);
  const auto a = mean_curvature_weighted(type_i(3, 0.5), metric, grid);
  CHECK(a.limit == Approx(3.0).epsilon(1e-8));
  CHECK(a.rate == Approx(-1.0).epsilon(0.05));
  const auto b = mean_curvature_weighted(build_compactification(CompactKind::type_ii, 3, 0.5, metric), metric, grid);
  CHECK(b.limit == Approx(3.0).epsilon(1e-8));
  const auto h = build_compactification(CompactKind::hemisphere, 3, 0.5, metric);
  CHECK(std::abs(mean_curvature(h, metric, 25.0)) < 1e-9);
}

TEST_CASE("mean curvature limit and rate across gamma") {
  for (int n : {3, 4})
    for (double g : {0.25, 0.75}) {
      const auto sc = specfun::sphere_constants(n, g);
      const auto mc = mean_curvature_weighted(type_i(n, g), hyp(n), linspace(1.0, 30.0, 30));
      CHECK(mc.limit == Approx(-2 * n * g * sc.q_curv / sc.d_gamma).epsilon(1e-6));
      CHECK(std::abs(mc.rate - std::max(-2 * g, 2 * g - 2)) < 0.1);
    }
}

TEST_CASE("energy") {
  const auto metric = hyp(3);
  const auto c = type_i(3, 0.5);
  const auto e = energy(c, metric, kOne, 30.0);
  CHECK(e.value == Approx(2 * std::numbers::pi * std::numbers::pi).epsilon(1e-10));
  const LogFactor zero = [](double) { return Jet<double>{0.0, 0.0, 0.0}; };
  CHECK(energy(c, metric, zero, 10.0).value == 0.0);
}

TEST_CASE("energy is conformally invariant") {
  const auto metric = hyp(3);
  for (double g : {0.25, 0.5}) {
    const auto c = type_i(3, g);
    const double kappa = 2.0 / (3 - 2 * g);
    const LogFactor trial = [](double t) {
      const double s = 1.0 / std::cosh(t / 2), th = std::tanh(t / 2);
      return Jet<double>{1.0 - 0.2 * s, 0.1 * s * th, 0.05 * (s * s * s - s * th * th)};
    };
    const auto tilde = rescale(c, [&](double t) {
      const auto u = trial(t);
      const double l1 = u.d1 / u.value;
      return Jet<double>{kappa * std::log(u.value), kappa * l1, kappa * (u.d2 / u.value - l1 * l1)};
    });
    CHECK(std::abs(energy(c, metric, trial, 10.0).value - energy(tilde, metric, kOne, 10.0).value) <= 1e-8);
  }
}

TEST_CASE("boundary volume tends to the sphere volume") {
  for (double g : {0.25, 0.5, 0.75}) {
    const auto v = boundary_volume(type_i(3, g), hyp(3), linspace(1.0, 30.0, 30));
    CHECK(v.limit == Approx(2 * std::numbers::pi * std::numbers::pi).epsilon(1e-8));
    CHECK(std::abs(v.rate - 2 * g) < 0.1);
  }
}

TEST_CASE("extrapolation of a synthetic transient") {
  const auto e = extrapolate([](double t) { return 2.0 + 3.0 * std::exp(-0.7 * t); }, 30.0);
  CHECK(e.limit == Approx(2.0).epsilon(1e-10));
  CHECK(e.rate == Approx(-0.7).epsilon(1e-6));
  CHECK_THROWS_AS(extrapolate([](double) { return 1.0; }, 30.0), IllConditionedFitError);
}

TEST_CASE("diagnostics CSV") {
  const auto csv = diagnostics_csv(type_i(3, 0.5), hyp(3), {1.0, 2.0});
  CHECK(csv.find("t,rho,J_weighted,H_weighted\n") != std::string::npos);
}

TEST_CASE("errors") {
  const auto pert = make_warped_metric(3, WarpSpec::perturbed(0.05, 3.0));
  CHECK_THROWS_AS(build_compactification(CompactKind::type_i, 3, 0.5, pert), DomainError);
  CHECK_THROWS_AS(build_compactification(CompactKind::hemisphere, 3, 0.5, pert), DomainError);
  CHECK_THROWS_AS(build_compactification(CompactKind::type_i, 4, 0.5, hyp(3)), DomainError);
  CHECK_THROWS_AS(build_compactification(CompactKind::rescaled, 3, 0.5, hyp(3)), DomainError);
  const auto c = type_i(3, 0.5);
  CHECK_THROWS_AS(mean_curvature_weighted(c, hyp(3), linspace(1.0, 10.0, 10)), DomainError);
  CHECK_THROWS_AS(energy(c, hyp(3), kOne, 0.5), DomainError);
  CHECK_THROWS_AS(poisson_lift(build_compactification(CompactKind::hemisphere, 3, 0.5, hyp(3)), 0), DomainError);
}
