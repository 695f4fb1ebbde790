#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "ahvol/error.hpp"
#include "ahvol/specfun.hpp"
#include "ahvol/yamabe.hpp"

using namespace ahvol;
using namespace ahvol::yamabe;
using doctest::Approx;

namespace {
double Ysphere(int n, double g) { return specfun::sphere_constants(n, g).yamabe; }
ZonalTrial constant(int n, int kmax, double value) {
  std::vector<double> c(kmax + 1, 0.0);
  c[0] = value;
  return make_trial(n, c);
}
}  // namespace

TEST_CASE("Gegenbauer quadrature weights") {
  double s = 0;
  for (double w : gauss_gegenbauer(3, 20).w) s += w;
  CHECK(s == Approx(std::numbers::pi / 2).epsilon(1e-14));
  s = 0;
  for (double w : gauss_gegenbauer(2, 7).w) s += w;
  CHECK(s == Approx(2.0).epsilon(1e-14));
  for (int n : {2, 3, 4, 6}) {
    const auto q = gauss_gegenbauer(n, 12);
    double tot = 0;
    for (double w : q.w) tot += w;
    CHECK(tot * specfun::sphere_volume(n - 1) == Approx(specfun::sphere_volume(n)).epsilon(1e-13));
    // exact for x^22
    double m = 0;
    for (std::size_t i = 0; i < q.x.size(); ++i) m += q.w[i] * std::pow(q.x[i], 22);
    const double exact = std::exp(std::lgamma(11.5) + std::lgamma(n / 2.0) - std::lgamma(11.5 + n / 2.0));
    CHECK(m == Approx(exact).epsilon(1e-12));
  }
}

TEST_CASE("zonal basis is orthonormal") {
  for (int n : {2, 3, 4, 5, 6}) CHECK(gram_defect(n, 16, gauss_gegenbauer(n, 48)) <= 1e-10);
  const auto Y = zonal_basis(3, 0, {0.3});
  CHECK(Y[0][0] == Approx(1.0 / std::sqrt(2 * std::numbers::pi * std::numbers::pi)).epsilon(1e-14));
}

TEST_CASE("constants attain the sphere constant") {
  for (int n : {2, 3, 4})
    for (double g : {0.25, 0.5, 0.75}) {
      CHECK(rayleigh_quotient(n, g, constant(n, 8, 1.0)) == Approx(Ysphere(n, g)).epsilon(1e-12));
      CHECK(rayleigh_quotient(n, g, constant(n, 8, 7.5)) == Approx(Ysphere(n, g)).epsilon(1e-12));
    }
}

TEST_CASE("degree-two perturbation raises the quotient") {
  const auto Y = zonal_basis(3, 2, gauss_gegenbauer(3, 40).x);
  double m2 = 0;
  for (double v : Y[2]) m2 = std::max(m2, std::abs(v));
  const auto t = make_trial(3, {1.0 / Y[0][0], 0.0, 0.1 / m2});
  CHECK(admissible(t));
  CHECK(rayleigh_quotient(3, 0.5, t) > Ysphere(3, 0.5) + 1e-6);
}

TEST_CASE("quotient is scale invariant") {
  const auto a = make_trial(4, {1.0, 0.05, -0.1, 0.02});
  const auto b = make_trial(4, {2.0, 0.1, -0.2, 0.04});
  CHECK(rayleigh_quotient(4, 0.3, a) == Approx(rayleigh_quotient(4, 0.3, b)).epsilon(1e-12));
}

TEST_CASE("inadmissible trials") {
  const auto t = make_trial(3, {0.1, 1.0});
  CHECK(!admissible(t));
  CHECK_THROWS_AS(rayleigh_quotient(3, 0.5, t), InadmissibleTrialError);
  CHECK_THROWS_AS(rayleigh_quotient(4, 0.5, constant(3, 2, 1.0)), DomainError);
  CHECK_THROWS_AS(make_trial(3, {}), DomainError);
}

TEST_CASE("minimizer finds the sphere constant") {
  MinimizeOptions opts;
  opts.kmax = 16;
  opts.restarts = 8;
  const auto r = minimize_rayleigh(3, 0.5, opts);
  CHECK(r.min == Approx(Ysphere(3, 0.5)).epsilon(1e-9));
  CHECK(std::abs(r.min - Ysphere(3, 0.5)) <= 1e-6);
  CHECK(r.restarts.size() == 8);
  for (const auto& o : r.restarts) CHECK(o.value >= Ysphere(3, 0.5) - 1e-6);
}

TEST_CASE("minimum stays above the sphere constant") {
  MinimizeOptions opts;
  opts.kmax = 8;
  CHECK(minimize_rayleigh(2, 0.25, opts).min >= Ysphere(2, 0.25) - 1e-6);
}

TEST_CASE("constant start is already critical") {
  MinimizeOptions opts;
  opts.restarts = 1;
  const auto r = minimize_rayleigh(4, 0.75, opts);
  CHECK(r.iters == 0);
  CHECK(r.converged);
  CHECK(r.best_restart == 0);
}

TEST_CASE("seeded runs are reproducible") {
  MinimizeOptions opts;
  opts.kmax = 6;
  opts.restarts = 4;
  const auto a = minimize_rayleigh(3, 0.25, opts);
  const auto b = minimize_rayleigh(3, 0.25, opts);
  CHECK(a.min == b.min);
  CHECK(a.argmin.coeffs == b.argmin.coeffs);
  CHECK(seeded_starts(3, opts) == seeded_starts(3, opts));
  opts.seed += 1;
  CHECK(seeded_starts(3, opts) != seeded_starts(3, MinimizeOptions{6, 4}));
}

TEST_CASE("explicit starts descend to the sphere constant") {
  MinimizeOptions opts;
  opts.kmax = 4;
  std::vector<std::vector<double>> starts = {{0.0, 0.4, -0.2, 0.1, 0.0}, {0.5, 0.0, 0.3, 0.0, -0.1}};
  const auto r = minimize_rayleigh(3, 0.5, opts, starts);
  CHECK(r.restarts.size() == 2);
  for (const auto& o : r.restarts) CHECK(o.value < 3.0);
  CHECK(r.min >= Ysphere(3, 0.5) - 1e-6);
  CHECK(r.min <= Ysphere(3, 0.5) + 1e-4);
  CHECK_THROWS_AS(minimize_rayleigh(3, 0.5, opts, {{0.0, 1.0}}), DomainError);
}

TEST_CASE("random admissible trials never beat the sphere") {
  for (double g : {0.25, 0.75}) {
    const auto trials = random_admissible_trials(3, 16, 50, 11);
    CHECK(trials.size() == 50);
    for (const auto& t : trials) {
      CHECK(admissible(t));
      CHECK(rayleigh_quotient(3, g, t) >= Ysphere(3, g) - 1e-6);
    }
  }
}

TEST_CASE("volume ratio chain on the model") {
  for (auto [n, g] : {std::pair{3, 0.5}, std::pair{4, 0.25}}) {
    const auto metric = geometry::make_warped_metric(n, geometry::WarpSpec::hyperbolic());
    const auto r = theorem_chain_report(n, g, metric);
    CHECK(r.lower_bound == Approx(1.0).epsilon(1e-12));
    CHECK(r.y_manifold == Approx(r.y_sphere).epsilon(1e-14));
    CHECK(r.verdict == Verdict::pass);
    CHECK(r.bg_monotone);
    for (double v : r.eta.area_ratio) CHECK(std::abs(v - 1) <= 1e-8);
    for (double v : r.eta.ball_ratio) CHECK(std::abs(v - 1) <= 1e-8);
  }
}

TEST_CASE("volume ratio chain on a perturbed warp is not applicable") {
  const auto metric = geometry::make_warped_metric(3, geometry::WarpSpec::perturbed(-0.05, 3.0));
  const auto r = theorem_chain_report(3, 0.5, metric);
  CHECK(r.verdict == Verdict::not_applicable);
  CHECK(r.ricci_defect > 0.0);
  CHECK(to_string(Verdict::pass) == "pass");
  CHECK(to_string(Verdict::fail) == "fail");
  CHECK(to_string(Verdict::not_applicable) == "not-applicable");
  CHECK_THROWS_AS(theorem_chain_report(3, 1.5, metric), DomainError);
}
