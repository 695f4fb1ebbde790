#include "ahvol/escobar.hpp"

#include <algorithm>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>

#include "ahvol/compactify.hpp"
#include "ahvol/error.hpp"
#include "ahvol/geometry.hpp"
#include "ahvol/quad.hpp"
#include "ahvol/report.hpp"
#include "ahvol/scattering.hpp"
#include "ahvol/specfun.hpp"

namespace ahvol::escobar {

namespace {

constexpr double kVolumeCut = 40.0;

double integrate(const std::function<double(double)>& f, double a, double b) {
  double err = 0.0;
  const double v =
      boost::math::quadrature::gauss_kronrod<double, 31>::integrate(f, a, b, 15, 1e-12, &err);
  if (err > 1e-12 * std::max(1.0, std::abs(v)))
    throw QuadratureError("hemisphere volume quadrature missed its tolerance on [" +
                              report::format_real(a) + ", " + report::format_real(b) + "]",
                          err);
  return v;
}

// R̃ = (e^{2t̃}/4)(-n(n+1) + 2nΔ₊t̃ - n(n-1)|∇t̃|²), t̃ = t + log(1 + e^{-2t}).
quad rtilde_conformal(const geometry::WarpedMetric& metric, double t) {
  const int n = metric.n();
  const quad tq(t);
  const quad th = boost::multiprecision::tanh(tq);
  const quad ch = boost::multiprecision::cosh(tq);
  const quad d2 = 1 / (ch * ch);
  const quad lap = d2 + n * metric.log_derivative<quad>(tq) * th;
  return ch * ch * (-quad(n) * (n + 1) + 2 * n * lap - quad(n) * (n - 1) * th * th);
}

}  // namespace

double yb_factor(int n) {
  if (n < 2) throw DomainError("Y_b conversion needs n >= 2");
  return 4.0 * n / (n - 1.0);
}

double yb_value(int n, double y1) { return yb_factor(n) * y1; }

double ya_hemisphere(int n) {
  return n * (n + 1.0) * std::pow(specfun::sphere_volume(n + 1) / 2.0, 2.0 / (n + 1));
}

EscobarReport hemisphere_check(int n, const std::vector<double>& grid) {
  if (grid.empty()) throw DomainError("grid is empty");
  const auto metric = geometry::make_warped_metric(n, geometry::WarpSpec::hyperbolic());
  const auto hs =
      compactify::build_compactification(compactify::CompactKind::hemisphere, n, 0.5, metric);
  EscobarReport r{};
  r.n = n;
  r.ya_hemisphere = ya_hemisphere(n);
  r.yb_conversion = yb_factor(n);
  const double target = n * (n + 1.0);
  for (double t : grid) {
    const double rc = to_double(rtilde_conformal(metric, t));
    const auto k = compactify::sectional_curvatures(hs, metric, t);
    const double rs = 2.0 * n * k.k_rad + n * (n - 1.0) * k.k_tan;
    r.rtilde_max_dev = std::max(r.rtilde_max_dev, std::abs(rc - target));
    r.rtilde_cross_dev = std::max(r.rtilde_cross_dev, std::abs(rc - rs));
    r.sectional_max_dev =
        std::max({r.sectional_max_dev, std::abs(k.k_rad - 1.0), std::abs(k.k_tan - 1.0)});
  }
  r.equator_H = std::abs(compactify::mean_curvature(hs, metric, grid.back()));

  const double sn = specfun::sphere_volume(n);
  // dV(g̃) = ρ^{n+1} φ^n dt |S^n|
  auto density = [&](double t) {
    const double rho = 1.0 / std::cosh(t);
    return sn * std::pow(rho * std::sinh(t), n) * rho;
  };
  auto round_density = [&](double s) { return sn * std::pow(std::sin(s), n); };
  double vol = 0.0, lo = 0.0;
  for (double hi = 1.0; hi <= kVolumeCut; hi += 1.0) {
    vol += integrate(density, lo, hi);
    lo = hi;
  }
  r.volume = vol;
  r.ratio_limit = vol / (specfun::sphere_volume(n + 1) / 2.0);
  r.ya_quadrature = target * std::pow(vol, 2.0 / (n + 1));

  double ball = 0.0, prev = 0.0;
  for (double t : grid) {
    if (!(t > prev)) throw DomainError("grid must be positive and increasing");
    ball += integrate(density, prev, t);
    const double gd = 2.0 * std::atan(std::tanh(t / 2.0));
    const double round = integrate(round_density, 0.0, gd);
    r.t.push_back(t);
    r.ball_ratio.push_back(ball / round);
    prev = t;
  }
  r.ratio_monotone = geometry::nonincreasing(r.ball_ratio, 1e-12);

  scattering::SolveOptions so;
  so.rel_tol = 1e-13;
  const auto sol = scattering::solve_radial_mode(metric, n + 1.0, 0, so);
  const auto fg = scattering::extract_fg(sol);
  r.cosh_x2_coefficient = fg.F1 / fg.F0;
  for (double t : geometry::linspace(0.0, sol.t_max(), 601)) {
    const double v = sol.u_jet(std::max(t, 1e-4)).value / fg.F0;
    r.cosh_max_rel_dev = std::max(r.cosh_max_rel_dev, std::abs(v / std::cosh(std::max(t, 1e-4)) - 1.0));
  }
  return r;
}

}  // namespace ahvol::escobar
