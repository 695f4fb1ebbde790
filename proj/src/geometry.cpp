#include "ahvol/geometry.hpp"

#include <algorithm>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <sstream>

#include "ahvol/error.hpp"
#include "ahvol/specfun.hpp"

namespace ahvol::geometry {

namespace {

constexpr double kPoleSeriesCut = 1e-3;
constexpr double kScanMax = 40.0;
constexpr int kScanPoints = 4000;

double factorial(int m) {
  double f = 1.0;
  for (int i = 2; i <= m; ++i) f *= i;
  return f;
}

}  // namespace

WarpedMetric::WarpedMetric(int n, WarpSpec spec) : n_(n), spec_(std::move(spec)) {}

std::string WarpedMetric::label() const {
  std::ostringstream os;
  switch (spec_.kind) {
    case WarpKind::hyperbolic:
      os << "hyperbolic";
      break;
    case WarpKind::flat:
      os << "flat";
      break;
    case WarpKind::perturbed:
      os << "perturbed(eps=" << spec_.amplitude << ",a=" << spec_.decay_rate << ","
         << spec_.profile << ")";
      break;
  }
  return os.str();
}

double WarpedMetric::eta(double t) const {
  if (spec_.kind != WarpKind::perturbed) return 0.0;
  return detail::eta_jet<double>(spec_, t).phi;
}

PoleSeries WarpedMetric::pole_series(int terms) const {
  PoleSeries ps;
  if (spec_.kind == WarpKind::flat) {
    ps.coeffs = {1.0};
    ps.radius = INFINITY;
    return ps;
  }
  ps.coeffs.resize(terms);
  for (int j = 0; j < terms; ++j) ps.coeffs[j] = 1.0 / factorial(2 * j + 1);
  // sinh vanishes at ±iπ; the perturbation is switched on at kBumpStart
  ps.radius = M_PI;
  if (spec_.kind == WarpKind::perturbed && spec_.amplitude != 0.0)
    ps.radius = std::min(ps.radius, detail::kBumpStart);
  return ps;
}

WarpedMetric make_warped_metric(int n, const WarpSpec& spec) {
  if (n < 1) throw InvalidWarpError("boundary dimension must be positive");
  if (spec.kind == WarpKind::perturbed) {
    if (!(spec.decay_rate >= 2.0))
      throw InvalidWarpError("perturbation decay rate must be >= 2");
    if (!std::isfinite(spec.amplitude))
      throw InvalidWarpError("perturbation amplitude must be finite");
    if (spec.profile != "smoothstep")
      throw InvalidWarpError("unknown perturbation profile '" + spec.profile + "'");
  }
  WarpedMetric metric(n, spec);
  for (int i = 1; i <= kScanPoints; ++i) {
    const double t = kScanMax * i / kScanPoints;
    const auto w = metric.sample(t);
    if (!(w.phi > 0.0) || !std::isfinite(w.phi))
      throw InvalidWarpError("warp is not positive at t = " + std::to_string(t));
    if (!(w.dphi > 0.0) || !std::isfinite(w.dphi))
      throw InvalidWarpError("warp derivative is not positive at t = " + std::to_string(t));
  }
  if (spec.kind == WarpKind::perturbed && std::abs(metric.eta(kScanMax)) > 1e-12)
    throw InvalidWarpError("perturbation does not decay");
  return metric;
}

CurvatureReport curvature_report(const WarpedMetric& metric, const std::vector<double>& grid) {
  const int n = metric.n();
  CurvatureReport r;
  r.t = grid;
  r.ricci_defect = 0.0;
  r.einstein_defect = 0.0;
  for (double t : grid) {
    if (!(t > 0.0)) throw DomainError("curvature grid must avoid the pole");
    const auto w = metric.sample(t);
    const double kr = -w.d2phi / w.phi;
    const double kt = (1.0 - w.dphi) * (1.0 + w.dphi) / (w.phi * w.phi);
    const double ric_r = n * kr;
    const double ric_t = kr + (n - 1) * kt;
    r.k_rad.push_back(kr);
    r.k_tan.push_back(kt);
    const double lo = std::min(ric_r, ric_t);
    r.ricci_min.push_back(lo);
    r.ricci_defect = std::max(r.ricci_defect, -n - lo);
    r.einstein_defect =
        std::max({r.einstein_defect, std::abs(ric_r + n), std::abs(ric_t + n)});
  }
  return r;
}

std::function<double(double)> radial_laplacian(const WarpedMetric& metric, RadialProfile profile) {
  return [metric, profile = std::move(profile)](double t) {
    const auto u = profile(t);
    return u.d2 + metric.n() * metric.log_derivative(t) * u.d1;
  };
}

namespace {

struct BallIntegrator {
  const WarpedMetric& metric;
  double sphere;
  double accumulated_error = 0.0;

  double area(double t) const { return sphere * std::pow(metric.sample(t).phi, metric.n()); }

  // φ = t(1 + t²/6 + ...) near the pole for every implemented kind
  double ball_series(double t) const {
    const int n = metric.n();
    const auto ps = metric.pole_series(2);
    const double a1 = ps.coeffs.size() > 1 ? ps.coeffs[1] : 0.0;
    return sphere * (std::pow(t, n + 1) / (n + 1) + n * a1 * std::pow(t, n + 3) / (n + 3));
  }

  double segment(double a, double b) {
    double err = 0.0;
    const double v = boost::math::quadrature::gauss_kronrod<double, 31>::integrate(
        [this](double t) { return area(t); }, a, b, b - a < 1e-3 ? 0 : 15, 1e-12, &err);
    accumulated_error += err;
    return v;
  }
};

void fill_curve(const WarpedMetric& metric, const std::vector<double>& grid,
                std::vector<double>& area, std::vector<double>& ball, double& err) {
  BallIntegrator bi{metric, specfun::sphere_volume(metric.n())};
  double t_cur = std::min(grid.front(), kPoleSeriesCut);
  double b_cur = bi.ball_series(t_cur);
  for (double t : grid) {
    area.push_back(bi.area(t));
    if (t <= kPoleSeriesCut) {
      b_cur = bi.ball_series(t);
    } else {
      b_cur += bi.segment(t_cur, t);
    }
    t_cur = t;
    ball.push_back(b_cur);
  }
  err = bi.accumulated_error;
  if (err > 1e-10 * ball.back())
    throw QuadratureError("ball volume quadrature missed its tolerance", err);
}

}  // namespace

VolumeCurve volume_data(const WarpedMetric& metric, const std::vector<double>& grid) {
  if (grid.empty()) throw DomainError("volume grid is empty");
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (!(grid[i] > 0.0)) throw DomainError("volume grid must be positive");
    if (i > 0 && !(grid[i] > grid[i - 1])) throw DomainError("volume grid must be increasing");
  }
  VolumeCurve c;
  c.t = grid;
  fill_curve(metric, grid, c.area, c.ball, c.quadrature_error);
  if (metric.kind() == WarpKind::hyperbolic) {
    c.area_ratio.assign(grid.size(), 1.0);
    c.ball_ratio.assign(grid.size(), 1.0);
  } else {
    const WarpedMetric ref(metric.n(), WarpSpec::hyperbolic());
    std::vector<double> ra, rb;
    double rerr = 0.0;
    fill_curve(ref, grid, ra, rb, rerr);
    for (std::size_t i = 0; i < grid.size(); ++i) {
      c.area_ratio.push_back(c.area[i] / ra[i]);
      c.ball_ratio.push_back(c.ball[i] / rb[i]);
    }
  }
  c.monotone = nonincreasing(c.ball_ratio, 1e-12);
  return c;
}

bool nonincreasing(const std::vector<double>& values, double slack) {
  for (std::size_t i = 1; i < values.size(); ++i)
    if (values[i] > values[i - 1] + slack * std::max(1.0, std::abs(values[i - 1]))) return false;
  return true;
}

std::vector<double> linspace(double a, double b, int count) {
  std::vector<double> v(count);
  if (count == 1) {
    v[0] = a;
    return v;
  }
  for (int i = 0; i < count; ++i) v[i] = a + (b - a) * i / (count - 1);
  v.back() = b;
  return v;
}

}  // namespace ahvol::geometry
