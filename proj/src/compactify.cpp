#include "ahvol/compactify.hpp"

#include <algorithm>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>

#include "ahvol/error.hpp"
#include "ahvol/report.hpp"
#include "ahvol/specfun.hpp"

namespace ahvol::compactify {

using geometry::WarpedMetric;

std::string to_string(CompactKind kind) {
  switch (kind) {
    case CompactKind::type_i:
      return "type-i";
    case CompactKind::type_ii:
      return "type-ii";
    case CompactKind::hemisphere:
      return "hemisphere";
    case CompactKind::rescaled:
      return "rescaled";
  }
  return "?";
}

Compactification::Compactification(CompactKind kind, int n, double gamma, double m,
                                   WarpedMetric source)
    : kind_(kind), n_(n), gamma_(gamma), m_(m), source_(std::move(source)) {}

const scattering::AdaptedProfile* Compactification::adapted() const {
  if (adapted_) return adapted_.get();
  if (base_) return base_->adapted();
  return nullptr;
}

LogProfile Compactification::profile(double t) const {
  using boost::multiprecision::cosh;
  using boost::multiprecision::log;
  using boost::multiprecision::tanh;
  switch (kind_) {
    case CompactKind::type_i:
    case CompactKind::type_ii: {
      const quad c = quad(n_) / 2 - quad(gamma_);
      const quad s = quad(n_) / 2 + quad(gamma_);
      const quad kappa = 1 / c;
      const quad y = quad(adapted_->w_log_derivative(t)) - c;
      const quad L = source_.log_derivative<quad>(quad(t));
      LogProfile p;
      p.log_rho = kappa * quad(adapted_->log_w_normalized(t)) - quad(t);
      p.f1 = kappa * y;
      p.f2 = kappa * (-n_ * L * y - s * (n_ - s) - y * y);
      return p;
    }
    case CompactKind::hemisphere: {
      const quad tq(t);
      const quad th = tanh(tq);
      const quad ch = cosh(tq);
      return {-log(ch), -th, -1 / (ch * ch)};
    }
    case CompactKind::rescaled: {
      auto p = base_->profile(t);
      const auto h = h_(t);
      p.log_rho += h.value;
      p.f1 += h.d1;
      p.f2 += h.d2;
      return p;
    }
  }
  return {};
}

Jet<double> Compactification::rho(double t) const {
  const auto p = profile(t);
  const quad r = boost::multiprecision::exp(p.log_rho);
  return {to_double(r), to_double(r * p.f1), to_double(r * (p.f2 + p.f1 * p.f1))};
}

double Compactification::boundary_distance(double t) const {
  return to_double(-(profile(t).log_rho - boost::multiprecision::log(quad(2))));
}

Compactification build_compactification(CompactKind kind, int n, double gamma,
                                         const WarpedMetric& metric,
                                         const scattering::AdaptedOptions& opts) {
  const WarpedMetric model(n, geometry::WarpSpec::hyperbolic());
  if (metric.n() != n) throw DomainError("compactification and metric dimensions differ");
  switch (kind) {
    case CompactKind::type_i:
    case CompactKind::type_ii: {
      if (kind == CompactKind::type_i && !metric.is_hyperbolic())
        throw DomainError("type I compactification is implemented for the hyperbolic metric only");
      if (!(gamma >= 0.05 && gamma <= 0.95)) throw DomainError("gamma must lie in [0.05, 0.95]");
      Compactification c(kind, n, gamma, 1.0 - 2.0 * gamma, model);
      c.adapted_ = std::make_shared<const scattering::AdaptedProfile>(
          scattering::adapted_profile(n, gamma, opts));
      return c;
    }
    case CompactKind::hemisphere:
      if (!metric.is_hyperbolic())
        throw DomainError("hemisphere compactification requires the hyperbolic metric");
      return Compactification(kind, n, 0.5, 0.0, model);
    case CompactKind::rescaled:
      break;
  }
  throw DomainError("use rescale() to build a rescaled compactification");
}

Compactification rescale(const Compactification& base, LogFactor h) {
  Compactification c(CompactKind::rescaled, base.n(), base.gamma(), base.m(), base.source());
  c.base_ = std::make_shared<const Compactification>(base);
  c.h_ = std::move(h);
  return c;
}

namespace {

// 1 - 2γ formed in quad; the double m() is rounded for most γ.
quad weight_exponent(const Compactification& c) {
  if (c.m() == 0.0) return quad(0);
  return 1 - 2 * quad(c.gamma());
}

struct Local {
  LogProfile p;
  quad phi, dphi, d2phi, L;
};

Local local(const Compactification& c, const WarpedMetric& metric, double t) {
  if (!(t > 0.0)) throw DomainError("evaluation point must avoid the pole");
  const auto w = metric.sample<quad>(quad(t));
  return {c.profile(t), w.phi, w.dphi, w.d2phi, metric.log_derivative<quad>(quad(t))};
}

// ρ² (2(m+n)) J, i.e. the bracket of the definition route.
quad definition_bracket(const Compactification& c, const Local& l) {
  const int n = c.n();
  const quad m = weight_exponent(c);
  const quad& f1 = l.p.f1;
  const quad& f2 = l.p.f2;
  const quad r_plus = -2 * n * l.d2phi / l.phi +
                      n * (n - 1) * (1 - l.dphi) * (1 + l.dphi) / (l.phi * l.phi);
  const quad lap_f = f2 + n * l.L * f1;
  return r_plus - 2 * n * lap_f - n * (n - 1) * f1 * f1 -
         2 * m * (lap_f + f1 * f1 + (n - 1) * f1 * f1) + m * (m - 1) * (1 - f1 * f1);
}

}  // namespace

quad weighted_J_definition(const Compactification& c, const WarpedMetric& metric, double t) {
  const auto l = local(c, metric, t);
  return boost::multiprecision::exp(-2 * l.p.log_rho) * definition_bracket(c, l) /
         (2 * (weight_exponent(c) + c.n()));
}

quad weighted_J_conformal(const Compactification& c, const WarpedMetric& metric, double t) {
  const auto l = local(c, metric, t);
  const int n = c.n();
  const quad g(c.gamma());
  const quad& f1 = l.p.f1;
  return boost::multiprecision::exp(-2 * l.p.log_rho) *
         (-l.p.f2 - n * l.L * f1 - (n - 2 * g) / 2 * f1 * f1 - (n + 2 * g) / 2);
}

WeightedJ weighted_J_detailed(const Compactification& c, const WarpedMetric& metric,
                              const std::vector<double>& grid) {
  WeightedJ r;
  r.cross_checked = metric.is_hyperbolic();
  r.max_deviation = 0.0;
  std::vector<double> conf;
  for (double t : grid) {
    r.definition.push_back(to_double(weighted_J_definition(c, metric, t)));
    if (r.cross_checked) {
      conf.push_back(to_double(weighted_J_conformal(c, metric, t)));
      r.max_deviation = std::max(r.max_deviation, std::abs(conf.back() - r.definition.back()));
    }
  }
  r.values = r.cross_checked ? conf : r.definition;
  if (r.max_deviation > 1e-7) {
    std::string msg = "weighted J routes disagree (max deviation " +
                      report::format_real(r.max_deviation) + "):";
    for (std::size_t i = 0; i < grid.size(); ++i)
      msg += " t=" + report::format_real(grid[i]) + " def=" + report::format_real(r.definition[i]) +
             " conf=" + report::format_real(conf[i]) + ";";
    throw CrossCheckError(msg);
  }
  return r;
}

std::vector<double> weighted_J(const Compactification& c, const WarpedMetric& metric,
                               const std::vector<double>& grid) {
  return weighted_J_detailed(c, metric, grid).values;
}

std::vector<double> apply_weighted_laplacian(const Compactification& c, const WarpedMetric& metric,
                                             const QuadProfile& U, const std::vector<double>& grid,
                                             int k) {
  const int n = c.n();
  const quad m = weight_exponent(c);
  std::vector<double> out;
  out.reserve(grid.size());
  for (double t : grid) {
    const auto l = local(c, metric, t);
    const auto u = U(t);
    const quad pot = quad(k) * (k + n - 1) / (l.phi * l.phi);
    const quad lap = u.d2 + n * l.L * u.d1 + (n - 1 + m) * l.p.f1 * u.d1 - pot * u.value;
    const quad rho_m2 = boost::multiprecision::exp(-2 * l.p.log_rho);
    const quad J = rho_m2 * definition_bracket(c, l) / (2 * (m + n));
    out.push_back(to_double(-rho_m2 * lap + (m + n - 1) / 2 * J * u.value));
  }
  return out;
}

QuadProfile poisson_lift(const Compactification& c, int k, const scattering::SolveOptions& opts) {
  if (c.kind() != CompactKind::type_i && c.kind() != CompactKind::type_ii)
    throw DomainError("the Poisson lift needs a type I or type II compactification");
  const int n = c.n();
  const double s = n / 2.0 + c.gamma();
  auto sol = std::make_shared<const scattering::RadialSolution>(
      scattering::solve_radial_mode(c.source(), s, k, opts));
  const double F0 = scattering::extract_fg(*sol).F0;
  const WarpedMetric model = c.source();
  return [c, sol, F0, model, n, s, k](double t) -> Jet<quad> {
    const auto p = c.profile(t);
    const auto y = sol->state_at(t);
    const quad cc = quad(n) - quad(s);
    const quad z(y[1] / y[0]);
    const quad e = model.log_derivative_excess<quad>(quad(t));
    const quad L = e + 1;
    const quad phi = model.sample<quad>(quad(t)).phi;
    const quad pot = quad(k) * (k + n - 1) / (phi * phi);
    const quad log_u = -cc * (p.log_rho + t) + boost::multiprecision::log(quad(y[0] / F0));
    const quad g1 = -cc * (p.f1 + 1) + z;
    const quad wpp = -(n * L - 2 * cc) * z + (n * cc * e + pot);
    const quad g2 = -cc * p.f2 + (wpp - z * z) + g1 * g1;
    const quad u = boost::multiprecision::exp(log_u);
    return {u, u * g1, u * g2};
  };
}

Extrapolation extrapolate(const std::function<double(double)>& v, double t_max, double h,
                          double rel_gap) {
  for (double T = t_max; T - 2 * h > 0.0; T -= 0.5) {
    const double a = v(T - 2 * h), b = v(T - h), c = v(T);
    const double d1 = b - a, d2 = c - b;
    if (std::abs(d2) < rel_gap * std::max(1.0, std::abs(c))) continue;
    const double r = d2 / d1;
    if (!(r > 0.0 && r < 1.0))
      throw IllConditionedFitError("differences are not geometric at t = " + std::to_string(T));
    return {c + d2 * r / (1.0 - r), std::log(r) / h, T};
  }
  throw IllConditionedFitError("no resolvable transient for extrapolation");
}

double mean_curvature(const Compactification& c, const WarpedMetric& metric, double t) {
  const auto l = local(c, metric, t);
  const quad excess = metric.log_derivative_excess<quad>(quad(t)) + (l.p.f1 + 1);
  return to_double(c.n() * boost::multiprecision::exp(-l.p.log_rho) * excess);
}

MeanCurvature mean_curvature_weighted(const Compactification& c, const WarpedMetric& metric,
                                      const std::vector<double>& grid) {
  if (grid.empty() || grid.back() < 20.0) throw DomainError("grid must extend to t >= 20");
  auto v = [&](double t) {
    const auto l = local(c, metric, t);
    const quad excess = metric.log_derivative_excess<quad>(quad(t)) + (l.p.f1 + 1);
    return to_double(c.n() * boost::multiprecision::exp((weight_exponent(c) - 1) * l.p.log_rho) * excess);
  };
  MeanCurvature r;
  for (double t : grid) r.values.push_back(v(t));
  const auto ex = extrapolate(v, grid.back());
  r.limit = ex.limit;
  r.rate = ex.rate;
  return r;
}

EnergyResult energy(const Compactification& c, const WarpedMetric& metric, const LogFactor& trial,
                    double r_max) {
  if (!(r_max > 1.0)) throw DomainError("r_max must exceed 1");
  const int n = c.n();
  const quad m = weight_exponent(c);
  const quad a = m + n - 1;
  auto integrand = [&](double t) {
    const auto l = local(c, metric, t);
    const auto u = trial(t);
    const quad w = boost::multiprecision::exp(a * l.p.log_rho) * boost::multiprecision::pow(l.phi, n);
    const quad bulk = quad(u.d1) * u.d1 + a / 2 * definition_bracket(c, l) / (2 * (m + n)) *
                                              quad(u.value) * u.value;
    return to_double(w * bulk);
  };
  auto boundary = [&](double r) {
    const auto l = local(c, metric, r);
    const auto u = trial(r);
    const quad excess = metric.log_derivative_excess<quad>(quad(r)) + (l.p.f1 + 1);
    const quad H = n * boost::multiprecision::exp(-l.p.log_rho) * excess;
    return to_double(a / (2 * n) * H * quad(u.value) * u.value *
                     boost::multiprecision::exp((m + n) * l.p.log_rho) *
                     boost::multiprecision::pow(l.phi, n));
  };
  const double scale = -specfun::d_gamma(n, c.gamma()) / (2 * c.gamma()) * specfun::sphere_volume(n);
  double bulk = 0.0, err = 0.0, bulk_prev = 0.0;
  double lo = 0.0;
  const double r_prev = r_max - 1.0;
  std::vector<double> cuts;
  for (double x = 1.0; x < r_max; x += 1.0) cuts.push_back(x);
  if (std::find(cuts.begin(), cuts.end(), r_prev) == cuts.end()) cuts.push_back(r_prev);
  std::sort(cuts.begin(), cuts.end());
  cuts.push_back(r_max);
  for (double hi : cuts) {
    double e = 0.0;
    // bounded depth: on the model the integrand is roundoff, so relative tests never close
    bulk += boost::math::quadrature::gauss_kronrod<double, 31>::integrate(integrand, lo, hi, 4,
                                                                          1e-13, &e);
    err += e;
    if (hi == r_prev) bulk_prev = bulk;
    lo = hi;
  }
  EnergyResult res;
  res.value = scale * (bulk + boundary(r_max));
  res.quadrature_error = std::abs(scale) * err;
  if (res.quadrature_error > 1e-10 * std::max(1.0, std::abs(res.value)))
    throw QuadratureError("energy quadrature missed its tolerance", res.quadrature_error);
  res.tail = std::abs(res.value - scale * (bulk_prev + boundary(r_prev)));
  return res;
}

VolumeLimit boundary_volume(const Compactification& c, const WarpedMetric& metric,
                            const std::vector<double>& grid) {
  if (grid.empty()) throw DomainError("grid is empty");
  const int n = c.n();
  const double sphere = specfun::sphere_volume(n);
  auto v = [&](double t) {
    const auto l = local(c, metric, t);
    return sphere * to_double(boost::multiprecision::exp(n * (l.p.log_rho + boost::multiprecision::log(l.phi))));
  };
  VolumeLimit r;
  for (double t : grid) r.values.push_back(v(t));
  const auto ex = extrapolate(v, grid.back());
  r.limit = ex.limit;
  r.rate = -ex.rate;
  return r;
}

Sectional sectional_curvatures(const Compactification& c, const WarpedMetric& metric, double t) {
  const auto l = local(c, metric, t);
  const quad rho2 = boost::multiprecision::exp(2 * l.p.log_rho);
  const quad kr = -(l.L * l.p.f1 + l.d2phi / l.phi + l.p.f2) / rho2;
  const quad sum = l.L + l.p.f1;
  const quad kt = (1 - l.phi * l.phi * sum * sum) / (rho2 * l.phi * l.phi);
  return {to_double(kr), to_double(kt)};
}

std::string diagnostics_csv(const Compactification& c, const WarpedMetric& metric,
                            const std::vector<double>& grid) {
  report::CsvTable tab;
  tab.comments.push_back("compactification " + to_string(c.kind()) + ", n = " +
                         std::to_string(c.n()) + ", gamma = " + report::format_real(c.gamma()) +
                         ", m = " + report::format_real(c.m()) + ", metric " + metric.label());
  tab.header = {"t", "rho", "J_weighted", "H_weighted"};
  for (double t : grid) {
    const auto l = local(c, metric, t);
    const double rho = to_double(boost::multiprecision::exp(l.p.log_rho));
    const double J = to_double(weighted_J_definition(c, metric, t));
    const double H = mean_curvature(c, metric, t) * std::pow(rho, c.m());
    tab.rows.push_back({t, rho, J, H});
  }
  return tab.str();
}

}  // namespace ahvol::compactify
