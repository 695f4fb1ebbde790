#include "ahvol/scattering.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <boost/numeric/odeint.hpp>
#include <cmath>
#include <sstream>

#include "ahvol/error.hpp"
#include "ahvol/report.hpp"
#include "ahvol/specfun.hpp"

namespace ahvol::scattering {

namespace odeint = boost::numeric::odeint;
using State = std::array<double, 2>;
using geometry::WarpedMetric;

namespace {

constexpr double kAbsTol = 1e-300;
constexpr double kMinStepRatio = 1e-14;
constexpr long kMaxSteps = 2000000;

auto make_stepper(double rel_tol) {
  return odeint::make_controlled(kAbsTol, rel_tol, odeint::runge_kutta_fehlberg78<State>());
}

// Series arithmetic in τ = t²; all series truncated to the same length.
std::vector<double> series_div(const std::vector<double>& a, const std::vector<double>& b) {
  std::vector<double> q(a.size(), 0.0);
  for (std::size_t i = 0; i < a.size(); ++i) {
    double acc = a[i];
    for (std::size_t j = 1; j <= i && j < b.size(); ++j) acc -= b[j] * q[i - j];
    q[i] = acc / b[0];
  }
  return q;
}

std::vector<double> series_mul(const std::vector<double>& a, const std::vector<double>& b) {
  std::vector<double> r(a.size(), 0.0);
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j <= i && j < b.size(); ++j) r[i] += a[i - j] * b[j];
  return r;
}

double cond2(const Eigen::MatrixXd& m) {
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(m);
  const auto& sv = svd.singularValues();
  return sv(0) / sv(sv.size() - 1);
}

}  // namespace

RadialSolution::RadialSolution(WarpedMetric metric, double s, int k, SolveOptions opts)
    : metric_(std::move(metric)), s_(s), k_(k), opts_(opts) {}

State RadialSolution::rhs(double t, const State& y) const {
  const int n = metric_.n();
  const double c = n - s_;
  const double e = metric_.log_derivative_excess(t);
  double pot = 0.0;
  if (k_ != 0) {
    const double phi = metric_.sample(t).phi;
    pot = k_ * (k_ + n - 1.0) / (phi * phi);
  }
  return {y[1], -(n * (1.0 + e) - 2.0 * c) * y[1] + (n * c * e + pot) * y[0]};
}

void RadialSolution::integrate(double t_start, State y) {
  const double T = opts_.t_max;
  if (!(T > t_start)) throw DomainError("t_max must exceed the start point");
  auto stepper = make_stepper(opts_.rel_tol);
  auto sys = [this](const State& x, State& dxdt, double t) { dxdt = rhs(t, x); };
  double t = t_start;
  double dt = 0.1 * t_start;
  t_ = {t};
  w_ = {y[0]};
  dw_ = {y[1]};
  long steps = 0;
  while (T - t > 1e-13 * T) {
    if (t + dt > T) dt = T - t;
    const auto res = stepper.try_step(sys, y, t, dt);
    if (res == odeint::success) {
      t_.push_back(t);
      w_.push_back(y[0]);
      dw_.push_back(y[1]);
      if (!std::isfinite(y[0]) || !std::isfinite(y[1]))
        throw StiffnessError("radial solution overflowed at t = " + std::to_string(t));
    } else if (dt < kMinStepRatio * t) {
      throw StiffnessError("step size collapsed at t = " + std::to_string(t));
    }
    if (++steps > kMaxSteps) throw StiffnessError("step budget exhausted");
  }
}

State RadialSolution::series_state(double t) const {
  const double c = n() - s_;
  double u = 0.0, du = 0.0;
  for (std::size_t j = 0; j < series_.size(); ++j) {
    const int p = k_ + 2 * static_cast<int>(j);
    u += series_[j] * std::pow(t, p);
    if (p > 0) du += p * series_[j] * std::pow(t, p - 1);
  }
  const double e = std::exp(c * t);
  return {u * e, (du + c * u) * e};
}

State RadialSolution::state_at(double t) const {
  if (t < t_.front()) {
    if (series_.empty() || !(t > 0.0))
      throw DomainError("radial solution evaluated below its start point");
    return series_state(t);
  }
  if (t > t_.back() * (1 + 1e-14)) throw DomainError("radial solution evaluated beyond t_max");
  auto it = std::upper_bound(t_.begin(), t_.end(), t);
  const std::size_t i = static_cast<std::size_t>(it - t_.begin()) - 1;
  State y{w_[i], dw_[i]};
  if (t == t_[i]) return y;
  auto stepper = make_stepper(opts_.rel_tol);
  auto sys = [this](const State& x, State& dxdt, double tt) { dxdt = rhs(tt, x); };
  odeint::integrate_adaptive(stepper, sys, y, t_[i], t, t - t_[i]);
  return y;
}

Jet<double> RadialSolution::w_jet(double t) const {
  const auto y = state_at(t);
  const auto d = rhs(t, y);
  return {y[0], y[1], d[1]};
}

Jet<double> RadialSolution::u_jet(double t) const {
  const auto w = w_jet(t);
  const double c = n() - s_;
  const double e = std::exp(-c * t);
  return {w.value * e, (w.d1 - c * w.value) * e, (w.d2 - 2 * c * w.d1 + c * c * w.value) * e};
}

RadialSolution solve_radial_mode(const WarpedMetric& metric, double s, int k,
                                 const SolveOptions& opts) {
  if (k < 0) throw DomainError("mode index must be nonnegative");
  if (opts.series_terms < 3) throw DomainError("at least three series terms are required");
  const auto ps = metric.pole_series(opts.series_terms + 1);
  if (opts.t0 > 0.5 * ps.radius)
    throw SeriesStartError("series start " + std::to_string(opts.t0) +
                           " exceeds half the pole-series radius " + std::to_string(ps.radius));
  const int n = metric.n();
  const std::size_t N = opts.series_terms;

  // t u'' + ... in Frobenius form: t²u'' + t P(t) u' + Q(t) u = 0.
  std::vector<double> S(N, 0.0), tS(N, 0.0);
  for (std::size_t j = 0; j < N && j < ps.coeffs.size(); ++j) {
    S[j] = ps.coeffs[j];
    tS[j] = 2.0 * j * ps.coeffs[j];
  }
  const auto R = series_div(tS, S);
  std::vector<double> one(N, 0.0);
  one[0] = 1.0;
  const auto invS2 = series_div(one, series_mul(S, S));
  std::vector<double> P(N), Q(N);
  const double kk = k * (k + n - 1.0);
  for (std::size_t j = 0; j < N; ++j) {
    P[j] = n * (j == 0 ? 1.0 : R[j]);
    Q[j] = -kk * invS2[j];
  }
  if (N > 1) Q[1] += s * (n - s);

  RadialSolution sol(metric, s, k, opts);
  std::vector<double> a(N, 0.0);
  a[0] = opts.amplitude * std::pow(opts.t0, -k);
  for (std::size_t j = 1; j < N; ++j) {
    const double m = 2.0 * j;
    double acc = 0.0;
    for (std::size_t i = 1; i <= j; ++i) acc += (P[i] * (m - 2.0 * i + k) + Q[i]) * a[j - i];
    a[j] = -acc / (m * (m + 2.0 * k + n - 1.0));
  }
  sol.series_ = a;
  sol.integrate(opts.t0, sol.series_state(opts.t0));
  return sol;
}

RadialSolution integrate_from(const WarpedMetric& metric, double s, int k, double t_start,
                              State state, const SolveOptions& opts) {
  if (!(t_start > 0.0)) throw DomainError("start point must be positive");
  RadialSolution sol(metric, s, k, opts);
  sol.integrate(t_start, state);
  return sol;
}

namespace {

struct LsqResult {
  Eigen::VectorXd coef;
  double cond;
};

// Rows scaled by 1/x²; columns x^{p_j - 2} normalized to unit max.
LsqResult fit_powers(double lo, double hi,
                     const std::vector<double>& powers,
                     const std::function<double(double, double)>& target) {
  const int rows = 48;
  Eigen::MatrixXd A(rows, powers.size());
  Eigen::VectorXd b(rows);
  for (int r = 0; r < rows; ++r) {
    const double t = lo + (hi - lo) * r / (rows - 1);
    const double x = 2.0 * std::exp(-t);
    for (std::size_t j = 0; j < powers.size(); ++j) A(r, j) = std::pow(x, powers[j] - 2.0);
    b(r) = target(t, x) / (x * x);
  }
  Eigen::VectorXd scale(powers.size());
  for (std::size_t j = 0; j < powers.size(); ++j) {
    scale(j) = A.col(j).cwiseAbs().maxCoeff();
    A.col(j) /= scale(j);
  }
  LsqResult res;
  res.cond = cond2(A);
  res.coef = A.colPivHouseholderQr().solve(b).cwiseQuotient(scale);
  return res;
}

BranchCoefficients extract_fractional(const RadialSolution& sol, const FitOptions& opts, double p) {
  const double c = sol.c();
  const double scale = std::exp2(c);
  const double T = sol.t_max();
  const int m = opts.radii;
  std::vector<double> xs, Gs, Fs;
  for (int i = 0; i < m; ++i) {
    const double t = T - opts.spacing * (m - 1 - i);
    const auto y = sol.state_at(t);
    const double x = 2.0 * std::exp(-t);
    const double xp = std::pow(x, p);
    // W = F + G x^p, W' = -p G x^p with unknowns (F, G x^p)
    Eigen::Matrix2d M;
    M << 1.0, 1.0, 0.0, -p;
    if (cond2(M) > 1e8) throw IllConditionedFitError("branch system is ill conditioned");
    const double gx = -(y[1] / scale) / p;
    xs.push_back(x);
    Gs.push_back(gx / xp);
    Fs.push_back(y[0] / scale - gx);
  }
  // G(t) = G0 + K x^{2-p}
  const double q = 2.0 - p;
  std::vector<double> g_pairs;
  for (int i = 0; i < m; ++i)
    for (int j = i + 1; j < m; ++j) {
      const double ri = std::pow(xs[i], q), rj = std::pow(xs[j], q);
      Eigen::Matrix2d M;
      M << 1.0, ri / rj, 1.0, 1.0;
      if (cond2(M) > 1e8) throw IllConditionedFitError("Richardson system is ill conditioned");
      g_pairs.push_back((Gs[j] * ri - Gs[i] * rj) / (ri - rj));
    }
  BranchCoefficients fg{};
  fg.G0 = g_pairs.back();  // the two outermost radii
  fg.F0 = Fs.back();
  double spread_g = 0.0, spread_f = 0.0;
  for (double g : g_pairs) spread_g = std::max(spread_g, std::abs(g - fg.G0));
  for (double f : Fs) spread_f = std::max(spread_f, std::abs(f - fg.F0));
  const double floor_rel = 10.0 * sol.options().rel_tol;
  fg.eG = spread_g + floor_rel * std::abs(fg.G0);
  fg.eF = spread_f + floor_rel * std::abs(fg.F0);

  // D = -W' - p G0 x^p = 2F1 x² + 4F2 x⁴ + (p+2)G1 x^{p+2} + ...
  const std::vector<double> powers = {2.0, p + 2.0, 4.0, p + 4.0, 6.0};
  const double G0 = fg.G0;
  auto target = [&](double t, double x) {
    return -sol.state_at(t)[1] / scale - p * G0 * std::pow(x, p);
  };
  const auto a = fit_powers(opts.f1_t_lo, opts.f1_t_hi, powers, target);
  const auto b = fit_powers(opts.f1_t_lo + 1.0, opts.f1_t_hi + 1.0, powers, target);
  if (a.cond > 1e8 || b.cond > 1e8)
    throw IllConditionedFitError("x² coefficient fit is ill conditioned");
  fg.F1 = a.coef(0) / 2.0;
  fg.eF1 = std::abs(a.coef(0) - b.coef(0)) / 2.0 + floor_rel * std::abs(fg.F1);
  return fg;
}

// s = n + 1: exponents -1 and n + 1, W = w/2^{-1} = F + G x^{n+2}.
BranchCoefficients extract_integer(const RadialSolution& sol, const FitOptions& opts) {
  const int n = sol.n();
  const double scale = std::exp2(sol.c());
  const double T = sol.t_max();
  const double gp = n + 2.0;
  const bool separable = (n % 2) == 1;  // n + 2 odd: no collision with F's even powers
  std::vector<double> powers = {2.0, 4.0, 6.0, 8.0};
  std::size_t gcol;
  if (separable) {
    powers.push_back(gp);
    gcol = powers.size() - 1;
  } else {
    gcol = static_cast<std::size_t>(std::find(powers.begin(), powers.end(), gp) - powers.begin());
    if (gcol == powers.size()) {
      powers.push_back(gp);
      gcol = powers.size() - 1;
    }
  }
  auto target = [&](double t, double) { return -sol.state_at(t)[1] / scale; };
  const auto a = fit_powers(opts.f1_t_lo, opts.f1_t_hi, powers, target);
  const auto b = fit_powers(opts.f1_t_lo + 1.0, opts.f1_t_hi + 1.0, powers, target);
  if (a.cond > 1e8 || b.cond > 1e8)
    throw IllConditionedFitError("branch fit is ill conditioned");
  BranchCoefficients fg{};
  const double floor_rel = 10.0 * sol.options().rel_tol;
  fg.F1 = a.coef(0) / 2.0;
  fg.eF1 = std::abs(a.coef(0) - b.coef(0)) / 2.0 + floor_rel * std::abs(fg.F1);
  const double gcoef = a.coef(gcol) / gp;
  const double gdiff = std::abs(a.coef(gcol) - b.coef(gcol)) / gp;
  if (separable) {
    fg.G0 = gcoef;
    fg.eG = gdiff;
  } else {
    fg.G0 = 0.0;
    fg.eG = std::abs(gcoef) + gdiff;
  }
  std::vector<double> Fs;
  for (int i = 0; i < opts.radii; ++i) {
    const double t = T - opts.spacing * (opts.radii - 1 - i);
    const double x = 2.0 * std::exp(-t);
    Fs.push_back(sol.state_at(t)[0] / scale - fg.F1 * x * x);
  }
  fg.F0 = Fs.back();
  double spread = 0.0;
  for (double f : Fs) spread = std::max(spread, std::abs(f - fg.F0));
  fg.eF = spread + floor_rel * std::abs(fg.F0);
  return fg;
}

}  // namespace

BranchCoefficients extract_fg(const RadialSolution& sol, const FitOptions& opts) {
  if (opts.radii < 3) throw IllConditionedFitError("at least three fit radii are required");
  if (sol.t_max() - opts.spacing * (opts.radii - 1) < opts.f1_t_hi + 1.0)
    throw IllConditionedFitError("solution does not reach far enough for the branch fit");
  const int n = sol.n();
  if (std::abs(sol.s() - (n + 1.0)) < 1e-12) return extract_integer(sol, opts);
  const double p = 2.0 * sol.s() - n;
  if (!(p >= 0.1 && p <= 1.9))
    throw IllConditionedFitError("branch separation 2γ = " + std::to_string(p) +
                                 " outside [0.1, 1.9]");
  return extract_fractional(sol, opts, p);
}

namespace {

void check_gamma_range(double gamma) {
  if (!(gamma >= 0.05 && gamma <= 0.95))
    throw DomainError("gamma must lie in [0.05, 0.95]");
}

}  // namespace

Multiplier scattering_multiplier_detailed(int n, double gamma, int k, const SolveOptions& opts) {
  check_gamma_range(gamma);
  const auto metric = geometry::make_warped_metric(n, geometry::WarpSpec::hyperbolic());
  const auto sol = solve_radial_mode(metric, n / 2.0 + gamma, k, opts);
  const auto fg = extract_fg(sol);
  const double d = specfun::d_gamma(n, gamma);
  Multiplier m;
  m.fg = fg;
  m.value = d * fg.G0 / fg.F0;
  m.error = std::abs(d) * (fg.eG / std::abs(fg.F0) + std::abs(fg.G0) * fg.eF / (fg.F0 * fg.F0));
  return m;
}

double scattering_multiplier(int n, double gamma, int k, const SolveOptions& opts) {
  return scattering_multiplier_detailed(n, gamma, k, opts).value;
}

AdaptedProfile::AdaptedProfile(int n, double gamma, RadialSolution sol, BranchCoefficients fg,
                               const std::vector<double>& scan)
    : n_(n), gamma_(gamma), sol_(std::move(sol)), fg_(fg), monotone_(true) {
  const double c = sol_.c();
  for (double t : scan)
    if (!(w_log_derivative(t) < c)) {
      monotone_ = false;
      break;
    }
}

Jet<double> AdaptedProfile::phi(double t) const {
  auto u = sol_.u_jet(t);
  return {u.value / fg_.F0, u.d1 / fg_.F0, u.d2 / fg_.F0};
}

double AdaptedProfile::w_log_derivative(double t) const {
  const auto y = sol_.state_at(t);
  return y[1] / y[0];
}

double AdaptedProfile::log_derivative(double t) const { return w_log_derivative(t) - sol_.c(); }

double AdaptedProfile::log_w_normalized(double t) const {
  return std::log(sol_.state_at(t)[0] / fg_.F0);
}

double AdaptedProfile::G0_expected() const {
  const auto sc = specfun::sphere_constants(n_, gamma_);
  return (n_ - 2.0 * gamma_) / (2.0 * sc.d_gamma) * sc.q_curv;
}

double AdaptedProfile::F1_relative_expected() const {
  return (n_ - 2.0 * gamma_) / (8.0 * (1.0 - gamma_)) * (n_ / 2.0);
}

AdaptedProfile adapted_profile(int n, double gamma, const AdaptedOptions& opts) {
  check_gamma_range(gamma);
  const auto metric = geometry::make_warped_metric(n, geometry::WarpSpec::hyperbolic());
  auto sol = solve_radial_mode(metric, n / 2.0 + gamma, 0, opts.solve);
  const auto fg = extract_fg(sol, opts.fit);
  const auto scan = geometry::linspace(opts.scan_lo, std::min(opts.scan_hi, sol.t_max()),
                                       opts.scan_points);
  return AdaptedProfile(n, gamma, std::move(sol), fg, scan);
}

std::string solution_csv(const RadialSolution& sol) {
  report::CsvTable tab;
  std::ostringstream os;
  os << "columns hold w = u*exp(c*t) and w' with c = n - s = " << report::format_real(sol.c());
  tab.comments.push_back(os.str());
  tab.comments.push_back("n = " + std::to_string(sol.n()) + ", s = " + report::format_real(sol.s()) +
                         ", k = " + std::to_string(sol.k()));
  tab.header = {"t", "u", "uprime"};
  for (std::size_t i = 0; i < sol.grid().size(); ++i)
    tab.rows.push_back({sol.grid()[i], sol.w()[i], sol.dw()[i]});
  return tab.str();
}

}  // namespace ahvol::scattering
