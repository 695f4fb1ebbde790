#include "ahvol/yamabe.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "ahvol/error.hpp"
#include "ahvol/specfun.hpp"

namespace ahvol::yamabe {

ZonalQuadrature gauss_gegenbauer(int n, int count) {
  if (n < 2) throw DomainError("zonal quadrature needs n >= 2");
  if (count < 1) throw DomainError("node count must be positive");
  const double lam = (n - 1) / 2.0;
  Eigen::VectorXd diag = Eigen::VectorXd::Zero(count);
  Eigen::VectorXd off(std::max(count - 1, 0));
  for (int k = 1; k < count; ++k) {
    const double beta = k * (k + 2 * lam - 1) / (4.0 * (k + lam) * (k + lam - 1));
    off(k - 1) = std::sqrt(beta);
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
  es.computeFromTridiagonal(diag, off, Eigen::ComputeEigenvectors);
  const double mu0 = std::exp(0.5 * std::log(M_PI) + specfun::log_gamma(lam + 0.5).log_abs -
                              specfun::log_gamma(lam + 1.0).log_abs);
  ZonalQuadrature q;
  q.n = n;
  for (int i = 0; i < count; ++i) {
    q.x.push_back(es.eigenvalues()(i));
    const double v = es.eigenvectors()(0, i);
    q.w.push_back(mu0 * v * v);
  }
  return q;
}

std::vector<std::vector<double>> zonal_basis(int n, int kmax, const std::vector<double>& x) {
  const double lam = (n - 1) / 2.0;
  const double s1 = specfun::sphere_volume(n - 1);
  std::vector<std::vector<double>> Y(kmax + 1, std::vector<double>(x.size()));
  std::vector<double> norm(kmax + 1);
  for (int k = 0; k <= kmax; ++k) {
    const double log_h = std::log(M_PI) + (1 - 2 * lam) * std::log(2.0) +
                         specfun::log_gamma(k + 2 * lam).log_abs -
                         specfun::log_gamma(k + 1.0).log_abs - std::log(k + lam) -
                         2 * specfun::log_gamma(lam).log_abs;
    norm[k] = 1.0 / std::sqrt(s1 * std::exp(log_h));
  }
  for (std::size_t i = 0; i < x.size(); ++i) {
    double c0 = 1.0, c1 = 2 * lam * x[i];
    Y[0][i] = c0 * norm[0];
    if (kmax >= 1) Y[1][i] = c1 * norm[1];
    for (int k = 2; k <= kmax; ++k) {
      const double c2 = (2 * x[i] * (k + lam - 1) * c1 - (k + 2 * lam - 2) * c0) / k;
      Y[k][i] = c2 * norm[k];
      c0 = c1;
      c1 = c2;
    }
  }
  return Y;
}

double gram_defect(int n, int kmax, const ZonalQuadrature& q) {
  const auto Y = zonal_basis(n, kmax, q.x);
  const double s1 = specfun::sphere_volume(n - 1);
  double worst = 0.0;
  for (int a = 0; a <= kmax; ++a)
    for (int b = a; b <= kmax; ++b) {
      double g = 0.0;
      for (std::size_t i = 0; i < q.x.size(); ++i) g += q.w[i] * Y[a][i] * Y[b][i];
      worst = std::max(worst, std::abs(s1 * g - (a == b ? 1.0 : 0.0)));
    }
  return worst;
}

ZonalTrial make_trial(int n, std::vector<double> coeffs, int node_count) {
  if (coeffs.empty()) throw DomainError("trial needs at least one coefficient");
  ZonalTrial t;
  t.n = n;
  t.coeffs = std::move(coeffs);
  t.quadrature = gauss_gegenbauer(n, std::max(node_count, 2 * t.kmax() + 16));
  return t;
}

std::vector<double> trial_values(const ZonalTrial& trial) {
  const auto Y = zonal_basis(trial.n, trial.kmax(), trial.quadrature.x);
  std::vector<double> f(trial.quadrature.x.size(), 0.0);
  for (int k = 0; k <= trial.kmax(); ++k)
    for (std::size_t i = 0; i < f.size(); ++i) f[i] += trial.coeffs[k] * Y[k][i];
  return f;
}

bool admissible(const ZonalTrial& trial) {
  const auto f = trial_values(trial);
  return std::all_of(f.begin(), f.end(), [](double v) { return v > 0.0; });
}

std::vector<ZonalTrial> random_admissible_trials(int n, int kmax, int count, std::uint64_t seed,
                                                 double scale) {
  const auto q = gauss_gegenbauer(n, 2 * kmax + 16);
  const auto Y = zonal_basis(n, kmax, q.x);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  std::vector<ZonalTrial> out;
  for (int r = 0; r < count; ++r) {
    ZonalTrial t;
    t.n = n;
    t.quadrature = q;
    t.coeffs.assign(kmax + 1, 0.0);
    t.coeffs[0] = std::sqrt(specfun::sphere_volume(n));
    for (int k = 1; k <= kmax; ++k) {
      double m = 0.0;
      for (double v : Y[k]) m = std::max(m, std::abs(v));
      t.coeffs[k] = scale * dist(rng) / ((k + 1) * m);
    }
    out.push_back(std::move(t));
  }
  return out;
}

namespace {

double exponent(int n, double gamma) { return 2.0 * n / (n - 2.0 * gamma); }

std::vector<double> multipliers(int n, double gamma, int kmax) {
  std::vector<double> m(kmax + 1);
  for (int k = 0; k <= kmax; ++k) m[k] = specfun::sphere_multiplier(n, gamma, k);
  return m;
}

}  // namespace

double rayleigh_quotient(int n, double gamma, const ZonalTrial& trial) {
  if (trial.n != n) throw DomainError("trial dimension differs from n");
  const auto f = trial_values(trial);
  for (double v : f)
    if (!(v > 0.0)) throw InadmissibleTrialError("trial is not positive at every node");
  const auto M = multipliers(n, gamma, trial.kmax());
  double num = 0.0;
  for (int k = 0; k <= trial.kmax(); ++k) num += trial.coeffs[k] * trial.coeffs[k] * M[k];
  const double p = exponent(n, gamma);
  double I = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) I += trial.quadrature.w[i] * std::pow(f[i], p);
  I *= specfun::sphere_volume(n - 1);
  return num / std::pow(I, 2.0 / p);
}

namespace {

// Quotient of the degree-2kmax projection of exp(g) as a function of the
// log-coefficients of g.
class LogProblem {
 public:
  LogProblem(int n, double gamma, int kmax)
      : n_(n), kg_(kmax), kf_(2 * kmax), p_(exponent(n, gamma)),
        s1_(specfun::sphere_volume(n - 1)), q_(gauss_gegenbauer(n, 2 * kf_ + 16)),
        Y_(zonal_basis(n, kf_, q_.x)), M_(multipliers(n, gamma, kf_)) {}

  int kmax() const { return kg_; }
  const ZonalQuadrature& quadrature() const { return q_; }
  double node_max(int k) const {
    double m = 0.0;
    for (double v : Y_[k]) m = std::max(m, std::abs(v));
    return m;
  }

  std::vector<double> project(const std::vector<double>& a, std::vector<double>* expg = nullptr) const {
    const std::size_t N = q_.x.size();
    std::vector<double> e(N);
    for (std::size_t i = 0; i < N; ++i) {
      double g = 0.0;
      for (int l = 0; l <= kg_; ++l) g += a[l] * Y_[l][i];
      e[i] = std::exp(g);
    }
    std::vector<double> c(kf_ + 1, 0.0);
    for (int k = 0; k <= kf_; ++k) {
      double acc = 0.0;
      for (std::size_t i = 0; i < N; ++i) acc += q_.w[i] * e[i] * Y_[k][i];
      c[k] = s1_ * acc;
    }
    if (expg) *expg = std::move(e);
    return c;
  }

  // Returns +inf for inadmissible projections.
  double value(const std::vector<double>& a, std::vector<double>* grad = nullptr) const {
    std::vector<double> e;
    const auto c = project(a, &e);
    const std::size_t N = q_.x.size();
    std::vector<double> f(N, 0.0);
    for (int k = 0; k <= kf_; ++k)
      for (std::size_t i = 0; i < N; ++i) f[i] += c[k] * Y_[k][i];
    for (double v : f)
      if (!(v > 0.0)) return std::numeric_limits<double>::infinity();
    double num = 0.0;
    for (int k = 0; k <= kf_; ++k) num += c[k] * c[k] * M_[k];
    double I = 0.0;
    for (std::size_t i = 0; i < N; ++i) I += q_.w[i] * std::pow(f[i], p_);
    I *= s1_;
    const double D = std::pow(I, 2.0 / p_);
    const double Q = num / D;
    if (grad) {
      // dQ/dc_k, then chain through c_k = s1 Σ w e Y_k.
      std::vector<double> fp(N);
      for (std::size_t i = 0; i < N; ++i) fp[i] = q_.w[i] * std::pow(f[i], p_ - 1.0);
      std::vector<double> gc(kf_ + 1);
      for (int k = 0; k <= kf_; ++k) {
        double acc = 0.0;
        for (std::size_t i = 0; i < N; ++i) acc += fp[i] * Y_[k][i];
        gc[k] = 2.0 * c[k] * M_[k] / D - 2.0 * num / (D * I) * s1_ * acc;
      }
      std::vector<double> h(N, 0.0);
      for (int k = 0; k <= kf_; ++k)
        for (std::size_t i = 0; i < N; ++i) h[i] += gc[k] * Y_[k][i];
      grad->assign(kg_ + 1, 0.0);
      for (int l = 0; l <= kg_; ++l) {
        double acc = 0.0;
        for (std::size_t i = 0; i < N; ++i) acc += q_.w[i] * e[i] * Y_[l][i] * h[i];
        (*grad)[l] = s1_ * acc;
      }
    }
    return Q;
  }

 private:
  int n_, kg_, kf_;
  double p_, s1_;
  ZonalQuadrature q_;
  std::vector<std::vector<double>> Y_;
  std::vector<double> M_;
};

double norm2(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

struct Descent {
  std::vector<double> a;
  double value;
  int iters;
  bool converged;
};

Descent descend(const LogProblem& prob, std::vector<double> a, const MinimizeOptions& opts) {
  std::vector<double> g;
  double Q = prob.value(a, &g);
  if (!std::isfinite(Q)) throw InadmissibleTrialError("initial trial is not admissible");
  double step = 1.0;
  int it = 0;
  bool converged = false;
  std::vector<double> trial(a.size()), gt;
  for (; it < opts.max_iters; ++it) {
    const double gn = norm2(g);
    if (gn <= opts.grad_tol * std::max(1.0, Q)) {
      converged = true;
      break;
    }
    double Qt = Q;
    bool found = false;
    for (; step > 1e-20; step *= 0.5) {
      for (std::size_t l = 0; l < a.size(); ++l) trial[l] = a[l] - step * g[l];
      Qt = prob.value(trial, &gt);
      if (Qt <= Q - 1e-4 * step * gn * gn) {
        found = true;
        break;
      }
    }
    // no Armijo step left: the gradient is at the roundoff floor
    if (!found) {
      converged = gn <= 1e-6 * std::max(1.0, Q);
      break;
    }
    const double decrease = Q - Qt;
    a = trial;
    Q = Qt;
    g = gt;
    step *= 2.0;
    if (decrease <= 1e-15 * Q) {
      converged = true;
      ++it;
      break;
    }
  }
  return {a, Q, it, converged};
}

}  // namespace

std::vector<std::vector<double>> seeded_starts(int n, const MinimizeOptions& opts) {
  if (opts.restarts < 1) throw DomainError("restarts must be >= 1");
  if (opts.kmax < 0 || opts.kmax > 32) throw DomainError("kmax must lie in [0, 32]");
  const LogProblem prob(n, 0.5, opts.kmax);
  std::mt19937_64 rng(opts.seed);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  std::vector<std::vector<double>> starts;
  starts.emplace_back(opts.kmax + 1, 0.0);
  for (int r = 1; r < opts.restarts; ++r) {
    std::vector<double> a(opts.kmax + 1, 0.0);
    for (int l = 1; l <= opts.kmax; ++l)
      a[l] = opts.init_scale * dist(rng) / (prob.node_max(l) * std::sqrt(static_cast<double>(opts.kmax)));
    starts.push_back(std::move(a));
  }
  return starts;
}

MinimizeResult minimize_rayleigh(int n, double gamma, const MinimizeOptions& opts,
                                 const std::vector<std::vector<double>>& starts) {
  if (starts.empty()) throw DomainError("at least one start is required");
  if (opts.kmax < 0 || opts.kmax > 32) throw DomainError("kmax must lie in [0, 32]");
  const LogProblem prob(n, gamma, opts.kmax);
  MinimizeResult res{};
  res.min = std::numeric_limits<double>::infinity();
  std::vector<double> best_a;
  for (std::size_t r = 0; r < starts.size(); ++r) {
    if (static_cast<int>(starts[r].size()) != opts.kmax + 1)
      throw DomainError("start vector length must be kmax + 1");
    const auto d = descend(prob, starts[r], opts);
    res.restarts.push_back({d.value, d.iters, d.converged});
    if (d.value < res.min) {
      res.min = d.value;
      res.iters = d.iters;
      res.converged = d.converged;
      res.best_restart = static_cast<int>(r);
      best_a = d.a;
    }
  }
  ZonalTrial t;
  t.n = n;
  t.coeffs = prob.project(best_a);
  t.quadrature = prob.quadrature();
  res.argmin = std::move(t);
  return res;
}

MinimizeResult minimize_rayleigh(int n, double gamma, const MinimizeOptions& opts) {
  return minimize_rayleigh(n, gamma, opts, seeded_starts(n, opts));
}

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::pass:
      return "pass";
    case Verdict::fail:
      return "fail";
    case Verdict::not_applicable:
      return "not-applicable";
  }
  return "?";
}

ChainReport theorem_chain_report(int n, double gamma, const geometry::WarpedMetric& metric,
                                 const std::vector<double>& grid) {
  if (!(gamma > 0.0 && gamma < 1.0)) throw DomainError("gamma must lie in (0, 1)");
  if (metric.n() != n) throw DomainError("metric dimension differs from n");
  ChainReport r;
  r.n = n;
  r.gamma = gamma;
  r.metric = metric.label();
  r.y_sphere = specfun::sphere_constants(n, gamma).yamabe;
  // every implemented warp has the round sphere as conformal infinity
  r.y_manifold = rayleigh_quotient(n, gamma, make_trial(n, {1.0}));
  r.lower_bound = std::pow(r.y_manifold / r.y_sphere, n / (2.0 * gamma));
  r.eta = geometry::volume_data(metric, grid);
  r.bg_monotone = r.eta.monotone;
  r.ricci_defect = geometry::curvature_report(metric, grid).ricci_defect;
  if (!metric.is_hyperbolic()) {
    r.verdict = Verdict::not_applicable;
    return r;
  }
  constexpr double tol = 1e-8;
  bool ok = true;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    ok = ok && r.lower_bound <= r.eta.area_ratio[i] + tol;
    ok = ok && r.eta.area_ratio[i] <= r.eta.ball_ratio[i] + tol;
    ok = ok && r.eta.ball_ratio[i] <= 1.0 + tol;
  }
  r.verdict = ok ? Verdict::pass : Verdict::fail;
  return r;
}

ChainReport theorem_chain_report(int n, double gamma, const geometry::WarpedMetric& metric) {
  return theorem_chain_report(n, gamma, metric, geometry::linspace(0.1, 20.0, 200));
}

}  // namespace ahvol::yamabe
