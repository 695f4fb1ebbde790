#pragma once

#include <array>
#include <string>
#include <vector>

#include "ahvol/geometry.hpp"
#include "ahvol/quad.hpp"

namespace ahvol::scattering {

struct SolveOptions {
  double t_max = 30.0;
  double rel_tol = 1e-12;
  double t0 = 1e-3;        // Frobenius start
  int series_terms = 12;   // even terms kept in the pole series
  double amplitude = 1.0;  // scale of the regular solution
};

/// Radial solution of u'' + n(φ'/φ)u' - k(k+n-1)u/φ² + s(n-s)u = 0, stored as
/// the rescaled variable w = u e^{c t} with c = n - s at the accepted steps of
/// an adaptive Runge-Kutta-Fehlberg 7(8) integration. Values between steps
/// are obtained by re-integrating from the nearest stored node.
class RadialSolution {
 public:
  RadialSolution(geometry::WarpedMetric metric, double s, int k, SolveOptions opts);

  int n() const { return metric_.n(); }
  int k() const { return k_; }
  double s() const { return s_; }
  double c() const { return n() - s_; }  // rescaling exponent
  const geometry::WarpedMetric& metric() const { return metric_; }
  const SolveOptions& options() const { return opts_; }

  const std::vector<double>& grid() const { return t_; }
  const std::vector<double>& w() const { return w_; }
  const std::vector<double>& dw() const { return dw_; }
  double t_min() const { return t_.front(); }
  double t_max() const { return t_.back(); }

  /// (w, w') at t; below the start point the pole series is used.
  std::array<double, 2> state_at(double t) const;
  /// w, w' and w'' (the latter from the equation).
  Jet<double> w_jet(double t) const;
  /// u = w e^{-ct} with two derivatives.
  Jet<double> u_jet(double t) const;

  /// Right-hand side of the first-order system in (w, w').
  std::array<double, 2> rhs(double t, const std::array<double, 2>& y) const;

 private:
  friend RadialSolution solve_radial_mode(const geometry::WarpedMetric&, double, int,
                                          const SolveOptions&);
  friend RadialSolution integrate_from(const geometry::WarpedMetric&, double, int, double,
                                       std::array<double, 2>, const SolveOptions&);

  void integrate(double t_start, std::array<double, 2> y0);
  std::array<double, 2> series_state(double t) const;

  geometry::WarpedMetric metric_;
  double s_;
  int k_;
  SolveOptions opts_;
  std::vector<double> series_;  // coefficients of t^{k+2j} in u
  std::vector<double> t_, w_, dw_;
};

RadialSolution solve_radial_mode(const geometry::WarpedMetric& metric, double s, int k,
                                 const SolveOptions& opts = {});

/// Integrates arbitrary data (w, w') given at t_start > 0 up to opts.t_max.
RadialSolution integrate_from(const geometry::WarpedMetric& metric, double s, int k,
                              double t_start, std::array<double, 2> state,
                              const SolveOptions& opts = {});

struct FitOptions {
  int radii = 3;          // fit radii T, T - spacing, ...
  double spacing = 2.0;
  double f1_t_lo = 4.0;   // window for the x² coefficient of F
  double f1_t_hi = 12.0;
};

/// Branch coefficients of u = x^{n-s}F + x^s G, x = 2e^{-t}.
struct BranchCoefficients {
  double F0, G0;
  double eF, eG;
  double F1, eF1;  // x² coefficient of F (absolute, not divided by F0)
};

BranchCoefficients extract_fg(const RadialSolution& sol, const FitOptions& opts = {});

struct Multiplier {
  double value;  // d_γ G0/F0
  double error;
  BranchCoefficients fg;
};

Multiplier scattering_multiplier_detailed(int n, double gamma, int k,
                                          const SolveOptions& opts = {});
double scattering_multiplier(int n, double gamma, int k, const SolveOptions& opts = {});

/// Hyperbolic k = 0 solution normalized so that F0 = 1.
class AdaptedProfile {
 public:
  AdaptedProfile(int n, double gamma, RadialSolution sol, BranchCoefficients fg,
                 const std::vector<double>& scan);

  int n() const { return n_; }
  double gamma() const { return gamma_; }
  const RadialSolution& solution() const { return sol_; }
  const BranchCoefficients& branches() const { return fg_; }

  /// Φ with two derivatives.
  Jet<double> phi(double t) const;
  /// Φ'/Φ.
  double log_derivative(double t) const;
  /// (w'/w)(t); Φ'/Φ = this - (n/2 - γ), kept separate to avoid cancellation.
  double w_log_derivative(double t) const;
  /// log(Φ) + (n/2 - γ) t = log(w / F0).
  double log_w_normalized(double t) const;

  double G0() const { return fg_.G0 / fg_.F0; }
  double eG0() const { return fg_.eG / std::abs(fg_.F0) + std::abs(G0()) * fg_.eF / std::abs(fg_.F0); }
  double G0_expected() const;
  double F1_relative() const { return fg_.F1 / fg_.F0; }
  double eF1_relative() const { return fg_.eF1 / std::abs(fg_.F0); }
  double F1_relative_expected() const;
  bool monotone() const { return monotone_; }

 private:
  int n_;
  double gamma_;
  RadialSolution sol_;
  BranchCoefficients fg_;
  bool monotone_;
};

struct AdaptedOptions {
  SolveOptions solve;
  FitOptions fit;
  double scan_lo = 0.01;
  double scan_hi = 30.0;
  int scan_points = 3000;
};

AdaptedProfile adapted_profile(int n, double gamma, const AdaptedOptions& opts = {});

/// CSV of (t, w, w') at the stored nodes, rescaling exponent in a comment.
std::string solution_csv(const RadialSolution& sol);

}  // namespace ahvol::scattering
