#pragma once

#include <cmath>
#include <functional>
#include <string>
#include <vector>

#include "ahvol/quad.hpp"

namespace ahvol::geometry {

enum class WarpKind { hyperbolic, perturbed, flat };

/// Warp description accepted by make_warped_metric.
///
/// perturbed: φ(t) = sinh(t) (1 + η(t)), η(t) = ε e^{-a t} s(t), where s is a
/// C^∞ step that vanishes identically on [0, 1/4] and equals 1 on [1, ∞).
/// flat: φ(t) = t (Euclidean space, used as a curvature reference only).
struct WarpSpec {
  WarpKind kind = WarpKind::hyperbolic;
  double amplitude = 0.0;   // ε
  double decay_rate = 3.0;  // a, must be >= 2
  std::string profile = "smoothstep";

  static WarpSpec hyperbolic() { return {}; }
  static WarpSpec perturbed(double eps, double a) {
    return {WarpKind::perturbed, eps, a, "smoothstep"};
  }
  static WarpSpec flat() { return {WarpKind::flat, 0.0, 0.0, "none"}; }
};

/// φ, φ', φ''.
template <class Real>
struct WarpSample {
  Real phi;
  Real dphi;
  Real d2phi;
};

/// Even Taylor series of φ(t)/t at the pole, valid for t < radius.
struct PoleSeries {
  std::vector<double> coeffs;  // φ(t)/t = Σ coeffs[j] t^{2j}
  double radius;
};

/// Rotationally symmetric metric dt² + φ(t)² g_{S^n}.
class WarpedMetric {
 public:
  WarpedMetric(int n, WarpSpec spec);

  int n() const { return n_; }
  WarpKind kind() const { return spec_.kind; }
  const WarpSpec& spec() const { return spec_; }
  bool is_hyperbolic() const {
    return spec_.kind == WarpKind::hyperbolic ||
           (spec_.kind == WarpKind::perturbed && spec_.amplitude == 0.0);
  }
  std::string label() const;

  template <class Real>
  WarpSample<Real> sample(Real t) const;

  /// φ'/φ - 1, evaluated without cancellation for large t.
  template <class Real>
  Real log_derivative_excess(Real t) const;

  template <class Real>
  Real log_derivative(Real t) const {
    return log_derivative_excess(t) + Real(1);
  }

  /// η(t) = φ(t)/sinh(t) - 1 (zero for the hyperbolic kind).
  double eta(double t) const;

  PoleSeries pole_series(int terms = 16) const;

 private:
  int n_;
  WarpSpec spec_;
};

/// Validates the spec by scanning φ > 0 and φ' > 0 on (0, 40]; throws
/// InvalidWarpError otherwise.
WarpedMetric make_warped_metric(int n, const WarpSpec& spec);

struct CurvatureReport {
  std::vector<double> t;
  std::vector<double> k_rad;   // -φ''/φ
  std::vector<double> k_tan;   // (1 - φ'²)/φ²
  std::vector<double> ricci_min;
  double ricci_defect;         // max(0, max_t(-n - smallest Ricci eigenvalue))
  double einstein_defect;      // max_t |Ric + n g| in the orthonormal frame
};

CurvatureReport curvature_report(const WarpedMetric& metric, const std::vector<double>& grid);

using RadialProfile = std::function<Jet<double>(double)>;

/// Δ₊u = u'' + n (φ'/φ) u' for a radial profile.
std::function<double(double)> radial_laplacian(const WarpedMetric& metric, RadialProfile profile);

struct VolumeCurve {
  std::vector<double> t;
  std::vector<double> area;        // V(Γ_t, g₊)
  std::vector<double> ball;        // V(B_t, g₊)
  std::vector<double> area_ratio;  // against the hyperbolic warp
  std::vector<double> ball_ratio;
  bool monotone;                   // ball_ratio nonincreasing (1e-12 slack)
  double quadrature_error;         // accumulated absolute error estimate
};

/// Areas, ball volumes and ratios against hyperbolic space on an increasing
/// positive grid. Ball volumes use adaptive Gauss-Kronrod with absolute
/// tolerance 1e-10 * ball(t_N); throws QuadratureError when not met.
VolumeCurve volume_data(const WarpedMetric& metric, const std::vector<double>& grid);

/// True iff values never increase by more than slack * max(1, |v|).
bool nonincreasing(const std::vector<double>& values, double slack);

std::vector<double> linspace(double a, double b, int count);

// ---------------------------------------------------------------------------

namespace detail {

// C^∞ step: 0 for x <= 0, 1 for x >= 1, with two analytic derivatives.
template <class Real>
WarpSample<Real> smooth_step(Real x) {
  using std::exp;
  auto g = [](Real y) -> WarpSample<Real> {
    // g(y) = e^{-1/y}; values below e^{-200} are flushed to zero.
    if (y <= Real(0.005)) return {Real(0), Real(0), Real(0)};
    const Real e = exp(-Real(1) / y);
    const Real iy = Real(1) / y;
    return {e, e * iy * iy, e * (iy * iy * iy * iy - 2 * iy * iy * iy)};
  };
  if (x <= Real(0)) return {Real(0), Real(0), Real(0)};
  if (x >= Real(1)) return {Real(1), Real(0), Real(0)};
  const auto a = g(x);
  const auto b = g(Real(1) - x);
  // b as a function of x: b' = -g'(1-x), b'' = g''(1-x)
  const Real h = b.phi, dh = -b.dphi, d2h = b.d2phi;
  const Real den = a.phi + h;
  const Real num1 = a.dphi * h - a.phi * dh;
  const Real dnum1 = a.d2phi * h - a.phi * d2h;
  const Real dden = a.dphi + dh;
  const Real f = a.phi / den;
  const Real f1 = num1 / (den * den);
  const Real f2 = (dnum1 * den - 2 * num1 * dden) / (den * den * den);
  return {f, f1, f2};
}

inline constexpr double kBumpStart = 0.25;

template <class Real>
WarpSample<Real> eta_jet(const WarpSpec& spec, Real t) {
  using std::exp;
  const Real width = Real(1) - Real(kBumpStart);
  auto s = smooth_step<Real>((t - Real(kBumpStart)) / width);
  s.dphi /= width;
  s.d2phi /= width * width;
  const Real a = Real(spec.decay_rate);
  const Real e = Real(spec.amplitude) * exp(-a * t);
  return {e * s.phi, e * (s.dphi - a * s.phi), e * (s.d2phi - 2 * a * s.dphi + a * a * s.phi)};
}

template <class Real>
Real coth_minus_one(Real t) {
  using std::expm1;
  return Real(2) / expm1(Real(2) * t);
}

}  // namespace detail

template <class Real>
WarpSample<Real> WarpedMetric::sample(Real t) const {
  using std::cosh;
  using std::sinh;
  switch (spec_.kind) {
    case WarpKind::flat:
      return {t, Real(1), Real(0)};
    case WarpKind::hyperbolic: {
      const Real s = sinh(t), c = cosh(t);
      return {s, c, s};
    }
    case WarpKind::perturbed: {
      const Real s = sinh(t), c = cosh(t);
      const auto e = detail::eta_jet<Real>(spec_, t);
      const Real one = Real(1) + e.phi;
      return {s * one, c * one + s * e.dphi, s * one + 2 * c * e.dphi + s * e.d2phi};
    }
  }
  return {};
}

template <class Real>
Real WarpedMetric::log_derivative_excess(Real t) const {
  switch (spec_.kind) {
    case WarpKind::flat:
      return Real(1) / t - Real(1);
    case WarpKind::hyperbolic:
      return detail::coth_minus_one(t);
    case WarpKind::perturbed: {
      const auto e = detail::eta_jet<Real>(spec_, t);
      return detail::coth_minus_one(t) + e.dphi / (Real(1) + e.phi);
    }
  }
  return {};
}

}  // namespace ahvol::geometry
