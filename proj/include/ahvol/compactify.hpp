#pragma once

#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "ahvol/geometry.hpp"
#include "ahvol/quad.hpp"
#include "ahvol/scattering.hpp"

namespace ahvol::compactify {

enum class CompactKind { type_i, type_ii, hemisphere, rescaled };

std::string to_string(CompactKind kind);

/// log ρ and its first two t-derivatives.
struct LogProfile {
  quad log_rho;
  quad f1;
  quad f2;
};

using LogFactor = std::function<Jet<double>(double)>;

/// Defining function ρ(t) of the compactified metric ρ² g₊ with weight ρ^m.
///
/// type_i / type_ii: ρ = Φ^{2/(n-2γ)} with Φ the normalized k = 0 solution.
/// hemisphere: ρ = 1/cosh t with m = 0 and γ = 1/2.
/// rescaled: ρ = e^{h} ρ_base for a radial log-factor h (a conformal change of
/// the compactified metric, the weight exponent is inherited).
class Compactification {
 public:
  CompactKind kind() const { return kind_; }
  int n() const { return n_; }
  double gamma() const { return gamma_; }
  double m() const { return m_; }
  /// Metric whose radial equation defines ρ (the model for every kind).
  const geometry::WarpedMetric& source() const { return source_; }
  /// Adapted profile behind type_i/type_ii (also through rescaled); may be null.
  const scattering::AdaptedProfile* adapted() const;

  LogProfile profile(double t) const;
  /// ρ, ρ', ρ'' in double precision.
  Jet<double> rho(double t) const;
  /// -log(ρ/2), the boundary distance function (r̄ or t̃).
  double boundary_distance(double t) const;

 private:
  friend Compactification build_compactification(CompactKind, int, double,
                                                  const geometry::WarpedMetric&,
                                                  const scattering::AdaptedOptions&);
  friend Compactification rescale(const Compactification&, LogFactor);
  Compactification(CompactKind kind, int n, double gamma, double m, geometry::WarpedMetric source);

  CompactKind kind_;
  int n_;
  double gamma_;
  double m_;
  geometry::WarpedMetric source_;
  std::shared_ptr<const scattering::AdaptedProfile> adapted_;
  std::shared_ptr<const Compactification> base_;
  LogFactor h_;
};

/// type_i requires the hyperbolic metric; hemisphere ignores gamma (uses 1/2).
Compactification build_compactification(CompactKind kind, int n, double gamma,
                                         const geometry::WarpedMetric& metric,
                                         const scattering::AdaptedOptions& opts = {});

/// ρ → e^{h} ρ, i.e. ḡ → e^{2h} ḡ.
Compactification rescale(const Compactification& base, LogFactor h);

/// Weighted scalar curvature J^m_ψ of ρ² g₊ from its definition (scalar
/// curvature of the compactified metric, Δ̄ρ and |∇̄ρ|²), in quad precision.
quad weighted_J_definition(const Compactification& c, const geometry::WarpedMetric& metric, double t);

/// The same quantity from e^{2t̃}/4 (Δ₊t̃ - ((n-2γ)/2)|∇t̃|² - (n+2γ)/2),
/// valid when R₊ = -n(n+1).
quad weighted_J_conformal(const Compactification& c, const geometry::WarpedMetric& metric, double t);

struct WeightedJ {
  std::vector<double> values;      // returned values (conformal route when it applies)
  std::vector<double> definition;  // definition route
  bool cross_checked;              // metric has constant scalar curvature -n(n+1)
  double max_deviation;            // between the two routes, 0 when not cross-checked
};

/// Throws CrossCheckError when the two routes disagree by more than 1e-7.
WeightedJ weighted_J_detailed(const Compactification& c, const geometry::WarpedMetric& metric,
                              const std::vector<double>& grid);
std::vector<double> weighted_J(const Compactification& c, const geometry::WarpedMetric& metric,
                               const std::vector<double>& grid);

/// Radial function U(t) times a degree-k spherical harmonic, with two
/// derivatives in quad precision.
using QuadProfile = std::function<Jet<quad>(double)>;

/// L̄U = -Δ̄_ψ U + ((m+n-1)/2) J U, with Δ̄_ψ = Δ̄ - ∇̄ψ·∇̄ and ρ^m = e^{-ψ}.
std::vector<double> apply_weighted_laplacian(const Compactification& c,
                                             const geometry::WarpedMetric& metric,
                                             const QuadProfile& U, const std::vector<double>& grid,
                                             int k = 0);

/// U = ρ^{s-n} u_k / F0_k for the model mode-k solution u_k.
QuadProfile poisson_lift(const Compactification& c, int k,
                         const scattering::SolveOptions& opts = {});

struct Extrapolation {
  double limit;
  double rate;  // exponent of the fitted correction e^{rate t}
  double t_fit; // outermost radius used
};

/// Fits v(t) ≈ L + C e^{rate t} at t_fit - 2h, t_fit - h, t_fit, lowering
/// t_fit from t_max until consecutive differences exceed rel_gap relative.
Extrapolation extrapolate(const std::function<double(double)>& v, double t_max, double h = 2.0,
                          double rel_gap = 1e-6);

struct MeanCurvature {
  std::vector<double> values;  // H ρ^m on Σ_t
  double limit;
  double rate;
};

double mean_curvature(const Compactification& c, const geometry::WarpedMetric& metric, double t);

MeanCurvature mean_curvature_weighted(const Compactification& c,
                                      const geometry::WarpedMetric& metric,
                                      const std::vector<double>& grid);

struct EnergyResult {
  double value;
  double tail;            // |E(r) - E(r - 1)|
  double quadrature_error;
};

/// Weighted energy of U = trial on X̄_r = {t <= r}.
EnergyResult energy(const Compactification& c, const geometry::WarpedMetric& metric,
                    const LogFactor& trial, double r_max);

struct VolumeLimit {
  std::vector<double> values;  // V(Γ_t, ρ² g₊) = (ρφ)^n |S^n|
  double limit;
  double rate;                 // decay exponent, positive
};

VolumeLimit boundary_volume(const Compactification& c, const geometry::WarpedMetric& metric,
                            const std::vector<double>& grid);

struct Sectional {
  double k_rad;
  double k_tan;
};

/// Sectional curvatures of ρ² g₊.
Sectional sectional_curvatures(const Compactification& c, const geometry::WarpedMetric& metric,
                               double t);

/// CSV t,rho,J_weighted,H_weighted.
std::string diagnostics_csv(const Compactification& c, const geometry::WarpedMetric& metric,
                            const std::vector<double>& grid);

}  // namespace ahvol::compactify
