#pragma once

#include <vector>

namespace ahvol::escobar {

struct EscobarReport {
  int n;
  double ya_hemisphere;     // n(n+1)(|S^{n+1}|/2)^{2/(n+1)}
  double ya_quadrature;     // R̃ V(X̄, g̃)^{2/(n+1)} with V by quadrature
  double yb_conversion;     // 4n/(n-1)
  double rtilde_max_dev;    // max |R̃ - n(n+1)|, conformal-change route
  double rtilde_cross_dev;  // max |R̃_conformal - R̃_sectional|
  double sectional_max_dev; // max |K - 1| over radial and tangential planes
  double equator_H;         // |H̃| at the largest radius
  double volume;            // V(X̄, g̃) by quadrature up to t = 40
  double ratio_limit;       // volume / (|S^{n+1}|/2)
  std::vector<double> t;
  std::vector<double> ball_ratio;  // V(B_t, g̃) / V(B_{gd t}, g_{S^{n+1}})
  bool ratio_monotone;
  double cosh_max_rel_dev;  // s = n+1 solution against cosh t
  double cosh_x2_coefficient;
};

/// Hemisphere compactification g̃ = sech²(t) g_H of the model.
EscobarReport hemisphere_check(int n, const std::vector<double>& grid);

double yb_factor(int n);

/// (4n/(n-1)) y1.
double yb_value(int n, double y1);

double ya_hemisphere(int n);

}  // namespace ahvol::escobar
