#pragma once

// Quadruple precision scalar used wherever a quantity is a product of a
// boundary-divergent factor (rho^-2 ~ e^{2t}) and an O(1) cancellation.

#include <boost/multiprecision/float128.hpp>

namespace ahvol {

using quad = boost::multiprecision::float128;

inline double to_double(const quad& q) { return static_cast<double>(q); }
inline double to_double(double d) { return d; }

/// Value with first and second derivative in the radial variable t.
template <class Real>
struct Jet {
  Real value{};
  Real d1{};
  Real d2{};
};

}  // namespace ahvol
