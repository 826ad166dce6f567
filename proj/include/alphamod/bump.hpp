#ifndef ALPHAMOD_BUMP_HPP
#define ALPHAMOD_BUMP_HPP

#include "alphamod/common.hpp"

namespace alphamod {

// Radial cutoff profile: identically 1 on [0,1], identically 0 on [2,inf),
// with a smooth transition on (1,2). Radial derivatives are available in
// closed form up to order 4.
struct BumpProfile {
  enum class Kind { SmoothExp, PolyC3 };
  Kind kind = Kind::SmoothExp;
  static constexpr int max_order = 4;

  double value(double r) const;
  double derivative(double r, int order) const;  // d^order/dr^order, order in [0,4]

  double operator()(const Vec& xi, int dim) const { return value(norm2(xi, dim)); }

  const char* name() const { return kind == Kind::SmoothExp ? "smooth-exp" : "poly-c3"; }
};

// Default transition: exp(1 - 1/(1 - t^2)) on t = r - 1 in (0,1).
BumpProfile smooth_transition_profile();

// C^3 polynomial transition, used as an alternate profile when probing
// how much computed quantities depend on the cutoff shape.
BumpProfile polynomial_transition_profile();

}  // namespace alphamod

#endif
