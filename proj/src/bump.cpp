#include "alphamod/bump.hpp"

#include <stdexcept>

namespace alphamod {

namespace {

// Transition value and d/dt derivatives of exp(1 - 1/(1 - t^2)) for t in (0,1).
double exp_glue(double t, int order) {
  double s = 1.0 - t * t;
  double e = std::exp(1.0 - 1.0 / s);
  if (e == 0.0) return 0.0;  // deep in the tail; every derivative underflows too
  if (order == 0) return e;

  double s2 = s * s, s3 = s2 * s, s4 = s3 * s, s5 = s4 * s;
  double t2 = t * t, t3 = t2 * t, t4 = t2 * t2;
  // g = 1 - 1/s composed under exp; chain derivatives of u = 1/s.
  double u1 = 2.0 * t / s2;
  double u2 = 2.0 / s2 + 8.0 * t2 / s3;
  double u3 = 24.0 * t / s3 + 48.0 * t3 / s4;
  double u4 = 24.0 / s3 + 288.0 * t2 / s4 + 384.0 * t4 / s5;
  double g1 = -u1, g2 = -u2, g3 = -u3, g4 = -u4;

  switch (order) {
    case 1:
      return g1 * e;
    case 2:
      return (g2 + g1 * g1) * e;
    case 3:
      return (g3 + 3.0 * g1 * g2 + g1 * g1 * g1) * e;
    case 4:
      return (g4 + 4.0 * g1 * g3 + 3.0 * g2 * g2 + 6.0 * g1 * g1 * g2 +
              g1 * g1 * g1 * g1) *
             e;
    default:
      throw std::invalid_argument("exp_glue: derivative order out of range");
  }
}

// 1 - S(t) with S the degree-7 smoothstep; C^3 at both glue points.
double poly_glue(double t, int order) {
  // S(t) = 35 t^4 - 84 t^5 + 70 t^6 - 20 t^7
  static const double c[8] = {0, 0, 0, 0, 35, -84, 70, -20};
  double v = 0.0;
  for (int j = 4; j <= 7; ++j) {
    if (j - order < 0) continue;
    double coef = c[j];
    for (int d = 0; d < order; ++d) coef *= (j - d);
    v += coef * std::pow(t, j - order);
  }
  return order == 0 ? 1.0 - v : -v;
}

}  // namespace

double BumpProfile::value(double r) const { return derivative(r, 0); }

double BumpProfile::derivative(double r, int order) const {
  if (order < 0 || order > max_order)
    throw std::invalid_argument("BumpProfile: derivative order out of range");
  if (r < 0.0) throw std::invalid_argument("BumpProfile: negative radius");
  if (r <= 1.0) return order == 0 ? 1.0 : 0.0;
  if (r >= 2.0) return 0.0;
  double t = r - 1.0;
  return kind == Kind::SmoothExp ? exp_glue(t, order) : poly_glue(t, order);
}

BumpProfile smooth_transition_profile() { return BumpProfile{BumpProfile::Kind::SmoothExp}; }

BumpProfile polynomial_transition_profile() { return BumpProfile{BumpProfile::Kind::PolyC3}; }

}  // namespace alphamod
