#ifndef ALPHAMOD_COVER_HPP
#define ALPHAMOD_COVER_HPP

#include "alphamod/bump.hpp"
#include "alphamod/common.hpp"

namespace alphamod {

struct CoverParams {
  double alpha = 0.0;
  int dim = 1;
  double C = 0.0;            // permitted support constant; 0 selects the default
  int k_max = 32;            // lattice truncation radius per coordinate
  double window_radius = 0;  // working frequency window; 0 derives it from k_max

  double scaling_exponent() const { return alpha / (1.0 - alpha); }  // A
  static double default_C(double alpha);
  void validate() const;
};

// One bump family {eta_k}: each band sits on the ball of center <k>^A k and
// radius C <k>^A, the family sums to 1 on the working window, and derivative
// magnitudes scale like <k>^{-|beta| A}.
//
// Construction: g_k(xi) = profile(|xi - center_k| / (c1 <k>^A)), normalized by
// the running sum D = sum_j g_j. The interior constant c1 is chosen so the
// unit plateaus of the g_k already cover the window; D >= 1 there, which is
// what lets eta inherit the profile's derivative scaling.
struct AlphaCover {
  CoverParams params;
  BumpProfile profile;
  double A = 0.0;
  double c1 = 0.0;
  double window_radius = 0.0;
  double denominator_floor = 0.0;  // min of D over the construction sweep
  std::vector<Idx> lattice;        // lexicographic order

  // cached per-index geometry, aligned with `lattice`
  std::vector<Vec> centers;
  std::vector<double> scales;  // <k>^A

  int dim() const { return params.dim; }
  Vec center(const Idx& k) const { return std::pow(bracket(k, dim()), A) * to_vec(k); }
  double scale(const Idx& k) const { return std::pow(bracket(k, dim()), A); }
  double radius(const Idx& k) const { return params.C * scale(k); }          // permitted
  double support_radius(const Idx& k) const { return 2.0 * c1 * scale(k); }  // actual

  int find(const Idx& k) const;  // position in `lattice`, -1 if not retained

  double bump(int pos, const Vec& xi) const;         // g_k
  double denominator(const Vec& xi) const;           // sum_j g_j, lattice order
  double eta(const Idx& k, const Vec& xi) const;     // partition member
  double rho(const Idx& k, const Vec& xi) const;     // plateau family, = 1 on supp eta
  double kappa(const Idx& k, const Vec& xi) const;   // same shape as rho
  std::vector<int> contributors(const Vec& xi) const;  // positions with g > 0, ascending

  uint64_t hash() const;
};

AlphaCover make_cover(CoverParams params,
                      const BumpProfile& profile = smooth_transition_profile());

struct DerivativeConstant {
  MultiIndex beta;
  double c_prime = 0.0;  // sup_k <k>^{|beta| A} sup_xi |d^beta eta_k|
  Idx attained_at{0, 0};
};

struct SupportViolation {
  Idx k;
  Vec xi;
  double value;
};

struct CoverReport {
  double partition_defect = 0.0;  // max |sum eta - 1| over the sampled window
  int overlap = 0;                // max simultaneous supports (V)
  std::vector<DerivativeConstant> derivative_constants;
  std::vector<SupportViolation> support_violations;
  double denominator_floor = 0.0;
  double window_radius = 0.0;
  bool pass = false;
};

// Samples the window (which must sit inside the covered region) and checks
// the three defining properties. Failures come back in the report rather
// than as exceptions.
CoverReport verify_cover(const AlphaCover& cover, double window_radius, int max_order = 3,
                         uint64_t seed = 0x5eed);

// Translation-invariant uniform partition member phi (the alpha = 0 bump at
// the origin, normalized against the full integer lattice): sum over l of
// phi(z - l) = 1 for every z, supp phi inside |z| <= sqrt(dim).
double uniform_phi(const Vec& z, int dim,
                   const BumpProfile& profile = smooth_transition_profile());

}  // namespace alphamod

#endif
