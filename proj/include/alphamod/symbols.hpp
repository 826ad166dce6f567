#ifndef ALPHAMOD_SYMBOLS_HPP
#define ALPHAMOD_SYMBOLS_HPP

#include <functional>

#include "alphamod/cover.hpp"
#include "alphamod/grid.hpp"

namespace alphamod {

struct SymbolClass {
  double b = 0.0;
  double rho = 0.0;
  double delta = 0.0;
};

// A symbol sigma(x, xi) given by an evaluation oracle, optionally with
// analytic derivatives and a separable expansion for fast application.
struct Symbol {
  enum class DerivKind { None, XOnly, Full };

  std::function<cplx(const Vec& x, const Vec& xi)> eval;
  // d_x^beta d_xi^gamma sigma; consulted per DerivKind, finite differences
  // fill in the rest.
  std::function<cplx(const MultiIndex& beta, const MultiIndex& gamma, const Vec& x,
                     const Vec& xi)>
      deriv;
  DerivKind deriv_kind = DerivKind::None;
  int deriv_order = 0;

  SymbolClass cls;
  int dim = 1;
  bool x_independent = false;

  // Optional expansion sigma = sum_t xfactor_t(x) * multiplier_t(xi).
  struct Term {
    std::function<cplx(const Vec& x)> xfactor;
    std::function<double(const Vec& xi)> multiplier;
  };
  std::vector<Term> terms;

  cplx operator()(const Vec& x, const Vec& xi) const { return eval(x, xi); }
};

Symbol constant_symbol(cplx value = 1.0, int dim = 1);
Symbol bessel_symbol(double b, int dim = 1);  // (1 + |xi|^2)^{b/2}, class (b, 1, 0)

// Derivative of a symbol, analytic where declared, central differences
// elsewhere. hx is the x step; the xi step scales like (1+|xi|)^rho * 1e-3.
cplx symbol_derivative(const Symbol& sym, const MultiIndex& beta, const MultiIndex& gamma,
                       const Vec& x, const Vec& xi, double hx, double rho);

struct SeminormDomain {
  double x_radius = 8.0;
  double xi_radius = 64.0;
  double x_step = 1.0;
  double xi_step = 2.0;
  double hx = 1e-3;               // finite-difference step in x
  int random_probes = 128;
  uint64_t seed = 0x5eed;
  std::vector<double> extra_xi;   // caller-supplied focus radii (band edges)
};

// max over |beta|+|gamma| <= N of the weighted sup over the sampled domain of
// (1+|xi|)^{-(b + delta|beta| - rho|gamma|)} |d_x^beta d_xi^gamma sigma|.
double seminorm(const Symbol& sigma, int N, const SymbolClass& cls,
                const SeminormDomain& domain);

// sigma(x, xi) = sum_m a_m cos(omega_m . x) eta_m(xi) with omega_m = <m>^A theta:
// an x-dependent test symbol whose x-frequency at band m is tied to the band
// scale <m>^A. A positive freq_quantum snaps each omega_m to that lattice
// (pass the grid's dxi) so the factors are exactly periodic on the torus.
Symbol make_modulated_family(const AlphaCover& cover, const std::vector<double>& amplitudes,
                             const Vec& direction, double freq_quantum = 0.0);

// Single-term separable symbol xfactor(x) * multiplier(xi); derivatives fall
// back to finite differences.
Symbol make_separable_symbol(std::function<cplx(const Vec&)> xfactor,
                             std::function<double(const Vec&)> multiplier, int dim,
                             SymbolClass cls = {0.0, 0.0, 0.0});

struct CounterexampleParams {
  double alpha = 0.5;
  double eps = 0.25;
  double c = 0.0;   // 0 selects the largest power-of-two reciprocal with 2cK < 1
  int dim = 1;
  int m_range = 64;  // lattice truncation for the bump sum

  double A() const { return alpha / (1.0 - alpha); }
  double A_eps() const { return (alpha - eps) / (1.0 - alpha); }
  double K() const { return std::max(6.0, 1.0 + std::pow(2.0, A())); }
  void validate() const;  // requires 0 < eps < alpha and 2cK < 1
};

struct Counterexample {
  CounterexampleParams params;
  Symbol sigma;  // x-independent, bumps of width <m>^{A_eps} at centers <m>^A m
  // Plateau test function: spectrum psi~((xi - <l>^A l)/<l>^A).
  GridSignal test_function(const Grid& grid, const Idx& ell) const;
  BumpProfile profile;
};

Counterexample make_counterexample(CounterexampleParams params,
                                   const BumpProfile& profile = smooth_transition_profile());

struct LatticePairReport {
  double K = 0.0;
  double max_ratio = 0.0;
  Idx worst_k{0, 0}, worst_m{0, 0};
  long long pairs = 0;
  long long violations = 0;
  bool pass = false;
};

// Brute-force check of (<k>^A + <m>^A)|k - m| <= K |<k>^A k - <m>^A m| with
// K = max(6, 1 + 2^A), over |k|_inf, |m|_inf <= range.
LatticePairReport check_lattice_inequality(double alpha, int dim, int range);

}  // namespace alphamod

#endif
