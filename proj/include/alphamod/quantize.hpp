#ifndef ALPHAMOD_QUANTIZE_HPP
#define ALPHAMOD_QUANTIZE_HPP

#include "alphamod/spaces.hpp"
#include "alphamod/symbols.hpp"

namespace alphamod {

// Discrete Kohn-Nirenberg application:
//   g(x_i) = L^{-n} sum_j e^{i x_i . xi_j} sigma(x_i, xi_j) fhat(xi_j).
// The direct route always evaluates that sum (compensated); the dispatching
// route takes the multiplier shortcut for x-independent symbols and the
// separable expansion when one is attached.
GridSignal quantize_apply_direct(const Symbol& sigma, const GridSignal& f);
GridSignal quantize_apply(const Symbol& sigma, const GridSignal& f);

// One localized piece of a symbol: x-frequencies filtered to the band
// phi_ell( . / <m>^A ) and xi restricted to band m (eta_m for the plain piece,
// the plateau kappa_m for the plateau piece). Realized as a dense table over
// (x-grid) x (retained xi columns).
struct SymbolPiece {
  Idx ell{0, 0}, m{0, 0};
  bool plateau = false;
  Grid grid;
  double band_scale = 0.0;               // <m>^A
  std::vector<int> cols;                 // xi storage indices, ascending
  std::vector<cplx> table;               // cols.size() x grid.total(), column-major
  double xband_leak = 0.0;               // relative x-frequency mass outside the band
};

SymbolPiece decompose(const Symbol& sigma, const AlphaCover& cover, const Grid& grid,
                      const Idx& m, const Idx& ell, bool plateau);

GridSignal piece_apply(const SymbolPiece& piece, const GridSignal& f);

// Evaluates the piece table back to a symbol value at a lattice point
// (x index, xi storage index); used by reconstruction checks.
cplx piece_table_value(const SymbolPiece& piece, int x_flat, int xi_storage);

struct RegionReport {
  Vec ball_center{0, 0};
  double ball_radius = 0.0;
  double mass_outside = 0.0;          // relative L^2 spectral mass
  double max_km_ratio = 0.0;          // max |k - m| / <ell> over active rho_k bands
  Idx worst_k{0, 0};
  bool pass = false;
};

// Lemma-style support check of F[piece f]: mass outside the ball centered at
// <m>^A (ell + m) with radius (C + sqrt(n)) <m>^A, plus the |k - m| <~ <ell>
// interaction window read off the active rho_k bands. radius_factor shrinks
// the ball (negative control).
RegionReport verify_region(const SymbolPiece& piece, const GridSignal& f,
                           const AlphaCover& cover, double radius_factor = 1.0,
                           double mass_tol = 1e-8);

struct DecayReport {
  std::vector<std::array<double, 2>> points;  // (<ell> or <m>, value)
  SlopeFit fit;
  std::vector<std::pair<int, bool>> order_pass;  // (N, fitted slope <= -N + 0.5)
  bool pass = false;
};

// r(ell) = |sigma~_{ell,m}(X,D) eta_m(D) f|_p / |eta_m(D) f|_p over an ell
// range at fixed m; the fitted log-log slope must reach -N + 0.5 for each
// requested order.
DecayReport verify_ell_decay(const Symbol& sigma, const AlphaCover& cover,
                             const GridSignal& f, double p, const std::vector<int>& orders,
                             const Idx& m, int ell_lo, int ell_hi);

// Kernel decay of the plateau piece: sup_{x,y} |k(x,y)| (1 + <m>^A |y|)^M / <m>^{An}
// as a function of ell (fitted slope <= -N + 0.5), where
// k(x,y) = int e^{i y xi} sigma~_{ell,m}(x,xi) dxi by lattice quadrature.
DecayReport verify_oscillatory_decay(const Symbol& sigma, const AlphaCover& cover,
                                     const Grid& grid, const Idx& m, int ell_lo,
                                     int ell_hi, int M, int N, int x_stride = 8);

// m-sweep companion at fixed ell: the <m>^{An} normalization should keep the
// reported sup flat (|slope| small).
DecayReport oscillatory_kernel_m_sweep(const Symbol& sigma, const AlphaCover& cover,
                                       const Grid& grid, const Idx& ell, int m_lo,
                                       int m_hi, int M, int x_stride = 8,
                                       double slope_tol = 0.2);

// Band-localization of the piece output: |rho_k(D) g|_p relative to
// <ell>^{An(1/min(1,p)-1)} |g|_p; bounded across sweeps, Young case for p >= 1.
double piece_band_ratio(const GridSignal& piece_output, const AlphaCover& cover,
                        const Idx& k, const Idx& ell, double p);

}  // namespace alphamod

#endif
