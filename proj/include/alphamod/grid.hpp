#ifndef ALPHAMOD_GRID_HPP
#define ALPHAMOD_GRID_HPP

#include <functional>

#include "alphamod/common.hpp"

namespace alphamod {

// Periodic sampling box [0,L)^dim with N samples per axis (N a power of two).
// Frequency lattice: xi_j = 2*pi*j/L for j in [-N/2, N/2).
struct Grid {
  int dim = 1;
  double length = 0.0;
  int n = 0;

  void validate() const;

  int total() const { return dim == 1 ? n : n * n; }
  double dx() const { return length / n; }
  double dxi() const { return 2.0 * kPi / length; }
  double nyquist() const { return kPi * n / length; }
  double cell_volume() const { return dim == 1 ? dx() : dx() * dx(); }
  double freq_cell_volume() const { return dim == 1 ? dxi() : dxi() * dxi(); }

  // storage index t per axis <-> signed lattice index
  int signed_index(int t) const { return t < n / 2 ? t : t - n; }
  int storage_index(int j) const { return j >= 0 ? j : j + n; }

  Vec x(int flat) const {
    if (dim == 1) return {flat * dx(), 0.0};
    return {(flat / n) * dx(), (flat % n) * dx()};
  }
  Vec xi(int flat) const {
    if (dim == 1) return {dxi() * signed_index(flat), 0.0};
    return {dxi() * signed_index(flat / n), dxi() * signed_index(flat % n)};
  }
  // displacement lattice value folded to [-L/2, L/2) per axis
  Vec y_periodic(int flat) const {
    Vec v = x(flat);
    for (int a = 0; a < dim; ++a)
      if (v[a] >= length / 2) v[a] -= length;
    return v;
  }

  bool operator==(const Grid& o) const {
    return dim == o.dim && length == o.length && n == o.n;
  }
};

struct GridSignal {
  Grid grid;
  std::vector<cplx> v;  // x-samples, row-major for dim 2
};

struct Spectrum {
  Grid grid;
  std::vector<cplx> c;  // frequency coefficients in per-axis storage order
};

GridSignal make_signal(const Grid& g);

// Discrete realization of the forward transform F f(xi) = int e^{-i xi x} f dx
// (forward sum scaled by (L/N)^dim) and of its inverse (sum scaled by L^-dim).
// ifft(fft(f)) reproduces f up to rounding.
Spectrum fft(const GridSignal& f);
GridSignal ifft(const Spectrum& F);

using MultiplierFn = std::function<cplx(const Vec& xi)>;

GridSignal multiplier_apply(const MultiplierFn& m, const GridSignal& f);
GridSignal multiplier_apply(const std::vector<cplx>& table, const GridSignal& f);

// Riemann-sum L^p quasi-norm; p = inf gives the sample maximum.
double lp_norm(const GridSignal& f, double p);
double l2_spectrum_norm(const Spectrum& F);  // Plancherel route: (L^-n sum |c|^2)^(1/2)

// Relative L^2 spectral mass outside the ball |xi - center| <= radius.
double spectral_mass_outside(const Spectrum& F, const Vec& center, double radius);

// Periodic convolution via the spectral product, consistent with fft scaling.
GridSignal convolve(const GridSignal& f, const GridSignal& g);

// Brute-force translation maximum sup_y |f(x-y)| / (1 + (R|y|)^(n/r)).
GridSignal peetre_maximal(const GridSignal& f, double R, double r);

// Single-pair checks. Both throw std::invalid_argument when the stated
// preconditions fail (band support, exponent ranges); they never report a
// precondition failure as a failed inequality.
double bandlimited_convolution_ratio(const GridSignal& f, const GridSignal& g,
                                     const Vec& center, double radius, double p);
double peetre_maximal_ratio(const GridSignal& f, const Vec& center, double radius,
                            double r, double p);

struct ConvolutionCase {
  GridSignal f, g;
  Vec center{0.0, 0.0};
  double radius = 0.0;
};

InequalityReport check_bandlimited_convolution(const std::vector<ConvolutionCase>& cases,
                                               double p, double slope_tol = 0.1);

struct MaximalCase {
  GridSignal f;
  Vec center{0.0, 0.0};
  double radius = 0.0;
};

InequalityReport check_peetre_maximal(const std::vector<MaximalCase>& cases, double r,
                                      double p, double slope_tol = 0.1);

}  // namespace alphamod

#endif
