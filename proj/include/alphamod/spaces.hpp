#ifndef ALPHAMOD_SPACES_HPP
#define ALPHAMOD_SPACES_HPP

#include "alphamod/cover.hpp"
#include "alphamod/grid.hpp"

namespace alphamod {

struct QuasiNormParams {
  double p = 2.0;
  double q = 2.0;
  double s = 0.0;
  double alpha = 0.0;

  void validate() const;
  double weight_exponent() const { return s / (1.0 - alpha); }
};

// Frequency lattice indices inside |xi - center| <= radius, ascending storage order.
std::vector<int> lattice_ball_indices(const Grid& grid, const Vec& center, double radius);

// One cover family sampled on a grid's frequency lattice. Values match the
// pointwise evaluators exactly; only nonzero entries are stored.
struct BandTable {
  enum class Family { Eta, Rho };
  struct Band {
    Idx k;
    double scale;                                  // <k>^A
    std::vector<std::pair<int, double>> entries;   // (storage index, value)
  };
  Grid grid;
  double alpha = 0.0;
  Family family = Family::Eta;
  std::vector<Band> bands;  // cover lattice order
};

BandTable make_band_table(const AlphaCover& cover, const Grid& grid,
                          BandTable::Family family = BandTable::Family::Eta);

// Quasi-norm built from the defining family: l^q over k of
// <k>^{s/(1-alpha)} * |eta_k(D) f|_{L^p}.
double alpha_norm(const GridSignal& f, const AlphaCover& cover,
                  const QuasiNormParams& params);
double alpha_norm(const Spectrum& F, const BandTable& table, const QuasiNormParams& params);

// Same contract with the plateau family rho_k in place of eta_k.
double alpha_norm_equiv(const GridSignal& f, const AlphaCover& cover,
                        const QuasiNormParams& params);

// Per-band L^p norms (diagnostics and closed-form cross-checks).
std::vector<double> band_norms(const Spectrum& F, const BandTable& table, double p);

// Smoothness lift by the multiplier (1 + |xi|^2)^{t/2}; inverted by -t.
GridSignal bessel_lift(const GridSignal& f, double t);

struct EmbeddingReport {
  double q = 0.0;
  double s1 = 0.0, s2 = 0.0;
  InequalityReport into_modulation;  // |f|_{M^0_{2,q}} / |f|_{M^{s1,alpha}_{2,q}}
  InequalityReport from_modulation;  // |f|_{M^{s2,alpha}_{2,q}} / |f|_{M^0_{2,q}}
  bool pass = false;
};

// Checks the two-sided embedding exponents s1 = n*alpha*max(0, 1/q - 1/2),
// s2 = n*alpha*min(0, 1/q - 1/2) against a (scale-swept) family. `scales`
// supplies the trend abscissa for each family member.
EmbeddingReport embedding_check(const std::vector<GridSignal>& family,
                                const std::vector<double>& scales,
                                const AlphaCover& cover_alpha,
                                const AlphaCover& cover_uniform, double q,
                                double slope_tol = 0.1);

}  // namespace alphamod

#endif
