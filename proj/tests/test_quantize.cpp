#include <doctest.h>

#include <memory>
#include <random>

#include "alphamod/experiments.hpp"
#include "alphamod/quantize.hpp"

using namespace alphamod;

namespace {

AlphaCover half_cover(int k_max = 12) {
  CoverParams p;
  p.alpha = 0.5;
  p.k_max = k_max;
  return make_cover(p);
}

// Periodic x-profile built from lattice frequencies with gaussian weights;
// its x-spectrum is known exactly, so filtered pieces decay predictably.
std::function<cplx(const Vec&)> gaussian_x_profile(const Grid& g, double width_freqs,
                                                   int max_index) {
  auto coef = std::make_shared<std::vector<std::pair<double, double>>>();
  for (int j = -max_index; j <= max_index; ++j) {
    double zeta = g.dxi() * j;
    coef->push_back({zeta, std::exp(-0.5 * (j / width_freqs) * (j / width_freqs))});
  }
  return [coef](const Vec& x) {
    cplx v = 0.0;
    for (auto& [zeta, a] : *coef) v += a * std::polar(1.0, zeta * x[0]);
    return v;
  };
}

}  // namespace

TEST_CASE("quantization of the constant symbol is the identity") {
  Grid g{1, 8.0 * kPi, 512};
  GridSignal f = seeded_band_signal(g, 21, -40.0, 40.0);
  Symbol one = constant_symbol(1.0, 1);
  double mag = lp_norm(f, kInf);

  GridSignal fast = quantize_apply(one, f);
  GridSignal direct = quantize_apply_direct(one, f);
  for (int i = 0; i < g.n; ++i) {
    CHECK(std::abs(fast.v[i] - f.v[i]) <= 1e-12 * mag);
    CHECK(std::abs(direct.v[i] - f.v[i]) <= 1e-12 * mag);
  }
}

TEST_CASE("x-independent symbols: direct sum equals the multiplier route") {
  Grid g{1, 8.0 * kPi, 1024};
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 5; ++trial) {
    GridSignal f = seeded_band_signal(g, rng(), -60.0, 60.0);
    Symbol sym = bessel_symbol(trial % 2 ? 1.0 : -1.5, 1);
    GridSignal fast = quantize_apply(sym, f);
    GridSignal direct = quantize_apply_direct(sym, f);
    double mag = lp_norm(fast, kInf);
    for (int i = 0; i < g.n; ++i)
      CHECK(std::abs(fast.v[i] - direct.v[i]) <= 1e-12 * mag);
  }
}

TEST_CASE("frequency-shift symbol shifts the spectrum") {
  Grid g{1, 2.0 * kPi, 256};
  int shift = 9;  // on-lattice shift
  double a = g.dxi() * shift;
  Symbol sym;
  sym.dim = 1;
  sym.eval = [a](const Vec& x, const Vec&) { return std::polar(1.0, a * x[0]); };
  GridSignal f = seeded_band_signal(g, 5, -30.0, 30.0);
  Spectrum F = fft(f);
  GridSignal out = quantize_apply_direct(sym, f);
  Spectrum G = fft(out);
  double mag = 0.0;
  for (auto& z : F.c) mag = std::max(mag, std::abs(z));
  for (int t = 0; t < g.n; ++t) {
    int src = ((t - shift) % g.n + g.n) % g.n;
    CHECK(std::abs(G.c[t] - F.c[src]) <= 1e-10 * mag);
  }
}

TEST_CASE("separable fast path agrees with the direct sum") {
  Grid g{1, 4.0 * kPi, 512};
  AlphaCover cover = half_cover(6);
  std::vector<double> amps(cover.lattice.size(), 1.0);
  Symbol sym = make_modulated_family(cover, amps, {1.0, 0.0}, g.dxi());
  GridSignal f = seeded_band_signal(g, 8, -20.0, 20.0);
  GridSignal fast = quantize_apply(sym, f);
  GridSignal direct = quantize_apply_direct(sym, f);
  double mag = lp_norm(fast, kInf);
  for (int i = 0; i < g.n; ++i) CHECK(std::abs(fast.v[i] - direct.v[i]) <= 1e-12 * mag);
}

TEST_CASE("quantization linearity") {
  Grid g{1, 4.0 * kPi, 256};
  Symbol sym = bessel_symbol(0.7, 1);
  GridSignal f = seeded_band_signal(g, 13, -20.0, 20.0);
  GridSignal h = seeded_band_signal(g, 14, -20.0, 20.0);
  GridSignal combo = make_signal(g);
  for (int i = 0; i < g.n; ++i) combo.v[i] = cplx(2.0, -1.0) * f.v[i] + 0.5 * h.v[i];
  GridSignal lhs = quantize_apply(sym, combo);
  GridSignal qf = quantize_apply(sym, f), qh = quantize_apply(sym, h);
  for (int i = 0; i < g.n; ++i) {
    cplx rhs = cplx(2.0, -1.0) * qf.v[i] + 0.5 * qh.v[i];
    CHECK(std::abs(lhs.v[i] - rhs) <= 1e-12 * (1.0 + std::abs(rhs)));
  }
}

TEST_CASE("composition with an x-independent factor applied first is exact") {
  // theta(X,D) = sigma(X,D) tau(D) realizes the pointwise product sigma * tau.
  Grid g{1, 4.0 * kPi, 512};
  AlphaCover cover = half_cover(6);
  std::vector<double> amps(cover.lattice.size(), 1.0);
  Symbol sigma = make_modulated_family(cover, amps, {1.0, 0.0}, g.dxi());
  auto tau = [](const Vec& xi) { return cplx(std::pow(1.0 + xi[0] * xi[0], -0.4), 0.0); };

  Symbol product;  // sigma(x,xi) * tau(xi)
  product.dim = 1;
  product.eval = [&sigma, &tau](const Vec& x, const Vec& xi) {
    return sigma.eval(x, xi) * tau(xi);
  };

  GridSignal f = seeded_band_signal(g, 99, -20.0, 20.0);
  GridSignal via_product = quantize_apply_direct(product, f);
  GridSignal via_composition = quantize_apply(sigma, multiplier_apply(tau, f));
  double mag = lp_norm(via_product, kInf);
  for (int i = 0; i < g.n; ++i)
    CHECK(std::abs(via_product.v[i] - via_composition.v[i]) <= 1e-10 * mag);

  // for an x-independent sigma the other composition order coincides too
  Symbol bes = bessel_symbol(-0.8, 1);
  Symbol both;
  both.dim = 1;
  both.x_independent = true;
  both.eval = [&bes, &tau](const Vec& x, const Vec& xi) { return bes.eval(x, xi) * tau(xi); };
  GridSignal lhs = quantize_apply(both, f);
  GridSignal rhs = multiplier_apply(tau, quantize_apply(bes, f));
  for (int i = 0; i < g.n; ++i) CHECK(std::abs(lhs.v[i] - rhs.v[i]) <= 1e-10 * mag);
}

TEST_CASE("piece decomposition") {
  Grid g{1, 4.0 * kPi, 1024};
  AlphaCover cover = half_cover(8);

  SUBCASE("x-independent symbols only populate ell = 0") {
    Symbol sym = bessel_symbol(0.5, 1);
    for (int l : {-2, -1, 1, 2}) {
      SymbolPiece piece = decompose(sym, cover, g, {2, 0}, {l, 0}, false);
      double sup = 0.0;
      for (const auto& z : piece.table) sup = std::max(sup, std::abs(z));
      CHECK(sup <= 1e-12);
    }
    SymbolPiece center = decompose(sym, cover, g, {2, 0}, {0, 0}, false);
    double sup = 0.0;
    for (const auto& z : center.table) sup = std::max(sup, std::abs(z));
    CHECK(sup > 0.1);
    CHECK(center.xband_leak <= 1e-10);
  }

  SUBCASE("plain pieces sum back to the symbol over ell and m") {
    auto xprof = gaussian_x_profile(g, 2.0, 12);
    Symbol sym = make_separable_symbol(
        xprof, [](const Vec& xi) { return std::exp(-0.001 * xi[0] * xi[0]); }, 1);
    // sample points within the cover window
    std::vector<int> xi_samples{0, 3, 20, 60, 1000, 1010};
    std::vector<int> x_samples{0, 17, 256, 511, 700};
    for (int t : xi_samples) {
      Vec xi = g.xi(t);
      if (norm2(xi, 1) > 0.9 * cover.window_radius) continue;
      for (int i : x_samples) {
        cplx total = 0.0;
        for (int pos : cover.contributors(xi)) {
          const Idx& m = cover.lattice[pos];
          double s = cover.scale(m);
          int lmax = static_cast<int>(std::ceil(12.0 * g.dxi() / s)) + 2;
          for (int l = -lmax; l <= lmax; ++l) {
            SymbolPiece piece = decompose(sym, cover, g, m, {l, 0}, false);
            total += piece_table_value(piece, i, t);
          }
        }
        cplx expected = sym.eval(g.x(i), xi);
        CHECK(std::abs(total - expected) <= 1e-10 * std::max(1.0, std::abs(expected)));
      }
    }
  }

  SUBCASE("plateau identity: plain piece equals plateau piece after band cut") {
    auto xprof = gaussian_x_profile(g, 2.0, 12);
    Symbol sym = make_separable_symbol(
        xprof, [](const Vec& xi) { return std::exp(-0.002 * xi[0] * xi[0]); }, 1);
    Idx m{2, 0};
    GridSignal f = seeded_band_signal(g, 55, -30.0, 30.0);
    GridSignal fm = multiplier_apply(
        [&cover, &m](const Vec& xi) { return cplx(cover.eta(m, xi), 0.0); }, f);
    for (int l : {0, 1, 3}) {
      SymbolPiece plain = decompose(sym, cover, g, m, {l, 0}, false);
      SymbolPiece plateau = decompose(sym, cover, g, m, {l, 0}, true);
      GridSignal lhs = piece_apply(plain, f);
      GridSignal rhs = piece_apply(plateau, fm);
      double mag = std::max(lp_norm(lhs, kInf), 1e-30);
      for (int i = 0; i < g.n; ++i)
        CHECK(std::abs(lhs.v[i] - rhs.v[i]) <= 1e-10 * mag);
    }
  }
}

TEST_CASE("spectral region of piece outputs") {
  Grid g{1, 2.0 * kPi, 2048};
  CoverParams cp;
  cp.alpha = 0.5;
  cp.k_max = 24;
  AlphaCover cover = make_cover(cp);

  // dense periodic x-profile: every filtered band is populated
  std::mt19937_64 rng(616);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  auto coefs = std::make_shared<std::vector<cplx>>();
  int zmax = 160;
  for (int j = -zmax; j <= zmax; ++j) coefs->push_back(cplx(u(rng), u(rng)) / (1.0 + std::abs(j)));
  auto xprof = [coefs, &g, zmax](const Vec& x) {
    cplx v = 0.0;
    for (int j = -zmax; j <= zmax; ++j)
      v += (*coefs)[j + zmax] * std::polar(1.0, g.dxi() * j * x[0]);
    return v;
  };
  Symbol sym = make_separable_symbol(xprof, [](const Vec&) { return 1.0; }, 1);
  GridSignal f = seeded_band_signal(g, 77, -300.0, 300.0);

  SUBCASE("mass concentrates in the stated ball across an (ell, m) sweep") {
    for (int m : {0, 3, 8}) {
      for (int l : {-4, -1, 0, 2, 5}) {
        SymbolPiece piece = decompose(sym, cover, g, {m, 0}, {l, 0}, false);
        RegionReport rep = verify_region(piece, f, cover);
        CHECK(rep.mass_outside <= 1e-8);
        CHECK(rep.pass);
      }
    }
  }

  SUBCASE("negative control: halving the ball detects leakage") {
    SymbolPiece piece = decompose(sym, cover, g, {6, 0}, {3, 0}, false);
    RegionReport rep = verify_region(piece, f, cover, 0.5);
    CHECK(rep.mass_outside > 1e-8);
  }

  SUBCASE("interaction window |k - m| <~ <ell>") {
    SymbolPiece piece = decompose(sym, cover, g, {6, 0}, {3, 0}, false);
    RegionReport rep = verify_region(piece, f, cover);
    CHECK(rep.max_km_ratio > 0.0);
    CHECK(rep.max_km_ratio <= 12.0);  // cover-wide constant, trend-checked in acceptance
  }
}

TEST_CASE("ell decay of plateau pieces") {
  Grid g{1, 4.0 * kPi, 2048};
  AlphaCover cover = half_cover(8);
  GridSignal f = seeded_band_signal(g, 31, 2.0, 20.0);

  SUBCASE("x-independent symbol: r vanishes identically for ell != 0") {
    Symbol sym = bessel_symbol(0.3, 1);
    DecayReport rep = verify_ell_decay(sym, cover, f, 1.0, {1}, {2, 0}, 1, 4);
    for (auto& pt : rep.points) CHECK(pt[1] <= 1e-12);
  }

  SUBCASE("single-band modulated symbol concentrates at the matching ell") {
    std::vector<double> amps(cover.lattice.size(), 0.0);
    amps[cover.find({2, 0})] = 1.0;
    Symbol sym = make_modulated_family(cover, amps, {1.0, 0.0}, g.dxi());
    GridSignal fm = multiplier_apply(
        [&cover](const Vec& xi) { return cplx(cover.eta({2, 0}, xi), 0.0); }, f);
    double denom = lp_norm(fm, 1.0);
    REQUIRE(denom > 0.0);
    std::vector<double> r;
    for (int l = 0; l <= 4; ++l) {
      SymbolPiece piece = decompose(sym, cover, g, {2, 0}, {l, 0}, true);
      r.push_back(lp_norm(piece_apply(piece, fm), 1.0) / denom);
    }
    // modulation frequency sits in the ell = 1 band (and its mirror)
    CHECK(r[1] > 0.05);
    for (int l : {0, 2, 3, 4}) CHECK(r[l] <= 1e-10);
  }

  SUBCASE("smooth compact x-variation decays fast in ell") {
    auto xprof = gaussian_x_profile(g, 3.0, 40);
    Symbol sym = make_separable_symbol(
        xprof, [](const Vec& xi) { return std::exp(-0.01 * xi[0] * xi[0]); }, 1);
    DecayReport rep = verify_ell_decay(sym, cover, f, 1.0, {1, 2, 3}, {2, 0}, 2, 10);
    CHECK(rep.pass);
    CHECK(rep.fit.slope <= -2.5);
  }

  SUBCASE("zero-mass band is rejected") {
    Symbol sym = bessel_symbol(0.0, 1);
    GridSignal none = make_signal(g);
    CHECK_THROWS_AS(verify_ell_decay(sym, cover, none, 1.0, {1}, {2, 0}, 2, 6),
                    std::invalid_argument);
  }
}

TEST_CASE("oscillatory kernel decay") {
  Grid g{1, 4.0 * kPi, 1024};
  AlphaCover cover = half_cover(8);
  auto xprof = gaussian_x_profile(g, 3.0, 40);
  Symbol sym = make_separable_symbol(
      xprof, [](const Vec& xi) { return std::exp(-0.01 * xi[0] * xi[0]); }, 1);

  SUBCASE("y = 0 bound and ell slope") {
    DecayReport rep = verify_oscillatory_decay(sym, cover, g, {2, 0}, 2, 10, 3, 2, 16);
    CHECK(rep.pass);
    for (auto& pt : rep.points) CHECK(std::isfinite(pt[1]));
  }

  SUBCASE("x-independent symbol has zero kernel for ell != 0") {
    Symbol bes = bessel_symbol(0.5, 1);
    DecayReport rep = verify_oscillatory_decay(bes, cover, g, {2, 0}, 1, 3, 2, 1, 16);
    for (auto& pt : rep.points) CHECK(pt[1] <= 1e-10);
  }

  SUBCASE("m sweep stays flat under the band-volume normalization") {
    // slowly varying x-profile: the ell = 0 content is m-independent
    auto slow = gaussian_x_profile(g, 1.5, 6);
    Symbol sym0 = make_separable_symbol(slow, [](const Vec&) { return 1.0; }, 1);
    DecayReport rep = oscillatory_kernel_m_sweep(sym0, cover, g, {0, 0}, 1, 6, 2, 16, 0.2);
    CHECK(rep.pass);
  }
}

TEST_CASE("piece output band localization ratios") {
  Grid g{1, 2.0 * kPi, 2048};
  CoverParams cp;
  cp.alpha = 0.5;
  cp.k_max = 16;
  AlphaCover cover = make_cover(cp);
  auto xprof = gaussian_x_profile(g, 4.0, 60);
  Symbol sym = make_separable_symbol(xprof, [](const Vec&) { return 1.0; }, 1);
  GridSignal f = seeded_band_signal(g, 2024, -200.0, 200.0);

  Idx m{4, 0};
  GridSignal fm = multiplier_apply(
      [&cover, &m](const Vec& xi) { return cplx(cover.eta(m, xi), 0.0); }, f);

  SUBCASE("p = 1: Young case, bounded ratio") {
    SymbolPiece piece = decompose(sym, cover, g, m, {2, 0}, true);
    GridSignal out = piece_apply(piece, fm);
    double ratio = piece_band_ratio(out, cover, {5, 0}, {2, 0}, 1.0);
    CHECK(std::isfinite(ratio));
    CHECK(ratio <= 2.0);
  }

  SUBCASE("p = 1/2: ratio flat across ell") {
    std::vector<double> xs, ys;
    for (int l = 1; l <= 8; ++l) {
      SymbolPiece piece = decompose(sym, cover, g, m, {l, 0}, true);
      GridSignal out = piece_apply(piece, fm);
      double best = 0.0;
      for (int k = 2; k <= 7; ++k)
        best = std::max(best, piece_band_ratio(out, cover, {k, 0}, {l, 0}, 0.5));
      xs.push_back(1.0 + l);
      ys.push_back(best);
    }
    SlopeFit fit = fit_loglog(xs, ys);
    CHECK(fit.slope <= 0.15);
  }

  SUBCASE("far bands carry no mass") {
    SymbolPiece piece = decompose(sym, cover, g, m, {1, 0}, true);
    GridSignal out = piece_apply(piece, fm);
    Spectrum S = fft(out);
    double total = 0.0;
    for (auto& z : S.c) total += std::norm(z);
    REQUIRE(total > 0.0);
    // |k - m| >> <ell>: band k = 14 against m = 4, ell = 1
    double far_mass = 0.0;
    for (int t = 0; t < g.total(); ++t) {
      double r = cover.rho({14, 0}, g.xi(t));
      far_mass += std::norm(r * S.c[t]);
    }
    CHECK(far_mass / total <= 1e-10);
  }
}
