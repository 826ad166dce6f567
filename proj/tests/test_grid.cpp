#include <doctest.h>

#include <random>

#include "alphamod/bump.hpp"
#include "alphamod/grid.hpp"

using namespace alphamod;

namespace {

GridSignal random_signal(const Grid& g, uint64_t seed) {
  GridSignal f = make_signal(g);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (auto& z : f.v) z = {u(rng), u(rng)};
  return f;
}

}  // namespace

TEST_CASE("fft of a pure tone concentrates at its lattice point") {
  Grid g{1, 16.0, 256};
  int j = 11;
  double xi = 2.0 * kPi * j / g.length;
  GridSignal f = make_signal(g);
  for (int i = 0; i < g.n; ++i) f.v[i] = std::polar(1.0, xi * g.x(i)[0]);
  Spectrum F = fft(f);
  for (int t = 0; t < g.n; ++t) {
    if (t == j)
      CHECK(std::abs(F.c[t] - cplx(g.length, 0.0)) < 1e-9 * g.length);
    else
      CHECK(std::abs(F.c[t]) < 1e-9 * g.length);
  }
}

TEST_CASE("fft round trip is the identity") {
  for (int dim : {1, 2}) {
    Grid g{dim, 32.0, dim == 1 ? 512 : 32};
    GridSignal f = random_signal(g, 42);
    GridSignal back = ifft(fft(f));
    double err = 0.0, mag = 0.0;
    for (int i = 0; i < g.total(); ++i) {
      err = std::max(err, std::abs(back.v[i] - f.v[i]));
      mag = std::max(mag, std::abs(f.v[i]));
    }
    CHECK(err <= 1e-12 * mag);
  }
}

TEST_CASE("well-resolved gaussian matches its closed-form transform") {
  Grid g{1, 64.0, 1024};
  double a = 1.5;  // f(x) = exp(-a (x - L/2)^2), fhat = sqrt(pi/a) exp(-xi^2/4a) * phase
  GridSignal f = make_signal(g);
  double x0 = g.length / 2;
  for (int i = 0; i < g.n; ++i) {
    double x = g.x(i)[0] - x0;
    f.v[i] = std::exp(-a * x * x);
  }
  Spectrum F = fft(f);
  for (int t = 0; t < g.n; t += 7) {
    double xi = g.xi(t)[0];
    if (std::abs(xi) > 12.0) continue;  // below resolution floor
    cplx expected = std::sqrt(kPi / a) * std::exp(-xi * xi / (4 * a)) *
                    std::polar(1.0, -xi * x0);
    CHECK(std::abs(F.c[t] - expected) < 1e-8);
  }
}

TEST_CASE("plancherel identity holds to rounding") {
  Grid g{1, 48.0, 1024};
  GridSignal f = random_signal(g, 7);
  double direct = lp_norm(f, 2.0);
  double viaspec = l2_spectrum_norm(fft(f));
  CHECK(viaspec == doctest::Approx(direct).epsilon(1e-10));
}

TEST_CASE("multiplier identities") {
  Grid g{1, 32.0, 512};
  GridSignal f = random_signal(g, 3);

  SUBCASE("m = 1 is the identity") {
    GridSignal out = multiplier_apply([](const Vec&) { return cplx(1.0, 0.0); }, f);
    for (int i = 0; i < g.n; ++i) CHECK(std::abs(out.v[i] - f.v[i]) < 1e-12);
  }
  SUBCASE("bessel weight at s = 0 is the identity") {
    GridSignal out = multiplier_apply(
        [](const Vec& xi) { return cplx(std::pow(1.0 + xi[0] * xi[0], 0.0), 0.0); }, f);
    for (int i = 0; i < g.n; ++i) CHECK(std::abs(out.v[i] - f.v[i]) < 1e-12);
  }
  SUBCASE("linearity") {
    GridSignal h = random_signal(g, 4);
    auto m = [](const Vec& xi) { return cplx(std::cos(xi[0]), 0.2 * std::sin(xi[0])); };
    GridSignal combo = make_signal(g);
    for (int i = 0; i < g.n; ++i) combo.v[i] = 2.0 * f.v[i] + cplx(0.0, 1.5) * h.v[i];
    GridSignal lhs = multiplier_apply(m, combo);
    GridSignal mf = multiplier_apply(m, f), mh = multiplier_apply(m, h);
    for (int i = 0; i < g.n; ++i) {
      cplx rhs = 2.0 * mf.v[i] + cplx(0.0, 1.5) * mh.v[i];
      CHECK(std::abs(lhs.v[i] - rhs) < 1e-12 * (1.0 + std::abs(rhs)));
    }
  }
}

namespace {

// Band-limited bump: smooth spectrum supported in |xi - center| <= radius.
GridSignal band_bump(const Grid& g, double center, double radius, uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.9, 2.0);
  BumpProfile prof = smooth_transition_profile();
  double w = radius / u(rng);
  Spectrum F{g, std::vector<cplx>(g.total(), 0.0)};
  for (int t = 0; t < g.n; ++t) {
    double xi = g.xi(t)[0];
    double r = 2.0 * std::abs(xi - center) / w;
    if (r < 2.0) F.c[t] = prof.value(r);
  }
  return ifft(F);
}

}  // namespace

TEST_CASE("band-limited convolution inequality") {
  Grid g{1, 16.0 * kPi, 4096};

  SUBCASE("p = 1 reduces to Young") {
    GridSignal f = band_bump(g, 0.0, 8.0, 10);
    double ratio = bandlimited_convolution_ratio(f, f, {0.0, 0.0}, 8.0, 1.0);
    CHECK(ratio <= 1.0 + 1e-6);
  }

  SUBCASE("p = 1/2 ratio stays flat across an R sweep") {
    std::vector<ConvolutionCase> cases;
    BumpProfile prof = smooth_transition_profile();
    for (double R : {4.0, 8.0, 16.0, 32.0}) {
      // scaling family: spectrum profile stretched with R
      Spectrum F{g, std::vector<cplx>(g.total(), 0.0)};
      for (int t = 0; t < g.n; ++t) {
        double r = 2.0 * std::abs(g.xi(t)[0]) / R;
        if (r < 2.0) F.c[t] = prof.value(r);
      }
      cases.push_back({ifft(F), ifft(F), {0.0, 0.0}, R});
    }
    InequalityReport rep = check_bandlimited_convolution(cases, 0.5);
    CHECK(rep.pass);
    double lo = rep.points.front()[1], hi = lo;
    for (auto& p : rep.points) {
      lo = std::min(lo, p[1]);
      hi = std::max(hi, p[1]);
    }
    CHECK(hi / lo <= 1.2);
  }

  SUBCASE("spectrum outside the stated ball is rejected") {
    GridSignal f = band_bump(g, 0.0, 8.0, 11);
    CHECK_THROWS_AS(bandlimited_convolution_ratio(f, f, {0.0, 0.0}, 0.5, 0.5),
                    std::invalid_argument);
  }
  SUBCASE("p outside (0,1] is rejected") {
    GridSignal f = band_bump(g, 0.0, 8.0, 12);
    CHECK_THROWS_AS(bandlimited_convolution_ratio(f, f, {0.0, 0.0}, 8.0, 2.0),
                    std::invalid_argument);
  }
}

TEST_CASE("peetre maximal function") {
  Grid g{1, 16.0 * kPi, 1024};

  SUBCASE("constant signal gives ratio 1") {
    GridSignal f = make_signal(g);
    for (auto& z : f.v) z = 2.5;
    double ratio = peetre_maximal_ratio(f, {0.0, 0.0}, 1.0, 0.5, 1.0);
    CHECK(ratio == doctest::Approx(1.0).epsilon(1e-12));
  }

  SUBCASE("R sweep stays stable for modulated bumps") {
    // finer grid: the damping transition happens at scale 1/R
    Grid gf{1, 8.0 * kPi, 4096};
    std::vector<MaximalCase> cases;
    for (double R : {4.0, 8.0, 16.0, 32.0}) {
      Spectrum F{gf, std::vector<cplx>(gf.total(), 0.0)};
      BumpProfile prof = smooth_transition_profile();
      for (int t = 0; t < gf.n; ++t) {
        double r = 2.0 * std::abs(gf.xi(t)[0] - R / 2) / R;
        if (r < 2.0) F.c[t] = prof.value(r);
      }
      cases.push_back({ifft(F), {R / 2, 0.0}, R});
    }
    InequalityReport rep = check_peetre_maximal(cases, 0.25, 0.5, 0.1);
    CHECK(rep.pass);
    double lo = rep.points.front()[1], hi = lo;
    for (auto& p : rep.points) {
      lo = std::min(lo, p[1]);
      hi = std::max(hi, p[1]);
    }
    CHECK(hi / lo <= 1.25);
  }

  SUBCASE("r >= p is rejected") {
    GridSignal f = band_bump(g, 0.0, 4.0, 13);
    CHECK_THROWS_AS(peetre_maximal_ratio(f, {0.0, 0.0}, 4.0, 1.0, 1.0),
                    std::invalid_argument);
  }
}
