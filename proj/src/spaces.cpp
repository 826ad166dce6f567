#include "alphamod/spaces.hpp"

#include <stdexcept>

namespace alphamod {

void QuasiNormParams::validate() const {
  if (!(p > 0.0)) throw std::invalid_argument("QuasiNormParams: p must be positive");
  if (!(q > 0.0)) throw std::invalid_argument("QuasiNormParams: q must be positive");
  if (!(alpha >= 0.0 && alpha < 1.0))
    throw std::invalid_argument("QuasiNormParams: alpha must lie in [0,1)");
  if (!std::isfinite(s)) throw std::invalid_argument("QuasiNormParams: s must be finite");
}

std::vector<int> lattice_ball_indices(const Grid& grid, const Vec& center, double radius) {
  std::vector<int> out;
  double dxi = grid.dxi();
  auto axis_range = [&](double c) {
    int lo = static_cast<int>(std::ceil((c - radius) / dxi));
    int hi = static_cast<int>(std::floor((c + radius) / dxi));
    lo = std::max(lo, -grid.n / 2);
    hi = std::min(hi, grid.n / 2 - 1);
    return std::pair<int, int>(lo, hi);
  };
  if (grid.dim == 1) {
    auto [lo, hi] = axis_range(center[0]);
    for (int j = lo; j <= hi; ++j) out.push_back(grid.storage_index(j));
  } else {
    auto [lo0, hi0] = axis_range(center[0]);
    auto [lo1, hi1] = axis_range(center[1]);
    double r2 = radius * radius;
    for (int j0 = lo0; j0 <= hi0; ++j0)
      for (int j1 = lo1; j1 <= hi1; ++j1) {
        double d0 = j0 * dxi - center[0];
        double d1 = j1 * dxi - center[1];
        if (d0 * d0 + d1 * d1 <= r2)
          out.push_back(grid.storage_index(j0) * grid.n + grid.storage_index(j1));
      }
  }
  return out;
}

BandTable make_band_table(const AlphaCover& cover, const Grid& grid,
                          BandTable::Family family) {
  grid.validate();
  BandTable table;
  table.grid = grid;
  table.alpha = cover.params.alpha;
  table.family = family;
  table.bands.resize(cover.lattice.size());

  const size_t nk = cover.lattice.size();
  if (family == BandTable::Family::Rho) {
    for (size_t pos = 0; pos < nk; ++pos) {
      auto& band = table.bands[pos];
      band.k = cover.lattice[pos];
      band.scale = cover.scales[pos];
      double reach = 2.0 * cover.params.C * band.scale;
      for (int t : lattice_ball_indices(grid, cover.centers[pos], reach)) {
        double v = cover.rho(band.k, grid.xi(t));
        if (v != 0.0) band.entries.push_back({t, v});
      }
    }
    return table;
  }

  // Eta family: accumulate the normalizing denominator over the lattice in
  // cover order, then divide each raw bump by it. The per-point sums see the
  // same contributions in the same order as AlphaCover::denominator.
  std::vector<double> denom(grid.total(), 0.0);
  std::vector<std::vector<std::pair<int, double>>> raw(nk);
  for (size_t pos = 0; pos < nk; ++pos) {
    double reach = 2.0 * cover.c1 * cover.scales[pos];
    for (int t : lattice_ball_indices(grid, cover.centers[pos], reach)) {
      double g = cover.bump(static_cast<int>(pos), grid.xi(t));
      if (g != 0.0) {
        raw[pos].push_back({t, g});
        denom[t] += g;
      }
    }
  }
  for (size_t pos = 0; pos < nk; ++pos) {
    auto& band = table.bands[pos];
    band.k = cover.lattice[pos];
    band.scale = cover.scales[pos];
    band.entries.reserve(raw[pos].size());
    for (auto& [t, g] : raw[pos]) band.entries.push_back({t, g / denom[t]});
  }
  return table;
}

std::vector<double> band_norms(const Spectrum& F, const BandTable& table, double p) {
  if (!(F.grid == table.grid)) throw std::invalid_argument("band_norms: grid mismatch");
  std::vector<double> out(table.bands.size(), 0.0);
  std::vector<cplx> buf(F.grid.total());
  for (size_t pos = 0; pos < table.bands.size(); ++pos) {
    const auto& band = table.bands[pos];
    bool any = false;
    for (const auto& [t, v] : band.entries)
      if (F.c[t] != cplx(0.0, 0.0) && v != 0.0) {
        any = true;
        break;
      }
    if (!any) continue;  // empty band contributes an exact zero
    std::fill(buf.begin(), buf.end(), cplx(0.0, 0.0));
    for (const auto& [t, v] : band.entries) buf[t] = v * F.c[t];
    out[pos] = lp_norm(ifft(Spectrum{F.grid, buf}), p);
  }
  return out;
}

namespace {

double lq_combine(const std::vector<double>& terms, double q) {
  if (q == kInf) {
    double m = 0.0;
    for (double t : terms) m = std::max(m, t);
    return m;
  }
  KahanSum s;
  for (double t : terms)
    if (t > 0.0) s.add(std::pow(t, q));
  return std::pow(s.value(), 1.0 / q);
}

}  // namespace

double alpha_norm(const Spectrum& F, const BandTable& table, const QuasiNormParams& params) {
  params.validate();
  if (params.alpha != table.alpha)
    throw std::invalid_argument("alpha_norm: cover/params alpha mismatch");
  std::vector<double> terms = band_norms(F, table, params.p);
  double w = params.weight_exponent();
  for (size_t pos = 0; pos < terms.size(); ++pos)
    terms[pos] *= std::pow(1.0 + norm2(table.bands[pos].k, table.grid.dim), w);
  return lq_combine(terms, params.q);
}

double alpha_norm(const GridSignal& f, const AlphaCover& cover,
                  const QuasiNormParams& params) {
  if (params.alpha != cover.params.alpha)
    throw std::invalid_argument("alpha_norm: cover/params alpha mismatch");
  return alpha_norm(fft(f), make_band_table(cover, f.grid, BandTable::Family::Eta), params);
}

double alpha_norm_equiv(const GridSignal& f, const AlphaCover& cover,
                        const QuasiNormParams& params) {
  if (params.alpha != cover.params.alpha)
    throw std::invalid_argument("alpha_norm_equiv: cover/params alpha mismatch");
  return alpha_norm(fft(f), make_band_table(cover, f.grid, BandTable::Family::Rho), params);
}

GridSignal bessel_lift(const GridSignal& f, double t) {
  return multiplier_apply(
      [t, dim = f.grid.dim](const Vec& xi) {
        double n2 = dim == 1 ? xi[0] * xi[0] : xi[0] * xi[0] + xi[1] * xi[1];
        return cplx(std::pow(1.0 + n2, t / 2.0), 0.0);
      },
      f);
}

EmbeddingReport embedding_check(const std::vector<GridSignal>& family,
                                const std::vector<double>& scales,
                                const AlphaCover& cover_alpha,
                                const AlphaCover& cover_uniform, double q,
                                double slope_tol) {
  if (family.size() != scales.size())
    throw std::invalid_argument("embedding_check: family/scale size mismatch");
  if (cover_uniform.params.alpha != 0.0)
    throw std::invalid_argument("embedding_check: uniform cover must have alpha 0");
  if (family.empty()) throw std::invalid_argument("embedding_check: empty family");

  const int n = family.front().grid.dim;
  const double alpha = cover_alpha.params.alpha;
  const double inv_q = q == kInf ? 0.0 : 1.0 / q;

  EmbeddingReport rep;
  rep.q = q;
  rep.s1 = n * alpha * std::max(0.0, inv_q - 0.5);
  rep.s2 = n * alpha * std::min(0.0, inv_q - 0.5);

  BandTable ta = make_band_table(cover_alpha, family.front().grid);
  BandTable tu = make_band_table(cover_uniform, family.front().grid);

  std::vector<std::array<double, 2>> pts1, pts2;
  for (size_t i = 0; i < family.size(); ++i) {
    Spectrum F = fft(family[i]);
    double mod = alpha_norm(F, tu, {2.0, q, 0.0, 0.0});
    double upper = alpha_norm(F, ta, {2.0, q, rep.s1, alpha});
    double lower = alpha_norm(F, ta, {2.0, q, rep.s2, alpha});
    if (mod == 0.0 || upper == 0.0) continue;
    pts1.push_back({scales[i], mod / upper});
    pts2.push_back({scales[i], lower / mod});
  }

  auto finish = [&](InequalityReport& r, std::vector<std::array<double, 2>> pts,
                    const char* name) {
    r.name = name;
    r.points = std::move(pts);
    std::vector<double> xs, ys;
    for (auto& p : r.points) {
      r.max_ratio = std::max(r.max_ratio, p[1]);
      xs.push_back(p[0]);
      ys.push_back(p[1]);
    }
    r.trend = fit_loglog(xs, ys);
    r.pass = std::abs(r.trend.slope) <= slope_tol;
  };
  finish(rep.into_modulation, std::move(pts1), "embedding-into-modulation");
  finish(rep.from_modulation, std::move(pts2), "embedding-from-modulation");
  rep.pass = rep.into_modulation.pass && rep.from_modulation.pass;
  return rep;
}

}  // namespace alphamod
