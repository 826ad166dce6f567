#include "alphamod/quantize.hpp"

#include <map>
#include <memory>
#include <mutex>
#include <stdexcept>

namespace alphamod {

namespace {

// e^{i x_i . xi_j} on the lattice equals omega^{i j mod N} per axis with
// omega = e^{2 pi i / N}; a lookup table keeps the direct sums exact.
std::shared_ptr<const std::vector<cplx>> twiddle_table(int n) {
  static std::map<int, std::shared_ptr<const std::vector<cplx>>> cache;
  static std::mutex mu;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(n);
  if (it != cache.end()) return it->second;
  auto table = std::make_shared<std::vector<cplx>>(n);
  for (int t = 0; t < n; ++t) (*table)[t] = std::polar(1.0, 2.0 * kPi * t / n);
  auto shared = std::shared_ptr<const std::vector<cplx>>(table);
  cache.emplace(n, shared);
  return shared;
}

}  // namespace

GridSignal quantize_apply_direct(const Symbol& sigma, const GridSignal& f) {
  const Grid& g = f.grid;
  g.validate();
  if (sigma.dim != g.dim) throw std::invalid_argument("quantize_apply: dimension mismatch");
  Spectrum F = fft(f);
  auto tw = twiddle_table(g.n);
  const auto& w = *tw;
  GridSignal out = make_signal(g);
  const double scale = std::pow(1.0 / g.length, g.dim);

  if (g.dim == 1) {
    for (int i = 0; i < g.n; ++i) {
      Vec x = g.x(i);
      KahanSumC acc;
      for (int j = 0; j < g.n; ++j) {
        if (F.c[j] == cplx(0.0, 0.0)) continue;
        acc.add(sigma.eval(x, g.xi(j)) * F.c[j] *
                w[static_cast<size_t>(static_cast<long long>(i) * j % g.n)]);
      }
      out.v[i] = scale * acc.value();
    }
  } else {
    for (int i0 = 0; i0 < g.n; ++i0)
      for (int i1 = 0; i1 < g.n; ++i1) {
        Vec x = g.x(i0 * g.n + i1);
        KahanSumC acc;
        for (int j0 = 0; j0 < g.n; ++j0)
          for (int j1 = 0; j1 < g.n; ++j1) {
            int j = j0 * g.n + j1;
            if (F.c[j] == cplx(0.0, 0.0)) continue;
            cplx ph = w[static_cast<size_t>(static_cast<long long>(i0) * j0 % g.n)] *
                      w[static_cast<size_t>(static_cast<long long>(i1) * j1 % g.n)];
            acc.add(sigma.eval(x, g.xi(j)) * F.c[j] * ph);
          }
        out.v[i0 * g.n + i1] = scale * acc.value();
      }
  }
  return out;
}

GridSignal quantize_apply(const Symbol& sigma, const GridSignal& f) {
  const Grid& g = f.grid;
  g.validate();
  if (sigma.dim != g.dim) throw std::invalid_argument("quantize_apply: dimension mismatch");

  if (sigma.x_independent) {
    std::vector<cplx> table(g.total());
    for (int t = 0; t < g.total(); ++t) table[t] = sigma.eval({0.0, 0.0}, g.xi(t));
    return multiplier_apply(table, f);
  }

  if (!sigma.terms.empty()) {
    Spectrum F = fft(f);
    GridSignal out = make_signal(g);
    std::vector<cplx> buf(g.total());
    for (const auto& term : sigma.terms) {
      bool any = false;
      for (int t = 0; t < g.total(); ++t) {
        buf[t] = term.multiplier(g.xi(t)) * F.c[t];
        if (buf[t] != cplx(0.0, 0.0)) any = true;
      }
      if (!any) continue;
      GridSignal part = ifft(Spectrum{g, buf});
      for (int i = 0; i < g.total(); ++i) out.v[i] += term.xfactor(g.x(i)) * part.v[i];
    }
    return out;
  }

  return quantize_apply_direct(sigma, f);
}

SymbolPiece decompose(const Symbol& sigma, const AlphaCover& cover, const Grid& grid,
                      const Idx& m, const Idx& ell, bool plateau) {
  grid.validate();
  if (sigma.dim != grid.dim || cover.dim() != grid.dim)
    throw std::invalid_argument("decompose: dimension mismatch");
  if (cover.find(m) < 0) throw std::invalid_argument("decompose: band index not retained");

  SymbolPiece piece;
  piece.ell = ell;
  piece.m = m;
  piece.plateau = plateau;
  piece.grid = grid;
  piece.band_scale = cover.scale(m);

  const double s = piece.band_scale;
  const Vec center = cover.center(m);
  const double reach = plateau ? 2.0 * cover.params.C * s : 2.0 * cover.c1 * s;
  const double sqrt_n = std::sqrt(static_cast<double>(grid.dim));
  const Vec ell_vec = to_vec(ell);

  // Retain xi columns where the band factor is nonzero.
  std::vector<std::pair<int, double>> band_vals;
  for (int t : lattice_ball_indices(grid, center, reach)) {
    double v = plateau ? cover.kappa(m, grid.xi(t)) : cover.eta(m, grid.xi(t));
    if (v != 0.0) band_vals.push_back({t, v});
  }

  const int nx = grid.total();
  piece.cols.reserve(band_vals.size());
  piece.table.assign(band_vals.size() * nx, cplx(0.0, 0.0));

  // Precompute the x-frequency window phi((zeta - <m>^A ell)/<m>^A) on the
  // x-transform lattice (the x and xi lattices coincide).
  std::vector<double> window(nx);
  for (int u = 0; u < nx; ++u)
    window[u] = uniform_phi((1.0 / s) * grid.xi(u) - ell_vec, grid.dim, cover.profile);

  double leak_num = 0.0, leak_den = 0.0;
  GridSignal col{grid, std::vector<cplx>(nx)};
  for (size_t ci = 0; ci < band_vals.size(); ++ci) {
    auto [t, bandv] = band_vals[ci];
    piece.cols.push_back(t);
    Vec xi = grid.xi(t);
    for (int i = 0; i < nx; ++i) col.v[i] = sigma.eval(grid.x(i), xi);

    Spectrum C = fft(col);
    for (int u = 0; u < nx; ++u) C.c[u] *= window[u];
    GridSignal filtered = ifft(C);

    // Honest re-check of the realized column's x-frequency content.
    Spectrum C2 = fft(filtered);
    for (int u = 0; u < nx; ++u) {
      double mass = std::norm(C2.c[u]);
      leak_den += mass;
      if (norm2((1.0 / s) * grid.xi(u) - ell_vec, grid.dim) > sqrt_n) leak_num += mass;
    }

    cplx* dst = piece.table.data() + ci * nx;
    for (int i = 0; i < nx; ++i) dst[i] = bandv * filtered.v[i];
  }
  piece.xband_leak = leak_den > 0.0 ? leak_num / leak_den : 0.0;
  return piece;
}

GridSignal piece_apply(const SymbolPiece& piece, const GridSignal& f) {
  const Grid& g = piece.grid;
  if (!(f.grid == g)) throw std::invalid_argument("piece_apply: grid mismatch");
  Spectrum F = fft(f);
  auto tw = twiddle_table(g.n);
  const auto& w = *tw;
  const int nx = g.total();
  GridSignal out = make_signal(g);
  const double scale = std::pow(1.0 / g.length, g.dim);

  for (size_t ci = 0; ci < piece.cols.size(); ++ci) {
    int t = piece.cols[ci];
    cplx fc = F.c[t];
    if (fc == cplx(0.0, 0.0)) continue;
    const cplx* colv = piece.table.data() + ci * nx;
    if (g.dim == 1) {
      for (int i = 0; i < nx; ++i)
        out.v[i] += colv[i] * fc * w[static_cast<size_t>(static_cast<long long>(i) * t % g.n)];
    } else {
      int t0 = t / g.n, t1 = t % g.n;
      for (int i0 = 0; i0 < g.n; ++i0) {
        cplx ph0 = w[static_cast<size_t>(static_cast<long long>(i0) * t0 % g.n)];
        for (int i1 = 0; i1 < g.n; ++i1) {
          cplx ph = ph0 * w[static_cast<size_t>(static_cast<long long>(i1) * t1 % g.n)];
          out.v[i0 * g.n + i1] += colv[i0 * g.n + i1] * fc * ph;
        }
      }
    }
  }
  for (auto& z : out.v) z *= scale;
  return out;
}

cplx piece_table_value(const SymbolPiece& piece, int x_flat, int xi_storage) {
  for (size_t ci = 0; ci < piece.cols.size(); ++ci)
    if (piece.cols[ci] == xi_storage)
      return piece.table[ci * piece.grid.total() + x_flat];
  return 0.0;
}

RegionReport verify_region(const SymbolPiece& piece, const GridSignal& f,
                           const AlphaCover& cover, double radius_factor, double mass_tol) {
  const Grid& g = piece.grid;
  GridSignal out = piece_apply(piece, f);
  Spectrum S = fft(out);

  RegionReport rep;
  const double s = piece.band_scale;
  rep.ball_center = s * (to_vec(piece.ell) + to_vec(piece.m));
  rep.ball_radius =
      (cover.params.C + std::sqrt(static_cast<double>(g.dim))) * s * radius_factor;
  rep.mass_outside = spectral_mass_outside(S, rep.ball_center, rep.ball_radius);

  double total = 0.0;
  for (const auto& z : S.c) total += std::norm(z);
  if (total > 0.0) {
    double lb = bracket(piece.ell, g.dim);
    for (size_t pos = 0; pos < cover.lattice.size(); ++pos) {
      const Idx& k = cover.lattice[pos];
      double band_mass = 0.0;
      for (int t : lattice_ball_indices(g, cover.centers[pos],
                                        2.0 * cover.params.C * cover.scales[pos])) {
        double r = cover.rho(k, g.xi(t));
        if (r != 0.0) band_mass += std::norm(r * S.c[t]);
      }
      if (band_mass / total > 1e-10) {
        double ratio = norm2(k - piece.m, g.dim) / lb;
        if (ratio > rep.max_km_ratio) {
          rep.max_km_ratio = ratio;
          rep.worst_k = k;
        }
      }
    }
  }
  rep.pass = rep.mass_outside <= mass_tol;
  return rep;
}

DecayReport verify_ell_decay(const Symbol& sigma, const AlphaCover& cover,
                             const GridSignal& f, double p, const std::vector<int>& orders,
                             const Idx& m, int ell_lo, int ell_hi) {
  if (cover.find(m) < 0) throw std::invalid_argument("verify_ell_decay: band not retained");
  GridSignal fm = multiplier_apply(
      [&cover, &m](const Vec& xi) { return cplx(cover.eta(m, xi), 0.0); }, f);
  double denom = lp_norm(fm, p);
  if (denom == 0.0)
    throw std::invalid_argument("verify_ell_decay: f carries no mass in band m");

  DecayReport rep;
  for (int l = ell_lo; l <= ell_hi; ++l) {
    Idx ell{l, 0};
    SymbolPiece piece = decompose(sigma, cover, f.grid, m, ell, true);
    double r = lp_norm(piece_apply(piece, fm), p) / denom;
    rep.points.push_back({bracket(ell, f.grid.dim), r});
  }
  std::vector<double> xs, ys;
  for (auto& pt : rep.points) {
    xs.push_back(pt[0]);
    ys.push_back(pt[1]);
  }
  rep.fit = fit_loglog(xs, ys);
  rep.pass = true;
  for (int N : orders) {
    bool ok = rep.fit.points >= 2 && rep.fit.slope <= -N + 0.5;
    rep.order_pass.push_back({N, ok});
    rep.pass = rep.pass && ok;
  }
  return rep;
}

namespace {

double kernel_sup(const SymbolPiece& piece, int M, int x_stride) {
  const Grid& g = piece.grid;
  const int nx = g.total();
  const double s = piece.band_scale;
  const double norm_factor = std::pow(s, g.dim);  // <m>^{An}
  const double scale = std::pow(2.0 * kPi, g.dim);

  // Damping weights (1 + <m>^A |y|)^M on the periodic displacement lattice.
  std::vector<double> weight(nx);
  for (int i = 0; i < nx; ++i)
    weight[i] = std::pow(1.0 + s * norm2(g.y_periodic(i), g.dim), M);

  double sup = 0.0;
  std::vector<cplx> row(nx);
  for (int i = 0; i < nx; i += x_stride) {
    std::fill(row.begin(), row.end(), cplx(0.0, 0.0));
    for (size_t ci = 0; ci < piece.cols.size(); ++ci)
      row[piece.cols[ci]] = piece.table[ci * nx + i];
    GridSignal kernel = ifft(Spectrum{g, row});
    for (int yi = 0; yi < nx; ++yi)
      sup = std::max(sup, scale * std::abs(kernel.v[yi]) * weight[yi] / norm_factor);
  }
  return sup;
}

}  // namespace

DecayReport verify_oscillatory_decay(const Symbol& sigma, const AlphaCover& cover,
                                     const Grid& grid, const Idx& m, int ell_lo,
                                     int ell_hi, int M, int N, int x_stride) {
  DecayReport rep;
  for (int l = ell_lo; l <= ell_hi; ++l) {
    Idx ell{l, 0};
    SymbolPiece piece = decompose(sigma, cover, grid, m, ell, true);
    rep.points.push_back({bracket(ell, grid.dim), kernel_sup(piece, M, x_stride)});
  }
  std::vector<double> xs, ys;
  for (auto& pt : rep.points) {
    xs.push_back(pt[0]);
    ys.push_back(pt[1]);
  }
  rep.fit = fit_loglog(xs, ys);
  bool ok = rep.fit.points >= 2 && rep.fit.slope <= -N + 0.5;
  rep.order_pass.push_back({N, ok});
  rep.pass = ok;
  return rep;
}

DecayReport oscillatory_kernel_m_sweep(const Symbol& sigma, const AlphaCover& cover,
                                       const Grid& grid, const Idx& ell, int m_lo,
                                       int m_hi, int M, int x_stride, double slope_tol) {
  DecayReport rep;
  for (int mi = m_lo; mi <= m_hi; ++mi) {
    Idx m{mi, 0};
    SymbolPiece piece = decompose(sigma, cover, grid, m, ell, true);
    rep.points.push_back({bracket(m, grid.dim), kernel_sup(piece, M, x_stride)});
  }
  std::vector<double> xs, ys;
  for (auto& pt : rep.points) {
    xs.push_back(pt[0]);
    ys.push_back(pt[1]);
  }
  rep.fit = fit_loglog(xs, ys);
  rep.pass = rep.fit.points >= 2 && std::abs(rep.fit.slope) <= slope_tol;
  return rep;
}

double piece_band_ratio(const GridSignal& piece_output, const AlphaCover& cover,
                        const Idx& k, const Idx& ell, double p) {
  if (!(p > 0.0)) throw std::invalid_argument("piece_band_ratio: p must be positive");
  double total = lp_norm(piece_output, p);
  if (total == 0.0) throw std::invalid_argument("piece_band_ratio: zero piece output");
  GridSignal banded = multiplier_apply(
      [&cover, &k](const Vec& xi) { return cplx(cover.rho(k, xi), 0.0); }, piece_output);
  double p_star = std::min(1.0, p);
  double expo = cover.A * piece_output.grid.dim * (1.0 / p_star - 1.0);
  return lp_norm(banded, p) / (std::pow(bracket(ell, piece_output.grid.dim), expo) * total);
}

}  // namespace alphamod
