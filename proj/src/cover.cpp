#include "alphamod/cover.hpp"

#include <algorithm>
#include <random>
#include <sstream>
#include <stdexcept>

namespace alphamod {

double CoverParams::default_C(double alpha) {
  double A = alpha / (1.0 - alpha);
  return 4.0 * std::max(1.0, A + 1.0);
}

void CoverParams::validate() const {
  if (!(alpha >= 0.0 && alpha < 1.0))
    throw std::invalid_argument("CoverParams: alpha must lie in [0,1)");
  if (dim != 1 && dim != 2) throw std::invalid_argument("CoverParams: dim must be 1 or 2");
  if (k_max < 1) throw std::invalid_argument("CoverParams: k_max must be positive");
  if (C != 0.0 && !(C > 1.0)) throw std::invalid_argument("CoverParams: C must exceed 1");
  if (window_radius < 0.0)
    throw std::invalid_argument("CoverParams: window_radius must be nonnegative");
}

namespace {

// Interior plateau constant. The unit plateaus of g_k must cover the window:
// asymptotically the centers <k>^A k space out like (A+1)<k>^A radially and
// <k>^A tangentially, so the half-diagonal of a lattice cell is
// hypot(A+1, sqrt(n-1))/2 * <k>^A. At A = 0 the support cap |xi| <= sqrt(n)
// forces the exact value sqrt(n)/2; for A > 0 in dim 2 a safety factor
// absorbs cell curvature (coverage is re-verified numerically below).
double interior_constant(double A, int dim) {
  if (A == 0.0) return std::sqrt(static_cast<double>(dim)) / 2.0;
  double c1 = std::hypot(A + 1.0, std::sqrt(static_cast<double>(dim - 1))) / 2.0;
  return dim == 2 ? 1.2 * c1 : c1;
}

std::vector<Vec> window_samples(double w, int dim, int per_axis, uint64_t seed,
                                int random_count) {
  std::vector<Vec> pts;
  if (dim == 1) {
    for (int i = 0; i <= per_axis; ++i)
      pts.push_back({-w + 2.0 * w * i / per_axis, 0.0});
  } else {
    for (int i = 0; i <= per_axis; ++i)
      for (int j = 0; j <= per_axis; ++j) {
        Vec p{-w + 2.0 * w * i / per_axis, -w + 2.0 * w * j / per_axis};
        if (norm2(p, 2) <= w) pts.push_back(p);
      }
  }
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-w, w);
  for (int i = 0; i < random_count; ++i) {
    Vec p{u(rng), dim == 2 ? u(rng) : 0.0};
    if (norm2(p, dim) <= w) pts.push_back(p);
  }
  return pts;
}

}  // namespace

int AlphaCover::find(const Idx& k) const {
  auto it = std::lower_bound(lattice.begin(), lattice.end(), k);
  if (it == lattice.end() || *it != k) return -1;
  return static_cast<int>(it - lattice.begin());
}

double AlphaCover::bump(int pos, const Vec& xi) const {
  double s = scales[pos];
  double r = norm2(xi - centers[pos], dim()) / (c1 * s);
  return profile.value(std::min(r, 2.0));
}

double AlphaCover::denominator(const Vec& xi) const {
  double sum = 0.0;
  for (size_t pos = 0; pos < lattice.size(); ++pos) {
    double reach = 2.0 * c1 * scales[pos];
    Vec d = xi - centers[pos];
    if (dim() == 1 ? std::abs(d[0]) < reach : d[0] * d[0] + d[1] * d[1] < reach * reach)
      sum += bump(static_cast<int>(pos), xi);
  }
  return sum;
}

double AlphaCover::eta(const Idx& k, const Vec& xi) const {
  int pos = find(k);
  if (pos < 0) throw std::invalid_argument("AlphaCover::eta: index not retained");
  double g = bump(pos, xi);
  if (g == 0.0) return 0.0;
  return g / denominator(xi);
}

double AlphaCover::rho(const Idx& k, const Vec& xi) const {
  double r = norm2(xi - center(k), dim()) / (params.C * scale(k));
  return profile.value(std::min(r, 2.0));
}

double AlphaCover::kappa(const Idx& k, const Vec& xi) const { return rho(k, xi); }

std::vector<int> AlphaCover::contributors(const Vec& xi) const {
  std::vector<int> out;
  for (size_t pos = 0; pos < lattice.size(); ++pos) {
    double reach = 2.0 * c1 * scales[pos];
    Vec d = xi - centers[pos];
    bool inside =
        dim() == 1 ? std::abs(d[0]) < reach : d[0] * d[0] + d[1] * d[1] < reach * reach;
    if (inside && bump(static_cast<int>(pos), xi) > 0.0)
      out.push_back(static_cast<int>(pos));
  }
  return out;
}

uint64_t AlphaCover::hash() const {
  std::ostringstream os;
  os << params.alpha << '|' << params.dim << '|' << params.C << '|' << params.k_max << '|'
     << c1 << '|' << window_radius << '|' << profile.name() << '|' << lattice.size();
  return fnv1a(os.str());
}

AlphaCover make_cover(CoverParams params, const BumpProfile& profile) {
  params.validate();
  if (params.C == 0.0) params.C = CoverParams::default_C(params.alpha);

  AlphaCover cover;
  cover.params = params;
  cover.profile = profile;
  cover.A = params.scaling_exponent();
  cover.c1 = interior_constant(cover.A, params.dim);
  if (2.0 * cover.c1 > params.C)
    throw std::invalid_argument("make_cover: C too small for the interior constant");

  const int km = params.k_max;
  if (params.dim == 1) {
    for (int k = -km; k <= km; ++k) cover.lattice.push_back({k, 0});
  } else {
    for (int k0 = -km; k0 <= km; ++k0)
      for (int k1 = -km; k1 <= km; ++k1) cover.lattice.push_back({k0, k1});
  }
  std::sort(cover.lattice.begin(), cover.lattice.end());
  for (const Idx& k : cover.lattice) {
    cover.centers.push_back(cover.center(k));
    cover.scales.push_back(cover.scale(k));
  }

  // The window must stay clear of supports of dropped indices: the innermost
  // dropped bump along an axis reaches down to <k_max+1>^A (k_max+1 - 2 c1).
  double edge = std::pow(2.0 + km, cover.A) * (km + 1.0 - 2.0 * cover.c1);
  if (params.window_radius == 0.0) {
    if (edge <= 0.0)
      throw std::invalid_argument("make_cover: k_max too small for any usable window");
    cover.window_radius = edge;
  } else {
    if (params.window_radius > edge) {
      std::ostringstream os;
      os << "make_cover: k_max=" << km << " is too small for window radius "
         << params.window_radius << "; frequencies beyond " << edge
         << " are uncovered (e.g. xi = " << 0.5 * (edge + params.window_radius) << ")";
      throw std::invalid_argument(os.str());
    }
    cover.window_radius = params.window_radius;
  }

  // Coverage sweep: the running denominator must stay >= 1 on the window.
  cover.denominator_floor = kInf;
  Vec worst{0, 0};
  auto pts = window_samples(cover.window_radius, params.dim,
                            params.dim == 1 ? 4096 : 128, 0xC0FFEE, 512);
  for (const Vec& p : pts) {
    double d = cover.denominator(p);
    if (d < cover.denominator_floor) {
      cover.denominator_floor = d;
      worst = p;
    }
  }
  if (cover.denominator_floor < 1.0 - 1e-12) {
    std::ostringstream os;
    os << "make_cover: plateau coverage fails at xi = (" << worst[0] << ", " << worst[1]
       << "), denominator " << cover.denominator_floor;
    throw std::invalid_argument(os.str());
  }
  return cover;
}

namespace {

// Central finite difference of eta_k, per-axis derivative orders up to 4.
double central_fd_eta(const AlphaCover& cover, const Idx& k, Vec base,
                      const MultiIndex& beta, double h, int axis = 0) {
  int ord = beta.order[axis];
  auto value_at = [&](double off) {
    Vec p = base;
    p[axis] += off;
    if (axis + 1 < cover.dim()) {
      MultiIndex rest = beta;
      rest.order[axis] = 0;
      return central_fd_eta(cover, k, p, rest, h, axis + 1);
    }
    return cover.eta(k, p);
  };
  if (axis + 1 < cover.dim() && ord == 0) return value_at(0.0);
  switch (ord) {
    case 0:
      return value_at(0.0);
    case 1:
      return (value_at(h) - value_at(-h)) / (2.0 * h);
    case 2:
      return (value_at(h) - 2.0 * value_at(0.0) + value_at(-h)) / (h * h);
    case 3:
      return (value_at(2 * h) - 2.0 * value_at(h) + 2.0 * value_at(-h) - value_at(-2 * h)) /
             (2.0 * h * h * h);
    case 4:
      return (value_at(2 * h) - 4.0 * value_at(h) + 6.0 * value_at(0.0) -
              4.0 * value_at(-h) + value_at(-2 * h)) /
             (h * h * h * h);
    default:
      throw std::invalid_argument("central_fd_eta: order out of range");
  }
}

std::vector<MultiIndex> derivative_indices(int dim, int max_order) {
  std::vector<MultiIndex> out;
  if (dim == 1) {
    for (int b = 0; b <= max_order; ++b) out.push_back({{b, 0}});
  } else {
    for (int total = 0; total <= max_order; ++total)
      for (int b0 = 0; b0 <= total; ++b0) out.push_back({{b0, total - b0}});
  }
  return out;
}

std::vector<Vec> probe_offsets(double reach, int dim, uint64_t seed) {
  std::vector<Vec> offs;
  std::vector<double> radii;
  for (int i = 0; i <= 60; ++i) radii.push_back(reach * 1.02 * i / 60.0);
  // refine the transition shell where the derivatives live
  for (int i = 0; i <= 40; ++i) radii.push_back(reach * (0.45 + 0.60 * i / 40.0));
  if (dim == 1) {
    for (double r : radii) {
      offs.push_back({r, 0.0});
      offs.push_back({-r, 0.0});
    }
  } else {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(0.0, 2.0 * kPi);
    for (double r : radii)
      for (int d = 0; d < 6; ++d) {
        double th = u(rng);
        offs.push_back({r * std::cos(th), r * std::sin(th)});
      }
  }
  return offs;
}

}  // namespace

CoverReport verify_cover(const AlphaCover& cover, double window_radius, int max_order,
                         uint64_t seed) {
  if (window_radius > cover.window_radius)
    throw std::invalid_argument("verify_cover: window exceeds the covered region");
  CoverReport rep;
  rep.window_radius = window_radius;

  // Partition of unity and overlap over the sampled window.
  auto pts = window_samples(window_radius, cover.dim(), cover.dim() == 1 ? 4096 : 96,
                            seed, 512);
  rep.denominator_floor = kInf;
  for (const Vec& p : pts) {
    auto who = cover.contributors(p);
    rep.overlap = std::max(rep.overlap, static_cast<int>(who.size()));
    double sum = 0.0;
    for (int pos : who) sum += cover.eta(cover.lattice[pos], p);
    rep.partition_defect = std::max(rep.partition_defect, std::abs(sum - 1.0));
    rep.denominator_floor = std::min(rep.denominator_floor, cover.denominator(p));
  }

  // Derivative scaling constants via central differences, step <k>^A * 1e-3.
  for (const MultiIndex& beta : derivative_indices(cover.dim(), max_order)) {
    DerivativeConstant dc;
    dc.beta = beta;
    for (size_t pos = 0; pos < cover.lattice.size(); ++pos) {
      const Idx& k = cover.lattice[pos];
      double s = cover.scales[pos];
      if (norm2(cover.centers[pos], cover.dim()) > window_radius) continue;
      double h = s * 1e-3;
      double local = 0.0;
      for (const Vec& off : probe_offsets(2.0 * cover.c1 * s, cover.dim(),
                                          seed ^ (pos * 0x9E3779B97F4A7C15ull))) {
        Vec p = cover.centers[pos] + off;
        if (norm2(p, cover.dim()) > cover.window_radius) continue;
        local = std::max(local, std::abs(central_fd_eta(cover, k, p, beta, h)));
      }
      double weighted = std::pow(s, beta.total()) * local;
      if (weighted > dc.c_prime) {
        dc.c_prime = weighted;
        dc.attained_at = k;
      }
    }
    rep.derivative_constants.push_back(dc);
  }

  // Support containment: eta must vanish identically outside the permitted ball.
  std::mt19937_64 rng(seed ^ 0xABCDEF);
  std::uniform_real_distribution<double> u(0.0, 2.0 * kPi);
  for (size_t pos = 0; pos < cover.lattice.size(); ++pos) {
    const Idx& k = cover.lattice[pos];
    double R = cover.radius(k);
    for (int i = 0; i < 16; ++i) {
      double r = R * (1.0 + 1e-9 + 0.5 * i / 15.0);
      double th = cover.dim() == 2 ? u(rng) : (i % 2 ? 0.0 : kPi);
      Vec p = cover.centers[pos] + Vec{r * std::cos(th), cover.dim() == 2 ? r * std::sin(th) : 0.0};
      double v = cover.eta(k, p);
      if (v != 0.0) rep.support_violations.push_back({k, p, v});
    }
  }

  rep.pass = rep.partition_defect <= 1e-10 && rep.support_violations.empty() &&
             rep.denominator_floor >= 1.0 - 1e-12;
  return rep;
}

double uniform_phi(const Vec& z, int dim, const BumpProfile& profile) {
  double c1 = std::sqrt(static_cast<double>(dim)) / 2.0;
  auto g = [&](const Vec& w) {
    double r = norm2(w, dim) / c1;
    return profile.value(std::min(r, 2.0));
  };
  double gz = g(z);
  if (gz == 0.0) return 0.0;
  double denom = 0.0;
  int base0 = static_cast<int>(std::floor(z[0]));
  int base1 = dim == 2 ? static_cast<int>(std::floor(z[1])) : 0;
  for (int j0 = base0 - 2; j0 <= base0 + 2; ++j0) {
    if (dim == 1) {
      denom += g({z[0] - j0, 0.0});
    } else {
      for (int j1 = base1 - 2; j1 <= base1 + 2; ++j1)
        denom += g({z[0] - j0, z[1] - j1});
    }
  }
  return gz / denom;
}

}  // namespace alphamod
