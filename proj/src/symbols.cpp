#include "alphamod/symbols.hpp"

#include "alphamod/spaces.hpp"

#include <memory>
#include <random>
#include <sstream>
#include <stdexcept>

namespace alphamod {

namespace {

// Nested central differences of a complex-valued function of Vec, orders <= 4
// per axis, with a per-axis step.
cplx central_fd(const std::function<cplx(const Vec&)>& fn, Vec base, MultiIndex order,
                const std::array<double, 2>& h, int dim, int axis = 0) {
  auto value_at = [&](double off) {
    Vec p = base;
    p[axis] += off;
    if (axis + 1 < dim) {
      MultiIndex rest = order;
      rest.order[axis] = 0;
      return central_fd(fn, p, rest, h, dim, axis + 1);
    }
    return fn(p);
  };
  double step = h[axis];
  switch (order.order[axis]) {
    case 0:
      return axis + 1 < dim ? value_at(0.0) : fn(base);
    case 1:
      return (value_at(step) - value_at(-step)) / (2.0 * step);
    case 2:
      return (value_at(step) - 2.0 * value_at(0.0) + value_at(-step)) / (step * step);
    case 3:
      return (value_at(2 * step) - 2.0 * value_at(step) + 2.0 * value_at(-step) -
              value_at(-2 * step)) /
             (2.0 * step * step * step);
    case 4:
      return (value_at(2 * step) - 4.0 * value_at(step) + 6.0 * value_at(0.0) -
              4.0 * value_at(-step) + value_at(-2 * step)) /
             (step * step * step * step);
    default:
      throw std::invalid_argument("central_fd: order out of range");
  }
}

std::array<double, 2> xi_steps(const Vec& xi, int dim, double rho) {
  double h = std::pow(bracket(xi, dim), rho) * 1e-3;
  return {h, h};
}

}  // namespace

cplx symbol_derivative(const Symbol& sym, const MultiIndex& beta, const MultiIndex& gamma,
                       const Vec& x, const Vec& xi, double hx, double rho) {
  if (sym.x_independent && beta.total() > 0) return 0.0;

  const int total = beta.total() + gamma.total();
  if (sym.deriv_kind == Symbol::DerivKind::Full && total <= sym.deriv_order)
    return sym.deriv(beta, gamma, x, xi);

  if (sym.deriv_kind == Symbol::DerivKind::XOnly && beta.total() <= sym.deriv_order) {
    if (gamma.total() == 0) return sym.deriv(beta, {}, x, xi);
    return central_fd([&](const Vec& p) { return sym.deriv(beta, {}, x, p); }, xi, gamma,
                      xi_steps(xi, sym.dim, rho), sym.dim);
  }

  // Finite differences all the way down: xi outer, x inner.
  return central_fd(
      [&](const Vec& p) {
        if (beta.total() == 0) return sym.eval(x, p);
        return central_fd([&](const Vec& y) { return sym.eval(y, p); }, x, beta, {hx, hx},
                          sym.dim);
      },
      xi, gamma, xi_steps(xi, sym.dim, rho), sym.dim);
}

namespace {

std::vector<MultiIndex> multi_indices_upto(int dim, int max_total) {
  std::vector<MultiIndex> out;
  if (dim == 1) {
    for (int b = 0; b <= max_total; ++b) out.push_back({{b, 0}});
  } else {
    for (int total = 0; total <= max_total; ++total)
      for (int b0 = 0; b0 <= total; ++b0) out.push_back({{b0, total - b0}});
  }
  return out;
}

std::vector<Vec> seminorm_points(double radius, double step, int dim,
                                 const std::vector<double>& extra) {
  std::vector<Vec> pts;
  std::vector<double> axis;
  for (double v = 0.0; v <= radius; v += step) {
    axis.push_back(v);
    if (v > 0.0) axis.push_back(-v);
  }
  for (double e : extra) {
    if (std::abs(e) <= radius) {
      axis.push_back(e);
      axis.push_back(-e);
    }
  }
  if (dim == 1) {
    for (double v : axis) pts.push_back({v, 0.0});
  } else {
    for (double v0 : axis)
      for (double v1 : axis) pts.push_back({v0, v1});
  }
  return pts;
}

}  // namespace

double seminorm(const Symbol& sigma, int N, const SymbolClass& cls,
                const SeminormDomain& domain) {
  if (N < 0) throw std::invalid_argument("seminorm: N must be nonnegative");
  std::mt19937_64 rng(domain.seed);
  std::vector<Vec> xs = seminorm_points(domain.x_radius, domain.x_step, sigma.dim, {});
  std::vector<Vec> xis =
      seminorm_points(domain.xi_radius, domain.xi_step, sigma.dim, domain.extra_xi);
  std::uniform_real_distribution<double> u(-domain.xi_radius, domain.xi_radius);
  for (int i = 0; i < domain.random_probes; ++i)
    xis.push_back({u(rng), sigma.dim == 2 ? u(rng) : 0.0});
  if (sigma.x_independent) xs = {Vec{0.0, 0.0}};

  double best = 0.0;
  for (const MultiIndex& beta : multi_indices_upto(sigma.dim, N)) {
    for (const MultiIndex& gamma : multi_indices_upto(sigma.dim, N - beta.total())) {
      double expo = cls.b + cls.delta * beta.total() - cls.rho * gamma.total();
      for (const Vec& xi : xis) {
        double w = std::pow(bracket(xi, sigma.dim), -expo);
        for (const Vec& x : xs) {
          cplx d = symbol_derivative(sigma, beta, gamma, x, xi, domain.hx, cls.rho);
          best = std::max(best, w * std::abs(d));
        }
      }
    }
  }
  return best;
}

Symbol constant_symbol(cplx value, int dim) {
  Symbol s;
  s.dim = dim;
  s.x_independent = true;
  s.cls = {0.0, 1.0, 0.0};
  s.eval = [value](const Vec&, const Vec&) { return value; };
  s.deriv = [value](const MultiIndex& b, const MultiIndex& g, const Vec&, const Vec&) {
    return (b.total() == 0 && g.total() == 0) ? value : cplx(0.0);
  };
  s.deriv_kind = Symbol::DerivKind::Full;
  s.deriv_order = 99;
  return s;
}

Symbol bessel_symbol(double b, int dim) {
  Symbol s;
  s.dim = dim;
  s.x_independent = true;
  s.cls = {b, 1.0, 0.0};
  s.eval = [b, dim](const Vec&, const Vec& xi) {
    double n2 = dim == 1 ? xi[0] * xi[0] : xi[0] * xi[0] + xi[1] * xi[1];
    return cplx(std::pow(1.0 + n2, b / 2.0), 0.0);
  };
  if (dim == 1) {
    // f^(k) = Q_k(xi) (1+xi^2)^{b/2-k} with Q_{k+1} = (1+xi^2) Q_k' + (b-2k) xi Q_k.
    auto polys = std::make_shared<std::vector<std::vector<double>>>();
    polys->push_back({1.0});
    for (int k = 0; k < 4; ++k) {
      const auto& Q = polys->back();
      std::vector<double> next(Q.size() + 1, 0.0);
      for (size_t j = 1; j < Q.size(); ++j) {  // (1+xi^2) Q'
        next[j - 1] += j * Q[j];
        next[j + 1] += j * Q[j];
      }
      for (size_t j = 0; j < Q.size(); ++j) next[j + 1] += (b - 2.0 * k) * Q[j];
      polys->push_back(std::move(next));
    }
    s.deriv = [b, polys](const MultiIndex& beta, const MultiIndex& gamma, const Vec&,
                         const Vec& xi) -> cplx {
      if (beta.total() > 0) return 0.0;
      int k = gamma.total();
      const auto& Q = (*polys)[k];
      double q = 0.0;
      for (size_t j = Q.size(); j-- > 0;) q = q * xi[0] + Q[j];
      return cplx(q * std::pow(1.0 + xi[0] * xi[0], b / 2.0 - k), 0.0);
    };
    s.deriv_kind = Symbol::DerivKind::Full;
    s.deriv_order = 4;
  }
  return s;
}

Symbol make_modulated_family(const AlphaCover& cover, const std::vector<double>& amplitudes,
                             const Vec& direction, double freq_quantum) {
  if (amplitudes.size() != cover.lattice.size())
    throw std::invalid_argument(
        "make_modulated_family: amplitude count must match the cover lattice");
  for (double a : amplitudes)
    if (!(std::abs(a) <= 1.0))
      throw std::invalid_argument("make_modulated_family: amplitudes must satisfy |a| <= 1");

  auto cov = std::make_shared<AlphaCover>(cover);
  auto amps = std::make_shared<std::vector<double>>(amplitudes);
  const int dim = cover.dim();
  const Vec theta = direction;

  // Per-band modulation frequency, optionally snapped to the grid lattice.
  auto omegas = std::make_shared<std::vector<Vec>>();
  for (size_t pos = 0; pos < cover.lattice.size(); ++pos) {
    Vec w = cover.scales[pos] * theta;
    if (freq_quantum > 0.0)
      for (int a = 0; a < dim; ++a)
        w[a] = std::round(w[a] / freq_quantum) * freq_quantum;
    omegas->push_back(w);
  }

  Symbol s;
  s.dim = dim;
  s.cls = {0.0, cover.params.alpha, cover.params.alpha};
  s.eval = [cov, amps, omegas](const Vec& x, const Vec& xi) -> cplx {
    double sum = 0.0;
    for (int pos : cov->contributors(xi)) {
      double a = (*amps)[pos];
      if (a == 0.0) continue;
      const Vec& w = (*omegas)[pos];
      sum += a * std::cos(w[0] * x[0] + w[1] * x[1]) * cov->eta(cov->lattice[pos], xi);
    }
    return cplx(sum, 0.0);
  };
  s.deriv = [cov, amps, omegas, dim](const MultiIndex& beta, const MultiIndex&, const Vec& x,
                                     const Vec& xi) -> cplx {
    // d^j/dv^j cos(v) cycles through cos, -sin, -cos, sin.
    auto cyc = [](int j, double v) {
      switch (j & 3) {
        case 0: return std::cos(v);
        case 1: return -std::sin(v);
        case 2: return -std::cos(v);
        default: return std::sin(v);
      }
    };
    double sum = 0.0;
    for (int pos : cov->contributors(xi)) {
      double a = (*amps)[pos];
      if (a == 0.0) continue;
      const Vec& w = (*omegas)[pos];
      double v = w[0] * x[0] + w[1] * x[1];
      double fac = std::pow(w[0], beta.order[0]);
      if (dim == 2) fac *= std::pow(w[1], beta.order[1]);
      sum += a * fac * cyc(beta.total(), v) * cov->eta(cov->lattice[pos], xi);
    }
    return cplx(sum, 0.0);
  };
  s.deriv_kind = Symbol::DerivKind::XOnly;
  s.deriv_order = 8;

  for (size_t pos = 0; pos < cover.lattice.size(); ++pos) {
    if (amplitudes[pos] == 0.0) continue;
    Symbol::Term term;
    double a = amplitudes[pos];
    Vec w = (*omegas)[pos];
    Idx k = cover.lattice[pos];
    term.xfactor = [a, w](const Vec& x) {
      return cplx(a * std::cos(w[0] * x[0] + w[1] * x[1]), 0.0);
    };
    term.multiplier = [cov, k](const Vec& xi) { return cov->eta(k, xi); };
    s.terms.push_back(std::move(term));
  }
  return s;
}

Symbol make_separable_symbol(std::function<cplx(const Vec&)> xfactor,
                             std::function<double(const Vec&)> multiplier, int dim,
                             SymbolClass cls) {
  Symbol s;
  s.dim = dim;
  s.cls = cls;
  auto xf = std::make_shared<std::function<cplx(const Vec&)>>(std::move(xfactor));
  auto mf = std::make_shared<std::function<double(const Vec&)>>(std::move(multiplier));
  s.eval = [xf, mf](const Vec& x, const Vec& xi) { return (*xf)(x) * (*mf)(xi); };
  Symbol::Term term;
  term.xfactor = [xf](const Vec& x) { return (*xf)(x); };
  term.multiplier = [mf](const Vec& xi) { return (*mf)(xi); };
  s.terms.push_back(std::move(term));
  return s;
}

void CounterexampleParams::validate() const {
  if (!(alpha > 0.0 && alpha < 1.0))
    throw std::invalid_argument("CounterexampleParams: alpha must lie in (0,1)");
  if (!(eps > 0.0 && eps < alpha))
    throw std::invalid_argument("CounterexampleParams: eps must lie in (0, alpha)");
  if (dim != 1 && dim != 2)
    throw std::invalid_argument("CounterexampleParams: dim must be 1 or 2");
  if (m_range < 2) throw std::invalid_argument("CounterexampleParams: m_range too small");
  if (c != 0.0 && !(2.0 * c * K() < 1.0))
    throw std::invalid_argument("CounterexampleParams: need 2cK < 1 for disjoint bumps");
}

Counterexample make_counterexample(CounterexampleParams params, const BumpProfile& profile) {
  params.validate();
  if (params.c == 0.0) {
    double c = 1.0 / 16.0;
    while (!(2.0 * c * params.K() < 1.0)) c /= 2.0;
    params.c = c;
  }

  const double A = params.A(), Ae = params.A_eps(), c = params.c;
  const int dim = params.dim;

  // Lattice of bump centers and scales.
  auto lattice = std::make_shared<std::vector<Idx>>();
  if (dim == 1) {
    for (int m = -params.m_range; m <= params.m_range; ++m) lattice->push_back({m, 0});
  } else {
    for (int m0 = -params.m_range; m0 <= params.m_range; ++m0)
      for (int m1 = -params.m_range; m1 <= params.m_range; ++m1)
        lattice->push_back({m0, m1});
  }
  auto centers = std::make_shared<std::vector<Vec>>();
  auto widths = std::make_shared<std::vector<double>>();   // c <m>^{A_eps}
  auto balls = std::make_shared<std::vector<double>>();    // 2c <m>^A
  for (const Idx& m : *lattice) {
    double br = bracket(m, dim);
    centers->push_back(std::pow(br, A) * to_vec(m));
    widths->push_back(c * std::pow(br, Ae));
    balls->push_back(2.0 * c * std::pow(br, A));
  }

  // Pairwise disjointness of the balls B_m, exact comparisons on centers/radii.
  if (dim == 1) {
    for (size_t i = 0; i + 1 < lattice->size(); ++i) {
      double right = (*centers)[i][0] + (*balls)[i];
      double left = (*centers)[i + 1][0] - (*balls)[i + 1];
      if (!(right < left)) {
        std::ostringstream os;
        os << "make_counterexample: balls B_" << (*lattice)[i][0] << " and B_"
           << (*lattice)[i + 1][0] << " intersect";
        throw std::invalid_argument(os.str());
      }
    }
  } else {
    for (size_t i = 0; i < lattice->size(); ++i)
      for (size_t j = i + 1; j < lattice->size(); ++j) {
        double d = norm2((*centers)[i] - (*centers)[j], dim);
        if (!(d > (*balls)[i] + (*balls)[j])) {
          std::ostringstream os;
          os << "make_counterexample: balls at lattice entries " << i << " and " << j
             << " intersect";
          throw std::invalid_argument(os.str());
        }
      }
  }

  auto prof = std::make_shared<BumpProfile>(profile);
  auto locate = [centers, widths, dim](const Vec& xi) -> int {
    for (size_t i = 0; i < centers->size(); ++i)
      if (norm2(xi - (*centers)[i], dim) < (*widths)[i]) return static_cast<int>(i);
    return -1;
  };

  Counterexample ce;
  ce.params = params;
  ce.profile = profile;

  Symbol& s = ce.sigma;
  s.dim = dim;
  s.x_independent = true;
  s.cls = {0.0, params.alpha - params.eps, params.alpha - params.eps};
  s.eval = [prof, locate, centers, widths, dim](const Vec&, const Vec& xi) -> cplx {
    int i = locate(xi);
    if (i < 0) return 0.0;
    double r = norm2(xi - (*centers)[i], dim) / ((*widths)[i] / 2.0);
    return cplx(prof->value(std::min(r, 2.0)), 0.0);
  };
  if (dim == 1) {
    s.deriv = [prof, locate, centers, widths](const MultiIndex& beta, const MultiIndex& gamma,
                                              const Vec&, const Vec& xi) -> cplx {
      if (beta.total() > 0) return 0.0;
      int i = locate(xi);
      if (i < 0) return 0.0;
      double half = (*widths)[i] / 2.0;  // psi(z) = P(2|z| / width)
      double z = xi[0] - (*centers)[i][0];
      int g = gamma.total();
      if (g == 0) return cplx(prof->value(std::abs(z) / half), 0.0);
      double sgn = z < 0.0 ? -1.0 : 1.0;
      return cplx(std::pow(sgn / half, g) * prof->derivative(std::abs(z) / half, g), 0.0);
    };
    s.deriv_kind = Symbol::DerivKind::Full;
    s.deriv_order = 4;
  }
  return ce;
}

GridSignal Counterexample::test_function(const Grid& grid, const Idx& ell) const {
  grid.validate();
  const int dim = params.dim;
  if (grid.dim != dim)
    throw std::invalid_argument("Counterexample::test_function: grid dimension mismatch");
  double A = params.A(), c = params.c;
  double s = std::pow(bracket(ell, dim), A);
  Vec center = s * to_vec(ell);
  double reach = 2.0 * c * s;
  if (norm2(center, dim) + reach > grid.nyquist() / 2.0)
    throw std::invalid_argument(
        "Counterexample::test_function: band exceeds half-Nyquist; refine the grid");

  Spectrum F{grid, std::vector<cplx>(grid.total(), 0.0)};
  for (int t : lattice_ball_indices(grid, center, reach)) {
    double r = norm2(grid.xi(t) - center, dim) / (c * s);
    double v = profile.value(std::min(r, 2.0));
    if (v != 0.0) F.c[t] = v;
  }
  return ifft(F);
}

LatticePairReport check_lattice_inequality(double alpha, int dim, int range) {
  if (!(alpha >= 0.0 && alpha < 1.0))
    throw std::invalid_argument("check_lattice_inequality: alpha must lie in [0,1)");
  double A = alpha / (1.0 - alpha);

  std::vector<Idx> lattice;
  if (dim == 1) {
    for (int k = -range; k <= range; ++k) lattice.push_back({k, 0});
  } else {
    for (int k0 = -range; k0 <= range; ++k0)
      for (int k1 = -range; k1 <= range; ++k1) lattice.push_back({k0, k1});
  }
  std::vector<Vec> centers;
  std::vector<double> scales;
  for (const Idx& k : lattice) {
    double br = bracket(k, dim);
    scales.push_back(std::pow(br, A));
    centers.push_back(std::pow(br, A) * to_vec(k));
  }

  LatticePairReport rep;
  rep.K = std::max(6.0, 1.0 + std::pow(2.0, A));
  for (size_t i = 0; i < lattice.size(); ++i)
    for (size_t j = i + 1; j < lattice.size(); ++j) {
      double lhs = (scales[i] + scales[j]) * norm2(lattice[i] - lattice[j], dim);
      double rhs = norm2(centers[i] - centers[j], dim);
      double ratio = lhs / rhs;
      ++rep.pairs;
      if (ratio > rep.max_ratio) {
        rep.max_ratio = ratio;
        rep.worst_k = lattice[i];
        rep.worst_m = lattice[j];
      }
      if (ratio > rep.K) ++rep.violations;
    }
  rep.pass = rep.violations == 0;
  return rep;
}

}  // namespace alphamod
