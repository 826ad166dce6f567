#include "alphamod/experiments.hpp"

#include <json.hpp>

#include <fstream>
#include <memory>
#include <random>
#include <sstream>
#include <stdexcept>

namespace alphamod {

void ExperimentReport::set_param(const std::string& key, const std::string& value) {
  params.push_back({key, value});
}

void ExperimentReport::set_param(const std::string& key, double value) {
  params.push_back({key, format_double(value)});
}

const SlopeFit* ExperimentReport::fit(const std::string& name) const {
  for (const auto& [n, f] : fits)
    if (n == name) return &f;
  return nullptr;
}

std::string report_json(const ExperimentReport& rep) {
  nlohmann::ordered_json j;
  j["experiment"] = rep.id;
  nlohmann::ordered_json params;
  for (const auto& [k, v] : rep.params) params[k] = v;
  j["params"] = params;
  nlohmann::ordered_json provenance;
  provenance["seed"] = rep.seed;
  provenance["grid_dim"] = rep.grid.dim;
  provenance["grid_n"] = rep.grid.n;
  provenance["grid_length"] = rep.grid.length;
  provenance["cover_hash"] = rep.cover_hash;
  j["provenance"] = provenance;
  nlohmann::ordered_json records = nlohmann::ordered_json::array();
  for (const auto& r : rep.records) {
    nlohmann::ordered_json e;
    e["index"] = r.index;
    for (const auto& [k, v] : r.values) e[k] = v;
    records.push_back(e);
  }
  j["records"] = records;
  nlohmann::ordered_json fits = nlohmann::ordered_json::array();
  for (const auto& [name, f] : rep.fits) {
    nlohmann::ordered_json e;
    e["name"] = name;
    e["slope"] = f.slope;
    e["intercept"] = f.intercept;
    e["stderr"] = f.stderr_slope;
    e["points"] = f.points;
    fits.push_back(e);
  }
  j["fits"] = fits;
  j["notes"] = rep.notes;
  j["verdict"] = rep.verdict;
  j["pass"] = rep.pass;
  return j.dump(2) + "\n";
}

std::string report_csv(const ExperimentReport& rep) {
  std::ostringstream os;
  os << "index";
  if (!rep.records.empty())
    for (const auto& [k, v] : rep.records.front().values) {
      (void)v;
      os << ',' << k;
    }
  os << '\n';
  for (const auto& r : rep.records) {
    os << format_double(r.index);
    for (const auto& [k, v] : r.values) {
      (void)k;
      os << ',' << format_double(v);
    }
    os << '\n';
  }
  return os.str();
}

void emit_report(const ExperimentReport& rep, const std::string& format,
                 const std::string& path) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("emit_report: cannot open " + path);
  if (format == "json")
    os << report_json(rep);
  else if (format == "csv")
    os << report_csv(rep);
  else
    throw std::invalid_argument("emit_report: format must be json or csv");
}

GridSignal seeded_band_signal(const Grid& grid, uint64_t seed, double lo, double hi,
                              int components) {
  grid.validate();
  if (!(lo < hi)) throw std::invalid_argument("seeded_band_signal: empty band");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> upos(lo, hi), uphase(0.0, 2.0 * kPi),
      uwidth(0.02, 0.12), uamp(0.3, 1.0);

  struct Component {
    Vec center;
    double width, amp, phase;
  };
  std::vector<Component> comps;
  for (int c = 0; c < components; ++c) {
    Component comp;
    comp.center = {upos(rng), grid.dim == 2 ? upos(rng) : 0.0};
    comp.width = uwidth(rng) * (hi - lo);
    comp.amp = uamp(rng);
    comp.phase = uphase(rng);
    comps.push_back(comp);
  }

  Spectrum F{grid, std::vector<cplx>(grid.total(), 0.0)};
  for (int t = 0; t < grid.total(); ++t) {
    Vec xi = grid.xi(t);
    cplx v = 0.0;
    for (const auto& comp : comps) {
      double d = norm2(xi - comp.center, grid.dim) / comp.width;
      if (d < 12.0) v += comp.amp * std::exp(-0.5 * d * d) * std::polar(1.0, comp.phase);
    }
    F.c[t] = v;
  }
  return ifft(F);
}

GridSignal plateau_signal(const Grid& grid, double alpha, double c, const Idx& ell,
                          const BumpProfile& profile) {
  double A = alpha / (1.0 - alpha);
  double s = std::pow(bracket(ell, grid.dim), A);
  Vec center = s * to_vec(ell);
  double reach = 2.0 * c * s;
  if (norm2(center, grid.dim) + reach > grid.nyquist() / 2.0)
    throw std::invalid_argument("plateau_signal: band exceeds half-Nyquist");
  Spectrum F{grid, std::vector<cplx>(grid.total(), 0.0)};
  for (int t : lattice_ball_indices(grid, center, reach)) {
    double r = norm2(grid.xi(t) - center, grid.dim) / (c * s);
    double v = profile.value(std::min(r, 2.0));
    if (v != 0.0) F.c[t] = v;
  }
  return ifft(F);
}

Grid experiment_grid(double max_freq, double length, int max_n) {
  int n = 512;
  while (kPi * n / length < 2.0 * max_freq && n < max_n) n *= 2;
  Grid g{1, length, n};
  g.validate();
  if (g.nyquist() < 2.0 * max_freq)
    throw std::invalid_argument("experiment_grid: cannot reach half-Nyquist headroom");
  return g;
}

namespace {

double dyn_c_default(double alpha) {
  CounterexampleParams p;
  p.alpha = alpha;
  double c = 1.0 / 16.0;
  while (!(2.0 * c * p.K() < 1.0)) c /= 2.0;
  return c;
}

std::vector<double> amplitude_pattern(const AlphaCover& cover, int pattern, uint64_t seed) {
  std::vector<double> a(cover.lattice.size(), 0.0);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (size_t pos = 0; pos < cover.lattice.size(); ++pos) {
    const Idx& k = cover.lattice[pos];
    switch (pattern % 3) {
      case 0: a[pos] = 1.0; break;
      case 1: a[pos] = (k[0] + k[1]) % 2 == 0 ? 1.0 : -1.0; break;
      default: a[pos] = u(rng); break;
    }
  }
  return a;
}

SeminormDomain boundedness_domain(const AlphaCover& cover, double max_freq) {
  SeminormDomain dom;
  dom.x_radius = 8.0;
  dom.x_step = 2.0;
  dom.xi_radius = std::min(cover.window_radius, 1.2 * max_freq);
  dom.xi_step = dom.xi_radius / 192.0;
  dom.random_probes = 96;
  dom.seed = 0x5eedD0;
  for (size_t pos = 0; pos < cover.lattice.size(); ++pos) {
    double c = norm2(cover.centers[pos], cover.dim());
    if (c <= dom.xi_radius) {
      dom.extra_xi.push_back(c);
      dom.extra_xi.push_back(c + cover.c1 * cover.scales[pos]);
      dom.extra_xi.push_back(c + 1.5 * cover.c1 * cover.scales[pos]);
    }
  }
  return dom;
}

void fit_and_store(ExperimentReport& rep, const std::string& name,
                   const std::vector<std::array<double, 2>>& pts, double index_min) {
  std::vector<double> xs, ys;
  for (const auto& p : pts)
    if (p[0] >= index_min) {
      xs.push_back(p[0]);
      ys.push_back(p[1]);
    }
  rep.fits.push_back({name, fit_loglog(xs, ys)});
}

}  // namespace

ExperimentReport exp_boundedness(const BoundednessOptions& opts) {
  if (opts.ell_max - opts.ell_min + 1 < 6)
    throw std::invalid_argument("exp_boundedness: need at least 6 family members");

  ExperimentReport rep;
  rep.id = "boundedness";
  rep.seed = opts.seed;
  rep.set_param("alpha", opts.alpha);
  rep.set_param("p", opts.p);
  rep.set_param("q", opts.q);
  rep.set_param("s", opts.s);
  rep.set_param("ell_min", static_cast<double>(opts.ell_min));
  rep.set_param("ell_max", static_cast<double>(opts.ell_max));
  rep.set_param("k_max", static_cast<double>(opts.k_max));
  rep.set_param("symbol_family",
                opts.counterexample_symbol ? "counterexample" : "modulated");

  const double A = opts.alpha / (1.0 - opts.alpha);
  const double c = dyn_c_default(opts.alpha);
  const double top = std::pow(1.0 + std::abs(opts.ell_max) + 1.0, A) *
                     (std::abs(opts.ell_max) + 1.0);
  Grid grid = experiment_grid(1.1 * top + 4.0);
  rep.grid = grid;

  CoverParams cp;
  cp.alpha = opts.alpha;
  cp.k_max = opts.k_max;
  AlphaCover cover = make_cover(cp);
  rep.cover_hash = cover.hash();
  BandTable table = make_band_table(cover, grid);
  QuasiNormParams qn{opts.p, opts.q, opts.s, opts.alpha};

  // Symbol family with seminorm normalization (order-2 class (0, alpha, alpha)).
  std::vector<Symbol> symbols;
  std::vector<std::string> labels;
  if (opts.counterexample_symbol) {
    CounterexampleParams ce;
    ce.alpha = opts.alpha;
    ce.eps = opts.ce_eps;
    symbols.push_back(make_counterexample(ce).sigma);
    labels.push_back("counterexample");
  } else {
    for (int pat = 0; pat < opts.n_symbols; ++pat) {
      symbols.push_back(make_modulated_family(
          cover, amplitude_pattern(cover, pat, opts.seed + pat), {1.0, 0.0}, grid.dxi()));
      labels.push_back("modulated_" + std::to_string(pat));
    }
  }
  SeminormDomain dom = boundedness_domain(cover, top);
  std::vector<double> norms;
  for (size_t i = 0; i < symbols.size(); ++i) {
    double sn = seminorm(symbols[i], 2, {0.0, opts.alpha, opts.alpha}, dom);
    norms.push_back(sn);
    rep.set_param("seminorm_" + labels[i], sn);
  }

  std::vector<std::vector<std::array<double, 2>>> ratio_pts(symbols.size());
  for (int l = opts.ell_min; l <= opts.ell_max; ++l) {
    Idx ell{l, 0};
    GridSignal f = plateau_signal(grid, opts.alpha, c, ell);
    Spectrum F = fft(f);
    double nf = alpha_norm(F, table, qn);
    ExperimentRecord record;
    record.index = bracket(ell, grid.dim);
    record.values.push_back({"norm_f", nf});
    if (nf == 0.0) {
      rep.notes.push_back("ell=" + std::to_string(l) + " excluded: zero norm");
      rep.records.push_back(record);
      continue;
    }
    for (size_t i = 0; i < symbols.size(); ++i) {
      GridSignal g = quantize_apply(symbols[i], f);
      double R = alpha_norm(fft(g), table, qn) / (norms[i] * nf);
      record.values.push_back({"R_" + labels[i], R});
      ratio_pts[i].push_back({record.index, R});
    }
    rep.records.push_back(record);
  }

  rep.pass = true;
  for (size_t i = 0; i < symbols.size(); ++i) {
    fit_and_store(rep, "R_" + labels[i], ratio_pts[i], 3.0 - 1e-9);  // <ell> >= 3, i.e. ell >= 2
    rep.pass = rep.pass && rep.fits.back().second.slope <= opts.slope_tol;
  }
  rep.verdict = rep.pass ? "bounded" : "growth detected";
  return rep;
}

ExperimentReport exp_counterexample(const CounterexampleOptions& opts) {
  if (opts.ell_max - opts.ell_min + 1 < 6)
    throw std::invalid_argument("exp_counterexample: need at least 6 points for a fit");

  CounterexampleParams params;
  params.alpha = opts.alpha;
  params.eps = opts.eps;
  params.c = opts.c;
  params.m_range = std::max(64, opts.ell_max + 8);
  Counterexample ce = make_counterexample(params);

  ExperimentReport rep;
  rep.id = "counterexample";
  rep.seed = opts.seed;
  rep.set_param("alpha", opts.alpha);
  rep.set_param("eps", opts.eps);
  rep.set_param("c", ce.params.c);
  rep.set_param("p", opts.p);
  rep.set_param("q", opts.q);
  rep.set_param("s", opts.s);
  rep.set_param("ell_min", static_cast<double>(opts.ell_min));
  rep.set_param("ell_max", static_cast<double>(opts.ell_max));

  const double A = ce.params.A(), Ae = ce.params.A_eps();
  const int n = 1;
  const double top = std::pow(2.0 + opts.ell_max, A) * (1.0 + opts.ell_max);
  Grid grid = experiment_grid(1.1 * top + 4.0);
  rep.grid = grid;

  CoverParams cp;
  cp.alpha = opts.alpha;
  cp.k_max = opts.k_max;
  AlphaCover cover = make_cover(cp);
  rep.cover_hash = cover.hash();
  BandTable table = make_band_table(cover, grid);
  QuasiNormParams qn{opts.p, opts.q, opts.s, opts.alpha};

  std::vector<std::array<double, 2>> pf, pg, pr;
  for (int l = opts.ell_min; l <= opts.ell_max; ++l) {
    Idx ell{l, 0};
    GridSignal f = ce.test_function(grid, ell);
    double nf = alpha_norm(fft(f), table, qn);
    GridSignal g = quantize_apply(ce.sigma, f);
    double ng = alpha_norm(fft(g), table, qn);
    ExperimentRecord record;
    record.index = bracket(ell, grid.dim);
    record.values.push_back({"norm_f", nf});
    record.values.push_back({"norm_sigma_f", ng});
    record.values.push_back({"ratio", nf > 0.0 ? ng / nf : 0.0});
    rep.records.push_back(record);
    pf.push_back({record.index, nf});
    pg.push_back({record.index, ng});
    pr.push_back({record.index, nf > 0.0 ? ng / nf : 0.0});
  }

  fit_and_store(rep, "norm_f", pf, 0.0);
  fit_and_store(rep, "norm_sigma_f", pg, 0.0);
  fit_and_store(rep, "ratio", pr, 0.0);

  const double inv_p = 1.0 / opts.p;
  const double weight_slope = opts.s / (1.0 - opts.alpha);
  const double pred_f = weight_slope + A * n * (1.0 - inv_p);
  const double pred_g = weight_slope + Ae * n * (1.0 - inv_p);
  const double pred_ratio = opts.p < 1.0 ? (A - Ae) * n * (inv_p - 1.0) : 0.0;
  rep.set_param("predicted_norm_f_slope", pred_f);
  rep.set_param("predicted_norm_sigma_f_slope", pred_g);
  rep.set_param("predicted_ratio_slope", pred_ratio);

  double sf = rep.fit("norm_f")->slope;
  double sg = rep.fit("norm_sigma_f")->slope;
  double sr = rep.fit("ratio")->slope;
  bool norms_ok = std::abs(sf - pred_f) <= opts.exponent_tol &&
                  std::abs(sg - pred_g) <= opts.exponent_tol;
  if (opts.p < 1.0) {
    bool growth = sr >= opts.ratio_factor * pred_ratio;
    rep.pass = growth && norms_ok;
    rep.verdict = growth ? "unbounded" : "no growth detected";
  } else {
    rep.pass = std::abs(sr) <= opts.flat_tol && norms_ok;
    rep.verdict = "mechanism absent at p >= 1";
  }
  return rep;
}

ExperimentReport exp_lift(const LiftOptions& opts) {
  ExperimentReport rep;
  rep.id = "lift";
  rep.seed = opts.seed;
  rep.set_param("alpha", opts.alpha);
  rep.set_param("p", opts.p);
  rep.set_param("q", opts.q);
  rep.set_param("s", opts.s);

  const double A = opts.alpha / (1.0 - opts.alpha);
  const double c = dyn_c_default(opts.alpha);
  const double top =
      std::pow(1.0 + std::abs(opts.ell_max) + 1.0, A) * (std::abs(opts.ell_max) + 1.0);
  Grid grid = experiment_grid(1.1 * top + 4.0, 128.0);
  rep.grid = grid;

  CoverParams cp;
  cp.alpha = opts.alpha;
  cp.k_max = opts.k_max;
  AlphaCover cover = make_cover(cp);
  rep.cover_hash = cover.hash();
  BandTable table = make_band_table(cover, grid);

  std::vector<std::vector<std::array<double, 2>>> pts(opts.t_values.size());
  for (int l = opts.ell_min; l <= opts.ell_max; ++l) {
    Idx ell{l, 0};
    GridSignal f = plateau_signal(grid, opts.alpha, c, ell);
    Spectrum F = fft(f);
    double base = alpha_norm(F, table, {opts.p, opts.q, opts.s, opts.alpha});
    ExperimentRecord record;
    record.index = bracket(ell, grid.dim);
    record.values.push_back({"norm_f", base});
    for (size_t ti = 0; ti < opts.t_values.size(); ++ti) {
      double t = opts.t_values[ti];
      GridSignal lifted = bessel_lift(f, t);
      double lifted_norm =
          alpha_norm(fft(lifted), table, {opts.p, opts.q, opts.s - t, opts.alpha});
      double ratio = base > 0.0 ? lifted_norm / base : 0.0;
      record.values.push_back({"ratio_t=" + format_double(t), ratio});
      pts[ti].push_back({record.index, ratio});
    }
    rep.records.push_back(record);
  }

  rep.pass = true;
  for (size_t ti = 0; ti < opts.t_values.size(); ++ti) {
    fit_and_store(rep, "ratio_t=" + format_double(opts.t_values[ti]), pts[ti], 0.0);
    rep.pass = rep.pass && std::abs(rep.fits.back().second.slope) <= opts.slope_tol;
  }
  rep.verdict = rep.pass ? "isomorphism trends flat" : "trend detected";
  return rep;
}

ExperimentReport exp_embedding(const EmbeddingOptions& opts) {
  ExperimentReport rep;
  rep.id = "embedding";
  rep.seed = opts.seed;
  rep.set_param("alpha", opts.alpha);

  const double A = opts.alpha / (1.0 - opts.alpha);
  const double c = dyn_c_default(opts.alpha);
  const double top =
      std::pow(1.0 + std::abs(opts.ell_max) + 1.0, A) * (std::abs(opts.ell_max) + 1.0);
  Grid grid = experiment_grid(1.1 * top + 4.0, 128.0);
  rep.grid = grid;

  CoverParams cp;
  cp.alpha = opts.alpha;
  cp.k_max = opts.k_max;
  AlphaCover cover = make_cover(cp);
  rep.cover_hash = cover.hash();

  CoverParams cu;
  cu.alpha = 0.0;
  cu.k_max = static_cast<int>(std::ceil(grid.nyquist())) + 2;
  AlphaCover uniform = make_cover(cu);

  std::vector<GridSignal> family;
  std::vector<double> scales;
  for (int l = opts.ell_min; l <= opts.ell_max; ++l) {
    Idx ell{l, 0};
    family.push_back(plateau_signal(grid, opts.alpha, c, ell));
    scales.push_back(bracket(ell, grid.dim));
  }

  rep.pass = true;
  for (double q : opts.q_values) {
    EmbeddingReport er = embedding_check(family, scales, cover, uniform, q, opts.slope_tol);
    std::string tag = q == kInf ? "inf" : format_double(q);
    rep.set_param("s1_q=" + tag, er.s1);
    rep.set_param("s2_q=" + tag, er.s2);
    rep.fits.push_back({"into_modulation_q=" + tag, er.into_modulation.trend});
    rep.fits.push_back({"from_modulation_q=" + tag, er.from_modulation.trend});
    for (size_t i = 0; i < er.into_modulation.points.size(); ++i) {
      if (rep.records.size() <= i) {
        ExperimentRecord r;
        r.index = er.into_modulation.points[i][0];
        rep.records.push_back(r);
      }
      rep.records[i].values.push_back(
          {"into_q=" + tag, er.into_modulation.points[i][1]});
      rep.records[i].values.push_back(
          {"from_q=" + tag, er.from_modulation.points[i][1]});
    }
    rep.pass = rep.pass && er.pass;
  }
  rep.verdict = rep.pass ? "embedding trends flat" : "trend detected";
  return rep;
}

std::map<std::string, std::string> parse_config_text(const std::string& text) {
  std::map<std::string, std::string> kv;
  std::istringstream is(text);
  std::string line;
  while (std::getline(is, line)) {
    auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    auto eq = line.find('=');
    if (eq == std::string::npos) continue;
    auto trim = [](std::string s) {
      size_t a = s.find_first_not_of(" \t\r");
      size_t b = s.find_last_not_of(" \t\r");
      return a == std::string::npos ? std::string() : s.substr(a, b - a + 1);
    };
    std::string key = trim(line.substr(0, eq));
    std::string value = trim(line.substr(eq + 1));
    if (!key.empty()) kv[key] = value;
  }
  return kv;
}

std::map<std::string, std::string> parse_config_file(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw std::runtime_error("parse_config_file: cannot open " + path);
  std::ostringstream os;
  os << is.rdbuf();
  return parse_config_text(os.str());
}

SymbolSpec parse_symbol_spec(const std::string& text) {
  SymbolSpec spec;
  auto colon = text.find(':');
  spec.name = text.substr(0, colon);
  if (colon == std::string::npos) return spec;
  std::istringstream is(text.substr(colon + 1));
  std::string item;
  while (std::getline(is, item, ',')) {
    auto eq = item.find('=');
    if (eq == std::string::npos)
      throw std::invalid_argument("parse_symbol_spec: expected key=value in " + item);
    spec.args[item.substr(0, eq)] = std::stod(item.substr(eq + 1));
  }
  return spec;
}

Symbol build_symbol(const SymbolSpec& spec, int dim) {
  auto arg = [&](const std::string& key, double dflt) {
    auto it = spec.args.find(key);
    return it == spec.args.end() ? dflt : it->second;
  };
  if (spec.name == "one") return constant_symbol(1.0, dim);
  if (spec.name == "bessel") return bessel_symbol(arg("t", 0.0), dim);
  if (spec.name == "eta") {
    CoverParams cp;
    cp.alpha = arg("alpha", 0.5);
    cp.dim = dim;
    cp.k_max = static_cast<int>(arg("kmax", 32));
    auto cover = std::make_shared<AlphaCover>(make_cover(cp));
    Idx k{static_cast<int>(arg("k", 0)), static_cast<int>(arg("k1", 0))};
    if (cover->find(k) < 0) throw std::invalid_argument("build_symbol: k not retained");
    Symbol s;
    s.dim = dim;
    s.x_independent = true;
    s.cls = {0.0, cp.alpha, 0.0};
    s.eval = [cover, k](const Vec&, const Vec& xi) { return cplx(cover->eta(k, xi), 0.0); };
    return s;
  }
  if (spec.name == "modulated") {
    CoverParams cp;
    cp.alpha = arg("alpha", 0.5);
    cp.dim = dim;
    cp.k_max = static_cast<int>(arg("kmax", 32));
    AlphaCover cover = make_cover(cp);
    auto amps = amplitude_pattern(cover, static_cast<int>(arg("pattern", 0)),
                                  static_cast<uint64_t>(arg("seed", 7)));
    return make_modulated_family(cover, amps, {1.0, 0.0});
  }
  if (spec.name == "counterexample") {
    CounterexampleParams params;
    params.alpha = arg("alpha", 0.5);
    params.eps = arg("eps", 0.25);
    params.c = arg("c", 0.0);
    params.dim = dim;
    params.m_range = static_cast<int>(arg("mrange", 64));
    return make_counterexample(params).sigma;
  }
  throw std::invalid_argument("build_symbol: unknown symbol spec '" + spec.name + "'");
}

}  // namespace alphamod
