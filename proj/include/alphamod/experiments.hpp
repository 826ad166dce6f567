#ifndef ALPHAMOD_EXPERIMENTS_HPP
#define ALPHAMOD_EXPERIMENTS_HPP

#include <map>

#include "alphamod/quantize.hpp"

namespace alphamod {

struct ExperimentRecord {
  double index = 0.0;  // trend abscissa, typically <ell>
  std::vector<std::pair<std::string, double>> values;
};

struct ExperimentReport {
  std::string id;
  std::vector<std::pair<std::string, std::string>> params;
  std::vector<ExperimentRecord> records;
  std::vector<std::pair<std::string, SlopeFit>> fits;
  bool pass = false;
  std::string verdict;
  std::vector<std::string> notes;
  uint64_t seed = 0;
  Grid grid;
  uint64_t cover_hash = 0;

  void set_param(const std::string& key, const std::string& value);
  void set_param(const std::string& key, double value);
  const SlopeFit* fit(const std::string& name) const;
};

std::string report_json(const ExperimentReport& rep);
std::string report_csv(const ExperimentReport& rep);
void emit_report(const ExperimentReport& rep, const std::string& format,
                 const std::string& path);

// Deterministic smooth band-limited test signal: seeded Gaussian bumps in
// frequency, supported (to rounding) in [lo, hi] per axis.
GridSignal seeded_band_signal(const Grid& grid, uint64_t seed, double lo, double hi,
                              int components = 12);

// Plateau test function with spectrum psi~((xi - <l>^A l)/<l>^A); the shared
// f-family of the operator experiments.
GridSignal plateau_signal(const Grid& grid, double alpha, double c, const Idx& ell,
                          const BumpProfile& profile = smooth_transition_profile());

// Grid selection: the highest band center must sit at most at half-Nyquist.
Grid experiment_grid(double max_freq, double length = 256.0, int max_n = 1 << 21);

struct BoundednessOptions {
  double alpha = 0.5, p = 1.0, q = 1.0, s = 0.0;
  int ell_min = 0, ell_max = 24;
  int k_max = 32;
  uint64_t seed = 20270301;
  double slope_tol = 0.1;
  int n_symbols = 3;
  bool counterexample_symbol = false;  // negative control
  double ce_eps = 0.25;
};

// R(sigma, f_ell) = |sigma(X,D) f|_{M} / (|sigma|_{S, N=2} |f|_{M}); passes
// when every per-symbol ratio trend stays below slope_tol.
ExperimentReport exp_boundedness(const BoundednessOptions& opts);

struct CounterexampleOptions {
  double alpha = 0.5, eps = 0.25, c = 0.0;
  double p = 0.5, q = 1.0, s = 0.0;
  int ell_min = 2, ell_max = 24;
  int k_max = 32;
  uint64_t seed = 20270301;
  double exponent_tol = 0.15;  // per-norm exponent slack
  double ratio_factor = 0.8;   // required fraction of the predicted ratio slope
  double flat_tol = 0.1;       // ratio slope window when p >= 1
};

ExperimentReport exp_counterexample(const CounterexampleOptions& opts);

struct LiftOptions {
  double alpha = 0.5, p = 1.0, q = 1.0, s = 0.0;
  std::vector<double> t_values{-1.0, 1.0};
  int ell_min = 2, ell_max = 16;
  int k_max = 32;
  uint64_t seed = 20270301;
  double slope_tol = 0.1;
};

ExperimentReport exp_lift(const LiftOptions& opts);

struct EmbeddingOptions {
  double alpha = 0.5;
  std::vector<double> q_values{1.0, 2.0, kInf};
  int ell_min = 2, ell_max = 16;
  int k_max = 32;
  uint64_t seed = 20270301;
  double slope_tol = 0.1;
};

ExperimentReport exp_embedding(const EmbeddingOptions& opts);

// Flat key=value configuration, one pair per line, '#' starts a comment.
std::map<std::string, std::string> parse_config_file(const std::string& path);
std::map<std::string, std::string> parse_config_text(const std::string& text);

// Named symbol specs for the CLI, e.g. "one", "bessel:t=1",
// "eta:alpha=0.5,k=3", "modulated:alpha=0.5,kmax=32,pattern=2,seed=7",
// "counterexample:alpha=0.5,eps=0.25,c=0.0625".
struct SymbolSpec {
  std::string name;
  std::map<std::string, double> args;
};

SymbolSpec parse_symbol_spec(const std::string& text);
Symbol build_symbol(const SymbolSpec& spec, int dim);

}  // namespace alphamod

#endif
