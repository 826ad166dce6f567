#include "alphamod/io.hpp"

#include <json.hpp>

#include <cstring>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace alphamod {

namespace {

constexpr char kMagic[5] = {'A', 'M', 'O', 'D', '1'};

template <class T>
void put(std::ostream& os, const T& v) {
  os.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <class T>
T get(std::istream& is) {
  T v;
  is.read(reinterpret_cast<char*>(&v), sizeof(T));
  if (!is) throw std::runtime_error("amod: truncated file");
  return v;
}

}  // namespace

void write_amod(const std::string& path, const GridSignal& f) {
  f.grid.validate();
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("write_amod: cannot open " + path);
  os.write(kMagic, sizeof(kMagic));
  put<uint8_t>(os, static_cast<uint8_t>(f.grid.dim));
  put<uint32_t>(os, static_cast<uint32_t>(f.grid.n));
  put<double>(os, f.grid.length);
  for (const auto& z : f.v) {
    put<double>(os, z.real());
    put<double>(os, z.imag());
  }
  if (!os) throw std::runtime_error("write_amod: write failed for " + path);
}

GridSignal read_amod(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw std::runtime_error("read_amod: cannot open " + path);
  char magic[5];
  is.read(magic, sizeof(magic));
  if (!is || std::memcmp(magic, kMagic, sizeof(kMagic)) != 0)
    throw std::runtime_error("read_amod: bad magic in " + path);
  Grid g;
  g.dim = get<uint8_t>(is);
  g.n = static_cast<int>(get<uint32_t>(is));
  g.length = get<double>(is);
  g.validate();
  GridSignal f = make_signal(g);
  for (auto& z : f.v) {
    double re = get<double>(is);
    double im = get<double>(is);
    z = {re, im};
  }
  return f;
}

void write_csv_signal(const std::string& path, const GridSignal& f) {
  if (f.grid.dim != 1)
    throw std::invalid_argument("write_csv_signal: CSV carries dim-1 signals only");
  std::ofstream os(path);
  if (!os) throw std::runtime_error("write_csv_signal: cannot open " + path);
  for (int i = 0; i < f.grid.n; ++i)
    os << format_double(f.grid.x(i)[0]) << ',' << format_double(f.v[i].real()) << ','
       << format_double(f.v[i].imag()) << '\n';
}

GridSignal read_csv_signal(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw std::runtime_error("read_csv_signal: cannot open " + path);
  std::vector<double> xs;
  std::vector<cplx> vs;
  std::string line;
  while (std::getline(is, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ls(line);
    double x, re, im;
    char comma;
    if (!(ls >> x >> comma >> re >> comma >> im))
      throw std::runtime_error("read_csv_signal: malformed line: " + line);
    xs.push_back(x);
    vs.push_back({re, im});
  }
  if (xs.size() < 2) throw std::runtime_error("read_csv_signal: too few samples");
  Grid g;
  g.dim = 1;
  g.n = static_cast<int>(xs.size());
  g.length = (xs[1] - xs[0]) * g.n;
  g.validate();
  return GridSignal{g, std::move(vs)};
}

GridSignal read_signal(const std::string& path) {
  if (path.size() >= 4 && path.substr(path.size() - 4) == ".csv")
    return read_csv_signal(path);
  return read_amod(path);
}

void write_signal(const std::string& path, const GridSignal& f) {
  if (path.size() >= 4 && path.substr(path.size() - 4) == ".csv")
    write_csv_signal(path, f);
  else
    write_amod(path, f);
}

std::string cover_report_json(const CoverReport& report, const AlphaCover& cover) {
  nlohmann::ordered_json j;
  j["partition_defect"] = report.partition_defect;
  j["overlap"] = report.overlap;
  j["derivative_constants"] = nlohmann::ordered_json::array();
  for (const auto& dc : report.derivative_constants) {
    nlohmann::ordered_json e;
    e["beta"] = cover.dim() == 1 ? nlohmann::ordered_json::array({dc.beta.order[0]})
                                 : nlohmann::ordered_json::array(
                                       {dc.beta.order[0], dc.beta.order[1]});
    e["C_prime"] = dc.c_prime;
    j["derivative_constants"].push_back(e);
  }
  j["support_violations"] = nlohmann::ordered_json::array();
  for (const auto& sv : report.support_violations) {
    nlohmann::ordered_json e;
    e["k"] = cover.dim() == 1 ? nlohmann::ordered_json::array({sv.k[0]})
                              : nlohmann::ordered_json::array({sv.k[0], sv.k[1]});
    e["xi"] = cover.dim() == 1 ? nlohmann::ordered_json::array({sv.xi[0]})
                               : nlohmann::ordered_json::array({sv.xi[0], sv.xi[1]});
    e["value"] = sv.value;
    j["support_violations"].push_back(e);
  }
  nlohmann::ordered_json meta;
  meta["alpha"] = cover.params.alpha;
  meta["dim"] = cover.dim();
  meta["C"] = cover.params.C;
  meta["k_max"] = cover.params.k_max;
  meta["window_radius"] = report.window_radius;
  meta["denominator_floor"] = report.denominator_floor;
  meta["overlap_reported"] = report.overlap;
  meta["profile"] = cover.profile.name();
  meta["pass"] = report.pass;
  j["meta"] = meta;
  return j.dump(2) + "\n";
}

std::string cover_params_json(const CoverParams& params) {
  nlohmann::ordered_json j;
  j["alpha"] = params.alpha;
  j["dim"] = params.dim;
  j["C"] = params.C;
  j["k_max"] = params.k_max;
  j["window_radius"] = params.window_radius;
  return j.dump(2) + "\n";
}

CoverParams parse_cover_params_json(const std::string& text) {
  auto j = nlohmann::json::parse(text);
  CoverParams p;
  p.alpha = j.at("alpha").get<double>();
  p.dim = j.value("dim", 1);
  p.C = j.value("C", 0.0);
  p.k_max = j.value("k_max", 32);
  p.window_radius = j.value("window_radius", 0.0);
  return p;
}

}  // namespace alphamod
