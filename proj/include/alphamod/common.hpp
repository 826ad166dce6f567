#ifndef ALPHAMOD_COMMON_HPP
#define ALPHAMOD_COMMON_HPP

#include <array>
#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>
#include <span>
#include <string>
#include <vector>

namespace alphamod {

using cplx = std::complex<double>;

// Points and lattice indices live in at most two dimensions; component 1 is
// ignored when dim == 1.
using Vec = std::array<double, 2>;
using Idx = std::array<int, 2>;

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kInf = std::numeric_limits<double>::infinity();

inline double norm2(const Vec& v, int dim) {
  return dim == 1 ? std::abs(v[0]) : std::hypot(v[0], v[1]);
}

inline double norm2(const Idx& k, int dim) {
  return dim == 1 ? std::abs(static_cast<double>(k[0]))
                  : std::hypot(static_cast<double>(k[0]), static_cast<double>(k[1]));
}

// The weight bracket 1 + |v|.
inline double bracket(const Vec& v, int dim) { return 1.0 + norm2(v, dim); }
inline double bracket(const Idx& k, int dim) { return 1.0 + norm2(k, dim); }
inline double bracket(double t) { return 1.0 + std::abs(t); }

inline Vec operator-(const Vec& a, const Vec& b) { return {a[0] - b[0], a[1] - b[1]}; }
inline Vec operator+(const Vec& a, const Vec& b) { return {a[0] + b[0], a[1] + b[1]}; }
inline Vec operator*(double c, const Vec& a) { return {c * a[0], c * a[1]}; }
inline Idx operator-(const Idx& a, const Idx& b) { return {a[0] - b[0], a[1] - b[1]}; }
inline Idx operator+(const Idx& a, const Idx& b) { return {a[0] + b[0], a[1] + b[1]}; }

inline Vec to_vec(const Idx& k) {
  return {static_cast<double>(k[0]), static_cast<double>(k[1])};
}

// Derivative multi-index; orders beyond dim are zero.
struct MultiIndex {
  std::array<int, 2> order{0, 0};
  int total() const { return order[0] + order[1]; }
};

// Compensated accumulation; keeps direct quadrature sums near machine
// precision even over long index ranges.
struct KahanSum {
  double sum = 0.0, carry = 0.0;
  void add(double x) {
    double y = x - carry;
    double t = sum + y;
    carry = (t - sum) - y;
    sum = t;
  }
  double value() const { return sum; }
};

struct KahanSumC {
  KahanSum re, im;
  void add(cplx z) {
    re.add(z.real());
    im.add(z.imag());
  }
  cplx value() const { return {re.value(), im.value()}; }
};

// Ordinary least squares on (log x, log y), used for all decay/trend fits.
struct SlopeFit {
  double slope = 0.0;
  double intercept = 0.0;
  double stderr_slope = 0.0;
  int points = 0;
};

SlopeFit fit_loglog(std::span<const double> x, std::span<const double> y,
                    double floor = 1e-13);

// Shared shape for inequality/trend verification results.
struct InequalityReport {
  std::string name;
  std::vector<std::array<double, 2>> points;  // (parameter, ratio)
  double max_ratio = 0.0;
  SlopeFit trend;
  bool pass = false;
  std::string note;
};

uint64_t fnv1a(const std::string& data);

std::string format_double(double v);  // shortest-faithful %.17g rendering

}  // namespace alphamod

#endif
