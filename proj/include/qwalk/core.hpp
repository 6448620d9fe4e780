#pragma once

#include "qwalk/scalar.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <cmath>
#include <map>
#include <numeric>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace qwalk {

// ---------------------------------------------------------------------------
// Angle

/// An angle that is either an exact rational multiple of pi or a free real.
/// Exact angles are reduced into [0, 2pi).
class Angle {
public:
  Angle() = default;

  static Angle pi_multiple(long num, long den) {
    if (den == 0)
      throw std::invalid_argument("angle denominator is zero");
    if (den < 0) {
      num = -num;
      den = -den;
    }
    long g = std::gcd(num < 0 ? -num : num, den);
    if (g > 1) {
      num /= g;
      den /= g;
    }
    long period = 2 * den;
    num %= period;
    if (num < 0)
      num += period;
    Angle a;
    a.exact_ = true;
    a.num_ = num;
    a.den_ = den;
    return a;
  }

  static Angle radians(double value) {
    if (!std::isfinite(value))
      throw std::invalid_argument("angle must be finite");
    Angle a;
    a.exact_ = false;
    a.value_ = std::fmod(value, 2 * M_PI);
    if (a.value_ < 0)
      a.value_ += 2 * M_PI;
    return a;
  }

  /// Accepts "p/q pi", "p pi", "pi/q", "p*pi/q", "pi" or a plain real (radians).
  static Angle parse(const std::string &text);

  bool is_pi_multiple() const { return exact_; }
  long numerator() const { return num_; }
  long denominator() const { return den_; }

  double value() const { return exact_ ? M_PI * static_cast<double>(num_) / static_cast<double>(den_) : value_; }

  /// k such that the angle equals k*pi/4, when it is an exact multiple of pi/4.
  std::optional<int> quarter_pi_index() const {
    if (!exact_ || 4 % den_ != 0)
      return std::nullopt;
    return static_cast<int>(num_ * (4 / den_));
  }

  std::string str() const {
    if (!exact_) {
      std::ostringstream os;
      os.precision(17);
      os << value_;
      return os.str();
    }
    return std::to_string(num_) + "/" + std::to_string(den_) + " pi";
  }

  friend bool operator==(const Angle &a, const Angle &b) {
    if (a.exact_ != b.exact_)
      return false;
    return a.exact_ ? (a.num_ == b.num_ && a.den_ == b.den_) : a.value_ == b.value_;
  }

private:
  bool exact_ = true;
  long num_ = 0;
  long den_ = 1;
  double value_ = 0.0;
};

namespace detail {
inline std::string strip(std::string s) {
  s.erase(std::remove_if(s.begin(), s.end(), [](unsigned char c) { return std::isspace(c) || c == '*'; }), s.end());
  return s;
}
inline long parse_long(const std::string &s, const std::string &context) {
  if (s.empty() || s == "+")
    return 1;
  if (s == "-")
    return -1;
  std::size_t used = 0;
  long v = 0;
  try {
    v = std::stol(s, &used);
  } catch (const std::exception &) {
    throw std::invalid_argument("cannot parse '" + context + "'");
  }
  if (used != s.size())
    throw std::invalid_argument("cannot parse '" + context + "'");
  return v;
}
} // namespace detail

inline Angle Angle::parse(const std::string &text) {
  std::string s = detail::strip(text);
  if (s.empty())
    throw std::invalid_argument("empty angle");
  auto at = s.find("pi");
  if (at == std::string::npos) {
    std::size_t used = 0;
    double v = 0;
    try {
      v = std::stod(s, &used);
    } catch (const std::exception &) {
      throw std::invalid_argument("cannot parse angle '" + text + "'");
    }
    if (used != s.size())
      throw std::invalid_argument("cannot parse angle '" + text + "'");
    return radians(v);
  }
  std::string before = s.substr(0, at);
  std::string after = s.substr(at + 2);
  long num = 1, den = 1;
  // "p/q pi" or "p pi"
  if (auto slash = before.find('/'); slash != std::string::npos) {
    num = detail::parse_long(before.substr(0, slash), text);
    den = detail::parse_long(before.substr(slash + 1), text);
  } else {
    num = detail::parse_long(before, text);
  }
  // "pi/q"
  if (!after.empty()) {
    if (after[0] != '/')
      throw std::invalid_argument("cannot parse angle '" + text + "'");
    den *= detail::parse_long(after.substr(1), text);
  }
  return pi_multiple(num, den);
}

// ---------------------------------------------------------------------------
// trigonometric values of angles in each scalar type

template <class R> R cos_of(const Angle &a);
template <class R> R sin_of(const Angle &a);

namespace detail {
// cos(k*pi/4) for k = 0..7 as (rational, sqrt2 coefficient)
inline QSqrt2 quarter_cos(int k) {
  static const std::array<std::pair<int, int>, 8> table = {
      {{2, 0}, {0, 1}, {0, 0}, {0, -1}, {-2, 0}, {0, -1}, {0, 0}, {0, 1}}};
  auto [a, b] = table[static_cast<std::size_t>(((k % 8) + 8) % 8)];
  return QSqrt2(mpq_class(a, 2), mpq_class(b, 2));
}
} // namespace detail

template <> inline double cos_of<double>(const Angle &a) {
  if (auto k = a.quarter_pi_index())
    return detail::quarter_cos(*k).to_double();
  return std::cos(a.value());
}
template <> inline double sin_of<double>(const Angle &a) {
  if (auto k = a.quarter_pi_index())
    return detail::quarter_cos(*k - 2).to_double();
  return std::sin(a.value());
}
template <> inline mp_real cos_of<mp_real>(const Angle &a) {
  if (a.is_pi_multiple())
    return cos(mp_real::pi() * mp_real(mpq_class(a.numerator(), a.denominator())));
  return cos(mp_real(a.value()));
}
template <> inline mp_real sin_of<mp_real>(const Angle &a) {
  if (a.is_pi_multiple())
    return sin(mp_real::pi() * mp_real(mpq_class(a.numerator(), a.denominator())));
  return sin(mp_real(a.value()));
}
template <> inline QSqrt2 cos_of<QSqrt2>(const Angle &a) {
  auto k = a.quarter_pi_index();
  if (!k)
    throw std::domain_error("angle " + a.str() + " is not an exact multiple of pi/4");
  return detail::quarter_cos(*k);
}
template <> inline QSqrt2 sin_of<QSqrt2>(const Angle &a) {
  auto k = a.quarter_pi_index();
  if (!k)
    throw std::domain_error("angle " + a.str() + " is not an exact multiple of pi/4");
  return detail::quarter_cos(*k - 2);
}

template <class R> Cplx<R> unit_phase(const Angle &a) { return Cplx<R>(cos_of<R>(a), sin_of<R>(a)); }

// ---------------------------------------------------------------------------
// CoinParams

template <class C> using Mat2 = std::array<std::array<C, 2>, 2>;

/// Angles of the general two-state coin
///   [[cos t, e^{i p1} sin t], [e^{i p2} sin t, -e^{i(p1+p2)} cos t]].
struct CoinParams {
  Angle theta;
  Angle phi1;
  Angle phi2;

  static CoinParams hadamard() { return {Angle::pi_multiple(1, 4), Angle::pi_multiple(0, 1), Angle::pi_multiple(0, 1)}; }

  /// True when every coin entry lies in Q(sqrt2)[i].
  bool exact_eligible() const {
    return theta.quarter_pi_index() && phi1.quarter_pi_index() && phi2.quarter_pi_index();
  }
  bool is_hadamard() const { return *this == hadamard(); }

  /// The combined phase chi = e^{i(phi1+phi2)}.
  template <class R> Cplx<R> chi() const { return unit_phase<R>(phi1) * unit_phase<R>(phi2); }

  friend bool operator==(const CoinParams &, const CoinParams &) = default;
};

template <class R> Mat2<Cplx<R>> coin_matrix(const CoinParams &p) {
  R c = cos_of<R>(p.theta);
  R s = sin_of<R>(p.theta);
  Cplx<R> e1 = unit_phase<R>(p.phi1);
  Cplx<R> e2 = unit_phase<R>(p.phi2);
  Mat2<Cplx<R>> m;
  m[0][0] = Cplx<R>(c);
  m[0][1] = e1 * s;
  m[1][0] = e2 * s;
  m[1][1] = -(e1 * e2 * c);
  return m;
}

inline Mat2<std::complex<double>> coin_matrix_complex(const CoinParams &p) {
  auto m = coin_matrix<double>(p);
  Mat2<std::complex<double>> out;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      out[i][j] = to_complex(m[i][j]);
  return out;
}

// ---------------------------------------------------------------------------
// states

template <class R> struct CoinAmp {
  Cplx<R> alpha;
  Cplx<R> beta;
};

/// Pure walker state: position -> (alpha, beta). Ordered by position.
template <class R> struct PureState {
  std::map<long, CoinAmp<R>> amplitudes;

  static PureState localized(long x, Cplx<R> alpha, Cplx<R> beta) {
    PureState s;
    s.amplitudes[x] = {std::move(alpha), std::move(beta)};
    return s;
  }

  long min_position() const { return amplitudes.empty() ? 0 : amplitudes.begin()->first; }
  long max_position() const { return amplitudes.empty() ? 0 : amplitudes.rbegin()->first; }
  /// max |x'| over the support
  long radius() const { return std::max(std::abs(min_position()), std::abs(max_position())); }

  R norm_squared() const {
    R total(0);
    for (const auto &[x, a] : amplitudes)
      total += norm(a.alpha) + norm(a.beta);
    return total;
  }
};

template <class R> PureState<R> convert_state(const PureState<QSqrt2> &s) {
  PureState<R> out;
  for (const auto &[x, a] : s.amplitudes)
    out.amplitudes[x] = {from_qsqrt2<R>(a.alpha), from_qsqrt2<R>(a.beta)};
  return out;
}

/// Coin density matrix of a walker localized at the origin.
template <class R> struct MixedLocalizedState {
  Mat2<Cplx<R>> rho;

  /// (r0, r1, r2, r3) with rho = sum r_i sigma_i.
  static MixedLocalizedState from_pauli(const std::array<R, 4> &r) {
    MixedLocalizedState s;
    s.rho[0][0] = Cplx<R>(r[0] + r[3]);
    s.rho[0][1] = Cplx<R>(r[1], -r[2]);
    s.rho[1][0] = Cplx<R>(r[1], r[2]);
    s.rho[1][1] = Cplx<R>(r[0] - r[3]);
    return s;
  }
  static MixedLocalizedState from_pure_coin(const Cplx<R> &a, const Cplx<R> &b) {
    MixedLocalizedState s;
    s.rho[0][0] = a * conj(a);
    s.rho[0][1] = a * conj(b);
    s.rho[1][0] = b * conj(a);
    s.rho[1][1] = b * conj(b);
    return s;
  }
};

template <class R> MixedLocalizedState<R> convert_state(const MixedLocalizedState<QSqrt2> &s) {
  MixedLocalizedState<R> out;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      out.rho[i][j] = from_qsqrt2<R>(s.rho[i][j]);
  return out;
}

template <class R> R default_tolerance() {
  if constexpr (is_exact_v<R>)
    return R(0);
  else
    return R(1e-12);
}

/// Pauli components of a Hermitian 2x2 matrix. Throws std::invalid_argument
/// when the Hermiticity defect exceeds tol (exact comparison for exact R).
template <class R> std::array<R, 4> pauli_decompose(const Mat2<Cplx<R>> &rho, const R &tol = default_tolerance<R>()) {
  using std::abs;
  R defect(0);
  auto bump = [&](const R &v) {
    R a = abs(v);
    if (a > defect)
      defect = a;
  };
  bump(rho[0][0].im);
  bump(rho[1][1].im);
  bump(rho[1][0].re - rho[0][1].re);
  bump(rho[1][0].im + rho[0][1].im);
  if (defect > tol)
    throw std::invalid_argument("density matrix is not Hermitian");
  QSqrt2 half_q(mpq_class(1, 2));
  R half = from_qsqrt2<R>(half_q);
  return {half * (rho[0][0].re + rho[1][1].re), half * (rho[1][0].re + rho[0][1].re),
          half * (rho[1][0].im - rho[0][1].im), half * (rho[0][0].re - rho[1][1].re)};
}

// ---------------------------------------------------------------------------
// validation

struct Violation {
  std::string kind;    // "normalization", "hermiticity", "psd", "trace", "support"
  std::string message;
  double magnitude = 0.0;
};

struct Diagnostics {
  std::vector<Violation> violations;
  double normalization_defect = 0.0;
  long support_min = 0;
  long support_max = 0;
  bool ok() const { return violations.empty(); }
  bool has(const std::string &kind) const {
    return std::any_of(violations.begin(), violations.end(), [&](const Violation &v) { return v.kind == kind; });
  }
};

template <class R> Diagnostics validate_state(const PureState<R> &s, double tol = 1e-12) {
  using std::abs;
  Diagnostics d;
  d.support_min = s.min_position();
  d.support_max = s.max_position();
  R defect = s.norm_squared() - R(1);
  d.normalization_defect = std::abs(to_double(defect));
  bool bad = is_exact_v<R> ? !(defect == R(0)) : d.normalization_defect > tol;
  if (bad)
    d.violations.push_back({"normalization", "sum of |alpha|^2 + |beta|^2 differs from 1", d.normalization_defect});
  if (s.amplitudes.empty())
    d.violations.push_back({"support", "state has empty support", 0.0});
  return d;
}

template <class R> Diagnostics validate_state(const MixedLocalizedState<R> &s, double tol = 1e-12) {
  Diagnostics d;
  const auto &m = s.rho;
  double herm = std::max({std::abs(to_double(m[0][0].im)), std::abs(to_double(m[1][1].im)),
                          std::abs(to_double(m[1][0].re - m[0][1].re)), std::abs(to_double(m[1][0].im + m[0][1].im))});
  bool herm_bad = is_exact_v<R> ? !(m[0][0].im == R(0) && m[1][1].im == R(0) && m[1][0].re == m[0][1].re &&
                                    m[1][0].im == -m[0][1].im)
                                : herm > tol;
  if (herm_bad) {
    d.violations.push_back({"hermiticity", "rho21 != conj(rho12) or complex diagonal", herm});
    return d;
  }
  auto r = pauli_decompose<R>(m, is_exact_v<R> ? R(0) : from_double<R>(tol));
  R trace_defect = r[0] + r[0] - R(1);
  d.normalization_defect = std::abs(to_double(trace_defect));
  bool trace_bad = is_exact_v<R> ? !(trace_defect == R(0)) : d.normalization_defect > tol;
  if (trace_bad)
    d.violations.push_back({"trace", "trace of rho differs from 1", d.normalization_defect});
  R bloch = r[1] * r[1] + r[2] * r[2] + r[3] * r[3];
  R excess = bloch - r[0] * r[0];
  bool psd_bad = is_exact_v<R> ? excess > R(0) : to_double(excess) > tol;
  if (psd_bad)
    d.violations.push_back({"psd", "Bloch vector norm exceeds r0", to_double(excess)});
  return d;
}

// ---------------------------------------------------------------------------
// Distribution

enum class Method { direct, spectral, closed_form, pipeline, pipeline_literal, literal };

inline std::string to_string(Method m) {
  switch (m) {
  case Method::direct:
    return "direct";
  case Method::spectral:
    return "spectral";
  case Method::closed_form:
    return "closed-form";
  case Method::pipeline:
    return "pipeline";
  case Method::pipeline_literal:
    return "pipeline-literal";
  case Method::literal:
    return "literal";
  }
  return "unknown";
}

inline Method parse_method(const std::string &s) {
  if (s == "direct" || s == "oracle")
    return Method::direct;
  if (s == "spectral")
    return Method::spectral;
  if (s == "closed-form" || s == "closedform")
    return Method::closed_form;
  if (s == "pipeline" || s == "pipeline-consistent")
    return Method::pipeline;
  if (s == "pipeline-literal")
    return Method::pipeline_literal;
  if (s == "literal")
    return Method::literal;
  throw std::invalid_argument("unknown method '" + s + "'");
}

/// Position -> probability, with every integer position of the support
/// interval present (forbidden sites hold explicit zeros).
template <class R = double> struct Distribution {
  std::map<long, R> probs;
  long t = 0;
  Method method = Method::direct;
  ArithmeticMode mode = ArithmeticMode::double_precision;

  R at(long x) const {
    auto it = probs.find(x);
    return it == probs.end() ? R(0) : it->second;
  }
  R total() const {
    R s(0);
    for (const auto &[x, p] : probs)
      s += p;
    return s;
  }
  /// Inserts explicit zeros so that [lo, hi] is fully present.
  void fill_interval(long lo, long hi) {
    for (long x = lo; x <= hi; ++x)
      probs.try_emplace(x, R(0));
  }
  Distribution<double> to_double() const {
    Distribution<double> d;
    d.t = t;
    d.method = method;
    d.mode = mode;
    for (const auto &[x, p] : probs)
      d.probs.emplace(x, qwalk::to_double(p));
    return d;
  }
};

/// Half the L1 distance over the union of supports.
template <class R> R total_variation(const Distribution<R> &p, const Distribution<R> &q) {
  using std::abs;
  if (p.t != q.t)
    throw std::invalid_argument("total_variation: distributions are at different time steps");
  R sum(0);
  auto ip = p.probs.begin();
  auto iq = q.probs.begin();
  while (ip != p.probs.end() || iq != q.probs.end()) {
    if (iq == q.probs.end() || (ip != p.probs.end() && ip->first < iq->first)) {
      sum += abs(ip->second);
      ++ip;
    } else if (ip == p.probs.end() || iq->first < ip->first) {
      sum += abs(iq->second);
      ++iq;
    } else {
      sum += abs(ip->second - iq->second);
      ++ip;
      ++iq;
    }
  }
  if constexpr (is_exact_v<R>)
    return sum * R(mpq_class(1, 2));
  else
    return sum / R(2);
}

/// max_x |p(x) - q(x)|
template <class R> R max_pointwise_difference(const Distribution<R> &p, const Distribution<R> &q) {
  using std::abs;
  R best(0);
  for (const auto &[x, v] : p.probs) {
    R d = abs(v - q.at(x));
    if (d > best)
      best = d;
  }
  for (const auto &[x, v] : q.probs) {
    R d = abs(v - p.at(x));
    if (d > best)
      best = d;
  }
  return best;
}

} // namespace qwalk
