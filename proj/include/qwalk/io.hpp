#pragma once

// File formats: walk configuration (JSON), distributions (CSV and JSON) and
// plot data (SVG, gnuplot).

#include "qwalk/core.hpp"

#include "json.hpp"

#include <cstdio>
#include <fstream>
#include <istream>
#include <optional>
#include <ostream>
#include <set>
#include <sstream>
#include <stdexcept>

namespace qwalk::io {

using json = nlohmann::json;

/// Malformed or inconsistent input files.
class ConfigError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------------------
// exact scalar parsing

namespace detail {

/// "p", "p/q" or a decimal such as "-0.125" or "1e-3", as an exact rational.
inline mpq_class parse_rational(const std::string &text) {
  if (text.empty())
    throw ConfigError("empty number");
  if (text.find_first_of(".eE") == std::string::npos) {
    mpq_class q;
    if (q.set_str(text, 10) != 0 || q.get_den() == 0)
      throw ConfigError("cannot parse number '" + text + "'");
    q.canonicalize();
    return q;
  }
  std::size_t pos = 0;
  bool negative = false;
  if (text[pos] == '+' || text[pos] == '-')
    negative = text[pos++] == '-';
  std::string digits;
  long scale = 0;
  bool seen_point = false;
  for (; pos < text.size() && text[pos] != 'e' && text[pos] != 'E'; ++pos) {
    const char c = text[pos];
    if (c == '.' && !seen_point) {
      seen_point = true;
    } else if (std::isdigit(static_cast<unsigned char>(c))) {
      digits += c;
      if (seen_point)
        --scale;
    } else {
      throw ConfigError("cannot parse number '" + text + "'");
    }
  }
  if (digits.empty())
    throw ConfigError("cannot parse number '" + text + "'");
  if (pos < text.size()) {
    const std::string exponent = text.substr(pos + 1);
    char *end = nullptr;
    const long e = std::strtol(exponent.c_str(), &end, 10);
    if (exponent.empty() || *end != '\0')
      throw ConfigError("cannot parse number '" + text + "'");
    scale += e;
  }
  mpz_class num(digits, 10), pow10 = 1;
  mpz_ui_pow_ui(pow10.get_mpz_t(), 10, static_cast<unsigned long>(scale < 0 ? -scale : scale));
  mpq_class q = scale < 0 ? mpq_class(num, pow10) : mpq_class(num * pow10);
  q.canonicalize();
  return negative ? mpq_class(-q) : q;
}

} // namespace detail

/// Exact real in Q(sqrt2): "1/2", "0.25", "sqrt2/2", "1/sqrt2", "-3/4 sqrt2".
inline QSqrt2 parse_exact_real(const std::string &text) {
  std::string s = qwalk::detail::strip(text);
  if (s.empty())
    throw ConfigError("empty amplitude");
  bool negative = false;
  if (s[0] == '-' || s[0] == '+') {
    negative = s[0] == '-';
    s.erase(0, 1);
  }
  QSqrt2 v;
  const auto root = s.find("sqrt2");
  if (root == std::string::npos) {
    v = QSqrt2(detail::parse_rational(s));
  } else if (root > 0 && s[root - 1] == '/') {
    // p/sqrt2 = (p/2) sqrt2
    if (root + 5 != s.size())
      throw ConfigError("cannot parse amplitude '" + text + "'");
    const std::string p = s.substr(0, root - 1);
    v = QSqrt2(mpq_class(0), detail::parse_rational(p.empty() ? "1" : p) / 2);
  } else {
    std::string rest = s.substr(0, root) + s.substr(root + 5);
    if (rest.empty())
      rest = "1";
    else if (rest[0] == '/')
      rest = "1" + rest;
    v = QSqrt2(mpq_class(0), detail::parse_rational(rest));
  }
  return negative ? -v : v;
}

/// A JSON number (taken at its exact binary value) or an exact string.
inline QSqrt2 exact_real_from_json(const json &j, const std::string &where) {
  if (j.is_number_integer())
    return QSqrt2(mpq_class(j.get<long>()));
  if (j.is_number())
    return QSqrt2::from_double(j.get<double>());
  if (j.is_string())
    return parse_exact_real(j.get<std::string>());
  throw ConfigError(where + ": expected a number or a string");
}

/// [re, im] pair, or a single real.
inline Cplx<QSqrt2> exact_complex_from_json(const json &j, const std::string &where) {
  if (j.is_array()) {
    if (j.size() != 2)
      throw ConfigError(where + ": complex values are written [re, im]");
    return {exact_real_from_json(j[0], where), exact_real_from_json(j[1], where)};
  }
  return {exact_real_from_json(j, where), QSqrt2(0)};
}

// ---------------------------------------------------------------------------
// walk configuration

struct WalkConfig {
  CoinParams coin = CoinParams::hadamard();
  std::optional<PureState<QSqrt2>> pure;
  std::optional<std::array<QSqrt2, 4>> pauli;
  long steps = 0;
  std::vector<Method> methods;
  std::optional<ArithmeticMode> mode;
  std::string output;

  bool is_mixed() const { return pauli.has_value(); }

  /// Explicit mode, else exact when the coin allows it and adaptive otherwise.
  ArithmeticMode effective_mode() const {
    if (mode)
      return *mode;
    return coin.exact_eligible() ? ArithmeticMode::exact : ArithmeticMode::adaptive;
  }
};

namespace detail {

inline void reject_unknown(const json &obj, const std::set<std::string> &allowed, const std::string &where) {
  if (!obj.is_object())
    throw ConfigError(where + ": expected an object");
  for (auto it = obj.begin(); it != obj.end(); ++it)
    if (!allowed.count(it.key()))
      throw ConfigError(where + ": unknown field '" + it.key() + "'");
}

inline Angle angle_from_json(const json &j, const std::string &where) {
  try {
    if (j.is_number())
      return Angle::radians(j.get<double>());
    if (j.is_string())
      return Angle::parse(j.get<std::string>());
  } catch (const std::invalid_argument &e) {
    throw ConfigError(where + ": " + e.what());
  }
  throw ConfigError(where + ": expected an angle string or a number");
}

inline long integer_from_json(const json &j, const std::string &where) {
  if (!j.is_number_integer())
    throw ConfigError(where + ": expected an integer");
  return j.get<long>();
}

} // namespace detail

inline WalkConfig parse_config(const json &j) {
  detail::reject_unknown(j, {"coin", "initial", "steps", "method", "mode", "output"}, "config");
  WalkConfig c;
  if (j.contains("coin")) {
    const json &coin = j["coin"];
    detail::reject_unknown(coin, {"theta", "phi1", "phi2"}, "coin");
    Angle zero = Angle::pi_multiple(0, 1);
    c.coin.theta = coin.contains("theta") ? detail::angle_from_json(coin["theta"], "coin.theta") : zero;
    c.coin.phi1 = coin.contains("phi1") ? detail::angle_from_json(coin["phi1"], "coin.phi1") : zero;
    c.coin.phi2 = coin.contains("phi2") ? detail::angle_from_json(coin["phi2"], "coin.phi2") : zero;
  }
  if (!j.contains("initial"))
    throw ConfigError("config: missing 'initial'");
  const json &init = j["initial"];
  detail::reject_unknown(init, {"pure", "rho", "pauli"}, "initial");
  if (init.size() != 1)
    throw ConfigError("initial: give exactly one of 'pure', 'rho', 'pauli'");
  if (init.contains("pure")) {
    const json &list = init["pure"];
    if (!list.is_array() || list.empty())
      throw ConfigError("initial.pure: expected a non-empty list");
    PureState<QSqrt2> s;
    for (const auto &entry : list) {
      detail::reject_unknown(entry, {"x", "alpha", "beta"}, "initial.pure[]");
      if (!entry.contains("x"))
        throw ConfigError("initial.pure[]: missing 'x'");
      const long x = detail::integer_from_json(entry["x"], "initial.pure[].x");
      if (s.amplitudes.count(x))
        throw ConfigError("initial.pure: position " + std::to_string(x) + " listed twice");
      CoinAmp<QSqrt2> a;
      if (entry.contains("alpha"))
        a.alpha = exact_complex_from_json(entry["alpha"], "initial.pure[].alpha");
      if (entry.contains("beta"))
        a.beta = exact_complex_from_json(entry["beta"], "initial.pure[].beta");
      s.amplitudes[x] = a;
    }
    const auto diag = validate_state(convert_state<double>(s));
    if (!diag.ok())
      throw ConfigError("initial.pure: " + diag.violations.front().message);
    c.pure = std::move(s);
  } else {
    std::array<QSqrt2, 4> r;
    if (init.contains("pauli")) {
      const json &p = init["pauli"];
      if (!p.is_array() || p.size() != 4)
        throw ConfigError("initial.pauli: expected [r0, r1, r2, r3]");
      for (std::size_t i = 0; i < 4; ++i)
        r[i] = exact_real_from_json(p[i], "initial.pauli");
    } else {
      const json &m = init["rho"];
      if (!m.is_array() || m.size() != 2 || !m[0].is_array() || m[0].size() != 2 || !m[1].is_array() ||
          m[1].size() != 2)
        throw ConfigError("initial.rho: expected a 2x2 matrix");
      MixedLocalizedState<QSqrt2> rho;
      for (std::size_t a = 0; a < 2; ++a)
        for (std::size_t b = 0; b < 2; ++b)
          rho.rho[a][b] = exact_complex_from_json(m[a][b], "initial.rho");
      try {
        r = pauli_decompose<QSqrt2>(rho.rho, QSqrt2(mpq_class("1/1000000000000")));
      } catch (const std::invalid_argument &e) {
        throw ConfigError(std::string("initial.rho: ") + e.what());
      }
    }
    std::array<double, 4> rd;
    for (std::size_t i = 0; i < 4; ++i)
      rd[i] = r[i].to_double();
    const auto diag = validate_state(MixedLocalizedState<double>::from_pauli(rd));
    if (!diag.ok())
      throw ConfigError("initial: " + diag.violations.front().message);
    if (!c.coin.is_hadamard())
      throw ConfigError("initial: mixed initial states are supported for the Hadamard coin only");
    c.pauli = r;
  }
  if (j.contains("steps")) {
    c.steps = detail::integer_from_json(j["steps"], "steps");
    if (c.steps < 0)
      throw ConfigError("steps: must be non-negative");
  }
  if (j.contains("method")) {
    const json &m = j["method"];
    std::vector<std::string> names;
    if (m.is_string())
      names.push_back(m.get<std::string>());
    else if (m.is_array())
      for (const auto &e : m) {
        if (!e.is_string())
          throw ConfigError("method: expected method names");
        names.push_back(e.get<std::string>());
      }
    else
      throw ConfigError("method: expected a name or a list of names");
    for (const auto &n : names) {
      try {
        c.methods.push_back(parse_method(n));
      } catch (const std::invalid_argument &e) {
        throw ConfigError(std::string("method: ") + e.what());
      }
    }
  }
  if (j.contains("mode")) {
    if (!j["mode"].is_string())
      throw ConfigError("mode: expected a string");
    try {
      c.mode = parse_mode(j["mode"].get<std::string>());
    } catch (const std::invalid_argument &e) {
      throw ConfigError(std::string("mode: ") + e.what());
    }
  }
  if (j.contains("output")) {
    if (!j["output"].is_string())
      throw ConfigError("output: expected a path string");
    c.output = j["output"].get<std::string>();
  }
  return c;
}

inline WalkConfig load_config(const std::string &path) {
  std::ifstream in(path);
  if (!in)
    throw ConfigError("cannot open config '" + path + "'");
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error &e) {
    throw ConfigError("config '" + path + "': " + e.what());
  }
  return parse_config(j);
}

/// Summary of a configuration for reports.
inline json config_to_json(const WalkConfig &c) {
  json j;
  j["coin"] = {{"theta", c.coin.theta.str()}, {"phi1", c.coin.phi1.str()}, {"phi2", c.coin.phi2.str()}};
  if (c.pure) {
    json list = json::array();
    for (const auto &[x, a] : c.pure->amplitudes)
      list.push_back({{"x", x},
                      {"alpha", {a.alpha.re.to_double(), a.alpha.im.to_double()}},
                      {"beta", {a.beta.re.to_double(), a.beta.im.to_double()}}});
    j["initial"] = {{"pure", list}};
  } else if (c.pauli) {
    json r = json::array();
    for (const auto &v : *c.pauli)
      r.push_back(v.to_double());
    j["initial"] = {{"pauli", r}};
  }
  j["steps"] = c.steps;
  j["mode"] = to_string(c.effective_mode());
  return j;
}

// ---------------------------------------------------------------------------
// distributions

inline std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

/// Positions where the lattice parity makes the probability vanish: every
/// source shares the parity of `anchor`, and x - anchor - t is odd.
inline bool parity_forbidden(long x, long t, std::optional<long> anchor) {
  return anchor && ((x - *anchor - t) % 2 != 0);
}

/// Common parity of the support, if there is one.
template <class R> std::optional<long> support_parity_anchor(const PureState<R> &s) {
  if (s.amplitudes.empty())
    return std::nullopt;
  const long first = s.amplitudes.begin()->first;
  for (const auto &[x, a] : s.amplitudes)
    if ((x - first) % 2 != 0)
      return std::nullopt;
  return first;
}

/// Removes parity-forbidden positions that hold an exact zero.
inline Distribution<double> drop_forbidden_sites(const Distribution<double> &d, std::optional<long> anchor) {
  Distribution<double> out = d;
  for (auto it = out.probs.begin(); it != out.probs.end();)
    it = (it->second == 0.0 && parity_forbidden(it->first, d.t, anchor)) ? out.probs.erase(it) : std::next(it);
  return out;
}

inline void write_csv(std::ostream &os, const Distribution<double> &d) {
  os << "position,probability\n";
  for (const auto &[x, p] : d.probs)
    os << x << ',' << format_double(p) << '\n';
}

inline std::string to_csv(const Distribution<double> &d) {
  std::ostringstream os;
  write_csv(os, d);
  return os.str();
}

inline Distribution<double> read_csv(std::istream &is) {
  std::string line;
  if (!std::getline(is, line) || line != "position,probability")
    throw ConfigError("csv: missing 'position,probability' header");
  Distribution<double> d;
  while (std::getline(is, line)) {
    if (line.empty())
      continue;
    const auto comma = line.find(',');
    if (comma == std::string::npos)
      throw ConfigError("csv: malformed row '" + line + "'");
    char *end = nullptr;
    const long x = std::strtol(line.c_str(), &end, 10);
    if (end != line.c_str() + comma)
      throw ConfigError("csv: malformed position in '" + line + "'");
    const std::string value = line.substr(comma + 1);
    const double p = std::strtod(value.c_str(), &end);
    if (value.empty() || *end != '\0')
      throw ConfigError("csv: malformed probability in '" + line + "'");
    if (!d.probs.emplace(x, p).second)
      throw ConfigError("csv: duplicate position " + std::to_string(x));
  }
  return d;
}

inline json distribution_to_json(const Distribution<double> &d) {
  json positions = json::array(), probs = json::array();
  for (const auto &[x, p] : d.probs) {
    positions.push_back(x);
    probs.push_back(p);
  }
  return {{"t", d.t},
          {"method", to_string(d.method)},
          {"mode", to_string(d.mode)},
          {"positions", positions},
          {"probabilities", probs}};
}

inline Distribution<double> distribution_from_json(const json &j) {
  detail::reject_unknown(j, {"t", "method", "mode", "positions", "probabilities"}, "distribution");
  Distribution<double> d;
  try {
    d.t = j.at("t").get<long>();
    d.method = parse_method(j.at("method").get<std::string>());
    d.mode = parse_mode(j.at("mode").get<std::string>());
    const auto &xs = j.at("positions");
    const auto &ps = j.at("probabilities");
    if (xs.size() != ps.size())
      throw ConfigError("distribution: positions and probabilities differ in length");
    for (std::size_t i = 0; i < xs.size(); ++i)
      d.probs[xs[i].get<long>()] = ps[i].get<double>();
  } catch (const json::exception &e) {
    throw ConfigError(std::string("distribution: ") + e.what());
  } catch (const std::invalid_argument &e) {
    throw ConfigError(std::string("distribution: ") + e.what());
  }
  return d;
}

inline std::string dump_json(const json &j) { return j.dump(2) + "\n"; }

// ---------------------------------------------------------------------------
// plot data

inline void write_gnuplot(std::ostream &os, const Distribution<double> &d) {
  os << "# t = " << d.t << ", method = " << to_string(d.method) << ", mode = " << to_string(d.mode) << "\n";
  os << "# position probability\n";
  for (const auto &[x, p] : d.probs)
    os << x << ' ' << format_double(p) << '\n';
}

/// Bar chart of the distribution with labelled axes.
inline void write_svg(std::ostream &os, const Distribution<double> &d, const std::string &title = "") {
  const double width = 800, height = 450, left = 70, right = 20, top = 40, bottom = 50;
  const double pw = width - left - right, ph = height - top - bottom;
  long lo = d.probs.empty() ? 0 : d.probs.begin()->first;
  long hi = d.probs.empty() ? 0 : d.probs.rbegin()->first;
  if (lo == hi) {
    --lo;
    ++hi;
  }
  double pmax = 0;
  for (const auto &[x, p] : d.probs)
    pmax = std::max(pmax, p);
  if (pmax <= 0)
    pmax = 1;
  const double span = static_cast<double>(hi - lo);
  auto sx = [&](double x) { return left + pw * (x - static_cast<double>(lo)) / span; };
  auto sy = [&](double p) { return top + ph * (1.0 - p / pmax); };
  const double bar = std::max(1.0, 0.6 * pw / (span + 1));

  char buf[256];
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
     << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  if (!title.empty())
    os << "<text x=\"" << width / 2 << "\" y=\"22\" text-anchor=\"middle\" font-size=\"14\">" << title << "</text>\n";
  std::snprintf(buf, sizeof buf, "<line x1=\"%g\" y1=\"%g\" x2=\"%g\" y2=\"%g\" stroke=\"black\"/>\n", left, top + ph,
                left + pw, top + ph);
  os << buf;
  std::snprintf(buf, sizeof buf, "<line x1=\"%g\" y1=\"%g\" x2=\"%g\" y2=\"%g\" stroke=\"black\"/>\n", left, top, left,
                top + ph);
  os << buf;
  for (int i = 0; i <= 4; ++i) {
    const double p = pmax * i / 4.0;
    std::snprintf(buf, sizeof buf, "<text x=\"%g\" y=\"%g\" text-anchor=\"end\">%.3g</text>\n", left - 6, sy(p) + 4, p);
    os << buf;
  }
  const long tick = std::max<long>(1, (hi - lo) / 10);
  for (long x = lo; x <= hi; x += tick) {
    std::snprintf(buf, sizeof buf, "<text x=\"%g\" y=\"%g\" text-anchor=\"middle\">%ld</text>\n", sx(static_cast<double>(x)),
                  top + ph + 18, x);
    os << buf;
  }
  std::snprintf(buf, sizeof buf, "<text x=\"%g\" y=\"%g\" text-anchor=\"middle\">position</text>\n", left + pw / 2,
                height - 8);
  os << buf;
  std::snprintf(buf, sizeof buf,
                "<text x=\"16\" y=\"%g\" text-anchor=\"middle\" transform=\"rotate(-90 16 %g)\">probability</text>\n",
                top + ph / 2, top + ph / 2);
  os << buf;
  for (const auto &[x, p] : d.probs) {
    if (p <= 0)
      continue;
    std::snprintf(buf, sizeof buf, "<rect x=\"%g\" y=\"%g\" width=\"%g\" height=\"%g\" fill=\"steelblue\"/>\n",
                  sx(static_cast<double>(x)) - bar / 2, sy(p), bar, top + ph - sy(p));
    os << buf;
  }
  os << "</svg>\n";
}

} // namespace qwalk::io
