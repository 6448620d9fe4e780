#pragma once

// Cross-method comparisons and the invariant suite.

#include "qwalk/closedform_mixed.hpp"
#include "qwalk/closedform_pure.hpp"
#include "qwalk/io.hpp"
#include "qwalk/oracle_sim.hpp"
#include "qwalk/spectral_sim.hpp"

#include <chrono>
#include <functional>
#include <numbers>
#include <random>

namespace qwalk::verify {

using json = nlohmann::json;

struct Tolerances {
  double total_variation = 1e-10;
  double pointwise = 1e-10;
  double normalization = 1e-12;
  double symmetry = 1e-12;
  double matrix = 1e-12;
};

/// One named check. Advisory checks record known deviations of the printed
/// mixed-state formula; they fail a report only in strict mode.
struct Check {
  std::string module;
  std::string name;
  bool passed = true;
  bool advisory = false;
  std::string detail;
};

struct PairDistance {
  Method a;
  Method b;
  double total_variation = 0;
  double max_difference = 0;
  bool within = true;
};

struct ComparisonReport {
  json config = json::object();
  std::vector<Distribution<double>> methods;
  std::vector<PairDistance> distances;
  std::vector<Check> invariants;
  std::vector<std::pair<std::string, double>> timings; // seconds

  /// Every required check passed, and with `strict` every advisory one too.
  bool passed(bool strict = false) const {
    return std::all_of(invariants.begin(), invariants.end(),
                       [&](const Check &c) { return c.passed || (c.advisory && !strict); });
  }
  bool has_discrepancy() const {
    return std::any_of(invariants.begin(), invariants.end(), [](const Check &c) { return c.advisory && !c.passed; });
  }
  const Distribution<double> *find(Method m) const {
    for (const auto &d : methods)
      if (d.method == m)
        return &d;
    return nullptr;
  }
  std::vector<Check> failures() const {
    std::vector<Check> out;
    for (const auto &c : invariants)
      if (!c.passed)
        out.push_back(c);
    return out;
  }

  /// Timings are left empty when `with_timings` is false so that reports for
  /// equal inputs are byte-identical.
  json to_json(bool with_timings = false) const {
    json j;
    j["config"] = config;
    json ms = json::array();
    for (const auto &d : methods)
      ms.push_back(io::distribution_to_json(d));
    j["methods"] = ms;
    json ds = json::array();
    for (const auto &p : distances)
      ds.push_back({{"a", to_string(p.a)},
                    {"b", to_string(p.b)},
                    {"total_variation", p.total_variation},
                    {"max_difference", p.max_difference},
                    {"within_tolerance", p.within}});
    j["distances"] = ds;
    json inv = json::array();
    for (const auto &c : invariants)
      inv.push_back({{"module", c.module},
                     {"name", c.name},
                     {"passed", c.passed},
                     {"advisory", c.advisory},
                     {"detail", c.detail}});
    j["invariants"] = inv;
    json tm = json::object();
    if (with_timings)
      for (const auto &[k, v] : timings)
        tm[k] = v;
    j["timings"] = tm;
    j["passed"] = passed();
    j["discrepancy"] = has_discrepancy();
    return j;
  }
};

namespace detail {

inline std::string fmt(double v) { return io::format_double(v); }

template <class F> auto timed(std::vector<std::pair<std::string, double>> &timings, const std::string &label, F &&f) {
  const auto start = std::chrono::steady_clock::now();
  auto result = f();
  const std::chrono::duration<double> dt = std::chrono::steady_clock::now() - start;
  timings.emplace_back(label, dt.count());
  return result;
}

inline bool is_literal(Method m) { return m == Method::literal || m == Method::pipeline_literal; }

/// Exactly reproducible methods for the given arithmetic mode.
inline bool is_exact_method(Method m, ArithmeticMode mode) {
  return mode == ArithmeticMode::exact && m != Method::spectral;
}

inline void add_pairwise(ComparisonReport &rep, ArithmeticMode mode, const Tolerances &tol) {
  for (std::size_t i = 0; i < rep.methods.size(); ++i)
    for (std::size_t j = i + 1; j < rep.methods.size(); ++j) {
      const auto &p = rep.methods[i];
      const auto &q = rep.methods[j];
      PairDistance d{p.method, q.method, total_variation(p, q), max_pointwise_difference(p, q), true};
      const bool exact = is_exact_method(p.method, mode) && is_exact_method(q.method, mode);
      const double tv_tol = exact ? 0.0 : tol.total_variation;
      const double pt_tol = exact ? 0.0 : tol.pointwise;
      d.within = d.total_variation <= tv_tol && d.max_difference <= pt_tol;
      rep.distances.push_back(d);
      rep.invariants.push_back({"verify", "agreement " + to_string(p.method) + " vs " + to_string(q.method), d.within,
                                is_literal(p.method) || is_literal(q.method),
                                "tv=" + fmt(d.total_variation) + " max_diff=" + fmt(d.max_difference)});
    }
}

inline void add_normalization(ComparisonReport &rep, const Tolerances &tol) {
  for (const auto &d : rep.methods) {
    const double defect = std::abs(d.total() - 1.0);
    rep.invariants.push_back({"core", "normalization " + to_string(d.method), defect <= tol.normalization,
                              is_literal(d.method), "defect=" + fmt(defect)});
  }
}

inline void add_parity(ComparisonReport &rep, std::optional<long> anchor, const Tolerances &tol) {
  if (!anchor)
    return;
  for (const auto &d : rep.methods) {
    const double allowed = d.method == Method::spectral ? tol.pointwise : 0.0;
    double worst = 0;
    long where = 0;
    for (const auto &[x, p] : d.probs)
      if (io::parity_forbidden(x, d.t, anchor) && std::abs(p) > worst) {
        worst = std::abs(p);
        where = x;
      }
    rep.invariants.push_back({"oracle-sim", "parity " + to_string(d.method), worst <= allowed, is_literal(d.method),
                              worst <= allowed ? "forbidden sites vanish"
                                               : "P(" + std::to_string(where) + ")=" + fmt(worst)});
  }
}

inline double asymmetry(const Distribution<double> &d) {
  double worst = 0;
  for (const auto &[x, p] : d.probs)
    worst = std::max(worst, std::abs(p - d.at(-x)));
  return worst;
}

} // namespace detail

// ---------------------------------------------------------------------------
// pure comparisons

inline Distribution<double> run_pure_method(Method m, const PureState<QSqrt2> &init, const CoinParams &params, long t,
                                            ArithmeticMode mode, closed_form::AmplitudeOptions opts = {}) {
  switch (m) {
  case Method::direct: {
    if (mode == ArithmeticMode::exact && params.exact_eligible()) {
      auto d = oracle::distribution_of(oracle::evolve_pure(init, params, t), t).to_double();
      d.mode = ArithmeticMode::exact;
      return d;
    }
    return oracle::distribution_of(oracle::evolve_pure(convert_state<double>(init), params, t), t);
  }
  case Method::spectral:
    return spectral::distribution(convert_state<double>(init), params, t);
  case Method::closed_form:
    return closed_form::distribution_in_mode(t, init, params, mode, opts);
  default:
    throw std::invalid_argument("method '" + to_string(m) + "' does not apply to pure initial states");
  }
}

inline ComparisonReport compare_pure(const PureState<QSqrt2> &init, const CoinParams &params, long t,
                                     const std::vector<Method> &methods, ArithmeticMode mode,
                                     const Tolerances &tol = {}, closed_form::AmplitudeOptions opts = {}) {
  if (t < 0)
    throw std::invalid_argument("compare_pure: negative step count");
  const auto diag = validate_state(convert_state<double>(init), tol.normalization);
  if (!diag.ok())
    throw std::invalid_argument("compare_pure: " + diag.violations.front().message);
  if (mode == ArithmeticMode::exact && !params.exact_eligible())
    throw std::invalid_argument("exact mode needs coin angles that are multiples of pi/4");
  ComparisonReport rep;
  rep.config = {{"kind", "pure"},
                {"coin", {{"theta", params.theta.str()}, {"phi1", params.phi1.str()}, {"phi2", params.phi2.str()}}},
                {"steps", t},
                {"mode", to_string(mode)}};
  for (Method m : methods)
    rep.methods.push_back(
        detail::timed(rep.timings, to_string(m), [&] { return run_pure_method(m, init, params, t, mode, opts); }));
  detail::add_normalization(rep, tol);
  detail::add_parity(rep, io::support_parity_anchor(init), tol);
  detail::add_pairwise(rep, mode, tol);
  return rep;
}

// ---------------------------------------------------------------------------
// mixed comparisons

inline Distribution<double> run_mixed_method(Method m, const std::array<QSqrt2, 4> &r, long t, ArithmeticMode mode,
                                             const mixed::MixedEvaluator *ev = nullptr) {
  std::optional<mixed::MixedEvaluator> own;
  if (m != Method::direct && (ev == nullptr || ev->t() != t))
    ev = &own.emplace(t);
  const bool exact = mode == ArithmeticMode::exact;
  std::array<double, 4> rd;
  for (std::size_t i = 0; i < 4; ++i)
    rd[i] = r[i].to_double();
  auto tag = [&](Distribution<double> d) {
    d.mode = exact ? ArithmeticMode::exact : ArithmeticMode::double_precision;
    return d;
  };
  const auto params = CoinParams::hadamard();
  switch (m) {
  case Method::direct:
    return tag(exact ? oracle::evolve_mixed(MixedLocalizedState<QSqrt2>::from_pauli(r), params, t).to_double()
                     : oracle::evolve_mixed(MixedLocalizedState<double>::from_pauli(rd), params, t));
  case Method::pipeline:
  case Method::pipeline_literal: {
    const auto tm = m == Method::pipeline ? mixed::TraceMode::consistent : mixed::TraceMode::literal;
    return tag(exact ? mixed::distribution_mixed(*ev, r, tm).to_double() : mixed::distribution_mixed(*ev, rd, tm));
  }
  case Method::literal:
    return tag(exact ? mixed::distribution_literal(*ev, r).to_double() : mixed::distribution_literal(*ev, rd));
  default:
    throw std::invalid_argument("method '" + to_string(m) + "' does not apply to mixed initial states");
  }
}

inline ComparisonReport compare_mixed(const std::array<QSqrt2, 4> &r, long t,
                                      const std::vector<Method> &methods = {Method::direct, Method::pipeline,
                                                                            Method::literal},
                                      ArithmeticMode mode = ArithmeticMode::exact, const Tolerances &tol = {}) {
  if (t < 0)
    throw std::invalid_argument("compare_mixed: negative step count");
  std::array<double, 4> rd;
  for (std::size_t i = 0; i < 4; ++i)
    rd[i] = r[i].to_double();
  const auto diag = validate_state(MixedLocalizedState<double>::from_pauli(rd), tol.normalization);
  if (!diag.ok())
    throw std::invalid_argument("compare_mixed: " + diag.violations.front().message);
  if (mode == ArithmeticMode::adaptive)
    mode = ArithmeticMode::exact;

  ComparisonReport rep;
  rep.config = {{"kind", "mixed"},
                {"coin", "hadamard"},
                {"pauli", {rd[0], rd[1], rd[2], rd[3]}},
                {"steps", t},
                {"mode", to_string(mode)}};
  std::optional<mixed::MixedEvaluator> ev;
  for (Method m : methods) {
    rep.methods.push_back(detail::timed(rep.timings, to_string(m), [&] {
      if (m != Method::direct && !ev)
        ev.emplace(t);
      return run_mixed_method(m, r, t, mode, ev ? &*ev : nullptr);
    }));
  }
  detail::add_normalization(rep, tol);
  detail::add_parity(rep, 0L, tol);
  for (const auto &d : rep.methods) {
    double most_negative = 0;
    for (const auto &[x, p] : d.probs)
      most_negative = std::min(most_negative, p);
    rep.invariants.push_back({"closedform-mixed", "non-negative " + to_string(d.method),
                              most_negative >= -tol.pointwise, detail::is_literal(d.method),
                              "min=" + detail::fmt(most_negative)});
  }
  if (const auto *oracle_d = rep.find(Method::direct); oracle_d && detail::asymmetry(*oracle_d) <= tol.symmetry)
    for (const auto &d : rep.methods) {
      if (d.method == Method::direct)
        continue;
      const double a = detail::asymmetry(d);
      rep.invariants.push_back({"closedform-mixed", "mirror symmetry " + to_string(d.method), a <= tol.symmetry,
                                detail::is_literal(d.method), "max |P(y)-P(-y)|=" + detail::fmt(a)});
    }
  detail::add_pairwise(rep, mode, tol);
  return rep;
}

// ---------------------------------------------------------------------------
// invariant suite

struct SuiteSizes {
  int pure_draws = 50;
  long pure_t_max = 30;
  long support_radius = 3;
  int horner_draws = 100;
  long horner_t_max = 30;
  long f_t_max = 50;
  int mixed_draws = 100;
  long mixed_t_max = 20;
  int identity_draws = 20;
};

struct Faults {
  /// Negates the second alpha family of the closed-form amplitudes.
  bool flip_alpha_cos_sign = false;
  /// Uses f_{-1} = 1 instead of 0 in the Horner power.
  bool f_negative_one = false;
};

namespace detail {

class Sampler {
public:
  explicit Sampler(std::uint64_t seed) : gen_(seed) {}
  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(gen_); }
  long integer(long lo, long hi) { return std::uniform_int_distribution<long>(lo, hi)(gen_); }
  double angle() { return uniform(0.0, 2.0 * std::numbers::pi); }

  CoinParams coin() {
    CoinParams p;
    p.theta = Angle::radians(angle());
    p.phi1 = Angle::radians(uniform(0.0, std::numbers::pi));
    p.phi2 = Angle::radians(uniform(0.0, std::numbers::pi));
    return p;
  }

  /// Normalized random state on a random subset of [-radius, radius].
  PureState<double> pure_state(long radius) {
    PureState<double> s;
    const long lo = integer(-radius, 0), hi = integer(0, radius);
    for (long x = lo; x <= hi; ++x)
      s.amplitudes[x] = {Cplx<double>(uniform(-1, 1), uniform(-1, 1)), Cplx<double>(uniform(-1, 1), uniform(-1, 1))};
    const double n = std::sqrt(s.norm_squared());
    for (auto &[x, a] : s.amplitudes) {
      a.alpha = a.alpha * (1.0 / n);
      a.beta = a.beta * (1.0 / n);
    }
    return s;
  }

  /// Uniform point of the Bloch ball, as Pauli components with r0 = 1/2.
  std::array<double, 4> bloch() {
    for (;;) {
      const double x = uniform(-0.5, 0.5), y = uniform(-0.5, 0.5), z = uniform(-0.5, 0.5);
      if (x * x + y * y + z * z <= 0.25)
        return {0.5, x, y, z};
    }
  }

private:
  std::mt19937_64 gen_;
};

inline PureState<QSqrt2> exact_copy(const PureState<double> &s) {
  PureState<QSqrt2> out;
  for (const auto &[x, a] : s.amplitudes)
    out.amplitudes[x] = {Cplx<QSqrt2>(QSqrt2::from_double(a.alpha.re), QSqrt2::from_double(a.alpha.im)),
                         Cplx<QSqrt2>(QSqrt2::from_double(a.beta.re), QSqrt2::from_double(a.beta.im))};
  return out;
}

/// Accumulates the worst case of a numeric check across draws.
struct Worst {
  double value = 0;
  std::string where;
  void update(double v, const std::string &w) {
    if (!(v <= value)) {
      value = v;
      where = w;
    }
  }
};

inline Check verdict(const std::string &module, const std::string &name, const Worst &w, double tol) {
  const bool ok = w.value <= tol;
  return {module, name, ok, false, "worst=" + fmt(w.value) + (ok || w.where.empty() ? "" : " at " + w.where)};
}

inline Mat2<cd> mat2_mul(const Mat2<cd> &a, const Mat2<cd> &b) {
  Mat2<cd> c{};
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      c[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j];
  return c;
}

inline double mat2_dist(const Mat2<cd> &a, const Mat2<cd> &b) {
  double m = 0;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      m = std::max(m, std::abs(a[i][j] - b[i][j]));
  return m;
}

inline std::string describe(const CoinParams &p, long t) {
  return "theta=" + p.theta.str() + " phi1=" + p.phi1.str() + " phi2=" + p.phi2.str() + " t=" + std::to_string(t);
}

} // namespace detail

inline ComparisonReport run_invariant_suite(std::uint64_t seed, const SuiteSizes &sizes = {},
                                            const Faults &faults = {}, const Tolerances &tol = {}) {
  using detail::Worst;
  ComparisonReport rep;
  rep.config = {{"kind", "invariant-suite"},
                {"seed", seed},
                {"generator", "mt19937_64"},
                {"sizes",
                 {{"pure_draws", sizes.pure_draws},
                  {"pure_t_max", sizes.pure_t_max},
                  {"support_radius", sizes.support_radius},
                  {"horner_draws", sizes.horner_draws},
                  {"horner_t_max", sizes.horner_t_max},
                  {"f_t_max", sizes.f_t_max},
                  {"mixed_draws", sizes.mixed_draws},
                  {"mixed_t_max", sizes.mixed_t_max},
                  {"identity_draws", sizes.identity_draws}}},
                {"faults", {{"flip_alpha_cos_sign", faults.flip_alpha_cos_sign}, {"f_negative_one", faults.f_negative_one}}}};
  detail::Sampler rng(seed);
  auto section = [&](const std::string &label, const std::function<void()> &body) {
    detail::timed(rep.timings, label, [&] {
      body();
      return 0;
    });
  };

  section("core", [&] {
    Worst unitary, pauli;
    for (int i = 0; i < sizes.horner_draws; ++i) {
      const auto p = rng.coin();
      const auto c = coin_matrix_complex(p);
      Mat2<cd> cdag{{{std::conj(c[0][0]), std::conj(c[1][0])}, {std::conj(c[0][1]), std::conj(c[1][1])}}};
      unitary.update(detail::mat2_dist(detail::mat2_mul(cdag, c), {{{1.0, 0.0}, {0.0, 1.0}}}), detail::describe(p, 0));
      const auto r = rng.bloch();
      const auto back = pauli_decompose<double>(MixedLocalizedState<double>::from_pauli(r).rho);
      for (std::size_t k = 0; k < 4; ++k)
        pauli.update(std::abs(back[k] - r[k]), "pauli draw " + std::to_string(i));
    }
    rep.invariants.push_back(detail::verdict("core", "coin unitarity", unitary, tol.matrix));
    rep.invariants.push_back(detail::verdict("core", "pauli round trip", pauli, tol.matrix));
  });

  section("horner", [&] {
    // t = 0 must give the identity: f_0 = 1 and f_{-1} = 0.
    HornerOptions hopts;
    if (faults.f_negative_one)
      hopts.f_negative_one = 1.0;
    Worst t0, quad, quartic, fquad, fquartic;
    for (int i = 0; i < sizes.horner_draws; ++i) {
      const auto p = rng.coin();
      const double k = rng.angle(), kp = rng.angle();
      const long t = rng.integer(0, sizes.horner_t_max);
      t0.update(detail::mat2_dist(u_k_power(p, k, 0, hopts), {{{1.0, 0.0}, {0.0, 1.0}}}), detail::describe(p, 0));
      const auto u = u_k(p, k);
      Mat2<cd> rep_pow{{{1.0, 0.0}, {0.0, 1.0}}};
      for (long s = 0; s < t; ++s)
        rep_pow = detail::mat2_mul(u, rep_pow);
      quad.update(detail::mat2_dist(u_k_power(p, k, t, hopts), rep_pow), detail::describe(p, t));
      quartic.update(max_abs_diff(superop_power(k, kp, t), repeated_power(superop(k, kp), t)),
                     "k=" + detail::fmt(k) + " k'=" + detail::fmt(kp) + " t=" + std::to_string(t));
      const auto qc = quad_coeffs(p, k);
      const auto seq = HornerSequence<cd>::quad(qc, sizes.f_t_max);
      const auto qq = quartic_coeffs(k, kp);
      const auto seq4 = HornerSequence<double>::quartic(qq, sizes.f_t_max);
      // the explicit sums cancel heavily, so they are evaluated at 256 bits
      PrecisionScope scope(256);
      const CharPolyQuad<Cplx<mp_real>> qm{Cplx<mp_real>(mp_real(qc.c0.real()), mp_real(qc.c0.imag())),
                                           Cplx<mp_real>(mp_real(qc.c1.real()), mp_real(qc.c1.imag()))};
      const CharPolyQuartic<mp_real> qqm{{mp_real(qq.c[0]), mp_real(qq.c[1]), mp_real(qq.c[2]), mp_real(qq.c[3])}};
      for (long n = i % 5; n <= sizes.f_t_max; n += 5) {
        fquad.update(std::abs(seq(n) - to_complex(f_quad(qm, n))), "n=" + std::to_string(n));
        fquartic.update(std::abs(seq4(n) - f_quartic(qqm, n).to_double()), "n=" + std::to_string(n));
      }
    }
    // exact comparison of explicit sum and recurrence on rational coefficients
    bool exact_ok = true;
    std::string exact_where;
    auto rational = [&] {
      mpq_class v(rng.integer(-5, 5), rng.integer(1, 4));
      v.canonicalize();
      return v;
    };
    for (int i = 0; i < 5 && exact_ok; ++i) {
      CharPolyQuad<mpq_class> q2{rational(), rational()};
      const auto seq2 = HornerSequence<mpq_class>::quad(q2, sizes.f_t_max);
      for (long n = 0; n <= sizes.f_t_max; ++n)
        if (seq2(n) != f_quad(q2, n)) {
          exact_ok = false;
          exact_where = "quadratic n=" + std::to_string(n);
          break;
        }
      CharPolyQuartic<mpq_class> q{{rational(), rational(), rational(), rational()}};
      const auto seq = HornerSequence<mpq_class>::quartic(q, sizes.f_t_max);
      for (long n = 0; n <= sizes.f_t_max; ++n)
        if (seq(n) != f_quartic(q, n)) {
          exact_ok = false;
          exact_where = "quartic n=" + std::to_string(n);
          break;
        }
    }
    rep.invariants.push_back(detail::verdict("horner", "u_k power at t=0 is the identity", t0, tol.matrix));
    rep.invariants.push_back(detail::verdict("horner", "u_k power matches repeated product", quad, tol.matrix));
    rep.invariants.push_back(detail::verdict("horner", "superoperator power matches repeated product", quartic, tol.matrix));
    rep.invariants.push_back(detail::verdict("horner", "quadratic f_t explicit sum matches recurrence", fquad, tol.matrix));
    rep.invariants.push_back(detail::verdict("horner", "quartic f_t explicit sum matches recurrence", fquartic, tol.matrix));
    rep.invariants.push_back({"horner", "f_t exact on rational coefficients", exact_ok, false, exact_where});
  });

  section("oracle-sim", [&] {
    Worst norm, phase, mirror;
    bool parity_ok = true;
    for (int i = 0; i < sizes.pure_draws; ++i) {
      const auto p = rng.coin();
      auto init = rng.pure_state(0);
      const long t = rng.integer(0, sizes.pure_t_max);
      const auto final_state = oracle::evolve_pure(init, p, t);
      norm.update(std::abs(final_state.norm_squared() - 1.0), detail::describe(p, t));
      const auto d = oracle::distribution_of(final_state, t);
      for (const auto &[x, q] : d.probs)
        if ((x + t) % 2 != 0 && q != 0.0)
          parity_ok = false;
      const double g = rng.angle();
      auto rotated = init;
      for (auto &[x, a] : rotated.amplitudes) {
        const Cplx<double> e(std::cos(g), std::sin(g));
        a.alpha = a.alpha * e;
        a.beta = a.beta * e;
      }
      phase.update(total_variation(d, oracle::distribution_of(oracle::evolve_pure(rotated, p, t), t)),
                   detail::describe(p, t));
    }
    for (long t = 0; t <= sizes.mixed_t_max; ++t)
      mirror.update(detail::asymmetry(
                        oracle::evolve_mixed(MixedLocalizedState<double>::from_pauli({0.5, 0, 0, 0}),
                                             CoinParams::hadamard(), t)),
                    "t=" + std::to_string(t));
    rep.invariants.push_back(detail::verdict("oracle-sim", "norm preservation", norm, tol.normalization));
    rep.invariants.push_back({"oracle-sim", "parity of localized walks", parity_ok, false, ""});
    rep.invariants.push_back(detail::verdict("oracle-sim", "global coin phase invariance", phase, tol.total_variation));
    rep.invariants.push_back(detail::verdict("oracle-sim", "mirror symmetry of the maximally mixed walk", mirror, tol.symmetry));
  });

  section("spectral-sim", [&] {
    Worst tv, per_mode;
    for (int i = 0; i < sizes.pure_draws / 2 + 1; ++i) {
      const auto p = rng.coin();
      const auto init = rng.pure_state(sizes.support_radius);
      const long t = rng.integer(0, sizes.pure_t_max);
      tv.update(total_variation(spectral::distribution(init, p, t),
                                oracle::distribution_of(oracle::evolve_pure(init, p, t), t)),
                detail::describe(p, t));
      const long n = spectral::ring_size_for(t, init.radius());
      const auto f0 = spectral::forward(init, n, t);
      const auto f1 = spectral::propagate(f0, p, t);
      for (long j = 0; j < n; ++j) {
        const auto idx = static_cast<std::size_t>(j);
        per_mode.update(std::abs(std::norm(f0.alpha[idx]) + std::norm(f0.beta[idx]) - std::norm(f1.alpha[idx]) -
                                 std::norm(f1.beta[idx])),
                        detail::describe(p, t));
      }
    }
    rep.invariants.push_back(detail::verdict("spectral-sim", "agreement with direct evolution", tv, tol.total_variation));
    rep.invariants.push_back(detail::verdict("spectral-sim", "per-mode norm conservation", per_mode, tol.matrix));
  });

  section("closedform-pure", [&] {
    closed_form::AmplitudeOptions opts;
    opts.flip_alpha_cos_sign = faults.flip_alpha_cos_sign;
    Worst amp, tv, norm_defect, cone, spectral_tv, phase_forms;
    for (int i = 0; i < sizes.pure_draws; ++i) {
      const auto p = rng.coin();
      const auto init = rng.pure_state(sizes.support_radius);
      const long t = rng.integer(0, sizes.pure_t_max);
      const auto exact_init = detail::exact_copy(init);
      const auto oracle_state = oracle::evolve_pure(init, p, t);
      PrecisionScope scope(closed_form::required_precision_bits(t));
      const auto mp_init = convert_state<mp_real>(exact_init);
      closed_form::Evaluator<mp_real> ev(mp_init, p, t, opts);
      auto opts_alt = opts;
      opts_alt.beta_cross_phase = closed_form::BetaCrossPhase::pre_inverse;
      closed_form::Evaluator<mp_real> ev_alt(mp_init, p, t, opts_alt);
      Distribution<double> d;
      d.t = t;
      for (long x = init.min_position() - t - 1; x <= init.max_position() + t + 1; ++x) {
        const auto a = ev.amplitude(x);
        const auto it = oracle_state.amplitudes.find(x);
        const CoinAmp<double> o = it == oracle_state.amplitudes.end() ? CoinAmp<double>{} : it->second;
        const double diff = std::max(std::abs(to_complex(a.alpha) - to_complex(o.alpha)),
                                     std::abs(to_complex(a.beta) - to_complex(o.beta)));
        const bool outside = x < init.min_position() - t || x > init.max_position() + t;
        if (outside)
          cone.update(std::max(std::abs(to_complex(a.alpha)), std::abs(to_complex(a.beta))), detail::describe(p, t));
        else
          d.probs[x] = to_double(norm(a.alpha) + norm(a.beta));
        amp.update(diff, detail::describe(p, t) + " x=" + std::to_string(x));
        const auto b = ev_alt.amplitude(x);
        phase_forms.update(std::abs(to_complex(a.beta) - to_complex(b.beta)), detail::describe(p, t));
      }
      tv.update(total_variation(d, oracle::distribution_of(oracle_state, t)), detail::describe(p, t));
      spectral_tv.update(total_variation(d, spectral::distribution(init, p, t)), detail::describe(p, t));
      norm_defect.update(std::abs(d.total() - 1.0), detail::describe(p, t));
    }
    // exact equality for the Hadamard family
    bool exact_ok = true;
    std::string exact_where;
    const QSqrt2 h(mpq_class(0), mpq_class(1, 2));
    const auto exact_init = PureState<QSqrt2>::localized(0, Cplx<QSqrt2>(h), Cplx<QSqrt2>(QSqrt2(0), h));
    for (const auto &p : {CoinParams::hadamard(),
                          CoinParams{Angle::pi_multiple(1, 4), Angle::pi_multiple(1, 2), Angle::pi_multiple(0, 1)},
                          CoinParams{Angle::pi_multiple(3, 4), Angle::pi_multiple(0, 1), Angle::pi_multiple(1, 1)}}) {
      const long t = std::min<long>(sizes.pure_t_max, 16);
      const auto cf = closed_form::distribution(t, exact_init, p, opts);
      const auto orc = oracle::distribution_of(oracle::evolve_pure(exact_init, p, t), t);
      if (!(total_variation(cf, orc) == QSqrt2(0)) || !(cf.total() == QSqrt2(1))) {
        exact_ok = false;
        exact_where = detail::describe(p, t);
      }
    }
    rep.invariants.push_back(detail::verdict("closedform-pure", "amplitudes match direct evolution", amp, tol.pointwise));
    rep.invariants.push_back(detail::verdict("closedform-pure", "distribution matches direct evolution", tv, tol.total_variation));
    rep.invariants.push_back(detail::verdict("closedform-pure", "distribution matches spectral evolution", spectral_tv,
                                             tol.total_variation));
    rep.invariants.push_back(detail::verdict("closedform-pure", "normalization", norm_defect, tol.normalization));
    rep.invariants.push_back(detail::verdict("closedform-pure", "light cone", cone, 0.0));
    rep.invariants.push_back(
        detail::verdict("closedform-pure", "beta cross-term phase forms agree", phase_forms, tol.pointwise));
    rep.invariants.push_back({"closedform-pure", "exact equality for the Hadamard family", exact_ok, false, exact_where});
  });

  section("closedform-mixed", [&] {
    // Kernel identities against a 2-D rectangle rule. The integrands are
    // trigonometric polynomials of degree <= 8, which a 32-point rule
    // integrates exactly.
    Worst identity;
    constexpr int grid = 32;
    for (int i = 0; i < sizes.identity_draws; ++i) {
      const long A = rng.integer(-6, 6), B = rng.integer(-6, 6);
      for (auto kern : mixed::all_kernels) {
        cd sum = 0;
        for (int a = 0; a < grid; ++a)
          for (int b = 0; b < grid; ++b) {
            const double k = -std::numbers::pi + 2 * std::numbers::pi * a / grid;
            const double kp = -std::numbers::pi + 2 * std::numbers::pi * b / grid;
            sum += std::polar(1.0, k * static_cast<double>(A) + kp * static_cast<double>(B)) *
                   mixed::kernel_value(kern, k, kp);
          }
        sum /= static_cast<double>(grid * grid);
        identity.update(std::abs(sum - mixed::kernel_integral(kern, A, B).to_complex()),
                        mixed::to_string(kern) + " A=" + std::to_string(A) + " B=" + std::to_string(B));
      }
    }
    std::vector<mixed::MixedEvaluator> evs;
    for (long t = 0; t <= sizes.mixed_t_max; ++t)
      evs.emplace_back(t);
    Worst consistent, r2_flip, linearity, pure_match, literal_dev;
    for (int i = 0; i < sizes.mixed_draws; ++i) {
      const auto r = rng.bloch(), r2 = rng.bloch();
      const long t = rng.integer(0, sizes.mixed_t_max);
      const auto &ev = evs[static_cast<std::size_t>(t)];
      const auto pipe = mixed::distribution_mixed(ev, r, mixed::TraceMode::consistent);
      const auto orc = oracle::evolve_mixed(MixedLocalizedState<double>::from_pauli(r), CoinParams::hadamard(), t);
      const std::string where = "r=(" + detail::fmt(r[1]) + "," + detail::fmt(r[2]) + "," + detail::fmt(r[3]) +
                                ") t=" + std::to_string(t);
      consistent.update(max_pointwise_difference(pipe, orc), where);
      literal_dev.update(max_pointwise_difference(mixed::distribution_literal(ev, r), orc), where);
      auto flipped = r;
      flipped[2] = -flipped[2];
      r2_flip.update(max_pointwise_difference(pipe, mixed::distribution_mixed(ev, flipped, mixed::TraceMode::consistent)),
                     where);
      const double lam = rng.uniform(0, 1);
      std::array<double, 4> mix;
      for (std::size_t k = 0; k < 4; ++k)
        mix[k] = lam * r[k] + (1 - lam) * r2[k];
      const auto dm = mixed::distribution_mixed(ev, mix, mixed::TraceMode::consistent);
      const auto d2 = mixed::distribution_mixed(ev, r2, mixed::TraceMode::consistent);
      for (const auto &[y, p] : dm.probs)
        linearity.update(std::abs(p - (lam * pipe.at(y) + (1 - lam) * d2.at(y))), where);
      // rank-1 state on the surface of the Bloch ball
      const double th = rng.uniform(0, std::numbers::pi), ph = rng.angle();
      const Cplx<double> ca(std::cos(th / 2)), cb(std::cos(ph) * std::sin(th / 2), std::sin(ph) * std::sin(th / 2));
      const auto rank1 = pauli_decompose<double>(MixedLocalizedState<double>::from_pure_coin(ca, cb).rho);
      const auto pure_d = closed_form::distribution_adaptive(
          t, detail::exact_copy(PureState<double>::localized(0, ca, cb)), CoinParams::hadamard());
      pure_match.update(max_pointwise_difference(mixed::distribution_mixed(ev, rank1, mixed::TraceMode::consistent),
                                                 pure_d),
                        where);
    }
    rep.invariants.push_back(detail::verdict("closedform-mixed", "kernel integral identities", identity, tol.pointwise));
    rep.invariants.push_back(
        detail::verdict("closedform-mixed", "consistent pipeline matches density-matrix evolution", consistent, tol.pointwise));
    rep.invariants.push_back(detail::verdict("closedform-mixed", "r2 sign invariance", r2_flip, tol.pointwise));
    rep.invariants.push_back(detail::verdict("closedform-mixed", "mixing linearity", linearity, tol.pointwise));
    rep.invariants.push_back(
        detail::verdict("closedform-mixed", "rank-1 states match the pure closed form", pure_match, tol.pointwise));
    Check lit = detail::verdict("closedform-mixed", "printed formula matches density-matrix evolution", literal_dev,
                                tol.pointwise);
    lit.advisory = true;
    rep.invariants.push_back(lit);
  });
  return rep;
}

} // namespace qwalk::verify
