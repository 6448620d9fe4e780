#pragma once

// Closed-form distribution of the Hadamard walk from a mixed coin state at the
// origin. The trace Tr(L^t O) is a sum of f_{t-j} times trigonometric kernels
// in (k, k'); expanding f_{t-j} into powers of cos(k-k') and cos(k+k') and
// integrating each kernel against e^{iy(k-k')} collapses every term onto a
// pair of binomial coefficients.
//
// Two evaluations are provided:
//   * the printed four-group formula (prob_literal), and
//   * a pipeline that rebuilds the formula from a trace-kernel list and the
//     kernel integral table, either with the printed trace weights
//     (TraceMode::literal) or with the weights read off the Horner basis rows
//     (TraceMode::consistent).

#include "qwalk/horner.hpp"

#include <map>
#include <optional>
#include <utility>
#include <vector>

namespace qwalk::mixed {

// ---------------------------------------------------------------------------
// exact helpers

struct GaussRational {
  mpq_class re{0};
  mpq_class im{0};

  GaussRational &operator+=(const GaussRational &o) {
    re += o.re;
    im += o.im;
    return *this;
  }
  friend GaussRational operator*(const GaussRational &a, const GaussRational &b) {
    return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
  }
  friend GaussRational operator*(const GaussRational &a, const mpq_class &s) { return {a.re * s, a.im * s}; }
  friend bool operator==(const GaussRational &a, const GaussRational &b) { return a.re == b.re && a.im == b.im; }
  cd to_complex() const { return {re.get_d(), im.get_d()}; }
};

/// C(n, num/2) when num is even and num/2 in [0, n]; otherwise 0.
inline mpz_class half_binom(long n, long num) {
  if (num % 2 != 0)
    return 0;
  return binomial(n, num / 2);
}

template <class R> R from_mpq(const mpq_class &q) {
  if constexpr (std::is_same_v<R, double>)
    return q.get_d();
  else if constexpr (std::is_same_v<R, QSqrt2>)
    return QSqrt2(q);
  else if constexpr (std::is_same_v<R, mpq_class>)
    return q;
  else if constexpr (std::is_same_v<R, mp_real>)
    return mp_real(q);
  else
    static_assert(!sizeof(R), "unsupported scalar");
}

// ---------------------------------------------------------------------------
// kernel integral table

/// Trigonometric kernels multiplying f_{t-j} in the trace. Delta = k - k',
/// Sigma = k + k'.
enum class Kernel { one, cos_sum, cos_diff, sin_diff, cos_sum_cos_diff, sin_sum_sin_diff, cos_sum_sin_diff };

inline constexpr std::array<Kernel, 7> all_kernels = {Kernel::one,      Kernel::cos_sum,          Kernel::cos_diff,
                                                      Kernel::sin_diff, Kernel::cos_sum_cos_diff, Kernel::sin_sum_sin_diff,
                                                      Kernel::cos_sum_sin_diff};

inline std::string to_string(Kernel k) {
  switch (k) {
  case Kernel::one:
    return "1";
  case Kernel::cos_sum:
    return "cos(k+k')";
  case Kernel::cos_diff:
    return "cos(k-k')";
  case Kernel::sin_diff:
    return "sin(k-k')";
  case Kernel::cos_sum_cos_diff:
    return "cos(k+k')cos(k-k')";
  case Kernel::sin_sum_sin_diff:
    return "sin(k+k')sin(k-k')";
  case Kernel::cos_sum_sin_diff:
    return "cos(k+k')sin(k-k')";
  }
  return "?";
}

/// coef * delta(A + a) delta(B + b)
struct KernelDelta {
  int a;
  int b;
  GaussRational coef;
};

/// (1/4pi^2) \iint e^{ikA} e^{ik'B} K(k,k') dk dk' as a sum of delta pairs.
inline std::vector<KernelDelta> kernel_deltas(Kernel k) {
  const mpq_class half(1, 2), quarter(1, 4);
  switch (k) {
  case Kernel::one:
    return {{0, 0, {1, 0}}};
  case Kernel::cos_sum:
    return {{1, 1, {half, 0}}, {-1, -1, {half, 0}}};
  case Kernel::cos_diff:
    return {{1, -1, {half, 0}}, {-1, 1, {half, 0}}};
  case Kernel::sin_diff: // 1/(2i) = -i/2
    return {{1, -1, {0, -half}}, {-1, 1, {0, half}}};
  case Kernel::cos_sum_cos_diff:
    return {{2, 0, {quarter, 0}}, {0, 2, {quarter, 0}}, {0, -2, {quarter, 0}}, {-2, 0, {quarter, 0}}};
  case Kernel::sin_sum_sin_diff:
    return {{0, -2, {quarter, 0}}, {0, 2, {quarter, 0}}, {2, 0, {-quarter, 0}}, {-2, 0, {-quarter, 0}}};
  case Kernel::cos_sum_sin_diff: // 1/(4i) = -i/4
    return {{2, 0, {0, -quarter}}, {0, 2, {0, quarter}}, {0, -2, {0, -quarter}}, {-2, 0, {0, quarter}}};
  }
  return {};
}

/// Pointwise value of a kernel.
inline double kernel_value(Kernel k, double kk, double kp) {
  const double d = kk - kp, s = kk + kp;
  switch (k) {
  case Kernel::one:
    return 1.0;
  case Kernel::cos_sum:
    return std::cos(s);
  case Kernel::cos_diff:
    return std::cos(d);
  case Kernel::sin_diff:
    return std::sin(d);
  case Kernel::cos_sum_cos_diff:
    return std::cos(s) * std::cos(d);
  case Kernel::sin_sum_sin_diff:
    return std::sin(s) * std::sin(d);
  case Kernel::cos_sum_sin_diff:
    return std::cos(s) * std::sin(d);
  }
  return 0.0;
}

/// Evaluates the delta table at integer (A, B).
inline GaussRational kernel_integral(Kernel k, long A, long B) {
  GaussRational r;
  for (const auto &d : kernel_deltas(k))
    if (A + d.a == 0 && B + d.b == 0)
      r += d.coef;
  return r;
}

// ---------------------------------------------------------------------------
// expansion of f_m into cos(k-k')^A1 cos(k+k')^A2

struct MixedTerm {
  long m = 0; // h0 + 2h1 + 3h2 + 4h3
  std::array<long, 4> h{};
  long s0 = 0;
  long s2 = 0;
  long a1 = 0;
  long a2 = 0;
  mpq_class a0;
};

/// Every (partition, s0, s2) term of f_m with its weight
///   A0 = 2^{h1} / 2^{A1+A2} (-1)^{h0+h2+h3-s0-s2} multinomial(h) C(h0,s0) C(h2,s2).
inline std::vector<MixedTerm> mixed_terms(long m) {
  std::vector<MixedTerm> out;
  for (const auto &h : quartic_partitions(m)) {
    const mpz_class mult = multinomial({h[0], h[1], h[2], h[3]});
    for (long s0 = 0; s0 <= h[0]; ++s0)
      for (long s2 = 0; s2 <= h[2]; ++s2) {
        MixedTerm t;
        t.m = m;
        t.h = h;
        t.s0 = s0;
        t.s2 = s2;
        t.a1 = h[1] + s0 + s2;
        t.a2 = h[0] + h[1] + h[2] - s0 - s2;
        mpz_class num = mult * binomial(h[0], s0) * binomial(h[2], s2);
        if ((h[0] + h[2] + h[3] - s0 - s2) % 2 != 0)
          num = -num;
        mpz_class den = 1;
        mpz_mul_2exp(num.get_mpz_t(), num.get_mpz_t(), static_cast<mp_bitcnt_t>(h[1]));
        mpz_mul_2exp(den.get_mpz_t(), den.get_mpz_t(), static_cast<mp_bitcnt_t>(t.a1 + t.a2));
        t.a0 = mpq_class(num, den);
        t.a0.canonicalize();
        out.push_back(std::move(t));
      }
  }
  return out;
}

/// Sum of A0 over terms sharing the same (A1, A2). Empty for m < 0.
using WeightTable = std::map<std::pair<long, long>, mpq_class>;

inline WeightTable aggregate_weights(long m) {
  WeightTable w;
  for (auto &t : mixed_terms(m))
    w[{t.a1, t.a2}] += t.a0;
  for (auto it = w.begin(); it != w.end();)
    it = it->second == 0 ? w.erase(it) : std::next(it);
  return w;
}

/// Solves A = -a, B = -b for the cosine-expansion indices (v1, v2), where
///   A = 2v1 + 2v2 - A1 - A2 + y,  B = 2v2 - 2v1 + A1 - A2 - y.
inline std::optional<std::pair<long, long>> eliminate_v(long a1, long a2, long y, int a, int b) {
  const long four_v1 = 2 * a1 - 2 * y - a + b;
  const long four_v2 = 2 * a2 - a - b;
  if (four_v1 % 4 != 0 || four_v2 % 4 != 0)
    return std::nullopt;
  const long v1 = four_v1 / 4, v2 = four_v2 / 4;
  if (v1 < 0 || v1 > a1 || v2 < 0 || v2 > a2)
    return std::nullopt;
  return std::make_pair(v1, v2);
}

/// \iint e^{iy(k-k')} f_m(k,k') K(k,k') over [-pi,pi]^2 / 4pi^2, exactly.
inline GaussRational kernel_group_integral(const WeightTable &w, Kernel kernel, long y) {
  GaussRational total;
  const auto deltas = kernel_deltas(kernel);
  for (const auto &[a, weight] : w) {
    const auto [a1, a2] = a;
    for (const auto &d : deltas) {
      auto v = eliminate_v(a1, a2, y, d.a, d.b);
      if (!v)
        continue;
      total += d.coef * mpq_class(weight * binomial(a1, v->first) * binomial(a2, v->second));
    }
  }
  return total;
}

// ---------------------------------------------------------------------------
// trace kernels

enum class TraceMode { literal, consistent };

inline std::string to_string(TraceMode m) { return m == TraceMode::literal ? "literal" : "consistent"; }

/// factor * r[r_index] * K(k,k') * f_{t - f_shift}
struct TraceTerm {
  int f_shift;
  Kernel kernel;
  int r_index;
  long factor_re;
  long factor_im;
};

/// Tr(L^t O) as a list of kernel terms. Literal mode reproduces the printed
/// trace; consistent mode uses 2 x row 0 of the Horner basis matrices.
inline std::vector<TraceTerm> trace_kernels(TraceMode mode) {
  std::vector<TraceTerm> terms = {{0, Kernel::one, 0, 2, 0}, {1, Kernel::cos_sum, 0, 2, 0}};
  if (mode == TraceMode::literal) {
    terms.push_back({1, Kernel::sin_diff, 2, 0, -2});
    terms.push_back({2, Kernel::sin_sum_sin_diff, 1, 0, 2 * -1});
    terms.push_back({2, Kernel::cos_sum_cos_diff, 0, -2, 0});
    terms.push_back({2, Kernel::cos_sum_sin_diff, 2, 0, -2});
    terms.push_back({2, Kernel::cos_sum_sin_diff, 3, 0, -2});
  } else {
    terms.push_back({1, Kernel::sin_diff, 1, 0, -2});
    terms.push_back({2, Kernel::cos_sum_cos_diff, 0, -2, 0});
    terms.push_back({2, Kernel::cos_sum_sin_diff, 1, 0, -2});
    terms.push_back({2, Kernel::sin_sum_sin_diff, 2, 0, -2});
    terms.push_back({2, Kernel::cos_sum_sin_diff, 3, 0, -2});
  }
  terms.push_back({3, Kernel::cos_diff, 0, -2, 0});
  terms.push_back({3, Kernel::sin_diff, 3, 0, -2});
  return terms;
}

/// Pointwise Tr(L_{k,k'}^t O) assembled from a kernel list and f_t values.
template <class RArray> cd trace_value(TraceMode mode, double k, double kp, const RArray &r, long t) {
  const auto seq = HornerSequence<double>::quartic(quartic_coeffs(k, kp), std::max<long>(t, 0));
  cd total = 0;
  for (const auto &term : trace_kernels(mode)) {
    const cd factor(static_cast<double>(term.factor_re), static_cast<double>(term.factor_im));
    total += seq(t - term.f_shift) * factor * static_cast<double>(r[static_cast<std::size_t>(term.r_index)]) *
             kernel_value(term.kernel, k, kp);
  }
  return total;
}

// ---------------------------------------------------------------------------
// evaluator

/// Per-position coefficients c_i(y) with P(y) = sum_i c_i(y) r_i.
using PauliCoefficients = std::array<mpq_class, 4>;

/// Precomputes, for one t, the exact linear forms in (r0..r3) that give P(y).
/// Everything here is independent of the state, so one evaluator serves any
/// number of r vectors.
class MixedEvaluator {
public:
  explicit MixedEvaluator(long t) : t_(t) {
    if (t < 0)
      throw std::invalid_argument("mixed closed form: negative step count");
    for (int j = 0; j < 4; ++j)
      tables_[static_cast<std::size_t>(j)] = aggregate_weights(t - j);
    for (long y = -t; y <= t; ++y) {
      literal_[y] = build_printed(y);
      pipeline_[{TraceMode::literal, y}] = build_pipeline(TraceMode::literal, y);
      pipeline_[{TraceMode::consistent, y}] = build_pipeline(TraceMode::consistent, y);
    }
  }

  long t() const { return t_; }
  const WeightTable &weights(int j) const { return tables_.at(static_cast<std::size_t>(j)); }

  const PauliCoefficients &printed_coefficients(long y) const { return lookup(literal_, y); }
  const PauliCoefficients &pipeline_coefficients(TraceMode mode, long y) const {
    auto it = pipeline_.find({mode, y});
    return it == pipeline_.end() ? zero() : it->second.first;
  }
  /// Imaginary part left over after summing the pipeline for position y
  /// (must vanish for a real probability).
  const PauliCoefficients &pipeline_imaginary_residue(TraceMode mode, long y) const {
    auto it = pipeline_.find({mode, y});
    return it == pipeline_.end() ? zero() : it->second.second;
  }

  template <class R> R prob_literal(long y, const std::array<R, 4> &r) const {
    return combine(printed_coefficients(y), r);
  }
  template <class R> R prob_pipeline(long y, const std::array<R, 4> &r, TraceMode mode) const {
    return combine(pipeline_coefficients(mode, y), r);
  }

private:
  using Entry = std::pair<PauliCoefficients, PauliCoefficients>;

  static const PauliCoefficients &zero() {
    static const PauliCoefficients z{};
    return z;
  }
  static const PauliCoefficients &lookup(const std::map<long, PauliCoefficients> &m, long y) {
    auto it = m.find(y);
    return it == m.end() ? zero() : it->second;
  }

  template <class R> static R combine(const PauliCoefficients &c, const std::array<R, 4> &r) {
    R total(0);
    for (std::size_t i = 0; i < 4; ++i)
      if (c[i] != 0)
        total += from_mpq<R>(c[i]) * r[i];
    return total;
  }

  // The printed four-group expression.
  PauliCoefficients build_printed(long y) const {
    PauliCoefficients c{};
    for (const auto &[a, w] : tables_[0]) {
      const auto [a1, a2] = a;
      c[0] += 2 * w * mpq_class(half_binom(a1, a1 - y) * half_binom(a2, a2));
    }
    for (const auto &[a, w] : tables_[1]) {
      const auto [a1, a2] = a;
      c[0] += 2 * w * mpq_class(half_binom(a1, a1 - y) * half_binom(a2, a2 - 1));
      c[2] += w * mpq_class(y, a1 + 1) * mpq_class(half_binom(a1 + 1, a1 - y + 1) * half_binom(a2, a2));
    }
    for (const auto &[a, w] : tables_[2]) {
      const auto [a1, a2] = a;
      c[0] -= w * mpq_class(half_binom(a1 + 1, a1 - y + 1) * half_binom(a2, a2 - 1));
    }
    for (const auto &[a, w] : tables_[3]) {
      const auto [a1, a2] = a;
      const mpq_class b(half_binom(a1 + 1, a1 - y + 1) * half_binom(a2, a2));
      c[0] -= w * b;
      c[3] += w * mpq_class(y, a1 + 1) * b;
    }
    for (auto &v : c)
      v.canonicalize();
    return c;
  }

  Entry build_pipeline(TraceMode mode, long y) const {
    PauliCoefficients re{}, im{};
    for (const auto &term : trace_kernels(mode)) {
      const auto &w = tables_[static_cast<std::size_t>(term.f_shift)];
      if (w.empty())
        continue;
      const GaussRational integral = kernel_group_integral(w, term.kernel, y);
      const GaussRational v = integral * GaussRational{term.factor_re, term.factor_im};
      re[static_cast<std::size_t>(term.r_index)] += v.re;
      im[static_cast<std::size_t>(term.r_index)] += v.im;
    }
    for (auto &v : re)
      v.canonicalize();
    for (auto &v : im)
      v.canonicalize();
    return {re, im};
  }

  long t_;
  std::array<WeightTable, 4> tables_;
  std::map<long, PauliCoefficients> literal_;
  std::map<std::pair<TraceMode, long>, Entry> pipeline_;
};

// ---------------------------------------------------------------------------
// free-function surface

template <class R> R prob_literal(long y, long t, const std::array<R, 4> &r) {
  return MixedEvaluator(t).prob_literal(y, r);
}

template <class R> R prob_pipeline(long y, long t, const std::array<R, 4> &r, TraceMode mode) {
  return MixedEvaluator(t).prob_pipeline(y, r, mode);
}

/// P(y, t) for y in [-t, t] through the kernel pipeline.
template <class R>
Distribution<R> distribution_mixed(const MixedEvaluator &ev, const std::array<R, 4> &r, TraceMode mode) {
  Distribution<R> d;
  d.t = ev.t();
  d.method = mode == TraceMode::consistent ? Method::pipeline : Method::pipeline_literal;
  d.mode = is_exact_v<R> ? ArithmeticMode::exact : ArithmeticMode::double_precision;
  for (long y = -ev.t(); y <= ev.t(); ++y)
    d.probs[y] = ev.prob_pipeline(y, r, mode);
  return d;
}

template <class R> Distribution<R> distribution_mixed(long t, const std::array<R, 4> &r, TraceMode mode) {
  return distribution_mixed(MixedEvaluator(t), r, mode);
}

/// P(y, t) for y in [-t, t] from the printed formula.
template <class R> Distribution<R> distribution_literal(const MixedEvaluator &ev, const std::array<R, 4> &r) {
  Distribution<R> d;
  d.t = ev.t();
  d.method = Method::literal;
  d.mode = is_exact_v<R> ? ArithmeticMode::exact : ArithmeticMode::double_precision;
  for (long y = -ev.t(); y <= ev.t(); ++y)
    d.probs[y] = ev.prob_literal(y, r);
  return d;
}

template <class R> Distribution<R> distribution_literal(long t, const std::array<R, 4> &r) {
  return distribution_literal(MixedEvaluator(t), r);
}

} // namespace qwalk::mixed
