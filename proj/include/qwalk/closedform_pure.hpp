#pragma once

// Closed-form coin amplitudes alpha_x(t), beta_x(t) for the general coin and a
// general delocalized pure initial state. Every amplitude is a finite sum of
// signed multinomial coefficients times powers of cos(theta), one sin(theta),
// a coin phase and chi = e^{i(phi1+phi2)} raised to (t + x' - x)/2.
//
// The momentum-space derivation pairs alpha~_k = sum_x e^{ikx} alpha_x with
// U_k = diag(e^{-ik}, e^{ik}) C, which moves coin component 0 to the left.
// Terms are therefore evaluated at mirrored positions (x, x') -> (-x, -x') so
// that component 0 moves right, as in the position-space step.

#include "qwalk/core.hpp"

#include <cstdlib>
#include <vector>

namespace qwalk::closed_form {

/// The six term families: three feed alpha, three feed beta.
enum class Branch { alpha_ft, alpha_cos, alpha_sin, beta_ft, beta_sin, beta_cos };

inline constexpr std::array<Branch, 6> all_branches = {Branch::alpha_ft, Branch::alpha_cos, Branch::alpha_sin,
                                                      Branch::beta_ft,  Branch::beta_sin,  Branch::beta_cos};

struct BranchShape {
  long order_offset; // family runs over f_{t - order_offset}
  int shift;         // momentum shift of the U_k - c0 I entry: delta(h - 2g + shift + x - x')
  int cos_extra;     // extra power of cos(theta)
  bool has_sin;
  bool from_beta;    // source amplitude is beta_{x'} rather than alpha_{x'}
  bool to_beta;
};

constexpr BranchShape shape(Branch b) {
  switch (b) {
  case Branch::alpha_ft:
    return {0, 0, 0, false, false, false};
  case Branch::alpha_cos:
    return {1, +1, 1, false, false, false};
  case Branch::alpha_sin:
    return {1, -1, 0, true, true, false};
  case Branch::beta_ft:
    return {0, 0, 0, false, true, true};
  case Branch::beta_sin:
    return {1, +1, 0, true, false, true};
  case Branch::beta_cos:
    return {1, -1, 1, false, true, true};
  }
  return {};
}

/// One surviving term after the g-sum collapses onto its delta condition.
struct TermIndex {
  long h = 0;
  long source = 0;  // x'
  Branch branch = Branch::alpha_ft;
  long g = 0;
  long chi_exponent = 0;
};

/// Terms of `branch` whose factorial arguments are all non-negative integers.
inline std::vector<TermIndex> admissible_terms(long x, long t, long source, Branch branch) {
  std::vector<TermIndex> out;
  const BranchShape s = shape(branch);
  const long order = t - s.order_offset;
  if (order < 0)
    return out;
  for (long h = order % 2; h <= order; h += 2) {
    const long numer = h + s.shift + x - source;
    if (numer % 2 != 0)
      continue;
    const long g = numer / 2;
    if (g < 0 || g > h)
      continue;
    const long chi_twice = t + source - x;
    if (chi_twice % 2 != 0)
      throw std::logic_error("admissible term with non-integer chi exponent");
    out.push_back({h, source, branch, g, chi_twice / 2});
  }
  return out;
}

/// (-1)^{h-g} ((T+h)/2)! / (((T-h)/2)! g! (h-g)!) with T = t - order_offset.
inline mpz_class term_coefficient(const TermIndex &term, long t) {
  const long order = t - shape(term.branch).order_offset;
  mpz_class c = multinomial({(order - term.h) / 2, term.g, term.h - term.g});
  return ((term.h - term.g) % 2 == 0) ? c : mpz_class(-c);
}

/// How the beta cross term's phase is written: e^{-i phi1} chi^e as printed in
/// the closed form, or e^{i phi2} chi^{e-1} as it appears before the inverse
/// transform. The two agree identically.
enum class BetaCrossPhase { printed, pre_inverse };

struct AmplitudeOptions {
  BetaCrossPhase beta_cross_phase = BetaCrossPhase::printed;
  /// Negates the alpha f_{t-1} cos family. Fault injection only.
  bool flip_alpha_cos_sign = false;
};

/// Largest |coefficient| bit length over all terms at step t.
inline long max_coefficient_bits(long t) {
  long best = 0;
  for (long order : {t, t - 1}) {
    if (order < 0)
      continue;
    for (long h = order % 2; h <= order; h += 2) {
      // the middle binomial maximizes the g-dependence
      best = std::max(best, bit_length(multinomial({(order - h) / 2, h / 2, h - h / 2})));
    }
  }
  return best;
}

/// Guard bits: 64 unless QWALK_PRECISION_GUARD_BITS says otherwise.
inline long guard_bits() {
  if (const char *env = std::getenv("QWALK_PRECISION_GUARD_BITS")) {
    char *end = nullptr;
    long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v >= 0)
      return v;
  }
  return 64;
}

/// Working precision for adaptive evaluation at step t.
inline long required_precision_bits(long t) { return std::max<long>(53, max_coefficient_bits(t) + guard_bits()); }

/// Evaluates amplitudes for one (init, params, t) with shared power tables.
template <class R> class Evaluator {
public:
  Evaluator(const PureState<R> &init, const CoinParams &params, long t, AmplitudeOptions opts = {})
      : init_(init), t_(t), opts_(opts), cos_(cos_of<R>(params.theta)), sin_(sin_of<R>(params.theta)),
        e1_(unit_phase<R>(params.phi1)), e2_(unit_phase<R>(params.phi2)), chi_(params.chi<R>()) {
    if (t < 0)
      throw std::invalid_argument("closed form: negative step count");
    cos_pow_.push_back(R(1));
    for (long i = 1; i <= t + 1; ++i)
      cos_pow_.push_back(cos_pow_.back() * cos_);
    chi_pow_.push_back(Cplx<R>(R(1)));
    for (long i = 1; i <= t + 1; ++i)
      chi_pow_.push_back(chi_pow_.back() * chi_);
    e1_conj_ = conj(e1_);
    chi_conj_ = conj(chi_);
  }

  CoinAmp<R> amplitude(long x) const {
    if (t_ == 0) {
      auto it = init_.amplitudes.find(x);
      return it == init_.amplitudes.end() ? CoinAmp<R>{} : it->second;
    }
    CompensatedSum<R> ar, ai, br, bi;
    for (const auto &[src, amp] : init_.amplitudes) {
      if (std::abs(x - src) > t_)
        continue;
      for (Branch b : all_branches) {
        const BranchShape s = shape(b);
        const Cplx<R> factor = branch_factor(b, s, amp);
        for (const auto &term : admissible_terms(x, t_, src, b)) {
          R coeff = from_mpz<R>(term_coefficient(term, t_)) * cos_pow_[static_cast<std::size_t>(term.h + s.cos_extra)];
          Cplx<R> v = factor * chi_pow_[static_cast<std::size_t>(term.chi_exponent)];
          v *= coeff;
          if (s.to_beta) {
            br.add(v.re);
            bi.add(v.im);
          } else {
            ar.add(v.re);
            ai.add(v.im);
          }
        }
      }
    }
    return {Cplx<R>(ar.get(), ai.get()), Cplx<R>(br.get(), bi.get())};
  }

private:
  Cplx<R> branch_factor(Branch b, const BranchShape &s, const CoinAmp<R> &amp) const {
    Cplx<R> f = s.from_beta ? amp.beta : amp.alpha;
    if (s.has_sin)
      f *= sin_;
    switch (b) {
    case Branch::alpha_sin:
      f = f * e1_;
      break;
    case Branch::beta_sin:
      f = opts_.beta_cross_phase == BetaCrossPhase::printed ? f * e1_conj_ : f * e2_ * chi_conj_;
      break;
    case Branch::beta_cos:
      f = -f;
      break;
    case Branch::alpha_cos:
      if (opts_.flip_alpha_cos_sign)
        f = -f;
      break;
    default:
      break;
    }
    return f;
  }

  const PureState<R> &init_;
  long t_;
  AmplitudeOptions opts_;
  R cos_, sin_;
  Cplx<R> e1_, e2_, chi_, e1_conj_, chi_conj_;
  std::vector<R> cos_pow_;
  std::vector<Cplx<R>> chi_pow_;
};

/// (alpha_x(t), beta_x(t)). t = 0 returns the initial amplitudes.
template <class R>
CoinAmp<R> amplitude(long x, long t, const PureState<R> &init, const CoinParams &params, AmplitudeOptions opts = {}) {
  return Evaluator<R>(init, params, t, opts).amplitude(x);
}

/// P(x, t) over [min support - t, max support + t], zeros included.
template <class R>
Distribution<R> distribution(long t, const PureState<R> &init, const CoinParams &params, AmplitudeOptions opts = {}) {
  Evaluator<R> ev(init, params, t, opts);
  Distribution<R> d;
  d.t = t;
  d.method = Method::closed_form;
  if constexpr (std::is_same_v<R, QSqrt2>)
    d.mode = ArithmeticMode::exact;
  else if constexpr (std::is_same_v<R, mp_real>)
    d.mode = ArithmeticMode::adaptive;
  for (long x = init.min_position() - t; x <= init.max_position() + t; ++x) {
    const auto a = ev.amplitude(x);
    d.probs[x] = norm(a.alpha) + norm(a.beta);
  }
  return d;
}

/// Adaptive-precision evaluation from an exact description of the input.
inline Distribution<double> distribution_adaptive(long t, const PureState<QSqrt2> &init, const CoinParams &params,
                                                  AmplitudeOptions opts = {}) {
  PrecisionScope scope(required_precision_bits(t));
  auto d = distribution(t, convert_state<mp_real>(init), params, opts).to_double();
  d.mode = ArithmeticMode::adaptive;
  return d;
}

/// Dispatches on the arithmetic mode; the result is always rounded to double.
inline Distribution<double> distribution_in_mode(long t, const PureState<QSqrt2> &init, const CoinParams &params,
                                                 ArithmeticMode mode, AmplitudeOptions opts = {}) {
  switch (mode) {
  case ArithmeticMode::exact: {
    if (!params.exact_eligible())
      throw std::invalid_argument("exact mode needs coin angles that are multiples of pi/4");
    auto d = distribution(t, init, params, opts).to_double();
    d.mode = ArithmeticMode::exact;
    return d;
  }
  case ArithmeticMode::adaptive:
    return distribution_adaptive(t, init, params, opts);
  case ArithmeticMode::double_precision: {
    auto d = distribution(t, convert_state<double>(init), params, opts);
    d.mode = ArithmeticMode::double_precision;
    return d;
  }
  }
  throw std::invalid_argument("unknown arithmetic mode");
}

} // namespace qwalk::closed_form
