#pragma once

// Scalar types shared by every evaluation path:
//   double      plain binary64
//   mp_real     MPFR float carrying its own precision (adaptive mode)
//   QSqrt2      exact a + b*sqrt(2) with rational a, b (exact mode)
//   Cplx<R>     complex numbers over any of the above

#include <gmpxx.h>
#include <mpfr.h>

#include <cmath>
#include <compare>
#include <complex>
#include <cstdint>
#include <ostream>
#include <span>
#include <stdexcept>
#include <string>
#include <type_traits>
#include <utility>

namespace qwalk {

enum class ArithmeticMode { exact, adaptive, double_precision };

inline std::string to_string(ArithmeticMode m) {
  switch (m) {
  case ArithmeticMode::exact:
    return "exact";
  case ArithmeticMode::adaptive:
    return "adaptive";
  case ArithmeticMode::double_precision:
    return "double";
  }
  return "unknown";
}

inline ArithmeticMode parse_mode(const std::string &s) {
  if (s == "exact")
    return ArithmeticMode::exact;
  if (s == "adaptive")
    return ArithmeticMode::adaptive;
  if (s == "double")
    return ArithmeticMode::double_precision;
  throw std::invalid_argument("unknown arithmetic mode '" + s + "'");
}

// ---------------------------------------------------------------------------
// mp_real

namespace detail {
inline mpfr_prec_t &thread_working_precision() {
  thread_local mpfr_prec_t prec = 128;
  return prec;
}
} // namespace detail

/// Binary precision (bits) used for newly created mp_real values on this thread.
inline mpfr_prec_t working_precision() { return detail::thread_working_precision(); }

/// Sets the thread's working precision for its lifetime, restoring on exit.
class PrecisionScope {
public:
  explicit PrecisionScope(mpfr_prec_t bits) : saved_(working_precision()) {
    if (bits < MPFR_PREC_MIN)
      bits = MPFR_PREC_MIN;
    detail::thread_working_precision() = bits;
  }
  ~PrecisionScope() { detail::thread_working_precision() = saved_; }
  PrecisionScope(const PrecisionScope &) = delete;
  PrecisionScope &operator=(const PrecisionScope &) = delete;

private:
  mpfr_prec_t saved_;
};

/// Arbitrary precision real. Each value keeps the precision it was created
/// with; binary operations round to the larger operand precision.
class mp_real {
public:
  mp_real() { init(working_precision()); mpfr_set_zero(v_, 1); }
  mp_real(int x) : mp_real(static_cast<long>(x)) {}
  mp_real(long x) { init(working_precision()); mpfr_set_si(v_, x, MPFR_RNDN); }
  mp_real(double x) { init(working_precision()); mpfr_set_d(v_, x, MPFR_RNDN); }
  explicit mp_real(const mpz_class &z) { init(working_precision()); mpfr_set_z(v_, z.get_mpz_t(), MPFR_RNDN); }
  explicit mp_real(const mpq_class &q) { init(working_precision()); mpfr_set_q(v_, q.get_mpq_t(), MPFR_RNDN); }

  mp_real(const mp_real &o) { init(mpfr_get_prec(o.v_)); mpfr_set(v_, o.v_, MPFR_RNDN); }
  mp_real(mp_real &&o) noexcept {
    init(MPFR_PREC_MIN);
    mpfr_swap(v_, o.v_);
  }
  mp_real &operator=(const mp_real &o) {
    if (this != &o) {
      mpfr_set_prec(v_, mpfr_get_prec(o.v_));
      mpfr_set(v_, o.v_, MPFR_RNDN);
    }
    return *this;
  }
  mp_real &operator=(mp_real &&o) noexcept {
    mpfr_swap(v_, o.v_);
    return *this;
  }
  ~mp_real() { mpfr_clear(v_); }

  mpfr_prec_t precision() const { return mpfr_get_prec(v_); }
  double to_double() const { return mpfr_get_d(v_, MPFR_RNDN); }
  mpfr_srcptr get() const { return v_; }
  mpfr_ptr get() { return v_; }

  static mp_real pi() {
    mp_real r;
    mpfr_const_pi(r.v_, MPFR_RNDN);
    return r;
  }

  mp_real &operator+=(const mp_real &o) { widen(o); mpfr_add(v_, v_, o.v_, MPFR_RNDN); return *this; }
  mp_real &operator-=(const mp_real &o) { widen(o); mpfr_sub(v_, v_, o.v_, MPFR_RNDN); return *this; }
  mp_real &operator*=(const mp_real &o) { widen(o); mpfr_mul(v_, v_, o.v_, MPFR_RNDN); return *this; }
  mp_real &operator/=(const mp_real &o) { widen(o); mpfr_div(v_, v_, o.v_, MPFR_RNDN); return *this; }

  friend mp_real operator+(mp_real a, const mp_real &b) { return a += b; }
  friend mp_real operator-(mp_real a, const mp_real &b) { return a -= b; }
  friend mp_real operator*(mp_real a, const mp_real &b) { return a *= b; }
  friend mp_real operator/(mp_real a, const mp_real &b) { return a /= b; }
  friend mp_real operator-(mp_real a) {
    mpfr_neg(a.v_, a.v_, MPFR_RNDN);
    return a;
  }

  friend bool operator==(const mp_real &a, const mp_real &b) { return mpfr_equal_p(a.v_, b.v_) != 0; }
  friend bool operator<(const mp_real &a, const mp_real &b) { return mpfr_less_p(a.v_, b.v_) != 0; }
  friend bool operator>(const mp_real &a, const mp_real &b) { return b < a; }
  friend bool operator<=(const mp_real &a, const mp_real &b) { return !(b < a); }
  friend bool operator>=(const mp_real &a, const mp_real &b) { return !(a < b); }

  friend mp_real cos(const mp_real &x) { mp_real r(x); mpfr_cos(r.v_, x.v_, MPFR_RNDN); return r; }
  friend mp_real sin(const mp_real &x) { mp_real r(x); mpfr_sin(r.v_, x.v_, MPFR_RNDN); return r; }
  friend mp_real sqrt(const mp_real &x) { mp_real r(x); mpfr_sqrt(r.v_, x.v_, MPFR_RNDN); return r; }
  friend mp_real abs(const mp_real &x) { mp_real r(x); mpfr_abs(r.v_, x.v_, MPFR_RNDN); return r; }

  friend std::ostream &operator<<(std::ostream &os, const mp_real &x) { return os << x.to_double(); }

private:
  void init(mpfr_prec_t p) { mpfr_init2(v_, p); }
  void widen(const mp_real &o) {
    if (mpfr_get_prec(o.v_) > mpfr_get_prec(v_))
      mpfr_prec_round(v_, mpfr_get_prec(o.v_), MPFR_RNDN);
  }
  mpfr_t v_;
};

// ---------------------------------------------------------------------------
// QSqrt2: the field Q(sqrt 2)

class QSqrt2 {
public:
  QSqrt2() = default;
  QSqrt2(int a) : a_(a) {}
  QSqrt2(long a) : a_(a) {}
  QSqrt2(mpq_class a) : a_(std::move(a)) { a_.canonicalize(); }
  QSqrt2(mpq_class a, mpq_class b) : a_(std::move(a)), b_(std::move(b)) {
    a_.canonicalize();
    b_.canonicalize();
  }
  /// Exact value of a binary64 (no rounding: every finite double is rational).
  static QSqrt2 from_double(double x) {
    if (!std::isfinite(x))
      throw std::invalid_argument("non-finite value cannot be represented exactly");
    return QSqrt2(mpq_class(x));
  }
  static QSqrt2 sqrt2() { return QSqrt2(0, 1); }

  const mpq_class &rational_part() const { return a_; }
  const mpq_class &sqrt2_part() const { return b_; }
  bool is_rational() const { return b_ == 0; }

  int sign() const {
    int sa = sgn(a_), sb = sgn(b_);
    if (sb == 0)
      return sa;
    if (sa == 0)
      return sb;
    if (sa == sb)
      return sa;
    // a and b*sqrt2 have opposite signs: compare a^2 with 2 b^2
    mpq_class lhs = a_ * a_, rhs = 2 * b_ * b_;
    int c = cmp(lhs, rhs);
    return c == 0 ? 0 : (c > 0 ? sa : sb);
  }

  double to_double() const {
    return a_.get_d() + b_.get_d() * std::sqrt(2.0);
  }
  mp_real to_mp_real() const {
    mp_real two(2L);
    return mp_real(a_) + mp_real(b_) * sqrt(two);
  }

  QSqrt2 &operator+=(const QSqrt2 &o) { a_ += o.a_; b_ += o.b_; return *this; }
  QSqrt2 &operator-=(const QSqrt2 &o) { a_ -= o.a_; b_ -= o.b_; return *this; }
  QSqrt2 &operator*=(const QSqrt2 &o) {
    mpq_class a = a_ * o.a_ + 2 * b_ * o.b_;
    mpq_class b = a_ * o.b_ + b_ * o.a_;
    a_ = std::move(a);
    b_ = std::move(b);
    return *this;
  }
  QSqrt2 &operator/=(const QSqrt2 &o) {
    mpq_class n = o.a_ * o.a_ - 2 * o.b_ * o.b_;
    if (n == 0)
      throw std::domain_error("QSqrt2 division by zero");
    *this *= QSqrt2(o.a_ / n, -o.b_ / n);
    return *this;
  }
  friend QSqrt2 operator+(QSqrt2 a, const QSqrt2 &b) { return a += b; }
  friend QSqrt2 operator-(QSqrt2 a, const QSqrt2 &b) { return a -= b; }
  friend QSqrt2 operator*(QSqrt2 a, const QSqrt2 &b) { return a *= b; }
  friend QSqrt2 operator/(QSqrt2 a, const QSqrt2 &b) { return a /= b; }
  friend QSqrt2 operator-(QSqrt2 a) {
    a.a_ = -a.a_;
    a.b_ = -a.b_;
    return a;
  }

  friend bool operator==(const QSqrt2 &x, const QSqrt2 &y) { return x.a_ == y.a_ && x.b_ == y.b_; }
  friend bool operator<(const QSqrt2 &x, const QSqrt2 &y) { return (x - y).sign() < 0; }
  friend bool operator>(const QSqrt2 &x, const QSqrt2 &y) { return y < x; }
  friend bool operator<=(const QSqrt2 &x, const QSqrt2 &y) { return !(y < x); }
  friend bool operator>=(const QSqrt2 &x, const QSqrt2 &y) { return !(x < y); }

  friend QSqrt2 abs(const QSqrt2 &x) { return x.sign() < 0 ? -x : x; }

  friend std::ostream &operator<<(std::ostream &os, const QSqrt2 &x) {
    os << x.a_.get_str();
    if (x.b_ != 0)
      os << (sgn(x.b_) < 0 ? " - " : " + ") << mpq_class(abs(x.b_)).get_str() << "*sqrt2";
    return os;
  }

private:
  mpq_class a_{0};
  mpq_class b_{0};
};

// ---------------------------------------------------------------------------
// Cplx<R>

template <class R> struct Cplx {
  R re{};
  R im{};

  Cplx() : re(0), im(0) {}
  Cplx(R r) : re(std::move(r)), im(0) {}
  Cplx(R r, R i) : re(std::move(r)), im(std::move(i)) {}

  static Cplx i() { return Cplx(R(0), R(1)); }

  Cplx &operator+=(const Cplx &o) { re += o.re; im += o.im; return *this; }
  Cplx &operator-=(const Cplx &o) { re -= o.re; im -= o.im; return *this; }
  Cplx &operator*=(const Cplx &o) {
    R r = re * o.re - im * o.im;
    R i = re * o.im + im * o.re;
    re = std::move(r);
    im = std::move(i);
    return *this;
  }
  Cplx &operator*=(const R &s) { re *= s; im *= s; return *this; }

  friend Cplx operator+(Cplx a, const Cplx &b) { return a += b; }
  friend Cplx operator-(Cplx a, const Cplx &b) { return a -= b; }
  friend Cplx operator*(Cplx a, const Cplx &b) { return a *= b; }
  friend Cplx operator*(Cplx a, const R &s) { return a *= s; }
  friend Cplx operator*(const R &s, Cplx a) { return a *= s; }
  friend Cplx operator-(Cplx a) { return Cplx(-a.re, -a.im); }
  friend bool operator==(const Cplx &a, const Cplx &b) { return a.re == b.re && a.im == b.im; }

  friend Cplx conj(const Cplx &a) { return Cplx(a.re, -a.im); }
  /// |z|^2
  friend R norm(const Cplx &a) { return a.re * a.re + a.im * a.im; }
};

// ---------------------------------------------------------------------------
// conversions

inline double to_double(double x) { return x; }
inline double to_double(const mp_real &x) { return x.to_double(); }
inline double to_double(const QSqrt2 &x) { return x.to_double(); }
inline double to_double(const mpq_class &x) { return x.get_d(); }
template <class R> std::complex<double> to_complex(const Cplx<R> &z) {
  return {to_double(z.re), to_double(z.im)};
}

template <class T> struct is_cplx : std::false_type {};
template <class R> struct is_cplx<Cplx<R>> : std::true_type {};
template <class T> struct is_std_complex : std::false_type {};
template <class R> struct is_std_complex<std::complex<R>> : std::true_type {};

/// Embeds a big integer into any scalar ring used by the library.
template <class T> T from_mpz(const mpz_class &z) {
  if constexpr (std::is_same_v<T, double>)
    return z.get_d();
  else if constexpr (std::is_same_v<T, mp_real>)
    return mp_real(z);
  else if constexpr (std::is_same_v<T, QSqrt2>)
    return QSqrt2(mpq_class(z));
  else if constexpr (std::is_same_v<T, mpq_class>)
    return mpq_class(z);
  else if constexpr (is_std_complex<T>::value)
    return T(from_mpz<typename T::value_type>(z), 0);
  else if constexpr (is_cplx<T>::value)
    return T(from_mpz<decltype(T{}.re)>(z));
  else
    static_assert(!sizeof(T), "unsupported scalar");
}

/// Embeds a double (exactly, where the target is exact).
template <class R> R from_double(double x) {
  if constexpr (std::is_same_v<R, double>)
    return x;
  else if constexpr (std::is_same_v<R, mp_real>)
    return mp_real(x);
  else if constexpr (std::is_same_v<R, QSqrt2>)
    return QSqrt2::from_double(x);
  else
    static_assert(!sizeof(R), "unsupported scalar");
}

/// Converts an exact Q(sqrt2) value into R (rounding when R is a float type).
template <class R> R from_qsqrt2(const QSqrt2 &x) {
  if constexpr (std::is_same_v<R, double>)
    return x.to_double();
  else if constexpr (std::is_same_v<R, mp_real>)
    return x.to_mp_real();
  else if constexpr (std::is_same_v<R, QSqrt2>)
    return x;
  else
    static_assert(!sizeof(R), "unsupported scalar");
}
template <class R> Cplx<R> from_qsqrt2(const Cplx<QSqrt2> &z) {
  return Cplx<R>(from_qsqrt2<R>(z.re), from_qsqrt2<R>(z.im));
}

template <class R> inline constexpr bool is_exact_v = std::is_same_v<R, QSqrt2> || std::is_same_v<R, mpq_class>;

// ---------------------------------------------------------------------------
// summation

/// Neumaier-compensated accumulator for double; plain accumulation otherwise
/// (exact types need no compensation, mp_real runs with guard bits).
template <class R> class CompensatedSum {
public:
  void add(const R &x) { sum_ += x; }
  R get() const { return sum_; }

private:
  R sum_{0};
};

template <> class CompensatedSum<double> {
public:
  void add(double x) {
    double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x))
      c_ += (sum_ - t) + x;
    else
      c_ += (x - t) + sum_;
    sum_ = t;
  }
  double get() const { return sum_ + c_; }

private:
  double sum_ = 0.0;
  double c_ = 0.0;
};

// ---------------------------------------------------------------------------
// combinatorics

inline mpz_class binomial(long n, long k) {
  if (n < 0 || k < 0 || k > n)
    return 0;
  mpz_class r;
  mpz_bin_uiui(r.get_mpz_t(), static_cast<unsigned long>(n), static_cast<unsigned long>(k));
  return r;
}

/// (k_1 + ... + k_m)! / (k_1! ... k_m!), zero if any part is negative.
inline mpz_class multinomial(std::span<const long> parts) {
  mpz_class r = 1;
  long total = 0;
  for (long k : parts) {
    if (k < 0)
      return 0;
    total += k;
    r *= binomial(total, k);
  }
  return r;
}
inline mpz_class multinomial(std::initializer_list<long> parts) {
  return multinomial(std::span<const long>(parts.begin(), parts.size()));
}

/// Bits needed to represent |z| (0 for z == 0).
inline long bit_length(const mpz_class &z) {
  return z == 0 ? 0 : static_cast<long>(mpz_sizeinbase(z.get_mpz_t(), 2));
}

} // namespace qwalk
