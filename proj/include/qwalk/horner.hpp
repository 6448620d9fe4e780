#pragma once

// Fibonacci-Horner power decomposition for the momentum-space step operator
// U_k (degree 2) and the Hadamard superoperator L_{k,k'} (degree 4).

#include "qwalk/core.hpp"

#include <complex>
#include <vector>

namespace qwalk {

using cd = std::complex<double>;
using Mat4 = std::array<std::array<cd, 4>, 4>;

// ---------------------------------------------------------------------------
// small dense helpers

template <std::size_t N> using MatN = std::array<std::array<cd, N>, N>;

template <std::size_t N> MatN<N> identity() {
  MatN<N> m{};
  for (std::size_t i = 0; i < N; ++i)
    m[i][i] = 1.0;
  return m;
}

template <std::size_t N> MatN<N> matmul(const MatN<N> &a, const MatN<N> &b) {
  MatN<N> c{};
  for (std::size_t i = 0; i < N; ++i)
    for (std::size_t k = 0; k < N; ++k)
      for (std::size_t j = 0; j < N; ++j)
        c[i][j] += a[i][k] * b[k][j];
  return c;
}

template <std::size_t N> MatN<N> axpy(cd s, const MatN<N> &x, const MatN<N> &y) {
  MatN<N> r = y;
  for (std::size_t i = 0; i < N; ++i)
    for (std::size_t j = 0; j < N; ++j)
      r[i][j] += s * x[i][j];
  return r;
}

template <std::size_t N> double max_abs_diff(const MatN<N> &a, const MatN<N> &b) {
  double m = 0;
  for (std::size_t i = 0; i < N; ++i)
    for (std::size_t j = 0; j < N; ++j)
      m = std::max(m, std::abs(a[i][j] - b[i][j]));
  return m;
}

/// A^t by t-1 multiplications.
template <std::size_t N> MatN<N> repeated_power(const MatN<N> &a, long t) {
  MatN<N> r = identity<N>();
  for (long i = 0; i < t; ++i)
    r = matmul(r, a);
  return r;
}

// ---------------------------------------------------------------------------
// momentum-space step operator

/// U_k = diag(e^{-ik}, e^{ik}) C.
inline Mat2<cd> u_k(const CoinParams &params, double k) {
  auto c = coin_matrix_complex(params);
  const cd left = std::polar(1.0, -k), right = std::polar(1.0, k);
  return {{{left * c[0][0], left * c[0][1]}, {right * c[1][0], right * c[1][1]}}};
}

// ---------------------------------------------------------------------------
// characteristic polynomials

/// lambda^2 - c0 lambda - c1
template <class T> struct CharPolyQuad {
  T c0;
  T c1;
};

/// lambda^4 - c0 lambda^3 - c1 lambda^2 - c2 lambda - c3
template <class T> struct CharPolyQuartic {
  std::array<T, 4> c;
};

/// c0 = tr U_k = cos(theta)(e^{-ik} - chi e^{ik}),  c1 = -det U_k = chi.
inline CharPolyQuad<cd> quad_coeffs(const CoinParams &params, double k) {
  const cd chi = to_complex(params.chi<double>());
  const double c = cos_of<double>(params.theta);
  return {c * (std::polar(1.0, -k) - chi * std::polar(1.0, k)), chi};
}

/// Coefficients of the Hadamard superoperator's characteristic polynomial.
inline CharPolyQuartic<double> quartic_coeffs(double k, double kp) {
  const double cd_ = std::cos(k - kp), cs = std::cos(k + kp);
  return {{cd_ - cs, 2.0 * cd_ * cs, cd_ - cs, -1.0}};
}

// ---------------------------------------------------------------------------
// f_t sequences

/// Compositions h0 + 2h1 + 3h2 + 4h3 = m, in descending lexicographic order.
inline std::vector<std::array<long, 4>> quartic_partitions(long m) {
  std::vector<std::array<long, 4>> out;
  if (m < 0)
    return out;
  for (long h0 = m; h0 >= 0; --h0)
    for (long h1 = (m - h0) / 2; h1 >= 0; --h1)
      for (long h2 = (m - h0 - 2 * h1) / 3; h2 >= 0; --h2) {
        long rest = m - h0 - 2 * h1 - 3 * h2;
        if (rest % 4 == 0)
          out.push_back({h0, h1, h2, rest / 4});
      }
  return out;
}

namespace detail {
template <class T> T ipow(const T &base, long e) {
  T r = from_mpz<T>(1);
  for (long i = 0; i < e; ++i)
    r = r * base;
  return r;
}
} // namespace detail

/// f_t = sum_{h0 + 2h1 = t} (h0+h1)!/(h0! h1!) c0^h0 c1^h1; zero for t < 0.
template <class T> T f_quad(const CharPolyQuad<T> &p, long t) {
  if (t < 0)
    return from_mpz<T>(0);
  T total = from_mpz<T>(0);
  for (long h1 = 0; 2 * h1 <= t; ++h1) {
    long h0 = t - 2 * h1;
    total = total + from_mpz<T>(multinomial({h0, h1})) * detail::ipow(p.c0, h0) * detail::ipow(p.c1, h1);
  }
  return total;
}

/// f_t = sum over h0+2h1+3h2+4h3 = t of the multinomial times c^h; zero for t < 0.
template <class T> T f_quartic(const CharPolyQuartic<T> &p, long t) {
  T total = from_mpz<T>(0);
  for (const auto &h : quartic_partitions(t)) {
    T term = from_mpz<T>(multinomial({h[0], h[1], h[2], h[3]}));
    for (int i = 0; i < 4; ++i)
      term = term * detail::ipow(p.c[static_cast<std::size_t>(i)], h[static_cast<std::size_t>(i)]);
    total = total + term;
  }
  return total;
}

/// Values f_{-(d-1)}, ..., f_{t_max} generated by the linear recurrence
/// f_t = sum_j c_j f_{t-1-j}, with f_0 = 1 and f_j = 0 for j < 0.
template <class T> class HornerSequence {
public:
  static HornerSequence quad(const CharPolyQuad<T> &p, long t_max) { return HornerSequence({p.c0, p.c1}, t_max); }
  static HornerSequence quartic(const CharPolyQuartic<T> &p, long t_max) {
    return HornerSequence({p.c[0], p.c[1], p.c[2], p.c[3]}, t_max);
  }

  /// f_t for -degree < t <= t_max; zero below.
  T operator()(long t) const {
    if (t < 0)
      return from_mpz<T>(0);
    if (t > t_max_)
      throw std::out_of_range("HornerSequence: index beyond cached range");
    return values_[static_cast<std::size_t>(t)];
  }
  long t_max() const { return t_max_; }
  std::size_t degree() const { return coeffs_.size(); }

private:
  HornerSequence(std::vector<T> coeffs, long t_max) : coeffs_(std::move(coeffs)), t_max_(t_max) {
    values_.reserve(static_cast<std::size_t>(std::max<long>(t_max + 1, 0)));
    for (long t = 0; t <= t_max; ++t) {
      if (t == 0) {
        values_.push_back(from_mpz<T>(1));
        continue;
      }
      T v = from_mpz<T>(0);
      for (std::size_t j = 0; j < coeffs_.size(); ++j) {
        long idx = t - 1 - static_cast<long>(j);
        if (idx >= 0)
          v = v + coeffs_[j] * values_[static_cast<std::size_t>(idx)];
      }
      values_.push_back(v);
    }
  }

  std::vector<T> coeffs_;
  long t_max_;
  std::vector<T> values_;
};

// ---------------------------------------------------------------------------
// powers

struct HornerOptions {
  /// Boundary value for f_{-1}. Anything other than 0 is a deliberate fault.
  cd f_negative_one = 0.0;
};

/// U_k^t = f_t I + f_{t-1} (U_k - c0 I).
inline Mat2<cd> u_k_power(const CoinParams &params, double k, long t, const HornerOptions &opts = {}) {
  if (t < 0)
    throw std::invalid_argument("u_k_power: negative exponent");
  const auto u = u_k(params, k);
  const auto p = quad_coeffs(params, k);
  const auto seq = HornerSequence<cd>::quad(p, t);
  const cd ft = seq(t);
  const cd ft1 = t >= 1 ? seq(t - 1) : opts.f_negative_one;
  Mat2<cd> r;
  r[0][0] = ft + ft1 * (u[0][0] - p.c0);
  r[0][1] = ft1 * u[0][1];
  r[1][0] = ft1 * u[1][0];
  r[1][1] = ft + ft1 * (u[1][1] - p.c0);
  return r;
}

/// Hadamard superoperator O -> U_k O U_{k'}^dagger acting on Pauli components.
inline Mat4 superop(double k, double kp) {
  const double cdf = std::cos(k - kp), sdf = std::sin(k - kp);
  const double cs = std::cos(k + kp), ss = std::sin(k + kp);
  const cd i(0, 1);
  Mat4 m{};
  m[0][0] = cdf;
  m[0][1] = -i * sdf;
  m[1][2] = ss;
  m[1][3] = cs;
  m[2][2] = -cs;
  m[2][3] = ss;
  m[3][0] = -i * sdf;
  m[3][1] = cdf;
  return m;
}

/// {L0, L1, L2, L3}: L0 = I, L_j = L L_{j-1} - c_{j-1} I.
inline std::array<Mat4, 4> horner_basis4(double k, double kp) {
  const Mat4 l = superop(k, kp);
  const auto p = quartic_coeffs(k, kp);
  const Mat4 id = identity<4>();
  std::array<Mat4, 4> basis;
  basis[0] = id;
  for (std::size_t j = 1; j < 4; ++j)
    basis[j] = axpy(cd(-p.c[j - 1]), id, matmul(l, basis[j - 1]));
  return basis;
}

/// L^t = f_t L0 + f_{t-1} L1 + f_{t-2} L2 + f_{t-3} L3.
inline Mat4 superop_power(double k, double kp, long t) {
  if (t < 0)
    throw std::invalid_argument("superop_power: negative exponent");
  const auto basis = horner_basis4(k, kp);
  const auto seq = HornerSequence<double>::quartic(quartic_coeffs(k, kp), t);
  Mat4 r{};
  for (std::size_t j = 0; j < 4; ++j)
    r = axpy(cd(seq(t - static_cast<long>(j))), basis[j], r);
  return r;
}

} // namespace qwalk
