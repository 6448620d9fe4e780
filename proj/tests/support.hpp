#pragma once

#include "qwalk/qwalk.hpp"

#include <gtest/gtest.h>

#include <numbers>
#include <random>

namespace qwalk::fixtures {

inline QSqrt2 inv_sqrt2() { return QSqrt2(mpq_class(0), mpq_class(1, 2)); }

/// |0> (x) (|0> + i|1>)/sqrt2 at the origin.
inline PureState<QSqrt2> fig1_state() {
  return PureState<QSqrt2>::localized(0, Cplx<QSqrt2>(inv_sqrt2()), Cplx<QSqrt2>(QSqrt2(0), inv_sqrt2()));
}

inline PureState<double> fig1_state_double() { return convert_state<double>(fig1_state()); }

inline CoinParams coin(double theta, double phi1, double phi2) {
  return {Angle::radians(theta), Angle::radians(phi1), Angle::radians(phi2)};
}

class Rng {
public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}
  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(gen_); }
  long integer(long lo, long hi) { return std::uniform_int_distribution<long>(lo, hi)(gen_); }
  CoinParams coin() {
    return fixtures::coin(uniform(0, 2 * std::numbers::pi), uniform(0, std::numbers::pi), uniform(0, std::numbers::pi));
  }
  PureState<double> state(long lo, long hi) {
    PureState<double> s;
    for (long x = lo; x <= hi; ++x)
      s.amplitudes[x] = {Cplx<double>(uniform(-1, 1), uniform(-1, 1)), Cplx<double>(uniform(-1, 1), uniform(-1, 1))};
    const double n = std::sqrt(s.norm_squared());
    for (auto &[x, a] : s.amplitudes) {
      a.alpha = a.alpha * (1 / n);
      a.beta = a.beta * (1 / n);
    }
    return s;
  }
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

/// Distribution with the given (position, probability) entries.
inline Distribution<double> dist(std::initializer_list<std::pair<long, double>> entries, long t = 0) {
  Distribution<double> d;
  d.t = t;
  for (const auto &[x, p] : entries)
    d.probs[x] = p;
  return d;
}

/// Pauli matrices sigma_0..sigma_3.
inline std::array<Mat2<cd>, 4> pauli_matrices() {
  const cd i(0, 1);
  return {{{{{1.0, 0.0}, {0.0, 1.0}}}, {{{0.0, 1.0}, {1.0, 0.0}}}, {{{0.0, -i}, {i, 0.0}}}, {{{1.0, 0.0}, {0.0, -1.0}}}}};
}

inline Mat2<cd> mul(const Mat2<cd> &a, const Mat2<cd> &b) {
  Mat2<cd> c{};
  for (int r = 0; r < 2; ++r)
    for (int s = 0; s < 2; ++s)
      c[r][s] = a[r][0] * b[0][s] + a[r][1] * b[1][s];
  return c;
}

inline Mat2<cd> dagger(const Mat2<cd> &a) {
  return {{{std::conj(a[0][0]), std::conj(a[1][0])}, {std::conj(a[0][1]), std::conj(a[1][1])}}};
}

inline double dist2(const Mat2<cd> &a, const Mat2<cd> &b) {
  double m = 0;
  for (int r = 0; r < 2; ++r)
    for (int s = 0; s < 2; ++s)
      m = std::max(m, std::abs(a[r][s] - b[r][s]));
  return m;
}

inline Mat2<cd> from_pauli(const std::array<cd, 4> &r) {
  const auto s = pauli_matrices();
  Mat2<cd> m{};
  for (std::size_t k = 0; k < 4; ++k)
    for (int a = 0; a < 2; ++a)
      for (int b = 0; b < 2; ++b)
        m[a][b] += r[k] * s[k][a][b];
  return m;
}

/// Pauli components of an arbitrary 2x2 matrix: r_k = tr(sigma_k M)/2.
inline std::array<cd, 4> to_pauli(const Mat2<cd> &m) {
  const auto s = pauli_matrices();
  std::array<cd, 4> r{};
  for (std::size_t k = 0; k < 4; ++k) {
    const auto p = mul(s[k], m);
    r[k] = (p[0][0] + p[1][1]) / 2.0;
  }
  return r;
}

} // namespace qwalk::fixtures

namespace qwalk::fixtures {

/// rho_t = U^t rho_0 U^t^dagger on a dense (2t+1) x 2 space, then the
/// position marginal. Independent of the map-based simulator.
inline std::map<long, double> dense_mixed_distribution(const std::array<double, 4> &r, const CoinParams &params, long t) {
  const long sites = 2 * t + 1, dim = 2 * sites;
  auto idx = [&](long x, int c) { return static_cast<std::size_t>(2 * (x + t) + c); };
  std::vector<std::vector<cd>> rho(static_cast<std::size_t>(dim), std::vector<cd>(static_cast<std::size_t>(dim), 0.0));
  const auto r0 = from_pauli({r[0], r[1], r[2], r[3]});
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b)
      rho[idx(0, a)][idx(0, b)] = r0[a][b];
  std::vector<std::vector<cd>> u(static_cast<std::size_t>(dim), std::vector<cd>(static_cast<std::size_t>(dim), 0.0));
  const auto c = coin_matrix_complex(params);
  for (long x = -t; x <= t; ++x)
    for (int b = 0; b < 2; ++b) {
      if (x + 1 <= t)
        u[idx(x + 1, 0)][idx(x, b)] = c[0][b];
      if (x - 1 >= -t)
        u[idx(x - 1, 1)][idx(x, b)] = c[1][b];
    }
  auto product = [&](const auto &a, const auto &b, bool dag_b) {
    std::vector<std::vector<cd>> out(a.size(), std::vector<cd>(a.size(), 0.0));
    for (std::size_t i = 0; i < a.size(); ++i)
      for (std::size_t k = 0; k < a.size(); ++k) {
        if (a[i][k] == 0.0)
          continue;
        for (std::size_t j = 0; j < a.size(); ++j)
          out[i][j] += a[i][k] * (dag_b ? std::conj(b[j][k]) : b[k][j]);
      }
    return out;
  };
  for (long s = 0; s < t; ++s)
    rho = product(product(u, rho, false), u, true);
  std::map<long, double> p;
  for (long x = -t; x <= t; ++x)
    p[x] = (rho[idx(x, 0)][idx(x, 0)] + rho[idx(x, 1)][idx(x, 1)]).real();
  return p;
}

/// Characteristic polynomial det(lambda I - A) = lambda^4 + a1 lambda^3 + ... + a4
/// by Faddeev-LeVerrier; returns (a1, a2, a3, a4).
inline std::array<cd, 4> faddeev_leverrier(const Mat4 &a) {
  Mat4 m{};
  std::array<cd, 4> coeffs{};
  cd prev = 1.0;
  for (std::size_t k = 1; k <= 4; ++k) {
    Mat4 next = matmul(a, m);
    for (std::size_t i = 0; i < 4; ++i)
      next[i][i] += prev;
    m = next;
    const Mat4 am = matmul(a, m);
    cd tr = 0;
    for (std::size_t i = 0; i < 4; ++i)
      tr += am[i][i];
    prev = -tr / static_cast<double>(k);
    coeffs[k - 1] = prev;
  }
  return coeffs;
}

} // namespace qwalk::fixtures
