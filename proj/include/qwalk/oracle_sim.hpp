#pragma once

// Direct position-space evolution U = S C. This is the reference every other
// method is checked against, so it is kept as plain as possible.

#include "qwalk/core.hpp"

#include <cmath>

namespace qwalk::oracle {

/// One application of U = S C: coin component 0 moves right, component 1 left.
template <class R> PureState<R> step(const PureState<R> &state, const Mat2<Cplx<R>> &coin) {
  PureState<R> out;
  for (const auto &[x, a] : state.amplitudes) {
    out.amplitudes[x + 1].alpha += coin[0][0] * a.alpha + coin[0][1] * a.beta;
    out.amplitudes[x - 1].beta += coin[1][0] * a.alpha + coin[1][1] * a.beta;
  }
  return out;
}

template <class R> PureState<R> step(const PureState<R> &state, const CoinParams &params) {
  return step(state, coin_matrix<R>(params));
}

template <class R> PureState<R> evolve_pure(const PureState<R> &init, const CoinParams &params, long t) {
  if (t < 0)
    throw std::invalid_argument("evolve_pure: negative step count");
  const auto coin = coin_matrix<R>(params);
  PureState<R> s = init;
  for (long i = 0; i < t; ++i)
    s = step(s, coin);
  return s;
}

/// P(x) = |alpha_x|^2 + |beta_x|^2 on every position between the extreme keys.
template <class R> Distribution<R> distribution_of(const PureState<R> &state, long t = 0) {
  Distribution<R> d;
  d.t = t;
  d.method = Method::direct;
  for (const auto &[x, a] : state.amplitudes)
    d.probs[x] = norm(a.alpha) + norm(a.beta);
  if (!state.amplitudes.empty())
    d.fill_interval(state.min_position(), state.max_position());
  return d;
}

/// Evolves the two coin basis columns from the origin and contracts them with
/// rho: P(y) = sum_{a,b} rho_ab <psi_b|P_y|psi_a>. Exact in every scalar type.
template <class R>
Distribution<R> evolve_density_columns(const MixedLocalizedState<R> &rho, const CoinParams &params, long t) {
  const Cplx<R> one(R(1)), zero(R(0));
  std::array<PureState<R>, 2> columns = {evolve_pure(PureState<R>::localized(0, one, zero), params, t),
                                         evolve_pure(PureState<R>::localized(0, zero, one), params, t)};
  Distribution<R> d;
  d.t = t;
  d.method = Method::direct;
  for (long y = -t; y <= t; ++y) {
    Cplx<R> acc;
    for (int a = 0; a < 2; ++a) {
      auto ia = columns[a].amplitudes.find(y);
      if (ia == columns[a].amplitudes.end())
        continue;
      for (int b = 0; b < 2; ++b) {
        auto ib = columns[b].amplitudes.find(y);
        if (ib == columns[b].amplitudes.end())
          continue;
        Cplx<R> overlap = conj(ib->second.alpha) * ia->second.alpha + conj(ib->second.beta) * ia->second.beta;
        acc += rho.rho[a][b] * overlap;
      }
    }
    d.probs[y] = acc.re;
  }
  return d;
}

namespace detail {
struct EigenBranch {
  double weight;
  std::complex<double> a;
  std::complex<double> b;
};

/// Spectral decomposition of a 2x2 density matrix via its Bloch vector.
/// Degenerate spectrum falls back to the computational basis.
inline std::array<EigenBranch, 2> coin_eigenbranches(const std::array<double, 4> &r) {
  double n = std::sqrt(r[1] * r[1] + r[2] * r[2] + r[3] * r[3]);
  if (n < 1e-15)
    return {{{r[0], 1.0, 0.0}, {r[0], 0.0, 1.0}}};
  double nx = r[1] / n, ny = r[2] / n, nz = r[3] / n;
  std::complex<double> a, b;
  if (nz >= 0) {
    a = 1.0 + nz;
    b = {nx, ny};
  } else {
    a = {nx, -ny};
    b = 1.0 - nz;
  }
  double len = std::sqrt(std::norm(a) + std::norm(b));
  a /= len;
  b /= len;
  return {{{r[0] + n, a, b}, {r[0] - n, -std::conj(b), std::conj(a)}}};
}
} // namespace detail

/// Distribution from a mixed localized coin state, as the eigenvalue-weighted
/// sum of pure-branch distributions. Exact scalars use the column contraction
/// (eigenvalues r0 +- |r| leave Q(sqrt2)).
template <class R>
Distribution<R> evolve_mixed(const MixedLocalizedState<R> &rho, const CoinParams &params, long t) {
  auto diag = validate_state(rho);
  if (!diag.ok())
    throw std::invalid_argument("evolve_mixed: invalid density matrix (" + diag.violations.front().kind + ")");
  if constexpr (!std::is_same_v<R, double>) {
    return evolve_density_columns(rho, params, t);
  } else {
    auto r = pauli_decompose<double>(rho.rho, 1e-12);
    Distribution<double> d;
    d.t = t;
    d.method = Method::direct;
    d.fill_interval(-t, t);
    for (const auto &br : detail::coin_eigenbranches(r)) {
      if (br.weight == 0.0)
        continue;
      auto init = PureState<double>::localized(0, Cplx<double>(br.a.real(), br.a.imag()),
                                               Cplx<double>(br.b.real(), br.b.imag()));
      auto branch = distribution_of(evolve_pure(init, params, t), t);
      for (const auto &[x, p] : branch.probs)
        d.probs[x] += br.weight * p;
    }
    return d;
  }
}

} // namespace qwalk::oracle
