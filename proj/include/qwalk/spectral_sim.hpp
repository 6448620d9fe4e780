#pragma once

// Momentum-space evolution on an odd ring of N sites, large enough that the
// walk never wraps: propagating there is exact for the infinite line.

#include "qwalk/horner.hpp"
#include "qwalk/oracle_sim.hpp"

#include <numbers>
#include <vector>

namespace qwalk::spectral {

struct MomentumField {
  long n = 0;                 // ring size, odd
  std::vector<cd> alpha;      // alpha~ at k_j = 2 pi j / n
  std::vector<cd> beta;

  double k(long j) const { return 2.0 * std::numbers::pi * static_cast<double>(j) / static_cast<double>(n); }
  double norm_squared() const {
    double s = 0;
    for (std::size_t j = 0; j < alpha.size(); ++j)
      s += std::norm(alpha[j]) + std::norm(beta[j]);
    return s / static_cast<double>(n);
  }
};

enum class PowerMethod { repeated, horner };

/// Smallest odd N >= 2(t + radius) + 3.
inline long ring_size_for(long t, long radius) {
  long n = 2 * (t + radius) + 3;
  return n % 2 == 0 ? n + 1 : n;
}

/// alpha~_j = sum_x e^{i k_j x} alpha_x. Rejects rings that cannot hold the
/// light cone of `horizon` steps without wrapping.
inline MomentumField forward(const PureState<double> &init, long n, long horizon = 0) {
  if (n <= 0 || n % 2 == 0)
    throw std::invalid_argument("forward: ring size must be a positive odd integer");
  if (n < 2 * (horizon + init.radius()) + 1)
    throw std::invalid_argument("forward: ring of size " + std::to_string(n) + " too small for " +
                                std::to_string(horizon) + " steps");
  MomentumField f;
  f.n = n;
  f.alpha.assign(static_cast<std::size_t>(n), 0.0);
  f.beta.assign(static_cast<std::size_t>(n), 0.0);
  for (long j = 0; j < n; ++j) {
    for (const auto &[x, a] : init.amplitudes) {
      // reduce the phase index mod n to keep the argument small
      const cd ph = std::polar(1.0, 2.0 * std::numbers::pi * static_cast<double>((j * x) % n) / static_cast<double>(n));
      f.alpha[static_cast<std::size_t>(j)] += ph * to_complex(a.alpha);
      f.beta[static_cast<std::size_t>(j)] += ph * to_complex(a.beta);
    }
  }
  return f;
}

/// (alpha~, beta~) <- U_{-k_j}^t (alpha~, beta~) for every mode.
inline MomentumField propagate(const MomentumField &field, const CoinParams &params, long t,
                               PowerMethod method = PowerMethod::horner) {
  if (t < 0)
    throw std::invalid_argument("propagate: negative step count");
  MomentumField out = field;
  for (long j = 0; j < field.n; ++j) {
    // with the e^{+ikx} forward transform a right shift multiplies by e^{+ik},
    // so the step on mode k_j is u_k evaluated at -k_j
    const double kj = -field.k(j);
    Mat2<cd> p;
    if (method == PowerMethod::horner) {
      p = u_k_power(params, kj, t);
    } else {
      const auto u = u_k(params, kj);
      p = {{{1.0, 0.0}, {0.0, 1.0}}};
      for (long s = 0; s < t; ++s) {
        Mat2<cd> q{};
        for (int a = 0; a < 2; ++a)
          for (int b = 0; b < 2; ++b)
            q[a][b] = u[a][0] * p[0][b] + u[a][1] * p[1][b];
        p = q;
      }
    }
    const auto idx = static_cast<std::size_t>(j);
    const cd a = field.alpha[idx], b = field.beta[idx];
    out.alpha[idx] = p[0][0] * a + p[0][1] * b;
    out.beta[idx] = p[1][0] * a + p[1][1] * b;
  }
  return out;
}

/// alpha_x = (1/N) sum_j e^{-i k_j x} alpha~_j on x in [-(N-1)/2, (N-1)/2].
inline PureState<double> inverse(const MomentumField &field) {
  PureState<double> s;
  const long half = (field.n - 1) / 2;
  const double inv_n = 1.0 / static_cast<double>(field.n);
  for (long x = -half; x <= half; ++x) {
    cd a = 0, b = 0;
    for (long j = 0; j < field.n; ++j) {
      long m = ((j * x) % field.n + field.n) % field.n;
      const cd ph = std::polar(1.0, -2.0 * std::numbers::pi * static_cast<double>(m) / static_cast<double>(field.n));
      a += ph * field.alpha[static_cast<std::size_t>(j)];
      b += ph * field.beta[static_cast<std::size_t>(j)];
    }
    a *= inv_n;
    b *= inv_n;
    s.amplitudes[x] = {Cplx<double>(a.real(), a.imag()), Cplx<double>(b.real(), b.imag())};
  }
  return s;
}

/// Full pipeline: forward, propagate, inverse, restricted to the light cone
/// [min support - t, max support + t].
inline Distribution<double> distribution(const PureState<double> &init, const CoinParams &params, long t,
                                         PowerMethod method = PowerMethod::horner) {
  const long n = ring_size_for(t, init.radius());
  auto state = inverse(propagate(forward(init, n, t), params, t, method));
  Distribution<double> d;
  d.t = t;
  d.method = Method::spectral;
  const long lo = init.min_position() - t, hi = init.max_position() + t;
  for (const auto &[x, a] : state.amplitudes)
    if (x >= lo && x <= hi)
      d.probs[x] = norm(a.alpha) + norm(a.beta);
  return d;
}

} // namespace qwalk::spectral
