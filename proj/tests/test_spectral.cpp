#include "support.hpp"

namespace qwalk {
namespace {

const CoinParams kHadamard = CoinParams::hadamard();

PureState<double> coin_zero_at(long x) { return PureState<double>::localized(x, Cplx<double>(1.0), Cplx<double>()); }

TEST(Forward, LocalizedAtOriginIsFlat) {
  const auto f = spectral::forward(coin_zero_at(0), 11);
  for (long j = 0; j < f.n; ++j) {
    EXPECT_LT(std::abs(f.alpha[static_cast<std::size_t>(j)] - 1.0), 1e-15);
    EXPECT_EQ(f.beta[static_cast<std::size_t>(j)], 0.0);
  }
}

TEST(Forward, ShiftedSourceCarriesPhase) {
  const auto f = spectral::forward(PureState<double>::localized(1, Cplx<double>(0.6, 0.8), Cplx<double>()), 9);
  for (long j = 0; j < f.n; ++j)
    EXPECT_LT(std::abs(f.alpha[static_cast<std::size_t>(j)] - std::polar(1.0, f.k(j)) * cd(0.6, 0.8)), 1e-15);
}

TEST(Forward, RejectsBadRings) {
  EXPECT_THROW(spectral::forward(coin_zero_at(0), 10), std::invalid_argument);
  EXPECT_THROW(spectral::forward(coin_zero_at(0), 9, 5), std::invalid_argument);
  EXPECT_NO_THROW(spectral::forward(coin_zero_at(0), 11, 5));
}

TEST(Inverse, RoundTripAtZeroSteps) {
  fixtures::Rng rng(1);
  const auto s = rng.state(-3, 3);
  const auto back = spectral::inverse(spectral::forward(s, 15));
  for (const auto &[x, a] : back.amplitudes) {
    const auto it = s.amplitudes.find(x);
    const cd ea = it == s.amplitudes.end() ? cd(0) : to_complex(it->second.alpha);
    const cd eb = it == s.amplitudes.end() ? cd(0) : to_complex(it->second.beta);
    EXPECT_LT(std::abs(to_complex(a.alpha) - ea), 1e-12);
    EXPECT_LT(std::abs(to_complex(a.beta) - eb), 1e-12);
  }
}

TEST(Inverse, FlatFieldIsLocalized) {
  spectral::MomentumField f;
  f.n = 7;
  f.alpha.assign(7, 1.0);
  f.beta.assign(7, 0.0);
  const auto s = spectral::inverse(f);
  for (const auto &[x, a] : s.amplitudes)
    EXPECT_LT(std::abs(to_complex(a.alpha) - (x == 0 ? 1.0 : 0.0)), 1e-15) << "x=" << x;
}

TEST(Propagate, ZeroStepsIsIdentity) {
  fixtures::Rng rng(2);
  const auto f = spectral::forward(rng.state(-2, 2), 9);
  const auto g = spectral::propagate(f, rng.coin(), 0);
  for (std::size_t j = 0; j < f.alpha.size(); ++j) {
    EXPECT_LT(std::abs(g.alpha[j] - f.alpha[j]), 1e-15);
    EXPECT_LT(std::abs(g.beta[j] - f.beta[j]), 1e-15);
  }
}

TEST(Propagate, OneStepMatchesOracleStep) {
  fixtures::Rng rng(3);
  const auto s = rng.state(-2, 2);
  const auto params = rng.coin();
  const auto got = spectral::inverse(spectral::propagate(spectral::forward(s, 11, 1), params, 1));
  const auto expect = oracle::step(s, params);
  for (const auto &[x, a] : got.amplitudes) {
    const auto it = expect.amplitudes.find(x);
    const cd ea = it == expect.amplitudes.end() ? cd(0) : to_complex(it->second.alpha);
    EXPECT_LT(std::abs(to_complex(a.alpha) - ea), 1e-13) << "x=" << x;
  }
}

TEST(Propagate, PowerMethodsAgree) {
  fixtures::Rng rng(4);
  for (int i = 0; i < 20; ++i) {
    const auto f = spectral::forward(rng.state(-1, 1), 19);
    const auto params = rng.coin();
    const auto a = spectral::propagate(f, params, 7, spectral::PowerMethod::horner);
    const auto b = spectral::propagate(f, params, 7, spectral::PowerMethod::repeated);
    for (std::size_t j = 0; j < a.alpha.size(); ++j) {
      EXPECT_LT(std::abs(a.alpha[j] - b.alpha[j]), 1e-12);
      EXPECT_LT(std::abs(a.beta[j] - b.beta[j]), 1e-12);
    }
  }
}

TEST(Propagate, ConservesPerModeNorm) {
  fixtures::Rng rng(5);
  const auto f = spectral::forward(rng.state(-3, 3), 31);
  const auto g = spectral::propagate(f, rng.coin(), 12);
  for (std::size_t j = 0; j < f.alpha.size(); ++j)
    EXPECT_NEAR(std::norm(g.alpha[j]) + std::norm(g.beta[j]), std::norm(f.alpha[j]) + std::norm(f.beta[j]), 1e-12);
}

TEST(SpectralDistribution, Fig1TwoSteps) {
  const auto d = spectral::distribution(fixtures::fig1_state_double(), kHadamard, 2);
  EXPECT_NEAR(d.at(-2), 0.25, 1e-14);
  EXPECT_NEAR(d.at(0), 0.5, 1e-14);
  EXPECT_NEAR(d.at(2), 0.25, 1e-14);
  EXPECT_NEAR(d.at(1), 0.0, 1e-14);
}

TEST(SpectralDistribution, Fig1FortySteps) {
  const auto init = fixtures::fig1_state_double();
  const auto d = spectral::distribution(init, kHadamard, 40);
  const auto o = oracle::distribution_of(oracle::evolve_pure(init, kHadamard, 40), 40);
  EXPECT_LE(total_variation(d, o), 1e-10);
}

TEST(SpectralDistribution, RandomDelocalizedMatchesOracle) {
  fixtures::Rng rng(6);
  for (int i = 0; i < 20; ++i) {
    const auto init = rng.state(-3, 3);
    const auto params = rng.coin();
    const long t = rng.integer(0, 30);
    const auto d = spectral::distribution(init, params, t);
    const auto o = oracle::distribution_of(oracle::evolve_pure(init, params, t), t);
    EXPECT_LE(total_variation(d, o), 1e-10) << "t=" << t;
  }
}

TEST(RingSize, OddAndLargeEnough) {
  for (long t = 0; t < 10; ++t)
    for (long r = 0; r < 4; ++r) {
      const long n = spectral::ring_size_for(t, r);
      EXPECT_EQ(n % 2, 1);
      EXPECT_GE(n, 2 * (t + r) + 1);
    }
}

} // namespace
} // namespace qwalk
