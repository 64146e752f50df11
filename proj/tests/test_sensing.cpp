#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <vector>

#include "oracles.hpp"
#include "trpapr/experiment.hpp"
#include "trpapr/sensing.hpp"

using namespace trpapr;

namespace {

ComplexSignal random_time(std::mt19937_64& rng, std::size_t n) {
  return ComplexSignal(Domain::Time, oracle::random_vector(rng, n));
}

RadarScene one_target(std::size_t tau, bool noise, double snr_db = 20.0) {
  RadarScene sc;
  sc.delays = {tau};
  sc.noise = noise;
  sc.snr_db = snr_db;
  return sc;
}

}  // namespace

TEST(Channel, IdentityAndPureDelay) {
  std::mt19937_64 rng(81);
  const ComplexSignal x = random_time(rng, 32);
  const RadarScene id = one_target(0, false, 6.0);
  const ComplexSignal y = apply_radar_channel(x, id, 1);
  for (std::size_t n = 0; n < 32; ++n) EXPECT_EQ(y[n], id.sigma() * x[n]);

  const ComplexSignal d = apply_radar_channel(x, one_target(3, false, 0.0), 1);
  for (std::size_t n = 0; n < 3; ++n) EXPECT_EQ(d[n], cplx{});
  for (std::size_t n = 3; n < 32; ++n) EXPECT_EQ(d[n], x[n - 3]);
}

TEST(Channel, NoiseOnlyHasUnitVariance) {
  RadarScene sc;
  const ComplexSignal y = apply_radar_channel(ComplexSignal::zeros(Domain::Time, 4096), sc, 2024);
  EXPECT_NEAR(y.energy() / 4096.0, 1.0, 0.05);
  cplx mean{};
  for (const cplx& v : y.samples()) mean += v;
  EXPECT_LT(std::abs(mean) / 4096.0, 0.05);
}

TEST(Channel, RejectsInvalidScenes) {
  const ComplexSignal x = ComplexSignal::zeros(Domain::Time, 8);
  EXPECT_THROW(apply_radar_channel(x, one_target(8, false), 0), RejectedInput);
  RadarScene moving = one_target(1, false);
  moving.velocities = {3.0};
  EXPECT_THROW(apply_radar_channel(x, moving, 0), RejectedInput);
  EXPECT_THROW(apply_radar_channel(ComplexSignal::zeros(Domain::Freq, 8), one_target(1, false), 0),
               ContractViolation);
}

TEST(Delay, RecoversShiftsExactly) {
  std::mt19937_64 rng(83);
  const ComplexSignal x = random_time(rng, 64);
  EXPECT_EQ(estimate_delay(x, x), 0u);
  EXPECT_EQ(estimate_delay(apply_radar_channel(x, one_target(5, false), 0), x), 5u);
  for (std::size_t tau = 0; tau < 40; tau += 3) {
    EXPECT_EQ(estimate_delay(apply_radar_channel(x, one_target(tau, false), 0), x), tau);
  }
}

TEST(Delay, InvariantToGlobalPhase) {
  std::mt19937_64 rng(89);
  for (int trial = 0; trial < 10; ++trial) {
    const ComplexSignal x = random_time(rng, 128);
    const ComplexSignal y = apply_radar_channel(x, one_target(trial + 2, true, 0.0), trial);
    const cplx rot = std::polar(1.0, 0.7 * trial);
    std::vector<cplx> xr = x.vector(), yr = y.vector();
    for (auto& v : xr) v *= rot;
    for (auto& v : yr) v *= rot;
    EXPECT_EQ(estimate_delay(ComplexSignal(Domain::Time, yr), ComplexSignal(Domain::Time, xr)),
              estimate_delay(y, x));
  }
}

TEST(Delay, RejectsZeroReferenceAndMismatch) {
  const ComplexSignal z = ComplexSignal::zeros(Domain::Time, 8);
  EXPECT_THROW(estimate_delay(z, z), RejectedInput);
  EXPECT_THROW(estimate_delay(z, ComplexSignal::zeros(Domain::Time, 9)), RejectedInput);
}

TEST(Delay, TableWaveformAtTwentyDb) {
  ExperimentConfig cfg;
  cfg.solver.iterations = 200;
  const TonePlan plan = cfg.plan();
  const ComplexSignal x = sensing_waveform(cfg, plan, WaveformKind::Proposed, 0);
  const RadarScene sc = one_target(7, true, 20.0);
  std::size_t hits = 0;
  for (std::uint64_t t = 0; t < 1000; ++t) hits += estimate_delay(apply_radar_channel(x, sc, derive_seed(5, 0, t)), x) == 7;
  EXPECT_GE(hits, 990u);
}

TEST(Range, ResolutionArithmetic) {
  const double fs = 512 * 450e3;
  EXPECT_EQ(estimate_range(0, fs), 0.0);
  EXPECT_NEAR(estimate_range(1, fs), 0.6506, 5e-5);
  EXPECT_NEAR(estimate_range(10, fs), 6.506, 5e-4);
  EXPECT_NEAR(estimate_range(1, fs), kSpeedOfLight / (2.0 * 230.4e6), 1e-12);
  EXPECT_THROW(estimate_range(1, 0.0), RejectedInput);
}

TEST(Aacf, HandComputedPair) {
  const AacfResult r = aacf(ComplexSignal(Domain::Time, {1.0, 1.0}));
  ASSERT_EQ(r.values.size(), 2u);
  EXPECT_NEAR(std::abs(r.values[0] - cplx(2.0, 0.0)), 0.0, 1e-12);
  EXPECT_NEAR(std::abs(r.values[1] - cplx(1.0, 0.0)), 0.0, 1e-12);
  EXPECT_NEAR(r.psl_db, 20.0 * std::log10(0.5), 1e-12);
  EXPECT_EQ(aacf(ComplexSignal(Domain::Time, {cplx(0, 2)})).psl_db, -INFINITY);
}

TEST(Aacf, MatchesShiftMatrixDefinition) {
  std::mt19937_64 rng(97);
  for (int trial = 0; trial < 10; ++trial) {
    const ComplexSignal x = random_time(rng, 64);
    const AacfResult r = aacf(x);
    const auto want = oracle::shift_matrix_acf(x.vector());
    EXPECT_LT(oracle::max_abs_diff(r.values, want), 1e-10);
    EXPECT_EQ(r.values[0].imag(), 0.0);
    EXPECT_NEAR(r.values[0].real(), x.energy(), 1e-10);
  }
}

TEST(Aacf, PeriodicModeWrapsAround) {
  const ComplexSignal x(Domain::Time, {1.0, 2.0, 3.0});
  const AacfResult r = aacf(x, AcfMode::Periodic);
  // r_1 = 1*2 + 2*3 + 3*1, r_2 = 1*3 + 2*1 + 3*2
  EXPECT_NEAR(std::abs(r.values[1] - cplx(11.0, 0.0)), 0.0, 1e-12);
  EXPECT_NEAR(std::abs(r.values[2] - cplx(11.0, 0.0)), 0.0, 1e-12);
}

TEST(Aacf, ZeroSignalIsUndefined) {
  EXPECT_THROW(aacf(ComplexSignal::zeros(Domain::Time, 8)), UndefinedValue);
}

TEST(Aacf, TableIsNormalizedAndFloored) {
  std::vector<cplx> x(8);
  x[0] = 1.0;
  const Table t = aacf_table(aacf(ComplexSignal(Domain::Time, x)));
  EXPECT_EQ(t.columns, (std::vector<std::string>{"lag", "abs_db"}));
  EXPECT_EQ(std::get<double>(t.rows[0][1]), 0.0);
  EXPECT_EQ(std::get<double>(t.rows[5][1]), kAcfFloorDb);
}

TEST(Rmse, NoiselessLimitIsZeroAndWorkerIndependent) {
  std::mt19937_64 rng(101);
  std::vector<ComplexSignal> tx;
  for (int t = 0; t < 8; ++t) tx.push_back(random_time(rng, 128));
  RadarScene sc = one_target(7, true);
  const std::vector<double> grid{-25.0, -10.0, 0.0, 60.0};
  const auto one = ranging_rmse(tx, sc, grid, 17, 1);
  const auto many = ranging_rmse(tx, sc, grid, 17, 4);
  ASSERT_EQ(one.size(), grid.size());
  for (std::size_t s = 0; s < grid.size(); ++s) {
    EXPECT_EQ(one[s].rmse_m, many[s].rmse_m);
    EXPECT_EQ(one[s].trials, 8u);
  }
  EXPECT_EQ(one.back().rmse_m, 0.0);
  EXPECT_GE(one.front().rmse_m, one.back().rmse_m);
}

TEST(Rmse, FactoryOverloadAndErrors) {
  RadarScene sc = one_target(3, true);
  const std::vector<double> grid{40.0};
  auto factory = [](std::uint64_t seed) {
    Rng rng(seed);
    return ComplexSignal(Domain::Time, complex_gaussian(rng, 64));
  };
  const auto c = ranging_rmse(factory, sc, grid, 5, 9);
  EXPECT_EQ(c[0].rmse_m, 0.0);
  EXPECT_THROW(ranging_rmse(factory, sc, grid, 0, 9), RejectedInput);
  sc.delays = {1, 2};
  EXPECT_THROW(ranging_rmse(factory, sc, grid, 2, 9), RejectedInput);
}
