#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "oblivdsp/error.hpp"
#include "oblivdsp/oracle/fidelity.hpp"
#include "oblivdsp/oracle/kernels.hpp"
#include "oblivdsp/oracle/pipelines.hpp"
#include "oblivdsp/oracle/trainer.hpp"
#include "oblivdsp/pipelines/client.hpp"
#include "oblivdsp/pipelines/gesture.hpp"
#include "oblivdsp/synthdata/scene.hpp"

using namespace oblivdsp;
using pipelines::PipelineConfig;

namespace {

synthdata::SceneSpec singleTone(double freq, double amplitude) {
  auto spec = synthdata::vitalsFixture();
  spec.targets[0].motions = {{freq, amplitude, 0.0}};
  return spec;
}

}  // namespace

TEST(SynthData, DeterministicPerSeed) {
  const auto spec = synthdata::vitalsFixture();
  EXPECT_EQ(synthdata::generateCube(spec, 7), synthdata::generateCube(spec, 7));
  EXPECT_NE(synthdata::generateCube(spec, 7), synthdata::generateCube(spec, 8));
}

TEST(SynthData, ClutterOnlyIsConstant) {
  auto spec = synthdata::vitalsFixture();
  spec.targets.clear();
  spec.noiseStd = 0;
  const auto cube = synthdata::generateCube(spec, 1);
  for (std::size_t t = 1; t < cube.F; ++t)
    for (std::size_t r = 0; r < cube.R; ++r) EXPECT_EQ(cube.at(t, 0, r, 0), cube.at(0, 0, r, 0));
}

TEST(SynthData, ConstantDisplacementGivesConstantPhase) {
  auto spec = synthdata::vitalsFixture();
  spec.clutterAmplitude = 0;
  spec.noiseStd = 0;
  spec.targets[0].motions.clear();
  spec.targets[0].offset = 1e-3;
  const auto a = synthdata::generateCube(spec, 2);
  spec.targets[0].offset = 0;
  const auto b = synthdata::generateCube(spec, 2);
  const double expected = std::remainder(4 * std::numbers::pi * 1e-3 / spec.wavelength, 2 * std::numbers::pi);
  for (std::size_t t = 0; t < a.F; t += 37) {
    EXPECT_NEAR(std::remainder(std::arg(a.at(t, 0, 12, 0) / b.at(t, 0, 12, 0)) - expected, 2 * std::numbers::pi), 0, 1e-9);
  }
}

TEST(SynthData, BreathingPhaseSwing) {
  auto spec = singleTone(0.25, 4e-3);
  spec.clutterAmplitude = 0;
  spec.noiseStd = 0;
  const auto cube = synthdata::generateCube(spec, 3);
  std::vector<double> wrapped;
  for (std::size_t t = 0; t < cube.F; ++t) wrapped.push_back(std::arg(cube.at(t, 0, 12, 0)));
  const auto phase = oracle::unwrap(wrapped);
  const auto [lo, hi] = std::minmax_element(phase.begin(), phase.end());
  EXPECT_NEAR(*hi - *lo, 4 * std::numbers::pi * 8e-3 / 5e-3, 0.05);
}

TEST(SynthData, RejectsNyquistViolation) {
  auto spec = singleTone(11.0, 1e-4);
  EXPECT_THROW(synthdata::generateCube(spec, 1), ConfigError);
  spec = synthdata::vitalsFixture();
  spec.targets[0].rangeBin = 16;
  EXPECT_THROW(synthdata::generateCube(spec, 1), ConfigError);
}

TEST(Unwrap, CorrectsJumps) {
  const auto u = oracle::unwrap({3.0, -3.0, -2.9, 3.1});
  EXPECT_NEAR(u[1], 2 * std::numbers::pi - 3.0, 1e-12);
  EXPECT_NEAR(u[3] - u[2], 3.1 - (-2.9) - 2 * std::numbers::pi, 1e-12);
}

TEST(StandardVitals, SyntheticFixture) {
  const auto cfg = PipelineConfig::vitalsDefault();
  const auto trace = oracle::standardVitals(synthdata::generateCube(synthdata::vitalsFixture(), 1), cfg);
  ASSERT_FALSE(trace.lowConfidence);
  EXPECT_EQ(*trace.targetBin, 12.0);
  EXPECT_NEAR(*trace.rrBpm(), 15.0, 3.0);
  EXPECT_NEAR(*trace.hrBpm(), 72.0, 6.0);
  EXPECT_EQ(trace.phase.size(), 200u);
}

TEST(StandardVitals, PureToneAtHeartRate) {
  const auto cfg = PipelineConfig::vitalsDefault();
  const auto trace = oracle::standardVitals(synthdata::generateCube(singleTone(1.2, 0.3e-3), 1), cfg);
  EXPECT_DOUBLE_EQ(*trace.hrBpm(), 72.0);
}

TEST(StandardVitals, StaticSceneFlagged) {
  auto spec = synthdata::vitalsFixture();
  spec.targets.clear();
  spec.noiseStd = 0;
  const auto trace = oracle::standardVitals(synthdata::generateCube(spec, 1), PipelineConfig::vitalsDefault());
  EXPECT_TRUE(trace.lowConfidence);
  EXPECT_FALSE(trace.hrBpm().has_value());
}

TEST(StandardVitals, AgreesWithPolynomialChainWithinResolution) {
  const auto cfg = PipelineConfig::vitalsDefault();
  for (std::uint64_t seed = 1; seed <= 3; ++seed) {
    const auto cube = synthdata::generateCube(synthdata::vitalsFixture(), seed);
    const auto a = oracle::standardVitals(cube, cfg);
    const auto b = oracle::fheFriendlyVitals(cube, cfg);
    EXPECT_LE(std::fabs(*a.rrBpm() - *b.rrBpm()), 6.0);
    EXPECT_LE(std::fabs(*a.hrBpm() - *b.hrBpm()), 6.0);
  }
}

TEST(ApproxGap, IdenticalIsZeroAndRatesSurviveApproximation) {
  const auto cfg = PipelineConfig::vitalsDefault();
  const auto cube = synthdata::generateCube(synthdata::vitalsFixture(), 2);
  const auto standard = oracle::standardVitals(cube, cfg);
  for (const auto& row : oracle::approxGapReport(standard, standard)) {
    EXPECT_EQ(row.phaseMse, 0.0);
    EXPECT_EQ(row.rateDeltaBpm, 0.0);
  }
  const auto gap = oracle::approxGapReport(oracle::fheFriendlyVitals(cube, cfg), standard);
  ASSERT_EQ(gap.size(), 2u);
  for (const auto& row : gap) {
    EXPECT_GT(row.phaseMse, 0.0);
    EXPECT_LT(std::fabs(row.rateDeltaBpm), 1e-3);
  }
  EXPECT_NE(oracle::formatApproxGap(gap).find("heart"), std::string::npos);
}

TEST(ApproxGap, ShrinksWithDominance) {
  // A second, weaker target pulls the soft attention off the dominant bin.
  const auto cfg = PipelineConfig::vitalsDefault();
  std::vector<double> mse;
  for (double ratio : {1.5, 3.0, 6.0}) {
    auto spec = synthdata::vitalsFixture();
    auto other = spec.targets[0];
    other.rangeBin = 5;
    other.amplitude = 1.0 / ratio;
    other.motions = {{0.45, 3e-3, 1.0}};
    spec.targets.push_back(other);
    const auto cube = synthdata::generateCube(spec, 4);
    const auto gap = oracle::approxGapReport(oracle::fheFriendlyVitals(cube, cfg), oracle::standardVitals(cube, cfg));
    mse.push_back(gap[0].phaseMse);
  }
  EXPECT_GT(mse[0], mse[1]);
  EXPECT_GT(mse[1], mse[2]);
}

TEST(Fidelity, ZeroForIdenticalAndMatchesPerturbation) {
  const std::vector<pipelines::StageValues> plain{{"Energy integ.", 1, {1, 2, 3, 4}}, {"FC3", 11, {0.5, -0.5}}};
  for (const auto& row : oracle::fidelityReport(plain, plain)) {
    EXPECT_EQ(row.mse, 0.0);
    EXPECT_EQ(row.maxAbsErr, 0.0);
  }
  auto perturbed = plain;
  perturbed[0].values = {1.1, 1.9, 3.1, 3.9};
  const auto report = oracle::fidelityReport(perturbed, plain);
  EXPECT_NEAR(report[0].mse, 0.01, 1e-12);
  EXPECT_NEAR(report[0].maxAbsErr, 0.1, 1e-12);
  EXPECT_EQ(report[1].depth, 11);
  EXPECT_NE(oracle::formatFidelity(report).find("max|err|"), std::string::npos);

  perturbed[1].values.push_back(0);
  EXPECT_THROW(oracle::fidelityReport(perturbed, plain), LayoutError);
}

TEST(Trainer, StandardizedRowsHaveUnitSpread) {
  std::mt19937_64 rng(1);
  std::normal_distribution<double> n(3.0, 0.01);
  oracle::Samples xs(50, std::vector<double>(6));
  for (auto& x : xs)
    for (double& v : x) v = n(rng);
  const auto layers = oracle::standardizeNetwork(pipelines::randomNetwork({6, 4, 3}, 2), xs);
  std::vector<double> mean(3), sq(3);
  for (const auto& x : xs) {
    const auto y = oracle::fcForward(layers, x);
    for (std::size_t k = 0; k < 3; ++k) {
      mean[k] += y[k] / 50;
      sq[k] += y[k] * y[k] / 50;
    }
  }
  for (std::size_t k = 0; k < 3; ++k) {
    EXPECT_NEAR(mean[k], 0, 1e-9);
    EXPECT_NEAR(sq[k], 1, 1e-9);
  }
}

TEST(Trainer, LearnsGestureFixture) {
  auto cfg = PipelineConfig::gestureDefault();
  cfg.set("R", "16");
  cfg.set("D", "8");
  cfg.set("A", "2");
  cfg.set("F", "4");
  cfg.set("fc_dims", "256,16,8,5");
  std::vector<pipelines::RadarCube> cubes;
  std::vector<std::size_t> labels;
  for (std::uint64_t seed = 0; seed < 12; ++seed) {
    for (std::size_t k = 0; k < 5; ++k) {
      cubes.push_back(synthdata::generateCube(synthdata::gestureFixture(k, 5, seed), seed));
      labels.push_back(k);
    }
  }
  cfg.spectralScale = pipelines::calibrateSpectralScale(cubes, cfg);
  oracle::Samples xs;
  for (const auto& c : cubes) xs.push_back(oracle::gestureFeatures(c, cfg));
  auto layers = oracle::standardizeNetwork(pipelines::randomNetwork(cfg.kernel.fcDims, 4), xs);
  const double before = oracle::accuracy(layers, xs, labels);
  layers = oracle::trainNetwork(layers, xs, labels, {300, 0.05, 1.0});
  const double after = oracle::accuracy(layers, xs, labels);
  EXPECT_GT(after, before);
  EXPECT_GE(after, 0.8);
}
