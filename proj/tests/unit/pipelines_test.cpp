#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <sstream>

#include "oblivdsp/error.hpp"
#include "oblivdsp/kernels/operand.hpp"
#include "oblivdsp/oracle/kernels.hpp"
#include "oblivdsp/oracle/pipelines.hpp"
#include "oblivdsp/pipelines/client.hpp"
#include "oblivdsp/pipelines/gesture.hpp"
#include "oblivdsp/pipelines/report.hpp"
#include "oblivdsp/pipelines/vitals.hpp"
#include "oblivdsp/synthdata/scene.hpp"

using namespace oblivdsp;
using namespace oblivdsp::pipelines;

namespace {

RadarCube randomCube(std::size_t F, std::size_t A, std::size_t R, std::size_t D, std::uint64_t seed) {
  RadarCube c(F, A, R, D, 20.0, 5e-3);
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> n;
  for (auto& z : c.samples) z = {n(rng), n(rng)};
  return c;
}

std::vector<int> cumulative(const DepthLedger& ledger) {
  std::vector<int> out;
  for (const auto& r : ledger) out.push_back(r.cumulative);
  return out;
}

PipelineConfig smallGesture() {
  auto cfg = PipelineConfig::gestureDefault();
  cfg.set("R", "16");
  cfg.set("D", "8");
  cfg.set("A", "2");
  cfg.set("F", "3");
  cfg.set("fc_dims", "256,16,8,5");
  return cfg;
}

Deployment sim(int depth = 11) { return makeExactSim(ckks::CkksParams::desk(depth)); }

}  // namespace

TEST(Config, SerializeParseRoundTrip) {
  auto cfg = PipelineConfig::vitalsDefault();
  cfg.set("gamma", "4");
  cfg.set("taylor_form", "literal");
  cfg.set("resp_band", "0.15,0.5");
  std::istringstream in(cfg.serialize());
  const auto back = parseConfig(in);
  EXPECT_EQ(back.serialize(), cfg.serialize());
  EXPECT_EQ(back.digest(), cfg.digest());
  EXPECT_NE(back.digest(), PipelineConfig::vitalsDefault().digest());
}

TEST(Config, RejectsBadValues) {
  auto cfg = PipelineConfig::vitalsDefault();
  EXPECT_THROW(cfg.set("no_such_key", "1"), ConfigError);
  EXPECT_THROW(cfg.set("R", "abc"), ConfigError);
  cfg.set("D", "12");
  EXPECT_THROW(cfg.validate(), ConfigError);
  cfg = PipelineConfig::vitalsDefault();
  cfg.set("gamma", "3");
  EXPECT_THROW(cfg.validate(), ConfigError);
  cfg = PipelineConfig::vitalsDefault();
  cfg.set("heart_band", "1.0,12.0");
  EXPECT_THROW(cfg.validate(), ConfigError);
  std::istringstream bad("R = 16\nnot a pair\n");
  EXPECT_THROW(parseConfig(bad), ConfigError);
}

TEST(Config, GestureAllowsShortWindows) {
  EXPECT_NO_THROW(PipelineConfig::gestureDefault().validate());
  EXPECT_THROW(PipelineConfig::gestureDefault().validateVitals(), ConfigError);
}

TEST(CubeIo, BinaryAndCsvRoundTrip) {
  const auto cube = randomCube(3, 2, 4, 2, 1);
  std::stringstream bin;
  writeCube(bin, cube);
  EXPECT_EQ(readCube(bin), cube);
  std::stringstream csv;
  writeCubeCsv(csv, cube);
  const auto back = readCubeCsv(csv);
  ASSERT_EQ(back.samples.size(), cube.samples.size());
  for (std::size_t i = 0; i < cube.samples.size(); ++i) EXPECT_NEAR(std::abs(back.samples[i] - cube.samples[i]), 0, 1e-12);
}

TEST(CubeIo, RejectsMalformedInput) {
  std::stringstream junk("NOTACUBE and more");
  EXPECT_THROW(readCube(junk), FormatError);
  const auto cube = randomCube(2, 1, 2, 1, 2);
  std::stringstream bin;
  writeCube(bin, cube);
  std::string s = bin.str();
  std::stringstream truncated(s.substr(0, s.size() - 5));
  EXPECT_THROW(readCube(truncated), FormatError);
  std::stringstream csv("F,A,R,D,frameRate,wavelength\n1,1,2,1,20,0.005\n0,0,5,0,1,1\n");
  EXPECT_THROW(readCubeCsv(csv), FormatError);
  EXPECT_THROW(loadCube("/nonexistent/cube.bin"), FormatError);
}

TEST(Operands, RoundTripAndFcLayers) {
  std::vector<kernels::PlainOperand> ops{{"fir_taps", 1, 3, 0.5, {0.5, 1.0, 0.5}}};
  std::stringstream s;
  writeOperands(s, ops);
  EXPECT_EQ(kernels::readOperands(s), ops);

  std::istringstream scaled("role w\ndims 1 2\nscale 0.25\n4 8\n");
  EXPECT_EQ(kernels::readOperands(scaled)[0].values, (std::vector<double>{1.0, 2.0}));

  const auto layers = randomNetwork({4, 3, 2}, 5);
  const auto back = kernels::fcLayersFromOperands(kernels::operandsFromFcLayers(layers));
  ASSERT_EQ(back.size(), 2u);
  EXPECT_EQ(back[1].weights, layers[1].weights);
  EXPECT_EQ(back[0].bias, layers[0].bias);
}

TEST(Preprocess, ClutterAndNormalization) {
  RadarCube still(4, 1, 3, 1, 20, 5e-3);
  for (auto& z : still.samples) z = {0.7, -0.2};
  for (const auto& f : preprocessVital(still))
    for (const auto& z : f) EXPECT_EQ(std::abs(z), 0.0);

  const auto cube = randomCube(5, 2, 4, 2, 3);
  for (const auto& f : preprocessVital(cube)) {
    double peak = 0;
    for (const auto& z : f) peak = std::max(peak, std::abs(z));
    EXPECT_NEAR(peak, 1.0, 1e-12);
  }
  double peak = 0;
  for (const auto& f : preprocessGesture(cube))
    for (const auto& z : f) peak = std::max(peak, std::abs(z));
  EXPECT_NEAR(peak, 1.0, 1e-12);

  // One moving bin on a static background keeps its AC part.
  RadarCube moving(4, 1, 2, 1, 20, 5e-3);
  const std::vector<cplx> tone{{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
  for (std::size_t t = 0; t < 4; ++t) {
    moving.at(t, 0, 0, 0) = 3.0;
    moving.at(t, 0, 1, 0) = cplx(2.0, 0) + tone[t];
  }
  const auto frames = preprocessVital(moving);
  for (std::size_t t = 0; t < 4; ++t) {
    EXPECT_NEAR(std::abs(frames[t][0]), 0, 1e-12);
    EXPECT_NEAR(std::abs(frames[t][1] - tone[t]), 0, 1e-12);
  }
}

TEST(Packing, LayoutsAndRoundTrip) {
  const kernels::DopplerLayout layout{3, 16, 32};
  EXPECT_EQ(layout.active(), 1536u);
  std::mt19937_64 rng(4);
  std::normal_distribution<double> n;
  std::vector<cplx> frame(layout.active());
  for (auto& z : frame) z = {n(rng), n(rng)};
  const auto packed = packDoppler(frame, layout, 2048);
  EXPECT_EQ(unpack(packed, frame.size()), frame);
  for (std::size_t i = frame.size(); i < 2048; ++i) EXPECT_EQ(packed.re[i], 0.0);
  EXPECT_THROW(packDoppler(frame, layout, 1024), LayoutError);

  const auto vital = packVital({{1, 2}, {3, 4}, {5, 6}, {7, 8}}, 8);
  EXPECT_EQ(vital.re, (std::vector<double>{1, 3, 5, 7, 0, 0, 0, 0}));
  EXPECT_EQ(vital.im, (std::vector<double>{2, 4, 6, 8, 0, 0, 0, 0}));
}

TEST(Recovery, DivisionAndArgmax) {
  EXPECT_DOUBLE_EQ(*safeDivide(24, 2, 1e-6), 12.0);
  EXPECT_FALSE(safeDivide(1, 1e-9, 1e-6).has_value());
  EXPECT_EQ(classify({0.1, 0.9, 0.3}).predicted, 1u);
  EXPECT_EQ(classify({0.5, 0.2, 0.5}).predicted, 0u);
}

TEST(RangeFft, InvertsRawGenerator) {
  auto spec = synthdata::vitalsFixture();
  spec.F = 6;
  spec.A = 2;
  spec.D = 2;
  const auto bins = synthdata::generateCube(spec, 3);
  const auto viaRaw = rangeFft(synthdata::generateRawCube(spec, 3), spec.R);
  ASSERT_EQ(viaRaw.samples.size(), bins.samples.size());
  for (std::size_t i = 0; i < bins.samples.size(); ++i) EXPECT_NEAR(std::abs(viaRaw.samples[i] - bins.samples[i]), 0, 1e-12);
  EXPECT_EQ(rangeFft(bins, 4).R, 4u);
}

TEST(Vitals, DepthLedgerMatchesTable) {
  auto d = sim();
  const auto cfg = PipelineConfig::vitalsDefault();
  const auto run = runVitalsPipeline(synthdata::generateCube(synthdata::vitalsFixture(), 1), cfg, d);
  EXPECT_EQ(cumulative(run.ledger), (std::vector<int>{1, 2, 3, 4, 7, 8, 9, 10, 11}));
  auto order1 = cfg;
  order1.set("taylor_order", "1");
  EXPECT_EQ(vitalsDepthLedger(order1).back().cumulative, 9);
}

TEST(Vitals, SyntheticFixtureRates) {
  auto d = sim();
  const auto cfg = PipelineConfig::vitalsDefault();
  const auto cube = synthdata::generateCube(synthdata::vitalsFixture(), 1);
  const auto run = runVitalsPipeline(cube, cfg, d);
  ASSERT_FALSE(run.result.lowConfidence);
  EXPECT_GE(*run.result.targetBin, 11.5);
  EXPECT_LE(*run.result.targetBin, 12.5);
  EXPECT_NEAR(*run.result.rrBpm, 15.0, 3.0);
  EXPECT_NEAR(*run.result.hrBpm, 72.0, 6.0);

  const auto plain = oracle::fheFriendlyVitals(cube, cfg);
  EXPECT_NEAR(*run.result.targetBin, *plain.targetBin, 1e-9);
  EXPECT_NEAR(*run.result.rrBpm, *plain.rrBpm(), 1e-9);
  EXPECT_NEAR(*run.result.hrBpm, *plain.hrBpm(), 1e-9);
}

TEST(Vitals, StaticSceneIsLowConfidence) {
  auto spec = synthdata::vitalsFixture();
  spec.targets.clear();
  spec.noiseStd = 0;
  auto d = sim();
  const auto run = runVitalsPipeline(synthdata::generateCube(spec, 1), PipelineConfig::vitalsDefault(), d);
  EXPECT_TRUE(run.result.lowConfidence);
  EXPECT_FALSE(run.result.targetBin.has_value());
}

TEST(Vitals, DepthViolationNamesStage) {
  auto d = sim(9);
  try {
    runVitalsPipeline(synthdata::generateCube(synthdata::vitalsFixture(), 1), PipelineConfig::vitalsDefault(), d);
    FAIL() << "expected a depth violation";
  } catch (const DepthExhausted& e) {
    EXPECT_NE(std::string(e.what()).find("Merge + sharp^2"), std::string::npos) << e.what();
  }
}

TEST(Vitals, TraceIndependentOfValues) {
  const auto cfg = PipelineConfig::vitalsDefault();
  auto d = sim();
  const auto first = runVitalsPipeline(synthdata::generateCube(synthdata::vitalsFixture(), 1), cfg, d).trace;
  const auto second = runVitalsPipeline(randomCube(200, 1, 16, 1, 9), cfg, d).trace;
  EXPECT_EQ(first.dump(), second.dump());
}

TEST(Gesture, DepthLedgerMatchesTable) {
  const auto cfg = PipelineConfig::gestureDefault();
  const auto layers = randomNetwork(cfg.kernel.fcDims, 3);
  auto d = sim();
  const auto run = runClassificationPipeline(randomCube(10, 3, 16, 32, 1), cfg, layers, d);
  EXPECT_EQ(cumulative(run.ledger), (std::vector<int>{1, 2, 3, 5, 6, 6, 8, 10, 11}));
}

TEST(Gesture, MatchesPlaintextPipeline) {
  const auto cfg = smallGesture();
  const auto layers = randomNetwork(cfg.kernel.fcDims, 3);
  auto d = sim();
  for (std::uint64_t seed = 1; seed <= 3; ++seed) {
    const auto cube = randomCube(3, 2, 16, 8, seed);
    const auto run = runClassificationPipeline(cube, cfg, layers, d);
    const auto ref = oracle::gesturePipeline(cube, cfg, layers);
    ASSERT_EQ(run.result.logits.size(), 5u);
    for (std::size_t k = 0; k < 5; ++k) EXPECT_NEAR(run.result.logits[k], ref.logits[k], 1e-9);
    EXPECT_EQ(run.result.predicted, ref.predicted);
  }
}

TEST(Gesture, ZeroCubeGivesBiasChain) {
  const auto cfg = smallGesture();
  const auto layers = randomNetwork(cfg.kernel.fcDims, 8);
  auto d = sim();
  const auto run = runClassificationPipeline(RadarCube(3, 2, 16, 8, 20, 5e-3), cfg, layers, d);
  const auto expected = oracle::fcForward(layers, std::vector<double>(256, 0.0));
  for (std::size_t k = 0; k < 5; ++k) EXPECT_NEAR(run.result.logits[k], expected[k], 1e-12);
}

TEST(Gesture, RejectsMismatchedWeights) {
  const auto cfg = smallGesture();
  auto d = sim();
  EXPECT_THROW(runClassificationPipeline(randomCube(3, 2, 16, 8, 1), cfg, randomNetwork({128, 16, 8, 5}, 1), d),
               LayoutError);
  EXPECT_THROW(runClassificationPipeline(randomCube(3, 2, 16, 8, 1), cfg, randomNetwork({256, 16, 5}, 1), d),
               LayoutError);
  EXPECT_THROW(runClassificationPipeline(randomCube(4, 2, 16, 8, 1), cfg, randomNetwork({256, 16, 8, 5}, 1), d),
               ConfigError);
}

TEST(Gesture, TraceIndependentOfValues) {
  const auto cfg = smallGesture();
  const auto layers = randomNetwork(cfg.kernel.fcDims, 3);
  auto d = sim();
  const auto a = runClassificationPipeline(randomCube(3, 2, 16, 8, 1), cfg, layers, d).trace;
  const auto b = runClassificationPipeline(RadarCube(3, 2, 16, 8, 20, 5e-3), cfg, layers, d).trace;
  EXPECT_EQ(a.dump(), b.dump());
}

TEST(Gesture, CalibratedScaleBoundsWeights) {
  auto cfg = smallGesture();
  std::vector<RadarCube> cubes;
  for (std::uint64_t s = 0; s < 4; ++s) cubes.push_back(randomCube(3, 2, 16, 8, 100 + s));
  cfg.spectralScale = calibrateSpectralScale(cubes, cfg);
  EXPECT_LT(cfg.spectralScale, defaultSpectralScale(cfg.kernel.layout()));
  auto d = sim();
  const auto layers = randomNetwork(cfg.kernel.fcDims, 3);
  double largest = 0;
  for (const auto& cube : cubes) {
    const auto run = runClassificationPipeline(cube, cfg, layers, d);
    const auto stages = decryptStages(*d.client, run.cloud.stages, 11);
    for (const auto& s : stages) {
      if (s.name.rfind("Soft power", 0) == 0)
        for (double v : s.values) largest = std::max(largest, v);
    }
  }
  EXPECT_LE(largest, 1.0 + 1e-9);
  EXPECT_GT(largest, 0.5);
}

TEST(Report, ReproducibleAndCarriesDigests) {
  const auto cfg = PipelineConfig::vitalsDefault();
  const auto params = ckks::CkksParams::desk(11);
  const auto cube = synthdata::generateCube(synthdata::vitalsFixture(), 1);
  std::string first;
  for (int i = 0; i < 2; ++i) {
    auto d = makeExactSim(params);
    const auto run = runVitalsPipeline(cube, cfg, d);
    const VitalsPlan plan(cfg, d.backend->slotCount());
    const auto text = dumpReport(vitalsReport(run, plan, "exactsim", params));
    if (i == 0) first = text;
    else EXPECT_EQ(text, first);
  }
  const auto report = Report::parse(first);
  EXPECT_EQ(report["config_digest"], cfg.digest());
  EXPECT_EQ(report["depth_ledger"].size(), 9u);
  EXPECT_EQ(report["depth_ledger"][8]["cumulative"], 11);
  EXPECT_EQ(report["trace"]["digest"].get<std::string>().size(), 16u);
  EXPECT_NEAR(report["result"]["target_bin"].get<double>(), 12.0, 1e-6);
  EXPECT_EQ(report["decrypt_points"].size(), 2u);
}
