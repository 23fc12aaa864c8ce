#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <future>
#include <iostream>
#include <random>
#include <sstream>

#include "CLI11.hpp"
#include "oblivdsp/ckks/serialize.hpp"
#include "oblivdsp/error.hpp"
#include "oblivdsp/kernels/operand.hpp"
#include "oblivdsp/oracle/fidelity.hpp"
#include "oblivdsp/oracle/pipelines.hpp"
#include "oblivdsp/oracle/trainer.hpp"
#include "oblivdsp/pipelines/report.hpp"
#include "oblivdsp/synthdata/scene.hpp"

namespace fs = std::filesystem;
using namespace oblivdsp;
using pipelines::PipelineConfig;
using pipelines::RadarCube;

namespace {

enum Exit { kOk = 0, kOther = 1, kDepth = 2, kDivergence = 3, kUnreadable = 4, kBadConfig = 5, kMissingKeys = 6 };

class MissingKeys : public Error {
 public:
  using Error::Error;
};

class TraceDivergence : public Error {
 public:
  using Error::Error;
};

struct Options {
  std::string pipeline = "vitals";
  std::string configPath;
  std::vector<std::string> sets;
  std::string profile = "desk";
  int depth = 11;
  std::string out;
  std::string backend = "exactsim";
  std::string keys;
  std::string cube;
  bool raw = false;
  std::string weights;
  std::size_t calibrate = 0;
  std::size_t trials = 10;
  bool varyShape = false;
  std::string scene = "vitals";
  std::size_t gestureClass = 0, classes = 5;
  std::uint64_t seed = 1;
  std::string output;
};

void addConfigOptions(CLI::App* cmd, Options& o) {
  cmd->add_option("--config", o.configPath, "key=value config file");
  cmd->add_option("--set", o.sets, "override one config key (key=value), repeatable");
  cmd->add_option("--profile", o.profile, "CKKS parameter profile")->check(CLI::IsMember({"desk", "standard128"}));
  cmd->add_option("--depth", o.depth, "multiplicative depth of the modulus chain");
  cmd->add_option("--out", o.out, "output directory (default $OBLIVDSP_OUT or ./oblivdsp-out)");
}

void addPipelineOption(CLI::App* cmd, Options& o, bool allowAll) {
  std::vector<std::string> names{"vitals", "gesture"};
  if (allowAll) names.push_back("all");
  cmd->add_option("--pipeline", o.pipeline, "pipeline")->check(CLI::IsMember(names));
}

void addGestureOptions(CLI::App* cmd, Options& o) {
  cmd->add_option("--weights", o.weights, "FC weights as fc_weight/fc_bias operand blocks");
  cmd->add_option("--calibrate", o.calibrate,
                  "calibrate spectral_scale and standardize the network on N synthetic gesture cubes");
}

void addBackendOptions(CLI::App* cmd, Options& o) {
  cmd->add_option("--backend", o.backend, "evaluation backend")->check(CLI::IsMember({"exactsim", "ckks"}));
  cmd->add_option("--keys", o.keys, "directory holding client.keys and cloud.keys (ckks); generated in memory if absent");
  cmd->add_option("--cube", o.cube, "input cube (.csv or binary); defaults to the bundled synthetic fixture");
  cmd->add_flag("--raw", o.raw, "the cube holds raw IF samples; apply the range FFT first");
}

std::string readFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError("cannot read " + path);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

void writeFile(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out || !(out << text)) throw Error("cannot write " + path.string());
}

PipelineConfig loadPipelineConfig(const std::string& pipeline, const Options& o) {
  PipelineConfig cfg = pipeline == "gesture" ? PipelineConfig::gestureDefault() : PipelineConfig::vitalsDefault();
  bool dimsGiven = false;
  if (!o.configPath.empty()) {
    const std::string text = readFile(o.configPath);
    dimsGiven = text.find("fc_dims") != std::string::npos;
    std::istringstream in(text);
    cfg = pipelines::parseConfig(in, cfg);
  }
  for (const auto& kv : o.sets) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos) throw ConfigError("--set expects key=value, got '" + kv + "'");
    cfg.set(kv.substr(0, eq), kv.substr(eq + 1));
    dimsGiven = dimsGiven || kv.substr(0, eq) == "fc_dims";
  }
  // The FC input width follows the cube shape unless fc_dims was given explicitly.
  if (pipeline == "gesture" && !dimsGiven && !cfg.kernel.fcDims.empty()) cfg.kernel.fcDims[0] = cfg.kernel.layout().active();
  if (pipeline == "gesture") cfg.validate();
  else cfg.validateVitals();
  return cfg;
}

ckks::CkksParams loadParams(const Options& o) {
  return o.profile == "standard128" ? ckks::CkksParams::standard128(o.depth) : ckks::CkksParams::desk(o.depth);
}

fs::path outputDir(const Options& o) {
  fs::path dir = o.out;
  if (dir.empty()) {
    const char* env = std::getenv("OBLIVDSP_OUT");
    dir = env && *env ? env : "oblivdsp-out";
  }
  fs::create_directories(dir);
  return dir;
}

std::vector<RadarCube> calibrationCubes(const PipelineConfig& cfg, std::size_t count, std::size_t classes) {
  const auto& k = cfg.kernel;
  std::vector<RadarCube> cubes;
  for (std::size_t i = 0; i < count; ++i) {
    const std::uint64_t seed = 1000000 + i;
    cubes.push_back(synthdata::generateCube(synthdata::gestureFixture(i % classes, classes, seed, k.F, k.A, k.R, k.D), seed));
  }
  return cubes;
}

// Config and weights of a gesture run; calibration fixes spectral_scale in the config.
std::vector<kernels::FcLayer> gestureModel(PipelineConfig& cfg, const Options& o) {
  auto layers = o.weights.empty() ? pipelines::randomNetwork(cfg.kernel.fcDims, cfg.seed)
                                  : kernels::fcLayersFromOperands(kernels::loadOperands(o.weights));
  if (o.calibrate > 0) {
    const auto cubes = calibrationCubes(cfg, o.calibrate, cfg.kernel.fcDims.back());
    cfg.spectralScale = pipelines::calibrateSpectralScale(cubes, cfg);
    oracle::Samples xs;
    for (const auto& c : cubes) xs.push_back(oracle::gestureFeatures(c, cfg));
    layers = oracle::standardizeNetwork(layers, xs);
  }
  return layers;
}

RadarCube inputCube(const std::string& pipeline, const PipelineConfig& cfg, const Options& o) {
  RadarCube cube;
  if (!o.cube.empty()) {
    cube = pipelines::loadCube(o.cube);
  } else if (pipeline == "vitals") {
    cube = synthdata::generateCube(synthdata::vitalsFixture(), cfg.seed);
  } else {
    const auto& k = cfg.kernel;
    cube = synthdata::generateCube(synthdata::gestureFixture(0, k.fcDims.back(), cfg.seed, k.F, k.A, k.R, k.D), cfg.seed);
  }
  if (o.raw) cube = pipelines::rangeFft(cube, cfg.kernel.R);
  return cube;
}

std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : s) h = (h ^ c) * 1099511628211ULL;
  return h;
}

std::string weightsDigest(const std::vector<kernels::FcLayer>& layers) {
  std::ostringstream s;
  kernels::writeOperands(s, kernels::operandsFromFcLayers(layers));
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(fnv1a(s.str())));
  return buf;
}

struct LoadedKeys {
  std::shared_ptr<const ckks::CkksContext> ctx;
  ckks::KeySet keys;
};

LoadedKeys loadKeys(const std::string& dir, const ckks::CkksParams& params) {
  LoadedKeys k{std::make_shared<const ckks::CkksContext>(params), {}};
  const fs::path client = fs::path(dir) / "client.keys", cloud = fs::path(dir) / "cloud.keys";
  for (const auto& p : {client, cloud}) {
    if (!fs::exists(p)) throw MissingKeys("missing key file " + p.string() + " (run keygen)");
  }
  std::ifstream cin(client, std::ios::binary), ein(cloud, std::ios::binary);
  if (!cin || !ein) throw FormatError("cannot read key files in " + dir);
  k.keys.secretKey = ckks::readClientKeys(cin, k.ctx).secretKey;
  k.keys.evaluation = ckks::readEvaluationKeys(ein, k.ctx);
  return k;
}

pipelines::Deployment deploy(const Options& o, const ckks::CkksParams& params, const std::set<int>& rotations,
                             std::uint64_t seed) {
  if (o.backend == "exactsim") return pipelines::makeExactSim(params);
  if (o.keys.empty()) return pipelines::makeCkks(params, rotations, seed);
  auto loaded = loadKeys(o.keys, params);
  auto d = pipelines::makeCkks(loaded.ctx, loaded.keys, seed ^ 0x9e3779b97f4a7c15ULL);
  const auto& evaluator = static_cast<const vm::CkksBackend&>(*d.backend).evaluator();
  for (int r : rotations) {
    if (!evaluator.hasRotation(r)) {
      throw MissingKeys("cloud.keys has no Galois key for rotation " + std::to_string(r) + " (rerun keygen for this config)");
    }
  }
  return d;
}

std::string fixed(const std::optional<double>& v, int digits) {
  if (!v) return "n/a";
  std::ostringstream s;
  s.setf(std::ios::fixed);
  s.precision(digits);
  s << *v;
  return s.str();
}

std::string backendLabel(const Options& o) { return o.backend == "ckks" ? "ckks/" + o.profile : "exactsim"; }

// ---- subcommands ----

int cmdDepthAudit(const Options& o) {
  const auto params = loadParams(o);
  const auto dir = outputDir(o);
  const std::vector<std::string> names =
      o.pipeline == "all" ? std::vector<std::string>{"vitals", "gesture"} : std::vector<std::string>{o.pipeline};
  int code = kOk;
  for (const auto& name : names) {
    auto cfg = loadPipelineConfig(name, o);
    pipelines::DepthLedger ledger;
    pipelines::Report report = pipelines::reportHeader(name, "depth-audit", params, cfg);
    if (name == "vitals") {
      ledger = pipelines::vitalsDepthLedger(cfg);
    } else {
      const auto layers = gestureModel(cfg, o);
      ledger = pipelines::gestureDepthLedger(cfg, layers);
      report["weights_digest"] = weightsDigest(layers);
    }
    const int total = ledger.empty() ? 0 : ledger.back().cumulative;
    std::cout << name << " (budget " << params.depth << ")\n" << pipelines::formatLedger(ledger);
    std::cout << "total depth " << total << " / " << params.depth << (total <= params.depth ? "  OK\n" : "  VIOLATION\n");
    report["depth_ledger"] = pipelines::ledgerJson(ledger);
    report["total_depth"] = total;
    report["within_budget"] = total <= params.depth;
    writeFile(dir / ("depth_" + name + ".json"), pipelines::dumpReport(report));
    try {
      pipelines::checkDepthBudget(ledger, params.depth);
    } catch (const DepthExhausted& e) {
      std::cerr << "error: " << e.what() << "\n";
      code = kDepth;
    }
  }
  return code;
}

RadarCube randomCube(const PipelineConfig& cfg, std::size_t F, std::uint64_t seed) {
  const auto& k = cfg.kernel;
  RadarCube cube(F, k.A, k.R, k.D, cfg.frameRate, 5e-3);
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> n(0.0, 1.0);
  for (auto& z : cube.samples) z = {n(rng), n(rng)};
  return cube;
}

int cmdTraceCheck(const Options& o) {
  const auto params = loadParams(o);
  auto cfg = loadPipelineConfig(o.pipeline, o);
  std::vector<kernels::FcLayer> layers;
  if (o.pipeline == "gesture") layers = gestureModel(cfg, o);
  if (o.trials < 2) throw ConfigError("--trials must be at least 2");

  auto runOne = [&](std::size_t trial) {
    std::size_t F = cfg.kernel.F;
    PipelineConfig c = cfg;
    if (o.varyShape && trial + 1 == o.trials) c.kernel.F = ++F;
    auto d = pipelines::makeExactSim(params);
    const auto cube = randomCube(c, F, cfg.seed * 1000003 + trial);
    if (o.pipeline == "vitals") return pipelines::runVitalsPipeline(cube, c, d).trace;
    return pipelines::runClassificationPipeline(cube, c, layers, d).trace;
  };
  std::vector<std::future<vm::TraceRecord>> runs;
  for (std::size_t t = 0; t < o.trials; ++t) runs.push_back(std::async(std::launch::async, runOne, t));
  std::vector<vm::TraceRecord> traces;
  for (auto& r : runs) traces.push_back(r.get());

  const auto dir = outputDir(o);
  writeFile(dir / ("trace_" + o.pipeline + ".txt"), traces[0].dump());
  std::size_t same = 1;
  for (std::size_t t = 1; t < traces.size(); ++t) {
    const auto cmp = vm::traceEquals(traces[0], traces[t]);
    if (cmp.identical) {
      ++same;
      continue;
    }
    std::cout << "DIVERGENT (trial " << t << ", " << cmp.detail << ")\n";
    throw TraceDivergence("trace of trial " + std::to_string(t) + " differs from trial 0");
  }
  std::cout << "IDENTICAL (" << same << "/" << traces.size() << ")  " << traces[0].events.size() << " events, digest "
            << pipelines::traceSummary(traces[0])["digest"].get<std::string>() << "\n";
  return kOk;
}

int cmdRunVitals(const Options& o) {
  const auto params = loadParams(o);
  const auto cfg = loadPipelineConfig("vitals", o);
  const auto cube = inputCube("vitals", cfg, o);
  auto d = deploy(o, params, o.backend == "ckks" ? pipelines::vitalsRotations(cfg, params) : std::set<int>{}, cfg.seed);
  const auto run = pipelines::runVitalsPipeline(cube, cfg, d);
  const pipelines::VitalsPlan plan(cfg, d.backend->slotCount());

  const auto dir = outputDir(o);
  writeFile(dir / "vitals_report.json", pipelines::dumpReport(pipelines::vitalsReport(run, plan, backendLabel(o), params)));
  writeFile(dir / "vitals_trace.txt", run.trace.dump());
  if (o.backend == "ckks") std::cout << "parameters: " << params.securityTag() << "\n";
  std::cout << "target bin r^ = " << fixed(run.result.targetBin, 3) << "\n"
            << "RR = " << fixed(run.result.rrBpm, 3) << " bpm\n"
            << "HR = " << fixed(run.result.hrBpm, 3) << " bpm\n";
  if (run.result.lowConfidence) std::cout << "low confidence (no dominant target or empty band)\n";
  std::cout << "config digest " << cfg.digest() << "\nreport " << (dir / "vitals_report.json").string() << "\n";
  return kOk;
}

int cmdRunGesture(const Options& o) {
  const auto params = loadParams(o);
  auto cfg = loadPipelineConfig("gesture", o);
  const auto layers = gestureModel(cfg, o);
  const auto cube = inputCube("gesture", cfg, o);
  auto d = deploy(o, params, o.backend == "ckks" ? pipelines::gestureRotations(cfg, layers, params) : std::set<int>{},
                  cfg.seed);
  const auto run = pipelines::runClassificationPipeline(cube, cfg, layers, d);
  const pipelines::GesturePlan plan(cfg, d.backend->slotCount(), layers);

  auto report = pipelines::gestureReport(run, plan, backendLabel(o), params);
  report["weights_digest"] = weightsDigest(layers);
  const auto dir = outputDir(o);
  writeFile(dir / "gesture_report.json", pipelines::dumpReport(report));
  writeFile(dir / "gesture_trace.txt", run.trace.dump());
  if (o.backend == "ckks") std::cout << "parameters: " << params.securityTag() << "\n";
  std::cout << "predicted class " << run.result.predicted << "\nlogits";
  for (double v : run.result.logits) std::cout << " " << v;
  std::cout << "\nconfig digest " << cfg.digest() << "\nreport " << (dir / "gesture_report.json").string() << "\n";
  return kOk;
}

int cmdFidelity(Options o) {
  const auto params = loadParams(o);
  auto cfg = loadPipelineConfig(o.pipeline, o);
  std::vector<kernels::FcLayer> layers;
  if (o.pipeline == "gesture") layers = gestureModel(cfg, o);
  const auto cube = inputCube(o.pipeline, cfg, o);

  auto stagesOn = [&](pipelines::Deployment& d) {
    if (o.pipeline == "vitals") {
      auto run = pipelines::runVitalsPipeline(cube, cfg, d);
      return pipelines::decryptStages(*d.client, run.cloud.stages, params.depth);
    }
    auto run = pipelines::runClassificationPipeline(cube, cfg, layers, d);
    return pipelines::decryptStages(*d.client, run.cloud.stages, params.depth);
  };
  auto plain = pipelines::makeExactSim(params);
  const auto reference = stagesOn(plain);
  o.backend = "ckks";
  const auto rotations =
      o.pipeline == "vitals" ? pipelines::vitalsRotations(cfg, params) : pipelines::gestureRotations(cfg, layers, params);
  auto enc = deploy(o, params, rotations, cfg.seed);
  const auto rows = oracle::fidelityReport(stagesOn(enc), reference);

  std::cout << "parameters: " << params.securityTag() << "\n" << oracle::formatFidelity(rows);
  auto report = pipelines::reportHeader(o.pipeline, "ckks/" + o.profile + " vs exactsim", params, cfg);
  pipelines::Report jr = pipelines::Report::array();
  for (const auto& r : rows) jr.push_back({{"stage", r.stage}, {"mse", r.mse}, {"max_abs_err", r.maxAbsErr}, {"depth", r.depth}});
  report["fidelity"] = jr;
  if (o.pipeline == "vitals") {
    const auto gap = oracle::approxGapReport(oracle::fheFriendlyVitals(cube, cfg), oracle::standardVitals(cube, cfg));
    std::cout << "\n" << oracle::formatApproxGap(gap);
    pipelines::Report jg = pipelines::Report::array();
    for (const auto& g : gap) jg.push_back({{"band", g.band}, {"phase_mse", g.phaseMse}, {"rate_delta_bpm", g.rateDeltaBpm}});
    report["approx_gap"] = jg;
  } else {
    report["weights_digest"] = weightsDigest(layers);
  }
  const auto dir = outputDir(o);
  writeFile(dir / ("fidelity_" + o.pipeline + ".json"), pipelines::dumpReport(report));
  return kOk;
}

int cmdKeygen(const Options& o) {
  const auto params = loadParams(o);
  std::set<int> rotations;
  if (o.pipeline != "gesture") {
    const auto cfg = loadPipelineConfig("vitals", o);
    rotations.merge(pipelines::vitalsRotations(cfg, params));
  }
  if (o.pipeline != "vitals") {
    auto cfg = loadPipelineConfig("gesture", o);
    const auto layers = gestureModel(cfg, o);
    rotations.merge(pipelines::gestureRotations(cfg, layers, params));
  }
  auto ctx = std::make_shared<const ckks::CkksContext>(params);
  ckks::Sampler sampler(o.seed);
  ckks::KeyGenerator gen(ctx, sampler);
  const auto keys = gen.generate(rotations);

  const fs::path dir = o.keys.empty() ? outputDir(o) : fs::path(o.keys);
  fs::create_directories(dir);
  {
    std::ofstream out(dir / "client.keys", std::ios::binary);
    ckks::writeClientKeys(out, *ctx, keys.secretKey, keys.evaluation.publicKey);
    if (!out) throw Error("cannot write client.keys");
  }
  {
    std::ofstream out(dir / "cloud.keys", std::ios::binary);
    ckks::writeEvaluationKeys(out, *ctx, keys.evaluation);
    if (!out) throw Error("cannot write cloud.keys");
  }
  std::cout << "parameters: " << params.securityTag() << "\n"
            << keys.evaluation.galoisKeys.size() << " Galois keys for " << o.pipeline << "\n"
            << (dir / "client.keys").string() << "  " << fs::file_size(dir / "client.keys") << " bytes (secret, keep local)\n"
            << (dir / "cloud.keys").string() << "  " << fs::file_size(dir / "cloud.keys") << " bytes\n";
  return kOk;
}

int cmdSynth(const Options& o) {
  RadarCube cube;
  std::string name;
  if (o.scene == "vitals") {
    const auto spec = synthdata::vitalsFixture();
    cube = o.raw ? synthdata::generateRawCube(spec, o.seed) : synthdata::generateCube(spec, o.seed);
    name = "vitals";
  } else {
    const auto cfg = loadPipelineConfig("gesture", o);
    const auto& k = cfg.kernel;
    if (o.gestureClass >= o.classes) throw ConfigError("--class must be below --classes");
    const auto spec = synthdata::gestureFixture(o.gestureClass, o.classes, o.seed, k.F, k.A, k.R, k.D);
    cube = o.raw ? synthdata::generateRawCube(spec, o.seed) : synthdata::generateCube(spec, o.seed);
    name = "gesture_c" + std::to_string(o.gestureClass);
  }
  const fs::path path = o.output.empty() ? outputDir(o) / (name + "_s" + std::to_string(o.seed) + ".cube") : fs::path(o.output);
  if (path.extension() == ".csv") {
    std::ofstream out(path);
    pipelines::writeCubeCsv(out, cube);
    if (!out) throw Error("cannot write " + path.string());
  } else {
    pipelines::writeCubeFile(path.string(), cube);
  }
  std::cout << "wrote " << path.string() << " (F=" << cube.F << " A=" << cube.A << " R=" << cube.R << " D=" << cube.D
            << (o.raw ? ", raw IF samples" : "") << ")\n";
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Encrypted radar DSP: depth-bounded, data-oblivious vital-sign and gesture pipelines over CKKS"};
  app.require_subcommand(1);
  Options o;

  auto* keygen = app.add_subcommand("keygen", "generate client.keys and cloud.keys for a pipeline's rotations");
  addPipelineOption(keygen, o, true);
  addConfigOptions(keygen, o);
  addGestureOptions(keygen, o);
  keygen->add_option("--seed", o.seed, "key generation seed");
  keygen->add_option("--keys", o.keys, "key directory (default: output directory)");

  auto* synth = app.add_subcommand("synth", "write a synthetic radar cube");
  synth->add_option("--scene", o.scene, "scene")->check(CLI::IsMember({"vitals", "gesture"}));
  synth->add_option("--class", o.gestureClass, "gesture class");
  synth->add_option("--classes", o.classes, "number of gesture classes");
  synth->add_option("--seed", o.seed, "scene seed");
  synth->add_option("-o,--output", o.output, "cube path (.csv for text)");
  synth->add_flag("--raw", o.raw, "write raw IF samples instead of range bins");
  addConfigOptions(synth, o);

  auto* vitals = app.add_subcommand("run-vitals", "estimate respiration and heart rate");
  addConfigOptions(vitals, o);
  addBackendOptions(vitals, o);

  auto* gesture = app.add_subcommand("run-gesture", "classify a range-Doppler cube");
  addConfigOptions(gesture, o);
  addBackendOptions(gesture, o);
  addGestureOptions(gesture, o);

  auto* fidelity = app.add_subcommand("fidelity", "per-stage error of CKKS against the exact simulator");
  addPipelineOption(fidelity, o, false);
  addConfigOptions(fidelity, o);
  addGestureOptions(fidelity, o);
  fidelity->add_option("--keys", o.keys, "directory holding client.keys and cloud.keys");
  fidelity->add_option("--cube", o.cube, "input cube; defaults to the bundled synthetic fixture");
  fidelity->add_flag("--raw", o.raw, "the cube holds raw IF samples");

  auto* trace = app.add_subcommand("trace-check", "compare operation traces across random inputs");
  addPipelineOption(trace, o, false);
  addConfigOptions(trace, o);
  addGestureOptions(trace, o);
  trace->add_option("--trials", o.trials, "number of random inputs, evaluated concurrently");
  trace->add_flag("--vary-shape", o.varyShape, "give the last trial one extra frame (expects divergence)");

  auto* audit = app.add_subcommand("depth-audit", "per-stage multiplicative depth against the budget");
  addPipelineOption(audit, o, true);
  addConfigOptions(audit, o);
  addGestureOptions(audit, o);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kBadConfig;
  }

  try {
    if (*keygen) return cmdKeygen(o);
    if (*synth) return cmdSynth(o);
    if (*vitals) return cmdRunVitals(o);
    if (*gesture) return cmdRunGesture(o);
    if (*fidelity) return cmdFidelity(o);
    if (*trace) return cmdTraceCheck(o);
    if (*audit) return cmdDepthAudit(o);
  } catch (const TraceDivergence& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kDivergence;
  } catch (const DepthExhausted& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kDepth;
  } catch (const MissingKeys& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kMissingKeys;
  } catch (const MissingGaloisKey& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kMissingKeys;
  } catch (const FormatError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUnreadable;
  } catch (const ConfigError& e) {
    std::cerr << "error: invalid config: " << e.what() << "\n";
    return kBadConfig;
  } catch (const LayoutError& e) {
    std::cerr << "error: invalid config: " << e.what() << "\n";
    return kBadConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kOther;
  }
  return kOther;
}
