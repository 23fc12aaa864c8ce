#include "oblivdsp/pipelines/gesture.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "oblivdsp/error.hpp"

namespace oblivdsp::pipelines {

using vm::Machine;
using vm::SlotVector;

namespace {

std::vector<kernels::FcLayer> foldFrameAverage(std::vector<kernels::FcLayer> layers, std::size_t frames) {
  if (layers.empty()) throw ConfigError("gesture pipeline needs FC layers");
  for (double& w : layers[0].weights) w /= static_cast<double>(frames);
  return layers;
}

double spectralScaleOf(const PipelineConfig& cfg) {
  return cfg.spectralScale > 0 ? cfg.spectralScale : defaultSpectralScale(cfg.kernel.layout());
}

}  // namespace

double defaultSpectralScale(const kernels::DopplerLayout& layout) {
  double sum = 0;
  for (double w : kernels::DopplerDft::window(layout.D)) sum += w;
  return static_cast<double>(layout.R * layout.A) * sum * sum;
}

double calibrateSpectralScale(const std::vector<RadarCube>& cubes, const PipelineConfig& cfg) {
  const auto layout = cfg.kernel.layout();
  const std::size_t d = layout.D;
  const auto w = kernels::DopplerDft::window(d);
  const auto mask = kernels::notchMask(layout.active(), layout, cfg.kernel.notchWidth);
  double best = 0;
  for (const auto& cube : cubes) {
    for (const auto& frame : preprocessGesture(cube)) {
      std::vector<double> sums(d, 0.0);
      for (std::size_t row = 0; row < layout.A * layout.R; ++row) {
        for (std::size_t k = 0; k < d; ++k) {
          cplx acc = 0;
          for (std::size_t c = 0; c < d; ++c) {
            const double ang = -2.0 * std::numbers::pi * static_cast<double>(k * c) / static_cast<double>(d);
            acc += w[c] * frame[row * d + c] * std::polar(1.0, ang);
          }
          const std::size_t bin = kernels::DopplerDft::shifted(k, d);
          sums[bin] += mask[row * d + bin] * std::norm(acc);
        }
      }
      for (double s : sums) best = std::max(best, s);
    }
  }
  if (!(best > 0)) throw ConfigError("calibration cubes carry no Doppler power");
  return best;
}

GesturePlan::GesturePlan(const PipelineConfig& cfg, std::size_t slots, std::vector<kernels::FcLayer> layers)
    : cfg_(cfg),
      slots_(slots),
      layout_(cfg.kernel.layout()),
      gain_(1.0 / std::sqrt(spectralScaleOf(cfg))),
      dft_(slots, layout_, gain_),
      layers_(std::move(layers)),
      network_(slots, foldFrameAverage(layers_, cfg.kernel.F)) {
  cfg_.validate();
  if (slots % layout_.D != 0) throw ConfigError("D must divide the slot count");
  if (layers_.front().cols != layout_.active()) throw LayoutError("first FC layer must take A*R*D features");
  const auto& dims = cfg_.kernel.fcDims;
  if (!dims.empty()) {
    if (dims.size() != layers_.size() + 1 || dims[0] != layers_[0].cols) throw LayoutError("FC weights do not match fc_dims");
    for (std::size_t l = 0; l < layers_.size(); ++l) {
      if (layers_[l].rows != dims[l + 1]) throw LayoutError("FC weights do not match fc_dims");
    }
  }
}

GestureCloudOutput evaluateGesture(Machine& m, const GesturePlan& plan, std::span<const SlotVector> re,
                                   std::span<const SlotVector> im) {
  const auto& cfg = plan.config();
  const auto& layout = plan.layout();
  if (re.size() != cfg.kernel.F || im.size() != cfg.kernel.F) throw LayoutError("gesture pipeline expects F frames");
  std::vector<std::size_t> active(layout.active());
  for (std::size_t i = 0; i < active.size(); ++i) active[i] = i;

  GestureCloudOutput out;
  StageProbe dft{"Doppler DFT", {}}, power{"|z|^2", {}}, notched{"Notch mask", {}}, soft{"Soft power gamma=4", {}},
      weighted{"Feature weighting", {}};
  SlotVector acc;
  for (std::size_t t = 0; t < re.size(); ++t) {
    const auto z = plan.dft().apply(m, re[t], im[t]);
    dft.items.push_back({z.re, active});
    dft.items.push_back({z.im, active});
    const SlotVector p = kernels::framePower(m, z.re, z.im);
    power.items.push_back({p, active});
    const SlotVector pn = kernels::notch(m, p, layout, cfg.kernel.notchWidth);
    notched.items.push_back({pn, active});
    const auto sp = kernels::dopplerSoftPower(m, pn, layout, cfg.kernel.gammaDoppler);
    soft.items.push_back({sp.weights, active});
    weighted.items.push_back({sp.features, active});
    acc = acc.valid() ? m.add(acc, sp.features) : sp.features;
  }
  soft.name = "Soft power gamma=" + std::to_string(cfg.kernel.gammaDoppler);
  out.stages = {dft, power, notched, soft, weighted, StageProbe{"Frame accum.", {{acc, active}}}};

  const auto stages = plan.network().forwardStages(m, acc);
  const auto& layers = plan.network().layers();
  for (std::size_t l = 0; l < stages.size(); ++l) {
    std::vector<std::size_t> rows(layers[l].rows);
    for (std::size_t i = 0; i < rows.size(); ++i) rows[i] = i;
    const bool last = l + 1 == stages.size();
    out.stages.push_back({"FC" + std::to_string(l + 1) + (last ? "" : " + square"), {{stages[l], rows}}});
  }
  out.logits = stages.back();
  return out;
}

ClassResult recoverClass(vm::ClientSession& client, const GesturePlan& plan, const GestureCloudOutput& out) {
  const auto dec = client.decrypt(out.logits);
  return classify(std::vector<double>(dec.begin(), dec.begin() + static_cast<long>(plan.network().outputs())));
}

GestureRun runGestureFrames(const Frames& frames, const GesturePlan& plan, Deployment& deployment) {
  const auto& cfg = plan.config();
  if (frames.size() != cfg.kernel.F) throw LayoutError("frame count does not match F");
  std::vector<SlotVector> re, im;
  for (const auto& f : frames) {
    const auto packed = packDoppler(f, plan.layout(), plan.slots());
    re.push_back(deployment.client->encrypt(packed.re));
    im.push_back(deployment.client->encrypt(packed.im));
  }
  Machine m(deployment.backend, cfg.digest());
  GestureRun run;
  try {
    run.cloud = evaluateGesture(m, plan, re, im);
  } catch (const DepthExhausted&) {
    checkDepthBudget(gestureDepthLedger(cfg, plan.layers()), m.maxLevel());
    throw;
  }
  run.ledger = depthLedger(run.cloud.stages, m.maxLevel());
  run.trace = m.takeTrace();
  run.result = recoverClass(*deployment.client, plan, run.cloud);
  return run;
}

GestureRun runClassificationPipeline(const RadarCube& cube, const PipelineConfig& cfg,
                                     const std::vector<kernels::FcLayer>& layers, Deployment& deployment) {
  const auto& k = cfg.kernel;
  if (cube.F != k.F || cube.A != k.A || cube.R != k.R || cube.D != k.D) {
    throw ConfigError("cube shape does not match the config (F, A, R, D)");
  }
  const GesturePlan plan(cfg, deployment.backend->slotCount(), layers);
  return runGestureFrames(preprocessGesture(cube), plan, deployment);
}

DepthLedger gestureDepthLedger(const PipelineConfig& cfg, const std::vector<kernels::FcLayer>& layers) {
  auto d = makeExactSim(ckks::CkksParams::desk(kAuditDepth));
  const GesturePlan plan(cfg, d.backend->slotCount(), layers);
  const Frames zero(cfg.kernel.F, std::vector<cplx>(cfg.kernel.layout().active()));
  return runGestureFrames(zero, plan, d).ledger;
}

std::set<int> gestureRotations(const PipelineConfig& cfg, const std::vector<kernels::FcLayer>& layers,
                               const ckks::CkksParams& params) {
  auto d = makeExactSim(params);
  const GesturePlan plan(cfg, d.backend->slotCount(), layers);
  const Frames zero(cfg.kernel.F, std::vector<cplx>(cfg.kernel.layout().active()));
  return runGestureFrames(zero, plan, d).trace.rotationAmounts();
}

std::vector<kernels::FcLayer> randomNetwork(const std::vector<std::size_t>& dims, std::uint64_t seed) {
  if (dims.size() < 2) throw ConfigError("network needs at least input and output sizes");
  std::mt19937_64 rng(seed);
  std::vector<kernels::FcLayer> layers;
  for (std::size_t l = 0; l + 1 < dims.size(); ++l) {
    const std::size_t rows = dims[l + 1], cols = dims[l];
    const double bound = 1.0 / std::sqrt(static_cast<double>(cols));
    std::uniform_real_distribution<double> u(-bound, bound);
    kernels::FcLayer layer{rows, cols, std::vector<double>(rows * cols), std::vector<double>(rows)};
    for (double& w : layer.weights) w = u(rng);
    for (double& b : layer.bias) b = u(rng);
    layers.push_back(std::move(layer));
  }
  return layers;
}

}  // namespace oblivdsp::pipelines
