#pragma once

#include <set>
#include <vector>

#include "oblivdsp/kernels/kernels.hpp"
#include "oblivdsp/pipelines/client.hpp"
#include "oblivdsp/pipelines/config.hpp"
#include "oblivdsp/pipelines/stages.hpp"
#include "oblivdsp/vm/trace.hpp"

namespace oblivdsp::pipelines {

class GesturePlan {
 public:
  // layers: FC weights over features in layout order a*R*D + r*D + c.
  GesturePlan(const PipelineConfig& cfg, std::size_t slots, std::vector<kernels::FcLayer> layers);

  const PipelineConfig& config() const noexcept { return cfg_; }
  std::size_t slots() const noexcept { return slots_; }
  const kernels::DopplerLayout& layout() const noexcept { return layout_; }
  const kernels::DopplerDft& dft() const noexcept { return dft_; }
  const kernels::FcNetwork& network() const noexcept { return network_; }
  // Layers as supplied (before folding 1/F into the first one).
  const std::vector<kernels::FcLayer>& layers() const noexcept { return layers_; }
  // DFT gain 1/sqrt(s).
  double gain() const noexcept { return gain_; }

 private:
  PipelineConfig cfg_;
  std::size_t slots_;
  kernels::DopplerLayout layout_;
  double gain_;
  kernels::DopplerDft dft_;
  std::vector<kernels::FcLayer> layers_;
  kernels::FcNetwork network_;
};

// R*A*(sum of the Hann window)^2: the largest per-bin power sum any normalized frame can reach.
double defaultSpectralScale(const kernels::DopplerLayout& layout);

// Largest notched per-Doppler-bin power sum (unit DFT gain) over the preprocessed frames of the
// given cubes. Using it as spectral_scale keeps the soft-power weights of similar inputs in [0, 1].
double calibrateSpectralScale(const std::vector<RadarCube>& cubes, const PipelineConfig& cfg);

struct GestureCloudOutput {
  vm::SlotVector logits;
  std::vector<StageProbe> stages;
};

GestureCloudOutput evaluateGesture(vm::Machine& m, const GesturePlan& plan, std::span<const vm::SlotVector> re,
                                   std::span<const vm::SlotVector> im);

ClassResult recoverClass(vm::ClientSession& client, const GesturePlan& plan, const GestureCloudOutput& out);

struct GestureRun {
  ClassResult result;
  vm::TraceRecord trace;
  DepthLedger ledger;
  GestureCloudOutput cloud;
};

GestureRun runClassificationPipeline(const RadarCube& cube, const PipelineConfig& cfg,
                                     const std::vector<kernels::FcLayer>& layers, Deployment& deployment);
GestureRun runGestureFrames(const Frames& frames, const GesturePlan& plan, Deployment& deployment);

DepthLedger gestureDepthLedger(const PipelineConfig& cfg, const std::vector<kernels::FcLayer>& layers);

std::set<int> gestureRotations(const PipelineConfig& cfg, const std::vector<kernels::FcLayer>& layers,
                               const ckks::CkksParams& params);

// Random dense network matching cfg.kernel.fcDims (weights ~ U(-1,1)/sqrt(cols)).
std::vector<kernels::FcLayer> randomNetwork(const std::vector<std::size_t>& dims, std::uint64_t seed);

}  // namespace oblivdsp::pipelines
