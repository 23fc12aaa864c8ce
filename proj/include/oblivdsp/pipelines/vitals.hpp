#pragma once

#include <set>
#include <string>
#include <vector>

#include "oblivdsp/kernels/kernels.hpp"
#include "oblivdsp/pipelines/client.hpp"
#include "oblivdsp/pipelines/config.hpp"
#include "oblivdsp/pipelines/stages.hpp"
#include "oblivdsp/vm/trace.hpp"

namespace oblivdsp::pipelines {

struct Band {
  std::string name;
  double low = 0, high = 0;        // Hz
  std::vector<std::size_t> bins;   // length-F DFT bins inside [low, high]
  std::size_t offset = 0;          // first output slot
  double gain = 1.0;               // applied to the band's DFT rows
};

// Public, input-independent operands of the vitals circuit.
class VitalsPlan {
 public:
  VitalsPlan(const PipelineConfig& cfg, std::size_t slots);

  const PipelineConfig& config() const noexcept { return cfg_; }
  std::size_t slots() const noexcept { return slots_; }
  std::size_t phaseOffset() const noexcept { return offset_; }
  std::size_t bandBlock() const noexcept { return block_; }
  const std::vector<Band>& bands() const noexcept { return bands_; }
  // Normalized Hann window over the F-1 phase increments.
  const std::vector<double>& window() const noexcept { return window_; }
  const std::vector<double>& taps(std::size_t band) const { return chains_.at(chainOf_.at(band)).fir.taps(); }
  double rangeThreshold() const;
  double bandThreshold(std::size_t band) const;

  struct Chain {
    kernels::Fir fir;
    std::vector<std::size_t> bands;
    kernels::LinearTransform dftRe, dftIm;
  };
  const std::vector<Chain>& chains() const noexcept { return chains_; }
  const std::vector<double>& frequencyRamp() const noexcept { return ramp_; }
  const std::vector<double>& bandMask() const noexcept { return mask_; }
  int dftBabyStep() const noexcept { return baby_; }

 private:
  PipelineConfig cfg_;
  std::size_t slots_, offset_, block_;
  std::vector<Band> bands_;
  std::vector<double> window_, ramp_, mask_;
  std::vector<Chain> chains_;
  std::vector<std::size_t> chainOf_;
  int baby_ = 1;
};

struct VitalsCloudOutput {
  vm::SlotVector numerator, denominator;          // decrypt point 1 (slot 0)
  vm::SlotVector freqNumerator, freqDenominator;  // decrypt point 2 (slot of each band's offset)
  std::vector<StageProbe> stages;
};

// Cloud side. re/im hold one packed frame each.
VitalsCloudOutput evaluateVitals(vm::Machine& m, const VitalsPlan& plan, std::span<const vm::SlotVector> re,
                                 std::span<const vm::SlotVector> im);

VitalResult recoverVitals(vm::ClientSession& client, const VitalsPlan& plan, const VitalsCloudOutput& out);

struct VitalsRun {
  VitalResult result;
  vm::TraceRecord trace;
  DepthLedger ledger;
  VitalsCloudOutput cloud;
};

// Preprocess, pack, encrypt, evaluate, recover.
VitalsRun runVitalsPipeline(const RadarCube& cube, const PipelineConfig& cfg, Deployment& deployment);
VitalsRun runVitalsFrames(const Frames& frames, const VitalsPlan& plan, Deployment& deployment);

// Rotation amounts the circuit uses (dry run on the exact simulator).
// Stage depths measured by a dry run with ample levels.
DepthLedger vitalsDepthLedger(const PipelineConfig& cfg);

std::set<int> vitalsRotations(const PipelineConfig& cfg, const ckks::CkksParams& params);

}  // namespace oblivdsp::pipelines
