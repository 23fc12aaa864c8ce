#pragma once

#include <optional>
#include <string>
#include <vector>

#include "oblivdsp/kernels/kernels.hpp"
#include "oblivdsp/pipelines/config.hpp"
#include "oblivdsp/pipelines/cube.hpp"

// Plaintext references for both pipelines: the standard DSP chain and the
// same polynomial chain the encrypted circuit evaluates, in double precision.
namespace oblivdsp::oracle {

struct BandTrace {
  std::string name;
  std::vector<double> signal;          // filtered phase increments (F-1)
  std::optional<double> rateBpm;       // the pipeline's own estimator
  std::optional<double> peakBpm;       // FFT peak pick over the band bins
};

struct VitalsTrace {
  std::vector<double> energy;
  std::optional<double> targetBin;
  std::vector<double> phase;           // unwrapped phase of the selected bin (standard chain only)
  std::vector<BandTrace> bands;        // respiration, heart
  bool lowConfidence = false;

  std::optional<double> rrBpm() const { return bands.at(0).rateBpm; }
  std::optional<double> hrBpm() const { return bands.at(1).rateBpm; }
};

// Hard argmax bin, atan2 phase, unwrap, differentiate, FIR, FFT peak pick.
VitalsTrace standardVitals(const pipelines::RadarCube& cube, const pipelines::PipelineConfig& cfg);
// Soft attention, soft I/Q, FIR on I/Q, Taylor arctan, narrowband DFT, sharpened weighted average.
VitalsTrace fheFriendlyVitals(const pipelines::RadarCube& cube, const pipelines::PipelineConfig& cfg);

// Unwrap by standard +-pi jump correction.
std::vector<double> unwrap(const std::vector<double>& phase);

struct ApproxGapRow {
  std::string band;
  double phaseMse = 0;
  double rateDeltaBpm = 0;   // peak-pick rate of the polynomial chain minus the standard one
};
using ApproxGapReport = std::vector<ApproxGapRow>;

ApproxGapReport approxGapReport(const VitalsTrace& fheFriendly, const VitalsTrace& standard);
std::string formatApproxGap(const ApproxGapReport& report);

// Frame-averaged soft-power features in a*R*D + r*D + c order.
std::vector<double> gestureFeatures(const pipelines::RadarCube& cube, const pipelines::PipelineConfig& cfg);

struct GestureReference {
  std::vector<double> features;
  std::vector<double> logits;
  std::size_t predicted = 0;
};
GestureReference gesturePipeline(const pipelines::RadarCube& cube, const pipelines::PipelineConfig& cfg,
                                 const std::vector<kernels::FcLayer>& layers);

}  // namespace oblivdsp::oracle
