#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "oblivdsp/kernels/config.hpp"

namespace oblivdsp::pipelines {

enum class FirDesign { lowpass, bandpass, file };

// Everything public about a pipeline run. Serialized as key=value lines.
struct PipelineConfig {
  kernels::KernelConfig kernel;
  double frameRate = 20.0;
  double respLow = 0.1, respHigh = 0.6;    // Hz
  double heartLow = 0.8, heartHigh = 2.5;  // Hz
  FirDesign firDesign = FirDesign::lowpass;
  std::size_t firTaps = 15;
  double firCutoff = 0.35;  // fraction of the frame rate
  std::string respTapsFile, heartTapsFile;
  double phaseScale = 1.0;     // public I/Q normalization folded into the FIR taps
  double respGain = 2.0, heartGain = 6.0;  // per-band DFT gains; rates are gain-invariant
  double spectralScale = 0.0;  // gesture DFT gain 1/sqrt(s); 0 selects R*A*(sum w)^2
  std::uint64_t seed = 1;

  static PipelineConfig vitalsDefault();
  static PipelineConfig gestureDefault();

  // key=value; unknown keys and bad values throw ConfigError.
  void set(const std::string& key, const std::string& value);
  std::map<std::string, std::string> entries() const;
  std::string serialize() const;
  // FNV-1a over the canonical serialization.
  std::string digest() const;
  void validate() const;
  // validate() plus the FIR checks that only apply to the vitals chain.
  void validateVitals() const;
};

// '#' comments and blank lines ignored.
PipelineConfig parseConfig(std::istream& in, PipelineConfig base = {});
PipelineConfig loadConfig(const std::string& path, PipelineConfig base = {});

}  // namespace oblivdsp::pipelines
