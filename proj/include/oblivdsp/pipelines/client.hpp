#pragma once

#include <optional>
#include <vector>

#include "oblivdsp/kernels/config.hpp"
#include "oblivdsp/pipelines/cube.hpp"

namespace oblivdsp::pipelines {

using Frames = std::vector<std::vector<cplx>>;

// Plaintext range FFT for cubes holding raw IF samples along the R axis:
// out[r] = (1/N) sum_n raw[n] exp(-2 pi i r n / N), keeping the first `bins` range bins.
RadarCube rangeFft(const RadarCube& raw, std::size_t bins);

// Clutter removal (mean over frames) then per-frame peak normalization. Frames whose residue is
// below 1e-12 of the raw peak are set to zero instead of being scaled up.
// Frames are [t][r]; antennas and chirps are averaged coherently.
Frames preprocessVital(const RadarCube& cube);
// Clutter removal then one global peak normalization. Frames are [t][a*R*D + r*D + c].
Frames preprocessGesture(const RadarCube& cube);

struct PackedFrame {
  std::vector<double> re, im;
};
// Range bins in the first R slots.
PackedFrame packVital(const std::vector<cplx>& frame, std::size_t slots);
// Interleaved a*R*D + r*D + c (the frame is already in that order).
PackedFrame packDoppler(const std::vector<cplx>& frame, const kernels::DopplerLayout& layout, std::size_t slots);
std::vector<cplx> unpack(const PackedFrame& packed, std::size_t count);

struct VitalResult {
  double numerator = 0, denominator = 0;  // first decrypt point
  std::optional<double> targetBin;        // N / Dn, absent when low confidence
  double rrNumerator = 0, rrDenominator = 0, hrNumerator = 0, hrDenominator = 0;
  std::optional<double> rrBpm, hrBpm;
  bool lowConfidence = false;
};

struct ClassResult {
  std::vector<double> logits;
  std::size_t predicted = 0;
};

// Client-side recovery: scalar division and argmax only.
std::optional<double> safeDivide(double num, double den, double threshold);
ClassResult classify(std::vector<double> logits);

}  // namespace oblivdsp::pipelines
