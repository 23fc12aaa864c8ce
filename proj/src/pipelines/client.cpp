#include "oblivdsp/pipelines/client.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "oblivdsp/error.hpp"

namespace oblivdsp::pipelines {

namespace {

void removeClutter(Frames& frames) {
  if (frames.empty()) return;
  std::vector<cplx> mean(frames[0].size());
  for (const auto& f : frames)
    for (std::size_t i = 0; i < f.size(); ++i) mean[i] += f[i];
  for (auto& m : mean) m /= static_cast<double>(frames.size());
  for (auto& f : frames)
    for (std::size_t i = 0; i < f.size(); ++i) f[i] -= mean[i];
}

double peak(const std::vector<cplx>& v) {
  double m = 0;
  for (const auto& z : v) m = std::max(m, std::abs(z));
  return m;
}

// Residue of clutter removal below this fraction of the raw peak counts as an empty window.
constexpr double kResidue = 1e-12;

void scale(std::vector<cplx>& v, double peakValue, double rawPeak) {
  if (!(peakValue > kResidue * rawPeak)) {
    std::fill(v.begin(), v.end(), cplx{});
    return;
  }
  for (auto& z : v) z /= peakValue;
}

double rawPeak(const RadarCube& cube) {
  double m = 0;
  for (const auto& z : cube.samples) m = std::max(m, std::abs(z));
  return m;
}

}  // namespace

RadarCube rangeFft(const RadarCube& raw, std::size_t bins) {
  raw.validate();
  const std::size_t n = raw.R;
  if (bins == 0 || bins > n) throw ConfigError("range bins must lie in [1, samples per chirp]");
  RadarCube out(raw.F, raw.A, bins, raw.D, raw.frameRate, raw.wavelength);
  std::vector<cplx> twiddle(n);
  for (std::size_t k = 0; k < n; ++k) {
    twiddle[k] = std::polar(1.0 / static_cast<double>(n), -2 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(n));
  }
  for (std::size_t t = 0; t < raw.F; ++t)
    for (std::size_t a = 0; a < raw.A; ++a)
      for (std::size_t c = 0; c < raw.D; ++c)
        for (std::size_t r = 0; r < bins; ++r) {
          cplx acc = 0;
          for (std::size_t s = 0; s < n; ++s) acc += raw.at(t, a, s, c) * twiddle[(r * s) % n];
          out.at(t, a, r, c) = acc;
        }
  return out;
}

Frames preprocessVital(const RadarCube& cube) {
  cube.validate();
  Frames frames(cube.F, std::vector<cplx>(cube.R));
  const double norm = 1.0 / static_cast<double>(cube.A * cube.D);
  for (std::size_t t = 0; t < cube.F; ++t)
    for (std::size_t a = 0; a < cube.A; ++a)
      for (std::size_t r = 0; r < cube.R; ++r)
        for (std::size_t c = 0; c < cube.D; ++c) frames[t][r] += norm * cube.at(t, a, r, c);
  removeClutter(frames);
  const double raw = rawPeak(cube);
  for (auto& f : frames) scale(f, peak(f), raw);
  return frames;
}

Frames preprocessGesture(const RadarCube& cube) {
  cube.validate();
  Frames frames(cube.F, std::vector<cplx>(cube.A * cube.R * cube.D));
  for (std::size_t t = 0; t < cube.F; ++t)
    for (std::size_t a = 0; a < cube.A; ++a)
      for (std::size_t r = 0; r < cube.R; ++r)
        for (std::size_t c = 0; c < cube.D; ++c) frames[t][(a * cube.R + r) * cube.D + c] = cube.at(t, a, r, c);
  removeClutter(frames);
  double g = 0;
  for (const auto& f : frames) g = std::max(g, peak(f));
  const double raw = rawPeak(cube);
  for (auto& f : frames) scale(f, g, raw);
  return frames;
}

PackedFrame packVital(const std::vector<cplx>& frame, std::size_t slots) {
  if (frame.size() > slots) throw LayoutError("range bins exceed the slot count");
  PackedFrame p{std::vector<double>(slots, 0.0), std::vector<double>(slots, 0.0)};
  for (std::size_t r = 0; r < frame.size(); ++r) {
    p.re[r] = frame[r].real();
    p.im[r] = frame[r].imag();
  }
  return p;
}

PackedFrame packDoppler(const std::vector<cplx>& frame, const kernels::DopplerLayout& layout, std::size_t slots) {
  if (layout.active() > slots) throw LayoutError("A*R*D exceeds the slot count");
  if (frame.size() != layout.active()) throw LayoutError("frame size does not match the Doppler layout");
  return packVital(frame, slots);
}

std::vector<cplx> unpack(const PackedFrame& packed, std::size_t count) {
  if (count > packed.re.size() || packed.re.size() != packed.im.size()) throw LayoutError("unpack beyond the packed size");
  std::vector<cplx> out(count);
  for (std::size_t i = 0; i < count; ++i) out[i] = cplx(packed.re[i], packed.im[i]);
  return out;
}

std::optional<double> safeDivide(double num, double den, double threshold) {
  if (!(std::fabs(den) > threshold)) return std::nullopt;
  return num / den;
}

ClassResult classify(std::vector<double> logits) {
  ClassResult r;
  r.logits = std::move(logits);
  for (std::size_t i = 1; i < r.logits.size(); ++i) {
    if (r.logits[i] > r.logits[r.predicted]) r.predicted = i;
  }
  return r;
}

}  // namespace oblivdsp::pipelines
