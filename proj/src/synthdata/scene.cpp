#include "oblivdsp/synthdata/scene.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <string>

#include "oblivdsp/error.hpp"

namespace oblivdsp::synthdata {

void SceneSpec::validate() const {
  if (F == 0 || A == 0 || R == 0 || D == 0) throw ConfigError("scene dimensions must be positive");
  if (!(frameRate > 0) || !(wavelength > 0) || !(chirpInterval > 0)) {
    throw ConfigError("frame rate, wavelength and chirp interval must be positive");
  }
  if (noiseStd < 0) throw ConfigError("noise standard deviation must be nonnegative");
  for (const auto& t : targets) {
    if (t.rangeBin >= R) throw ConfigError("target range bin outside the cube");
    for (const auto& m : t.motions) {
      if (m.freq < 0 || m.freq >= frameRate / 2) {
        throw ConfigError("motion at " + std::to_string(m.freq) + " Hz violates Nyquist for frame rate " +
                          std::to_string(frameRate) + " Hz");
      }
    }
  }
}

pipelines::RadarCube generateCube(const SceneSpec& spec, std::uint64_t seed) {
  spec.validate();
  using pipelines::cplx;
  pipelines::RadarCube cube(spec.F, spec.A, spec.R, spec.D, spec.frameRate, spec.wavelength);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> angle(-std::numbers::pi, std::numbers::pi);
  std::normal_distribution<double> gauss(0.0, spec.noiseStd / std::numbers::sqrt2);

  std::vector<cplx> clutter(spec.A * spec.R);
  for (auto& c : clutter) c = std::polar(spec.clutterAmplitude, angle(rng));
  std::vector<double> targetPhase(spec.targets.size());
  for (auto& p : targetPhase) p = angle(rng);

  const double k = 4.0 * std::numbers::pi / spec.wavelength;
  for (std::size_t t = 0; t < spec.F; ++t) {
    const double time = static_cast<double>(t) / spec.frameRate;
    for (std::size_t a = 0; a < spec.A; ++a)
      for (std::size_t r = 0; r < spec.R; ++r)
        for (std::size_t c = 0; c < spec.D; ++c) cube.at(t, a, r, c) = clutter[a * spec.R + r];
    for (std::size_t i = 0; i < spec.targets.size(); ++i) {
      const auto& tg = spec.targets[i];
      double d = tg.offset + tg.velocity * time;
      for (const auto& m : tg.motions) d += m.amplitude * std::sin(2 * std::numbers::pi * m.freq * time + m.phase);
      for (std::size_t a = 0; a < spec.A; ++a) {
        for (std::size_t c = 0; c < spec.D; ++c) {
          // Radial motion during the chirp train gives the Doppler phase ramp.
          const double chirp = tg.velocity * spec.chirpInterval * static_cast<double>(c);
          cube.at(t, a, tg.rangeBin, c) += std::polar(tg.amplitude, k * (d + chirp) + targetPhase[i]);
        }
      }
    }
  }
  if (spec.noiseStd > 0) {
    for (auto& z : cube.samples) {
      const double re = gauss(rng);
      z += cplx(re, gauss(rng));
    }
  }
  return cube;
}

pipelines::RadarCube generateRawCube(const SceneSpec& spec, std::uint64_t seed) {
  const auto bins = generateCube(spec, seed);
  pipelines::RadarCube raw(bins.F, bins.A, bins.R, bins.D, bins.frameRate, bins.wavelength);
  const std::size_t n = spec.R;
  for (std::size_t t = 0; t < bins.F; ++t)
    for (std::size_t a = 0; a < bins.A; ++a)
      for (std::size_t c = 0; c < bins.D; ++c)
        for (std::size_t s = 0; s < n; ++s) {
          pipelines::cplx acc = 0;
          for (std::size_t r = 0; r < n; ++r) {
            acc += bins.at(t, a, r, c) *
                   std::polar(1.0, 2 * std::numbers::pi * static_cast<double>((r * s) % n) / static_cast<double>(n));
          }
          raw.at(t, a, s, c) = acc;
        }
  return raw;
}

SceneSpec gestureFixture(std::size_t gestureClass, std::size_t classes, std::uint64_t seed, std::size_t F,
                         std::size_t A, std::size_t R, std::size_t D) {
  if (D < 4 || classes == 0 || classes > D - 2 || gestureClass >= classes) {
    throw ConfigError("gesture fixture needs 1 <= classes <= D - 2 and class < classes");
  }
  if (R < 4) throw ConfigError("gesture fixture needs R >= 4");
  // Doppler offsets +-1 .. +-(D/2 - 1), skipping the notched zero bin.
  std::vector<int> offsets;
  const int half = static_cast<int>(D / 2);
  for (int b = -(half - 1); b <= half - 1; ++b) {
    if (b != 0) offsets.push_back(b);
  }
  const int bin = offsets[gestureClass * offsets.size() / classes];

  SceneSpec s;
  s.F = F;
  s.A = A;
  s.R = R;
  s.D = D;
  s.clutterAmplitude = 0.3;
  s.noiseStd = 0.05;
  s.chirpInterval = 1e-3;
  std::mt19937_64 rng(seed * 1000003u + gestureClass);
  std::uniform_real_distribution<double> jitter(-0.1, 0.1), amp(0.5, 1.5);
  std::uniform_int_distribution<std::size_t> where(1, R - 2);
  Target t;
  t.rangeBin = where(rng);
  t.amplitude = amp(rng);
  // 4 pi v Tc / lambda = 2 pi bin / D.
  t.velocity = (1.0 + jitter(rng)) * static_cast<double>(bin) * s.wavelength / (2.0 * static_cast<double>(D) * s.chirpInterval);
  s.targets = {t};
  return s;
}

SceneSpec vitalsFixture() {
  SceneSpec s;
  s.F = 200;
  s.A = 1;
  s.R = 16;
  s.D = 1;
  s.frameRate = 20.0;
  s.wavelength = 5e-3;
  s.clutterAmplitude = 0.5;
  s.noiseStd = 0.01;
  Target t;
  t.rangeBin = 12;
  t.amplitude = 1.0;
  t.motions = {{0.25, 4e-3, 0.0}, {1.2, 0.3e-3, 0.0}};
  s.targets = {t};
  return s;
}

}  // namespace oblivdsp::synthdata
