#pragma once

#include <cstdint>
#include <vector>

#include "oblivdsp/pipelines/cube.hpp"

namespace oblivdsp::synthdata {

// Periodic radial displacement d(t) = amplitude * sin(2 pi freq t + phase).
struct Motion {
  double freq = 0;       // Hz
  double amplitude = 0;  // m
  double phase = 0;      // rad
};

struct Target {
  std::size_t rangeBin = 0;
  double amplitude = 1.0;
  double offset = 0.0;    // static displacement, m
  double velocity = 0.0;  // radial velocity, m/s
  std::vector<Motion> motions;
};

struct SceneSpec {
  std::vector<Target> targets;
  double clutterAmplitude = 0.0;
  double noiseStd = 0.0;  // complex Gaussian, E|n|^2 = noiseStd^2
  double wavelength = 5e-3;
  double frameRate = 20.0;
  double chirpInterval = 1e-4;  // s between chirps within a frame
  std::size_t F = 200, A = 1, R = 16, D = 1;

  // Throws ConfigError (bins out of range, Nyquist violation, bad sizes).
  void validate() const;
};

// Phase 4 pi d(t) / lambda on each target bin plus static clutter and noise.
pipelines::RadarCube generateCube(const SceneSpec& spec, std::uint64_t seed);

// The same scene as raw IF samples: each range bin r becomes a beat tone exp(2 pi i r n / R) over
// R fast-time samples, so pipelines::rangeFft(generateRawCube(s, seed), s.R) == generateCube(s, seed).
pipelines::RadarCube generateRawCube(const SceneSpec& spec, std::uint64_t seed);

// Target at bin 12 breathing at 0.25 Hz (+-4 mm) with a 1.2 Hz (+-0.3 mm) heartbeat, lambda 5 mm,
// 200 frames at 20 Hz.
SceneSpec vitalsFixture();

// Hand-motion scene for classifier fixtures: class k moves radially at a class-specific velocity
// (Doppler bin) with per-seed jitter in range bin, amplitude and speed.
SceneSpec gestureFixture(std::size_t gestureClass, std::size_t classes, std::uint64_t seed, std::size_t F = 4,
                         std::size_t A = 2, std::size_t R = 16, std::size_t D = 8);

}  // namespace oblivdsp::synthdata
