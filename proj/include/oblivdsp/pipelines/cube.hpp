#pragma once

#include <complex>
#include <cstddef>
#include <iosfwd>
#include <string>
#include <vector>

namespace oblivdsp::pipelines {

using cplx = std::complex<double>;

// Range-Doppler-antenna samples over F frames, indexed [t][a][r][c].
struct RadarCube {
  std::size_t F = 0, A = 0, R = 0, D = 0;
  double frameRate = 20.0;   // Hz
  double wavelength = 5e-3;  // m
  std::vector<cplx> samples;

  RadarCube() = default;
  RadarCube(std::size_t f, std::size_t a, std::size_t r, std::size_t d, double rate, double lambda);

  std::size_t index(std::size_t t, std::size_t a, std::size_t r, std::size_t c) const noexcept {
    return ((t * A + a) * R + r) * D + c;
  }
  cplx& at(std::size_t t, std::size_t a, std::size_t r, std::size_t c) { return samples[index(t, a, r, c)]; }
  const cplx& at(std::size_t t, std::size_t a, std::size_t r, std::size_t c) const {
    return samples[index(t, a, r, c)];
  }
  // Throws FormatError on empty dimensions or non-finite samples.
  void validate() const;
  bool operator==(const RadarCube&) const = default;
};

// Binary: "OBLVCUBE", u32 F A R D, f64 frameRate, f64 wavelength, then f64 re/im pairs, little endian.
void writeCube(std::ostream& out, const RadarCube& cube);
RadarCube readCube(std::istream& in);
void writeCubeFile(const std::string& path, const RadarCube& cube);
RadarCube readCubeFile(const std::string& path);

// CSV: header "F,A,R,D,frameRate,wavelength" + one value line, then "t,a,r,c,re,im" rows
// (missing rows are zero).
RadarCube readCubeCsv(std::istream& in);
void writeCubeCsv(std::ostream& out, const RadarCube& cube);
// Picks the format from the extension (.csv) or the magic bytes.
RadarCube loadCube(const std::string& path);

}  // namespace oblivdsp::pipelines
