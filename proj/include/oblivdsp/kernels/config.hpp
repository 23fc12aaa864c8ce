#pragma once

#include <cstddef>
#include <vector>

namespace oblivdsp::kernels {

enum class TaylorForm {
  arcsin,   // y(x^2 + y^2) + y^3/6
  literal,  // y x^2 - y^3/3
};

// Interleaved range-Doppler packing: slot[a*R*D + r*D + c].
struct DopplerLayout {
  std::size_t A = 1, R = 1, D = 1;

  std::size_t active() const noexcept { return A * R * D; }
  std::size_t slot(std::size_t a, std::size_t r, std::size_t c) const noexcept { return a * R * D + r * D + c; }
};

struct KernelConfig {
  std::size_t R = 16;
  std::size_t D = 32;
  std::size_t A = 3;
  std::size_t F = 200;
  int gamma = 2;         // range soft attention
  int gammaDoppler = 4;  // Doppler soft power
  int pPhi = 2;
  int taylorOrder = 3;
  TaylorForm taylorForm = TaylorForm::arcsin;
  std::vector<double> respirationTaps;
  std::vector<double> heartTaps;
  int notchWidth = 1;
  std::vector<std::size_t> fcDims;  // input, hidden..., classes

  DopplerLayout layout() const { return DopplerLayout{A, R, D}; }
  // Throws ConfigError.
  void validate() const;
};

bool isPowerOfTwo(long long x);
// log2 of a power of two; throws ConfigError otherwise.
int exponentLog2(int value, const char* what);

}  // namespace oblivdsp::kernels
