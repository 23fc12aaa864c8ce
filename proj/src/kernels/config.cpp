#include "oblivdsp/kernels/config.hpp"

#include <bit>
#include <string>

#include "oblivdsp/error.hpp"

namespace oblivdsp::kernels {

bool isPowerOfTwo(long long x) { return x > 0 && (x & (x - 1)) == 0; }

int exponentLog2(int value, const char* what) {
  if (!isPowerOfTwo(value)) throw ConfigError(std::string(what) + " must be a power of two >= 1");
  return std::countr_zero(static_cast<unsigned>(value));
}

void KernelConfig::validate() const {
  if (R == 0 || D == 0 || A == 0 || F < 2) throw ConfigError("R, D, A must be >= 1 and F >= 2");
  if (!isPowerOfTwo(static_cast<long long>(D))) throw ConfigError("D must be a power of two");
  exponentLog2(gamma, "gamma");
  exponentLog2(gammaDoppler, "Doppler gamma");
  exponentLog2(pPhi, "P_phi");
  if (taylorOrder != 1 && taylorOrder != 3) throw ConfigError("Taylor order must be 1 or 3");
  if (notchWidth < 0) throw ConfigError("notch width must be nonnegative");
  if (respirationTaps.size() > F || heartTaps.size() > F) throw ConfigError("FIR longer than the frame window");
  if (!fcDims.empty() && fcDims.size() < 2) throw ConfigError("FC dimensions need input and output sizes");
}

}  // namespace oblivdsp::kernels
