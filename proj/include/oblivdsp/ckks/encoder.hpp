#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include "oblivdsp/ckks/params.hpp"
#include "oblivdsp/ring/rns.hpp"

namespace oblivdsp::ckks {

struct Plaintext {
  ring::RnsPolynomial poly;  // evaluation form over q_0..q_level
  int level = 0;
  double scale = 1.0;
};

// Canonical embedding: slot j is the evaluation at zeta^(5^j), zeta = exp(i*pi/N).
// Rotation by k is then the automorphism X -> X^(5^k mod 2N).
class CkksEncoder {
 public:
  explicit CkksEncoder(std::shared_ptr<const CkksContext> ctx);

  std::size_t slotCount() const noexcept { return slots_; }

  // Real slot values (zero-padded to slotCount) at the given level and scale.
  Plaintext encode(std::span<const double> values, int level, double scale) const;
  std::vector<double> decode(const Plaintext& pt) const;

  // Slot values from signed integer-valued coefficients (long double to keep
  // the 2^60+ range intact) divided by scale.
  std::vector<double> decodeCoefficients(std::span<const long double> coeffs, double scale) const;

  // Complex slots <-> real coefficient vector of length N (unscaled).
  std::vector<double> slotsToCoefficients(std::span<const std::complex<double>> slots) const;
  std::vector<std::complex<double>> coefficientsToSlots(std::span<const double> coeffs) const;

  std::size_t galoisElement(int rotation) const;

 private:
  void fftSpecial(std::vector<std::complex<double>>& vals) const;
  void fftSpecialInv(std::vector<std::complex<double>>& vals) const;

  std::shared_ptr<const CkksContext> ctx_;
  std::size_t n_, slots_, m_;
  std::vector<std::size_t> rotGroup_;
  std::vector<std::complex<double>> ksiPows_;
};

// Centered integer coefficients of a coefficient-form polynomial, using CRT
// over the first two primes; valid while |coefficient| < q_0*q_1/2.
std::vector<long double> centeredCoefficients(const ring::RnsPolynomial& p);

}  // namespace oblivdsp::ckks
