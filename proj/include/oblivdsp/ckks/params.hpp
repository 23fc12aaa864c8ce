#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "oblivdsp/ring/rns.hpp"

namespace oblivdsp::ckks {

enum class SecurityProfile { deskScale, standard128 };

struct CkksParams {
  std::size_t ringDim = 4096;
  int depth = 11;         // multiplicative depth; the chain has depth + 1 primes
  int scalingBits = 40;
  int firstBits = 60;
  int specialBits = 61;   // key-switching prime, above every chain prime
  double errorStdDev = 3.2;
  SecurityProfile profile = SecurityProfile::deskScale;

  // Small ring for fast experiments. Not secure.
  static CkksParams desk(int depth = 11);
  // N = 32768 with the HE-standard modulus budget.
  static CkksParams standard128(int depth = 11);

  void validate() const;
  std::string securityTag() const;
};

// Largest log2(Q*P) admitted for 128-bit classical security (ternary secret).
int maxModulusBits128(std::size_t ringDim);

// Everything derived from CkksParams: primes, NTT tables, level scales.
class CkksContext {
 public:
  explicit CkksContext(const CkksParams& params);

  const CkksParams& params() const noexcept { return params_; }
  const ring::ModulusChain& chain() const noexcept { return chain_; }
  const std::shared_ptr<const ring::RingContext>& ring() const noexcept { return ring_; }
  std::size_t ringDim() const noexcept { return params_.ringDim; }
  std::size_t slotCount() const noexcept { return params_.ringDim / 2; }
  int maxLevel() const noexcept { return chain_.depth(); }
  ring::u64 specialPrime() const noexcept { return special_; }
  std::uint32_t specialIndex() const noexcept { return static_cast<std::uint32_t>(chain_.length()); }

  // Nominal scale of a ciphertext at level l.
  double levelScale(int level) const { return scales_.at(static_cast<std::size_t>(level)); }

  // Prime indices q_0..q_level.
  std::vector<std::uint32_t> basisAt(int level) const;
  // q_0..q_L followed by the special prime.
  std::vector<std::uint32_t> extendedBasis() const;

  // Stable hash of the public parameters.
  std::uint64_t digest() const noexcept { return digest_; }
  std::string digestHex() const;

 private:
  CkksParams params_;
  ring::ModulusChain chain_;
  ring::u64 special_ = 0;
  std::shared_ptr<const ring::RingContext> ring_;
  std::vector<double> scales_;
  std::uint64_t digest_ = 0;
};

// Nominal scale per level: Delta_L = 2^scalingBits, Delta_{l-1} = Delta_l^2 / q_l.
std::vector<double> levelScales(const ring::ModulusChain& chain);

std::uint64_t fnv1a(const void* data, std::size_t size, std::uint64_t seed = 1469598103934665603ULL);
std::string hex64(std::uint64_t v);

}  // namespace oblivdsp::ckks
