#pragma once

#include <cstddef>
#include <vector>

#include "oblivdsp/ring/modulus.hpp"

namespace oblivdsp::ring {

// Negacyclic NTT over Z_q[X]/(X^N+1). Forward output is in bit-reversed order;
// inverse expects that order, so pointwise products need no permutation.
class NttTables {
 public:
  NttTables(const Modulus& q, std::size_t n);

  const Modulus& modulus() const noexcept { return q_; }
  std::size_t size() const noexcept { return n_; }
  u64 psi() const noexcept { return psi_; }

  void forward(u64* a) const noexcept;
  void inverse(u64* a) const noexcept;

 private:
  Modulus q_;
  std::size_t n_;
  u64 psi_;
  std::vector<u64> rootPowers_, rootPowersShoup_;
  std::vector<u64> invRootPowers_, invRootPowersShoup_;
  u64 nInv_, nInvShoup_;
};

std::size_t reverseBits(std::size_t value, int bitCount) noexcept;

}  // namespace oblivdsp::ring
