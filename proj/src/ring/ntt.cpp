#include "oblivdsp/ring/ntt.hpp"

#include <bit>

#include "oblivdsp/error.hpp"

namespace oblivdsp::ring {

std::size_t reverseBits(std::size_t value, int bitCount) noexcept {
  std::size_t r = 0;
  for (int i = 0; i < bitCount; ++i) {
    r = (r << 1) | (value & 1);
    value >>= 1;
  }
  return r;
}

NttTables::NttTables(const Modulus& q, std::size_t n) : q_(q), n_(n) {
  if (!std::has_single_bit(n) || n < 2) throw ConfigError("NTT size must be a power of two");
  psi_ = minimalPrimitiveRoot(q, n);
  const u64 psiInv = q.inverse(psi_);
  const int logN = std::countr_zero(n);
  rootPowers_.resize(n);
  invRootPowers_.resize(n);
  u64 power = 1, invPower = 1;
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t r = reverseBits(i, logN);
    rootPowers_[r] = power;
    invRootPowers_[r] = invPower;
    power = q.mul(power, psi_);
    invPower = q.mul(invPower, psiInv);
  }
  rootPowersShoup_.resize(n);
  invRootPowersShoup_.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    rootPowersShoup_[i] = q.shoup(rootPowers_[i]);
    invRootPowersShoup_[i] = q.shoup(invRootPowers_[i]);
  }
  nInv_ = q.inverse(n);
  nInvShoup_ = q.shoup(nInv_);
}

namespace {

inline u64 subIfAtLeast(u64 x, u64 bound) noexcept { return x - (bound & (0 - static_cast<u64>(x >= bound))); }

// a*w mod q in [0, 2q) for any 64-bit a.
inline u64 mulShoupLazy(u64 a, u64 w, u64 wShoup, u64 q) noexcept {
  const u64 hi = static_cast<u64>((static_cast<u128>(a) * wShoup) >> 64);
  return a * w - hi * q;
}

}  // namespace

// Harvey-style butterflies: values stay in [0, 4q) between stages.
void NttTables::forward(u64* a) const noexcept {
  const u64 q = q_.value();
  const u64 twoQ = 2 * q;
  std::size_t t = n_;
  for (std::size_t m = 1; m < n_; m <<= 1) {
    t >>= 1;
    for (std::size_t i = 0; i < m; ++i) {
      const std::size_t j1 = 2 * i * t;
      const u64 w = rootPowers_[m + i];
      const u64 ws = rootPowersShoup_[m + i];
      u64* x = a + j1;
      u64* y = x + t;
      for (std::size_t j = 0; j < t; ++j) {
        const u64 u = subIfAtLeast(x[j], twoQ);
        const u64 v = mulShoupLazy(y[j], w, ws, q);
        x[j] = u + v;
        y[j] = u - v + twoQ;
      }
    }
  }
  for (std::size_t j = 0; j < n_; ++j) a[j] = subIfAtLeast(subIfAtLeast(a[j], twoQ), q);
}

void NttTables::inverse(u64* a) const noexcept {
  const u64 q = q_.value();
  const u64 twoQ = 2 * q;
  std::size_t t = 1;
  for (std::size_t m = n_; m > 1; m >>= 1) {
    const std::size_t h = m >> 1;
    std::size_t j1 = 0;
    for (std::size_t i = 0; i < h; ++i) {
      const u64 w = invRootPowers_[h + i];
      const u64 ws = invRootPowersShoup_[h + i];
      u64* x = a + j1;
      u64* y = x + t;
      for (std::size_t j = 0; j < t; ++j) {
        const u64 u = x[j];
        const u64 v = y[j];
        x[j] = subIfAtLeast(u + v, twoQ);
        y[j] = mulShoupLazy(u - v + twoQ, w, ws, q);
      }
      j1 += 2 * t;
    }
    t <<= 1;
  }
  for (std::size_t j = 0; j < n_; ++j) a[j] = q_.mulShoup(a[j], nInv_, nInvShoup_);
}

}  // namespace oblivdsp::ring
