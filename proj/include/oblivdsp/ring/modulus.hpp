#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

namespace oblivdsp::ring {

using u64 = std::uint64_t;
using u128 = unsigned __int128;

// A word-sized modulus below 2^62 with Barrett and Shoup helpers.
class Modulus {
 public:
  Modulus() = default;
  explicit Modulus(u64 value);

  u64 value() const noexcept { return value_; }
  int bitCount() const noexcept;

  // Barrett reduction of a 128-bit value smaller than value()^2.
  u64 reduce128(u128 x) const noexcept {
    const u64 lo = static_cast<u64>(x);
    const u64 hi = static_cast<u64>(x >> 64);
    const u64 carry = static_cast<u64>((static_cast<u128>(lo) * ratioLo_) >> 64);
    const u128 s = static_cast<u128>(lo) * ratioHi_ + carry;
    const u64 tmp1 = static_cast<u64>(s);
    const u64 tmp3 = static_cast<u64>(s >> 64);
    const u128 t = static_cast<u128>(hi) * ratioLo_;
    const u128 s2 = static_cast<u128>(tmp1) + static_cast<u64>(t);
    const u64 carry2 = static_cast<u64>(t >> 64) + static_cast<u64>(s2 >> 64);
    const u64 quotient = hi * ratioHi_ + tmp3 + carry2;
    return condSub(lo - quotient * value_);
  }

  // x - q if x >= q, without a data-dependent branch.
  u64 condSub(u64 x) const noexcept { return x - (value_ & (0 - static_cast<u64>(x >= value_))); }

  u64 reduce(u64 x) const noexcept { return reduce128(x); }
  u64 mul(u64 a, u64 b) const noexcept { return reduce128(static_cast<u128>(a) * b); }
  u64 add(u64 a, u64 b) const noexcept { return condSub(a + b); }
  u64 sub(u64 a, u64 b) const noexcept { return a - b + (value_ & (0 - static_cast<u64>(a < b))); }
  u64 neg(u64 a) const noexcept { return a == 0 ? 0 : value_ - a; }

  u64 pow(u64 base, u64 exponent) const noexcept;
  // Throws oblivdsp::Error when a is not invertible.
  u64 inverse(u64 a) const;

  // floor(w * 2^64 / q), for repeated multiplication by the constant w.
  u64 shoup(u64 w) const noexcept {
    return static_cast<u64>((static_cast<u128>(w) << 64) / value_);
  }
  u64 mulShoup(u64 a, u64 w, u64 wShoup) const noexcept {
    const u64 hi = static_cast<u64>((static_cast<u128>(a) * wShoup) >> 64);
    return condSub(a * w - hi * value_);
  }

  u64 fromSigned(std::int64_t v) const noexcept {
    if (v >= 0) return reduce(static_cast<u64>(v));
    const u64 m = reduce(static_cast<u64>(-(v + 1)) + 1);
    return neg(m);
  }
  // Residue in (-q/2, q/2].
  std::int64_t centered(u64 a) const noexcept {
    return a > (value_ >> 1) ? static_cast<std::int64_t>(a) - static_cast<std::int64_t>(value_)
                             : static_cast<std::int64_t>(a);
  }

  bool operator==(const Modulus& o) const noexcept { return value_ == o.value_; }

 private:
  u64 value_ = 0;
  u64 ratioHi_ = 0;
  u64 ratioLo_ = 0;
};

bool isPrime(u64 n);

// The `count` largest primes p < 2^bits with p = 1 mod 2*ringDim, skipping `exclude`.
std::vector<u64> generateNttPrimes(int bits, std::size_t ringDim, std::size_t count,
                                   const std::vector<u64>& exclude = {});

// Smallest primitive 2*ringDim-th root of unity mod q.
u64 minimalPrimitiveRoot(const Modulus& q, std::size_t ringDim);

}  // namespace oblivdsp::ring
