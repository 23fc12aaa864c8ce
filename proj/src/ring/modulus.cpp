#include "oblivdsp/ring/modulus.hpp"

#include <algorithm>
#include <bit>
#include <string>

#include "oblivdsp/error.hpp"

namespace oblivdsp::ring {

namespace {

u64 mulModSlow(u64 a, u64 b, u64 m) { return static_cast<u64>(static_cast<u128>(a) * b % m); }

u64 powModSlow(u64 base, u64 e, u64 m) {
  u64 r = 1 % m;
  base %= m;
  while (e) {
    if (e & 1) r = mulModSlow(r, base, m);
    base = mulModSlow(base, base, m);
    e >>= 1;
  }
  return r;
}

}  // namespace

Modulus::Modulus(u64 value) : value_(value) {
  if (value < 2 || value >= (u64{1} << 62)) {
    throw Error("modulus out of range: " + std::to_string(value));
  }
  const u128 all = ~static_cast<u128>(0);
  u128 ratio = all / value;
  if (all % value + 1 == value) ++ratio;
  ratioLo_ = static_cast<u64>(ratio);
  ratioHi_ = static_cast<u64>(ratio >> 64);
}

int Modulus::bitCount() const noexcept { return 64 - std::countl_zero(value_); }

u64 Modulus::pow(u64 base, u64 exponent) const noexcept {
  u64 r = 1;
  base = reduce(base);
  while (exponent) {
    if (exponent & 1) r = mul(r, base);
    base = mul(base, base);
    exponent >>= 1;
  }
  return r;
}

u64 Modulus::inverse(u64 a) const {
  // Extended Euclid on signed 128-bit values.
  __int128 t = 0, newT = 1;
  __int128 r = value_, newR = reduce(a);
  while (newR != 0) {
    const __int128 q = r / newR;
    std::swap(t, newT);
    newT -= q * t;
    std::swap(r, newR);
    newR -= q * r;
  }
  if (r != 1) throw Error("value has no inverse modulo " + std::to_string(value_));
  if (t < 0) t += value_;
  return static_cast<u64>(t);
}

bool isPrime(u64 n) {
  if (n < 2) return false;
  for (u64 p : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL}) {
    if (n % p == 0) return n == p;
  }
  u64 d = n - 1;
  int s = 0;
  while ((d & 1) == 0) {
    d >>= 1;
    ++s;
  }
  for (u64 a : {2ULL, 325ULL, 9375ULL, 28178ULL, 450775ULL, 9780504ULL, 1795265022ULL}) {
    u64 x = powModSlow(a % n, d, n);
    if (a % n == 0 || x == 1 || x == n - 1) continue;
    bool composite = true;
    for (int i = 1; i < s; ++i) {
      x = mulModSlow(x, x, n);
      if (x == n - 1) {
        composite = false;
        break;
      }
    }
    if (composite) return false;
  }
  return true;
}

std::vector<u64> generateNttPrimes(int bits, std::size_t ringDim, std::size_t count,
                                   const std::vector<u64>& exclude) {
  if (bits < 10 || bits > 61) throw ConfigError("prime size must be in [10, 61] bits");
  if (!std::has_single_bit(ringDim)) throw ConfigError("ring dimension must be a power of two");
  const u64 step = 2 * static_cast<u64>(ringDim);
  const u64 top = u64{1} << bits;
  // Largest candidate below 2^bits congruent to 1 mod 2N.
  u64 candidate = top - step + 1;
  const u64 floorValue = u64{1} << (bits - 1);
  std::vector<u64> out;
  while (out.size() < count) {
    if (candidate <= floorValue) {
      throw ConfigError("not enough NTT-friendly primes of " + std::to_string(bits) + " bits");
    }
    if (isPrime(candidate) && std::find(exclude.begin(), exclude.end(), candidate) == exclude.end()) {
      out.push_back(candidate);
    }
    candidate -= step;
  }
  return out;
}

u64 minimalPrimitiveRoot(const Modulus& q, std::size_t ringDim) {
  const u64 m = 2 * static_cast<u64>(ringDim);
  const u64 p = q.value();
  if ((p - 1) % m != 0) throw Error("modulus is not NTT-friendly for this ring dimension");
  // Collect all primitive m-th roots: g^k for odd k, where g is any primitive root.
  u64 g = 0;
  for (u64 x = 2; x < p; ++x) {
    const u64 cand = q.pow(x, (p - 1) / m);
    if (q.pow(cand, m / 2) == p - 1) {
      g = cand;
      break;
    }
  }
  if (g == 0) throw Error("no primitive root found");
  u64 best = g;
  const u64 g2 = q.mul(g, g);
  u64 cur = g;
  for (u64 k = 1; k < m; k += 2) {
    best = std::min(best, cur);
    cur = q.mul(cur, g2);
  }
  return best;
}

}  // namespace oblivdsp::ring
