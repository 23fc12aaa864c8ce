#include "oblivdsp/ckks/params.hpp"

#include <bit>
#include <cmath>
#include <cstdio>

#include "oblivdsp/error.hpp"

namespace oblivdsp::ckks {

CkksParams CkksParams::desk(int depth) {
  CkksParams p;
  p.ringDim = 4096;
  p.depth = depth;
  p.scalingBits = 40;
  p.firstBits = 60;
  p.specialBits = 61;
  p.profile = SecurityProfile::deskScale;
  return p;
}

CkksParams CkksParams::standard128(int depth) {
  CkksParams p;
  p.ringDim = 32768;
  p.depth = depth;
  p.scalingBits = 50;
  p.firstBits = 60;
  p.specialBits = 60;
  p.profile = SecurityProfile::standard128;
  return p;
}

int maxModulusBits128(std::size_t ringDim) {
  switch (ringDim) {
    case 1024: return 27;
    case 2048: return 54;
    case 4096: return 109;
    case 8192: return 218;
    case 16384: return 438;
    case 32768: return 881;
    default: return 0;
  }
}

void CkksParams::validate() const {
  if (!std::has_single_bit(ringDim) || ringDim < 16) throw ConfigError("ring dimension must be a power of two >= 16");
  if (depth < 0) throw ConfigError("depth must be nonnegative");
  if (scalingBits < 20 || scalingBits > 60) throw ConfigError("scaling bits must be in [20, 60]");
  if (firstBits < scalingBits || firstBits > 61) throw ConfigError("first prime must be at least the scaling size and at most 61 bits");
  if (specialBits < firstBits || specialBits > 61) throw ConfigError("special prime must be at least as large as the first prime and at most 61 bits");
  if (!(errorStdDev > 0)) throw ConfigError("error standard deviation must be positive");
  if (profile == SecurityProfile::standard128) {
    if (ringDim != 32768) throw ConfigError("standard-128 profile requires N = 32768");
    const int total = firstBits + depth * scalingBits + specialBits;
    if (total > maxModulusBits128(ringDim)) {
      throw ConfigError("modulus of " + std::to_string(total) + " bits exceeds the 128-bit budget");
    }
  }
}

std::string CkksParams::securityTag() const {
  return profile == SecurityProfile::deskScale ? "NOT SECURE (desk-scale parameters)"
                                               : "128-bit (HE standard, N=32768)";
}

std::vector<double> levelScales(const ring::ModulusChain& chain) {
  const int top = chain.depth();
  std::vector<double> scales(static_cast<std::size_t>(top) + 1, 0.0);
  scales[static_cast<std::size_t>(top)] = std::ldexp(1.0, chain.scalingBits);
  for (int l = top; l > 0; --l) {
    const double s = scales[static_cast<std::size_t>(l)];
    scales[static_cast<std::size_t>(l - 1)] = s * s / static_cast<double>(chain.primes[static_cast<std::size_t>(l)]);
  }
  return scales;
}

std::uint64_t fnv1a(const void* data, std::size_t size, std::uint64_t seed) {
  const auto* p = static_cast<const unsigned char*>(data);
  std::uint64_t h = seed;
  for (std::size_t i = 0; i < size; ++i) {
    h ^= p[i];
    h *= 1099511628211ULL;
  }
  return h;
}

std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

CkksContext::CkksContext(const CkksParams& params) : params_(params) {
  params_.validate();
  chain_ = ring::ModulusChain::generate(params_.ringDim, params_.firstBits, params_.scalingBits, params_.depth);
  special_ = ring::generateNttPrimes(params_.specialBits, params_.ringDim, 1, chain_.primes).front();
  std::vector<ring::u64> all = chain_.primes;
  all.push_back(special_);
  ring_ = std::make_shared<const ring::RingContext>(params_.ringDim, all);

  scales_ = levelScales(chain_);

  std::uint64_t h = fnv1a(&params_.ringDim, sizeof params_.ringDim);
  for (auto q : all) h = fnv1a(&q, sizeof q, h);
  h = fnv1a(&params_.scalingBits, sizeof params_.scalingBits, h);
  h = fnv1a(&params_.errorStdDev, sizeof params_.errorStdDev, h);
  const int prof = static_cast<int>(params_.profile);
  digest_ = fnv1a(&prof, sizeof prof, h);
}

std::vector<std::uint32_t> CkksContext::basisAt(int level) const {
  if (level < 0 || level > maxLevel()) throw Error("level out of range");
  std::vector<std::uint32_t> b(static_cast<std::size_t>(level) + 1);
  for (std::size_t i = 0; i < b.size(); ++i) b[i] = static_cast<std::uint32_t>(i);
  return b;
}

std::vector<std::uint32_t> CkksContext::extendedBasis() const {
  auto b = basisAt(maxLevel());
  b.push_back(specialIndex());
  return b;
}

std::string CkksContext::digestHex() const { return hex64(digest_); }

}  // namespace oblivdsp::ckks
