#include <gtest/gtest.h>

#include <boost/multiprecision/cpp_int.hpp>
#include <random>

#include "oblivdsp/error.hpp"
#include "oblivdsp/ring/rns.hpp"

using namespace oblivdsp;
using namespace oblivdsp::ring;
using boost::multiprecision::cpp_int;

namespace {

std::shared_ptr<const RingContext> makeRing(std::size_t n, std::vector<int> bits) {
  std::vector<u64> primes;
  for (int b : bits) {
    auto p = generateNttPrimes(b, n, 1, primes);
    primes.push_back(p.front());
  }
  return std::make_shared<const RingContext>(n, primes);
}

std::vector<std::uint32_t> iota(std::size_t k) {
  std::vector<std::uint32_t> v(k);
  for (std::size_t i = 0; i < k; ++i) v[i] = static_cast<std::uint32_t>(i);
  return v;
}

RnsPolynomial randomPoly(const std::shared_ptr<const RingContext>& ctx, std::size_t k, std::mt19937_64& rng) {
  RnsPolynomial p(ctx, iota(k));
  for (std::size_t i = 0; i < k; ++i) {
    std::uniform_int_distribution<u64> d(0, p.modulus(i).value() - 1);
    for (auto& v : p.residues(i)) v = d(rng);
  }
  return p;
}

// O(N^2) negacyclic product of one residue row.
std::vector<u64> schoolbook(std::span<const u64> a, std::span<const u64> b, u64 q) {
  const std::size_t n = a.size();
  std::vector<cpp_int> acc(n, 0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      cpp_int prod = cpp_int(a[i]) * b[j];
      if (i + j < n) {
        acc[i + j] += prod;
      } else {
        acc[i + j - n] -= prod;
      }
    }
  }
  std::vector<u64> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    cpp_int r = acc[i] % q;
    if (r < 0) r += q;
    out[i] = static_cast<u64>(r);
  }
  return out;
}

cpp_int crt(const RnsPolynomial& p, std::size_t coeff, cpp_int& product) {
  product = 1;
  for (std::size_t i = 0; i < p.primeCount(); ++i) product *= p.modulus(i).value();
  cpp_int x = 0;
  for (std::size_t i = 0; i < p.primeCount(); ++i) {
    const u64 q = p.modulus(i).value();
    const cpp_int m = product / q;
    const u64 mModQ = static_cast<u64>(m % q);
    const u64 inv = p.modulus(i).inverse(mModQ);
    x += cpp_int(p.residues(i)[coeff]) * inv % q * m;
  }
  return x % product;
}

}  // namespace

TEST(Modulus, BarrettMatchesDivision) {
  std::mt19937_64 rng(1);
  for (int bits : {30, 40, 50, 60, 61}) {
    const Modulus q(generateNttPrimes(bits, 1024, 1).front());
    std::uniform_int_distribution<u64> d(0, q.value() - 1);
    for (int i = 0; i < 2000; ++i) {
      const u64 a = d(rng), b = d(rng);
      EXPECT_EQ(q.mul(a, b), static_cast<u64>(static_cast<u128>(a) * b % q.value()));
      EXPECT_EQ(q.mulShoup(a, b, q.shoup(b)), q.mul(a, b));
    }
    EXPECT_EQ(q.mul(q.inverse(12345), 12345), 1u);
  }
}

TEST(Modulus, PrimeGenerationIsDeterministicAndNttFriendly) {
  const auto a = generateNttPrimes(40, 4096, 5);
  const auto b = generateNttPrimes(40, 4096, 5);
  EXPECT_EQ(a, b);
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_TRUE(isPrime(a[i]));
    EXPECT_EQ((a[i] - 1) % 8192, 0u);
    EXPECT_LT(a[i], u64{1} << 40);
    EXPECT_GT(a[i], u64{1} << 39);
    if (i) EXPECT_LT(a[i], a[i - 1]);
  }
  EXPECT_FALSE(isPrime(1));
  EXPECT_TRUE(isPrime(2305843009213693951ULL));  // 2^61 - 1
  EXPECT_FALSE(isPrime(2305843009213693953ULL));
}

TEST(RingContext, RejectsNonNttFriendlyPrime) {
  EXPECT_THROW(RingContext(64, {1000003}), ConfigError);
  EXPECT_THROW(RingContext(64, {4294967291ULL}), ConfigError);
}

TEST(Ntt, ZeroAndConstant) {
  auto ctx = makeRing(64, {61});
  RnsPolynomial zero(ctx, {0});
  EXPECT_EQ(nttForward(zero).raw(), zero.raw());
  RnsPolynomial c(ctx, {0});
  c.residues(0)[0] = 77;
  auto e = nttForward(c);
  for (u64 v : e.residues(0)) EXPECT_EQ(v, 77u);
}

TEST(Ntt, RoundTripIsExact) {
  std::mt19937_64 rng(2);
  auto ctx = makeRing(64, {61});
  for (int t = 0; t < 10000; ++t) {
    auto p = randomPoly(ctx, 1, rng);
    EXPECT_EQ(nttInverse(nttForward(p)), p);
  }
  auto big = makeRing(4096, {60, 40, 40});
  for (int t = 0; t < 20; ++t) {
    auto p = randomPoly(big, 3, rng);
    EXPECT_EQ(nttInverse(nttForward(p)), p);
  }
}

TEST(RingMul, NegacyclicWraparound) {
  auto ctx = makeRing(32, {50, 40});
  RnsPolynomial x(ctx, {0, 1}), y(ctx, {0, 1});
  for (std::size_t i = 0; i < 2; ++i) {
    x.residues(i)[1] = 1;
    y.residues(i)[31] = 1;
  }
  auto r = ringMul(x, y);
  for (std::size_t i = 0; i < 2; ++i) {
    EXPECT_EQ(r.residues(i)[0], r.modulus(i).value() - 1);
    for (std::size_t j = 1; j < 32; ++j) EXPECT_EQ(r.residues(i)[j], 0u);
  }
}

TEST(RingMul, OneIsIdentity) {
  std::mt19937_64 rng(3);
  auto ctx = makeRing(32, {50, 40});
  RnsPolynomial one(ctx, {0, 1});
  one.residues(0)[0] = one.residues(1)[0] = 1;
  auto b = randomPoly(ctx, 2, rng);
  EXPECT_EQ(ringMul(one, b), b);
}

TEST(RingMul, MatchesSchoolbookOracle) {
  std::mt19937_64 rng(4);
  for (std::size_t n : {2u, 8u, 32u, 64u}) {
    auto ctx = makeRing(n, {61, 50, 40});
    for (int t = 0; t < 20; ++t) {
      auto a = randomPoly(ctx, 3, rng);
      auto b = randomPoly(ctx, 3, rng);
      auto r = ringMul(a, b);
      for (std::size_t i = 0; i < 3; ++i) {
        auto expect = schoolbook(a.residues(i), b.residues(i), a.modulus(i).value());
        EXPECT_TRUE(std::equal(expect.begin(), expect.end(), r.residues(i).begin()));
      }
    }
  }
}

TEST(RingMul, BasisMismatchThrows) {
  auto ctx = makeRing(32, {50, 40});
  RnsPolynomial a(ctx, {0, 1}), b(ctx, {0});
  EXPECT_THROW(ringMul(a, b), Error);
}

TEST(DropLastPrime, ExactMultipleDividesExactly) {
  auto ctx = makeRing(64, {60, 40});
  std::mt19937_64 rng(5);
  std::uniform_int_distribution<std::int64_t> d(-1'000'000, 1'000'000);
  std::vector<std::int64_t> v(64);
  for (auto& x : v) x = d(rng);
  const u64 qLast = ctx->modulus(1).value();
  RnsPolynomial p(ctx, {0, 1});
  for (std::size_t i = 0; i < 2; ++i) {
    const auto& q = p.modulus(i);
    for (std::size_t j = 0; j < 64; ++j) p.residues(i)[j] = q.mul(q.fromSigned(v[j]), q.reduce(qLast));
  }
  auto r = dropLastPrime(p);
  ASSERT_EQ(r.primeCount(), 1u);
  for (std::size_t j = 0; j < 64; ++j) EXPECT_EQ(r.modulus(0).centered(r.residues(0)[j]), v[j]);
}

TEST(DropLastPrime, ExhaustsAtOnePrime) {
  auto ctx = makeRing(64, {60, 40});
  RnsPolynomial p(ctx, {0, 1});
  auto once = dropLastPrime(p);
  EXPECT_THROW(dropLastPrime(once), DepthExhausted);
}

TEST(DropLastPrime, RoundsWithinHalfAgainstCrtOracle) {
  std::mt19937_64 rng(6);
  auto ctx = makeRing(64, {60, 50, 40, 40});
  for (int t = 0; t < 20; ++t) {
    for (bool eval : {false, true}) {
      auto p = randomPoly(ctx, 4, rng);
      if (eval) toEvaluation(p);
      auto r = dropLastPrime(p);
      if (eval) {
        toCoefficient(p);
        toCoefficient(r);
      }
      const u64 qLast = p.modulus(3).value();
      for (std::size_t j = 0; j < 64; ++j) {
        cpp_int bigQ, smallQ;
        const cpp_int before = crt(p, j, bigQ);
        const cpp_int after = crt(r, j, smallQ);
        // after * qLast - before must lie in (-qLast/2, qLast/2] modulo the big modulus.
        cpp_int diff = (after * qLast - before) % bigQ;
        if (diff < 0) diff += bigQ;
        if (diff > bigQ / 2) diff -= bigQ;
        EXPECT_LE(abs(diff) * 2, cpp_int(qLast)) << "eval=" << eval;
      }
    }
  }
}

TEST(Crt, ReconstructionIsUniqueInRange) {
  std::mt19937_64 rng(7);
  auto ctx = makeRing(16, {60, 40, 40});
  auto p = randomPoly(ctx, 3, rng);
  for (std::size_t j = 0; j < 16; ++j) {
    cpp_int q;
    const cpp_int x = crt(p, j, q);
    EXPECT_GE(x, 0);
    EXPECT_LT(x, q);
    for (std::size_t i = 0; i < 3; ++i) EXPECT_EQ(static_cast<u64>(x % p.modulus(i).value()), p.residues(i)[j]);
  }
}

TEST(ModulusChain, GenerateAndValidate) {
  auto chain = ModulusChain::generate(4096, 60, 40, 11);
  EXPECT_EQ(chain.length(), 12u);
  EXPECT_EQ(chain.depth(), 11);
  EXPECT_NO_THROW(chain.validate());
  chain.primes.push_back(chain.primes[1]);
  EXPECT_THROW(chain.validate(), ConfigError);
}

TEST(Automorphism, IdentityAndComposition) {
  std::mt19937_64 rng(8);
  auto ctx = makeRing(32, {50});
  auto p = randomPoly(ctx, 1, rng);
  EXPECT_EQ(automorphism(p, 1), p);
  // X -> X^5 twice equals X -> X^25.
  EXPECT_EQ(automorphism(automorphism(p, 5), 5), automorphism(p, 25));
}
