#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <sstream>

#include "oblivdsp/ckks/scheme.hpp"
#include "oblivdsp/ckks/serialize.hpp"
#include "oblivdsp/error.hpp"

using namespace oblivdsp;
using namespace oblivdsp::ckks;

namespace {

struct Fixture {
  std::shared_ptr<const CkksContext> ctx;
  Sampler sampler{42};
  KeySet keys;
  std::shared_ptr<EvaluationKeys> evk;
  std::unique_ptr<CkksEncoder> encoder;
  std::unique_ptr<Encryptor> encryptor;
  std::unique_ptr<Decryptor> decryptor;
  std::unique_ptr<Evaluator> evaluator;

  Fixture(CkksParams params, const std::set<int>& rotations) {
    ctx = std::make_shared<const CkksContext>(params);
    KeyGenerator gen(ctx, sampler);
    keys = gen.generate(rotations);
    evk = std::make_shared<EvaluationKeys>(keys.evaluation);
    encoder = std::make_unique<CkksEncoder>(ctx);
    encryptor = std::make_unique<Encryptor>(ctx, keys.evaluation.publicKey, sampler);
    decryptor = std::make_unique<Decryptor>(ctx, keys.secretKey);
    evaluator = std::make_unique<Evaluator>(ctx, evk);
  }

  Ciphertext enc(const std::vector<double>& v) {
    const int top = ctx->maxLevel();
    return encryptor->encrypt(encoder->encode(v, top, ctx->levelScale(top)));
  }
  std::vector<double> dec(const Ciphertext& c) { return encoder->decode(decryptor->decrypt(c)); }
};

std::vector<double> randomVec(std::size_t n, std::mt19937_64& rng, double lo = -1, double hi = 1) {
  std::uniform_real_distribution<double> d(lo, hi);
  std::vector<double> v(n);
  for (auto& x : v) x = d(rng);
  return v;
}

double maxErr(const std::vector<double>& a, const std::vector<double>& b, std::size_t n) {
  double m = 0;
  for (std::size_t i = 0; i < n; ++i) m = std::max(m, std::fabs(a[i] - (i < b.size() ? b[i] : 0.0)));
  return m;
}

Fixture& desk() {
  static Fixture f(CkksParams::desk(11), {1, -1, 8, 3});
  return f;
}

}  // namespace

TEST(CkksParams, ProfilesValidate) {
  EXPECT_NO_THROW(CkksParams::desk().validate());
  EXPECT_NO_THROW(CkksParams::standard128(11).validate());
  auto bad = CkksParams::standard128(11);
  bad.ringDim = 4096;
  EXPECT_THROW(bad.validate(), ConfigError);
  EXPECT_THROW(CkksParams::standard128(30).validate(), ConfigError);
  EXPECT_NE(CkksParams::desk().securityTag().find("NOT SECURE"), std::string::npos);
}

TEST(CkksContext, ChainAndScheduleShape) {
  const auto& ctx = *desk().ctx;
  EXPECT_EQ(ctx.chain().length(), 12u);
  EXPECT_EQ(ctx.maxLevel(), 11);
  EXPECT_GT(ctx.specialPrime(), ctx.chain().primes[0]);
  for (int l = 0; l <= 11; ++l) {
    EXPECT_LT(std::fabs(std::log2(ctx.levelScale(l)) - 40.0), 1.0);
  }
}

TEST(KeyGen, GaloisKeyCardinality) {
  CkksParams p = CkksParams::desk(1);
  p.ringDim = 256;
  auto ctx = std::make_shared<const CkksContext>(p);
  Sampler s(1);
  KeyGenerator gen(ctx, s);
  EXPECT_EQ(gen.generate({}).evaluation.galoisKeys.size(), 0u);
  EXPECT_EQ(gen.generate({1, -1, 8}).evaluation.galoisKeys.size(), 3u);
  // Amounts congruent modulo the slot count share a key; 0 needs none.
  EXPECT_EQ(gen.generate({0, 1, 129}).evaluation.galoisKeys.size(), 1u);
}

TEST(KeyGen, SecretKeyIsTernary) {
  auto& f = desk();
  auto s = ring::nttInverse(f.keys.secretKey.poly);
  for (std::size_t i = 0; i < s.primeCount(); ++i) {
    for (auto v : s.residues(i)) {
      const auto c = s.modulus(i).centered(v);
      EXPECT_TRUE(c >= -1 && c <= 1);
    }
  }
}

TEST(Encoder, ZeroOnesAndRoundTrip) {
  auto& f = desk();
  const int top = f.ctx->maxLevel();
  const double scale = f.ctx->levelScale(top);
  auto z = f.encoder->decode(f.encoder->encode(std::vector<double>{}, top, scale));
  EXPECT_LT(maxErr(z, {}, z.size()), 1e-12);
  std::vector<double> ones(f.encoder->slotCount(), 1.0);
  EXPECT_LT(maxErr(f.encoder->decode(f.encoder->encode(ones, top, scale)), ones, ones.size()), std::ldexp(1.0, -20));
  std::mt19937_64 rng(1);
  auto v = randomVec(2048, rng, -100, 100);
  EXPECT_LT(maxErr(f.encoder->decode(f.encoder->encode(v, top, scale)), v, v.size()), std::ldexp(1.0, -20));
}

TEST(Encoder, OverflowThrows) {
  auto& f = desk();
  std::vector<double> big(4, 1e9);
  EXPECT_THROW(f.encoder->encode(big, 0, f.ctx->levelScale(0)), Error);
}

TEST(Encoder, SlotwiseProductLaw) {
  auto& f = desk();
  std::mt19937_64 rng(2);
  auto a = randomVec(2048, rng), b = randomVec(2048, rng);
  const int top = f.ctx->maxLevel();
  const double s = f.ctx->levelScale(top);
  auto pa = f.encoder->encode(a, top, s), pb = f.encoder->encode(b, top, s);
  Plaintext prod{ring::mulPointwise(pa.poly, pb.poly), top, s * s};
  prod.poly = ring::dropLastPrime(prod.poly);
  prod.level = top - 1;
  prod.scale = s * s / static_cast<double>(f.ctx->chain().primes[static_cast<std::size_t>(top)]);
  auto d = f.encoder->decode(prod);
  double err = 0;
  for (std::size_t i = 0; i < 2048; ++i) err = std::max(err, std::fabs(d[i] - a[i] * b[i]));
  EXPECT_LT(err, std::ldexp(1.0, -20));
}

TEST(Ckks, EncryptRoundTrip) {
  auto& f = desk();
  std::mt19937_64 rng(3);
  auto v = randomVec(128, rng);
  EXPECT_LT(maxErr(f.dec(f.enc(v)), v, 2048), std::ldexp(1.0, -20));
  auto sym = f.decryptor->encryptSymmetric(f.encoder->encode(v, 11, f.ctx->levelScale(11)), f.sampler);
  EXPECT_LT(maxErr(f.dec(sym), v, 2048), std::ldexp(1.0, -30));
}

TEST(Ckks, AddAndRotate) {
  auto& f = desk();
  std::mt19937_64 rng(4);
  auto a = randomVec(2048, rng), b = randomVec(2048, rng);
  auto s = f.dec(f.evaluator->add(f.enc(a), f.enc(b)));
  for (std::size_t i = 0; i < 2048; ++i) EXPECT_NEAR(s[i], a[i] + b[i], std::ldexp(1.0, -20));

  std::vector<double> ramp(2048);
  for (std::size_t i = 0; i < ramp.size(); ++i) ramp[i] = static_cast<double>(i) / 2048.0;
  auto r = f.dec(f.evaluator->rotate(f.enc(ramp), 1));
  for (std::size_t i = 0; i < 2048; ++i) EXPECT_NEAR(r[i], ramp[(i + 1) % 2048], 1e-6);
  auto l = f.dec(f.evaluator->rotate(f.enc(ramp), -1));
  for (std::size_t i = 0; i < 2048; ++i) EXPECT_NEAR(l[i], ramp[(i + 2047) % 2048], 1e-6);
  EXPECT_THROW(f.evaluator->rotate(f.enc(ramp), 2), MissingGaloisKey);
}

TEST(Ckks, MultiplyRescaleAndPlain) {
  auto& f = desk();
  std::mt19937_64 rng(5);
  auto a = randomVec(2048, rng), b = randomVec(2048, rng);
  auto ca = f.enc(a), cb = f.enc(b);
  auto prod = f.evaluator->rescale(f.evaluator->multiply(ca, cb));
  EXPECT_EQ(prod.level, 10);
  EXPECT_DOUBLE_EQ(prod.scale, f.ctx->levelScale(10));
  auto d = f.dec(prod);
  for (std::size_t i = 0; i < 2048; ++i) EXPECT_NEAR(d[i], a[i] * b[i], 1e-6);

  auto pt = f.encoder->encode(b, 11, f.ctx->levelScale(11));
  auto pp = f.dec(f.evaluator->rescale(f.evaluator->multiplyPlain(ca, pt)));
  for (std::size_t i = 0; i < 2048; ++i) EXPECT_NEAR(pp[i], a[i] * b[i], 1e-6);

  // Mixed levels align automatically.
  auto mixed = f.dec(f.evaluator->add(prod, ca));
  for (std::size_t i = 0; i < 2048; ++i) EXPECT_NEAR(mixed[i], a[i] * b[i] + a[i], 1e-6);
}

TEST(Ckks, LevelAccountingDepthElevenChain) {
  auto& f = desk();
  auto c = f.enc(std::vector<double>(2048, 0.5));
  for (int i = 0; i < 11; ++i) c = f.evaluator->rescale(f.evaluator->multiply(c, c));
  EXPECT_EQ(c.level, 0);
  EXPECT_THROW(f.evaluator->rescale(f.evaluator->multiply(c, c)), DepthExhausted);
}

TEST(Ckks, HomomorphismFuzz) {
  CkksParams p = CkksParams::desk(2);
  p.ringDim = 256;
  Fixture f(p, {1, 5});
  std::mt19937_64 rng(6);
  const double tol = std::ldexp(1.0, -(p.scalingBits - 25));
  const std::size_t n = f.encoder->slotCount();
  double worst = 0;
  for (int t = 0; t < 1000; ++t) {
    auto a = randomVec(n, rng), b = randomVec(n, rng);
    auto ca = f.enc(a), cb = f.enc(b);
    const int k = (t % 2) ? 1 : 5;
    auto sum = f.dec(f.evaluator->add(ca, cb));
    auto mul = f.dec(f.evaluator->rescale(f.evaluator->multiply(ca, cb)));
    auto mpt = f.dec(f.evaluator->rescale(f.evaluator->multiplyPlain(ca, f.encoder->encode(b, 2, f.ctx->levelScale(2)))));
    auto rot = f.dec(f.evaluator->rotate(ca, k));
    for (std::size_t i = 0; i < n; ++i) {
      worst = std::max(worst, std::fabs(sum[i] - (a[i] + b[i])));
      worst = std::max(worst, std::fabs(mul[i] - a[i] * b[i]));
      worst = std::max(worst, std::fabs(mpt[i] - a[i] * b[i]));
      worst = std::max(worst, std::fabs(rot[i] - a[(i + static_cast<std::size_t>(k)) % n]));
    }
  }
  EXPECT_LT(worst, tol);
}

TEST(Ckks, LevelTrajectoryIsInputIndependent) {
  auto& f = desk();
  auto run = [&](double x) {
    auto c = f.enc(std::vector<double>(2048, x));
    std::vector<std::pair<int, double>> traj;
    for (int i = 0; i < 3; ++i) {
      c = f.evaluator->rescale(f.evaluator->multiply(c, c));
      traj.emplace_back(c.level, c.scale);
    }
    return traj;
  };
  EXPECT_EQ(run(0.1), run(0.9));
}

TEST(Serialize, KeysAndCiphertextRoundTrip) {
  Fixture f(CkksParams::desk(3), {1, 5});
  std::stringstream client, cloud, blob;
  writeClientKeys(client, *f.ctx, f.keys.secretKey, f.keys.evaluation.publicKey);
  writeEvaluationKeys(cloud, *f.ctx, f.keys.evaluation);
  const auto ck = readClientKeys(client, f.ctx);
  EXPECT_TRUE(ck.secretKey.poly == f.keys.secretKey.poly);
  const auto evk = readEvaluationKeys(cloud, f.ctx);
  EXPECT_TRUE(evk.publicKey.a == f.keys.evaluation.publicKey.a);
  ASSERT_EQ(evk.galoisKeys.size(), 2u);
  const auto& orig = f.keys.evaluation.galoisKeys.keys.at(5);
  const auto& back = evk.galoisKeys.keys.at(5);
  for (std::size_t i = 0; i < orig.a.size(); ++i) {
    EXPECT_TRUE(back.a[i] == orig.a[i]);
    EXPECT_TRUE(back.b[i] == orig.b[i]);
  }

  std::mt19937_64 rng(3);
  const auto v = randomVec(f.ctx->slotCount(), rng);
  writeCiphertext(blob, *f.ctx, f.enc(v));
  const auto ct = readCiphertext(blob, f.ctx);
  // Rotating with the reloaded Galois key exercises the expanded a_i.
  Evaluator eval(f.ctx, std::make_shared<EvaluationKeys>(evk));
  const auto rotated = f.dec(eval.rotate(ct, 5));
  double err = 0;
  for (std::size_t i = 0; i < v.size(); ++i) err = std::max(err, std::fabs(rotated[i] - v[(i + 5) % v.size()]));
  EXPECT_LT(err, 1e-6);
}

TEST(Serialize, RejectsCorruptOrForeignFiles) {
  Fixture f(CkksParams::desk(3), {});
  std::stringstream blob;
  std::mt19937_64 rng(4);
  writeCiphertext(blob, *f.ctx, f.enc(randomVec(8, rng)));
  const std::string bytes = blob.str();

  std::stringstream truncated(bytes.substr(0, bytes.size() / 2));
  EXPECT_THROW(readCiphertext(truncated, f.ctx), FormatError);
  std::string badMagic = bytes;
  badMagic[0] = 'X';
  std::stringstream bm(badMagic);
  EXPECT_THROW(readCiphertext(bm, f.ctx), FormatError);
  std::stringstream wrongKind(bytes);
  EXPECT_THROW(readEvaluationKeys(wrongKind, f.ctx), FormatError);

  auto other = std::make_shared<const CkksContext>(CkksParams::desk(4));
  std::stringstream foreign(bytes);
  EXPECT_THROW(readCiphertext(foreign, other), ConfigError);
  std::stringstream header(bytes);
  EXPECT_EQ(readHeader(header).params.depth, 3);
}
