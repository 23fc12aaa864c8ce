#include "oblivdsp/ckks/keys.hpp"

#include <cmath>

#include "oblivdsp/ckks/encoder.hpp"
#include "oblivdsp/error.hpp"

namespace oblivdsp::ckks {

using ring::PolyForm;
using ring::RnsPolynomial;
using ring::u64;

Sampler::Sampler(std::uint64_t seed) : rng_(seed) {}

Sampler::Sampler() {
  std::random_device rd;
  std::seed_seq seq{rd(), rd(), rd(), rd(), rd(), rd(), rd(), rd()};
  rng_.seed(seq);
}

std::vector<std::int64_t> Sampler::ternary(std::size_t n) {
  std::uniform_int_distribution<int> dist(-1, 1);
  std::vector<std::int64_t> out(n);
  for (auto& v : out) v = dist(rng_);
  return out;
}

std::vector<std::int64_t> Sampler::gaussian(std::size_t n, double sigma) {
  std::normal_distribution<double> dist(0.0, sigma);
  const double bound = 6.0 * sigma;
  std::vector<std::int64_t> out(n);
  for (auto& v : out) {
    double x;
    do {
      x = dist(rng_);
    } while (std::fabs(x) > bound);
    v = static_cast<std::int64_t>(std::llround(x));
  }
  return out;
}

void Sampler::uniform(RnsPolynomial& p) {
  for (std::size_t i = 0; i < p.primeCount(); ++i) {
    std::uniform_int_distribution<u64> dist(0, p.modulus(i).value() - 1);
    for (auto& v : p.residues(i)) v = dist(rng_);
  }
}

std::uint64_t Sampler::next() { return rng_(); }

RnsPolynomial expandUniform(const CkksContext& ctx, std::uint64_t seed) {
  RnsPolynomial a(ctx.ring(), ctx.extendedBasis(), PolyForm::evaluation);
  Sampler expander(seed);
  expander.uniform(a);
  return a;
}

std::size_t normalizeRotation(int rotation, std::size_t slots) {
  const long long s = static_cast<long long>(slots);
  return static_cast<std::size_t>(((rotation % s) + s) % s);
}

KeyGenerator::KeyGenerator(std::shared_ptr<const CkksContext> ctx, Sampler& sampler)
    : ctx_(std::move(ctx)), sampler_(sampler) {}

SecretKey KeyGenerator::secretKey() {
  SecretKey sk;
  sk.poly = RnsPolynomial(ctx_->ring(), ctx_->extendedBasis());
  sk.poly.setSigned(sampler_.ternary(ctx_->ringDim()));
  ring::toEvaluation(sk.poly);
  return sk;
}

PublicKey KeyGenerator::publicKey(const SecretKey& sk) {
  const int top = ctx_->maxLevel();
  PublicKey pk;
  pk.a = RnsPolynomial(ctx_->ring(), ctx_->basisAt(top), PolyForm::evaluation);
  sampler_.uniform(pk.a);
  RnsPolynomial e(ctx_->ring(), ctx_->basisAt(top));
  e.setSigned(sampler_.gaussian(ctx_->ringDim(), ctx_->params().errorStdDev));
  ring::toEvaluation(e);
  const RnsPolynomial s = sk.poly.prefix(static_cast<std::size_t>(top) + 1);
  pk.b = ring::sub(e, ring::mulPointwise(pk.a, s));
  return pk;
}

SwitchingKey KeyGenerator::switchingKey(const SecretKey& sk, const RnsPolynomial& from) {
  const std::size_t digits = ctx_->chain().length();
  const u64 special = ctx_->specialPrime();
  SwitchingKey key;
  key.a.reserve(digits);
  key.b.reserve(digits);
  for (std::size_t i = 0; i < digits; ++i) {
    const std::uint64_t seed = sampler_.next();
    RnsPolynomial a = expandUniform(*ctx_, seed);
    key.seeds.push_back(seed);
    RnsPolynomial e(ctx_->ring(), ctx_->extendedBasis());
    e.setSigned(sampler_.gaussian(ctx_->ringDim(), ctx_->params().errorStdDev));
    ring::toEvaluation(e);
    RnsPolynomial b = ring::sub(e, ring::mulPointwise(a, sk.poly));
    // Add P * from on the i-th prime only (P * from vanishes mod P).
    const auto& qi = b.modulus(i);
    const u64 pMod = qi.reduce(special);
    auto dst = b.residues(i);
    auto src = from.residues(i);
    for (std::size_t j = 0; j < dst.size(); ++j) dst[j] = qi.add(dst[j], qi.mul(pMod, src[j]));
    key.a.push_back(std::move(a));
    key.b.push_back(std::move(b));
  }
  return key;
}

RelinKey KeyGenerator::relinKey(const SecretKey& sk) {
  return RelinKey{switchingKey(sk, ring::mulPointwise(sk.poly, sk.poly))};
}

SwitchingKey KeyGenerator::galoisKey(const SecretKey& sk, int rotation) {
  CkksEncoder enc(ctx_);
  const std::size_t g = enc.galoisElement(rotation);
  RnsPolynomial s = ring::nttInverse(sk.poly);
  RnsPolynomial sg = ring::automorphism(s, g);
  ring::toEvaluation(sg);
  return switchingKey(sk, sg);
}

GaloisKeys KeyGenerator::galoisKeys(const SecretKey& sk, const std::set<int>& rotations) {
  GaloisKeys gk;
  for (int r : rotations) {
    const std::size_t k = normalizeRotation(r, ctx_->slotCount());
    if (k == 0 || gk.has(k)) continue;
    gk.keys.emplace(k, galoisKey(sk, r));
  }
  return gk;
}

KeySet KeyGenerator::generate(const std::set<int>& rotations) {
  KeySet ks;
  ks.secretKey = secretKey();
  ks.evaluation.publicKey = publicKey(ks.secretKey);
  ks.evaluation.relinKey = relinKey(ks.secretKey);
  ks.evaluation.galoisKeys = galoisKeys(ks.secretKey, rotations);
  return ks;
}

}  // namespace oblivdsp::ckks
