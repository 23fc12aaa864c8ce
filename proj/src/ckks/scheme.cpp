#include "oblivdsp/ckks/scheme.hpp"

#include <cmath>
#include <string>

#include "oblivdsp/error.hpp"

namespace oblivdsp::ckks {

using ring::PolyForm;
using ring::RnsPolynomial;
using ring::u128;
using ring::u64;

bool scalesMatch(double a, double b) noexcept { return std::fabs(a / b - 1.0) < 1e-9; }

Encryptor::Encryptor(std::shared_ptr<const CkksContext> ctx, PublicKey pk, Sampler& sampler)
    : ctx_(std::move(ctx)), pk_(std::move(pk)), sampler_(sampler) {}

Ciphertext Encryptor::encrypt(const Plaintext& pt) {
  const std::size_t n = ctx_->ringDim();
  const auto basis = ctx_->basisAt(pt.level);
  const std::size_t count = basis.size();
  RnsPolynomial u(ctx_->ring(), basis);
  u.setSigned(sampler_.ternary(n));
  ring::toEvaluation(u);
  RnsPolynomial e0(ctx_->ring(), basis), e1(ctx_->ring(), basis);
  e0.setSigned(sampler_.gaussian(n, ctx_->params().errorStdDev));
  e1.setSigned(sampler_.gaussian(n, ctx_->params().errorStdDev));
  ring::toEvaluation(e0);
  ring::toEvaluation(e1);
  Ciphertext ct;
  ct.level = pt.level;
  ct.scale = pt.scale;
  RnsPolynomial c0 = ring::mulPointwise(u, pk_.b.prefix(count));
  ring::addInPlace(c0, e0);
  ring::addInPlace(c0, pt.poly);
  RnsPolynomial c1 = ring::mulPointwise(u, pk_.a.prefix(count));
  ring::addInPlace(c1, e1);
  ct.polys.push_back(std::move(c0));
  ct.polys.push_back(std::move(c1));
  return ct;
}

Decryptor::Decryptor(std::shared_ptr<const CkksContext> ctx, SecretKey sk)
    : ctx_(std::move(ctx)), sk_(std::move(sk)) {}

Plaintext Decryptor::decrypt(const Ciphertext& ct) const {
  if (ct.polys.empty()) throw Error("empty ciphertext");
  const std::size_t count = ct.polys[0].primeCount();
  const RnsPolynomial s = sk_.poly.prefix(count);
  RnsPolynomial m = ct.polys[0];
  RnsPolynomial power = s;
  for (std::size_t i = 1; i < ct.polys.size(); ++i) {
    ring::mulAddPointwise(m, ct.polys[i], power);
    if (i + 1 < ct.polys.size()) power = ring::mulPointwise(power, s);
  }
  return Plaintext{std::move(m), ct.level, ct.scale};
}

Ciphertext Decryptor::encryptSymmetric(const Plaintext& pt, Sampler& sampler) const {
  const auto basis = ctx_->basisAt(pt.level);
  RnsPolynomial a(ctx_->ring(), basis, PolyForm::evaluation);
  sampler.uniform(a);
  RnsPolynomial e(ctx_->ring(), basis);
  e.setSigned(sampler.gaussian(ctx_->ringDim(), ctx_->params().errorStdDev));
  ring::toEvaluation(e);
  RnsPolynomial c0 = ring::sub(e, ring::mulPointwise(a, sk_.poly.prefix(basis.size())));
  ring::addInPlace(c0, pt.poly);
  Ciphertext ct;
  ct.level = pt.level;
  ct.scale = pt.scale;
  ct.polys.push_back(std::move(c0));
  ct.polys.push_back(std::move(a));
  return ct;
}

Evaluator::Evaluator(std::shared_ptr<const CkksContext> ctx, std::shared_ptr<const EvaluationKeys> keys)
    : ctx_(std::move(ctx)), keys_(std::move(keys)), encoder_(ctx_) {}

void Evaluator::requireAligned(const Ciphertext& a, const Ciphertext& b) const {
  if (a.level != b.level) throw Error("ciphertext levels differ");
  if (!scalesMatch(a.scale, b.scale)) {
    throw ScaleMismatch("ciphertext scales differ: " + std::to_string(a.scale) + " vs " + std::to_string(b.scale));
  }
}

namespace {

std::pair<Ciphertext, Ciphertext> aligned(const Evaluator& ev, const Ciphertext& a, const Ciphertext& b) {
  if (a.level > b.level) return {ev.dropToLevel(a, b.level), b};
  if (b.level > a.level) return {a, ev.dropToLevel(b, a.level)};
  return {a, b};
}

}  // namespace

Ciphertext Evaluator::add(const Ciphertext& a0, const Ciphertext& b0) const {
  auto [a, b] = aligned(*this, a0, b0);
  requireAligned(a, b);
  Ciphertext r = a.size() >= b.size() ? a : b;
  const Ciphertext& o = a.size() >= b.size() ? b : a;
  for (std::size_t i = 0; i < o.size(); ++i) ring::addInPlace(r.polys[i], o.polys[i]);
  return r;
}

Ciphertext Evaluator::negate(const Ciphertext& a) const {
  Ciphertext r = a;
  for (auto& p : r.polys) p = ring::negate(p);
  return r;
}

Ciphertext Evaluator::sub(const Ciphertext& a, const Ciphertext& b) const { return add(a, negate(b)); }

Ciphertext Evaluator::addPlain(const Ciphertext& a, const Plaintext& pt) const {
  if (pt.level != a.level || !scalesMatch(pt.scale, a.scale)) throw ScaleMismatch("plaintext not encoded at ciphertext level/scale");
  Ciphertext r = a;
  ring::addInPlace(r.polys[0], pt.poly);
  return r;
}

Ciphertext Evaluator::multiplyNoRelin(const Ciphertext& a0, const Ciphertext& b0) const {
  auto [a, b] = aligned(*this, a0, b0);
  if (a.size() != 2 || b.size() != 2) throw Error("multiply expects relinearized operands");
  Ciphertext r;
  r.level = a.level;
  r.scale = a.scale * b.scale;
  RnsPolynomial d0 = ring::mulPointwise(a.polys[0], b.polys[0]);
  RnsPolynomial d1 = ring::mulPointwise(a.polys[0], b.polys[1]);
  ring::mulAddPointwise(d1, a.polys[1], b.polys[0]);
  RnsPolynomial d2 = ring::mulPointwise(a.polys[1], b.polys[1]);
  r.polys = {std::move(d0), std::move(d1), std::move(d2)};
  return r;
}

Ciphertext Evaluator::multiply(const Ciphertext& a, const Ciphertext& b) const {
  return relinearize(multiplyNoRelin(a, b));
}

Ciphertext Evaluator::relinearize(const Ciphertext& a) const {
  if (a.size() == 2) return a;
  if (a.size() != 3) throw Error("relinearize expects a 3-component ciphertext");
  if (!keys_ || keys_->relinKey.key.a.empty()) throw Error("relinearization key missing");
  RnsPolynomial d2 = ring::nttInverse(a.polys[2]);
  RnsPolynomial k0, k1;
  keySwitch(d2, keys_->relinKey.key, a.level, k0, k1);
  Ciphertext r;
  r.level = a.level;
  r.scale = a.scale;
  r.polys = {ring::add(a.polys[0], k0), ring::add(a.polys[1], k1)};
  return r;
}

Ciphertext Evaluator::multiplyPlain(const Ciphertext& a, const Plaintext& pt) const {
  if (pt.level != a.level) throw Error("plaintext level does not match ciphertext");
  Ciphertext r = a;
  for (auto& p : r.polys) p = ring::mulPointwise(p, pt.poly);
  r.scale = a.scale * pt.scale;
  return r;
}

Ciphertext Evaluator::rescale(const Ciphertext& a) const {
  if (a.level <= 0) throw DepthExhausted("rescale at level 0");
  Ciphertext r;
  r.level = a.level - 1;
  r.scale = a.scale / static_cast<double>(ctx_->chain().primes[static_cast<std::size_t>(a.level)]);
  r.polys.reserve(a.size());
  for (const auto& p : a.polys) r.polys.push_back(ring::dropLastPrime(p));
  return r;
}

Ciphertext Evaluator::dropToLevel(const Ciphertext& a, int level) const {
  if (level > a.level) throw Error("cannot raise a ciphertext level");
  if (level < 0) throw DepthExhausted("target level below zero");
  Ciphertext r = a;
  while (r.level > level) {
    const int l = r.level;
    const double target = ctx_->levelScale(l - 1);
    const double q = static_cast<double>(ctx_->chain().primes[static_cast<std::size_t>(l)]);
    const long double c = std::round(static_cast<long double>(target) * q / r.scale);
    if (c < 1 || c >= std::ldexp(1.0L, 62)) throw ScaleMismatch("level drop constant out of range");
    const u64 ci = static_cast<u64>(c);
    std::vector<u64> residues(static_cast<std::size_t>(l) + 1, ci);
    for (auto& p : r.polys) ring::mulScalarInPlace(p, residues);
    r = rescale(r);
    r.scale = target;
  }
  return r;
}

bool Evaluator::hasRotation(int k) const {
  const std::size_t nk = normalizeRotation(k, ctx_->slotCount());
  return nk == 0 || (keys_ && keys_->galoisKeys.has(nk));
}

Ciphertext Evaluator::rotate(const Ciphertext& a, int k) const {
  const std::size_t nk = normalizeRotation(k, ctx_->slotCount());
  if (nk == 0) return a;
  if (!keys_ || !keys_->galoisKeys.has(nk)) {
    throw MissingGaloisKey("no Galois key for rotation " + std::to_string(k));
  }
  if (a.size() != 2) throw Error("rotate expects a relinearized ciphertext");
  const std::size_t g = encoder_.galoisElement(k);
  RnsPolynomial c0 = ring::automorphism(ring::nttInverse(a.polys[0]), g);
  RnsPolynomial c1 = ring::automorphism(ring::nttInverse(a.polys[1]), g);
  ring::toEvaluation(c0);
  RnsPolynomial k0, k1;
  keySwitch(c1, keys_->galoisKeys.keys.at(nk), a.level, k0, k1);
  Ciphertext r;
  r.level = a.level;
  r.scale = a.scale;
  ring::addInPlace(k0, c0);
  r.polys = {std::move(k0), std::move(k1)};
  return r;
}

namespace {

// x mod q for any 128-bit x, given r64 = 2^64 mod q; every Barrett input stays below q^2.
u64 reduceWide(const ring::Modulus& q, u128 x, u64 r64) {
  const u64 hi = q.reduce128(static_cast<u64>(x >> 64));
  const u64 lo = q.reduce128(static_cast<u64>(x));
  return q.add(q.reduce128(static_cast<u128>(hi) * r64), lo);
}

}  // namespace

void Evaluator::keySwitch(const RnsPolynomial& d, const SwitchingKey& key, int level, RnsPolynomial& out0,
                          RnsPolynomial& out1) const {
  if (d.form() != PolyForm::coefficient) throw Error("key switching expects coefficient form");
  const std::size_t n = ctx_->ringDim();
  const std::size_t digits = static_cast<std::size_t>(level) + 1;
  const std::size_t ext = digits + 1;  // q_0..q_level, P
  const std::size_t keyExt = ctx_->chain().length() + 1;
  const auto& ringCtx = ctx_->ring();

  std::vector<std::uint32_t> extBasis = ctx_->basisAt(level);
  extBasis.push_back(ctx_->specialIndex());
  // Position of each extended-basis prime inside the key polynomials.
  std::vector<std::size_t> keyPos(ext);
  for (std::size_t j = 0; j < digits; ++j) keyPos[j] = j;
  keyPos[digits] = keyExt - 1;

  std::vector<u128> acc0(ext * n, 0), acc1(ext * n, 0);
  std::vector<u64> lifted(n);
  // Lazy 128-bit accumulation holds fewer than 2^5 products of 61-bit values.
  if (digits > 31) throw Error("too many digits for lazy accumulation");

  for (std::size_t i = 0; i < digits; ++i) {
    const ring::Modulus& qi = d.modulus(i);
    const auto di = d.residues(i);
    const u64 halfQi = qi.value() >> 1;
    for (std::size_t j = 0; j < ext; ++j) {
      const ring::Modulus& qj = ringCtx->modulus(extBasis[j]);
      if (j == i) {
        std::copy(di.begin(), di.end(), lifted.begin());
      } else {
        const u64 qiMod = qj.reduce(qi.value());
        for (std::size_t k = 0; k < n; ++k) {
          const u64 v = di[k];
          // Centered digit lifted into q_j.
          lifted[k] = v > halfQi ? qj.sub(qj.reduce(v), qiMod) : qj.reduce(v);
        }
      }
      ringCtx->ntt(extBasis[j]).forward(lifted.data());
      const auto kb = key.b[i].residues(keyPos[j]);
      const auto ka = key.a[i].residues(keyPos[j]);
      u128* a0 = acc0.data() + j * n;
      u128* a1 = acc1.data() + j * n;
      for (std::size_t k = 0; k < n; ++k) {
        a0[k] += static_cast<u128>(lifted[k]) * kb[k];
        a1[k] += static_cast<u128>(lifted[k]) * ka[k];
      }
    }
  }

  RnsPolynomial e0(ringCtx, extBasis, PolyForm::evaluation), e1(ringCtx, extBasis, PolyForm::evaluation);
  for (std::size_t j = 0; j < ext; ++j) {
    const ring::Modulus& qj = ringCtx->modulus(extBasis[j]);
    const u64 r64 = qj.reduce128(static_cast<u128>(1) << 64);
    auto r0 = e0.residues(j);
    auto r1 = e1.residues(j);
    for (std::size_t k = 0; k < n; ++k) {
      r0[k] = reduceWide(qj, acc0[j * n + k], r64);
      r1[k] = reduceWide(qj, acc1[j * n + k], r64);
    }
  }
  out0 = ring::dropLastPrime(e0);
  out1 = ring::dropLastPrime(e1);
}

}  // namespace oblivdsp::ckks
