#include "oblivdsp/ring/rns.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <string>

#include "oblivdsp/error.hpp"

namespace oblivdsp::ring {

RingContext::RingContext(std::size_t ringDim, const std::vector<u64>& primes) : n_(ringDim) {
  if (!std::has_single_bit(ringDim) || ringDim < 2) {
    throw ConfigError("ring dimension must be a power of two");
  }
  moduli_.reserve(primes.size());
  ntt_.reserve(primes.size());
  for (std::size_t i = 0; i < primes.size(); ++i) {
    const u64 q = primes[i];
    if (!isPrime(q) || (q - 1) % (2 * ringDim) != 0) {
      throw ConfigError("prime " + std::to_string(q) + " is not NTT-friendly for N=" +
                        std::to_string(ringDim));
    }
    for (std::size_t j = 0; j < i; ++j) {
      if (primes[j] == q) throw ConfigError("duplicate prime in basis");
    }
    moduli_.emplace_back(q);
    ntt_.emplace_back(moduli_.back(), ringDim);
  }
}

ModulusChain ModulusChain::generate(std::size_t ringDim, int firstBits, int scalingBits, int depth) {
  if (depth < 0) throw ConfigError("negative depth");
  ModulusChain chain;
  chain.ringDim = ringDim;
  chain.scalingBits = scalingBits;
  chain.firstBits = firstBits;
  chain.primes = generateNttPrimes(firstBits, ringDim, 1);
  const auto scaling = generateNttPrimes(scalingBits, ringDim, static_cast<std::size_t>(depth), chain.primes);
  chain.primes.insert(chain.primes.end(), scaling.begin(), scaling.end());
  chain.validate();
  return chain;
}

void ModulusChain::validate() const {
  if (primes.empty()) throw ConfigError("modulus chain is empty");
  for (std::size_t i = 0; i < primes.size(); ++i) {
    const u64 q = primes[i];
    if ((q & 1) == 0 || !isPrime(q) || (q - 1) % (2 * ringDim) != 0) {
      throw ConfigError("chain prime " + std::to_string(q) + " is not NTT-friendly");
    }
    const int declared = i == 0 ? firstBits : scalingBits;
    const double bits = std::log2(static_cast<double>(q));
    if (std::abs(bits - declared) > 1.0) throw ConfigError("chain prime size deviates from declared bits");
    for (std::size_t j = 0; j < i; ++j) {
      if (primes[j] == q) throw ConfigError("duplicate chain prime");
    }
  }
}

RnsPolynomial::RnsPolynomial(std::shared_ptr<const RingContext> ctx, std::vector<std::uint32_t> basis,
                             PolyForm form)
    : ctx_(std::move(ctx)), basis_(std::move(basis)), form_(form) {
  if (!ctx_) throw Error("polynomial without ring context");
  if (basis_.empty()) throw Error("polynomial needs at least one prime");
  for (auto idx : basis_) {
    if (idx >= ctx_->primeCount()) throw Error("basis index out of range");
  }
  data_.assign(basis_.size() * ctx_->degree(), 0);
}

void RnsPolynomial::setSigned(std::span<const std::int64_t> coeffs) {
  const std::size_t n = degree();
  if (coeffs.size() != n) throw Error("coefficient count does not match ring dimension");
  for (std::size_t i = 0; i < primeCount(); ++i) {
    const Modulus& q = modulus(i);
    auto r = residues(i);
    for (std::size_t j = 0; j < n; ++j) r[j] = q.fromSigned(coeffs[j]);
  }
  form_ = PolyForm::coefficient;
}

RnsPolynomial RnsPolynomial::prefix(std::size_t count) const {
  if (count == 0 || count > basis_.size()) throw Error("invalid prefix length");
  RnsPolynomial out(ctx_, std::vector<std::uint32_t>(basis_.begin(), basis_.begin() + count), form_);
  std::copy(data_.begin(), data_.begin() + count * degree(), out.data_.begin());
  return out;
}

void toEvaluation(RnsPolynomial& p) {
  if (p.form() == PolyForm::evaluation) return;
  for (std::size_t i = 0; i < p.primeCount(); ++i) {
    p.context()->ntt(p.basis()[i]).forward(p.residues(i).data());
  }
  p.setForm(PolyForm::evaluation);
}

void toCoefficient(RnsPolynomial& p) {
  if (p.form() == PolyForm::coefficient) return;
  for (std::size_t i = 0; i < p.primeCount(); ++i) {
    p.context()->ntt(p.basis()[i]).inverse(p.residues(i).data());
  }
  p.setForm(PolyForm::coefficient);
}

RnsPolynomial nttForward(RnsPolynomial p) {
  if (p.form() != PolyForm::coefficient) throw Error("nttForward expects coefficient form");
  toEvaluation(p);
  return p;
}

RnsPolynomial nttInverse(RnsPolynomial p) {
  if (p.form() != PolyForm::evaluation) throw Error("nttInverse expects evaluation form");
  toCoefficient(p);
  return p;
}

namespace {

void requireCompatible(const RnsPolynomial& a, const RnsPolynomial& b) {
  if (!a.sameBasis(b)) throw Error("RNS basis mismatch");
  if (a.form() != b.form()) throw Error("polynomial form mismatch");
}

}  // namespace

void addInPlace(RnsPolynomial& a, const RnsPolynomial& b) {
  requireCompatible(a, b);
  for (std::size_t i = 0; i < a.primeCount(); ++i) {
    const Modulus& q = a.modulus(i);
    auto x = a.residues(i);
    auto y = b.residues(i);
    for (std::size_t j = 0; j < x.size(); ++j) x[j] = q.add(x[j], y[j]);
  }
}

void subInPlace(RnsPolynomial& a, const RnsPolynomial& b) {
  requireCompatible(a, b);
  for (std::size_t i = 0; i < a.primeCount(); ++i) {
    const Modulus& q = a.modulus(i);
    auto x = a.residues(i);
    auto y = b.residues(i);
    for (std::size_t j = 0; j < x.size(); ++j) x[j] = q.sub(x[j], y[j]);
  }
}

RnsPolynomial add(const RnsPolynomial& a, const RnsPolynomial& b) {
  RnsPolynomial r = a;
  addInPlace(r, b);
  return r;
}

RnsPolynomial sub(const RnsPolynomial& a, const RnsPolynomial& b) {
  RnsPolynomial r = a;
  subInPlace(r, b);
  return r;
}

RnsPolynomial negate(const RnsPolynomial& a) {
  RnsPolynomial r = a;
  for (std::size_t i = 0; i < r.primeCount(); ++i) {
    const Modulus& q = r.modulus(i);
    for (auto& v : r.residues(i)) v = q.neg(v);
  }
  return r;
}

RnsPolynomial mulPointwise(const RnsPolynomial& a, const RnsPolynomial& b) {
  requireCompatible(a, b);
  if (a.form() != PolyForm::evaluation) throw Error("pointwise product needs evaluation form");
  RnsPolynomial r = a;
  for (std::size_t i = 0; i < r.primeCount(); ++i) {
    const Modulus& q = r.modulus(i);
    auto x = r.residues(i);
    auto y = b.residues(i);
    for (std::size_t j = 0; j < x.size(); ++j) x[j] = q.mul(x[j], y[j]);
  }
  return r;
}

void mulAddPointwise(RnsPolynomial& acc, const RnsPolynomial& a, const RnsPolynomial& b) {
  requireCompatible(a, b);
  requireCompatible(acc, a);
  if (a.form() != PolyForm::evaluation) throw Error("pointwise product needs evaluation form");
  for (std::size_t i = 0; i < acc.primeCount(); ++i) {
    const Modulus& q = acc.modulus(i);
    auto z = acc.residues(i);
    auto x = a.residues(i);
    auto y = b.residues(i);
    for (std::size_t j = 0; j < z.size(); ++j) z[j] = q.add(z[j], q.mul(x[j], y[j]));
  }
}

RnsPolynomial ringMul(const RnsPolynomial& a, const RnsPolynomial& b) {
  requireCompatible(a, b);
  if (a.form() == PolyForm::evaluation) return mulPointwise(a, b);
  RnsPolynomial x = nttForward(a);
  const RnsPolynomial y = nttForward(b);
  x = mulPointwise(x, y);
  return nttInverse(std::move(x));
}

void mulScalarInPlace(RnsPolynomial& a, std::span<const u64> residuesPerPrime) {
  if (residuesPerPrime.size() < a.primeCount()) throw Error("scalar residues missing");
  for (std::size_t i = 0; i < a.primeCount(); ++i) {
    const Modulus& q = a.modulus(i);
    const u64 w = q.reduce(residuesPerPrime[i]);
    const u64 ws = q.shoup(w);
    for (auto& v : a.residues(i)) v = q.mulShoup(v, w, ws);
  }
}

RnsPolynomial dropLastPrime(const RnsPolynomial& p) {
  const std::size_t k = p.primeCount();
  if (k < 2) throw DepthExhausted("cannot drop the last remaining prime");
  const std::size_t n = p.degree();
  const auto& ctx = p.context();
  const Modulus& last = p.modulus(k - 1);

  // Centered last residue r in (-q_last/2, q_last/2]; (a - r) / q_last is then
  // a rounded to the nearest integer (no ties, q_last is odd).
  std::vector<u64> r(p.residues(k - 1).begin(), p.residues(k - 1).end());
  if (p.form() == PolyForm::evaluation) ctx->ntt(p.basis()[k - 1]).inverse(r.data());
  const u64 half = last.value() >> 1;

  RnsPolynomial out(ctx, std::vector<std::uint32_t>(p.basis().begin(), p.basis().end() - 1), p.form());
  std::vector<u64> lifted(n);
  for (std::size_t i = 0; i + 1 < k; ++i) {
    const Modulus& q = p.modulus(i);
    const u64 lastMod = q.reduce(last.value());
    const u64 inv = q.inverse(lastMod);
    const u64 invShoup = q.shoup(inv);
    for (std::size_t j = 0; j < n; ++j) {
      lifted[j] = r[j] > half ? q.sub(q.reduce(r[j]), lastMod) : q.reduce(r[j]);
    }
    if (p.form() == PolyForm::evaluation) ctx->ntt(p.basis()[i]).forward(lifted.data());
    auto src = p.residues(i);
    auto dst = out.residues(i);
    for (std::size_t j = 0; j < n; ++j) dst[j] = q.mulShoup(q.sub(src[j], lifted[j]), inv, invShoup);
  }
  return out;
}

RnsPolynomial automorphism(const RnsPolynomial& p, std::size_t galoisElement) {
  if (p.form() != PolyForm::coefficient) throw Error("automorphism expects coefficient form");
  const std::size_t n = p.degree();
  const std::size_t m = 2 * n;
  if ((galoisElement & 1) == 0) throw Error("Galois element must be odd");
  const std::size_t g = galoisElement & (m - 1);
  RnsPolynomial out(p.context(), p.basis(), PolyForm::coefficient);
  for (std::size_t i = 0; i < p.primeCount(); ++i) {
    const Modulus& q = p.modulus(i);
    auto src = p.residues(i);
    auto dst = out.residues(i);
    std::size_t idx = 0;
    for (std::size_t j = 0; j < n; ++j) {
      if (idx < n) {
        dst[idx] = src[j];
      } else {
        dst[idx - n] = q.neg(src[j]);
      }
      idx = (idx + g) & (m - 1);
    }
  }
  return out;
}

}  // namespace oblivdsp::ring
