#include "oblivdsp/vm/ckks_backend.hpp"

#include "oblivdsp/error.hpp"

namespace oblivdsp::vm {

using ckks::Ciphertext;

namespace {

std::shared_ptr<const Payload> make(Ciphertext c) { return std::make_shared<const CipherPayload>(std::move(c)); }

}  // namespace

CkksBackend::CkksBackend(std::shared_ptr<const ckks::CkksContext> ctx, std::shared_ptr<const ckks::EvaluationKeys> keys)
    : ctx_(ctx), encoder_(ctx), evaluator_(ctx, std::move(keys)) {}

double CkksBackend::primeAt(int level) const {
  return static_cast<double>(ctx_->chain().primes.at(static_cast<std::size_t>(level)));
}

const Ciphertext& CkksBackend::cipher(const SlotVector& v) {
  const auto* p = dynamic_cast<const CipherPayload*>(v.handle.get());
  if (!p) throw Error("slot vector does not belong to the CKKS backend");
  return p->ct;
}

std::shared_ptr<const Payload> CkksBackend::add(const SlotVector& a, const SlotVector& b) {
  return make(evaluator_.add(cipher(a), cipher(b)));
}

std::shared_ptr<const Payload> CkksBackend::sub(const SlotVector& a, const SlotVector& b) {
  return make(evaluator_.sub(cipher(a), cipher(b)));
}

std::shared_ptr<const Payload> CkksBackend::addPlain(const SlotVector& a, std::span<const double> values) {
  const auto& ct = cipher(a);
  return make(evaluator_.addPlain(ct, encoder_.encode(values, ct.level, ct.scale)));
}

std::shared_ptr<const Payload> CkksBackend::mulCt(const SlotVector& a, const SlotVector& b) {
  return make(evaluator_.multiply(cipher(a), cipher(b)));
}

std::shared_ptr<const Payload> CkksBackend::mulPlain(const SlotVector& a, std::span<const double> values) {
  const auto& ct = cipher(a);
  return make(evaluator_.multiplyPlain(ct, encoder_.encode(values, ct.level, ctx_->levelScale(ct.level))));
}

std::shared_ptr<const Payload> CkksBackend::rotate(const SlotVector& a, int k) {
  return make(evaluator_.rotate(cipher(a), k));
}

std::shared_ptr<const Payload> CkksBackend::rescale(const SlotVector& a) {
  return make(evaluator_.rescale(cipher(a)));
}

std::shared_ptr<const Payload> CkksBackend::dropLevel(const SlotVector& a, int level) {
  return make(evaluator_.dropToLevel(cipher(a), level));
}

CkksClient::CkksClient(std::shared_ptr<const ckks::CkksContext> ctx, const ckks::KeySet& keys, std::uint64_t seed,
                       EncryptionMode mode)
    : ctx_(ctx),
      sampler_(seed),
      encoder_(ctx),
      encryptor_(ctx, keys.evaluation.publicKey, sampler_),
      decryptor_(ctx, keys.secretKey),
      mode_(mode) {}

SlotVector CkksClient::wrap(Ciphertext ct) const {
  SlotVector v;
  v.slotCount = ctx_->slotCount();
  v.level = ct.level;
  v.scale = ct.scale;
  v.pendingRescale = false;
  v.handle = make(std::move(ct));
  return v;
}

SlotVector CkksClient::encrypt(std::span<const double> values) {
  const int top = ctx_->maxLevel();
  const auto pt = encoder_.encode(values, top, ctx_->levelScale(top));
  return wrap(mode_ == EncryptionMode::publicKey ? encryptor_.encrypt(pt) : decryptor_.encryptSymmetric(pt, sampler_));
}

std::vector<double> CkksClient::decrypt(const SlotVector& v) {
  return encoder_.decode(decryptor_.decrypt(CkksBackend::cipher(v)));
}

}  // namespace oblivdsp::vm
