#pragma once

#include <memory>

#include "oblivdsp/ckks/scheme.hpp"
#include "oblivdsp/vm/backend.hpp"

namespace oblivdsp::vm {

struct CipherPayload : Payload {
  ckks::Ciphertext ct;
  explicit CipherPayload(ckks::Ciphertext c) : ct(std::move(c)) {}
};

// Cloud side of the lattice backend. Constructed from evaluation keys only:
// it has no way to obtain or use the secret key.
class CkksBackend : public Backend {
 public:
  CkksBackend(std::shared_ptr<const ckks::CkksContext> ctx, std::shared_ptr<const ckks::EvaluationKeys> keys);

  std::string name() const override { return "ckks"; }
  std::size_t slotCount() const override { return ctx_->slotCount(); }
  int maxLevel() const override { return ctx_->maxLevel(); }
  double levelScale(int level) const override { return ctx_->levelScale(level); }
  double primeAt(int level) const override;

  std::shared_ptr<const Payload> add(const SlotVector& a, const SlotVector& b) override;
  std::shared_ptr<const Payload> sub(const SlotVector& a, const SlotVector& b) override;
  std::shared_ptr<const Payload> addPlain(const SlotVector& a, std::span<const double> values) override;
  std::shared_ptr<const Payload> mulCt(const SlotVector& a, const SlotVector& b) override;
  std::shared_ptr<const Payload> mulPlain(const SlotVector& a, std::span<const double> values) override;
  std::shared_ptr<const Payload> rotate(const SlotVector& a, int k) override;
  std::shared_ptr<const Payload> rescale(const SlotVector& a) override;
  std::shared_ptr<const Payload> dropLevel(const SlotVector& a, int level) override;

  static const ckks::Ciphertext& cipher(const SlotVector& v);
  const ckks::Evaluator& evaluator() const noexcept { return evaluator_; }

 private:
  std::shared_ptr<const ckks::CkksContext> ctx_;
  ckks::CkksEncoder encoder_;
  ckks::Evaluator evaluator_;
};

enum class EncryptionMode { publicKey, secretKey };

// Client side: owns the secret key, encrypts inputs and decrypts outputs.
class CkksClient : public ClientSession {
 public:
  CkksClient(std::shared_ptr<const ckks::CkksContext> ctx, const ckks::KeySet& keys, std::uint64_t seed,
             EncryptionMode mode = EncryptionMode::publicKey);

  SlotVector encrypt(std::span<const double> values) override;
  std::vector<double> decrypt(const SlotVector& v) override;

  SlotVector wrap(ckks::Ciphertext ct) const;

 private:
  std::shared_ptr<const ckks::CkksContext> ctx_;
  ckks::Sampler sampler_;
  ckks::CkksEncoder encoder_;
  ckks::Encryptor encryptor_;
  ckks::Decryptor decryptor_;
  EncryptionMode mode_;
};

}  // namespace oblivdsp::vm
