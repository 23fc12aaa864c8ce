#pragma once

#include <memory>
#include <span>
#include <vector>

#include "oblivdsp/ckks/encoder.hpp"
#include "oblivdsp/ckks/keys.hpp"
#include "oblivdsp/ckks/params.hpp"

namespace oblivdsp::ckks {

struct Ciphertext {
  std::vector<ring::RnsPolynomial> polys;  // evaluation form; 2 entries, 3 before relinearization
  int level = 0;
  double scale = 1.0;

  std::size_t size() const noexcept { return polys.size(); }
};

class Encryptor {
 public:
  Encryptor(std::shared_ptr<const CkksContext> ctx, PublicKey pk, Sampler& sampler);
  Ciphertext encrypt(const Plaintext& pt);

 private:
  std::shared_ptr<const CkksContext> ctx_;
  PublicKey pk_;
  Sampler& sampler_;
};

// Client-side: holds the secret key.
class Decryptor {
 public:
  Decryptor(std::shared_ptr<const CkksContext> ctx, SecretKey sk);
  Plaintext decrypt(const Ciphertext& ct) const;
  // Secret-key encryption: fresh noise is a single Gaussian term.
  Ciphertext encryptSymmetric(const Plaintext& pt, Sampler& sampler) const;

 private:
  std::shared_ptr<const CkksContext> ctx_;
  SecretKey sk_;
};

// Cloud-side homomorphic evaluation; built from public material only.
class Evaluator {
 public:
  Evaluator(std::shared_ptr<const CkksContext> ctx, std::shared_ptr<const EvaluationKeys> keys);

  const CkksContext& context() const noexcept { return *ctx_; }

  Ciphertext add(const Ciphertext& a, const Ciphertext& b) const;
  Ciphertext sub(const Ciphertext& a, const Ciphertext& b) const;
  Ciphertext negate(const Ciphertext& a) const;
  Ciphertext addPlain(const Ciphertext& a, const Plaintext& pt) const;
  // Tensor product followed by relinearization; scale multiplies.
  Ciphertext multiply(const Ciphertext& a, const Ciphertext& b) const;
  Ciphertext multiplyNoRelin(const Ciphertext& a, const Ciphertext& b) const;
  Ciphertext relinearize(const Ciphertext& a) const;
  Ciphertext multiplyPlain(const Ciphertext& a, const Plaintext& pt) const;
  Ciphertext rescale(const Ciphertext& a) const;
  // Left rotation: slot j of the result holds slot j + k of the input.
  Ciphertext rotate(const Ciphertext& a, int k) const;
  // Lower to `level` keeping the nominal scale of that level.
  Ciphertext dropToLevel(const Ciphertext& a, int level) const;

  bool hasRotation(int k) const;

 private:
  void keySwitch(const ring::RnsPolynomial& d, const SwitchingKey& key, int level,
                 ring::RnsPolynomial& out0, ring::RnsPolynomial& out1) const;
  void requireAligned(const Ciphertext& a, const Ciphertext& b) const;

  std::shared_ptr<const CkksContext> ctx_;
  std::shared_ptr<const EvaluationKeys> keys_;
  CkksEncoder encoder_;
};

bool scalesMatch(double a, double b) noexcept;

}  // namespace oblivdsp::ckks
