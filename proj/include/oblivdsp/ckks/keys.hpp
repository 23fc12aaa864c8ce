#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <random>
#include <set>
#include <vector>

#include "oblivdsp/ckks/params.hpp"
#include "oblivdsp/ring/rns.hpp"

namespace oblivdsp::ckks {

// Randomness for keys and encryption. Deterministic when seeded.
class Sampler {
 public:
  explicit Sampler(std::uint64_t seed);
  Sampler();  // seeded from std::random_device

  std::vector<std::int64_t> ternary(std::size_t n);
  // Rounded Gaussian, rejected beyond 6 sigma.
  std::vector<std::int64_t> gaussian(std::size_t n, double sigma);
  void uniform(ring::RnsPolynomial& p);
  std::uint64_t next();

 private:
  std::mt19937_64 rng_;
};

struct SecretKey {
  ring::RnsPolynomial poly;  // evaluation form over q_0..q_L, P
};

struct PublicKey {
  ring::RnsPolynomial b, a;  // evaluation form over q_0..q_L; b = -a*s + e
};

// One (b_i, a_i) pair per chain prime, over q_0..q_L, P. Each uniform a_i is expanded from
// seeds[i], so serialized keys carry only the seeds and the b_i.
struct SwitchingKey {
  std::vector<ring::RnsPolynomial> b, a;
  std::vector<std::uint64_t> seeds;
};

// The uniform polynomial a_i of a switching key.
ring::RnsPolynomial expandUniform(const CkksContext& ctx, std::uint64_t seed);

struct RelinKey {
  SwitchingKey key;
};

struct GaloisKeys {
  std::map<std::size_t, SwitchingKey> keys;  // keyed by normalized rotation amount
  bool has(std::size_t amount) const { return keys.count(amount) != 0; }
  std::size_t size() const noexcept { return keys.size(); }
};

// Public material the evaluator needs; contains no secret.
struct EvaluationKeys {
  PublicKey publicKey;
  RelinKey relinKey;
  GaloisKeys galoisKeys;
};

struct KeySet {
  SecretKey secretKey;
  EvaluationKeys evaluation;
};

class KeyGenerator {
 public:
  KeyGenerator(std::shared_ptr<const CkksContext> ctx, Sampler& sampler);

  SecretKey secretKey();
  PublicKey publicKey(const SecretKey& sk);
  RelinKey relinKey(const SecretKey& sk);
  SwitchingKey galoisKey(const SecretKey& sk, int rotation);
  GaloisKeys galoisKeys(const SecretKey& sk, const std::set<int>& rotations);

  // Secret, public, relinearization and one Galois key per distinct
  // (slot-normalized) rotation amount; amounts equivalent to 0 need no key.
  KeySet generate(const std::set<int>& rotations);

 private:
  SwitchingKey switchingKey(const SecretKey& sk, const ring::RnsPolynomial& from);

  std::shared_ptr<const CkksContext> ctx_;
  Sampler& sampler_;
};

std::size_t normalizeRotation(int rotation, std::size_t slots);

}  // namespace oblivdsp::ckks
