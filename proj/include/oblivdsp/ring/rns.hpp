#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <span>
#include <vector>

#include "oblivdsp/ring/modulus.hpp"
#include "oblivdsp/ring/ntt.hpp"

namespace oblivdsp::ring {

// Ring dimension plus every prime a polynomial may be expressed over, with
// their NTT tables. Polynomials refer to primes by index into this table.
class RingContext {
 public:
  RingContext(std::size_t ringDim, const std::vector<u64>& primes);

  std::size_t degree() const noexcept { return n_; }
  std::size_t primeCount() const noexcept { return moduli_.size(); }
  const Modulus& modulus(std::size_t i) const { return moduli_.at(i); }
  const NttTables& ntt(std::size_t i) const { return ntt_.at(i); }

 private:
  std::size_t n_;
  std::vector<Modulus> moduli_;
  std::vector<NttTables> ntt_;
};

// Primes of the ciphertext modulus, the rescaling granularity, and the ring dimension.
struct ModulusChain {
  std::size_t ringDim = 0;
  int scalingBits = 0;
  int firstBits = 0;
  std::vector<u64> primes;  // q_0 (first) ... q_L; rescaling drops from the back

  // q_0 with `firstBits` bits and `depth` primes of `scalingBits` bits.
  static ModulusChain generate(std::size_t ringDim, int firstBits, int scalingBits, int depth);
  std::size_t length() const noexcept { return primes.size(); }
  int depth() const noexcept { return static_cast<int>(primes.size()) - 1; }
  void validate() const;
};

enum class PolyForm : std::uint8_t { coefficient = 0, evaluation = 1 };

class RnsPolynomial {
 public:
  RnsPolynomial() = default;
  // Zero polynomial over the given prime indices.
  RnsPolynomial(std::shared_ptr<const RingContext> ctx, std::vector<std::uint32_t> basis,
                PolyForm form = PolyForm::coefficient);

  const std::shared_ptr<const RingContext>& context() const noexcept { return ctx_; }
  std::size_t degree() const noexcept { return ctx_ ? ctx_->degree() : 0; }
  std::size_t primeCount() const noexcept { return basis_.size(); }
  const std::vector<std::uint32_t>& basis() const noexcept { return basis_; }
  const Modulus& modulus(std::size_t i) const { return ctx_->modulus(basis_[i]); }
  PolyForm form() const noexcept { return form_; }
  void setForm(PolyForm f) noexcept { form_ = f; }

  std::span<u64> residues(std::size_t i) noexcept {
    return {data_.data() + i * degree(), degree()};
  }
  std::span<const u64> residues(std::size_t i) const noexcept {
    return {data_.data() + i * degree(), degree()};
  }
  std::vector<u64>& raw() noexcept { return data_; }
  const std::vector<u64>& raw() const noexcept { return data_; }

  // Set every residue from a small signed integer coefficient vector.
  void setSigned(std::span<const std::int64_t> coeffs);

  bool sameBasis(const RnsPolynomial& o) const noexcept {
    return ctx_ == o.ctx_ && basis_ == o.basis_;
  }
  bool operator==(const RnsPolynomial& o) const noexcept {
    return sameBasis(o) && form_ == o.form_ && data_ == o.data_;
  }

  // Copy restricted to the first `count` primes of the basis.
  RnsPolynomial prefix(std::size_t count) const;

 private:
  std::shared_ptr<const RingContext> ctx_;
  std::vector<std::uint32_t> basis_;
  PolyForm form_ = PolyForm::coefficient;
  std::vector<u64> data_;
};

RnsPolynomial nttForward(RnsPolynomial p);
RnsPolynomial nttInverse(RnsPolynomial p);
void toEvaluation(RnsPolynomial& p);
void toCoefficient(RnsPolynomial& p);

RnsPolynomial add(const RnsPolynomial& a, const RnsPolynomial& b);
RnsPolynomial sub(const RnsPolynomial& a, const RnsPolynomial& b);
RnsPolynomial negate(const RnsPolynomial& a);
void addInPlace(RnsPolynomial& a, const RnsPolynomial& b);
void subInPlace(RnsPolynomial& a, const RnsPolynomial& b);
// Pointwise product; both operands must be in evaluation form.
RnsPolynomial mulPointwise(const RnsPolynomial& a, const RnsPolynomial& b);
void mulAddPointwise(RnsPolynomial& acc, const RnsPolynomial& a, const RnsPolynomial& b);
// Negacyclic product in whatever form the inputs share.
RnsPolynomial ringMul(const RnsPolynomial& a, const RnsPolynomial& b);
// Multiply by an integer given per prime as residues.
void mulScalarInPlace(RnsPolynomial& a, std::span<const u64> residuesPerPrime);

// Divide by the last prime rounding to nearest (odd primes admit no ties) and drop it.
RnsPolynomial dropLastPrime(const RnsPolynomial& p);

// X -> X^g for odd g (coefficient form only).
RnsPolynomial automorphism(const RnsPolynomial& p, std::size_t galoisElement);

}  // namespace oblivdsp::ring
