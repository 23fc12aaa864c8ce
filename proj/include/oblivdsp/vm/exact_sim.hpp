#pragma once

#include <memory>
#include <vector>

#include "oblivdsp/ckks/params.hpp"
#include "oblivdsp/vm/backend.hpp"

namespace oblivdsp::vm {

struct PlainPayload : Payload {
  std::vector<double> values;
  explicit PlainPayload(std::vector<double> v) : values(std::move(v)) {}
};

// Exact slot arithmetic on doubles with the same level and scale schedule
// as the lattice backend for the given parameters.
class ExactSimBackend : public Backend {
 public:
  explicit ExactSimBackend(const ckks::CkksParams& params);

  std::string name() const override { return "exactsim"; }
  std::size_t slotCount() const override { return slots_; }
  int maxLevel() const override { return static_cast<int>(primes_.size()) - 1; }
  double levelScale(int level) const override;
  double primeAt(int level) const override;

  std::shared_ptr<const Payload> add(const SlotVector& a, const SlotVector& b) override;
  std::shared_ptr<const Payload> sub(const SlotVector& a, const SlotVector& b) override;
  std::shared_ptr<const Payload> addPlain(const SlotVector& a, std::span<const double> values) override;
  std::shared_ptr<const Payload> mulCt(const SlotVector& a, const SlotVector& b) override;
  std::shared_ptr<const Payload> mulPlain(const SlotVector& a, std::span<const double> values) override;
  std::shared_ptr<const Payload> rotate(const SlotVector& a, int k) override;
  std::shared_ptr<const Payload> rescale(const SlotVector& a) override;
  std::shared_ptr<const Payload> dropLevel(const SlotVector& a, int level) override;

  static const std::vector<double>& values(const SlotVector& v);

 private:
  std::size_t slots_;
  std::vector<double> primes_;
  std::vector<double> scales_;
};

class ExactSimClient : public ClientSession {
 public:
  explicit ExactSimClient(std::shared_ptr<ExactSimBackend> backend) : backend_(std::move(backend)) {}
  SlotVector encrypt(std::span<const double> values) override;
  std::vector<double> decrypt(const SlotVector& v) override;

 private:
  std::shared_ptr<ExactSimBackend> backend_;
};

}  // namespace oblivdsp::vm
