#pragma once

#include <memory>
#include <span>
#include <string>
#include <vector>

#include "oblivdsp/vm/backend.hpp"
#include "oblivdsp/vm/trace.hpp"

namespace oblivdsp::vm {

// The leveled slot-vector machine: five primitive operations plus level
// alignment, with depth accounting and a trace of every step.
class Machine {
 public:
  Machine(std::shared_ptr<Backend> backend, std::string configDigest);

  Backend& backend() noexcept { return *backend_; }
  std::size_t slotCount() const noexcept { return backend_->slotCount(); }
  int maxLevel() const noexcept { return backend_->maxLevel(); }
  const TraceRecord& trace() const noexcept { return trace_; }
  TraceRecord takeTrace();

  SlotVector add(const SlotVector& a, const SlotVector& b);
  SlotVector sub(const SlotVector& a, const SlotVector& b);
  SlotVector addPlain(const SlotVector& a, std::span<const double> values);
  // Products leave the result pending; rescale() consumes the level.
  SlotVector mulCt(const SlotVector& a, const SlotVector& b);
  SlotVector mulPt(const SlotVector& a, std::span<const double> values);
  SlotVector rotate(const SlotVector& a, int k);
  SlotVector rescale(const SlotVector& a);
  SlotVector dropTo(const SlotVector& a, int level);

  SlotVector multiply(const SlotVector& a, const SlotVector& b) { return rescale(mulCt(a, b)); }
  SlotVector multiplyPlain(const SlotVector& a, std::span<const double> values) { return rescale(mulPt(a, values)); }
  SlotVector square(const SlotVector& a) { return multiply(a, a); }
  SlotVector mulConst(const SlotVector& a, double c);

  // x^(2^k) by k squarings.
  SlotVector powerOfTwo(const SlotVector& a, int log2Exponent);
  // Slot 0 receives sum of slots [0, 2^ceil(log2 span)) via doubling rotations.
  SlotVector rotateSum(const SlotVector& a, std::size_t span, int stride = 1);
  // Every slot receives the sum over all slots.
  SlotVector replicateSum(const SlotVector& a);
  SlotVector sum(std::span<const SlotVector> items);

 private:
  void record(OpKind kind, const SlotVector& result, int rotation = 0);
  void requireSameShape(const SlotVector& a, const SlotVector& b) const;
  std::pair<SlotVector, SlotVector> align(const SlotVector& a, const SlotVector& b);
  void requireLevelForMultiply(const SlotVector& a) const;

  std::shared_ptr<Backend> backend_;
  TraceRecord trace_;
};

}  // namespace oblivdsp::vm
