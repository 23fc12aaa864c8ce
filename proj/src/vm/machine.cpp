#include "oblivdsp/vm/machine.hpp"

#include <bit>
#include <cmath>

#include "oblivdsp/error.hpp"

namespace oblivdsp::vm {

namespace {

bool sameScale(double a, double b) { return std::fabs(a / b - 1.0) < 1e-9; }

}  // namespace

Machine::Machine(std::shared_ptr<Backend> backend, std::string configDigest) : backend_(std::move(backend)) {
  if (!backend_) throw Error("machine without backend");
  trace_.configDigest = std::move(configDigest);
}

TraceRecord Machine::takeTrace() {
  TraceRecord t = std::move(trace_);
  trace_ = TraceRecord{};
  trace_.configDigest = t.configDigest;
  return t;
}

void Machine::record(OpKind kind, const SlotVector& result, int rotation) {
  trace_.events.push_back(TraceEvent{kind, static_cast<std::uint32_t>(result.slotCount), result.level, rotation});
}

void Machine::requireSameShape(const SlotVector& a, const SlotVector& b) const {
  if (!a.valid() || !b.valid()) throw Error("operation on an empty slot vector");
  if (a.slotCount != b.slotCount) throw LayoutError("slot count mismatch");
}

void Machine::requireLevelForMultiply(const SlotVector& a) const {
  if (!a.valid()) throw Error("operation on an empty slot vector");
  if (a.pendingRescale) throw ScaleMismatch("operand awaits rescale before another multiplication");
  if (a.level < 1) throw DepthExhausted("multiplication needs a remaining level, operand is at level 0");
}

std::pair<SlotVector, SlotVector> Machine::align(const SlotVector& a, const SlotVector& b) {
  requireSameShape(a, b);
  if (a.pendingRescale != b.pendingRescale) throw ScaleMismatch("cannot combine a pending product with a rescaled vector");
  if (a.level == b.level) {
    if (!sameScale(a.scale, b.scale)) throw ScaleMismatch("operands at the same level carry different scales");
    return {a, b};
  }
  if (a.pendingRescale) throw ScaleMismatch("pending products must share a level");
  if (a.level > b.level) return {dropTo(a, b.level), b};
  return {a, dropTo(b, a.level)};
}

SlotVector Machine::add(const SlotVector& a0, const SlotVector& b0) {
  auto [a, b] = align(a0, b0);
  SlotVector r = a;
  r.handle = backend_->add(a, b);
  record(OpKind::add, r);
  return r;
}

SlotVector Machine::sub(const SlotVector& a0, const SlotVector& b0) {
  auto [a, b] = align(a0, b0);
  SlotVector r = a;
  r.handle = backend_->sub(a, b);
  record(OpKind::sub, r);
  return r;
}

SlotVector Machine::addPlain(const SlotVector& a, std::span<const double> values) {
  if (!a.valid()) throw Error("operation on an empty slot vector");
  if (a.pendingRescale) throw ScaleMismatch("addPlain on a pending product");
  if (values.size() > a.slotCount) throw LayoutError("plaintext longer than slot vector");
  SlotVector r = a;
  r.handle = backend_->addPlain(a, values);
  record(OpKind::addPt, r);
  return r;
}

SlotVector Machine::mulCt(const SlotVector& a0, const SlotVector& b0) {
  requireLevelForMultiply(a0);
  requireLevelForMultiply(b0);
  auto [a, b] = align(a0, b0);
  SlotVector r = a;
  r.handle = backend_->mulCt(a, b);
  r.scale = a.scale * b.scale;
  r.pendingRescale = true;
  record(OpKind::mulCt, r);
  return r;
}

SlotVector Machine::mulPt(const SlotVector& a, std::span<const double> values) {
  requireLevelForMultiply(a);
  if (values.size() > a.slotCount) throw LayoutError("plaintext longer than slot vector");
  SlotVector r = a;
  r.handle = backend_->mulPlain(a, values);
  r.scale = a.scale * backend_->levelScale(a.level);
  r.pendingRescale = true;
  record(OpKind::mulPt, r);
  return r;
}

SlotVector Machine::mulConst(const SlotVector& a, double c) {
  const std::vector<double> values(a.slotCount, c);
  return multiplyPlain(a, values);
}

SlotVector Machine::rotate(const SlotVector& a, int k) {
  if (!a.valid()) throw Error("operation on an empty slot vector");
  const long long n = static_cast<long long>(a.slotCount);
  const int normalized = static_cast<int>(((k % n) + n) % n);
  if (normalized == 0) return a;
  // Record the amount in the symmetric range so traces read naturally.
  const int amount = normalized > n / 2 ? normalized - static_cast<int>(n) : normalized;
  SlotVector r = a;
  r.handle = backend_->rotate(a, amount);
  record(OpKind::rotate, r, amount);
  return r;
}

SlotVector Machine::rescale(const SlotVector& a) {
  if (!a.valid()) throw Error("operation on an empty slot vector");
  if (!a.pendingRescale) throw ScaleMismatch("rescale without a pending product");
  if (a.level < 1) throw DepthExhausted("rescale at level 0");
  SlotVector r = a;
  r.handle = backend_->rescale(a);
  r.level = a.level - 1;
  r.scale = a.scale / backend_->primeAt(a.level);
  r.pendingRescale = false;
  record(OpKind::rescale, r);
  return r;
}

SlotVector Machine::dropTo(const SlotVector& a, int level) {
  if (!a.valid()) throw Error("operation on an empty slot vector");
  if (a.pendingRescale) throw ScaleMismatch("level drop on a pending product");
  if (level > a.level) throw Error("cannot raise a level");
  if (level < 0) throw DepthExhausted("level below zero");
  if (level == a.level) return a;
  SlotVector r = a;
  r.handle = backend_->dropLevel(a, level);
  r.level = level;
  r.scale = backend_->levelScale(level);
  record(OpKind::dropLevel, r);
  return r;
}

SlotVector Machine::powerOfTwo(const SlotVector& a, int log2Exponent) {
  SlotVector r = a;
  for (int i = 0; i < log2Exponent; ++i) r = square(r);
  return r;
}

SlotVector Machine::rotateSum(const SlotVector& a, std::size_t span, int stride) {
  SlotVector r = a;
  for (std::size_t step = 1; step < span; step <<= 1) {
    r = add(r, rotate(r, static_cast<int>(step) * stride));
  }
  return r;
}

SlotVector Machine::replicateSum(const SlotVector& a) { return rotateSum(a, a.slotCount); }

SlotVector Machine::sum(std::span<const SlotVector> items) {
  if (items.empty()) throw Error("sum of no vectors");
  SlotVector r = items[0];
  for (std::size_t i = 1; i < items.size(); ++i) r = add(r, items[i]);
  return r;
}

}  // namespace oblivdsp::vm
