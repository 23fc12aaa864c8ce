#include "oblivdsp/vm/exact_sim.hpp"

#include <algorithm>

#include "oblivdsp/error.hpp"

namespace oblivdsp::vm {

ExactSimBackend::ExactSimBackend(const ckks::CkksParams& params) {
  params.validate();
  slots_ = params.ringDim / 2;
  const auto chain = ring::ModulusChain::generate(params.ringDim, params.firstBits, params.scalingBits, params.depth);
  for (auto q : chain.primes) primes_.push_back(static_cast<double>(q));
  scales_ = ckks::levelScales(chain);
}

double ExactSimBackend::levelScale(int level) const { return scales_.at(static_cast<std::size_t>(level)); }
double ExactSimBackend::primeAt(int level) const { return primes_.at(static_cast<std::size_t>(level)); }

const std::vector<double>& ExactSimBackend::values(const SlotVector& v) {
  const auto* p = dynamic_cast<const PlainPayload*>(v.handle.get());
  if (!p) throw Error("slot vector does not belong to the exact simulator");
  return p->values;
}

namespace {

std::shared_ptr<const Payload> make(std::vector<double> v) { return std::make_shared<const PlainPayload>(std::move(v)); }

}  // namespace

std::shared_ptr<const Payload> ExactSimBackend::add(const SlotVector& a, const SlotVector& b) {
  auto r = values(a);
  const auto& y = values(b);
  for (std::size_t i = 0; i < r.size(); ++i) r[i] += y[i];
  return make(std::move(r));
}

std::shared_ptr<const Payload> ExactSimBackend::sub(const SlotVector& a, const SlotVector& b) {
  auto r = values(a);
  const auto& y = values(b);
  for (std::size_t i = 0; i < r.size(); ++i) r[i] -= y[i];
  return make(std::move(r));
}

std::shared_ptr<const Payload> ExactSimBackend::addPlain(const SlotVector& a, std::span<const double> values_) {
  auto r = values(a);
  for (std::size_t i = 0; i < values_.size(); ++i) r[i] += values_[i];
  return make(std::move(r));
}

std::shared_ptr<const Payload> ExactSimBackend::mulCt(const SlotVector& a, const SlotVector& b) {
  auto r = values(a);
  const auto& y = values(b);
  for (std::size_t i = 0; i < r.size(); ++i) r[i] *= y[i];
  return make(std::move(r));
}

std::shared_ptr<const Payload> ExactSimBackend::mulPlain(const SlotVector& a, std::span<const double> values_) {
  auto r = values(a);
  for (std::size_t i = 0; i < r.size(); ++i) r[i] *= i < values_.size() ? values_[i] : 0.0;
  return make(std::move(r));
}

std::shared_ptr<const Payload> ExactSimBackend::rotate(const SlotVector& a, int k) {
  const auto& x = values(a);
  const long long n = static_cast<long long>(x.size());
  const long long s = ((k % n) + n) % n;
  std::vector<double> r(x.size());
  std::rotate_copy(x.begin(), x.begin() + s, x.end(), r.begin());
  return make(std::move(r));
}

std::shared_ptr<const Payload> ExactSimBackend::rescale(const SlotVector& a) { return a.handle; }

std::shared_ptr<const Payload> ExactSimBackend::dropLevel(const SlotVector& a, int) { return a.handle; }

SlotVector ExactSimClient::encrypt(std::span<const double> values) {
  const std::size_t n = backend_->slotCount();
  if (values.size() > n) throw LayoutError("more values than slots");
  std::vector<double> v(n, 0.0);
  std::copy(values.begin(), values.end(), v.begin());
  SlotVector s;
  s.handle = std::make_shared<const PlainPayload>(std::move(v));
  s.slotCount = n;
  s.level = backend_->maxLevel();
  s.scale = backend_->levelScale(s.level);
  return s;
}

std::vector<double> ExactSimClient::decrypt(const SlotVector& v) { return ExactSimBackend::values(v); }

}  // namespace oblivdsp::vm
