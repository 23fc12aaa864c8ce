#include "oblivdsp/kernels/matvec.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <set>

#include "oblivdsp/error.hpp"

namespace oblivdsp::kernels {

std::size_t nextPowerOfTwo(std::size_t x) { return x <= 1 ? 1 : std::bit_ceil(x); }

LinearTransform::LinearTransform(std::size_t slots) : n_(slots) {
  if (slots == 0) throw LayoutError("transform over zero slots");
}

int LinearTransform::normalize(long long d) const {
  const long long n = static_cast<long long>(n_);
  long long r = ((d % n) + n) % n;
  if (r > n / 2) r -= n;
  return static_cast<int>(r);
}

void LinearTransform::addEntry(std::size_t outSlot, std::size_t inSlot, double value) {
  if (outSlot >= n_ || inSlot >= n_) throw LayoutError("transform entry outside the slot range");
  if (value == 0.0) return;
  const int d = normalize(static_cast<long long>(inSlot) - static_cast<long long>(outSlot));
  auto& diag = diags_[d];
  if (diag.empty()) diag.assign(n_, 0.0);
  diag[outSlot] += value;
}

void LinearTransform::addBlock(std::size_t rows, std::size_t cols, std::span<const double> matrix,
                               std::size_t inOffset, std::size_t outOffset) {
  if (matrix.size() != rows * cols) throw LayoutError("matrix size does not match its dimensions");
  if (inOffset + cols > n_ || outOffset + rows > n_) throw LayoutError("matrix block exceeds the slot count");
  for (std::size_t i = 0; i < rows; ++i) {
    for (std::size_t j = 0; j < cols; ++j) addEntry(outOffset + i, inOffset + j, matrix[i * cols + j]);
  }
}

void LinearTransform::setDiagonal(int offset, std::vector<double> values) {
  if (values.size() != n_) throw LayoutError("diagonal length mismatch");
  if (std::all_of(values.begin(), values.end(), [](double v) { return v == 0.0; })) {
    diags_.erase(normalize(offset));
    return;
  }
  diags_[normalize(offset)] = std::move(values);
}

std::vector<int> LinearTransform::offsets() const {
  std::vector<int> out;
  for (const auto& [d, _] : diags_) out.push_back(d);
  return out;
}

int LinearTransform::defaultBabyStep() const {
  const std::size_t count = std::max<std::size_t>(diags_.size(), 1);
  return static_cast<int>(std::ceil(std::sqrt(static_cast<double>(count)) - 1e-12));
}

std::vector<double> LinearTransform::applyPlain(std::span<const double> x) const {
  std::vector<double> y(n_, 0.0);
  for (const auto& [d, diag] : diags_) {
    for (std::size_t s = 0; s < n_; ++s) {
      const std::size_t src = (s + static_cast<std::size_t>(d + static_cast<long long>(n_))) % n_;
      y[s] += diag[s] * (src < x.size() ? x[src] : 0.0);
    }
  }
  return y;
}

const SlotVector& RotationCache::get(int k) {
  if (k == 0) return x_;
  auto it = cache_.find(k);
  if (it == cache_.end()) it = cache_.emplace(k, m_.rotate(x_, k)).first;
  return it->second;
}

namespace {

int floorDiv(int a, int b) { return a >= 0 ? a / b : -((-a + b - 1) / b); }

std::vector<double> rotatePlain(const std::vector<double>& v, int k) {
  const long long n = static_cast<long long>(v.size());
  const long long s = ((k % n) + n) % n;
  std::vector<double> r(v.size());
  std::rotate_copy(v.begin(), v.begin() + s, v.end(), r.begin());
  return r;
}

}  // namespace

BsgsPlan planBsgs(const LinearTransform& t, int babyStep) {
  BsgsPlan plan;
  plan.babyStep = babyStep;
  std::set<int> baby, giant;
  for (int d : t.offsets()) {
    const int j = floorDiv(d, babyStep);
    const int b = d - j * babyStep;
    if (b != 0) baby.insert(b);
    if (j != 0) giant.insert(j * babyStep);
  }
  plan.baby.assign(baby.begin(), baby.end());
  plan.giant.assign(giant.begin(), giant.end());
  return plan;
}

SlotVector applyTransforms(Machine& m, std::span<const TransformTerm> terms, int babyStep) {
  if (terms.empty()) throw Error("no transform terms");
  if (babyStep < 1) throw Error("baby step must be positive");
  // Bring every input to the lowest level so products share a level.
  int level = terms[0].input->input().level;
  for (const auto& t : terms) level = std::min(level, t.input->input().level);
  for (const auto& t : terms) {
    if (t.input->input().level != level) throw ScaleMismatch("transform inputs must share a level");
  }

  // giant offset -> list of (term, baby, diagonal offset)
  struct Piece {
    const TransformTerm* term;
    int baby;
    int offset;
  };
  std::map<int, std::vector<Piece>> byGiant;
  for (const auto& t : terms) {
    for (int d : t.transform->offsets()) {
      const int j = floorDiv(d, babyStep);
      byGiant[j * babyStep].push_back(Piece{&t, d - j * babyStep, d});
    }
  }

  SlotVector total;
  for (const auto& [giant, pieces] : byGiant) {
    SlotVector inner;
    for (const auto& p : pieces) {
      const auto diag = rotatePlain(p.term->transform->diagonal(p.offset), -giant);
      SlotVector prod = m.mulPt(p.term->input->get(p.baby), diag);
      inner = inner.valid() ? m.add(inner, prod) : prod;
    }
    if (giant != 0) inner = m.rotate(inner, giant);
    total = total.valid() ? m.add(total, inner) : inner;
  }
  if (!total.valid()) {
    // All-zero map: multiply by zero to keep the depth contract.
    const std::vector<double> zeros(terms[0].input->input().slotCount, 0.0);
    total = m.mulPt(terms[0].input->input(), zeros);
  }
  return m.rescale(total);
}

SlotVector applyTransform(Machine& m, const LinearTransform& t, const SlotVector& x) {
  RotationCache cache(m, x);
  const TransformTerm term{&t, &cache};
  return applyTransforms(m, std::span<const TransformTerm>(&term, 1), t.defaultBabyStep());
}

ReplicatedMatvec::ReplicatedMatvec(std::size_t slots, std::size_t rows, std::size_t cols, std::span<const double> matrix)
    : slots_(slots), rows_(rows), cols_(cols), period_(nextPowerOfTwo(rows)), transform_(slots) {
  if (matrix.size() != rows * cols) throw LayoutError("weight matrix size does not match its dimensions");
  if (rows == 0 || cols == 0) throw LayoutError("empty weight matrix");
  if (period_ > slots || cols > slots) throw LayoutError("weight matrix does not fit the slot count");
  for (std::size_t d = 0; d < period_; ++d) {
    std::vector<double> diag(slots, 0.0);
    for (std::size_t s = 0; s < slots; ++s) {
      const std::size_t row = s % period_;
      const std::size_t col = (s + d) % slots;
      if (row < rows && col < cols) diag[s] = matrix[row * cols + col];
    }
    transform_.setDiagonal(static_cast<int>(d), std::move(diag));
  }
}

SlotVector ReplicatedMatvec::apply(Machine& m, const SlotVector& x) const {
  if (x.slotCount != slots_) throw LayoutError("slot count mismatch");
  RotationCache cache(m, x);
  const TransformTerm term{&transform_, &cache};
  const int baby = static_cast<int>(std::ceil(std::sqrt(static_cast<double>(period_)) - 1e-12));
  SlotVector y = applyTransforms(m, std::span<const TransformTerm>(&term, 1), baby);
  return m.rotateSum(y, slots_ / period_, static_cast<int>(period_));
}

}  // namespace oblivdsp::kernels
