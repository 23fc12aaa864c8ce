#pragma once

#include <cstddef>
#include <map>
#include <span>
#include <vector>

#include "oblivdsp/vm/machine.hpp"

namespace oblivdsp::kernels {

using vm::Machine;
using vm::SlotVector;

// Plaintext linear map on slot vectors stored as generalized diagonals:
// y[s] = sum_d diag_d[s] * x[(s + d) mod n].
class LinearTransform {
 public:
  explicit LinearTransform(std::size_t slots);

  std::size_t slots() const noexcept { return n_; }
  void addEntry(std::size_t outSlot, std::size_t inSlot, double value);
  // Dense rows x cols block (row-major); row i lands in slot outOffset+i, column j reads slot inOffset+j.
  void addBlock(std::size_t rows, std::size_t cols, std::span<const double> matrix, std::size_t inOffset,
                std::size_t outOffset);
  void setDiagonal(int offset, std::vector<double> values);

  // Offsets of nonzero diagonals in the symmetric range (-n/2, n/2].
  std::vector<int> offsets() const;
  std::size_t diagonalCount() const noexcept { return diags_.size(); }
  const std::vector<double>& diagonal(int offset) const { return diags_.at(offset); }
  // ceil(sqrt(#diagonals)).
  int defaultBabyStep() const;

  // Plain reference evaluation.
  std::vector<double> applyPlain(std::span<const double> x) const;

 private:
  int normalize(long long d) const;
  std::size_t n_;
  std::map<int, std::vector<double>> diags_;
};

// Caches rotations of one input so several transforms share baby steps.
class RotationCache {
 public:
  RotationCache(Machine& m, SlotVector x) : m_(m), x_(std::move(x)) {}
  const SlotVector& get(int k);
  const SlotVector& input() const noexcept { return x_; }

 private:
  Machine& m_;
  SlotVector x_;
  std::map<int, SlotVector> cache_;
};

struct TransformTerm {
  const LinearTransform* transform;
  RotationCache* input;
};

// sum_i T_i x_i with baby-step/giant-step scheduling; every term shares the
// same baby step so giant rotations are applied once per output. Depth 1.
SlotVector applyTransforms(Machine& m, std::span<const TransformTerm> terms, int babyStep);
SlotVector applyTransform(Machine& m, const LinearTransform& t, const SlotVector& x);

// Baby/giant rotation amounts one transform needs at a given baby step.
struct BsgsPlan {
  int babyStep = 1;
  std::vector<int> baby;   // nonzero baby rotations
  std::vector<int> giant;  // nonzero giant rotations
};
BsgsPlan planBsgs(const LinearTransform& t, int babyStep);

// m x k matrix applied so that the result is replicated with period mPad
// (m rounded up to a power of two): extended diagonals d in [0, mPad)
// followed by a stride-mPad rotate-and-sum. Columns beyond k are zero, which
// discards whatever the input holds outside slots [0, k).
class ReplicatedMatvec {
 public:
  ReplicatedMatvec(std::size_t slots, std::size_t rows, std::size_t cols, std::span<const double> matrix);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  std::size_t period() const noexcept { return period_; }
  SlotVector apply(Machine& m, const SlotVector& x) const;
  const LinearTransform& diagonals() const noexcept { return transform_; }

 private:
  std::size_t slots_, rows_, cols_, period_;
  LinearTransform transform_;
};

std::size_t nextPowerOfTwo(std::size_t x);

}  // namespace oblivdsp::kernels
