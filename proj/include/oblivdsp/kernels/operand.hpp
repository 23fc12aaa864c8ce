#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "oblivdsp/kernels/kernels.hpp"

namespace oblivdsp::kernels {

// Public plaintext operand (filter taps, weights, biases, masks).
// Text block:
//   role <name>
//   dims <rows> <cols>
//   scale <s>
//   <rows lines of cols numbers>
// Effective values are scale * stored numbers. Files hold one or more blocks.
struct PlainOperand {
  std::string role;
  std::size_t rows = 0, cols = 0;
  double scale = 1.0;
  std::vector<double> values;  // effective values, row-major

  bool operator==(const PlainOperand&) const = default;
};

std::vector<PlainOperand> readOperands(std::istream& in);
void writeOperands(std::ostream& out, const std::vector<PlainOperand>& ops);
std::vector<PlainOperand> loadOperands(const std::string& path);
void saveOperands(const std::string& path, const std::vector<PlainOperand>& ops);

// Alternating fc_weight / fc_bias blocks.
std::vector<FcLayer> fcLayersFromOperands(const std::vector<PlainOperand>& ops);
std::vector<PlainOperand> operandsFromFcLayers(const std::vector<FcLayer>& layers);

}  // namespace oblivdsp::kernels
