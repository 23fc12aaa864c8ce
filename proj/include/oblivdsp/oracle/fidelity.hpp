#pragma once

#include <string>
#include <vector>

#include "oblivdsp/pipelines/stages.hpp"

namespace oblivdsp::oracle {

struct FidelityRow {
  std::string stage;
  double mse = 0;
  double maxAbsErr = 0;
  int depth = 0;   // cumulative
};
using FidelityReport = std::vector<FidelityRow>;

// Stage-by-stage comparison of two runs of the same circuit. Throws LayoutError on shape mismatch.
FidelityReport fidelityReport(const std::vector<pipelines::StageValues>& encrypted,
                              const std::vector<pipelines::StageValues>& plain);
std::string formatFidelity(const FidelityReport& report);

}  // namespace oblivdsp::oracle
