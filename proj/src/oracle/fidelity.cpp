#include "oblivdsp/oracle/fidelity.hpp"

#include <cmath>
#include <cstdio>

#include "oblivdsp/error.hpp"

namespace oblivdsp::oracle {

FidelityReport fidelityReport(const std::vector<pipelines::StageValues>& encrypted,
                              const std::vector<pipelines::StageValues>& plain) {
  if (encrypted.size() != plain.size()) throw LayoutError("fidelity runs have different stage counts");
  FidelityReport report;
  for (std::size_t i = 0; i < plain.size(); ++i) {
    const auto& e = encrypted[i];
    const auto& p = plain[i];
    if (e.name != p.name || e.values.size() != p.values.size()) throw LayoutError("stage " + p.name + " differs in shape");
    FidelityRow row{p.name, 0, 0, p.depth};
    for (std::size_t j = 0; j < p.values.size(); ++j) {
      const double d = e.values[j] - p.values[j];
      row.mse += d * d;
      row.maxAbsErr = std::max(row.maxAbsErr, std::fabs(d));
    }
    if (!p.values.empty()) row.mse /= static_cast<double>(p.values.size());
    report.push_back(row);
  }
  return report;
}

std::string formatFidelity(const FidelityReport& report) {
  std::string out = "stage                        MSE     max|err|  depth\n";
  char buf[160];
  for (const auto& r : report) {
    std::snprintf(buf, sizeof buf, "%-22s %10.2e  %10.2e  %5d\n", r.stage.c_str(), r.mse, r.maxAbsErr, r.depth);
    out += buf;
  }
  return out;
}

}  // namespace oblivdsp::oracle
