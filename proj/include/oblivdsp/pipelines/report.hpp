#pragma once

#include <string>

#include "json.hpp"
#include "oblivdsp/ckks/params.hpp"
#include "oblivdsp/pipelines/gesture.hpp"
#include "oblivdsp/pipelines/vitals.hpp"

// Structured run reports. Keys are emitted in insertion order and nothing time-dependent is
// recorded, so the same config and seed reproduce a report byte for byte.
namespace oblivdsp::pipelines {

using Report = nlohmann::ordered_json;

inline constexpr const char* kReportFormat = "oblivdsp-report/1";

// Format tag, pipeline, backend, parameters and the config with its digest.
Report reportHeader(const std::string& pipeline, const std::string& backend, const ckks::CkksParams& params,
                    const PipelineConfig& cfg);
Report traceSummary(const vm::TraceRecord& trace);
Report ledgerJson(const DepthLedger& ledger);

Report vitalsReport(const VitalsRun& run, const VitalsPlan& plan, const std::string& backend,
                    const ckks::CkksParams& params);
Report gestureReport(const GestureRun& run, const GesturePlan& plan, const std::string& backend,
                     const ckks::CkksParams& params);

// Two-space indented JSON with a trailing newline.
std::string dumpReport(const Report& report);

}  // namespace oblivdsp::pipelines
