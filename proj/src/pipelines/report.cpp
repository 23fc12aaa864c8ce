#include "oblivdsp/pipelines/report.hpp"

#include <cstdio>

namespace oblivdsp::pipelines {

namespace {

std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

Report optional(const std::optional<double>& v) { return v ? Report(*v) : Report(nullptr); }

Report decryptPoint(const std::string& name, const vm::SlotVector& v, std::initializer_list<std::pair<const char*, double>> values) {
  Report p;
  p["name"] = name;
  p["level"] = v.level;
  for (const auto& [k, x] : values) p[k] = x;
  return p;
}

}  // namespace

Report reportHeader(const std::string& pipeline, const std::string& backend, const ckks::CkksParams& params,
                    const PipelineConfig& cfg) {
  Report r;
  r["format"] = kReportFormat;
  r["pipeline"] = pipeline;
  r["backend"] = backend;
  r["params"] = {{"ring_dim", params.ringDim},
                 {"depth", params.depth},
                 {"scaling_bits", params.scalingBits},
                 {"security", params.securityTag()}};
  r["config_digest"] = cfg.digest();
  Report entries = Report::object();
  for (const auto& [k, v] : cfg.entries()) entries[k] = v;
  r["config"] = entries;
  return r;
}

Report traceSummary(const vm::TraceRecord& trace) {
  Report t;
  t["digest"] = hex64(trace.digest());
  t["events"] = trace.events.size();
  Report ops = Report::object();
  for (auto kind : {vm::OpKind::add, vm::OpKind::sub, vm::OpKind::addPt, vm::OpKind::mulCt, vm::OpKind::mulPt,
                    vm::OpKind::rotate, vm::OpKind::rescale, vm::OpKind::dropLevel}) {
    ops[std::string(vm::toString(kind))] = trace.count(kind);
  }
  t["ops"] = ops;
  const auto amounts = trace.rotationAmounts();
  t["rotation_keys"] = std::vector<int>(amounts.begin(), amounts.end());
  return t;
}

Report ledgerJson(const DepthLedger& ledger) {
  Report rows = Report::array();
  for (const auto& row : ledger) rows.push_back({{"stage", row.stage}, {"depth", row.depth}, {"cumulative", row.cumulative}});
  return rows;
}

Report vitalsReport(const VitalsRun& run, const VitalsPlan& plan, const std::string& backend,
                    const ckks::CkksParams& params) {
  Report r = reportHeader("vitals", backend, params, plan.config());
  const auto& res = run.result;
  r["result"] = {{"target_bin", optional(res.targetBin)},
                 {"rr_bpm", optional(res.rrBpm)},
                 {"hr_bpm", optional(res.hrBpm)},
                 {"low_confidence", res.lowConfidence}};
  r["decrypt_points"] = Report::array({
      decryptPoint("range", run.cloud.numerator, {{"numerator", res.numerator}, {"denominator", res.denominator}}),
      decryptPoint("rates", run.cloud.freqNumerator,
                   {{"rr_numerator", res.rrNumerator},
                    {"rr_denominator", res.rrDenominator},
                    {"hr_numerator", res.hrNumerator},
                    {"hr_denominator", res.hrDenominator}}),
  });
  r["depth_ledger"] = ledgerJson(run.ledger);
  r["trace"] = traceSummary(run.trace);
  return r;
}

Report gestureReport(const GestureRun& run, const GesturePlan& plan, const std::string& backend,
                     const ckks::CkksParams& params) {
  Report r = reportHeader("gesture", backend, params, plan.config());
  r["result"] = {{"predicted", run.result.predicted}, {"logits", run.result.logits}};
  r["decrypt_points"] = Report::array({decryptPoint("logits", run.cloud.logits, {})});
  r["depth_ledger"] = ledgerJson(run.ledger);
  r["trace"] = traceSummary(run.trace);
  return r;
}

std::string dumpReport(const Report& report) { return report.dump(2) + "\n"; }

}  // namespace oblivdsp::pipelines
