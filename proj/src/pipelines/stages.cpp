#include "oblivdsp/pipelines/stages.hpp"

#include <algorithm>
#include <cstdio>

#include "oblivdsp/error.hpp"
#include "oblivdsp/vm/exact_sim.hpp"

namespace oblivdsp::pipelines {

int StageProbe::level() const {
  if (items.empty()) throw Error("stage '" + name + "' has no outputs");
  int l = items[0].value.level;
  for (const auto& it : items) l = std::min(l, it.value.level);
  return l;
}

DepthLedger depthLedger(const std::vector<StageProbe>& stages, int maxLevel) {
  DepthLedger ledger;
  int prev = 0;
  for (const auto& s : stages) {
    const int cumulative = maxLevel - s.level();
    ledger.push_back(DepthRow{s.name, cumulative - prev, cumulative});
    prev = cumulative;
  }
  return ledger;
}

std::string formatLedger(const DepthLedger& ledger) {
  std::string out = "stage                  depth  cumulative\n";
  char buf[128];
  for (const auto& r : ledger) {
    std::snprintf(buf, sizeof buf, "%-22s %5d  %10d\n", r.stage.c_str(), r.depth, r.cumulative);
    out += buf;
  }
  return out;
}

void checkDepthBudget(const DepthLedger& required, int maxLevel) {
  for (const auto& row : required) {
    if (row.cumulative > maxLevel) {
      throw DepthExhausted("depth budget " + std::to_string(maxLevel) + " exceeded at stage '" + row.stage +
                           "' (needs cumulative depth " + std::to_string(row.cumulative) + ")");
    }
  }
}

std::vector<StageValues> decryptStages(vm::ClientSession& client, const std::vector<StageProbe>& stages, int maxLevel) {
  std::vector<StageValues> out;
  for (const auto& s : stages) {
    StageValues v{s.name, maxLevel - s.level(), {}};
    for (const auto& item : s.items) {
      const auto dec = client.decrypt(item.value);
      for (std::size_t slot : item.slots) v.values.push_back(dec.at(slot));
    }
    out.push_back(std::move(v));
  }
  return out;
}

Deployment makeExactSim(const ckks::CkksParams& params) {
  auto backend = std::make_shared<vm::ExactSimBackend>(params);
  return Deployment{backend, std::make_shared<vm::ExactSimClient>(backend)};
}

Deployment makeCkks(const ckks::CkksParams& params, const std::set<int>& rotations, std::uint64_t seed,
                    vm::EncryptionMode mode) {
  auto ctx = std::make_shared<const ckks::CkksContext>(params);
  ckks::Sampler sampler(seed);
  ckks::KeyGenerator gen(ctx, sampler);
  return makeCkks(ctx, gen.generate(rotations), seed ^ 0x9e3779b97f4a7c15ULL, mode);
}

Deployment makeCkks(std::shared_ptr<const ckks::CkksContext> ctx, const ckks::KeySet& keys, std::uint64_t seed,
                    vm::EncryptionMode mode) {
  auto evk = std::make_shared<const ckks::EvaluationKeys>(keys.evaluation);
  auto backend = std::make_shared<vm::CkksBackend>(ctx, evk);
  auto client = std::make_shared<vm::CkksClient>(ctx, keys, seed, mode);
  return Deployment{backend, client};
}

}  // namespace oblivdsp::pipelines
