#pragma once

#include <memory>
#include <set>
#include <string>
#include <vector>

#include "oblivdsp/ckks/params.hpp"
#include "oblivdsp/vm/backend.hpp"
#include "oblivdsp/vm/ckks_backend.hpp"

namespace oblivdsp::pipelines {

// Slots of one cloud-side vector that carry a stage's values.
struct ProbeItem {
  vm::SlotVector value;
  std::vector<std::size_t> slots;
};

// A stage output as the cloud holds it (never decrypted by cloud code).
struct StageProbe {
  std::string name;
  std::vector<ProbeItem> items;
  int level() const;
};

struct DepthRow {
  std::string stage;
  int depth = 0;
  int cumulative = 0;
};
using DepthLedger = std::vector<DepthRow>;

DepthLedger depthLedger(const std::vector<StageProbe>& stages, int maxLevel);
std::string formatLedger(const DepthLedger& ledger);
// Throws DepthExhausted naming the first stage whose cumulative depth exceeds maxLevel.
void checkDepthBudget(const DepthLedger& required, int maxLevel);
// Levels available for dry runs that measure a circuit's full depth.
inline constexpr int kAuditDepth = 24;

// Client side: decrypted stage values for fidelity comparisons.
struct StageValues {
  std::string name;
  int depth = 0;
  std::vector<double> values;
};
std::vector<StageValues> decryptStages(vm::ClientSession& client, const std::vector<StageProbe>& stages, int maxLevel);

// Backend plus the matching client session.
struct Deployment {
  std::shared_ptr<vm::Backend> backend;
  std::shared_ptr<vm::ClientSession> client;
};

Deployment makeExactSim(const ckks::CkksParams& params);
Deployment makeCkks(const ckks::CkksParams& params, const std::set<int>& rotations, std::uint64_t seed,
                    vm::EncryptionMode mode = vm::EncryptionMode::publicKey);
Deployment makeCkks(std::shared_ptr<const ckks::CkksContext> ctx, const ckks::KeySet& keys, std::uint64_t seed,
                    vm::EncryptionMode mode = vm::EncryptionMode::publicKey);

}  // namespace oblivdsp::pipelines
