#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace oblivdsp::vm {

enum class OpKind : std::uint8_t { add, sub, addPt, mulCt, mulPt, rotate, rescale, dropLevel };

std::string_view toString(OpKind kind);

// One abstract evaluation step. Carries shapes, rotation amounts and levels only.
struct TraceEvent {
  OpKind kind = OpKind::add;
  std::uint32_t slots = 0;
  std::int32_t level = 0;     // level of the result
  std::int32_t rotation = 0;  // rotate only

  bool operator==(const TraceEvent&) const = default;
  std::string str() const;
};

struct TraceRecord {
  std::string configDigest;
  std::vector<TraceEvent> events;

  // One event per line.
  std::string dump() const;
  std::uint64_t digest() const;
  std::set<int> rotationAmounts() const;
  std::size_t count(OpKind kind) const;
};

struct TraceComparison {
  bool identical = true;
  std::optional<std::size_t> firstDivergence;
  std::string detail;
};

// Identical iff the event lists match element-wise.
TraceComparison traceEquals(const TraceRecord& a, const TraceRecord& b);

TraceRecord parseTrace(std::string_view text);

}  // namespace oblivdsp::vm
