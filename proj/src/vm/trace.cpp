#include "oblivdsp/vm/trace.hpp"

#include <sstream>

#include "oblivdsp/ckks/params.hpp"
#include "oblivdsp/error.hpp"

namespace oblivdsp::vm {

namespace {

constexpr std::string_view kNames[] = {"add", "sub", "addPt", "mulCt", "mulPt", "rotate", "rescale", "dropLevel"};

}  // namespace

std::string_view toString(OpKind kind) { return kNames[static_cast<std::size_t>(kind)]; }

std::string TraceEvent::str() const {
  std::ostringstream os;
  os << toString(kind);
  if (kind == OpKind::rotate) os << " k=" << rotation;
  os << " slots=" << slots << " level=" << level;
  return os.str();
}

std::string TraceRecord::dump() const {
  std::ostringstream os;
  os << "# config " << configDigest << "\n";
  for (const auto& e : events) os << e.str() << "\n";
  return os.str();
}

std::uint64_t TraceRecord::digest() const {
  std::uint64_t h = ckks::fnv1a(nullptr, 0);
  for (const auto& e : events) {
    const std::int64_t fields[4] = {static_cast<std::int64_t>(e.kind), e.slots, e.level, e.rotation};
    h = ckks::fnv1a(fields, sizeof fields, h);
  }
  return h;
}

std::set<int> TraceRecord::rotationAmounts() const {
  std::set<int> out;
  for (const auto& e : events) {
    if (e.kind == OpKind::rotate) out.insert(e.rotation);
  }
  return out;
}

std::size_t TraceRecord::count(OpKind kind) const {
  std::size_t n = 0;
  for (const auto& e : events) n += e.kind == kind;
  return n;
}

TraceComparison traceEquals(const TraceRecord& a, const TraceRecord& b) {
  TraceComparison cmp;
  const std::size_t n = std::min(a.events.size(), b.events.size());
  for (std::size_t i = 0; i < n; ++i) {
    if (!(a.events[i] == b.events[i])) {
      cmp.identical = false;
      cmp.firstDivergence = i;
      cmp.detail = "event " + std::to_string(i) + ": '" + a.events[i].str() + "' vs '" + b.events[i].str() + "'";
      return cmp;
    }
  }
  if (a.events.size() != b.events.size()) {
    cmp.identical = false;
    cmp.firstDivergence = n;
    cmp.detail = "length " + std::to_string(a.events.size()) + " vs " + std::to_string(b.events.size());
  }
  return cmp;
}

TraceRecord parseTrace(std::string_view text) {
  TraceRecord t;
  std::istringstream is{std::string(text)};
  std::string line;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    if (line.rfind("# config ", 0) == 0) {
      t.configDigest = line.substr(9);
      continue;
    }
    std::istringstream ls(line);
    std::string name, field;
    ls >> name;
    TraceEvent e;
    bool found = false;
    for (std::size_t k = 0; k < std::size(kNames); ++k) {
      if (kNames[k] == name) {
        e.kind = static_cast<OpKind>(k);
        found = true;
      }
    }
    if (!found) throw FormatError("unknown trace op: " + name);
    while (ls >> field) {
      const auto eq = field.find('=');
      if (eq == std::string::npos) throw FormatError("malformed trace field: " + field);
      const std::string key = field.substr(0, eq);
      const long long v = std::stoll(field.substr(eq + 1));
      if (key == "k") e.rotation = static_cast<std::int32_t>(v);
      else if (key == "slots") e.slots = static_cast<std::uint32_t>(v);
      else if (key == "level") e.level = static_cast<std::int32_t>(v);
      else throw FormatError("unknown trace field: " + key);
    }
    t.events.push_back(e);
  }
  return t;
}

}  // namespace oblivdsp::vm
