#include "oblivdsp/ckks/serialize.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>

#include "oblivdsp/error.hpp"

namespace oblivdsp::ckks {

using ring::PolyForm;
using ring::RnsPolynomial;

namespace {

static_assert(std::endian::native == std::endian::little, "binary formats assume a little-endian host");

constexpr char kMagic[8] = {'O', 'B', 'L', 'V', 'C', 'K', 'K', 'S'};
constexpr std::uint32_t kMaxCount = 1u << 20;

template <class T>
void put(std::ostream& out, T v) {
  out.write(reinterpret_cast<const char*>(&v), sizeof v);
}

template <class T>
T get(std::istream& in) {
  T v{};
  if (!in.read(reinterpret_cast<char*>(&v), sizeof v)) throw FormatError("truncated key or ciphertext file");
  return v;
}

std::uint32_t getCount(std::istream& in, std::uint32_t limit = kMaxCount) {
  const auto n = get<std::uint32_t>(in);
  if (n > limit) throw FormatError("implausible element count in key or ciphertext file");
  return n;
}

void writeHeader(std::ostream& out, FileKind kind, const CkksContext& ctx) {
  const auto& p = ctx.params();
  out.write(kMagic, sizeof kMagic);
  put(out, kFormatVersion);
  put(out, static_cast<std::uint32_t>(kind));
  put(out, static_cast<std::uint64_t>(p.ringDim));
  put(out, static_cast<std::int32_t>(p.depth));
  put(out, static_cast<std::int32_t>(p.scalingBits));
  put(out, static_cast<std::int32_t>(p.firstBits));
  put(out, static_cast<std::int32_t>(p.specialBits));
  put(out, p.errorStdDev);
  put(out, static_cast<std::uint32_t>(p.profile));
  put(out, ctx.digest());
}

void expectHeader(std::istream& in, FileKind kind, const CkksContext& ctx) {
  const auto h = readHeader(in);
  if (h.kind != kind) throw FormatError("file holds a different object kind");
  if (h.digest != ctx.digest()) throw ConfigError("file was written for different CKKS parameters");
}

void writePoly(std::ostream& out, const RnsPolynomial& p) {
  put(out, static_cast<std::uint8_t>(p.form()));
  put(out, static_cast<std::uint32_t>(p.primeCount()));
  for (auto b : p.basis()) put(out, b);
  out.write(reinterpret_cast<const char*>(p.raw().data()), static_cast<std::streamsize>(p.raw().size() * sizeof(ring::u64)));
}

RnsPolynomial readPoly(std::istream& in, const CkksContext& ctx) {
  const auto form = get<std::uint8_t>(in);
  if (form > 1) throw FormatError("bad polynomial form");
  const auto& ring = ctx.ring();
  const auto count = getCount(in, static_cast<std::uint32_t>(ring->primeCount()));
  std::vector<std::uint32_t> basis(count);
  for (auto& b : basis) {
    b = get<std::uint32_t>(in);
    if (b >= ring->primeCount()) throw FormatError("prime index out of range");
  }
  RnsPolynomial p(ring, basis, static_cast<PolyForm>(form));
  auto& raw = p.raw();
  if (!in.read(reinterpret_cast<char*>(raw.data()), static_cast<std::streamsize>(raw.size() * sizeof(ring::u64)))) {
    throw FormatError("truncated polynomial");
  }
  for (std::size_t i = 0; i < count; ++i) {
    const auto q = p.modulus(i).value();
    for (auto v : p.residues(i)) {
      if (v >= q) throw FormatError("residue not reduced modulo its prime");
    }
  }
  return p;
}

void writeSwitchingKey(std::ostream& out, const SwitchingKey& k) {
  if (k.seeds.size() != k.b.size()) throw Error("switching key without expansion seeds cannot be serialized");
  put(out, static_cast<std::uint32_t>(k.b.size()));
  for (std::size_t i = 0; i < k.b.size(); ++i) {
    put(out, k.seeds[i]);
    writePoly(out, k.b[i]);
  }
}

SwitchingKey readSwitchingKey(std::istream& in, const CkksContext& ctx) {
  const auto digits = getCount(in, static_cast<std::uint32_t>(ctx.chain().length()));
  if (digits != ctx.chain().length()) throw FormatError("switching key digit count does not match the chain");
  SwitchingKey k;
  for (std::uint32_t i = 0; i < digits; ++i) {
    const auto seed = get<std::uint64_t>(in);
    k.seeds.push_back(seed);
    k.a.push_back(expandUniform(ctx, seed));
    k.b.push_back(readPoly(in, ctx));
    if (!k.b.back().sameBasis(k.a.back())) throw FormatError("switching key basis mismatch");
  }
  return k;
}

}  // namespace

FileHeader readHeader(std::istream& in) {
  char magic[8];
  if (!in.read(magic, sizeof magic) || std::memcmp(magic, kMagic, sizeof magic) != 0) {
    throw FormatError("not an oblivdsp key or ciphertext file (bad magic)");
  }
  if (get<std::uint32_t>(in) != kFormatVersion) throw FormatError("unsupported format version");
  FileHeader h;
  const auto kind = get<std::uint32_t>(in);
  if (kind < 1 || kind > 3) throw FormatError("unknown object kind");
  h.kind = static_cast<FileKind>(kind);
  h.params.ringDim = get<std::uint64_t>(in);
  h.params.depth = get<std::int32_t>(in);
  h.params.scalingBits = get<std::int32_t>(in);
  h.params.firstBits = get<std::int32_t>(in);
  h.params.specialBits = get<std::int32_t>(in);
  h.params.errorStdDev = get<double>(in);
  const auto profile = get<std::uint32_t>(in);
  if (profile > 1) throw FormatError("unknown security profile");
  h.params.profile = static_cast<SecurityProfile>(profile);
  h.digest = get<std::uint64_t>(in);
  return h;
}

FileHeader readHeaderFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError("cannot open " + path);
  return readHeader(in);
}

void writeClientKeys(std::ostream& out, const CkksContext& ctx, const SecretKey& sk, const PublicKey& pk) {
  writeHeader(out, FileKind::clientKeys, ctx);
  writePoly(out, sk.poly);
  writePoly(out, pk.b);
  writePoly(out, pk.a);
  if (!out) throw Error("failed writing client keys");
}

ClientKeys readClientKeys(std::istream& in, const std::shared_ptr<const CkksContext>& ctx) {
  expectHeader(in, FileKind::clientKeys, *ctx);
  ClientKeys k;
  k.secretKey.poly = readPoly(in, *ctx);
  k.publicKey.b = readPoly(in, *ctx);
  k.publicKey.a = readPoly(in, *ctx);
  return k;
}

void writeEvaluationKeys(std::ostream& out, const CkksContext& ctx, const EvaluationKeys& keys) {
  writeHeader(out, FileKind::evaluationKeys, ctx);
  writePoly(out, keys.publicKey.b);
  writePoly(out, keys.publicKey.a);
  writeSwitchingKey(out, keys.relinKey.key);
  put(out, static_cast<std::uint32_t>(keys.galoisKeys.size()));
  for (const auto& [amount, key] : keys.galoisKeys.keys) {
    put(out, static_cast<std::uint64_t>(amount));
    writeSwitchingKey(out, key);
  }
  if (!out) throw Error("failed writing evaluation keys");
}

EvaluationKeys readEvaluationKeys(std::istream& in, const std::shared_ptr<const CkksContext>& ctx) {
  expectHeader(in, FileKind::evaluationKeys, *ctx);
  EvaluationKeys k;
  k.publicKey.b = readPoly(in, *ctx);
  k.publicKey.a = readPoly(in, *ctx);
  k.relinKey.key = readSwitchingKey(in, *ctx);
  const auto count = getCount(in, static_cast<std::uint32_t>(ctx->slotCount()));
  for (std::uint32_t i = 0; i < count; ++i) {
    const auto amount = get<std::uint64_t>(in);
    if (amount == 0 || amount >= ctx->slotCount()) throw FormatError("Galois key for an invalid rotation");
    k.galoisKeys.keys.emplace(static_cast<std::size_t>(amount), readSwitchingKey(in, *ctx));
  }
  return k;
}

void writeCiphertext(std::ostream& out, const CkksContext& ctx, const Ciphertext& ct) {
  writeHeader(out, FileKind::ciphertext, ctx);
  put(out, static_cast<std::int32_t>(ct.level));
  put(out, ct.scale);
  put(out, static_cast<std::uint32_t>(ct.polys.size()));
  for (const auto& p : ct.polys) writePoly(out, p);
  if (!out) throw Error("failed writing ciphertext");
}

Ciphertext readCiphertext(std::istream& in, const std::shared_ptr<const CkksContext>& ctx) {
  expectHeader(in, FileKind::ciphertext, *ctx);
  Ciphertext ct;
  ct.level = get<std::int32_t>(in);
  if (ct.level < 0 || ct.level > ctx->maxLevel()) throw FormatError("ciphertext level out of range");
  ct.scale = get<double>(in);
  if (!(ct.scale > 0)) throw FormatError("ciphertext scale must be positive");
  const auto n = getCount(in, 3);
  if (n < 2) throw FormatError("ciphertext needs two or three polynomials");
  const auto basis = ctx->basisAt(ct.level);
  for (std::uint32_t i = 0; i < n; ++i) {
    ct.polys.push_back(readPoly(in, *ctx));
    if (ct.polys.back().basis() != basis) throw FormatError("ciphertext polynomial basis does not match its level");
  }
  return ct;
}

}  // namespace oblivdsp::ckks
