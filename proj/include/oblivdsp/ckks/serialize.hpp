#pragma once

#include <iosfwd>
#include <memory>
#include <string>

#include "oblivdsp/ckks/keys.hpp"
#include "oblivdsp/ckks/params.hpp"
#include "oblivdsp/ckks/scheme.hpp"

// Versioned little-endian binary files for parameters, keys and ciphertexts.
// Layout: docs/FORMATS.md. Readers throw FormatError on malformed input and
// ConfigError when a file was made for different parameters.
namespace oblivdsp::ckks {

inline constexpr std::uint32_t kFormatVersion = 1;

enum class FileKind : std::uint32_t { clientKeys = 1, evaluationKeys = 2, ciphertext = 3 };

struct ClientKeys {
  SecretKey secretKey;
  PublicKey publicKey;
};

void writeClientKeys(std::ostream& out, const CkksContext& ctx, const SecretKey& sk, const PublicKey& pk);
void writeEvaluationKeys(std::ostream& out, const CkksContext& ctx, const EvaluationKeys& keys);
void writeCiphertext(std::ostream& out, const CkksContext& ctx, const Ciphertext& ct);

// Header only: kind and parameters.
struct FileHeader {
  FileKind kind;
  CkksParams params;
  std::uint64_t digest = 0;
};
FileHeader readHeader(std::istream& in);

// Each reader consumes the header and checks it against ctx.
ClientKeys readClientKeys(std::istream& in, const std::shared_ptr<const CkksContext>& ctx);
EvaluationKeys readEvaluationKeys(std::istream& in, const std::shared_ptr<const CkksContext>& ctx);
Ciphertext readCiphertext(std::istream& in, const std::shared_ptr<const CkksContext>& ctx);

FileHeader readHeaderFile(const std::string& path);

}  // namespace oblivdsp::ckks
