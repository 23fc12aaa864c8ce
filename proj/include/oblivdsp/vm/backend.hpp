#pragma once

#include <memory>
#include <span>
#include <string>
#include <vector>

namespace oblivdsp::vm {

// Backend-specific storage behind a SlotVector (plain doubles or a ciphertext).
struct Payload {
  virtual ~Payload() = default;
};

struct SlotVector {
  std::shared_ptr<const Payload> handle;
  std::size_t slotCount = 0;
  int level = 0;  // remaining multiplicative depth
  double scale = 0.0;
  bool pendingRescale = false;  // product awaiting rescale (scale is squared)

  bool valid() const noexcept { return handle != nullptr; }
};

// Cloud-side evaluation primitives. Level/scale bookkeeping and tracing live
// in Machine; a backend only transforms payloads.
class Backend {
 public:
  virtual ~Backend() = default;

  virtual std::string name() const = 0;
  virtual std::size_t slotCount() const = 0;
  virtual int maxLevel() const = 0;
  virtual double levelScale(int level) const = 0;
  virtual double primeAt(int level) const = 0;

  virtual std::shared_ptr<const Payload> add(const SlotVector& a, const SlotVector& b) = 0;
  virtual std::shared_ptr<const Payload> sub(const SlotVector& a, const SlotVector& b) = 0;
  virtual std::shared_ptr<const Payload> addPlain(const SlotVector& a, std::span<const double> values) = 0;
  virtual std::shared_ptr<const Payload> mulCt(const SlotVector& a, const SlotVector& b) = 0;
  // Plaintext encoded at a's level with that level's nominal scale.
  virtual std::shared_ptr<const Payload> mulPlain(const SlotVector& a, std::span<const double> values) = 0;
  virtual std::shared_ptr<const Payload> rotate(const SlotVector& a, int k) = 0;
  virtual std::shared_ptr<const Payload> rescale(const SlotVector& a) = 0;
  virtual std::shared_ptr<const Payload> dropLevel(const SlotVector& a, int level) = 0;
};

// Client-side encryption and decryption. Never handed to cloud code.
class ClientSession {
 public:
  virtual ~ClientSession() = default;
  virtual SlotVector encrypt(std::span<const double> values) = 0;
  virtual std::vector<double> decrypt(const SlotVector& v) = 0;
};

}  // namespace oblivdsp::vm
