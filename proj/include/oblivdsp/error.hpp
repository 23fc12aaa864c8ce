#pragma once

#include <stdexcept>
#include <string>

namespace oblivdsp {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Invalid parameter set or pipeline configuration.
class ConfigError : public Error {
 public:
  using Error::Error;
};

// The modulus chain has no level left for a rescale or multiplication.
class DepthExhausted : public Error {
 public:
  using Error::Error;
};

class ScaleMismatch : public Error {
 public:
  using Error::Error;
};

class MissingGaloisKey : public Error {
 public:
  using Error::Error;
};

// Packing or slot-layout problem (input does not fit, bad shape).
class LayoutError : public Error {
 public:
  using Error::Error;
};

class FormatError : public Error {
 public:
  using Error::Error;
};

}  // namespace oblivdsp
