#pragma once

#include <stdexcept>
#include <string>

namespace edhmm {

/// Invalid configuration, parameters or input schema.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// The sampler reached a state it cannot continue from (empty active set,
/// zero-probability conditioning path, underflowed messages).
class SamplerError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// File could not be opened, read or written.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace edhmm
