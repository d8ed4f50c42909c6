// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <stdexcept>
#include <string>

namespace fqe {

/// Malformed input data: files, operator text, integral tables.
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid configuration value or violated operation precondition.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A numerical invariant broke at runtime (e.g. imaginary residue on a
/// quantity that must be real).
class InvariantError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// An operator annihilated the state so it cannot be renormalized.
class ZeroNormError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Dense work requested above the configured qubit cap.
class SizeCapError : public std::length_error {
 public:
  using std::length_error::length_error;
};

}  // namespace fqe
