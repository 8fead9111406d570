// Copyright 2026 The morphome-lab Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <stdexcept>
#include <string>

namespace morphome {

// Coarse failure classes. The CLI maps them onto exit codes 2/3/4.
enum class ErrorKind { Config, Data, Numerical };

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

struct ConfigError : Error {
  explicit ConfigError(const std::string& w) : Error(ErrorKind::Config, w) {}
};

struct DataError : Error {
  explicit DataError(const std::string& w) : Error(ErrorKind::Data, w) {}
};

struct NumericalError : Error {
  explicit NumericalError(const std::string& w) : Error(ErrorKind::Numerical, w) {}
};

struct UnknownSymbol : DataError {
  explicit UnknownSymbol(const std::string& glyph) : DataError("unknown symbol '" + glyph + "'") {}
};
struct EmptyForm : DataError {
  explicit EmptyForm(const std::string& w) : DataError(w) {}
};
struct MissingAlternant : DataError {
  explicit MissingAlternant(const std::string& w) : DataError(w) {}
};
struct ExhaustedNamespace : DataError {
  explicit ExhaustedNamespace(const std::string& w) : DataError(w) {}
};
struct OverlapError : DataError {
  explicit OverlapError(const std::string& w) : DataError(w) {}
};
struct EmptyInput : DataError {
  explicit EmptyInput(const std::string& w) : DataError(w) {}
};
struct LengthMismatch : DataError {
  explicit LengthMismatch(const std::string& w) : DataError(w) {}
};
struct ConstantInput : NumericalError {
  explicit ConstantInput(const std::string& w) : NumericalError(w) {}
};
struct LengthExceeded : DataError {
  explicit LengthExceeded(const std::string& w) : DataError(w) {}
};
struct UnknownToken : DataError {
  explicit UnknownToken(const std::string& w) : DataError(w) {}
};
struct ShapeMismatch : DataError {
  explicit ShapeMismatch(const std::string& w) : DataError(w) {}
};
struct NonFiniteLoss : NumericalError {
  explicit NonFiniteLoss(const std::string& w) : NumericalError(w) {}
};
struct EmptyLexicon : DataError {
  explicit EmptyLexicon(const std::string& w) : DataError(w) {}
};
struct Separation : NumericalError {
  explicit Separation(const std::string& w) : NumericalError(w) {}
};
struct NonConvergence : NumericalError {
  explicit NonConvergence(const std::string& w) : NumericalError(w) {}
};

}  // namespace morphome
