#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace sigloop {

enum class ErrorKind {
  MalformedDataset,
  InvalidValue,
  DuplicateId,
  DatasetTooSmall,
  ConfigError,
  VocabularyError,
  EmptySignature,
  FamilyMismatch,
  UndefinedConfidence,
  InvalidMatrix,
  SelectionError,
  NotFound,
  UnsupportedVersion,
  DatasetMissing,
  IterationTimeout,
};

std::string_view to_string(ErrorKind kind) noexcept;

// Single exception type for the engine; callers branch on kind().
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(std::string(to_string(kind)) + ": " + message),
        kind_(kind),
        detail_(message) {}

  ErrorKind kind() const noexcept { return kind_; }
  const std::string& detail() const noexcept { return detail_; }

 private:
  ErrorKind kind_;
  std::string detail_;
};

}  // namespace sigloop
