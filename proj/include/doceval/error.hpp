#pragma once

#include <stdexcept>
#include <string>

namespace doceval {

/// Base class for every error raised by the toolkit.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidArgument : public Error {
 public:
  using Error::Error;
};

class MissingExternalCount : public Error {
 public:
  explicit MissingExternalCount(const std::string& id)
      : Error("no external token count for sentence '" + id + "'") {}
};

class EmptyCorpus : public Error {
 public:
  EmptyCorpus() : Error("empty corpus") {}
  using Error::Error;
};

class ZeroHypothesisLength : public Error {
 public:
  ZeroHypothesisLength() : Error("brevity penalty undefined for zero hypothesis length") {}
};

class SegmentCountMismatch : public Error {
 public:
  using Error::Error;
};

class MissingScore : public Error {
 public:
  using Error::Error;
};

class InsufficientData : public Error {
 public:
  using Error::Error;
};

class InsufficientVariance : public Error {
 public:
  using Error::Error;
};

class InvalidLength : public Error {
 public:
  using Error::Error;
};

class LengthExceedsModelMax : public Error {
 public:
  using Error::Error;
};

class InsufficientSamples : public Error {
 public:
  using Error::Error;
};

class UnitMismatch : public Error {
 public:
  using Error::Error;
};

class IncompleteBucket : public Error {
 public:
  using Error::Error;
};

class EmptyGroup : public Error {
 public:
  using Error::Error;
};

/// Input format problem; carries the file and 1-based line number when known.
class FormatError : public Error {
 public:
  FormatError(const std::string& file, std::size_t line, const std::string& what)
      : Error(file + ":" + std::to_string(line) + ": " + what), file_(file), line_(line) {}

  const std::string& file() const { return file_; }
  std::size_t line() const { return line_; }

 private:
  std::string file_;
  std::size_t line_;
};

class BoundaryError : public FormatError {
 public:
  using FormatError::FormatError;
};

class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace doceval
