#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace clonebench {

/// Base class for every failure raised by the library. Subclasses carry the
/// fields callers need to react programmatically; `what()` is human-readable.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// corpus ----------------------------------------------------------------------

class MissingMetadata : public Error {
 public:
  explicit MissingMetadata(std::string problem_id)
      : Error("missing metadata table for problem " + problem_id),
        problem_id_(std::move(problem_id)) {}
  const std::string& problem_id() const { return problem_id_; }

 private:
  std::string problem_id_;
};

class MalformedRow : public Error {
 public:
  MalformedRow(std::string file, std::size_t line, const std::string& why)
      : Error("malformed row at " + file + ":" + std::to_string(line) + ": " + why),
        file_(std::move(file)),
        line_(line) {}
  const std::string& file() const { return file_; }
  std::size_t line() const { return line_; }

 private:
  std::string file_;
  std::size_t line_;
};

class UndefinedRate : public Error {
 public:
  explicit UndefinedRate(const std::string& problem_id)
      : Error("acceptance rate undefined for problem " + problem_id + ": no submissions") {}
};

// sampling --------------------------------------------------------------------

class InsufficientProblems : public Error {
 public:
  InsufficientProblems(std::size_t found, std::size_t required)
      : Error("insufficient eligible problems: found " + std::to_string(found) + ", required " +
              std::to_string(required)),
        found_(found),
        required_(required) {}
  std::size_t found() const { return found_; }
  std::size_t required() const { return required_; }

 private:
  std::size_t found_;
  std::size_t required_;
};

class InsufficientSubmissions : public Error {
 public:
  explicit InsufficientSubmissions(std::string problem_id)
      : Error("insufficient submissions for problem " + problem_id),
        problem_id_(std::move(problem_id)) {}
  const std::string& problem_id() const { return problem_id_; }

 private:
  std::string problem_id_;
};

class PairSpaceExhausted : public Error {
 public:
  PairSpaceExhausted(const std::string& kind, std::size_t available, std::size_t requested)
      : Error("cannot draw " + std::to_string(requested) + " distinct " + kind + " pairs; only " +
              std::to_string(available) + " exist") {}
};

class InvalidSpec : public Error {
 public:
  using Error::Error;
};

// complexity ------------------------------------------------------------------

class EmptyInput : public Error {
 public:
  using Error::Error;
};

// detectors -------------------------------------------------------------------

class DetectorFailure : public Error {
 public:
  DetectorFailure(long long pair_id, const std::string& cause)
      : Error("detector failed on pair " + std::to_string(pair_id) + ": " + cause),
        pair_id_(pair_id),
        cause_(cause) {}
  long long pair_id() const { return pair_id_; }
  const std::string& cause() const { return cause_; }

 private:
  long long pair_id_;
  std::string cause_;
};

class TemplateError : public Error {
 public:
  using Error::Error;
};

class AmbiguousResponse : public Error {
 public:
  explicit AmbiguousResponse(std::string text)
      : Error("ambiguous model response: \"" + text + "\""), text_(std::move(text)) {}
  const std::string& text() const { return text_; }

 private:
  std::string text_;
};

class AuthError : public Error {
 public:
  using Error::Error;
};

class TransportError : public Error {
 public:
  using Error::Error;
};

// metrics ---------------------------------------------------------------------

class UnknownPairId : public Error {
 public:
  explicit UnknownPairId(long long pair_id)
      : Error("prediction references unknown pair id " + std::to_string(pair_id)), pair_id_(pair_id) {}
  long long pair_id() const { return pair_id_; }

 private:
  long long pair_id_;
};

}  // namespace clonebench
