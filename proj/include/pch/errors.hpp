#pragma once

#include <stdexcept>
#include <string>

namespace pch {

// Byte/line extents of a syntactic element inside its source text.
struct SourceSpan {
  std::size_t byte_begin = 0;
  std::size_t byte_end = 0;
  int line_begin = 1;
  int col_begin = 1;
  int line_end = 1;
  int col_end = 1;

  bool valid() const { return byte_end >= byte_begin && (byte_begin | byte_end) != 0; }
};

std::string span_to_string(const SourceSpan& s);

enum class ErrorCode {
  Syntax,
  UnboundDummy,
  InconsistentIntervention,
  NonPropositionalCondition,
  UnknownVariable,
  DuplicateName,
  WeightSumNotOne,
  NonRecursiveMechanism,
  IncompleteTable,
  DuplicateAssignment,
  FragmentError,
  CapExceeded,
  DomainError,
  ArityError,
  Io,
  Internal,
};

const char* error_code_name(ErrorCode c);

class PchError : public std::runtime_error {
 public:
  PchError(ErrorCode code, std::string message, SourceSpan span = {})
      : std::runtime_error(format(code, message, span)),
        code_(code),
        span_(span),
        raw_(std::move(message)) {}

  ErrorCode code() const { return code_; }
  const SourceSpan& span() const { return span_; }
  const std::string& raw_message() const { return raw_; }

 private:
  static std::string format(ErrorCode code, const std::string& msg, const SourceSpan& span);

  ErrorCode code_;
  SourceSpan span_;
  std::string raw_;
};

}  // namespace pch
