#pragma once

#include <stdexcept>
#include <string>

namespace opetopes {

enum class ErrorKind {
  AddressNotALeaf,
  AddressNotANode,
  ColourMismatch,
  ReaddressingNotBijective,
  ShapeMismatch,
  NotComposable,
  NotACategory,
  InfiniteNerve,
  EmptyContext,
  NotAMap,
  WindowViolation,
  ParseError,
  FreshnessViolation,
  IllFormedContext,
  InvalidArgument,
};

const char* error_kind_name(ErrorKind k);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(error_kind_name(kind)) + ": " + what), kind_(kind) {}
  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace opetopes
