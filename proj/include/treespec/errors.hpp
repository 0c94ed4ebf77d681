#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace treespec {

enum class ErrorKind {
  invalid_argument,
  degenerate_denominator,
  non_integer_branching,
  decoupled,
  no_period,
  degenerate_floquet,
  complex_coupling_unsupported,
  depth_too_large,
  empty_prefix,
  empty_block,
  undefined_letter,
  window_too_short,
};

std::string_view to_string(ErrorKind kind);

/// True for failures of a mathematical precondition (as opposed to malformed input).
constexpr bool is_mathematical(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::degenerate_denominator:
    case ErrorKind::non_integer_branching:
    case ErrorKind::decoupled:
    case ErrorKind::degenerate_floquet:
    case ErrorKind::complex_coupling_unsupported:
      return true;
    default:
      return false;
  }
}

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what, std::optional<std::size_t> generation = std::nullopt)
      : std::runtime_error(what), kind_(kind), generation_(generation) {}

  ErrorKind kind() const noexcept { return kind_; }
  /// Generation (or interaction-point index) the failure is attributed to, if any.
  std::optional<std::size_t> generation() const noexcept { return generation_; }

  /// Copy of this error re-attributed to `generation`.
  Error at_generation(std::size_t generation) const { return Error(kind_, what(), generation); }

 private:
  ErrorKind kind_;
  std::optional<std::size_t> generation_;
};

inline std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::invalid_argument: return "InvalidArgument";
    case ErrorKind::degenerate_denominator: return "DegenerateDenominator";
    case ErrorKind::non_integer_branching: return "NonIntegerBranching";
    case ErrorKind::decoupled: return "Decoupled";
    case ErrorKind::no_period: return "NoPeriod";
    case ErrorKind::degenerate_floquet: return "DegenerateFloquet";
    case ErrorKind::complex_coupling_unsupported: return "ComplexCouplingUnsupported";
    case ErrorKind::depth_too_large: return "DepthTooLarge";
    case ErrorKind::empty_prefix: return "EmptyPrefix";
    case ErrorKind::empty_block: return "EmptyBlock";
    case ErrorKind::undefined_letter: return "UndefinedLetter";
    case ErrorKind::window_too_short: return "WindowTooShort";
  }
  return "Unknown";
}

}  // namespace treespec
