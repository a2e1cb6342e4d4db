#pragma once

#include <stdexcept>
#include <string>

namespace otk {

/** @brief Base class for every error raised by the toolkit. */
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/** @brief Malformed input: bad shapes, non-finite entries, unreadable files. */
class InputError : public Error {
 public:
  using Error::Error;
};

/** @brief A mathematical precondition does not hold (not Hermitian, not a contraction, ...). */
class PreconditionError : public Error {
 public:
  using Error::Error;
};

/** @brief A finite window is too small for the requested powers. */
class WindowSizeError : public Error {
 public:
  WindowSizeError(const std::string& what, int minimal_slots)
      : Error(what + " (minimal slots: " + std::to_string(minimal_slots) + ")"), minimal_slots_(minimal_slots) {}
  int minimal_slots() const noexcept { return minimal_slots_; }

 private:
  int minimal_slots_;
};

}  // namespace otk
