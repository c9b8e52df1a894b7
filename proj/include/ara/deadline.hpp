#pragma once

#include <chrono>
#include <optional>
#include <string>

#include "ara/errors.hpp"

namespace ara {

// Cooperative wall-clock cutoff polled by long-running loops.
class Deadline {
 public:
  using Clock = std::chrono::steady_clock;

  Deadline() = default;  // never expires
  explicit Deadline(double seconds)
      : at_(Clock::now() + std::chrono::duration_cast<Clock::duration>(std::chrono::duration<double>(seconds))) {}

  bool expired() const { return at_ && Clock::now() >= *at_; }

  void check(const char* where) const {
    if (expired()) throw TimeoutError(std::string(where) + ": time cutoff reached");
  }

 private:
  std::optional<Clock::time_point> at_;
};

}  // namespace ara
