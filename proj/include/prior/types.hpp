#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>

namespace prior {

inline constexpr std::size_t kNumJoints = 12;

using JointVector = std::array<double, kNumJoints>;
using Vec3 = std::array<double, 3>;
using Vec2 = std::array<double, 2>;

enum class Foot : int { Left = 0, Right = 1 };
inline constexpr std::array<Foot, 2> kFeet = {Foot::Left, Foot::Right};

constexpr std::size_t index(Foot f) { return static_cast<std::size_t>(f); }

inline const char* to_string(Foot f) { return f == Foot::Left ? "left" : "right"; }

// Base for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed or inconsistent input data; `field` names the offending entry.
class FormatError : public Error {
 public:
  FormatError(std::string field, const std::string& what)
      : Error(what), field_(std::move(field)) {}
  const std::string& field() const { return field_; }

 private:
  std::string field_;
};

class DimensionError : public Error {
 public:
  using Error::Error;
};

class DomainError : public Error {
 public:
  using Error::Error;
};

template <std::size_t N>
bool all_finite(const std::array<double, N>& v) {
  for (double x : v) {
    if (!std::isfinite(x)) return false;
  }
  return true;
}

}  // namespace prior
