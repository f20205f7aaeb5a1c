#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>
#include <string_view>

namespace nodetrix {

// Malformed or inconsistent input data (files, ids supplied by a caller).
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ParseError : public InputError {
 public:
  ParseError(const std::string& what, std::size_t line, std::size_t column)
      : InputError(what + " (line " + std::to_string(line) + ", column " + std::to_string(column) + ")"),
        line_(line),
        column_(column) {}

  std::size_t line() const noexcept { return line_; }
  std::size_t column() const noexcept { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

// An editing or layout operation whose preconditions do not hold.
class OperationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A broken internal invariant.
class InvariantError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  friend Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
  friend Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
  friend Vec2 operator*(double s, Vec2 a) { return {s * a.x, s * a.y}; }
  friend bool operator==(Vec2 a, Vec2 b) = default;
};

inline double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
inline double norm(Vec2 a) { return std::hypot(a.x, a.y); }

// (1-s)*a + s*b; exact at both ends for finite inputs.
inline Vec2 lerp(Vec2 a, Vec2 b, double s) { return (1.0 - s) * a + s * b; }
inline double lerp(double a, double b, double s) { return (1.0 - s) * a + s * b; }

// Seeded generator whose output does not depend on the standard library's
// distribution implementations, so seeded runs reproduce across toolchains.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }

  // Uniform in [0, 1).
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // Uniform in [0, n).
  std::size_t below(std::size_t n) { return n == 0 ? 0 : static_cast<std::size_t>(engine_() % n); }

  bool chance(double p) { return uniform() < p; }

 private:
  std::mt19937_64 engine_;
};

// 64-bit FNV-1a.
std::uint64_t fnv1a(std::string_view bytes, std::uint64_t seed = 0xcbf29ce484222325ULL);
std::string hex64(std::uint64_t value);

// Fixed-precision decimal without "-0" artifacts, for byte-stable text output.
std::string format_fixed(double value, int precision = 3);

}  // namespace nodetrix
