#pragma once

#include <cstdint>
#include <string>
#include <string_view>

namespace bsidon {

/// Exact rational parameter as typed on the command line ("1/4", "3").
/// Kept in lowest terms with a positive denominator so the textual form
/// written into artifacts is canonical.
struct Rational {
  std::int64_t num = 0;
  std::int64_t den = 1;

  static Rational parse(std::string_view text);
  static Rational make(std::int64_t num, std::int64_t den);

  double value() const { return static_cast<double>(num) / static_cast<double>(den); }
  std::string to_string() const;

  friend bool operator==(const Rational&, const Rational&) = default;
};

}  // namespace bsidon
