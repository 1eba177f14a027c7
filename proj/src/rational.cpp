#include "bsidon/rational.hpp"

#include <charconv>
#include <numeric>
#include <stdexcept>

namespace bsidon {

namespace {

std::int64_t parse_i64(std::string_view s) {
  std::int64_t v = 0;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || p != s.data() + s.size() || s.empty()) {
    throw std::invalid_argument("bad rational component '" + std::string(s) + "'");
  }
  return v;
}

}  // namespace

Rational Rational::make(std::int64_t num, std::int64_t den) {
  if (den == 0) throw std::invalid_argument("rational with zero denominator");
  if (den < 0) {
    num = -num;
    den = -den;
  }
  auto g = std::gcd(num, den);
  if (g > 1) {
    num /= g;
    den /= g;
  }
  return Rational{num, den};
}

Rational Rational::parse(std::string_view text) {
  auto slash = text.find('/');
  if (slash == std::string_view::npos) return make(parse_i64(text), 1);
  return make(parse_i64(text.substr(0, slash)), parse_i64(text.substr(slash + 1)));
}

std::string Rational::to_string() const {
  if (den == 1) return std::to_string(num);
  return std::to_string(num) + "/" + std::to_string(den);
}

}  // namespace bsidon
