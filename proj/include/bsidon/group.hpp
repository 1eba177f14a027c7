#pragma once

// Four discrete abelian group families and the bijection between their
// nonzero elements and the positive integers.
//
//   z              the integers
//   sum-zq:q=Q     countable direct sum of Z(Q), Q >= 2
//   zq-inf:q=P     the Pruefer group Z(P^inf), P prime
//   sum-zqn:...    direct sum of Z(q_n), q_n strictly increasing odd >= 3
//
// Element n >= 1 of the enumeration is called the character index of an
// element. Zero has no index.

#include <compare>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace bsidon {

using CharIndex = std::uint64_t;

enum class Family { Integers, DirectSumZq, ZqInfinity, DirectSumZqn };

/// Degree of an element; the zero element has degree kDegreeZero, which
/// compares below every real degree.
using Degree = int;
inline constexpr Degree kDegreeZero = std::numeric_limits<int>::min();

class GroupSpec {
 public:
  static GroupSpec integers();
  static GroupSpec direct_sum_zq(std::uint64_t q);
  /// Throws std::invalid_argument unless q is prime.
  static GroupSpec zq_infinity(std::uint64_t q);
  /// Throws std::invalid_argument unless qs is strictly increasing, odd, >= 3.
  static GroupSpec direct_sum_zqn(std::vector<std::uint64_t> qs);
  /// The first `count` odd primes 3, 5, 7, 11, ...
  static GroupSpec direct_sum_odd_primes(int count);

  /// Parses the textual form (`z`, `sum-zq:q=3`, `zq-inf:q=5`,
  /// `sum-zqn:qs=3,5,7`, `sum-zqn:gen=odd-primes:count=8`).
  static GroupSpec parse(std::string_view text);
  std::string to_string() const;

  Family family() const { return family_; }
  std::uint64_t q() const { return q_; }
  const std::vector<std::uint64_t>& qs() const { return qs_; }
  bool non_archimedean() const { return family_ != Family::Integers; }

  /// Q_{d-1} = q_0 * ... * q_{d-1} for the direct sum of Z(q_n); 1 when d = 0.
  /// Only meaningful for DirectSumZqn; d ranges over [0, qs().size()].
  std::uint64_t radix_product(int d) const { return products_.at(static_cast<std::size_t>(d)); }

  /// Largest index the family can represent in 64 bits.
  CharIndex max_index() const;

  friend bool operator==(const GroupSpec& a, const GroupSpec& b) {
    return a.family_ == b.family_ && a.q_ == b.q_ && a.qs_ == b.qs_;
  }

 private:
  Family family_ = Family::Integers;
  std::uint64_t q_ = 0;
  std::vector<std::uint64_t> qs_;
  std::vector<std::uint64_t> products_;  // products_[d] = q_0 * ... * q_{d-1}
  std::optional<int> odd_prime_count_;   // remembers the generator form
};

/// j / q^exponent with q not dividing j; zero is {0, 0}.
struct Fraction {
  std::uint64_t numerator = 0;
  int exponent = 0;
  auto operator<=>(const Fraction&) const = default;
};

/// Canonical element. Integers carry a signed value, direct sums a digit
/// vector without trailing zeros, the Pruefer group a reduced fraction.
class GroupElement {
 public:
  using Digits = std::vector<std::int64_t>;

  GroupElement() = default;
  static GroupElement integer(std::int64_t v) { return GroupElement(Payload{v}); }
  /// Trailing zero digits are trimmed.
  static GroupElement digits(Digits d);
  static GroupElement fraction(std::uint64_t numerator, int exponent) {
    return GroupElement(Payload{Fraction{numerator, exponent}});
  }

  bool is_integer() const { return std::holds_alternative<std::int64_t>(payload_); }
  bool is_digits() const { return std::holds_alternative<Digits>(payload_); }
  bool is_fraction() const { return std::holds_alternative<Fraction>(payload_); }

  std::int64_t as_integer() const { return std::get<std::int64_t>(payload_); }
  const Digits& as_digits() const { return std::get<Digits>(payload_); }
  const Fraction& as_fraction() const { return std::get<Fraction>(payload_); }

  bool is_zero() const;

  friend bool operator==(const GroupElement&, const GroupElement&) = default;

 private:
  using Payload = std::variant<std::int64_t, Digits, Fraction>;
  explicit GroupElement(Payload p) : payload_(std::move(p)) {}
  Payload payload_{std::int64_t{0}};
};

GroupElement zero(const GroupSpec& spec);

/// Throws std::domain_error for n = 0 and std::out_of_range past max_index().
GroupElement index_to_element(const GroupSpec& spec, CharIndex n);
/// Throws std::domain_error for zero and for negative integers.
CharIndex element_to_index(const GroupSpec& spec, const GroupElement& e);

GroupElement add(const GroupSpec& spec, const GroupElement& a, const GroupElement& b);
GroupElement neg(const GroupSpec& spec, const GroupElement& a);
inline GroupElement sub(const GroupSpec& spec, const GroupElement& a, const GroupElement& b) {
  return add(spec, a, neg(spec, b));
}

/// Position of the last nonzero digit. For the Pruefer group j/q^M has
/// degree M-1. For the integers the degree is floor(log2 |n|).
Degree degree(const GroupSpec& spec, const GroupElement& e);
/// degree(index_to_element(n)) without materialising the element.
Degree index_degree(const GroupSpec& spec, CharIndex n);

/// Signed integer key used for targets in reports: the value itself for the
/// integers, the character index (0 for zero) otherwise.
std::int64_t target_key(const GroupSpec& spec, const GroupElement& e);
GroupElement element_from_key(const GroupSpec& spec, std::int64_t key);

std::string to_string(const GroupSpec& spec, const GroupElement& e);

/// Elements of degree <= max_degree packed into one 64-bit word with cheap
/// addition. Used by the counting engines; GroupElement arithmetic is the
/// reference the packing is tested against.
class PackedGroup {
 public:
  using Code = std::uint64_t;

  /// For the integers max_degree is ignored.
  PackedGroup(GroupSpec spec, Degree max_degree);
  /// Sized to hold every element up to and including index n.
  static PackedGroup covering(const GroupSpec& spec, CharIndex n);

  const GroupSpec& spec() const { return spec_; }
  Degree max_degree() const { return max_degree_; }

  bool representable(const GroupElement& e) const;
  /// Throws std::out_of_range when e is not representable.
  Code pack(const GroupElement& e) const;
  GroupElement unpack(Code c) const;
  Code pack_index(CharIndex n) const { return pack(index_to_element(spec_, n)); }

  Code zero() const { return zero_code_; }
  Code add(Code a, Code b) const;
  Code neg(Code a) const;
  Code sub(Code a, Code b) const { return add(a, neg(b)); }

  /// Same convention as bsidon::target_key.
  std::int64_t key(Code c) const;
  /// Character index of c, or 0 when c is zero (or a non-positive integer).
  CharIndex index(Code c) const;

 private:
  GroupSpec spec_;
  Degree max_degree_ = 0;
  Code zero_code_ = 0;
  std::uint64_t modulus_ = 0;             // Pruefer: q^(max_degree+1)
  std::vector<std::uint64_t> radices_;    // direct sums, one per digit
  std::vector<std::uint64_t> weights_;    // mixed-radix place values
};

bool is_prime(std::uint64_t n);

}  // namespace bsidon
