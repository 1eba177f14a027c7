#include <doctest.h>

#include <cstdlib>
#include <map>
#include <random>
#include <stdexcept>

#include "bsidon/group.hpp"
#include "oracles.hpp"

using namespace bsidon;

namespace {

std::vector<GroupSpec> all_families() {
  return {GroupSpec::integers(),         GroupSpec::direct_sum_zq(2),  GroupSpec::direct_sum_zq(3),
          GroupSpec::direct_sum_zq(10),  GroupSpec::zq_infinity(2),    GroupSpec::zq_infinity(5),
          GroupSpec::direct_sum_odd_primes(12), GroupSpec::direct_sum_zqn({3, 9, 25, 27, 101})};
}

GroupElement random_element(const GroupSpec& spec, std::mt19937_64& rng, CharIndex limit) {
  if (spec.family() == Family::Integers) {
    std::uniform_int_distribution<std::int64_t> v(-static_cast<std::int64_t>(limit), static_cast<std::int64_t>(limit));
    return GroupElement::integer(v(rng));
  }
  std::uniform_int_distribution<CharIndex> n(0, limit);
  auto i = n(rng);
  return i == 0 ? zero(spec) : index_to_element(spec, i);
}

}  // namespace

TEST_CASE("index_to_element worked examples") {
  auto z3 = GroupSpec::direct_sum_zq(3);
  auto e = index_to_element(z3, 5);
  CHECK(e == GroupElement::digits({2, 1}));
  CHECK(degree(z3, e) == 1);

  CHECK(index_to_element(GroupSpec::integers(), 7) == GroupElement::integer(7));

  auto zqn = GroupSpec::direct_sum_odd_primes(6);
  auto two = index_to_element(zqn, 2);
  CHECK(two == GroupElement::digits({-1}));
  CHECK(degree(zqn, two) == 0);
}

TEST_CASE("element_to_index worked examples") {
  CHECK(element_to_index(GroupSpec::direct_sum_zq(3), GroupElement::digits({2, 1})) == 5);
  CHECK(element_to_index(GroupSpec::zq_infinity(5), GroupElement::fraction(2, 1)) == 2);
  CHECK(element_to_index(GroupSpec::integers(), GroupElement::integer(1)) == 1);
}

TEST_CASE("arithmetic worked examples") {
  auto z3 = GroupSpec::direct_sum_zq(3);
  auto a = GroupElement::digits({2, 1});
  auto s = add(z3, a, a);
  CHECK(s == GroupElement::digits({1, 2}));
  CHECK(element_to_index(z3, s) == 7);

  auto p5 = GroupSpec::zq_infinity(5);
  auto f = add(p5, GroupElement::fraction(2, 1), GroupElement::fraction(4, 1));
  CHECK(f == GroupElement::fraction(1, 1));
  CHECK(element_to_index(p5, f) == 1);

  auto z = GroupSpec::integers();
  CHECK(add(z, GroupElement::integer(3), GroupElement::integer(-3)).is_zero());
}

TEST_CASE("degree worked examples") {
  auto z2 = GroupSpec::direct_sum_zq(2);
  CHECK(index_to_element(z2, 3) == GroupElement::digits({1, 1}));
  CHECK(index_degree(z2, 2) == 1);
  CHECK(index_degree(z2, 3) == 1);
  for (const auto& spec : all_families()) CHECK(degree(spec, zero(spec)) == kDegreeZero);
  CHECK(degree(GroupSpec::zq_infinity(5), GroupElement::fraction(7, 2)) == 1);
  CHECK(degree(GroupSpec::integers(), GroupElement::integer(-8)) == 3);
}

TEST_CASE("errors") {
  auto z = GroupSpec::integers();
  CHECK_THROWS_AS(index_to_element(z, 0), std::domain_error);
  CHECK_THROWS_AS(element_to_index(z, GroupElement::integer(0)), std::domain_error);
  CHECK_THROWS_AS(element_to_index(z, GroupElement::integer(-4)), std::domain_error);
  CHECK_THROWS_AS(element_to_index(GroupSpec::direct_sum_zq(3), zero(GroupSpec::direct_sum_zq(3))), std::domain_error);
  CHECK_THROWS_AS(GroupSpec::zq_infinity(9), std::invalid_argument);
  CHECK_THROWS_AS(GroupSpec::direct_sum_zq(1), std::invalid_argument);
  CHECK_THROWS_AS(GroupSpec::direct_sum_zqn({3, 4}), std::invalid_argument);
  CHECK_THROWS_AS(GroupSpec::direct_sum_zqn({5, 3}), std::invalid_argument);
  CHECK_THROWS_AS(GroupSpec::direct_sum_zqn({1, 3}), std::invalid_argument);
  auto small = GroupSpec::direct_sum_zqn({3, 5});
  CHECK(small.max_index() == 14);
  CHECK_NOTHROW(index_to_element(small, 14));
  CHECK_THROWS_AS(index_to_element(small, 15), std::out_of_range);
  // products of the first 20 odd primes do not fit in 64 bits
  auto big = GroupSpec::direct_sum_odd_primes(20);
  CHECK(big.max_index() < std::numeric_limits<CharIndex>::max());
  CHECK_THROWS_AS(index_to_element(big, big.max_index() + 1), std::out_of_range);
}

TEST_CASE("spec text round trip") {
  for (const char* text : {"z", "sum-zq:q=3", "zq-inf:q=5", "sum-zqn:qs=3,5,7", "sum-zqn:gen=odd-primes:count=8"}) {
    auto spec = GroupSpec::parse(text);
    CHECK(spec.to_string() == text);
    CHECK(GroupSpec::parse(spec.to_string()) == spec);
  }
  CHECK(GroupSpec::parse("sum-zqn:gen=odd-primes:count=4").qs() == std::vector<std::uint64_t>{3, 5, 7, 11});
  for (const char* bad : {"", "q", "sum-zq", "sum-zq:q=x", "zq-inf:q=4", "sum-zqn:qs=3,3", "sum-zqn:gen=evens:count=3"}) {
    CHECK_THROWS_AS(GroupSpec::parse(bad), std::invalid_argument);
  }
}

TEST_CASE("round trip n <= 1e5 in every family") {
  for (const auto& spec : all_families()) {
    CAPTURE(spec.to_string());
    CharIndex limit = std::min<CharIndex>(100000, spec.max_index());
    bool ok = true;
    for (CharIndex n = 1; n <= limit && ok; ++n) {
      auto e = index_to_element(spec, n);
      ok = element_to_index(spec, e) == n && index_degree(spec, n) == degree(spec, e);
      if (!ok) CAPTURE(n);
    }
    CHECK(ok);
  }
}

TEST_CASE("bijections agree with forward listings") {
  const std::size_t count = 100000;
  for (std::uint64_t q : {2u, 3u, 10u}) {
    auto spec = GroupSpec::direct_sum_zq(q);
    bool ok = true;
    for (CharIndex n = 1; n <= count && ok; ++n) ok = index_to_element(spec, n) == GroupElement::digits(oracle::base_digits(n, q));
    CHECK(ok);
  }
  for (std::uint64_t q : {2u, 5u, 7u}) {
    auto spec = GroupSpec::zq_infinity(q);
    auto list = oracle::pruefer_listing(q, count);
    bool ok = true;
    for (std::size_t i = 0; i < list.size() && ok; ++i) {
      ok = index_to_element(spec, i + 1) == GroupElement::fraction(list[i].first, list[i].second);
    }
    CHECK(ok);
  }
  for (const auto& qs : {std::vector<std::uint64_t>{3, 5, 7, 11, 13, 17, 19}, std::vector<std::uint64_t>{3, 9, 25, 27}}) {
    auto spec = GroupSpec::direct_sum_zqn(qs);
    auto list = oracle::zqn_listing(qs, count);
    bool ok = true;
    for (std::size_t i = 0; i < list.size() && ok; ++i) ok = index_to_element(spec, i + 1) == GroupElement::digits(list[i]);
    CHECK(ok);
  }
}

TEST_CASE("degree block counts") {
  const CharIndex limit = 100000;
  for (const auto& spec : {GroupSpec::direct_sum_zq(2), GroupSpec::direct_sum_zq(3), GroupSpec::direct_sum_zq(7),
                           GroupSpec::zq_infinity(2), GroupSpec::zq_infinity(3), GroupSpec::zq_infinity(5)}) {
    CAPTURE(spec.to_string());
    std::map<int, std::uint64_t> blocks;
    for (CharIndex n = 1; n <= limit; ++n) ++blocks[index_degree(spec, n)];
    const std::uint64_t q = spec.q();
    std::uint64_t qd = 1;
    for (int d = 0;; ++d, qd *= q) {
      if (qd * q - 1 > limit) break;  // incomplete block
      CHECK(blocks[d] == qd * q - qd);
    }
  }
  auto zqn = GroupSpec::direct_sum_odd_primes(8);
  std::map<int, std::uint64_t> blocks;
  for (CharIndex n = 1; n <= limit; ++n) ++blocks[index_degree(zqn, n)];
  for (int d = 0; zqn.radix_product(d + 1) - 1 <= limit; ++d) {
    CHECK(blocks[d] == (zqn.qs()[static_cast<std::size_t>(d)] - 1) * zqn.radix_product(d));
  }
}

TEST_CASE("interval law for the direct sum of Z(q_n)") {
  auto spec = GroupSpec::direct_sum_odd_primes(8);
  for (CharIndex n = 1; n <= 100000; ++n) {
    auto e = index_to_element(spec, n);
    const auto& digits = e.as_digits();
    auto d = static_cast<int>(digits.size()) - 1;
    auto r = static_cast<std::uint64_t>(std::llabs(digits.back()));
    auto Q = spec.radix_product(d);
    if (!((2 * r - 1) * Q <= n && n < (2 * r + 1) * Q)) {
      FAIL("index " << n << " outside its interval");
    }
    for (std::size_t i = 0; i < digits.size(); ++i) {
      auto half = static_cast<std::int64_t>((spec.qs()[i] - 1) / 2);
      if (digits[i] < -half || digits[i] > half) FAIL("digit out of range at index " << n);
    }
  }
}

TEST_CASE("ultrametric inequality") {
  std::mt19937_64 rng(7);
  for (const auto& spec : all_families()) {
    if (!spec.non_archimedean()) continue;
    CAPTURE(spec.to_string());
    bool ok = true;
    for (int i = 0; i < 10000 && ok; ++i) {
      auto a = random_element(spec, rng, 1000000);
      auto b = random_element(spec, rng, 1000000);
      auto da = degree(spec, a), db = degree(spec, b);
      ok = degree(spec, add(spec, a, b)) <= std::max(da, db) && degree(spec, sub(spec, a, b)) <= std::max(da, db);
    }
    CHECK(ok);
  }
}

TEST_CASE("group laws") {
  std::mt19937_64 rng(11);
  for (const auto& spec : all_families()) {
    CAPTURE(spec.to_string());
    auto z = zero(spec);
    bool ok = true;
    for (int i = 0; i < 10000 && ok; ++i) {
      auto a = random_element(spec, rng, 1000000);
      auto b = random_element(spec, rng, 1000000);
      auto c = random_element(spec, rng, 1000000);
      ok = add(spec, add(spec, a, b), c) == add(spec, a, add(spec, b, c)) && add(spec, a, b) == add(spec, b, a) &&
           add(spec, a, neg(spec, a)) == z && add(spec, a, z) == a && neg(spec, neg(spec, a)) == a;
    }
    CHECK(ok);
  }
}

TEST_CASE("packed arithmetic matches the reference") {
  std::mt19937_64 rng(13);
  for (const auto& spec : all_families()) {
    CAPTURE(spec.to_string());
    const CharIndex limit = std::min<CharIndex>(2000000, spec.max_index());
    auto packed = PackedGroup::covering(spec, limit);
    bool ok = true;
    for (int i = 0; i < 20000 && ok; ++i) {
      auto a = random_element(spec, rng, limit);
      auto b = random_element(spec, rng, limit);
      auto pa = packed.pack(a), pb = packed.pack(b);
      auto sum = add(spec, a, b);
      ok = packed.unpack(pa) == a && packed.key(pa) == target_key(spec, a) && packed.unpack(packed.neg(pa)) == neg(spec, a);
      if (packed.representable(sum)) {
        ok = ok && packed.unpack(packed.add(pa, pb)) == sum && packed.key(packed.add(pa, pb)) == target_key(spec, sum);
      } else {
        ok = ok && spec.family() == Family::Integers;  // only integers can outgrow the packing
      }
      if (ok && !a.is_zero() && (spec.family() != Family::Integers || a.as_integer() > 0)) {
        ok = packed.index(pa) == element_to_index(spec, a);
      }
    }
    CHECK(ok);
    CHECK(packed.unpack(packed.zero()) == zero(spec));
  }
}

TEST_CASE("target keys") {
  for (const auto& spec : all_families()) {
    CHECK(element_from_key(spec, 0) == zero(spec));
    CHECK(target_key(spec, zero(spec)) == 0);
    for (CharIndex n : {1u, 2u, 17u, 4096u}) {
      auto e = index_to_element(spec, n);
      CHECK(target_key(spec, e) == static_cast<std::int64_t>(n));
      CHECK(element_from_key(spec, static_cast<std::int64_t>(n)) == e);
    }
  }
  CHECK(element_from_key(GroupSpec::integers(), -5) == GroupElement::integer(-5));
  CHECK_THROWS(element_from_key(GroupSpec::direct_sum_zq(3), -5));
}

TEST_CASE("primality") {
  std::vector<std::uint64_t> primes;
  for (std::uint64_t n = 0; n < 100; ++n) {
    if (is_prime(n)) primes.push_back(n);
  }
  CHECK(primes == std::vector<std::uint64_t>{2,  3,  5,  7,  11, 13, 17, 19, 23, 29, 31, 37, 41,
                                             43, 47, 53, 59, 61, 67, 71, 73, 79, 83, 89, 97});
  CHECK(is_prime(1000000007));
  CHECK_FALSE(is_prime(1000000007ull * 3));
}
