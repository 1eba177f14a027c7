#include "bsidon/group.hpp"

#include <bit>
#include <charconv>
#include <sstream>
#include <stdexcept>

namespace bsidon {

namespace {

using u128 = unsigned __int128;
constexpr std::uint64_t kMaxKey = static_cast<std::uint64_t>(std::numeric_limits<std::int64_t>::max());

std::uint64_t parse_u64(std::string_view s, std::string_view what) {
  std::uint64_t v = 0;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || p != s.data() + s.size()) {
    throw std::invalid_argument("bad integer for " + std::string(what) + ": '" + std::string(s) + "'");
  }
  return v;
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    auto pos = s.find(sep, start);
    out.push_back(s.substr(start, pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

// Largest power of q not exceeding n, and its exponent.
std::pair<std::uint64_t, int> floor_power(std::uint64_t q, std::uint64_t n) {
  std::uint64_t p = 1;
  int d = 0;
  while (static_cast<u128>(p) * q <= n) {
    p *= q;
    ++d;
  }
  return {p, d};
}

std::uint64_t checked_pow(std::uint64_t q, int e) {
  u128 p = 1;
  for (int i = 0; i < e; ++i) {
    p *= q;
    if (p > std::numeric_limits<std::uint64_t>::max()) throw std::out_of_range("power exceeds 64 bits");
  }
  return static_cast<std::uint64_t>(p);
}

void require_family(const GroupSpec& spec, const GroupElement& e) {
  bool ok = false;
  switch (spec.family()) {
    case Family::Integers: ok = e.is_integer(); break;
    case Family::DirectSumZq:
    case Family::DirectSumZqn: ok = e.is_digits(); break;
    case Family::ZqInfinity: ok = e.is_fraction(); break;
  }
  if (!ok) throw std::invalid_argument("element does not belong to group " + spec.to_string());
}

std::int64_t symmetric(std::uint64_t residue, std::uint64_t q) {
  auto half = (q - 1) / 2;
  return residue <= half ? static_cast<std::int64_t>(residue)
                         : static_cast<std::int64_t>(residue) - static_cast<std::int64_t>(q);
}

std::uint64_t residue_of(std::int64_t digit, std::uint64_t q) {
  auto sq = static_cast<std::int64_t>(q);
  auto r = digit % sq;
  if (r < 0) r += sq;
  return static_cast<std::uint64_t>(r);
}

}  // namespace

bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  if (n % 2 == 0) return n == 2;
  for (std::uint64_t f = 3; f <= n / f; f += 2) {
    if (n % f == 0) return false;
  }
  return true;
}

// ---------------------------------------------------------------------------
// GroupSpec

GroupSpec GroupSpec::integers() { return GroupSpec{}; }

GroupSpec GroupSpec::direct_sum_zq(std::uint64_t q) {
  if (q < 2) throw std::invalid_argument("sum-zq requires q >= 2");
  GroupSpec g;
  g.family_ = Family::DirectSumZq;
  g.q_ = q;
  return g;
}

GroupSpec GroupSpec::zq_infinity(std::uint64_t q) {
  if (!is_prime(q)) throw std::invalid_argument("zq-inf requires prime q, got " + std::to_string(q));
  GroupSpec g;
  g.family_ = Family::ZqInfinity;
  g.q_ = q;
  return g;
}

GroupSpec GroupSpec::direct_sum_zqn(std::vector<std::uint64_t> qs) {
  if (qs.empty()) throw std::invalid_argument("sum-zqn requires at least one modulus");
  for (std::size_t i = 0; i < qs.size(); ++i) {
    if (qs[i] < 3 || qs[i] % 2 == 0) throw std::invalid_argument("sum-zqn moduli must be odd and >= 3");
    if (i > 0 && qs[i] <= qs[i - 1]) throw std::invalid_argument("sum-zqn moduli must be strictly increasing");
  }
  GroupSpec g;
  g.family_ = Family::DirectSumZqn;
  g.qs_ = std::move(qs);
  g.products_.push_back(1);
  for (auto q : g.qs_) {
    u128 next = static_cast<u128>(g.products_.back()) * q;
    if (next > kMaxKey) break;
    g.products_.push_back(static_cast<std::uint64_t>(next));
  }
  return g;
}

GroupSpec GroupSpec::direct_sum_odd_primes(int count) {
  if (count < 1) throw std::invalid_argument("odd-primes generator needs count >= 1");
  std::vector<std::uint64_t> qs;
  for (std::uint64_t p = 3; static_cast<int>(qs.size()) < count; p += 2) {
    if (is_prime(p)) qs.push_back(p);
  }
  auto g = direct_sum_zqn(std::move(qs));
  g.odd_prime_count_ = count;
  return g;
}

GroupSpec GroupSpec::parse(std::string_view text) {
  auto parts = split(text, ':');
  auto name = parts[0];
  auto value_of = [&](std::string_view key) -> std::optional<std::string_view> {
    for (std::size_t i = 1; i < parts.size(); ++i) {
      auto eq = parts[i].find('=');
      if (eq == std::string_view::npos) throw std::invalid_argument("malformed group option '" + std::string(parts[i]) + "'");
      if (parts[i].substr(0, eq) == key) return parts[i].substr(eq + 1);
    }
    return std::nullopt;
  };
  if (name == "z" && parts.size() == 1) return integers();
  if (name == "sum-zq") {
    auto q = value_of("q");
    if (!q || parts.size() != 2) throw std::invalid_argument("expected sum-zq:q=<int>");
    return direct_sum_zq(parse_u64(*q, "q"));
  }
  if (name == "zq-inf") {
    auto q = value_of("q");
    if (!q || parts.size() != 2) throw std::invalid_argument("expected zq-inf:q=<prime>");
    return zq_infinity(parse_u64(*q, "q"));
  }
  if (name == "sum-zqn") {
    if (auto qs = value_of("qs"); qs && parts.size() == 2) {
      std::vector<std::uint64_t> v;
      for (auto s : split(*qs, ',')) v.push_back(parse_u64(s, "qs"));
      return direct_sum_zqn(std::move(v));
    }
    auto gen = value_of("gen");
    auto count = value_of("count");
    if (gen && count && parts.size() == 3) {
      if (*gen != "odd-primes") throw std::invalid_argument("unknown sum-zqn generator '" + std::string(*gen) + "'");
      return direct_sum_odd_primes(static_cast<int>(parse_u64(*count, "count")));
    }
    throw std::invalid_argument("expected sum-zqn:qs=<list> or sum-zqn:gen=odd-primes:count=<k>");
  }
  throw std::invalid_argument("unknown group '" + std::string(text) + "'");
}

std::string GroupSpec::to_string() const {
  switch (family_) {
    case Family::Integers: return "z";
    case Family::DirectSumZq: return "sum-zq:q=" + std::to_string(q_);
    case Family::ZqInfinity: return "zq-inf:q=" + std::to_string(q_);
    case Family::DirectSumZqn: {
      if (odd_prime_count_) return "sum-zqn:gen=odd-primes:count=" + std::to_string(*odd_prime_count_);
      std::string s = "sum-zqn:qs=";
      for (std::size_t i = 0; i < qs_.size(); ++i) {
        if (i) s += ',';
        s += std::to_string(qs_[i]);
      }
      return s;
    }
  }
  return {};
}

CharIndex GroupSpec::max_index() const {
  if (family_ == Family::DirectSumZqn) return products_.back() - 1;
  return kMaxKey;
}

// ---------------------------------------------------------------------------
// Elements

GroupElement GroupElement::digits(Digits d) {
  while (!d.empty() && d.back() == 0) d.pop_back();
  return GroupElement(Payload{std::move(d)});
}

bool GroupElement::is_zero() const {
  if (is_integer()) return as_integer() == 0;
  if (is_digits()) return as_digits().empty();
  return as_fraction().numerator == 0;
}

GroupElement zero(const GroupSpec& spec) {
  switch (spec.family()) {
    case Family::Integers: return GroupElement::integer(0);
    case Family::DirectSumZq:
    case Family::DirectSumZqn: return GroupElement::digits({});
    case Family::ZqInfinity: return GroupElement::fraction(0, 0);
  }
  return {};
}

GroupElement index_to_element(const GroupSpec& spec, CharIndex n) {
  if (n == 0) throw std::domain_error("character indices start at 1");
  if (n > spec.max_index()) {
    throw std::out_of_range("index " + std::to_string(n) + " exceeds capacity of " + spec.to_string());
  }
  switch (spec.family()) {
    case Family::Integers: return GroupElement::integer(static_cast<std::int64_t>(n));
    case Family::DirectSumZq: {
      GroupElement::Digits d;
      for (auto x = n; x > 0; x /= spec.q()) d.push_back(static_cast<std::int64_t>(x % spec.q()));
      return GroupElement::digits(std::move(d));
    }
    case Family::ZqInfinity: {
      auto q = spec.q();
      auto [p, d] = floor_power(q, n);
      auto k = n - p;
      auto j = k + k / (q - 1) + 1;
      return GroupElement::fraction(j, d + 1);
    }
    case Family::DirectSumZqn: {
      int d = index_degree(spec, n);
      auto block = spec.radix_product(d);
      auto x = n - block;
      auto r = x / (2 * block) + 1;
      auto rem = x % (2 * block);
      bool negative = rem >= block;
      auto t = rem % block;
      GroupElement::Digits digits(static_cast<std::size_t>(d) + 1);
      for (int i = 0; i < d; ++i) {
        auto qi = spec.qs()[static_cast<std::size_t>(i)];
        digits[static_cast<std::size_t>(i)] =
            static_cast<std::int64_t>(t % qi) - static_cast<std::int64_t>((qi - 1) / 2);
        t /= qi;
      }
      digits[static_cast<std::size_t>(d)] = negative ? -static_cast<std::int64_t>(r) : static_cast<std::int64_t>(r);
      return GroupElement::digits(std::move(digits));
    }
  }
  return {};
}

CharIndex element_to_index(const GroupSpec& spec, const GroupElement& e) {
  require_family(spec, e);
  if (e.is_zero()) throw std::domain_error("the zero element has no character index");
  switch (spec.family()) {
    case Family::Integers: {
      auto v = e.as_integer();
      if (v < 0) throw std::domain_error("negative integers have no character index");
      return static_cast<CharIndex>(v);
    }
    case Family::DirectSumZq: {
      u128 n = 0;
      u128 w = 1;
      for (auto digit : e.as_digits()) {
        n += w * static_cast<std::uint64_t>(digit);
        w *= spec.q();
        if (n > kMaxKey) throw std::out_of_range("element index exceeds 63 bits");
      }
      return static_cast<CharIndex>(n);
    }
    case Family::ZqInfinity: {
      const auto& f = e.as_fraction();
      auto q = spec.q();
      auto block = checked_pow(q, f.exponent - 1);
      auto k = f.numerator - 1 - f.numerator / q;
      if (block > kMaxKey - k) throw std::out_of_range("element index exceeds 63 bits");
      return block + k;
    }
    case Family::DirectSumZqn: {
      const auto& digits = e.as_digits();
      auto d = static_cast<int>(digits.size()) - 1;
      auto block = spec.radix_product(d);
      std::uint64_t t = 0;
      for (int i = 0; i < d; ++i) {
        auto qi = spec.qs()[static_cast<std::size_t>(i)];
        auto shifted = digits[static_cast<std::size_t>(i)] + static_cast<std::int64_t>((qi - 1) / 2);
        t += static_cast<std::uint64_t>(shifted) * spec.radix_product(i);
      }
      auto top = digits.back();
      auto r = static_cast<std::uint64_t>(top < 0 ? -top : top);
      return (2 * r - 1) * block + (top < 0 ? block : 0) + t;
    }
  }
  return 0;
}

GroupElement add(const GroupSpec& spec, const GroupElement& a, const GroupElement& b) {
  require_family(spec, a);
  require_family(spec, b);
  switch (spec.family()) {
    case Family::Integers: {
      std::int64_t s = 0;
      if (__builtin_add_overflow(a.as_integer(), b.as_integer(), &s)) throw std::overflow_error("integer sum overflows");
      return GroupElement::integer(s);
    }
    case Family::DirectSumZq:
    case Family::DirectSumZqn: {
      const auto& x = a.as_digits();
      const auto& y = b.as_digits();
      GroupElement::Digits out(std::max(x.size(), y.size()));
      for (std::size_t i = 0; i < out.size(); ++i) {
        auto dx = i < x.size() ? x[i] : 0;
        auto dy = i < y.size() ? y[i] : 0;
        if (spec.family() == Family::DirectSumZq) {
          out[i] = static_cast<std::int64_t>((static_cast<std::uint64_t>(dx + dy)) % spec.q());
        } else {
          if (i >= spec.qs().size()) throw std::out_of_range("digit beyond the supplied moduli");
          auto qi = spec.qs()[i];
          out[i] = symmetric(residue_of(dx + dy, qi), qi);
        }
      }
      return GroupElement::digits(std::move(out));
    }
    case Family::ZqInfinity: {
      const auto& x = a.as_fraction();
      const auto& y = b.as_fraction();
      if (x.numerator == 0) return b;
      if (y.numerator == 0) return a;
      auto q = spec.q();
      int top = std::max(x.exponent, y.exponent);
      u128 modulus = checked_pow(q, top);
      u128 sum = static_cast<u128>(x.numerator) * checked_pow(q, top - x.exponent) +
                 static_cast<u128>(y.numerator) * checked_pow(q, top - y.exponent);
      auto num = static_cast<std::uint64_t>(sum % modulus);
      if (num == 0) return zero(spec);
      while (num % q == 0) {
        num /= q;
        --top;
      }
      return GroupElement::fraction(num, top);
    }
  }
  return {};
}

GroupElement neg(const GroupSpec& spec, const GroupElement& a) {
  require_family(spec, a);
  switch (spec.family()) {
    case Family::Integers:
      if (a.as_integer() == std::numeric_limits<std::int64_t>::min()) throw std::overflow_error("integer negation overflows");
      return GroupElement::integer(-a.as_integer());
    case Family::DirectSumZq: {
      auto d = a.as_digits();
      for (auto& x : d) x = x == 0 ? 0 : static_cast<std::int64_t>(spec.q()) - x;
      return GroupElement::digits(std::move(d));
    }
    case Family::DirectSumZqn: {
      auto d = a.as_digits();
      for (auto& x : d) x = -x;
      return GroupElement::digits(std::move(d));
    }
    case Family::ZqInfinity: {
      const auto& f = a.as_fraction();
      if (f.numerator == 0) return a;
      return GroupElement::fraction(checked_pow(spec.q(), f.exponent) - f.numerator, f.exponent);
    }
  }
  return {};
}

Degree degree(const GroupSpec& spec, const GroupElement& e) {
  require_family(spec, e);
  if (e.is_zero()) return kDegreeZero;
  switch (spec.family()) {
    case Family::Integers: {
      auto v = e.as_integer();
      auto mag = v < 0 ? static_cast<std::uint64_t>(-(v + 1)) + 1 : static_cast<std::uint64_t>(v);
      return static_cast<Degree>(std::bit_width(mag)) - 1;
    }
    case Family::DirectSumZq:
    case Family::DirectSumZqn: return static_cast<Degree>(e.as_digits().size()) - 1;
    case Family::ZqInfinity: return e.as_fraction().exponent - 1;
  }
  return kDegreeZero;
}

Degree index_degree(const GroupSpec& spec, CharIndex n) {
  if (n == 0) throw std::domain_error("character indices start at 1");
  if (n > spec.max_index()) {
    throw std::out_of_range("index " + std::to_string(n) + " exceeds capacity of " + spec.to_string());
  }
  switch (spec.family()) {
    case Family::Integers: return static_cast<Degree>(std::bit_width(n)) - 1;
    case Family::DirectSumZq:
    case Family::ZqInfinity: return floor_power(spec.q(), n).second;
    case Family::DirectSumZqn: {
      int d = 0;
      while (spec.radix_product(d + 1) <= n) ++d;
      return d;
    }
  }
  return kDegreeZero;
}

std::int64_t target_key(const GroupSpec& spec, const GroupElement& e) {
  if (spec.family() == Family::Integers) {
    require_family(spec, e);
    return e.as_integer();
  }
  if (e.is_zero()) return 0;
  return static_cast<std::int64_t>(element_to_index(spec, e));
}

GroupElement element_from_key(const GroupSpec& spec, std::int64_t key) {
  if (spec.family() == Family::Integers) return GroupElement::integer(key);
  if (key < 0) throw std::domain_error("target keys are non-negative outside the integers");
  if (key == 0) return zero(spec);
  return index_to_element(spec, static_cast<CharIndex>(key));
}

std::string to_string(const GroupSpec& spec, const GroupElement& e) {
  require_family(spec, e);
  if (e.is_integer()) return std::to_string(e.as_integer());
  if (e.is_fraction()) {
    const auto& f = e.as_fraction();
    if (f.numerator == 0) return "0";
    return std::to_string(f.numerator) + "/" + std::to_string(spec.q()) + "^" + std::to_string(f.exponent);
  }
  std::ostringstream os;
  os << '(';
  const auto& d = e.as_digits();
  for (std::size_t i = 0; i < d.size(); ++i) os << (i ? "," : "") << d[i];
  os << ')';
  return os.str();
}

// ---------------------------------------------------------------------------
// PackedGroup

PackedGroup::PackedGroup(GroupSpec spec, Degree max_degree) : spec_(std::move(spec)), max_degree_(max_degree) {
  if (spec_.family() == Family::Integers) {
    max_degree_ = 63;
    return;
  }
  if (max_degree_ < 0) max_degree_ = 0;
  auto digits = static_cast<std::size_t>(max_degree_) + 1;
  switch (spec_.family()) {
    case Family::DirectSumZq: {
      u128 w = 1;
      for (std::size_t i = 0; i < digits; ++i) {
        radices_.push_back(spec_.q());
        weights_.push_back(static_cast<std::uint64_t>(w));
        w *= spec_.q();
        if (w > std::numeric_limits<std::uint64_t>::max()) throw std::out_of_range("packed sum-zq code exceeds 64 bits");
      }
      break;
    }
    case Family::DirectSumZqn: {
      if (digits > spec_.qs().size()) throw std::out_of_range("packed sum-zqn degree exceeds the supplied moduli");
      // radix_product throws past 63 bits, so every code fits.
      (void)spec_.radix_product(static_cast<int>(digits));
      for (std::size_t i = 0; i < digits; ++i) {
        radices_.push_back(spec_.qs()[i]);
        weights_.push_back(spec_.radix_product(static_cast<int>(i)));
      }
      break;
    }
    case Family::ZqInfinity: {
      modulus_ = checked_pow(spec_.q(), max_degree_ + 1);
      if (modulus_ > (std::uint64_t{1} << 63)) throw std::out_of_range("packed zq-inf modulus exceeds 63 bits");
      break;
    }
    case Family::Integers: break;
  }
}

PackedGroup PackedGroup::covering(const GroupSpec& spec, CharIndex n) {
  return PackedGroup(spec, n == 0 ? 0 : index_degree(spec, n));
}

bool PackedGroup::representable(const GroupElement& e) const {
  if (spec_.family() == Family::Integers) return e.is_integer();
  return degree(spec_, e) <= max_degree_;
}

PackedGroup::Code PackedGroup::pack(const GroupElement& e) const {
  require_family(spec_, e);
  if (!representable(e)) throw std::out_of_range("element degree exceeds packed range");
  switch (spec_.family()) {
    case Family::Integers: return std::bit_cast<Code>(e.as_integer());
    case Family::DirectSumZq:
    case Family::DirectSumZqn: {
      Code c = 0;
      const auto& d = e.as_digits();
      for (std::size_t i = 0; i < d.size(); ++i) c += residue_of(d[i], radices_[i]) * weights_[i];
      return c;
    }
    case Family::ZqInfinity: {
      const auto& f = e.as_fraction();
      if (f.numerator == 0) return 0;
      return f.numerator * checked_pow(spec_.q(), max_degree_ + 1 - f.exponent);
    }
  }
  return 0;
}

GroupElement PackedGroup::unpack(Code c) const {
  switch (spec_.family()) {
    case Family::Integers: return GroupElement::integer(std::bit_cast<std::int64_t>(c));
    case Family::DirectSumZq:
    case Family::DirectSumZqn: {
      GroupElement::Digits d;
      for (std::size_t i = 0; i < radices_.size() && c > 0; ++i) {
        auto r = c % radices_[i];
        c /= radices_[i];
        d.push_back(spec_.family() == Family::DirectSumZq ? static_cast<std::int64_t>(r) : symmetric(r, radices_[i]));
      }
      return GroupElement::digits(std::move(d));
    }
    case Family::ZqInfinity: {
      if (c == 0) return bsidon::zero(spec_);
      int exponent = max_degree_ + 1;
      while (c % spec_.q() == 0) {
        c /= spec_.q();
        --exponent;
      }
      return GroupElement::fraction(c, exponent);
    }
  }
  return {};
}

PackedGroup::Code PackedGroup::add(Code a, Code b) const {
  switch (spec_.family()) {
    case Family::Integers: return a + b;
    case Family::ZqInfinity: {
      auto s = a + b;
      return s >= modulus_ ? s - modulus_ : s;
    }
    case Family::DirectSumZq:
      if (spec_.q() == 2) return a ^ b;
      [[fallthrough]];
    case Family::DirectSumZqn: {
      Code out = 0;
      for (std::size_t i = 0; i < radices_.size() && (a | b) != 0; ++i) {
        auto r = radices_[i];
        auto s = a % r + b % r;
        a /= r;
        b /= r;
        out += (s >= r ? s - r : s) * weights_[i];
      }
      return out;
    }
  }
  return 0;
}

PackedGroup::Code PackedGroup::neg(Code a) const {
  switch (spec_.family()) {
    case Family::Integers: return Code{0} - a;
    case Family::ZqInfinity: return a == 0 ? 0 : modulus_ - a;
    case Family::DirectSumZq:
      if (spec_.q() == 2) return a;
      [[fallthrough]];
    case Family::DirectSumZqn: {
      Code out = 0;
      for (std::size_t i = 0; i < radices_.size() && a != 0; ++i) {
        auto r = radices_[i];
        auto d = a % r;
        a /= r;
        out += (d == 0 ? 0 : r - d) * weights_[i];
      }
      return out;
    }
  }
  return 0;
}

std::int64_t PackedGroup::key(Code c) const {
  switch (spec_.family()) {
    case Family::Integers: return std::bit_cast<std::int64_t>(c);
    case Family::DirectSumZq: return static_cast<std::int64_t>(c);
    default: return static_cast<std::int64_t>(index(c));
  }
}

CharIndex PackedGroup::index(Code c) const {
  switch (spec_.family()) {
    case Family::Integers: {
      auto v = std::bit_cast<std::int64_t>(c);
      return v > 0 ? static_cast<CharIndex>(v) : 0;
    }
    case Family::DirectSumZq: return c;
    default: {
      if (c == 0) return 0;
      return element_to_index(spec_, unpack(c));
    }
  }
}

}  // namespace bsidon
