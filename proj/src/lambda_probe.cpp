#include "bsidon/lambda_probe.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <unordered_map>

namespace bsidon {

namespace {

using u128 = unsigned __int128;

std::uint64_t pow_sat(std::uint64_t base, int e) {
  std::uint64_t r = 1;
  for (int i = 0; i < e; ++i) {
    if (__builtin_mul_overflow(r, base, &r)) return std::numeric_limits<std::uint64_t>::max();
  }
  return r;
}

void check_inputs(std::span<const CharIndex> members, int m) {
  if (m < 1) throw std::invalid_argument("m must be positive");
  for (std::size_t i = 1; i < members.size(); ++i) {
    if (members[i] <= members[i - 1]) throw std::invalid_argument("members must be strictly increasing");
  }
}

PackedGroup packed_for(const GroupSpec& spec, std::span<const CharIndex> members, const GroupElement* target) {
  Degree d = members.empty() ? 0 : index_degree(spec, members.back());
  if (target && spec.family() != Family::Integers && !target->is_zero()) d = std::max(d, degree(spec, *target));
  return PackedGroup(spec, d);
}

// R(x) for all x: ordered `depth`-tuples with repetition and their sums.
std::unordered_map<PackedGroup::Code, std::uint64_t> tuple_sums(const PackedGroup& packed,
                                                               const std::vector<PackedGroup::Code>& codes, int depth) {
  std::unordered_map<PackedGroup::Code, std::uint64_t> cur{{packed.zero(), 1}};
  for (int i = 0; i < depth; ++i) {
    std::unordered_map<PackedGroup::Code, std::uint64_t> next;
    next.reserve(cur.size() * codes.size());
    for (const auto& [c, w] : cur) {
      for (auto x : codes) next[packed.add(c, x)] += w;
    }
    cur = std::move(next);
  }
  return cur;
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

template <class T>
T parse_num(std::string_view s) {
  T v{};
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || p != s.data() + s.size() || s.empty()) {
    throw std::invalid_argument("bad number '" + std::string(s) + "' in window spec");
  }
  return v;
}

}  // namespace

std::uint64_t rudin_count(const GroupSpec& spec, std::span<const CharIndex> members, int m, const GroupElement& target,
                          std::uint64_t budget) {
  check_inputs(members, m);
  if (members.empty()) return 0;
  auto work = pow_sat(members.size(), m - 1);
  if (work > budget) throw BudgetExceeded(work, budget);
  auto packed = packed_for(spec, members, &target);
  if (!packed.representable(target)) return 0;
  std::vector<PackedGroup::Code> codes;
  std::unordered_map<PackedGroup::Code, std::uint64_t> present;
  for (auto n : members) {
    codes.push_back(packed.pack_index(n));
    present[codes.back()] = 1;
  }
  auto goal = packed.pack(target);
  std::uint64_t count = 0;
  for (const auto& [c, w] : tuple_sums(packed, codes, m - 1)) {
    if (present.count(packed.sub(goal, c))) count += w;
  }
  return count;
}

std::uint64_t har_count(const GroupSpec& spec, std::span<const CharIndex> members, int m, const GroupElement& target,
                        std::uint64_t budget) {
  check_inputs(members, m);
  const auto k = members.size();
  if (k < static_cast<std::size_t>(m)) return 0;
  auto work = pow_sat(k, m - 1);
  if (work > budget) throw BudgetExceeded(work, budget);
  auto packed = packed_for(spec, members, &target);
  if (!packed.representable(target)) return 0;
  std::vector<PackedGroup::Code> codes;
  std::unordered_map<PackedGroup::Code, std::size_t> position;
  for (std::size_t i = 0; i < k; ++i) {
    codes.push_back(packed.pack_index(members[i]));
    position[codes.back()] = i;
  }
  const auto goal = packed.pack(target);
  std::vector<char> used(k, 0);
  std::uint64_t count = 0;
  // position j (1-based) carries sign (-1)^j
  auto dfs = [&](auto&& self, int j, PackedGroup::Code sum) -> void {
    const bool minus = j % 2 == 1;
    if (j == m) {
      auto rest = packed.sub(goal, sum);
      if (minus) rest = packed.neg(rest);
      auto it = position.find(rest);
      if (it != position.end() && !used[it->second]) ++count;
      return;
    }
    for (std::size_t i = 0; i < k; ++i) {
      if (used[i]) continue;
      used[i] = 1;
      self(self, j + 1, minus ? packed.sub(sum, codes[i]) : packed.add(sum, codes[i]));
      used[i] = 0;
    }
  };
  dfs(dfs, 1, packed.zero());
  return count;
}

std::uint64_t trivial_solutions(std::uint64_t k, int m) {
  if (m < 1) throw std::invalid_argument("m must be positive");
  // Sum over multiplicity profiles (partitions of m): number of multisets
  // with that profile times (m! / prod parts!)^2.
  std::vector<int> parts;
  u128 total = 0;
  u128 m_fact = 1;
  for (int i = 2; i <= m; ++i) m_fact *= static_cast<u128>(i);
  auto visit = [&] {
    auto r = parts.size();
    if (r > k) return;
    u128 pick = 1;  // k! / (k - r)!
    for (std::size_t i = 0; i < r; ++i) pick *= static_cast<u128>(k - i);
    u128 same = 1;  // prod over part sizes of (count of that size)!
    u128 perms = m_fact;
    for (std::size_t i = 0; i < r;) {
      auto j = i;
      while (j < r && parts[j] == parts[i]) ++j;
      for (std::size_t c = 2; c <= j - i; ++c) same *= c;
      i = j;
    }
    for (int part : parts) {
      for (int c = 2; c <= part; ++c) perms /= static_cast<u128>(c);
    }
    total += pick / same * perms * perms;
  };
  auto gen = [&](auto&& self, int remaining, int max_part) -> void {
    if (remaining == 0) {
      visit();
      return;
    }
    for (int p = std::min(remaining, max_part); p >= 1; --p) {
      parts.push_back(p);
      self(self, remaining - p, p);
      parts.pop_back();
    }
  };
  gen(gen, m, m);
  if (total > std::numeric_limits<std::uint64_t>::max()) throw std::overflow_error("trivial solution count exceeds 64 bits");
  return static_cast<std::uint64_t>(total);
}

MomentReport moment_report(const GroupSpec& spec, std::span<const CharIndex> members, int m, CharIndex prefix_n,
                           std::uint64_t budget) {
  check_inputs(members, m);
  MomentReport r;
  r.prefix_n = prefix_n;
  auto end = std::upper_bound(members.begin(), members.end(), prefix_n);
  std::span<const CharIndex> prefix(members.begin(), end);
  r.k = prefix.size();
  r.trivial_floor = trivial_solutions(r.k, m);
  if (r.k == 0) return r;
  auto work = pow_sat(r.k, m);
  if (work > budget) throw BudgetExceeded(work, budget);
  auto packed = packed_for(spec, prefix, nullptr);
  std::vector<PackedGroup::Code> codes;
  for (auto n : prefix) codes.push_back(packed.pack_index(n));
  u128 solutions = 0;
  for (const auto& [c, w] : tuple_sums(packed, codes, m)) solutions += static_cast<u128>(w) * w;
  if (solutions > std::numeric_limits<std::uint64_t>::max()) throw std::overflow_error("solution count exceeds 64 bits");
  r.solution_count = static_cast<std::uint64_t>(solutions);
  r.ratio = static_cast<double>(r.solution_count) / std::pow(static_cast<double>(r.k), m);
  return r;
}

WitnessPoint density_witness(const GroupSpec& spec, std::span<const CharIndex> members, const DensityWindow& y,
                             const Rational& p) {
  if (p.num <= 2 * p.den) throw std::invalid_argument("p must exceed 2");
  WitnessPoint w;
  if (const auto* ap = std::get_if<Progression>(&y)) {
    if (spec.family() != Family::Integers) throw std::invalid_argument("progressions are only supported in z");
    if (ap->step == 0) throw std::invalid_argument("progression step must be nonzero");
    w.size = ap->length;
    for (auto n : members) {
      auto offset = static_cast<std::int64_t>(n) - ap->start;
      if (offset % ap->step != 0) continue;
      auto idx = offset / ap->step;
      if (idx >= 1 && static_cast<std::uint64_t>(idx) <= ap->length) ++w.card;
    }
  } else {
    const auto& cut = std::get<SubgroupCut>(y);
    if (spec.family() == Family::Integers) throw std::invalid_argument("z has no finite subgroups to probe");
    if (cut.degree < 1) throw std::invalid_argument("subgroup degree must be at least 1");
    w.size = spec.family() == Family::DirectSumZqn ? spec.radix_product(cut.degree) : pow_sat(spec.q(), cut.degree);
    if (w.size == std::numeric_limits<std::uint64_t>::max()) throw std::out_of_range("subgroup cardinality exceeds 64 bits");
    w.card = static_cast<std::uint64_t>(std::lower_bound(members.begin(), members.end(), w.size) - members.begin());
  }
  w.witness = static_cast<double>(w.card) / std::pow(static_cast<double>(w.size), 2.0 / p.value());
  return w;
}

LambdaCheck lambda_density_check(const GroupSpec& spec, std::span<const CharIndex> members,
                                 std::span<const DensityWindow> ys, const Rational& p) {
  LambdaCheck out;
  for (const auto& y : ys) out.points.push_back(density_witness(spec, members, y, p));
  out.increasing = !out.points.empty();
  for (std::size_t i = 1; i < out.points.size(); ++i) {
    if (!(out.points[i].witness > out.points[i - 1].witness)) out.increasing = false;
  }
  return out;
}

std::vector<DensityWindow> parse_density_windows(std::string_view text) {
  auto parts = split(text, ':');
  std::vector<DensityWindow> out;
  auto field = [&](std::string_view key) -> std::string_view {
    for (std::size_t i = 1; i < parts.size(); ++i) {
      auto eq = parts[i].find('=');
      if (eq != std::string_view::npos && parts[i].substr(0, eq) == key) return parts[i].substr(eq + 1);
    }
    throw std::invalid_argument("window spec lacks '" + std::string(key) + "='");
  };
  if (parts[0] == "ap") {
    auto a = parse_num<std::int64_t>(field("a"));
    auto d = parse_num<std::int64_t>(field("d"));
    for (auto n : split(field("n"), ',')) out.push_back(Progression{a, d, parse_num<std::uint64_t>(n)});
  } else if (parts[0] == "subgroup") {
    for (auto d : split(field("deg"), ',')) out.push_back(SubgroupCut{parse_num<int>(d)});
  } else {
    throw std::invalid_argument("unknown window spec '" + std::string(text) + "'");
  }
  return out;
}

}  // namespace bsidon
