#include "bsidon/rep_engine.hpp"

#include <algorithm>
#include <unordered_map>

#include "bsidon/detail/parallel.hpp"

namespace bsidon {

namespace {

constexpr std::uint64_t kSaturated = std::numeric_limits<std::uint64_t>::max();

std::uint64_t sat_mul(std::uint64_t a, std::uint64_t b) {
  std::uint64_t r = 0;
  return __builtin_mul_overflow(a, b, &r) ? kSaturated : r;
}

std::uint64_t sat_add(std::uint64_t a, std::uint64_t b) {
  std::uint64_t r = 0;
  return __builtin_add_overflow(a, b, &r) ? kSaturated : r;
}

std::uint64_t binomial_sat(std::uint64_t n, std::uint64_t k) {
  if (k > n) return 0;
  k = std::min(k, n - k);
  unsigned __int128 r = 1;
  for (std::uint64_t i = 1; i <= k; ++i) {
    r = r * (n - k + i) / i;
    if (r > kSaturated) return kSaturated;
  }
  return static_cast<std::uint64_t>(r);
}

std::uint64_t signed_blocks(std::size_t k, int size) {
  if (size <= 0) return 0;
  return sat_mul(std::uint64_t{1} << size, binomial_sat(k, static_cast<std::uint64_t>(size)));
}

void require_sorted(std::span<const CharIndex> members) {
  for (std::size_t i = 0; i < members.size(); ++i) {
    if (members[i] == 0) throw std::invalid_argument("character indices start at 1");
    if (i > 0 && members[i] <= members[i - 1]) throw std::invalid_argument("members must be strictly increasing");
  }
}

void require_m(int m) {
  if (m < 2 || m > 62) throw std::invalid_argument("m must lie in [2, 62]");
}

PackedGroup packed_for(const GroupSpec& spec, std::span<const CharIndex> members) {
  return PackedGroup::covering(spec, members.empty() ? 1 : members.back());
}

// Per-worker accumulator: code -> slot, counts stored by_t with stride m+1.
struct Accumulator {
  explicit Accumulator(int m) : width(static_cast<std::size_t>(m) + 1) {}
  void record(PackedGroup::Code code, int plus) {
    auto [it, inserted] = slots.try_emplace(code, counts.size() / width);
    if (inserted) counts.resize(counts.size() + width, 0);
    ++counts[it->second * width + static_cast<std::size_t>(plus)];
  }
  std::size_t width;
  std::unordered_map<PackedGroup::Code, std::size_t> slots;
  std::vector<std::uint64_t> counts;
};

}  // namespace

// ---------------------------------------------------------------------------
// RepHistogram

std::optional<std::size_t> RepHistogram::find(std::int64_t key) const {
  auto it = std::lower_bound(targets_.begin(), targets_.end(), key);
  if (it == targets_.end() || *it != key) return std::nullopt;
  return static_cast<std::size_t>(it - targets_.begin());
}

std::uint64_t RepHistogram::mass() const {
  std::uint64_t s = 0;
  for (std::size_t i = 0; i < size(); ++i) s += total(i);
  return s;
}

void RepHistogram::push(std::int64_t key, std::span<const std::uint64_t> by_t) {
  if (by_t.size() != static_cast<std::size_t>(m_) + 1) throw std::invalid_argument("breakdown width must be m + 1");
  if (!targets_.empty() && key <= targets_.back()) throw std::invalid_argument("histogram keys must ascend");
  targets_.push_back(key);
  std::uint64_t total = 0;
  for (auto c : by_t) total += c;
  counts_.push_back(total);
  counts_.insert(counts_.end(), by_t.begin(), by_t.end());
}

// ---------------------------------------------------------------------------

std::uint64_t representation_cost(std::size_t k, int m) { return signed_blocks(k, m); }

RepCount count_target(const GroupSpec& spec, std::span<const CharIndex> members, int m, const GroupElement& target) {
  require_m(m);
  require_sorted(members);
  RepCount out{0, std::vector<std::uint64_t>(static_cast<std::size_t>(m) + 1, 0)};
  const auto k = members.size();
  if (k < static_cast<std::size_t>(m)) return out;

  std::vector<GroupElement> elems;
  std::vector<GroupElement> negs;
  for (auto n : members) {
    elems.push_back(index_to_element(spec, n));
    negs.push_back(neg(spec, elems.back()));
  }
  std::vector<std::size_t> pick(static_cast<std::size_t>(m));
  for (int i = 0; i < m; ++i) pick[static_cast<std::size_t>(i)] = static_cast<std::size_t>(i);
  while (true) {
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << m); ++mask) {
      auto sum = zero(spec);
      int plus = 0;
      for (int i = 0; i < m; ++i) {
        auto p = pick[static_cast<std::size_t>(i)];
        if (mask >> i & 1) {
          sum = add(spec, sum, elems[p]);
          ++plus;
        } else {
          sum = add(spec, sum, negs[p]);
        }
      }
      if (sum == target) {
        ++out.total;
        ++out.by_t[static_cast<std::size_t>(plus)];
      }
    }
    // next combination in lexicographic order
    int i = m - 1;
    while (i >= 0 && pick[static_cast<std::size_t>(i)] == k - static_cast<std::size_t>(m - i)) --i;
    if (i < 0) break;
    ++pick[static_cast<std::size_t>(i)];
    for (int j = i + 1; j < m; ++j) pick[static_cast<std::size_t>(j)] = pick[static_cast<std::size_t>(j - 1)] + 1;
  }
  return out;
}

RepHistogram histogram(const GroupSpec& spec, std::span<const CharIndex> members, int m, const RepOptions& options) {
  require_m(m);
  require_sorted(members);
  RepHistogram hist(m);
  const auto k = members.size();
  if (k < static_cast<std::size_t>(m)) return hist;
  auto cost = representation_cost(k, m);
  if (cost > options.budget) throw BudgetExceeded(cost, options.budget);

  auto packed = packed_for(spec, members);
  std::vector<PackedGroup::Code> codes;
  std::vector<PackedGroup::Code> negs;
  for (auto n : members) {
    codes.push_back(packed.pack_index(n));
    negs.push_back(packed.neg(codes.back()));
  }

  const int workers = std::max(1, options.workers);
  std::vector<Accumulator> acc(static_cast<std::size_t>(workers), Accumulator(m));

  // Partition by the position of the smallest member.
  const auto leading = k - static_cast<std::size_t>(m) + 1;
  detail::parallel_tasks(workers, leading, [&](int w, std::size_t lead) {
    auto& a = acc[static_cast<std::size_t>(w)];
    auto dfs = [&](auto&& self, int depth, std::size_t next, PackedGroup::Code sum, int plus) -> void {
      if (depth == m) {
        a.record(sum, plus);
        return;
      }
      auto last = k - static_cast<std::size_t>(m - depth);
      for (auto pos = next; pos <= last; ++pos) {
        self(self, depth + 1, pos + 1, packed.add(sum, codes[pos]), plus + 1);
        self(self, depth + 1, pos + 1, packed.add(sum, negs[pos]), plus);
      }
    };
    dfs(dfs, 1, lead + 1, codes[lead], 1);
    dfs(dfs, 1, lead + 1, negs[lead], 0);
  });

  Accumulator merged(m);
  for (auto& a : acc) {
    for (const auto& [code, slot] : a.slots) {
      auto [it, inserted] = merged.slots.try_emplace(code, merged.counts.size() / merged.width);
      if (inserted) merged.counts.resize(merged.counts.size() + merged.width, 0);
      for (std::size_t t = 0; t < merged.width; ++t) {
        merged.counts[it->second * merged.width + t] += a.counts[slot * a.width + t];
      }
    }
  }
  std::vector<std::pair<std::int64_t, std::size_t>> order;
  order.reserve(merged.slots.size());
  for (const auto& [code, slot] : merged.slots) order.emplace_back(packed.key(code), slot);
  std::sort(order.begin(), order.end());
  for (const auto& [key, slot] : order) {
    hist.push(key, std::span<const std::uint64_t>(merged.counts.data() + slot * merged.width, merged.width));
  }
  return hist;
}

SupResult sup_r(const RepHistogram& hist) {
  SupResult out;
  for (std::size_t i = 0; i < hist.size(); ++i) {
    if (hist.total(i) > out.max) {
      out.max = hist.total(i);
      out.argmax.clear();
    }
    if (hist.total(i) == out.max && out.max > 0) out.argmax.push_back(hist.target(i));
  }
  return out;
}

SupResult sup_r(const GroupSpec& spec, std::span<const CharIndex> members, int m, const RepOptions& options) {
  return sup_r(histogram(spec, members, m, options));
}

// ---------------------------------------------------------------------------
// MitmCounter

std::uint64_t MitmCounter::cost(std::size_t k, int m) {
  return sat_add(signed_blocks(k, m / 2), signed_blocks(k, (m + 1) / 2));
}

MitmCounter::MitmCounter(GroupSpec spec, std::span<const CharIndex> members, int m, std::uint64_t budget)
    : spec_(std::move(spec)),
      members_(members.begin(), members.end()),
      m_(m),
      low_((m + 1) / 2),
      high_(m / 2),
      packed_(packed_for(spec_, members)) {
  require_m(m);
  require_sorted(members);
  const auto k = members_.size();
  if (k < static_cast<std::size_t>(m)) return;
  auto c = cost(k, m);
  if (c > budget) throw BudgetExceeded(c, budget);

  for (auto n : members_) {
    codes_.push_back(packed_.pack_index(n));
    neg_codes_.push_back(packed_.neg(codes_.back()));
  }

  // Signed high blocks; the smallest position must leave room for a low
  // block below it.
  auto dfs = [&](auto&& self, int depth, std::size_t next, PackedGroup::Code sum, std::uint32_t plus,
                 std::uint32_t min_pos) -> void {
    if (depth == high_) {
      entries_.push_back(HighEntry{sum, min_pos, plus});
      return;
    }
    auto last = k - static_cast<std::size_t>(high_ - depth);
    for (auto pos = next; pos <= last; ++pos) {
      self(self, depth + 1, pos + 1, packed_.add(sum, codes_[pos]), plus + 1, min_pos);
      self(self, depth + 1, pos + 1, packed_.add(sum, neg_codes_[pos]), plus, min_pos);
    }
  };
  for (auto b = static_cast<std::size_t>(low_); b + static_cast<std::size_t>(high_) <= k; ++b) {
    auto pos = static_cast<std::uint32_t>(b);
    dfs(dfs, 1, b + 1, codes_[b], 1, pos);
    dfs(dfs, 1, b + 1, neg_codes_[b], 0, pos);
  }
  std::sort(entries_.begin(), entries_.end(), [](const HighEntry& a, const HighEntry& b) {
    return a.sum != b.sum ? a.sum < b.sum : a.min_pos < b.min_pos;
  });

  const auto width = static_cast<std::size_t>(high_) + 1;
  suffix_.assign((entries_.size() + 1) * width, 0);
  for (std::size_t i = 0; i < entries_.size();) {
    auto j = i;
    while (j < entries_.size() && entries_[j].sum == entries_[i].sum) ++j;
    groups_.push_back({entries_[i].sum, Group{i, j}});
    // suffix_[e * width + p] = #entries at or after e (within the group) with plus p
    for (auto e = j; e-- > i;) {
      for (std::size_t p = 0; p < width; ++p) {
        suffix_[e * width + p] = (e + 1 < j ? suffix_[(e + 1) * width + p] : 0);
      }
      ++suffix_[e * width + entries_[e].plus];
    }
    i = j;
  }
}

RepCount MitmCounter::count(const GroupElement& target) const {
  RepCount out{0, std::vector<std::uint64_t>(static_cast<std::size_t>(m_) + 1, 0)};
  const auto k = members_.size();
  if (k < static_cast<std::size_t>(m_)) return out;
  if (!packed_.representable(target)) return out;
  const auto goal = packed_.pack(target);
  const auto width = static_cast<std::size_t>(high_) + 1;

  auto join = [&](PackedGroup::Code low_sum, std::size_t low_max, int low_plus) {
    auto need = packed_.sub(goal, low_sum);
    auto g = std::lower_bound(groups_.begin(), groups_.end(), need,
                              [](const auto& entry, std::uint64_t s) { return entry.first < s; });
    if (g == groups_.end() || g->first != need) return;
    auto [begin, end] = g->second;
    auto first = std::upper_bound(entries_.begin() + static_cast<std::ptrdiff_t>(begin),
                                  entries_.begin() + static_cast<std::ptrdiff_t>(end), low_max,
                                  [](std::size_t pos, const HighEntry& e) { return pos < e.min_pos; });
    auto e = static_cast<std::size_t>(first - entries_.begin());
    if (e == end) return;
    for (std::size_t p = 0; p < width; ++p) {
      auto c = suffix_[e * width + p];
      out.by_t[static_cast<std::size_t>(low_plus) + p] += c;
      out.total += c;
    }
  };

  // Signed low blocks; the largest position must leave room above for a
  // high block.
  auto dfs = [&](auto&& self, int depth, std::size_t next, PackedGroup::Code sum, int plus, std::size_t last_pos) -> void {
    if (depth == low_) {
      join(sum, last_pos, plus);
      return;
    }
    auto last = k - static_cast<std::size_t>(m_ - depth);
    for (auto pos = next; pos <= last; ++pos) {
      self(self, depth + 1, pos + 1, packed_.add(sum, codes_[pos]), plus + 1, pos);
      self(self, depth + 1, pos + 1, packed_.add(sum, neg_codes_[pos]), plus, pos);
    }
  };
  dfs(dfs, 0, 0, packed_.zero(), 0, 0);
  return out;
}

RepCount mitm_count(const GroupSpec& spec, std::span<const CharIndex> members, int m, const GroupElement& target,
                    std::uint64_t budget) {
  return MitmCounter(spec, members, m, budget).count(target);
}

std::int64_t negate_key(const GroupSpec& spec, std::int64_t key) {
  if (spec.family() == Family::Integers) return -key;
  return target_key(spec, neg(spec, element_from_key(spec, key)));
}

std::optional<std::int64_t> negation_violation(const GroupSpec& spec, const RepHistogram& hist) {
  const auto m = static_cast<std::size_t>(hist.m());
  for (std::size_t i = 0; i < hist.size(); ++i) {
    auto mirror = hist.find(negate_key(spec, hist.target(i)));
    if (!mirror || hist.total(*mirror) != hist.total(i)) return hist.target(i);
    auto a = hist.breakdown(i);
    auto b = hist.breakdown(*mirror);
    for (std::size_t t = 0; t <= m; ++t) {
      if (a[t] != b[m - t]) return hist.target(i);
    }
  }
  return std::nullopt;
}

}  // namespace bsidon
