#pragma once

// Exact signed m-fold representation counts.
//
// A representation of a target N by a finite set E is a pair (plus, minus)
// of disjoint subsets of E with |plus| + |minus| = m and
//   sum(plus) - sum(minus) = N.
// r_{N,t} counts representations with |plus| = t and r_N = sum_t r_{N,t}.
// Blocks are unordered, so every m-subset with every sign pattern is one
// representation of exactly one target.

#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "bsidon/group.hpp"

namespace bsidon {

inline constexpr std::uint64_t kDefaultWorkBudget = std::uint64_t{1} << 31;

class BudgetExceeded : public std::runtime_error {
 public:
  BudgetExceeded(std::uint64_t estimated, std::uint64_t budget)
      : std::runtime_error("work budget exceeded: estimated " + std::to_string(estimated) +
                           " elementary visits, budget " + std::to_string(budget)),
        estimated_(estimated),
        budget_(budget) {}
  std::uint64_t estimated() const { return estimated_; }
  std::uint64_t budget() const { return budget_; }

 private:
  std::uint64_t estimated_;
  std::uint64_t budget_;
};

struct RepOptions {
  std::uint64_t budget = kDefaultWorkBudget;
  int workers = 1;
};

struct RepCount {
  std::uint64_t total = 0;
  std::vector<std::uint64_t> by_t;  // by_t[t] = r_{N,t}, size m + 1
};

/// Sparse histogram over realized targets, sorted by ascending target key
/// (see bsidon::target_key).
class RepHistogram {
 public:
  RepHistogram() = default;
  explicit RepHistogram(int m) : m_(m) {}

  int m() const { return m_; }
  std::size_t size() const { return targets_.size(); }
  bool empty() const { return targets_.empty(); }

  std::int64_t target(std::size_t i) const { return targets_[i]; }
  std::uint64_t total(std::size_t i) const { return counts_[i * stride()]; }
  std::span<const std::uint64_t> breakdown(std::size_t i) const {
    return {counts_.data() + i * stride() + 1, static_cast<std::size_t>(m_) + 1};
  }
  std::optional<std::size_t> find(std::int64_t key) const;
  /// Sum of all totals.
  std::uint64_t mass() const;

  /// Appends a record; keys must arrive in ascending order.
  void push(std::int64_t key, std::span<const std::uint64_t> by_t);

 private:
  std::size_t stride() const { return static_cast<std::size_t>(m_) + 2; }
  int m_ = 0;
  std::vector<std::int64_t> targets_;
  std::vector<std::uint64_t> counts_;  // per record: total, r_0 .. r_m
};

/// 2^m * C(k, m), saturating at UINT64_MAX.
std::uint64_t representation_cost(std::size_t k, int m);

/// Reference count by exhaustive enumeration with GroupElement arithmetic.
/// `members` must be strictly increasing character indices.
RepCount count_target(const GroupSpec& spec, std::span<const CharIndex> members, int m, const GroupElement& target);

/// Every realized target with its counts. Throws BudgetExceeded when
/// representation_cost exceeds the budget.
RepHistogram histogram(const GroupSpec& spec, std::span<const CharIndex> members, int m, const RepOptions& options = {});

struct SupResult {
  std::uint64_t max = 0;
  std::vector<std::int64_t> argmax;  // ascending target keys
};

SupResult sup_r(const RepHistogram& hist);
SupResult sup_r(const GroupSpec& spec, std::span<const CharIndex> members, int m, const RepOptions& options = {});

/// Meet-in-the-middle counter. Each m-subset is split into its ceil(m/2)
/// smallest members (low block) and the rest (high block); signed high
/// blocks are indexed by (sum, smallest position) once, and every query
/// joins the signed low blocks against high blocks starting strictly after
/// the low block's largest position.
class MitmCounter {
 public:
  /// Throws BudgetExceeded if the two block tables exceed the budget.
  MitmCounter(GroupSpec spec, std::span<const CharIndex> members, int m, std::uint64_t budget = kDefaultWorkBudget);

  RepCount count(const GroupElement& target) const;

  /// Table sizes 2^h C(k,h) + 2^l C(k,l), saturating.
  static std::uint64_t cost(std::size_t k, int m);

 private:
  struct HighEntry {
    std::uint64_t sum;
    std::uint32_t min_pos;
    std::uint32_t plus;
  };
  struct Group {
    std::size_t begin;
    std::size_t end;
  };

  GroupSpec spec_;
  std::vector<CharIndex> members_;
  int m_;
  int low_;
  int high_;
  PackedGroup packed_;
  std::vector<PackedGroup::Code> codes_;
  std::vector<PackedGroup::Code> neg_codes_;
  std::vector<HighEntry> entries_;       // sorted by (sum, min_pos)
  std::vector<std::uint64_t> suffix_;    // per entry, (high_ + 1) suffix counts by plus
  std::vector<std::pair<std::uint64_t, Group>> groups_;  // sorted by sum
};

RepCount mitm_count(const GroupSpec& spec, std::span<const CharIndex> members, int m, const GroupElement& target,
                    std::uint64_t budget = kDefaultWorkBudget);

/// First key violating r_N = r_{-N} or r_{N,t} = r_{-N,m-t}, if any.
std::optional<std::int64_t> negation_violation(const GroupSpec& spec, const RepHistogram& hist);

/// Key of the negated target.
std::int64_t negate_key(const GroupSpec& spec, std::int64_t key);

}  // namespace bsidon
