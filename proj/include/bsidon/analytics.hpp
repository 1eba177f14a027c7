#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "bsidon/group.hpp"
#include "bsidon/rational.hpp"
#include "bsidon/rep_engine.hpp"
#include "bsidon/sampler.hpp"

namespace bsidon {

// -- elementary symmetric bound ------------------------------------------

struct SymBound {
  long double sigma_d = 0;
  long double bound = 0;  // sigma_1^d / d!
  bool holds = false;
};

/// sigma_d of non-negative ys by the usual one-pass recurrence, compared
/// against sigma_1^d / d! with a relative rounding allowance of 1e-12.
SymBound sym_bound_check(std::span<const double> ys, int d);

// -- truncated weighted tuple sums -----------------------------------------

struct TupleSum {
  double value = 0;       // sum over tuples in [1, n_cap]^m
  double tail_bound = 0;  // rigorous bound on the tuples with some index > n_cap
};

/// Sum of alpha_{n_1} ... alpha_{n_m} over all (n_1, ..., n_m) in
/// [1, n_cap]^m, repetitions allowed, with sum_i signs_i chi_{n_i} equal to
/// the target. The last coordinate is always solved for; the first m-1 are
/// convolved, so the work is about n_cap^(m-1).
TupleSum truncated_tuple_sum(const GroupSpec& spec, int m, double s, const GroupElement& target, std::span<const int> signs,
                    CharIndex n_cap, std::uint64_t budget = kDefaultWorkBudget);

// -- density ---------------------------------------------------------------

struct DensityReport {
  std::vector<CharIndex> checkpoints;
  std::vector<std::uint64_t> observed;  // |E cap {chi_1..chi_n}|
  std::vector<double> expected;         // expected_count(n)
  std::vector<double> ratio;            // observed / expected (0 when expected is 0)
  std::vector<double> normalized;       // observed * (1-s) / n^(1-s)
};

/// For the direct sum of Z(q_n) each checkpoint is moved down to the last
/// admissible window end at or below it (checkpoints with none are
/// dropped) and duplicates are merged.
DensityReport density_report(const SampledSet& set, std::span<const CharIndex> checkpoints);

// -- tail frequencies over a seed ensemble ----------------------------------

struct TailProbe {
  std::vector<std::uint64_t> seeds;
  std::vector<std::uint64_t> sups;       // sup_N r_N per seed
  std::vector<std::uint64_t> ks;
  std::vector<double> frequency;         // fraction of seeds with sup >= K
};

TailProbe tail_probe(const GroupSpec& spec, int m, const Rational& theta, std::span<const std::uint64_t> ks,
                     std::span<const std::uint64_t> seeds, std::uint64_t n_max, const RepOptions& options = {});

/// Median of a non-empty sample (mean of the two middle values for even sizes).
double median(std::vector<double> values);

}  // namespace bsidon
