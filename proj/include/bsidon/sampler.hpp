#pragma once

// Random sets E = { chi_n : Y_n = 1 } with independent Bernoulli Y_n of
// parameter alpha_n, drawn reproducibly from a seed.

#include <cstdint>
#include <vector>

#include "bsidon/group.hpp"
#include "bsidon/rational.hpp"

namespace bsidon {

struct SampleParams {
  GroupSpec spec;
  int m = 2;
  Rational theta = Rational::make(1, 4);
  std::uint64_t seed = 0;
  std::uint64_t n_max = 1;

  /// s = (m-1)/m + theta.
  double s() const;
  /// Throws std::invalid_argument unless m >= 2, 0 < theta < 1/m, n_max >= 1,
  /// and std::out_of_range if n_max exceeds the group's index capacity.
  void validate() const;

  friend bool operator==(const SampleParams&, const SampleParams&) = default;
};

struct SampledSet {
  SampleParams params;
  std::vector<CharIndex> members;  // strictly increasing
};

/// (m-1)/m + theta.
double exponent_s(int m, const Rational& theta);

/// Admissible stretch (lo, hi] of indices of degree `degree` in the direct
/// sum of Z(q_n): lo = Q_{d-1}, hi = (2 floor(q_d / 8m) + 1) Q_{d-1}.
struct Window {
  int degree = 0;
  CharIndex lo = 0;  // exclusive
  CharIndex hi = 0;  // inclusive
};

/// Windows of the direct sum of Z(q_n) that start below `limit`, in order.
/// Empty for the other families.
std::vector<Window> admissible_windows(const GroupSpec& spec, int m, CharIndex limit);

/// Inclusion probability of chi_n: n^-s, or for the direct sum of Z(q_n)
/// n^-s inside an admissible window and 0 elsewhere.
double alpha(const GroupSpec& spec, int m, double s, CharIndex n);

/// Deterministic uniform draw attached to index n under `seed`.
double inclusion_draw(std::uint64_t seed, CharIndex n);

/// Members are exactly { n <= n_max : inclusion_draw(seed, n) < alpha(n) },
/// whatever the worker count.
SampledSet sample_set(const SampleParams& params, int workers = 1);

/// Sum of alpha(j) for j <= n.
double expected_count(const GroupSpec& spec, int m, double s, CharIndex n);

}  // namespace bsidon
