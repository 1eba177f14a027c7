#pragma once

// Combinatorial diagnostics for L^p behaviour of E-polynomials: ordered
// solution counts, even-moment ratios and the density witness
// card(E cap Y) / N^(2/p) over progressions or finite subgroups Y.

#include <cstdint>
#include <span>
#include <string_view>
#include <variant>
#include <vector>

#include "bsidon/group.hpp"
#include "bsidon/rational.hpp"
#include "bsidon/rep_engine.hpp"

namespace bsidon {

/// Ordered m-tuples of members, repetitions allowed, whose plain sum is the
/// target.
std::uint64_t rudin_count(const GroupSpec& spec, std::span<const CharIndex> members, int m, const GroupElement& target,
                          std::uint64_t budget = kDefaultWorkBudget);

/// Ordered m-tuples of distinct members with
///   -chi_1 + chi_2 - chi_3 + ... (sign (-1)^j at position j)
/// equal to the target.
std::uint64_t har_count(const GroupSpec& spec, std::span<const CharIndex> members, int m, const GroupElement& target,
                        std::uint64_t budget = kDefaultWorkBudget);

struct MomentReport {
  CharIndex prefix_n = 0;
  std::uint64_t k = 0;               // members <= prefix_n
  std::uint64_t solution_count = 0;  // #{(a, b) in E^m x E^m : sum a = sum b}
  double ratio = 0;                  // solution_count / k^m
  std::uint64_t trivial_floor = 0;   // solutions with b a permutation of a
};

/// Solutions are counted as sum over x of R(x)^2, where R(x) is the number
/// of ordered m-tuples summing to x. Work is about k^m.
MomentReport moment_report(const GroupSpec& spec, std::span<const CharIndex> members, int m, CharIndex prefix_n,
                           std::uint64_t budget = kDefaultWorkBudget);

/// Pairs (a, b) of ordered m-tuples over k symbols with b a rearrangement
/// of a. Equals 2k^2 - k for m = 2.
std::uint64_t trivial_solutions(std::uint64_t k, int m);

/// Y = {start + step, start + 2 step, ..., start + length * step} (integers).
struct Progression {
  std::int64_t start = 0;
  std::int64_t step = 1;
  std::uint64_t length = 0;
};

/// Y = nonzero elements of degree < degree, a subset of a subgroup of
/// cardinality q^degree (q_0 ... q_{degree-1} for the direct sum of Z(q_n)).
struct SubgroupCut {
  int degree = 1;
};

using DensityWindow = std::variant<Progression, SubgroupCut>;

struct WitnessPoint {
  std::uint64_t size = 0;  // N: progression length or subgroup cardinality
  std::uint64_t card = 0;  // |E cap Y|
  double witness = 0;      // card / N^(2/p)
};

struct LambdaCheck {
  std::vector<WitnessPoint> points;
  bool increasing = false;  // witness strictly increasing across the windows
};

WitnessPoint density_witness(const GroupSpec& spec, std::span<const CharIndex> members, const DensityWindow& y,
                             const Rational& p);

LambdaCheck lambda_density_check(const GroupSpec& spec, std::span<const CharIndex> members,
                                 std::span<const DensityWindow> ys, const Rational& p);

/// `ap:a=<int>:d=<int>:n=<list>` or `subgroup:deg=<list>`; one window per
/// list entry.
std::vector<DensityWindow> parse_density_windows(std::string_view text);

}  // namespace bsidon
