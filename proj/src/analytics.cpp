#include "bsidon/analytics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <stdexcept>

namespace bsidon {

SymBound sym_bound_check(std::span<const double> ys, int d) {
  if (d < 1) throw std::invalid_argument("d must be at least 1");
  std::vector<long double> e(static_cast<std::size_t>(d) + 1, 0.0L);
  e[0] = 1.0L;
  long double sigma1 = 0.0L;
  for (double y : ys) {
    if (!(y >= 0.0)) throw std::invalid_argument("sequence entries must be non-negative");
    sigma1 += y;
    for (auto j = static_cast<std::size_t>(d); j >= 1; --j) e[j] += static_cast<long double>(y) * e[j - 1];
  }
  long double bound = 1.0L;
  for (int j = 1; j <= d; ++j) bound *= sigma1 / static_cast<long double>(j);
  SymBound out;
  out.sigma_d = e[static_cast<std::size_t>(d)];
  out.bound = bound;
  out.holds = out.sigma_d <= bound * (1.0L + 1e-12L);
  return out;
}

TupleSum truncated_tuple_sum(const GroupSpec& spec, int m, double s, const GroupElement& target, std::span<const int> signs,
                    CharIndex n_cap, std::uint64_t budget) {
  if (m < 2) throw std::invalid_argument("m must be at least 2");
  if (signs.size() != static_cast<std::size_t>(m)) throw std::invalid_argument("need exactly m signs");
  for (int e : signs) {
    if (e != 1 && e != -1) throw std::invalid_argument("signs must be +1 or -1");
  }
  if (n_cap < 1) throw std::invalid_argument("n_cap must be at least 1");

  // about n_cap^(m-1) partial sums
  std::uint64_t work = 1;
  for (int i = 0; i < m - 1; ++i) {
    if (__builtin_mul_overflow(work, n_cap, &work)) work = std::numeric_limits<std::uint64_t>::max();
  }
  if (work > budget) throw BudgetExceeded(work, budget);

  TupleSum out;
  const double mtheta = m * s - (m - 1);
  if (mtheta > 0.0 && s < 1.0) {
    int t0 = 0;
    while ((CharIndex{2} << t0) <= n_cap + 1) ++t0;
    double c = m * std::pow(std::pow(2.0, 1.0 - s) / (1.0 - s), m - 1);
    out.tail_bound = c * std::pow(2.0, -t0 * mtheta) / (1.0 - std::pow(2.0, -mtheta));
  } else {
    out.tail_bound = std::numeric_limits<double>::infinity();
  }

  Degree span_degree = index_degree(spec, n_cap);
  if (!target.is_zero()) span_degree = std::max(span_degree, degree(spec, target));
  if (spec.family() != Family::Integers && degree(spec, target) > index_degree(spec, n_cap)) {
    return out;  // sums of lower-degree elements cannot reach the target
  }
  PackedGroup packed(spec, span_degree);
  const auto goal = packed.pack(target);

  std::vector<double> weight(n_cap + 1, 0.0);
  std::vector<PackedGroup::Code> code(n_cap + 1, 0);
  for (CharIndex n = 1; n <= n_cap; ++n) {
    weight[n] = alpha(spec, m, s, n);
    if (weight[n] > 0.0) code[n] = packed.pack_index(n);
  }
  auto signed_code = [&](CharIndex n, int sign) { return sign > 0 ? code[n] : packed.neg(code[n]); };

  // Weighted distribution of the first m-1 signed coordinates. The ordered
  // map keeps the final accumulation order independent of hashing.
  std::map<PackedGroup::Code, long double> partial{{packed.zero(), 1.0L}};
  for (int i = 0; i < m - 1; ++i) {
    std::map<PackedGroup::Code, long double> next;
    for (const auto& [c, w] : partial) {
      for (CharIndex n = 1; n <= n_cap; ++n) {
        if (weight[n] == 0.0) continue;
        next[packed.add(c, signed_code(n, signs[static_cast<std::size_t>(i)]))] += w * weight[n];
      }
    }
    partial = std::move(next);
  }

  long double total = 0.0L;
  const int last_sign = signs[static_cast<std::size_t>(m - 1)];
  for (const auto& [c, w] : partial) {
    auto rest = packed.sub(goal, c);
    if (last_sign < 0) rest = packed.neg(rest);
    auto n = packed.index(rest);
    if (n >= 1 && n <= n_cap) total += w * weight[n];
  }
  out.value = static_cast<double>(total);
  return out;
}

DensityReport density_report(const SampledSet& set, std::span<const CharIndex> checkpoints) {
  const auto& p = set.params;
  const double s = p.s();
  std::vector<CharIndex> points(checkpoints.begin(), checkpoints.end());
  for (auto c : points) {
    if (c < 1 || c > p.n_max) throw std::invalid_argument("checkpoint " + std::to_string(c) + " outside [1, n_max]");
  }
  if (p.spec.family() == Family::DirectSumZqn) {
    auto windows = admissible_windows(p.spec, p.m, p.n_max + 1);
    std::vector<CharIndex> snapped;
    for (auto c : points) {
      CharIndex best = 0;
      for (const auto& w : windows) {
        if (w.hi <= c) best = w.hi;
      }
      if (best > 0) snapped.push_back(best);
    }
    points = std::move(snapped);
  }
  std::sort(points.begin(), points.end());
  points.erase(std::unique(points.begin(), points.end()), points.end());

  DensityReport r;
  for (auto c : points) {
    auto observed = static_cast<std::uint64_t>(std::upper_bound(set.members.begin(), set.members.end(), c) -
                                               set.members.begin());
    double expected = expected_count(p.spec, p.m, s, c);
    r.checkpoints.push_back(c);
    r.observed.push_back(observed);
    r.expected.push_back(expected);
    r.ratio.push_back(expected > 0.0 ? static_cast<double>(observed) / expected : 0.0);
    r.normalized.push_back(static_cast<double>(observed) * (1.0 - s) / std::pow(static_cast<double>(c), 1.0 - s));
  }
  return r;
}

TailProbe tail_probe(const GroupSpec& spec, int m, const Rational& theta, std::span<const std::uint64_t> ks,
                     std::span<const std::uint64_t> seeds, std::uint64_t n_max, const RepOptions& options) {
  if (seeds.empty()) throw std::invalid_argument("tail probe needs at least one seed");
  TailProbe out;
  out.seeds.assign(seeds.begin(), seeds.end());
  out.ks.assign(ks.begin(), ks.end());
  for (auto seed : seeds) {
    SampleParams params{spec, m, theta, seed, n_max};
    auto set = sample_set(params, options.workers);
    out.sups.push_back(sup_r(spec, set.members, m, options).max);
  }
  for (auto k : ks) {
    auto hits = std::count_if(out.sups.begin(), out.sups.end(), [k](std::uint64_t v) { return v >= k; });
    out.frequency.push_back(static_cast<double>(hits) / static_cast<double>(seeds.size()));
  }
  return out;
}

double median(std::vector<double> values) {
  if (values.empty()) throw std::invalid_argument("median of an empty sample");
  std::sort(values.begin(), values.end());
  auto n = values.size();
  return n % 2 ? values[n / 2] : 0.5 * (values[n / 2 - 1] + values[n / 2]);
}

}  // namespace bsidon
