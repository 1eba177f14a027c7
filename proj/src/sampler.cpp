#include "bsidon/sampler.hpp"

#include <cmath>
#include <stdexcept>

#include "bsidon/detail/parallel.hpp"
#include "bsidon/philox.hpp"

namespace bsidon {

namespace {

constexpr CharIndex kSkipBlock = 4096;

bool in_window(const GroupSpec& spec, int m, CharIndex n) {
  auto d = index_degree(spec, n);
  auto lo = spec.radix_product(d);
  auto qd = spec.qs()[static_cast<std::size_t>(d)];
  auto cap = static_cast<std::uint64_t>(8 * m);
  if (qd <= cap) return false;
  auto hi = (2 * (qd / cap) + 1) * lo;
  return lo < n && n <= hi;
}

// Draws for [first, last]. A draw at or above first^-s can never be accepted
// in the block, so alpha is evaluated only for draws below that bound; the
// accepted set is identical to testing draw < alpha(n) directly.
void sample_range(const SampleParams& p, double s, CharIndex first, CharIndex last, std::vector<CharIndex>& out) {
  for (CharIndex block = first; block <= last; block += kSkipBlock) {
    auto block_end = std::min(last, block + kSkipBlock - 1);
    double bound = std::pow(static_cast<double>(block), -s);
    for (CharIndex n = block; n <= block_end; ++n) {
      double u = inclusion_draw(p.seed, n);
      if (u >= bound) continue;
      if (u < alpha(p.spec, p.m, s, n)) out.push_back(n);
    }
    if (block_end == last) break;
  }
}

}  // namespace

double exponent_s(int m, const Rational& theta) {
  return static_cast<double>(m - 1) / static_cast<double>(m) + theta.value();
}

double SampleParams::s() const { return exponent_s(m, theta); }

void SampleParams::validate() const {
  if (m < 2) throw std::invalid_argument("m must be at least 2");
  // 0 < theta < 1/m  <=>  0 < num and num * m < den (den > 0 by construction)
  if (theta.num <= 0 || theta.num * m >= theta.den) {
    throw std::invalid_argument("theta must satisfy 0 < theta < 1/m, got " + theta.to_string());
  }
  if (n_max < 1) throw std::invalid_argument("n_max must be at least 1");
  if (n_max > spec.max_index()) {
    throw std::out_of_range("n_max " + std::to_string(n_max) + " exceeds the index capacity of " + spec.to_string());
  }
}

std::vector<Window> admissible_windows(const GroupSpec& spec, int m, CharIndex limit) {
  std::vector<Window> out;
  if (spec.family() != Family::DirectSumZqn) return out;
  auto cap = static_cast<std::uint64_t>(8 * m);
  for (std::size_t d = 0; d < spec.qs().size(); ++d) {
    std::uint64_t lo = 0;
    try {
      lo = spec.radix_product(static_cast<int>(d));
    } catch (const std::out_of_range&) {
      break;
    }
    if (lo >= limit) break;
    auto qd = spec.qs()[d];
    if (qd <= cap) continue;
    out.push_back(Window{static_cast<int>(d), lo, (2 * (qd / cap) + 1) * lo});
  }
  return out;
}

double alpha(const GroupSpec& spec, int m, double s, CharIndex n) {
  if (n == 0) throw std::domain_error("alpha is defined for n >= 1");
  if (spec.family() == Family::DirectSumZqn && !in_window(spec, m, n)) return 0.0;
  return std::pow(static_cast<double>(n), -s);
}

double inclusion_draw(std::uint64_t seed, CharIndex n) { return Philox4x32::uniform(seed, n); }

SampledSet sample_set(const SampleParams& params, int workers) {
  params.validate();
  const double s = params.s();
  const auto n_max = params.n_max;
  auto chunks = static_cast<std::size_t>(std::max(1, workers));
  std::vector<std::vector<CharIndex>> parts(chunks);
  auto chunk_len = (n_max + chunks - 1) / chunks;
  detail::parallel_tasks(workers, chunks, [&](int, std::size_t c) {
    CharIndex first = 1 + c * chunk_len;
    if (first > n_max) return;
    CharIndex last = std::min<CharIndex>(n_max, first + chunk_len - 1);
    sample_range(params, s, first, last, parts[c]);
  });
  SampledSet out{params, {}};
  for (auto& part : parts) out.members.insert(out.members.end(), part.begin(), part.end());
  return out;
}

double expected_count(const GroupSpec& spec, int m, double s, CharIndex n) {
  if (n == 0) return 0.0;
  long double sum = 0.0L;
  if (spec.family() == Family::DirectSumZqn) {
    for (const auto& w : admissible_windows(spec, m, n)) {
      auto hi = std::min(w.hi, n);
      for (CharIndex j = w.lo + 1; j <= hi; ++j) sum += std::pow(static_cast<long double>(j), -static_cast<long double>(s));
    }
    return static_cast<double>(sum);
  }
  for (CharIndex j = 1; j <= n; ++j) sum += std::pow(static_cast<long double>(j), -static_cast<long double>(s));
  return static_cast<double>(sum);
}

}  // namespace bsidon
