#include "bsidon/verify.hpp"

#include <algorithm>
#include <random>
#include <sstream>

#include "bsidon/analytics.hpp"
#include "bsidon/group.hpp"
#include "bsidon/lambda_probe.hpp"
#include "bsidon/rep_engine.hpp"
#include "bsidon/sampler.hpp"

namespace bsidon {

namespace {

std::vector<GroupSpec> all_families() {
  return {GroupSpec::integers(), GroupSpec::direct_sum_zq(2), GroupSpec::direct_sum_zq(3), GroupSpec::zq_infinity(5),
          GroupSpec::direct_sum_odd_primes(8)};
}

std::vector<CharIndex> random_members(std::mt19937_64& rng, std::size_t k, CharIndex range) {
  std::vector<CharIndex> v;
  std::uniform_int_distribution<CharIndex> pick(1, range);
  while (v.size() < k && v.size() < range) {
    v.push_back(pick(rng));
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
  }
  return v;
}

std::uint64_t binomial(std::uint64_t n, std::uint64_t k) {
  if (k > n) return 0;
  std::uint64_t r = 1;
  for (std::uint64_t i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

CheckResult check_bijections(bool quick) {
  CheckResult r{"index bijection roundtrip", true, ""};
  CharIndex limit = quick ? 10000 : 100000;
  for (const auto& g : all_families()) {
    for (CharIndex n = 1; n <= limit; ++n) {
      if (element_to_index(g, index_to_element(g, n)) != n) {
        r.passed = false;
        r.detail = g.to_string() + " fails at n=" + std::to_string(n);
        return r;
      }
    }
  }
  r.detail = "n <= " + std::to_string(limit) + " in 5 groups";
  return r;
}

CheckResult check_packed(bool quick) {
  CheckResult r{"packed arithmetic matches reference", true, ""};
  std::mt19937_64 rng(7);
  int trials = quick ? 2000 : 20000;
  for (const auto& g : all_families()) {
    auto packed = PackedGroup::covering(g, 50000);
    std::uniform_int_distribution<CharIndex> pick(1, 50000);
    for (int i = 0; i < trials; ++i) {
      auto a = index_to_element(g, pick(rng));
      auto b = index_to_element(g, pick(rng));
      auto sum = packed.unpack(packed.add(packed.pack(a), packed.pack(b)));
      auto diff = packed.unpack(packed.sub(packed.pack(a), packed.pack(b)));
      if (sum != add(g, a, b) || diff != sub(g, a, b)) {
        r.passed = false;
        r.detail = g.to_string() + ": " + to_string(g, a) + " and " + to_string(g, b);
        return r;
      }
    }
  }
  return r;
}

CheckResult check_mitm(bool quick) {
  CheckResult r{"meet-in-the-middle equals naive enumeration", true, ""};
  std::mt19937_64 rng(11);
  int instances = quick ? 40 : 200;
  auto families = all_families();
  for (int i = 0; i < instances; ++i) {
    const auto& g = families[static_cast<std::size_t>(i) % families.size()];
    int m = 2 + i % 3;
    auto members = random_members(rng, 3 + rng() % 10, 200);
    MitmCounter counter(g, members, m);
    auto hist = histogram(g, members, m);
    // every realized target plus a few unrealized ones
    std::vector<std::int64_t> keys;
    for (std::size_t t = 0; t < hist.size(); t += 1 + hist.size() / 50) keys.push_back(hist.target(t));
    keys.push_back(g.family() == Family::Integers ? 100000 : 0);
    for (auto key : keys) {
      auto target = element_from_key(g, key);
      auto naive = count_target(g, members, m, target);
      auto fast = counter.count(target);
      auto idx = hist.find(key);
      auto from_hist = idx ? hist.total(*idx) : 0;
      if (naive.total != fast.total || naive.by_t != fast.by_t || naive.total != from_hist) {
        r.passed = false;
        r.detail = g.to_string() + " m=" + std::to_string(m) + " target key " + std::to_string(key);
        return r;
      }
    }
  }
  r.detail = std::to_string(instances) + " instances";
  return r;
}

CheckResult check_histograms(bool quick, int workers) {
  CheckResult r{"global mass and negation symmetry on sampled sets", true, ""};
  int sets = quick ? 10 : 50;
  auto families = all_families();
  for (int i = 0; i < sets; ++i) {
    const auto& g = families[static_cast<std::size_t>(i) % families.size()];
    int m = 2 + i % 2;
    SampleParams p{g, m, m == 2 ? Rational::make(1, 4) : Rational::make(1, 6), static_cast<std::uint64_t>(1000 + i),
                   quick ? 20000u : 100000u};
    auto set = sample_set(p, workers);
    auto hist = histogram(g, set.members, m, RepOptions{kDefaultWorkBudget, workers});
    auto expected = (std::uint64_t{1} << m) * binomial(set.members.size(), static_cast<std::uint64_t>(m));
    if (hist.mass() != expected) {
      r.passed = false;
      r.detail = g.to_string() + " seed " + std::to_string(p.seed) + ": mass " + std::to_string(hist.mass()) +
                 " != " + std::to_string(expected);
      return r;
    }
    if (auto bad = negation_violation(g, hist)) {
      r.passed = false;
      r.detail = g.to_string() + " seed " + std::to_string(p.seed) + ": asymmetric at key " + std::to_string(*bad);
      return r;
    }
  }
  r.detail = std::to_string(sets) + " sampled sets";
  return r;
}

CheckResult check_sampler(int workers) {
  CheckResult r{"sampler independent of worker count", true, ""};
  SampleParams p{GroupSpec::integers(), 2, Rational::make(1, 4), 42, 200000};
  auto one = sample_set(p, 1);
  for (int w : {4, 16, workers}) {
    if (sample_set(p, w).members != one.members) {
      r.passed = false;
      r.detail = "differs at " + std::to_string(w) + " workers";
      return r;
    }
  }
  for (auto n : one.members) {
    if (!(inclusion_draw(p.seed, n) < alpha(p.spec, p.m, p.s(), n))) {
      r.passed = false;
      r.detail = "member " + std::to_string(n) + " fails its own draw";
    }
  }
  return r;
}

CheckResult check_sym_bound(bool quick) {
  CheckResult r{"elementary symmetric bound", true, ""};
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> val(0.0, 10.0);
  int trials = quick ? 200 : 1000;
  for (int i = 0; i < trials; ++i) {
    std::vector<double> ys(1 + rng() % 30);
    for (auto& y : ys) y = val(rng);
    int d = 1 + static_cast<int>(rng() % 6);
    if (!sym_bound_check(ys, d).holds) {
      r.passed = false;
      r.detail = "trial " + std::to_string(i);
      return r;
    }
  }
  return r;
}

CheckResult check_har(bool quick) {
  CheckResult r{"alternating ordered counts match representation counts", true, ""};
  std::mt19937_64 rng(5);
  int instances = quick ? 20 : 100;
  auto families = all_families();
  for (int i = 0; i < instances; ++i) {
    const auto& g = families[static_cast<std::size_t>(i) % families.size()];
    int m = 2 + i % 2;
    auto members = random_members(rng, 2 + rng() % 10, 100);
    auto hist = histogram(g, members, m);
    std::uint64_t factor = 1;
    for (int j = 2; j <= m / 2; ++j) factor *= static_cast<std::uint64_t>(j);
    for (int j = 2; j <= (m + 1) / 2; ++j) factor *= static_cast<std::uint64_t>(j);
    for (std::size_t t = 0; t < hist.size(); ++t) {
      auto target = element_from_key(g, hist.target(t));
      auto expected = factor * hist.breakdown(t)[static_cast<std::size_t>(m / 2)];
      if (har_count(g, members, m, target) != expected) {
        r.passed = false;
        r.detail = g.to_string() + " key " + std::to_string(hist.target(t));
        return r;
      }
    }
  }
  return r;
}

}  // namespace

std::vector<CheckResult> run_verification(bool quick, int workers,
                                          const std::function<void(const CheckResult&)>& progress) {
  std::vector<CheckResult> out;
  auto run = [&](CheckResult r) {
    if (progress) progress(r);
    out.push_back(std::move(r));
  };
  auto guarded = [&](const char* name, auto&& fn) {
    try {
      run(fn());
    } catch (const std::exception& e) {
      run(CheckResult{name, false, std::string("exception: ") + e.what()});
    }
  };
  guarded("index bijection roundtrip", [&] { return check_bijections(quick); });
  guarded("packed arithmetic matches reference", [&] { return check_packed(quick); });
  guarded("meet-in-the-middle equals naive enumeration", [&] { return check_mitm(quick); });
  guarded("global mass and negation symmetry on sampled sets", [&] { return check_histograms(quick, workers); });
  guarded("sampler independent of worker count", [&] { return check_sampler(workers); });
  guarded("elementary symmetric bound", [&] { return check_sym_bound(quick); });
  guarded("alternating ordered counts match representation counts", [&] { return check_har(quick); });
  return out;
}

}  // namespace bsidon
