// Acceptance run: one PASS/FAIL line per criterion, nonzero exit if any fail.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <string>

#include "bsidon/analytics.hpp"
#include "bsidon/io.hpp"
#include "bsidon/lambda_probe.hpp"
#include "bsidon/rep_engine.hpp"
#include "bsidon/sampler.hpp"
#include "oracles.hpp"

using namespace bsidon;

namespace {

const GroupSpec kZ = GroupSpec::integers();

struct Outcome {
  bool passed = true;
  std::string detail;
};

// Histograms from the mass criterion, reused by the symmetry criterion.
std::vector<std::pair<GroupSpec, RepHistogram>> g_histograms;

std::string fmt(double v, int digits = 4) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", digits, v);
  return buf;
}

double median_of(std::vector<double> v) { return median(std::move(v)); }

// -- 1 ------------------------------------------------------------------------

Outcome exactness() {
  // Member ranges are kept inside small subgroups (or a short interval of z)
  // so the number of realized targets stays small enough to check them all.
  struct Family {
    GroupSpec spec;
    CharIndex range;
  };
  const Family families[] = {{kZ, 100},
                             {GroupSpec::direct_sum_zq(2), 255},
                             {GroupSpec::direct_sum_zq(3), 242},
                             {GroupSpec::zq_infinity(5), 124},
                             {GroupSpec::direct_sum_odd_primes(10), 1154}};
  std::mt19937_64 rng(20260101);
  std::uint64_t targets_checked = 0, naive_calls = 0;
  for (int instance = 0; instance < 500; ++instance) {
    const auto& fam = families[instance % 5];
    const auto& spec = fam.spec;
    const int m = 2 + (instance / 5) % 3;
    auto k = static_cast<std::size_t>(rng() % 21);
    std::set<CharIndex> pick;
    while (pick.size() < k) pick.insert(1 + rng() % fam.range);
    std::vector<CharIndex> members(pick.begin(), pick.end());

    // plain enumeration of every signed m-subset with reference arithmetic
    std::map<std::int64_t, std::vector<std::uint64_t>> tally;
    std::vector<GroupElement> elems;
    for (auto n : members) elems.push_back(index_to_element(spec, n));
    std::vector<std::size_t> idx(static_cast<std::size_t>(m));
    std::function<void(std::size_t, std::size_t)> choose = [&](std::size_t depth, std::size_t from) {
      if (depth == idx.size()) {
        for (unsigned signs = 0; signs < (1u << m); ++signs) {
          auto sum = zero(spec);
          int plus = 0;
          for (int i = 0; i < m; ++i) {
            const auto& e = elems[idx[static_cast<std::size_t>(i)]];
            if (signs >> i & 1) {
              sum = add(spec, sum, e);
              ++plus;
            } else {
              sum = sub(spec, sum, e);
            }
          }
          auto& row = tally[target_key(spec, sum)];
          row.resize(static_cast<std::size_t>(m) + 1);
          ++row[static_cast<std::size_t>(plus)];
        }
        return;
      }
      for (std::size_t j = from; j < elems.size(); ++j) {
        idx[depth] = j;
        choose(depth + 1, j + 1);
      }
    };
    choose(0, 0);

    MitmCounter counter(spec, members, m);
    std::size_t probe = 0;
    for (const auto& [key, row] : tally) {
      auto target = element_from_key(spec, key);
      if (counter.count(target).by_t != row) {
        return {false, "instance " + std::to_string(instance) + " (" + spec.to_string() + ", m=" + std::to_string(m) +
                           ") differs at key " + std::to_string(key)};
      }
      if (probe++ % 97 == 0) {
        ++naive_calls;
        if (count_target(spec, members, m, target).by_t != row) {
          return {false, "count_target disagrees with enumeration at key " + std::to_string(key)};
        }
      }
      ++targets_checked;
    }
    // a few targets nobody realizes
    for (int miss = 0; miss < 3; ++miss) {
      auto key = static_cast<std::int64_t>(rng() % (2 * fam.range));
      if (tally.count(key)) continue;
      auto target = element_from_key(spec, key);
      if (counter.count(target).total != 0 || count_target(spec, members, m, target).total != 0) {
        return {false, "phantom count at key " + std::to_string(key)};
      }
    }
  }
  return {true, "500 instances, " + std::to_string(targets_checked) + " realized targets, " +
                    std::to_string(naive_calls) + " direct count_target calls"};
}

// -- 2 ------------------------------------------------------------------------

Outcome global_mass() {
  const GroupSpec families[] = {kZ, GroupSpec::direct_sum_zq(3), GroupSpec::zq_infinity(5),
                                GroupSpec::direct_sum_odd_primes(10)};
  std::uint64_t largest = 0;
  for (int i = 0; i < 50; ++i) {
    const auto& spec = families[i % 4];
    const int m = 2 + (i / 4) % 2;
    const auto theta = m == 2 ? Rational::make(1, 4) : Rational::make(1, 6);
    auto set = sample_set({spec, m, theta, static_cast<std::uint64_t>(i + 1), 100000});
    auto hist = histogram(spec, set.members, m);
    auto want = (std::uint64_t{1} << m) * oracle::binomial(set.members.size(), static_cast<std::uint64_t>(m));
    if (hist.mass() != want) {
      return {false, "set " + std::to_string(i) + ": mass " + std::to_string(hist.mass()) + " != " + std::to_string(want)};
    }
    for (std::size_t r = 0; r < hist.size(); ++r) {
      std::uint64_t sum = 0;
      for (auto v : hist.breakdown(r)) sum += v;
      if (sum != hist.total(r)) return {false, "breakdown does not add up in set " + std::to_string(i)};
    }
    largest = std::max(largest, want);
    g_histograms.emplace_back(spec, std::move(hist));
  }
  return {true, "50 sets over 4 families, m in {2,3}, largest mass " + std::to_string(largest)};
}

// -- 3 ------------------------------------------------------------------------

Outcome negation_symmetry() {
  // add the larger sets of the boundedness ensemble and some m = 4 sets
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    auto set = sample_set({kZ, 2, Rational::make(1, 4), seed, 1000000});
    g_histograms.emplace_back(kZ, histogram(kZ, set.members, 2));
  }
  for (const auto& spec : {kZ, GroupSpec::direct_sum_zq(3), GroupSpec::zq_infinity(5), GroupSpec::direct_sum_odd_primes(10)}) {
    auto set = sample_set({spec, 4, Rational::make(1, 8), 4, spec.family() == Family::DirectSumZqn ? 100000000 : 100000});
    g_histograms.emplace_back(spec, histogram(spec, set.members, 4));
  }
  std::uint64_t rows = 0;
  for (const auto& [spec, hist] : g_histograms) {
    for (std::size_t i = 0; i < hist.size(); ++i) {
      auto negated = target_key(spec, neg(spec, element_from_key(spec, hist.target(i))));
      auto j = hist.find(negated);
      if (!j) return {false, spec.to_string() + ": key " + std::to_string(hist.target(i)) + " has no mirror"};
      auto a = hist.breakdown(i), b = hist.breakdown(*j);
      if (hist.total(i) != hist.total(*j)) return {false, "r_N != r_-N at key " + std::to_string(hist.target(i))};
      for (std::size_t t = 0; t < a.size(); ++t) {
        if (a[t] != b[a.size() - 1 - t]) return {false, "r_N,t != r_-N,m-t at key " + std::to_string(hist.target(i))};
      }
      ++rows;
    }
  }
  return {true, std::to_string(g_histograms.size()) + " histograms, " + std::to_string(rows) + " targets"};
}

// -- 4 ------------------------------------------------------------------------

Outcome bijections() {
  const CharIndex limit = 100000;
  const GroupSpec families[] = {kZ, GroupSpec::direct_sum_zq(3), GroupSpec::zq_infinity(5),
                                GroupSpec::direct_sum_odd_primes(10)};
  int blocks_checked = 0;
  for (const auto& spec : families) {
    std::map<int, std::uint64_t> blocks;
    for (CharIndex n = 1; n <= limit; ++n) {
      auto e = index_to_element(spec, n);
      if (element_to_index(spec, e) != n) return {false, spec.to_string() + ": round trip fails at " + std::to_string(n)};
      ++blocks[degree(spec, e)];
    }
    for (const auto& [d, count] : blocks) {
      std::uint64_t first = 0, want = 0;  // first index of degree d and block size
      switch (spec.family()) {
        case Family::Integers:
          first = std::uint64_t{1} << d;
          want = first;
          break;
        case Family::DirectSumZq:
        case Family::ZqInfinity: {
          std::uint64_t qd = 1;
          for (int i = 0; i < d; ++i) qd *= spec.q();
          first = qd;
          want = qd * spec.q() - qd;
          break;
        }
        case Family::DirectSumZqn:
          first = spec.radix_product(d);
          want = (spec.qs()[static_cast<std::size_t>(d)] - 1) * first;
          break;
      }
      if (first + want - 1 > limit) continue;  // block cut off by the limit
      if (count != want) {
        return {false, spec.to_string() + ": degree " + std::to_string(d) + " has " + std::to_string(count) +
                           " elements, expected " + std::to_string(want)};
      }
      ++blocks_checked;
    }
  }
  return {true, "n <= 1e5 in 4 families, " + std::to_string(blocks_checked) + " complete degree blocks"};
}

// -- 5, 6 -----------------------------------------------------------------------

Outcome boundedness() {
  std::vector<double> at5, at6;
  std::string sups;
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    auto big = sample_set({kZ, 2, Rational::make(1, 4), seed, 1000000});
    auto hist = histogram(kZ, big.members, 2);
    auto s6 = sup_r(hist).max;
    std::vector<CharIndex> prefix(big.members.begin(),
                                  std::upper_bound(big.members.begin(), big.members.end(), CharIndex{100000}));
    auto s5 = sup_r(kZ, prefix, 2).max;
    at5.push_back(static_cast<double>(s5));
    at6.push_back(static_cast<double>(s6));
    sups += (seed > 1 ? " " : "") + std::to_string(s5) + "->" + std::to_string(s6);
  }
  double m5 = median_of(at5), m6 = median_of(at6);
  return {m6 - m5 <= 2.0, "median sup " + fmt(m5) + " at 1e5, " + fmt(m6) + " at 1e6; per seed " + sups};
}

Outcome density() {
  std::vector<double> normalized;
  std::vector<CharIndex> point{1000000};
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    auto set = sample_set({kZ, 2, Rational::make(1, 4), seed, 1000000});
    normalized.push_back(density_report(set, point).normalized[0]);
  }
  double med = median_of(normalized);
  bool z_ok = med >= 0.8 && med <= 1.25;

  // windowed family: compare with the expected count at window ends
  auto spec = GroupSpec::direct_sum_odd_primes(10);
  const CharIndex n_max = 14549535;  // end of the degree-7 window for m = 2
  std::vector<CharIndex> ends;
  for (const auto& w : admissible_windows(spec, 2, n_max)) ends.push_back(w.hi);
  std::vector<double> ratios, window_normalized;
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    auto set = sample_set({spec, 2, Rational::make(1, 4), seed, n_max});
    auto r = density_report(set, ends);
    ratios.push_back(r.ratio.back());
    window_normalized.push_back(r.normalized.back());
  }
  double med_ratio = median_of(ratios);
  bool zqn_ok = med_ratio >= 0.8 && med_ratio <= 1.25 && ends.back() == n_max;
  return {z_ok && zqn_ok, "z: median card*(1-s)/n^(1-s) = " + fmt(med) + " at 1e6; sum-zqn: median observed/expected = " +
                              fmt(med_ratio) + " at window end " + std::to_string(ends.back()) + " (" +
                              std::to_string(ends.size()) + " windows; normalized form there " +
                              fmt(median_of(window_normalized)) + ")"};
}

// -- 7 ------------------------------------------------------------------------

Outcome tuple_sum_decay() {
  const double beta = oracle::beta_quarter_quarter();
  std::vector<int> signs{1, 1};
  std::string values;
  bool bounded = true;
  double last = 0;
  for (std::int64_t n : {100, 1000, 10000, 100000}) {
    auto t = truncated_tuple_sum(kZ, 2, 0.75, GroupElement::integer(n), signs, static_cast<CharIndex>(n - 1));
    last = t.value * std::sqrt(static_cast<double>(n));
    bounded = bounded && last <= 10.0;
    values += (values.empty() ? "" : ", ") + fmt(last, 6);
  }
  double rel = std::abs(last - beta) / beta;
  return {bounded && rel <= 0.15,
          "T(n) n^(1/2) = " + values + "; Beta oracle " + fmt(beta, 8) + ", last off by " + fmt(100 * rel, 3) + "%"};
}

// -- 8 ------------------------------------------------------------------------

Outcome sym_bound() {
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  double worst = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    std::vector<double> ys(1 + rng() % 16);
    for (auto& y : ys) y = trial % 2 ? u(rng) * 10 : std::exp(8 * u(rng) - 4);
    int d = 1 + static_cast<int>(rng() % 6);
    auto r = sym_bound_check(ys, d);
    if (!r.holds) return {false, "fails on trial " + std::to_string(trial)};
    auto exact = oracle::elementary_symmetric(ys, d);
    if (std::abs(static_cast<double>(r.sigma_d - exact)) > 1e-9 * static_cast<double>(exact) + 1e-300) {
      return {false, "sigma_d disagrees with subset enumeration on trial " + std::to_string(trial)};
    }
    if (r.bound > 0) worst = std::max(worst, static_cast<double>(r.sigma_d / r.bound));
  }
  return {true, "1000 sequences, d <= 6, largest sigma_d / bound = " + fmt(worst)};
}

// -- 9 ------------------------------------------------------------------------

Outcome moments() {
  auto set = sample_set({kZ, 2, Rational::make(1, 4), 42, 100000000});
  std::string detail;
  bool ok = true;
  for (std::size_t k : {50u, 100u, 200u}) {
    if (set.members.size() < k) return {false, "sampled set has only " + std::to_string(set.members.size()) + " members"};
    auto r = moment_report(kZ, set.members, 2, set.members[k - 1]);
    ok = ok && r.k == k && r.ratio <= 4.0;
    detail += "k=" + std::to_string(k) + " ratio " + fmt(r.ratio) + "; ";
  }
  const std::uint64_t k = 200;
  std::vector<CharIndex> interval(k);
  for (std::uint64_t i = 0; i < k; ++i) interval[i] = i + 1;
  auto r = moment_report(kZ, interval, 2, k);
  bool oracle_ok = r.solution_count == (2 * k * k * k + k) / 3;
  ok = ok && oracle_ok && r.ratio >= k / 2.0;
  detail += "interval k=200 ratio " + fmt(r.ratio) + (oracle_ok ? " (matches (2k^3+k)/3)" : " (oracle mismatch)");
  return {ok, detail};
}

// -- 10 -----------------------------------------------------------------------

Outcome not_lambda() {
  const int m = 2;
  const auto theta = Rational::make(1, 50);
  const auto p = Rational::make(5, 1);  // 2m + eps with eps = 1
  const double s = exponent_s(m, theta);
  if (!(1 - s > 2.0 / p.value())) return {false, "parameters violate 1 - s > 2/p"};
  std::vector<DensityWindow> ys;
  for (std::uint64_t n : {1000u, 10000u, 100000u, 1000000u}) ys.push_back(Progression{0, 1, n});
  int increasing = 0;
  std::string pattern;
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    auto set = sample_set({kZ, m, theta, seed, 1000000});
    auto check = lambda_density_check(kZ, set.members, ys, p);
    increasing += check.increasing;
    pattern += check.increasing ? '+' : '-';
  }
  return {increasing >= 7, "theta=1/50, p=5: witness increasing for " + std::to_string(increasing) + "/10 seeds (" +
                               pattern + ")"};
}

// -- 11 -----------------------------------------------------------------------

Outcome determinism() {
  struct Case {
    GroupSpec spec;
    int m;
    Rational theta;
    CharIndex n_max;
  };
  const Case cases[] = {{kZ, 2, Rational::make(1, 4), 1000000},
                        {kZ, 3, Rational::make(1, 6), 10000000},
                        {GroupSpec::zq_infinity(5), 2, Rational::make(1, 4), 1000000},
                        {GroupSpec::direct_sum_odd_primes(10), 2, Rational::make(1, 4), 20000000}};
  int artifacts = 0;
  for (const auto& c : cases) {
    std::string sample_bytes, hist_bytes;
    for (int workers : {1, 4, 16}) {
      SampleParams params{c.spec, c.m, c.theta, 42, c.n_max};
      auto set = sample_set(params, workers);
      auto s = sample_to_json(set);
      Config config;
      config["command"] = "count";
      config["set"] = params_config(params);
      config["m"] = c.m;
      auto h = histogram_csv(histogram(c.spec, set.members, c.m, {kDefaultWorkBudget, workers}), config);
      if (workers == 1) {
        sample_bytes = s;
        hist_bytes = h;
      } else if (s != sample_bytes || h != hist_bytes) {
        return {false, c.spec.to_string() + ": bytes differ with " + std::to_string(workers) + " workers"};
      }
      artifacts += 2;
    }
  }
  return {true, std::to_string(artifacts) + " artifacts over 4 configurations, workers 1/4/16"};
}

}  // namespace

int main() {
  struct Criterion {
    const char* name;
    Outcome (*run)();
  };
  const Criterion criteria[] = {
      {"exactness: meet-in-the-middle equals naive counting", exactness},
      {"global mass identity on sampled sets", global_mass},
      {"negation symmetry on every histogram", negation_symmetry},
      {"group bijections and degree blocks", bijections},
      {"boundedness of sup r_N across scales", boundedness},
      {"density of sampled sets", density},
      {"truncated tuple sum decay", tuple_sum_decay},
      {"elementary symmetric bound", sym_bound},
      {"moment probe", moments},
      {"growing density witness", not_lambda},
      {"byte determinism across worker counts", determinism},
  };
  int failed = 0, index = 0;
  for (const auto& c : criteria) {
    ++index;
    auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::printf("%s %2d %s [%.1fs] %s\n", o.passed ? "PASS" : "FAIL", index, c.name, secs, o.detail.c_str());
    std::fflush(stdout);
    failed += !o.passed;
  }
  std::printf("%d/%d criteria passed\n", index - failed, index);
  return failed ? 1 : 0;
}
