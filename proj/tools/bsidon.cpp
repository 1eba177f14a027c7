// bsidon: sample random sets with few signed m-fold representations and
// measure them. Exit status: 0 ok, 1 failed check, 2 usage, 3 budget
// refusal, 4 I/O.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <iostream>
#include <numeric>
#include <sstream>

#include <CLI11.hpp>

#include "bsidon/analytics.hpp"
#include "bsidon/io.hpp"
#include "bsidon/lambda_probe.hpp"
#include "bsidon/rep_engine.hpp"
#include "bsidon/sampler.hpp"
#include "bsidon/verify.hpp"

namespace {

using namespace bsidon;

constexpr int kExitFailedCheck = 1;
constexpr int kExitUsage = 2;
constexpr int kExitBudget = 3;
constexpr int kExitIo = 4;

struct Globals {
  std::uint64_t budget = 0;  // 0: not given on the command line
  int workers = 1;

  std::uint64_t resolved_budget() const {
    if (budget) return budget;
    if (const char* env = std::getenv("BSIDON_BUDGET")) {
      try {
        return std::stoull(env);
      } catch (const std::exception&) {
        throw std::invalid_argument(std::string("BSIDON_BUDGET is not an integer: ") + env);
      }
    }
    return kDefaultWorkBudget;
  }
  RepOptions rep() const { return RepOptions{resolved_budget(), workers}; }
};

void emit(const std::string& path, const std::string& content) {
  if (path.empty() || path == "-") {
    std::cout << content;
  } else {
    write_file_atomic(path, content);
  }
}

SampledSet load_set(const std::string& path) { return sample_from_json(read_file(path)); }

template <class T>
std::vector<T> parse_list(const std::string& text) {
  std::vector<T> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t used = 0;
    auto v = std::stoll(item, &used);
    if (used != item.size()) throw std::invalid_argument("bad list entry '" + item + "'");
    out.push_back(static_cast<T>(v));
  }
  if (out.empty()) throw std::invalid_argument("empty list");
  return out;
}

std::vector<int> parse_signs(const std::string& text) {
  std::vector<int> out;
  for (char c : text) {
    if (c == '+') out.push_back(1);
    else if (c == '-') out.push_back(-1);
    else if (c != ',') throw std::invalid_argument("signs are written as a string of '+' and '-'");
  }
  return out;
}

std::string join(const std::vector<std::int64_t>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + std::to_string(v[i]);
  return s;
}

// -- subcommands -----------------------------------------------------------

struct SampleArgs {
  std::string group = "z";
  int m = 2;
  std::string theta = "1/4";
  std::uint64_t n_max = 0;
  std::uint64_t seed = 0;
  std::string out;
};

int run_sample(const SampleArgs& a, const Globals& g) {
  SampleParams p{GroupSpec::parse(a.group), a.m, Rational::parse(a.theta), a.seed, a.n_max};
  auto set = sample_set(p, g.workers);
  emit(a.out, sample_to_json(set));
  std::cerr << "sampled " << set.members.size() << " members up to " << p.n_max << "\n";
  return 0;
}

struct CountArgs {
  std::string set;
  int m = 2;
  std::string target;
  std::string hist_out;
  bool naive = false;
};

int run_count(const CountArgs& a, const Globals& g) {
  auto set = load_set(a.set);
  const auto& spec = set.params.spec;
  if (!a.target.empty()) {
    auto target = element_from_key(spec, std::stoll(a.target));
    auto c = a.naive ? count_target(spec, set.members, a.m, target)
                     : mitm_count(spec, set.members, a.m, target, g.resolved_budget());
    std::cout << "target " << a.target << " (" << to_string(spec, target) << ") total " << c.total << " by_t";
    for (auto v : c.by_t) std::cout << ' ' << v;
    std::cout << "\n";
    return 0;
  }
  auto hist = histogram(spec, set.members, a.m, g.rep());
  auto sup = sup_r(hist);
  std::cout << "k " << set.members.size() << " targets " << hist.size() << " mass " << hist.mass() << " sup "
            << sup.max << " argmax " << join(sup.argmax) << "\n";
  if (!a.hist_out.empty()) {
    Config c;
    c["command"] = "count";
    c["set"] = params_config(set.params);
    c["m"] = a.m;
    c["k"] = set.members.size();
    c["budget"] = g.resolved_budget();
    emit(a.hist_out, histogram_csv(hist, c));
  }
  return 0;
}

struct DensityArgs {
  std::string set;
  std::string checkpoints;
  std::string out;
};

int run_density(const DensityArgs& a, const Globals&) {
  auto set = load_set(a.set);
  auto points = parse_list<CharIndex>(a.checkpoints);
  auto report = density_report(set, points);
  Config c;
  c["command"] = "density";
  c["set"] = params_config(set.params);
  c["checkpoints"] = a.checkpoints;
  emit(a.out, density_csv(report, c));
  return 0;
}

struct TupleSumArgs {
  std::string group = "z";
  int m = 2;
  std::string theta = "1/4";
  std::int64_t target = 0;
  std::string signs;
  std::uint64_t n_cap = 0;
  std::string out;
};

int run_tuple_sum(const TupleSumArgs& a, const Globals& g) {
  auto spec = GroupSpec::parse(a.group);
  auto theta = Rational::parse(a.theta);
  SampleParams check{spec, a.m, theta, 0, 1};
  check.validate();
  auto signs = a.signs.empty() ? std::vector<int>(static_cast<std::size_t>(a.m), 1) : parse_signs(a.signs);
  auto target = element_from_key(spec, a.target);
  double s = exponent_s(a.m, theta);
  auto r = truncated_tuple_sum(spec, a.m, s, target, signs, a.n_cap, g.resolved_budget());
  double size = spec.family() == Family::Integers ? std::abs(static_cast<double>(a.target)) : static_cast<double>(a.target);
  Config j;
  j["format_version"] = kFormatVersion;
  j["config"] = {{"command", "lemma3"}, {"spec", spec.to_string()}, {"m", a.m},        {"theta", theta.to_string()},
                 {"target", a.target},  {"signs", a.signs},          {"n_cap", a.n_cap}, {"budget", g.resolved_budget()}};
  j["s"] = s;
  j["value"] = r.value;
  j["tail_bound"] = r.tail_bound;
  j["scaled"] = size > 0 ? r.value * std::pow(size, a.m * theta.value()) : r.value;
  emit(a.out, j.dump(2) + "\n");
  return 0;
}

struct TailArgs {
  std::string group = "z";
  int m = 2;
  std::string theta = "1/4";
  std::uint64_t n_max = 0;
  std::uint64_t seeds = 10;
  std::uint64_t seed_base = 1;
  std::string ks = "1,2,4,8,16";
  std::string out;
};

int run_tailprobe(const TailArgs& a, const Globals& g) {
  std::vector<std::uint64_t> seeds(a.seeds);
  std::iota(seeds.begin(), seeds.end(), a.seed_base);
  auto ks = parse_list<std::uint64_t>(a.ks);
  auto probe = tail_probe(GroupSpec::parse(a.group), a.m, Rational::parse(a.theta), ks, seeds, a.n_max, g.rep());
  Config c;
  c["command"] = "tailprobe";
  c["spec"] = GroupSpec::parse(a.group).to_string();
  c["m"] = a.m;
  c["theta"] = Rational::parse(a.theta).to_string();
  c["n_max"] = a.n_max;
  c["seed_base"] = a.seed_base;
  c["seeds"] = a.seeds;
  c["ks"] = a.ks;
  c["budget"] = g.resolved_budget();
  emit(a.out, tail_probe_csv(probe, c));
  return 0;
}

struct MomentArgs {
  std::string set;
  int m = 2;
  std::uint64_t prefix = 0;
  std::string out;
};

int run_moments(const MomentArgs& a, const Globals& g) {
  auto set = load_set(a.set);
  auto r = moment_report(set.params.spec, set.members, a.m, a.prefix, g.resolved_budget());
  Config c;
  c["command"] = "moments";
  c["set"] = params_config(set.params);
  c["m"] = a.m;
  c["prefix"] = a.prefix;
  emit(a.out, moment_json(r, c));
  return 0;
}

struct LambdaArgs {
  std::string set;
  std::string p;
  std::string ys;
  std::string out;
};

int run_lambda_check(const LambdaArgs& a, const Globals&) {
  auto set = load_set(a.set);
  auto p = Rational::parse(a.p);
  auto ys = parse_density_windows(a.ys);
  auto check = lambda_density_check(set.params.spec, set.members, ys, p);
  Config c;
  c["command"] = "lambda-check";
  c["set"] = params_config(set.params);
  c["p"] = p.to_string();
  c["ys"] = a.ys;
  emit(a.out, lambda_check_csv(check, c));
  return 0;
}

int run_verify(bool quick, const Globals& g) {
  bool ok = true;
  run_verification(quick, g.workers, [&](const CheckResult& r) {
    std::cout << (r.passed ? "PASS " : "FAIL ") << r.name;
    if (!r.detail.empty()) std::cout << " (" << r.detail << ")";
    std::cout << std::endl;
    ok = ok && r.passed;
  });
  return ok ? 0 : kExitFailedCheck;
}

struct BenchArgs {
  std::string group = "z";
  int m = 2;
  std::string theta = "1/4";
  std::uint64_t n_max = 1000000;
  std::uint64_t seed = 42;
  std::string out;
};

int run_bench(const BenchArgs& a, const Globals& g) {
  using clock = std::chrono::steady_clock;
  SampleParams p{GroupSpec::parse(a.group), a.m, Rational::parse(a.theta), a.seed, a.n_max};
  auto set = sample_set(p, g.workers);
  const auto& spec = p.spec;
  auto seconds = [](clock::time_point t0) { return std::chrono::duration<double>(clock::now() - t0).count(); };
  std::string csv = "path,k,m,items,seconds,items_per_second\n";
  auto row = [&](const char* path, std::uint64_t items, double secs) {
    char buf[256];
    std::snprintf(buf, sizeof buf, "%s,%zu,%d,%llu,%.6f,%.1f\n", path, set.members.size(), a.m,
                  static_cast<unsigned long long>(items), secs, secs > 0 ? static_cast<double>(items) / secs : 0.0);
    csv += buf;
  };

  auto t0 = clock::now();
  auto hist = histogram(spec, set.members, a.m, g.rep());
  row("histogram", representation_cost(set.members.size(), a.m), seconds(t0));

  auto target = element_from_key(spec, hist.empty() ? 0 : hist.target(hist.size() / 2));
  t0 = clock::now();
  MitmCounter counter(spec, set.members, a.m, g.resolved_budget());
  row("mitm_build", MitmCounter::cost(set.members.size(), a.m), seconds(t0));
  const int queries = 200;
  t0 = clock::now();
  for (int i = 0; i < queries; ++i) (void)counter.count(target);
  row("mitm_query", queries, seconds(t0));

  t0 = clock::now();
  (void)count_target(spec, set.members, a.m, target);
  row("naive_query", 1, seconds(t0));
  emit(a.out, csv);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Random sets with bounded signed m-fold representation counts"};
  app.require_subcommand(1);
  Globals g;
  app.add_option("--budget", g.budget, "Work budget in elementary visits (default 2^31, or $BSIDON_BUDGET)");
  app.add_option("--workers", g.workers, "Worker threads")->check(CLI::Range(1, 1024));

  int status = 0;
  auto dispatch = [&](auto fn) { return [&, fn] { status = fn(); }; };

  SampleArgs sa;
  auto* sample = app.add_subcommand("sample", "Draw a random set and write it as JSON");
  sample->add_option("--group", sa.group, "Group: z, sum-zq:q=Q, zq-inf:q=P, sum-zqn:qs=... or sum-zqn:gen=odd-primes:count=K")->required();
  sample->add_option("--m", sa.m, "Fold count m >= 2")->required();
  sample->add_option("--theta", sa.theta, "Rational theta in (0, 1/m)")->required();
  sample->add_option("--nmax", sa.n_max, "Largest index considered")->required();
  sample->add_option("--seed", sa.seed, "Seed")->required();
  sample->add_option("--out", sa.out, "Output path (stdout if omitted)");
  sample->callback(dispatch([&] { return run_sample(sa, g); }));

  CountArgs ca;
  auto* count = app.add_subcommand("count", "Representation counts of a sampled set");
  count->add_option("--set", ca.set, "Sampled set JSON")->required();
  count->add_option("--m", ca.m, "Fold count m >= 2")->required();
  count->add_option("--target", ca.target, "Single target: integer for z, character index (0 = zero) otherwise");
  count->add_option("--hist-out", ca.hist_out, "Write the full histogram CSV here");
  count->add_flag("--naive", ca.naive, "Count a single target by plain enumeration");
  count->callback(dispatch([&] { return run_count(ca, g); }));

  DensityArgs da;
  auto* density = app.add_subcommand("density", "Observed vs expected counting function");
  density->add_option("--set", da.set, "Sampled set JSON")->required();
  density->add_option("--checkpoints", da.checkpoints, "Comma-separated indices")->required();
  density->add_option("--out", da.out, "Output CSV (stdout if omitted)");
  density->callback(dispatch([&] { return run_density(da, g); }));

  TupleSumArgs la;
  auto* lemma3 = app.add_subcommand("lemma3", "Truncated weighted sum over signed tuples hitting a target");
  lemma3->add_option("--group", la.group, "Group spec")->required();
  lemma3->add_option("--m", la.m, "Tuple length")->required();
  lemma3->add_option("--theta", la.theta, "Rational theta in (0, 1/m)")->required();
  lemma3->add_option("--target", la.target, "Target key")->required();
  lemma3->add_option("--signs", la.signs, "Sign pattern such as ++ or +- (default all +)");
  lemma3->add_option("--ncap", la.n_cap, "Truncation of every index")->required();
  lemma3->add_option("--out", la.out, "Output JSON (stdout if omitted)");
  lemma3->callback(dispatch([&] { return run_tuple_sum(la, g); }));

  TailArgs ta;
  auto* tail = app.add_subcommand("tailprobe", "Fraction of seeds with sup r_N >= K");
  tail->add_option("--group", ta.group, "Group spec")->required();
  tail->add_option("--m", ta.m, "Fold count")->required();
  tail->add_option("--theta", ta.theta, "Rational theta")->required();
  tail->add_option("--nmax", ta.n_max, "Largest index")->required();
  tail->add_option("--seeds", ta.seeds, "Number of seeds");
  tail->add_option("--seed-base", ta.seed_base, "First seed");
  tail->add_option("--ks", ta.ks, "Comma-separated thresholds K");
  tail->add_option("--out", ta.out, "Output CSV (stdout if omitted)");
  tail->callback(dispatch([&] { return run_tailprobe(ta, g); }));

  MomentArgs ma;
  auto* moments = app.add_subcommand("moments", "Even-moment solution counts of a set prefix");
  moments->add_option("--set", ma.set, "Sampled set JSON")->required();
  moments->add_option("--m", ma.m, "Half the moment order")->required();
  moments->add_option("--prefix", ma.prefix, "Use members <= prefix")->required();
  moments->add_option("--out", ma.out, "Output JSON (stdout if omitted)");
  moments->callback(dispatch([&] { return run_moments(ma, g); }));

  LambdaArgs lca;
  auto* lambda = app.add_subcommand("lambda-check", "Density witness card(E cap Y) / N^(2/p)");
  lambda->add_option("--set", lca.set, "Sampled set JSON")->required();
  lambda->add_option("--p", lca.p, "Rational exponent p > 2")->required();
  lambda->add_option("--ys", lca.ys, "ap:a=<int>:d=<int>:n=<list> or subgroup:deg=<list>")->required();
  lambda->add_option("--out", lca.out, "Output CSV (stdout if omitted)");
  lambda->callback(dispatch([&] { return run_lambda_check(lca, g); }));

  bool quick = false;
  auto* verify = app.add_subcommand("verify", "Run oracle-equivalence and invariant checks");
  verify->add_flag("--quick", quick, "Smaller instance counts");
  verify->callback(dispatch([&] { return run_verify(quick, g); }));

  BenchArgs ba;
  auto* bench = app.add_subcommand("bench", "Time the counting paths and print throughput CSV");
  bench->add_option("--group", ba.group, "Group spec");
  bench->add_option("--m", ba.m, "Fold count");
  bench->add_option("--theta", ba.theta, "Rational theta");
  bench->add_option("--nmax", ba.n_max, "Largest index");
  bench->add_option("--seed", ba.seed, "Seed");
  bench->add_option("--out", ba.out, "Output CSV (stdout if omitted)");
  bench->callback(dispatch([&] { return run_bench(ba, g); }));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    auto code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  } catch (const BudgetExceeded& e) {
    std::cerr << "bsidon: " << e.what() << "\n";
    return kExitBudget;
  } catch (const IoError& e) {
    std::cerr << "bsidon: " << e.what() << "\n";
    return kExitIo;
  } catch (const std::invalid_argument& e) {
    std::cerr << "bsidon: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::logic_error& e) {  // domain_error, out_of_range
    std::cerr << "bsidon: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "bsidon: " << e.what() << "\n";
    return 1;
  }
  return status;
}
