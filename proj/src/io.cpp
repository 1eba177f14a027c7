#include "bsidon/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

namespace bsidon {

namespace {

std::string csv_preamble(const Config& config) {
  return "# format_version=" + std::to_string(kFormatVersion) + "\n# config=" + config.dump() + "\n";
}

// Shortest round-trippable decimal form.
std::string fmt_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  if (in.bad()) throw IoError("read failed for " + path.string());
  return ss.str();
}

void write_file_atomic(const std::filesystem::path& path, std::string_view content) {
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write " + tmp.string());
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    out.flush();
    if (!out) throw IoError("write failed for " + tmp.string());
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp, ec);
    throw IoError("cannot move output into place at " + path.string());
  }
}

Config params_config(const SampleParams& params) {
  Config c;
  c["spec"] = params.spec.to_string();
  c["m"] = params.m;
  c["theta"] = params.theta.to_string();
  c["seed"] = params.seed;
  c["n_max"] = params.n_max;
  return c;
}

std::string sample_to_json(const SampledSet& set) {
  Config j;
  j["format_version"] = kFormatVersion;
  const auto params = params_config(set.params);
  for (const auto& [k, v] : params.items()) j[k] = v;
  j["members"] = set.members;
  return j.dump() + "\n";
}

SampledSet sample_from_json(std::string_view text) {
  Config j;
  try {
    j = Config::parse(text);
    if (j.at("format_version").get<int>() != kFormatVersion) {
      throw std::invalid_argument("unsupported format_version " + j.at("format_version").dump());
    }
    SampledSet set;
    set.params.spec = GroupSpec::parse(j.at("spec").get<std::string>());
    set.params.m = j.at("m").get<int>();
    set.params.theta = Rational::parse(j.at("theta").get<std::string>());
    set.params.seed = j.at("seed").get<std::uint64_t>();
    set.params.n_max = j.at("n_max").get<std::uint64_t>();
    set.members = j.at("members").get<std::vector<CharIndex>>();
    set.params.validate();
    for (std::size_t i = 0; i < set.members.size(); ++i) {
      auto n = set.members[i];
      if (n < 1 || n > set.params.n_max || (i > 0 && n <= set.members[i - 1])) {
        throw std::invalid_argument("members must be strictly increasing within [1, n_max]");
      }
    }
    return set;
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(std::string("malformed sampled-set file: ") + e.what());
  }
}

std::string histogram_csv(const RepHistogram& hist, const Config& config) {
  std::string out = csv_preamble(config);
  out += "target_encoding,total";
  for (int t = 0; t <= hist.m(); ++t) out += ",r_t" + std::to_string(t);
  out += '\n';
  for (std::size_t i = 0; i < hist.size(); ++i) {
    out += std::to_string(hist.target(i)) + ',' + std::to_string(hist.total(i));
    for (auto c : hist.breakdown(i)) out += ',' + std::to_string(c);
    out += '\n';
  }
  return out;
}

std::string density_csv(const DensityReport& r, const Config& config) {
  std::string out = csv_preamble(config);
  out += "checkpoint,observed,expected,ratio,normalized\n";
  for (std::size_t i = 0; i < r.checkpoints.size(); ++i) {
    out += std::to_string(r.checkpoints[i]) + ',' + std::to_string(r.observed[i]) + ',' + fmt_double(r.expected[i]) +
           ',' + fmt_double(r.ratio[i]) + ',' + fmt_double(r.normalized[i]) + '\n';
  }
  return out;
}

std::string tail_probe_csv(const TailProbe& probe, const Config& config) {
  std::string out = csv_preamble(config);
  out += "k,frequency\n";
  for (std::size_t i = 0; i < probe.ks.size(); ++i) {
    out += std::to_string(probe.ks[i]) + ',' + fmt_double(probe.frequency[i]) + '\n';
  }
  out += "# per-seed sup\n# seed,sup\n";
  for (std::size_t i = 0; i < probe.seeds.size(); ++i) {
    out += "# " + std::to_string(probe.seeds[i]) + ',' + std::to_string(probe.sups[i]) + '\n';
  }
  return out;
}

std::string lambda_check_csv(const LambdaCheck& check, const Config& config) {
  std::string out = csv_preamble(config);
  out += "size,card,witness\n";
  for (const auto& p : check.points) {
    out += std::to_string(p.size) + ',' + std::to_string(p.card) + ',' + fmt_double(p.witness) + '\n';
  }
  out += std::string("# increasing=") + (check.increasing ? "true" : "false") + '\n';
  return out;
}

std::string moment_json(const MomentReport& r, const Config& config) {
  Config j;
  j["format_version"] = kFormatVersion;
  j["config"] = config;
  j["prefix_n"] = r.prefix_n;
  j["k"] = r.k;
  j["solution_count"] = r.solution_count;
  j["ratio"] = r.ratio;
  j["trivial_floor"] = r.trivial_floor;
  return j.dump(2) + "\n";
}

}  // namespace bsidon
