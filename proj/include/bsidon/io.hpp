#pragma once

// Artifact formats. Every artifact carries format_version and the resolved
// configuration that produced it; identical inputs give identical bytes.
//
//   sampled set   JSON {format_version, spec, m, theta, seed, n_max, members}
//   CSV reports   "# format_version=1", "# config=<json>", header row, rows

#include <filesystem>
#include <stdexcept>
#include <string>
#include <string_view>

#include <json.hpp>

#include "bsidon/analytics.hpp"
#include "bsidon/lambda_probe.hpp"
#include "bsidon/rep_engine.hpp"
#include "bsidon/sampler.hpp"

namespace bsidon {

inline constexpr int kFormatVersion = 1;

using Config = nlohmann::ordered_json;

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::string read_file(const std::filesystem::path& path);
/// Writes to a sibling temporary file and renames it into place.
void write_file_atomic(const std::filesystem::path& path, std::string_view content);

Config params_config(const SampleParams& params);

std::string sample_to_json(const SampledSet& set);
/// Throws std::invalid_argument on malformed or inconsistent content.
SampledSet sample_from_json(std::string_view text);

/// Columns: target_encoding, total, r_t0 .. r_tm. Targets are integers for
/// z and character indices (0 = zero element) for the other groups.
std::string histogram_csv(const RepHistogram& hist, const Config& config);
std::string density_csv(const DensityReport& report, const Config& config);
std::string tail_probe_csv(const TailProbe& probe, const Config& config);
std::string lambda_check_csv(const LambdaCheck& check, const Config& config);
std::string moment_json(const MomentReport& report, const Config& config);

}  // namespace bsidon
