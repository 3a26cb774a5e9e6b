#ifndef LAPRMT_EXPERIMENTS_HPP
#define LAPRMT_EXPERIMENTS_HPP

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "laprmt/extremes.hpp"
#include "laprmt/models.hpp"

namespace laprmt {

inline constexpr std::string_view kArtifactVersion = "1.0.0";
inline constexpr std::string_view kManifestSchema = "laprmt.manifest/1";
inline constexpr std::string_view kRecordsSchema = "laprmt.records/1";
inline constexpr std::string_view kCsvHeader =
    "replicate,lambda_max,max_diag,m_n,r_n,minmax_ok,upper_ok,comparison_ok,wall_ms";

enum class ExperimentKind { esd, max_diag, max_eig, block, bounds, ratio };
/// Normalization of the spectrum for ESD runs: divide by sqrt(n) or sqrt(n-1).
enum class EsdScale { sqrt_n, sqrt_n_minus_1 };

std::string_view to_string(ExperimentKind kind);
std::optional<ExperimentKind> parse_kind(std::string_view name);
std::string_view to_string(EsdScale scale);
std::optional<EsdScale> parse_scale(std::string_view name);

struct ExperimentConfig {
  ExperimentKind kind = ExperimentKind::max_eig;
  std::size_t n = 200;
  std::size_t reps = 200;
  EntryDistribution dist = EntryDistribution::gaussian;
  std::size_t k = 1;
  double eps = 1.0;
  double sigma = 1.0;
  double K = 1.4142135623730951;
  double c = 1.0;
  std::uint64_t seed = 0;
  /// Worker count; 0 means hardware concurrency. Never affects results.
  std::size_t threads = 1;
  std::size_t bins = 100;
  EsdScale scale = EsdScale::sqrt_n;
  /// Write measured wall times to the CSV. Off by default so that output
  /// files are byte-identical across runs.
  bool timing = false;

  /// Throws std::invalid_argument describing the first violated constraint.
  void validate() const;
};

/// One Monte Carlo draw. Spectral fields are empty for max-diag runs, which
/// never form the matrix.
struct ReplicateRecord {
  std::size_t replicate = 0;
  std::optional<double> lambda_max;
  double max_diag = 0.0;
  double m_n = 0.0;
  std::optional<double> r_n;
  bool minmax_ok = false;
  bool upper_ok = false;
  bool lower_ok = false;
  bool comparison_ok = false;
  bool hypothesis_ok = false;
  double wall_ms = 0.0;
  /// Set when the eigensolver failed; the record is excluded from summaries.
  std::optional<std::string> failure;

  bool spectral() const noexcept { return lambda_max.has_value(); }
};

struct ExperimentManifest {
  std::string schema{kManifestSchema};
  std::string version{kArtifactVersion};
  std::string draw_order;
  ExperimentConfig config;
  std::string records_schema{kRecordsSchema};
  std::string records_file;
  /// "fnv1a64:" + 16 lowercase hex digits of the canonical CSV.
  std::string records_digest;
  nlohmann::ordered_json summary;
};

struct RunResult {
  std::vector<ReplicateRecord> records;
  ExperimentManifest manifest;
  /// Pooled, scaled eigenvalues in replicate order (esd runs only).
  std::vector<double> pooled_eigenvalues;
};

/// Runs `config.reps` replicates in parallel. Replicate r draws from
/// substream_seed(config.seed, r); results do not depend on `threads`.
RunResult run(const ExperimentConfig& config);

/// Writes the CSV. With `canonical`, wall_ms is written as 0 regardless of
/// the timing flag; the digest is always taken over the canonical form.
std::string records_csv(const std::vector<ReplicateRecord>& records,
                        bool canonical = false);
std::uint64_t fnv1a64(std::string_view bytes);
std::string records_digest(const std::vector<ReplicateRecord>& records);

nlohmann::ordered_json to_json(const ExperimentConfig& config);
ExperimentConfig config_from_json(const nlohmann::json& j);
nlohmann::ordered_json to_json(const ExperimentManifest& manifest);
ExperimentManifest manifest_from_json(const nlohmann::json& j);

class ReplayError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct ReplayResult {
  std::vector<ReplicateRecord> records;
  std::string digest;
  bool digest_matches = false;
  /// Empty when the manifest names no records file or it cannot be read.
  std::optional<bool> file_matches;
};

/// Re-derives the records of `manifest`. Throws ReplayError when the artifact
/// version or draw-order contract differs. `threads` overrides the echoed
/// worker count (0 keeps it).
ReplayResult replay(const ExperimentManifest& manifest, std::size_t threads = 0,
                    const std::string& base_dir = "");

/// Digest of a CSV file with its wall_ms column reset to 0.
std::string canonical_file_digest(std::string_view csv_text);

/// Nearest-rank quantile of an ascending sample: x[ceil(p n) - 1].
double nearest_rank_quantile(const std::vector<double>& sorted, double p);

/// lambda_max / sqrt(n log n).
double eigen_ratio(std::size_t n, double lambda_max);

}  // namespace laprmt

#endif  // LAPRMT_EXPERIMENTS_HPP
