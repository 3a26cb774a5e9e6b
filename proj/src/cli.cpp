#include "laprmt/cli.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numbers>
#include <sstream>
#include <string>
#include <thread>

#include "laprmt/experiments.hpp"
#include "laprmt/laws.hpp"

namespace laprmt::cli {

namespace {

namespace fs = std::filesystem;

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct CampaignFlags {
  ExperimentConfig config;
  std::string dist = "gaussian";
  std::string scale = "sqrt-n";
  std::string out;
  std::string manifest;
};

std::size_t default_threads() {
  return std::max<std::size_t>(1, std::thread::hardware_concurrency());
}

void add_common_flags(CLI::App* sub, CampaignFlags& f, bool reps_required) {
  sub->add_option("--n", f.config.n, "Matrix order")->required();
  auto* reps = sub->add_option("--reps", f.config.reps, "Number of replicates");
  if (reps_required) reps->required();
  sub->add_option("--seed", f.config.seed, "Master seed (64-bit unsigned)")
      ->capture_default_str();
  sub->add_option("--dist", f.dist, "Entry distribution")
      ->check(CLI::IsMember({"gaussian", "rademacher", "uniform"}))
      ->capture_default_str();
  sub->add_option("--eps", f.config.eps, "Slack in the eigenvalue bounds")
      ->capture_default_str();
  sub->add_option("--sigma", f.config.sigma, "Entry standard deviation (L <- sigma L)")
      ->capture_default_str();
  sub->add_option("--K", f.config.K, "Constant of the comparison bound")
      ->capture_default_str();
  sub->add_option("--c", f.config.c, "Constant of the diagonal growth hypothesis")
      ->capture_default_str();
  sub->add_option("--threads", f.config.threads,
                  "Worker threads (default: machine parallelism)");
  sub->add_option("--out", f.out, "CSV output path (default: standard output)");
  sub->add_option("--manifest", f.manifest,
                  "Manifest path (default: <out stem>.manifest.json)");
  sub->add_flag("--timing", f.config.timing,
                "Write measured wall times (output no longer byte-stable)");
}

ExperimentConfig finalize(CampaignFlags& f, ExperimentKind kind) {
  ExperimentConfig c = f.config;
  c.kind = kind;
  c.dist = *parse_distribution(f.dist);
  if (auto s = parse_scale(f.scale)) c.scale = *s;
  try {
    c.validate();
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  return c;
}

void write_file(const fs::path& path, const std::string& text) {
  std::ofstream file(path, std::ios::binary);
  if (!file) throw std::runtime_error("cannot open " + path.string() + " for writing");
  file << text;
  if (!file) throw std::runtime_error("failed writing " + path.string());
}

fs::path manifest_path(const CampaignFlags& f, ExperimentKind kind) {
  if (!f.manifest.empty()) return f.manifest;
  if (f.out.empty()) return std::string(to_string(kind)) + ".manifest.json";
  fs::path p(f.out);
  p.replace_extension(".manifest.json");
  return p;
}

void print_value(std::ostream& out, const std::string& name, double v) {
  char buffer[64];
  std::snprintf(buffer, sizeof buffer, "%.10g", v);
  out << name << " = " << buffer << '\n';
}

void print_summary(std::ostream& out, const nlohmann::ordered_json& s) {
  out << "replicates = " << s.at("replicates").get<std::size_t>() << '\n';
  out << "failures = " << s.at("failures").get<std::size_t>() << '\n';
  if (s.contains("m_n")) print_value(out, "ks_m_n", s["m_n"]["ks"].get<double>());
  if (s.contains("r_n")) print_value(out, "ks_r_n", s["r_n"]["ks"].get<double>());
  if (s.contains("ratio")) {
    print_value(out, "median_ratio", s["ratio"]["median"].get<double>());
  }
  if (s.contains("coverage")) {
    const auto& c = s["coverage"];
    print_value(out, "coverage_minmax", c["minmax"].get<double>());
    print_value(out, "coverage_upper", c["upper"].get<double>());
    print_value(out, "coverage_lower", c["lower"].get<double>());
    print_value(out, "coverage_comparison", c["comparison"].get<double>());
  }
  if (s.contains("esd")) {
    const auto& m = s["esd"]["moments"];
    for (const auto& [key, value] : m.items()) print_value(out, "esd_" + key, value.get<double>());
  }
}

int run_campaign(CampaignFlags& f, ExperimentKind kind, std::ostream& out,
                 std::ostream& err) {
  const ExperimentConfig config = finalize(f, kind);
  RunResult result = run(config);
  const std::string csv = records_csv(result.records, !config.timing);

  const fs::path mpath = manifest_path(f, kind);
  if (!f.out.empty()) {
    write_file(f.out, csv);
    fs::path base = mpath.parent_path();
    if (base.empty()) base = ".";
    result.manifest.records_file = fs::proximate(fs::absolute(f.out), fs::absolute(base))
                                       .generic_string();
  } else {
    out << csv;
  }
  write_file(mpath, to_json(result.manifest).dump(2) + "\n");

  if (!f.out.empty()) {
    print_summary(out, result.manifest.summary);
    err << "wrote " << f.out << " and " << mpath.string() << '\n';
  } else {
    err << "wrote " << mpath.string() << '\n';
  }
  return kExitOk;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Laplacian random matrices: extreme-value statistics, eigenvalue "
               "bounds and spectral laws",
               "laprmt"};
  app.require_subcommand(1);

  struct Campaign {
    ExperimentKind kind;
    const char* description;
    CampaignFlags flags;
    CLI::App* sub = nullptr;
  };
  std::vector<Campaign> campaigns;
  campaigns.reserve(5);
  campaigns.push_back({ExperimentKind::esd, "Pooled spectrum of L/sqrt(n): moments, histogram, mixture fit", {}});
  campaigns.push_back({ExperimentKind::max_diag, "Gumbel statistic M_n of the largest diagonal entry", {}});
  campaigns.push_back({ExperimentKind::max_eig, "Gumbel statistic R_n of the largest eigenvalue", {}});
  campaigns.push_back({ExperimentKind::block, "Largest eigenvalue of k-block Laplacians", {}});
  campaigns.push_back({ExperimentKind::ratio, "lambda_max / sqrt(n log n)", {}});
  for (auto& c : campaigns) {
    c.flags.config.threads = default_threads();
    c.sub = app.add_subcommand(std::string(to_string(c.kind)), c.description);
    add_common_flags(c.sub, c.flags, true);
    if (c.kind == ExperimentKind::block) {
      c.sub->add_option("--k", c.flags.config.k, "Number of diagonal blocks")->required();
    }
    if (c.kind == ExperimentKind::esd) {
      c.sub->add_option("--bins", c.flags.config.bins, "Histogram bins")
          ->capture_default_str();
      c.sub->add_option("--scale", c.flags.scale, "Spectrum normalization")
          ->check(CLI::IsMember({"sqrt-n", "sqrt-n-minus-1"}))
          ->capture_default_str();
    }
  }

  CampaignFlags bounds_flags;
  bounds_flags.config.threads = default_threads();
  auto* bounds_cmd = app.add_subcommand(
      "bounds", "Eigenvalue bounds; with --reps, their coverage over a campaign");
  add_common_flags(bounds_cmd, bounds_flags, false);
  std::size_t bounds_k = 1;
  bounds_cmd->add_option("--k", bounds_k, "Number of diagonal blocks for the bound formulas")
      ->capture_default_str();

  int moments_k = 0;
  auto* moments_cmd = app.add_subcommand(
      "moments", "Even moments m2..m2K of the limiting spectral law");
  moments_cmd->add_option("--k", moments_k, "Largest moment index K (1..6)")->required();

  std::size_t gen_n = 0;
  std::uint64_t gen_seed = 0;
  std::string gen_dist = "gaussian";
  std::size_t gen_k = 1;
  double gen_sigma = 1.0;
  std::string gen_out;
  auto* gen_cmd = app.add_subcommand(
      "gen", "Dump the Laplacian of replicate 0 under --seed as plain text");
  gen_cmd->add_option("--n", gen_n, "Matrix order")->required();
  gen_cmd->add_option("--seed", gen_seed, "Master seed (64-bit unsigned)")
      ->capture_default_str();
  gen_cmd->add_option("--dist", gen_dist, "Entry distribution")
      ->check(CLI::IsMember({"gaussian", "rademacher", "uniform"}))
      ->capture_default_str();
  gen_cmd->add_option("--k", gen_k, "Number of diagonal blocks")->capture_default_str();
  gen_cmd->add_option("--sigma", gen_sigma, "Entry standard deviation")
      ->capture_default_str();
  gen_cmd->add_option("--out", gen_out, "Output path (default: standard output)");

  std::string replay_manifest;
  std::size_t replay_threads = 0;
  std::string replay_out;
  auto* replay_cmd = app.add_subcommand(
      "replay", "Re-derive the records of a manifest and verify their digest");
  replay_cmd->add_option("--manifest", replay_manifest, "Manifest JSON path")->required();
  replay_cmd->add_option("--threads", replay_threads,
                         "Worker threads (default: as recorded)");
  replay_cmd->add_option("--out", replay_out, "Write the re-derived CSV here");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    CLI::App* target = &app;
    for (auto* sub : app.get_subcommands()) target = sub;
    out << target->help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    std::string message = e.what();
    for (char& ch : message) {
      if (ch == '\n') ch = ' ';
    }
    err << "error: " << message << '\n';
    return kExitUsage;
  }

  try {
    for (auto& c : campaigns) {
      if (c.sub->parsed()) return run_campaign(c.flags, c.kind, out, err);
    }

    if (bounds_cmd->parsed()) {
      if (bounds_cmd->get_option("--reps")->count() > 0) {
        if (bounds_k != 1) throw UsageError("bounds campaigns use --k 1");
        return run_campaign(bounds_flags, ExperimentKind::bounds, out, err);
      }
      const auto& cfg = bounds_flags.config;
      if (cfg.n < 2) throw UsageError("--n must be >= 2");
      if (!(cfg.eps > 0)) throw UsageError("--eps must be > 0");
      if (!(cfg.sigma > 0)) throw UsageError("--sigma must be > 0");
      if (bounds_k < 1) throw UsageError("--k must be >= 1");
      const auto b = bound_block(cfg.n, bounds_k, cfg.eps, cfg.sigma);
      print_value(out, "upper", b.upper);
      print_value(out, "lower", b.lower);
      if (b.status == BoundStatus::negative_lower) {
        err << "warning: lower bound is not positive for eps = " << cfg.eps << '\n';
      }
      return kExitOk;
    }

    if (moments_cmd->parsed()) {
      if (moments_k < 1 || moments_k > 6) throw UsageError("--k must lie in 1..6");
      for (int j = 1; j <= moments_k; ++j) {
        out << 'm' << 2 * j << " = "
            << static_cast<unsigned long long>(gamma_m_moment(j)) << '\n';
      }
      return kExitOk;
    }

    if (gen_cmd->parsed()) {
      const auto dist = *parse_distribution(gen_dist);
      const BlockSpec spec{gen_n, gen_k};
      try {
        spec.validate();
        if (gen_n / gen_k < 2) throw std::invalid_argument("block size must be >= 2");
      } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
      }
      if (!(gen_sigma > 0)) throw UsageError("--sigma must be > 0");
      auto l = sample_block_laplacian(spec, dist, substream_seed(gen_seed, 0));
      if (gen_sigma != 1.0) l = l.scaled(gen_sigma);
      if (gen_out.empty()) {
        write_matrix(out, l);
      } else {
        std::ofstream file(gen_out, std::ios::binary);
        if (!file) throw std::runtime_error("cannot open " + gen_out);
        write_matrix(file, l);
      }
      return kExitOk;
    }

    if (replay_cmd->parsed()) {
      std::ifstream in(replay_manifest);
      if (!in) throw std::runtime_error("cannot read " + replay_manifest);
      const auto manifest = manifest_from_json(nlohmann::json::parse(in));
      const std::string base = fs::path(replay_manifest).parent_path().string();
      const auto result = replay(manifest, replay_threads, base);
      if (!replay_out.empty()) write_file(replay_out, records_csv(result.records, true));
      out << "recorded_digest = " << manifest.records_digest << '\n';
      out << "replayed_digest = " << result.digest << '\n';
      if (result.file_matches) {
        out << "records_file = " << (*result.file_matches ? "match" : "MISMATCH") << '\n';
      }
      const bool ok = result.digest_matches && result.file_matches.value_or(true);
      if (!ok) {
        err << "error: replay does not reproduce the recorded records\n";
        return kExitFailure;
      }
      out << "replay = ok\n";
      return kExitOk;
    }
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitFailure;
  }
  return kExitUsage;
}

}  // namespace laprmt::cli
