#include "laprmt/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <chrono>
#include <cstdio>
#include <cmath>
#include <exception>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <sstream>
#include <thread>

#include "laprmt/laws.hpp"

namespace laprmt {

std::string_view to_string(ExperimentKind kind) {
  switch (kind) {
    case ExperimentKind::esd:
      return "esd";
    case ExperimentKind::max_diag:
      return "max-diag";
    case ExperimentKind::max_eig:
      return "max-eig";
    case ExperimentKind::block:
      return "block";
    case ExperimentKind::bounds:
      return "bounds";
    case ExperimentKind::ratio:
      return "ratio";
  }
  return "unknown";
}

std::optional<ExperimentKind> parse_kind(std::string_view name) {
  for (auto kind : {ExperimentKind::esd, ExperimentKind::max_diag,
                    ExperimentKind::max_eig, ExperimentKind::block,
                    ExperimentKind::bounds, ExperimentKind::ratio}) {
    if (to_string(kind) == name) return kind;
  }
  return std::nullopt;
}

std::string_view to_string(EsdScale scale) {
  return scale == EsdScale::sqrt_n ? "sqrt-n" : "sqrt-n-minus-1";
}

std::optional<EsdScale> parse_scale(std::string_view name) {
  if (name == "sqrt-n") return EsdScale::sqrt_n;
  if (name == "sqrt-n-minus-1") return EsdScale::sqrt_n_minus_1;
  return std::nullopt;
}

void ExperimentConfig::validate() const {
  auto fail = [](const std::string& what) { throw std::invalid_argument(what); };
  if (reps < 1) fail("reps must be >= 1");
  if (n < 3) fail("n must be >= 3");
  if (kind == ExperimentKind::block) {
    BlockSpec{n, k}.validate();
    if (n / k < 3) fail("block size n/k must be >= 3");
  } else if (k != 1) {
    fail("k applies to block runs only");
  }
  if (!(eps > 0)) fail("eps must be > 0");
  if (!(sigma > 0)) fail("sigma must be > 0");
  if (!(K > 0)) fail("K must be > 0");
  if (!(c > 0)) fail("c must be > 0");
  if (bins < 10) fail("bins must be >= 10");
}

double eigen_ratio(std::size_t n, double lambda_max) {
  const double nd = static_cast<double>(n);
  return lambda_max / std::sqrt(nd * std::log(nd));
}

double nearest_rank_quantile(const std::vector<double>& sorted, double p) {
  if (sorted.empty()) throw std::invalid_argument("quantile of empty sample");
  const double rank = std::ceil(p * static_cast<double>(sorted.size()));
  const auto index = static_cast<std::size_t>(std::max(rank, 1.0)) - 1;
  return sorted[std::min(index, sorted.size() - 1)];
}

namespace {

struct ReplicateOutput {
  ReplicateRecord record;
  std::vector<double> eigenvalues;
};

ReplicateOutput compute_replicate(const ExperimentConfig& cfg, std::size_t r) {
  const auto start = std::chrono::steady_clock::now();
  const std::uint64_t seed = substream_seed(cfg.seed, r);
  ReplicateOutput out;
  ReplicateRecord& rec = out.record;
  rec.replicate = r;

  ComparisonOptions options;
  options.K = cfg.K;
  options.c = cfg.c;
  options.eps = cfg.eps;
  options.sigma = cfg.sigma;

  // Order used for the Gumbel constants: the block size for block runs.
  std::size_t stat_order = cfg.n;
  double scale = 0.0;

  try {
    switch (cfg.kind) {
      case ExperimentKind::max_diag: {
        auto diag = sample_laplacian_diagonal(cfg.n, cfg.dist, seed);
        for (double& d : diag) d *= cfg.sigma;
        rec.max_diag = *std::max_element(diag.begin(), diag.end());
        break;
      }
      case ExperimentKind::block: {
        auto blocks = sample_laplacian_blocks(BlockSpec{cfg.n, cfg.k}, cfg.dist, seed);
        stat_order = cfg.n / cfg.k;
        options.blocks = cfg.k;
        double top = -INFINITY;
        double diag_top = -INFINITY;
        for (auto& block : blocks) {
          if (cfg.sigma != 1.0) block = block.scaled(cfg.sigma);
          top = std::max(top, lambda_max(block));
          const auto d = block.diagonal();
          diag_top = std::max(diag_top, *std::max_element(d.begin(), d.end()));
          scale = std::max(scale, block.max_abs());
        }
        rec.lambda_max = top;
        rec.max_diag = diag_top;
        break;
      }
      default: {
        auto l = sample_laplacian(cfg.n, cfg.dist, seed);
        if (cfg.sigma != 1.0) l = l.scaled(cfg.sigma);
        const auto d = l.diagonal();
        rec.max_diag = *std::max_element(d.begin(), d.end());
        scale = l.max_abs();
        if (cfg.kind == ExperimentKind::esd) {
          auto spectrum = eigensolve(l, false);
          rec.lambda_max = spectrum.eigenvalues.back();
          const double nd = static_cast<double>(cfg.n);
          const double divisor =
              cfg.scale == EsdScale::sqrt_n ? std::sqrt(nd) : std::sqrt(nd - 1.0);
          out.eigenvalues = std::move(spectrum.eigenvalues);
          for (double& v : out.eigenvalues) v /= divisor;
        } else {
          rec.lambda_max = lambda_max(l);
        }
        break;
      }
    }
  } catch (const SolverFailure& e) {
    rec.failure = e.what();
  }

  if (!rec.failure) {
    rec.m_n = stat_max_diag_value(stat_order, rec.max_diag);
    if (rec.lambda_max) {
      rec.r_n = stat_max_eig_value(stat_order, *rec.lambda_max);
      const auto report =
          evaluate_bounds(cfg.n, *rec.lambda_max, rec.max_diag, scale, options);
      rec.minmax_ok = report.minmax_ok;
      rec.upper_ok = report.upper_ok;
      rec.lower_ok = report.lower_ok;
      rec.comparison_ok = report.comparison_ok;
      rec.hypothesis_ok = report.hypothesis_ok;
    }
  }
  rec.wall_ms = std::chrono::duration<double, std::milli>(
                    std::chrono::steady_clock::now() - start)
                    .count();
  return out;
}

std::vector<ReplicateOutput> run_replicates(const ExperimentConfig& cfg) {
  std::vector<ReplicateOutput> outputs(cfg.reps);
  std::size_t workers = cfg.threads == 0
                            ? std::max<std::size_t>(1, std::thread::hardware_concurrency())
                            : cfg.threads;
  workers = std::min(workers, cfg.reps);

  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  auto work = [&] {
    for (;;) {
      const std::size_t r = next.fetch_add(1);
      if (r >= cfg.reps) return;
      try {
        outputs[r] = compute_replicate(cfg, r);
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (!error) error = std::current_exception();
        next.store(cfg.reps);
        return;
      }
    }
  };

  if (workers <= 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (std::size_t t = 0; t < workers; ++t) pool.emplace_back(work);
  }
  if (error) std::rethrow_exception(error);
  return outputs;
}

nlohmann::ordered_json quantile_summary(std::vector<double> values) {
  nlohmann::ordered_json q = nlohmann::ordered_json::object();
  if (values.empty()) return q;
  std::sort(values.begin(), values.end());
  for (double p : {0.05, 0.25, 0.5, 0.75, 0.95}) {
    char key[16];
    std::snprintf(key, sizeof key, "q%02d", static_cast<int>(std::lround(p * 100)));
    q[key] = nearest_rank_quantile(values, p);
  }
  return q;
}

double mean_of(const std::vector<double>& values) {
  return compensated_sum(values) / static_cast<double>(values.size());
}

double fraction(const std::vector<const ReplicateRecord*>& records,
                bool ReplicateRecord::*flag) {
  std::size_t hits = 0;
  for (const auto* r : records) hits += (r->*flag) ? 1 : 0;
  return static_cast<double>(hits) / static_cast<double>(records.size());
}

nlohmann::ordered_json summarize(const ExperimentConfig& cfg,
                                 const std::vector<ReplicateRecord>& records,
                                 const std::vector<double>& pooled) {
  nlohmann::ordered_json s;
  std::vector<const ReplicateRecord*> ok;
  nlohmann::ordered_json failed = nlohmann::ordered_json::array();
  for (const auto& r : records) {
    if (r.failure) {
      failed.push_back(r.replicate);
    } else {
      ok.push_back(&r);
    }
  }
  s["replicates"] = records.size();
  s["failures"] = failed.size();
  s["failed_replicates"] = failed;
  s["log"] = "natural";
  s["quantile_rule"] = "nearest-rank";
  if (ok.empty()) return s;

  const bool block = cfg.kind == ExperimentKind::block;
  const std::size_t stat_order = block ? cfg.n / cfg.k : cfg.n;
  const auto constants = gumbel_constants(stat_order);
  s["gumbel_order"] = stat_order;
  s["a_n"] = constants.a_n;
  s["b_n"] = constants.b_n;
  s["a_n_prime"] = constants.a_n_prime;
  s["b_n_prime"] = constants.b_n_prime;

  std::vector<double> m_values;
  for (const auto* r : ok) m_values.push_back(r->m_n);
  const double k = static_cast<double>(block ? cfg.k : 1);
  const RealFunction target = [k](double x) { return gumbel_k_cdf(x, k); };
  s["target_law"] = block ? "G_k(x) = exp(-k exp(-x))" : "G(x) = exp(-exp(-x))";
  s["target_k"] = block ? cfg.k : 1;

  s["m_n"] = {{"mean", mean_of(m_values)},
              {"ks", ks_statistic(EmpiricalDistribution(m_values), target)},
              {"quantiles", quantile_summary(m_values)}};

  if (!ok.front()->spectral()) return s;

  std::vector<double> r_values;
  std::vector<double> ratios;
  for (const auto* r : ok) {
    r_values.push_back(*r->r_n);
    ratios.push_back(eigen_ratio(cfg.n, *r->lambda_max));
  }
  s["r_n"] = {{"mean", mean_of(r_values)},
              {"ks", ks_statistic(EmpiricalDistribution(r_values), target)},
              {"quantiles", quantile_summary(r_values)}};

  const auto b = bound_block(cfg.n, cfg.k, cfg.eps, cfg.sigma);
  const double norm = std::sqrt(static_cast<double>(cfg.n) *
                                std::log(static_cast<double>(cfg.n)));
  auto sorted_ratios = ratios;
  std::sort(sorted_ratios.begin(), sorted_ratios.end());
  s["ratio"] = {{"definition", "lambda_max / sqrt(n log n)"},
                {"target", std::sqrt(2.0 / k) * cfg.sigma},
                {"median", nearest_rank_quantile(sorted_ratios, 0.5)},
                {"mean", mean_of(ratios)},
                {"quantiles", quantile_summary(ratios)},
                {"lower_bound", b.lower / norm},
                {"upper_bound", b.upper / norm}};

  std::size_t within = 0;
  for (const auto* r : ok) within += (r->upper_ok && r->lower_ok) ? 1 : 0;
  s["coverage"] = {
      {"minmax", fraction(ok, &ReplicateRecord::minmax_ok)},
      {"upper", fraction(ok, &ReplicateRecord::upper_ok)},
      {"lower", fraction(ok, &ReplicateRecord::lower_ok)},
      {"within_bounds", static_cast<double>(within) / static_cast<double>(ok.size())},
      {"comparison", fraction(ok, &ReplicateRecord::comparison_ok)},
      {"hypothesis", fraction(ok, &ReplicateRecord::hypothesis_ok)},
      {"eps", cfg.eps},
      {"K", cfg.K},
      {"c", cfg.c}};

  if (cfg.kind == ExperimentKind::esd && !pooled.empty()) {
    const EmpiricalDistribution esd(pooled);
    const auto sorted = esd.samples();
    nlohmann::ordered_json moments;
    for (int p = 1; p <= 4; ++p) moments["m" + std::to_string(p)] = esd.raw_moment(p);
    const auto hist = density_histogram(sorted, cfg.bins, sorted.front(), sorted.back());
    nlohmann::ordered_json esd_json;
    esd_json["scale"] = to_string(cfg.scale);
    esd_json["samples"] = esd.size();
    esd_json["moments"] = moments;
    esd_json["limit_moments"] = {{"m2", gamma_m_moment(1)}, {"m4", gamma_m_moment(2)}};
    esd_json["histogram"] = {{"lo", hist.lo}, {"hi", hist.hi},
                             {"bins", cfg.bins}, {"density", hist.density}};
    const auto reference = MixtureParams::reference(cfg.sigma);
    esd_json["mixture_reference"] = {{"alpha", reference.alpha},
                                     {"radius", reference.radius},
                                     {"std_dev", reference.std_dev}};
    if (esd.size() >= 1000) {
      const auto fit = fit_mixture(esd);
      esd_json["mixture_fit"] = {{"alpha", fit.params.alpha},
                                 {"radius", fit.params.radius},
                                 {"std_dev", fit.params.std_dev},
                                 {"residual", fit.residual},
                                 {"converged", fit.converged}};
    }
    s["esd"] = esd_json;
  }
  return s;
}

void append_real(std::string& out, double v) {
  char buffer[64];
  const auto res = std::to_chars(buffer, buffer + sizeof buffer, v);
  out.append(buffer, res.ptr);
}

}  // namespace

RunResult run(const ExperimentConfig& config) {
  config.validate();
  auto outputs = run_replicates(config);

  RunResult result;
  result.records.reserve(outputs.size());
  for (auto& o : outputs) {
    result.records.push_back(std::move(o.record));
    if (!o.eigenvalues.empty()) {
      result.pooled_eigenvalues.insert(result.pooled_eigenvalues.end(),
                                       o.eigenvalues.begin(), o.eigenvalues.end());
    }
  }

  ExperimentManifest& m = result.manifest;
  m.draw_order = std::string(kDrawOrderContract);
  m.config = config;
  m.records_digest = records_digest(result.records);
  m.summary = summarize(config, result.records, result.pooled_eigenvalues);
  return result;
}

std::string records_csv(const std::vector<ReplicateRecord>& records, bool canonical) {
  std::string out(kCsvHeader);
  out += '\n';
  for (const auto& r : records) {
    out += std::to_string(r.replicate);
    out += ',';
    if (!r.failure) {
      if (r.lambda_max) append_real(out, *r.lambda_max);
      out += ',';
      append_real(out, r.max_diag);
      out += ',';
      append_real(out, r.m_n);
      out += ',';
      if (r.r_n) append_real(out, *r.r_n);
      out += ',';
      if (r.spectral()) {
        out += r.minmax_ok ? '1' : '0';
        out += ',';
        out += r.upper_ok ? '1' : '0';
        out += ',';
        out += r.comparison_ok ? '1' : '0';
      } else {
        out += ",,";
      }
    } else {
      out += ",,,,,,";
    }
    out += ',';
    if (canonical) {
      out += '0';
    } else {
      append_real(out, r.wall_ms);
    }
    out += '\n';
  }
  return out;
}

std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t hash = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    hash ^= c;
    hash *= 0x100000001b3ULL;
  }
  return hash;
}

namespace {

std::string format_digest(std::uint64_t h) {
  char buffer[32];
  std::snprintf(buffer, sizeof buffer, "fnv1a64:%016llx",
                static_cast<unsigned long long>(h));
  return buffer;
}

}  // namespace

std::string records_digest(const std::vector<ReplicateRecord>& records) {
  return format_digest(fnv1a64(records_csv(records, true)));
}

std::string canonical_file_digest(std::string_view csv_text) {
  std::string canonical;
  std::size_t pos = 0;
  bool header = true;
  while (pos < csv_text.size()) {
    std::size_t end = csv_text.find('\n', pos);
    if (end == std::string_view::npos) end = csv_text.size();
    std::string_view line = csv_text.substr(pos, end - pos);
    if (header) {
      canonical.append(line);
      header = false;
    } else {
      const auto comma = line.rfind(',');
      canonical.append(line.substr(0, comma == std::string_view::npos ? 0 : comma + 1));
      canonical += '0';
    }
    canonical += '\n';
    pos = end + 1;
  }
  return format_digest(fnv1a64(canonical));
}

nlohmann::ordered_json to_json(const ExperimentConfig& c) {
  nlohmann::ordered_json j;
  j["kind"] = to_string(c.kind);
  j["n"] = c.n;
  j["reps"] = c.reps;
  j["dist"] = to_string(c.dist);
  j["k"] = c.k;
  j["eps"] = c.eps;
  j["sigma"] = c.sigma;
  j["K"] = c.K;
  j["c"] = c.c;
  j["seed"] = c.seed;
  j["threads"] = c.threads;
  j["bins"] = c.bins;
  j["scale"] = to_string(c.scale);
  j["timing"] = c.timing;
  return j;
}

ExperimentConfig config_from_json(const nlohmann::json& j) {
  ExperimentConfig c;
  const auto kind = parse_kind(j.at("kind").get<std::string>());
  if (!kind) throw std::invalid_argument("manifest: unknown kind");
  c.kind = *kind;
  c.n = j.at("n").get<std::size_t>();
  c.reps = j.at("reps").get<std::size_t>();
  const auto dist = parse_distribution(j.at("dist").get<std::string>());
  if (!dist) throw std::invalid_argument("manifest: unknown dist");
  c.dist = *dist;
  c.k = j.at("k").get<std::size_t>();
  c.eps = j.at("eps").get<double>();
  c.sigma = j.at("sigma").get<double>();
  c.K = j.at("K").get<double>();
  c.c = j.at("c").get<double>();
  c.seed = j.at("seed").get<std::uint64_t>();
  c.threads = j.value("threads", std::size_t{1});
  c.bins = j.value("bins", std::size_t{100});
  const auto scale = parse_scale(j.value("scale", std::string("sqrt-n")));
  if (!scale) throw std::invalid_argument("manifest: unknown scale");
  c.scale = *scale;
  c.timing = j.value("timing", false);
  return c;
}

nlohmann::ordered_json to_json(const ExperimentManifest& m) {
  nlohmann::ordered_json j;
  j["schema"] = m.schema;
  j["version"] = m.version;
  j["draw_order"] = m.draw_order;
  j["config"] = to_json(m.config);
  j["records_schema"] = m.records_schema;
  j["records_file"] = m.records_file;
  j["records_digest"] = m.records_digest;
  j["summary"] = m.summary;
  return j;
}

ExperimentManifest manifest_from_json(const nlohmann::json& j) {
  ExperimentManifest m;
  m.schema = j.at("schema").get<std::string>();
  m.version = j.at("version").get<std::string>();
  m.draw_order = j.at("draw_order").get<std::string>();
  m.config = config_from_json(j.at("config"));
  m.records_schema = j.value("records_schema", std::string(kRecordsSchema));
  m.records_file = j.value("records_file", std::string());
  m.records_digest = j.at("records_digest").get<std::string>();
  if (j.contains("summary")) m.summary = nlohmann::ordered_json(j.at("summary"));
  return m;
}

ReplayResult replay(const ExperimentManifest& manifest, std::size_t threads,
                    const std::string& base_dir) {
  if (manifest.schema != kManifestSchema) {
    throw ReplayError("manifest schema '" + manifest.schema + "' is not supported");
  }
  if (manifest.version != kArtifactVersion) {
    throw ReplayError("manifest version " + manifest.version +
                      " does not match artifact version " + std::string(kArtifactVersion));
  }
  if (manifest.draw_order != kDrawOrderContract) {
    throw ReplayError("draw-order contract mismatch: " + manifest.draw_order);
  }
  ExperimentConfig config = manifest.config;
  if (threads != 0) config.threads = threads;
  auto result = run(config);

  ReplayResult out;
  out.digest = result.manifest.records_digest;
  out.digest_matches = out.digest == manifest.records_digest;
  out.records = std::move(result.records);

  if (!manifest.records_file.empty()) {
    std::filesystem::path path(manifest.records_file);
    if (path.is_relative() && !base_dir.empty()) path = std::filesystem::path(base_dir) / path;
    std::ifstream in(path, std::ios::binary);
    if (in) {
      std::stringstream buffer;
      buffer << in.rdbuf();
      out.file_matches = canonical_file_digest(buffer.str()) == out.digest;
    }
  }
  return out;
}

}  // namespace laprmt
