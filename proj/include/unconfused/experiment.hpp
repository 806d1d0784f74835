#pragma once

// Experiment protocols on the synthetic unit-sphere problem: noise-level
// sweep, confusion-estimation sweep and the semi-supervised relabelling
// pipeline. Runs are independent and seeded by (base seed, run id); results
// are gathered by run id so output does not depend on scheduling.

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "unconfused/metrics.hpp"
#include "unconfused/perceptron.hpp"
#include "unconfused/synthgen.hpp"
#include "unconfused/uma.hpp"

namespace unconfused {

inline constexpr int kConfigSchemaVersion = 1;

struct SemisupConfig {
  std::size_t n_train = 15000;
  double labeled_fraction = 0.03;
  /// Share of the labelled points used to train the labelling classifier;
  /// the rest estimate the confusion matrix.
  double bootstrap_share = 0.5;
};

struct ExperimentConfig {
  SynthConfig synth;
  UmaConfig uma;
  /// Unset means UmaConfig::default_max_iters(margin).
  std::optional<std::size_t> uma_max_iters;
  PerceptronConfig perceptron;
  std::size_t n_runs = 10;
  std::string output_dir = "out";
  std::vector<int> sweep_range = default_sweep_range();
  SemisupConfig semisup;
  /// 0 = UNCONFUSED_THREADS or hardware concurrency.
  std::size_t threads = 0;

  static std::vector<int> default_sweep_range();
  void validate() const;
  UmaConfig effective_uma() const;
};

nlohmann::json to_json(const ExperimentConfig& cfg);
/// Missing keys keep their defaults. Throws FormatError on a schema mismatch.
ExperimentConfig config_from_json(const nlohmann::json& j);
ExperimentConfig load_config(const std::filesystem::path& path);

/// FNV-1a of the canonical JSON dump.
std::uint64_t config_hash(const ExperimentConfig& cfg);

/// Stream for run `run_id`, derived from the base seed.
RngStream run_stream(std::uint64_t base_seed, std::size_t run_id);

/// Thread count for run-level parallelism.
std::size_t resolve_threads(const ExperimentConfig& cfg);

/// Optional hook invoked after every UMA / perceptron update during a
/// protocol. Runs execute concurrently, so the observer must be thread-safe.
struct ProtocolHooks {
  UpdateObserver on_update;
  std::function<void(const ConfusionDiagnostics&)> on_confusion;
};

struct RunRecord {
  std::size_t run_id = 0;
  std::uint64_t seed = 0;
  nlohmann::json config;
  std::string learner;
  int level = 0;  // sweep level; 0 when not a sweep
  EvalReport report;
  double wall_time = 0.0;
  std::size_t iterations = 0;
};

nlohmann::json to_json(const RunRecord& r);
RunRecord run_record_from_json(const nlohmann::json& j);
nlohmann::json to_json(const EvalReport& r);
EvalReport eval_report_from_json(const nlohmann::json& j);

struct Summary {
  double mean = 0.0;
  double stddev = 0.0;  // sample standard deviation, 0 for one value
  std::size_t count = 0;
};
Summary summarize(const std::vector<double>& values);

// ---- generate ----

struct GeneratedProblem {
  LinearModel reference;
  LabeledDataset train;
  LabeledDataset test;
};

GeneratedProblem generate_problem(const SynthConfig& synth, RngStream& run);

// ---- noise sweep ----

struct NoiseSweepRow {
  int level = 0;
  double fro_c = 0.0;  // mean over runs of ||C_i||_F
  Summary uma_rate, mperc_rate;
  Summary uma_offdiag, mperc_offdiag;
  Summary uma_error, mperc_error;
};

struct NoiseSweepResult {
  std::vector<NoiseSweepRow> rows;
  std::vector<RunRecord> records;
};

NoiseSweepResult run_noise_sweep(const ExperimentConfig& cfg,
                                 const ProtocolHooks& hooks = {});

// ---- estimation sweep ----

struct EstimationSweepRow {
  int level = 0;
  double factor = 0.0;  // 1 - level / 10
  double fro_c = 0.0;
  Summary uma_rate, uma_offdiag, uma_error;
};

struct EstimationSweepResult {
  std::vector<EstimationSweepRow> rows;
  std::vector<RunRecord> records;
};

EstimationSweepResult run_estimation_sweep(const ExperimentConfig& cfg,
                                           const ProtocolHooks& hooks = {});

// ---- semi-supervised relabelling ----

struct SemisupRun {
  std::size_t run_id = 0;
  double error_mperc = 0.0;       // perceptron on relabelled data
  double error_mperc_full = 0.0;  // perceptron on true labels
  std::optional<double> error_uma;  // empty when the estimate degraded
  double bootstrap_error = 0.0;
  double relabel_noise = 0.0;  // fraction of relabelled points that are wrong
  std::string diagnostic;
};

struct SemisupResult {
  std::vector<SemisupRun> runs;
  Summary mperc, mperc_full, uma;
  std::size_t degraded_runs = 0;
};

SemisupResult run_semisup(const ExperimentConfig& cfg,
                          const ProtocolHooks& hooks = {});

// ---- CSV output ----

/// Comment line "# config_hash=<hex> seed=<u64>".
std::string csv_comment(const ExperimentConfig& cfg);
std::string noise_sweep_csv(const ExperimentConfig& cfg,
                            const NoiseSweepResult& r);
std::string estimation_sweep_csv(const ExperimentConfig& cfg,
                                 const EstimationSweepResult& r);
std::string semisup_csv(const ExperimentConfig& cfg, const SemisupResult& r);
std::string run_records_jsonl(const std::vector<RunRecord>& records);

}  // namespace unconfused
