#include "unconfused/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <numeric>
#include <sstream>
#include <thread>

#include "unconfused/error.hpp"
#include "unconfused/io.hpp"

namespace unconfused {
namespace {

using nlohmann::json;
using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

/// Runs body(run_id) for every run on a small pool. The first exception (by
/// run id) is rethrown after all workers finish.
template <typename Body>
void for_each_run(std::size_t n_runs, std::size_t threads, Body&& body) {
  std::vector<std::exception_ptr> errors(n_runs);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t r = next++; r < n_runs; r = next++) {
      try {
        body(r);
      } catch (...) {
        errors[r] = std::current_exception();
      }
    }
  };
  const std::size_t pool = std::max<std::size_t>(1, std::min(threads, n_runs));
  if (pool == 1) {
    worker();
  } else {
    std::vector<std::thread> workers;
    workers.reserve(pool);
    for (std::size_t t = 0; t < pool; ++t) workers.emplace_back(worker);
    for (auto& t : workers) t.join();
  }
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

std::string hex64(std::uint64_t v) {
  std::ostringstream os;
  os << std::hex;
  os.width(16);
  os.fill('0');
  os << v;
  return os.str();
}

PerceptronConfig perceptron_for(const ExperimentConfig& cfg, RngStream stream,
                                LabelSource source) {
  PerceptronConfig p = cfg.perceptron;
  p.seed = stream.next_u64();
  p.label_source = source;
  return p;
}

LabeledDataset with_predicted_labels(const LabeledDataset& ds,
                                     const LinearModel& labeler) {
  LabeledDataset out = ds;
  for (std::size_t i = 0; i < ds.size(); ++i)
    out.set_noisy_label(i, predict(labeler, ds[i].features));
  return out;
}

void notify(const ProtocolHooks& hooks, const ConfusionMatrix& c) {
  if (hooks.on_confusion) hooks.on_confusion(validate_confusion(c));
}

RunRecord make_record(const ExperimentConfig& cfg, std::size_t run_id,
                      std::string learner, int level, EvalReport report,
                      double wall, std::size_t iterations) {
  RunRecord r;
  r.run_id = run_id;
  r.seed = cfg.synth.seed;
  r.config = to_json(cfg);
  r.learner = std::move(learner);
  r.level = level;
  r.report = std::move(report);
  r.wall_time = wall;
  r.iterations = iterations;
  return r;
}

json matrix_to_json(const DenseMatrix& m) {
  json rows = json::array();
  for (std::size_t r = 0; r < m.rows(); ++r)
    rows.push_back(std::vector<double>(m.row(r).begin(), m.row(r).end()));
  return rows;
}

DenseMatrix matrix_from_json(const json& rows) {
  const std::size_t r = rows.size();
  const std::size_t c = r ? rows[0].size() : 0;
  std::vector<double> entries;
  for (const auto& row : rows) {
    auto v = row.get<std::vector<double>>();
    if (v.size() != c) throw FormatError("ragged matrix in JSON");
    entries.insert(entries.end(), v.begin(), v.end());
  }
  return DenseMatrix(r, c, std::move(entries));
}

}  // namespace

// ---- configuration ----

std::vector<int> ExperimentConfig::default_sweep_range() {
  std::vector<int> r(20);
  std::iota(r.begin(), r.end(), 1);
  return r;
}

void ExperimentConfig::validate() const {
  synth.validate();
  effective_uma().validate();
  perceptron.validate();
  if (n_runs < 1) throw InvalidValue("n_runs must be >= 1");
  if (sweep_range.empty()) throw InvalidValue("sweep_range is empty");
  for (int level : sweep_range)
    if (level < 0 || level > 20)
      throw InvalidValue("sweep levels must lie in [0, 20]");
  if (!(semisup.labeled_fraction > 0.0 && semisup.labeled_fraction <= 1.0))
    throw InvalidValue("labeled_fraction must lie in (0, 1]");
  if (!(semisup.bootstrap_share > 0.0 && semisup.bootstrap_share < 1.0))
    throw InvalidValue("bootstrap_share must lie in (0, 1)");
  if (semisup.n_train < 4) throw InvalidValue("semisup n_train too small");
}

UmaConfig ExperimentConfig::effective_uma() const {
  UmaConfig u = uma;
  u.max_iters = uma_max_iters.value_or(
      UmaConfig::default_max_iters(synth.margin_theta > 0.0
                                       ? std::optional(synth.margin_theta)
                                       : std::nullopt));
  return u;
}

json to_json(const ExperimentConfig& cfg) {
  json j;
  j["schema_version"] = kConfigSchemaVersion;
  j["synth"] = {{"q", cfg.synth.q_classes},
                {"d", cfg.synth.dim},
                {"n_train", cfg.synth.n_train},
                {"n_test", cfg.synth.n_test},
                {"margin", cfg.synth.margin_theta},
                {"seed", cfg.synth.seed}};
  j["uma"] = {{"alpha", cfg.uma.alpha},
              {"stop_norm", cfg.uma.stop_norm},
              {"selection", to_string(cfg.uma.selection)},
              {"step_rule", to_string(cfg.uma.step_rule)},
              {"prior_floor", cfg.uma.prior_floor}};
  j["uma"]["max_iters"] =
      cfg.uma_max_iters ? json(*cfg.uma_max_iters) : json(nullptr);
  j["perceptron"] = {{"max_epochs", cfg.perceptron.max_epochs},
                     {"shuffle", cfg.perceptron.shuffle}};
  j["n_runs"] = cfg.n_runs;
  j["output_dir"] = cfg.output_dir;
  j["sweep_range"] = cfg.sweep_range;
  j["semisup"] = {{"n_train", cfg.semisup.n_train},
                  {"labeled_fraction", cfg.semisup.labeled_fraction},
                  {"bootstrap_share", cfg.semisup.bootstrap_share}};
  return j;
}

ExperimentConfig config_from_json(const json& j) {
  ExperimentConfig cfg;
  try {
    if (j.contains("schema_version") &&
        j.at("schema_version").get<int>() != kConfigSchemaVersion) {
      throw FormatError("unsupported config schema_version " +
                        j.at("schema_version").dump());
    }
    auto read = [](const json& obj, const char* key, auto& field) {
      if (obj.contains(key) && !obj.at(key).is_null())
        field = obj.at(key).get<std::decay_t<decltype(field)>>();
    };
    if (j.contains("synth")) {
      const auto& s = j.at("synth");
      read(s, "q", cfg.synth.q_classes);
      read(s, "d", cfg.synth.dim);
      read(s, "n_train", cfg.synth.n_train);
      read(s, "n_test", cfg.synth.n_test);
      read(s, "margin", cfg.synth.margin_theta);
      read(s, "seed", cfg.synth.seed);
    }
    if (j.contains("uma")) {
      const auto& u = j.at("uma");
      read(u, "alpha", cfg.uma.alpha);
      read(u, "stop_norm", cfg.uma.stop_norm);
      read(u, "prior_floor", cfg.uma.prior_floor);
      if (u.contains("selection"))
        cfg.uma.selection = parse_selection(u.at("selection").get<std::string>());
      if (u.contains("step_rule"))
        cfg.uma.step_rule = parse_step_rule(u.at("step_rule").get<std::string>());
      if (u.contains("max_iters") && !u.at("max_iters").is_null())
        cfg.uma_max_iters = u.at("max_iters").get<std::size_t>();
    }
    if (j.contains("perceptron")) {
      const auto& p = j.at("perceptron");
      read(p, "max_epochs", cfg.perceptron.max_epochs);
      read(p, "shuffle", cfg.perceptron.shuffle);
    }
    read(j, "n_runs", cfg.n_runs);
    read(j, "output_dir", cfg.output_dir);
    read(j, "sweep_range", cfg.sweep_range);
    if (j.contains("semisup")) {
      const auto& s = j.at("semisup");
      read(s, "n_train", cfg.semisup.n_train);
      read(s, "labeled_fraction", cfg.semisup.labeled_fraction);
      read(s, "bootstrap_share", cfg.semisup.bootstrap_share);
    }
  } catch (const json::exception& e) {
    throw FormatError(std::string("bad config: ") + e.what());
  }
  return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  const auto text = io::read_text(path);
  try {
    return config_from_json(json::parse(text));
  } catch (const json::parse_error& e) {
    throw FormatError(path.string() + ": invalid JSON: " + e.what());
  }
}

std::uint64_t config_hash(const ExperimentConfig& cfg) {
  const std::string canon = to_json(cfg).dump();
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : canon) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  return h;
}

RngStream run_stream(std::uint64_t base_seed, std::size_t run_id) {
  return RngStream(base_seed, 0).split(run_id);
}

std::size_t resolve_threads(const ExperimentConfig& cfg) {
  if (cfg.threads > 0) return cfg.threads;
  std::size_t n = std::max(1u, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("UNCONFUSED_THREADS")) {
    char* end = nullptr;
    const unsigned long cap = std::strtoul(env, &end, 10);
    if (end != env && cap > 0) n = std::min<std::size_t>(n, cap);
  }
  return n;
}

Summary summarize(const std::vector<double>& values) {
  Summary s;
  s.count = values.size();
  if (values.empty()) return s;
  s.mean = std::accumulate(values.begin(), values.end(), 0.0) /
           static_cast<double>(values.size());
  if (values.size() > 1) {
    double acc = 0.0;
    for (double v : values) acc += (v - s.mean) * (v - s.mean);
    s.stddev = std::sqrt(acc / static_cast<double>(values.size() - 1));
  }
  return s;
}

// ---- serialization of reports and run records ----

json to_json(const EvalReport& r) {
  json j;
  j["confusion_hat"] = matrix_to_json(r.confusion_hat);
  j["confusion_rate"] = r.confusion_rate;
  j["offdiag_confusion_rate"] = r.offdiag_confusion_rate;
  j["error_rate"] = r.error_rate;
  j["per_class_error"] = r.per_class_error.entries();
  j["class_present"] = r.class_present;
  j["class_counts"] = r.class_counts;
  j["n"] = r.n;
  return j;
}

EvalReport eval_report_from_json(const json& j) {
  EvalReport r;
  try {
    r.confusion_hat = matrix_from_json(j.at("confusion_hat"));
    r.confusion_rate = j.at("confusion_rate").get<double>();
    r.offdiag_confusion_rate = j.at("offdiag_confusion_rate").get<double>();
    r.error_rate = j.at("error_rate").get<double>();
    r.per_class_error =
        DenseVector(j.at("per_class_error").get<std::vector<double>>());
    r.class_present = j.at("class_present").get<std::vector<bool>>();
    r.class_counts = j.at("class_counts").get<std::vector<std::size_t>>();
    r.n = j.at("n").get<std::size_t>();
  } catch (const json::exception& e) {
    throw FormatError(std::string("bad report JSON: ") + e.what());
  }
  return r;
}

json to_json(const RunRecord& r) {
  return {{"run_id", r.run_id},       {"seed", r.seed},
          {"config", r.config},       {"learner", r.learner},
          {"level", r.level},         {"report", to_json(r.report)},
          {"wall_time", r.wall_time}, {"iterations", r.iterations}};
}

RunRecord run_record_from_json(const json& j) {
  RunRecord r;
  try {
    r.run_id = j.at("run_id").get<std::size_t>();
    r.seed = j.at("seed").get<std::uint64_t>();
    r.config = j.at("config");
    r.learner = j.at("learner").get<std::string>();
    r.level = j.at("level").get<int>();
    r.report = eval_report_from_json(j.at("report"));
    r.wall_time = j.at("wall_time").get<double>();
    r.iterations = j.at("iterations").get<std::size_t>();
  } catch (const json::exception& e) {
    throw FormatError(std::string("bad run record: ") + e.what());
  }
  return r;
}

// ---- protocols ----

GeneratedProblem generate_problem(const SynthConfig& synth, RngStream& run) {
  auto concept_rng = run.split(streams::kConcept);
  auto train_rng = run.split(streams::kTrain);
  auto test_rng = run.split(streams::kTest);
  auto reference = generate_concept(synth, concept_rng);
  auto train = generate_dataset(synth, reference, synth.n_train, train_rng);
  auto test = generate_dataset(synth, reference, synth.n_test, test_rng);
  return {std::move(reference), std::move(train), std::move(test)};
}

NoiseSweepResult run_noise_sweep(const ExperimentConfig& cfg,
                                 const ProtocolHooks& hooks) {
  cfg.validate();
  const UmaConfig uma_cfg = cfg.effective_uma();
  const std::size_t levels = cfg.sweep_range.size();

  struct Cell {
    double fro = 0.0;
    RunRecord uma, mperc;
  };
  std::vector<std::vector<Cell>> cells(cfg.n_runs, std::vector<Cell>(levels));

  for_each_run(cfg.n_runs, resolve_threads(cfg), [&](std::size_t run_id) {
    RngStream run = run_stream(cfg.synth.seed, run_id);
    const auto problem = generate_problem(cfg.synth, run);
    auto sweep_rng = run.split(streams::kSweep);
    const auto mats = generate_sweep_matrices(cfg.synth.q_classes, sweep_rng);
    notify(hooks, mats.m);

    for (std::size_t li = 0; li < levels; ++li) {
      const int level = cfg.sweep_range[li];
      const auto c = sweep_level_matrix(mats.n, level);
      notify(hooks, c);
      auto noise_rng = run.split(streams::kNoise).split(level);
      const auto noisy = corrupt(problem.train, c, noise_rng);

      auto t0 = Clock::now();
      auto sel_rng = run.split(streams::kSelection).split(level);
      const auto uma = train_uma(noisy, c, uma_cfg, sel_rng, hooks.on_update);
      const double uma_wall = seconds_since(t0);

      t0 = Clock::now();
      const auto perc = train_perceptron(
          noisy,
          perceptron_for(cfg, run.split(streams::kShuffle).split(level),
                         LabelSource::noisy_labels),
          hooks.on_update);
      const double perc_wall = seconds_since(t0);

      auto& cell = cells[run_id][li];
      cell.fro = frobenius_norm(c.matrix());
      cell.uma = make_record(cfg, run_id, "uma", level,
                             evaluate(uma.model, problem.test), uma_wall,
                             uma.updates());
      cell.mperc = make_record(cfg, run_id, "mperc", level,
                               evaluate(perc.model, problem.test), perc_wall,
                               perc.updates);
    }
  });

  NoiseSweepResult out;
  for (std::size_t li = 0; li < levels; ++li) {
    NoiseSweepRow row;
    row.level = cfg.sweep_range[li];
    std::vector<double> fro, ur, mr, uo, mo, ue, me;
    for (std::size_t r = 0; r < cfg.n_runs; ++r) {
      const auto& cell = cells[r][li];
      fro.push_back(cell.fro);
      ur.push_back(cell.uma.report.confusion_rate);
      mr.push_back(cell.mperc.report.confusion_rate);
      uo.push_back(cell.uma.report.offdiag_confusion_rate);
      mo.push_back(cell.mperc.report.offdiag_confusion_rate);
      ue.push_back(cell.uma.report.error_rate);
      me.push_back(cell.mperc.report.error_rate);
    }
    row.fro_c = summarize(fro).mean;
    row.uma_rate = summarize(ur);
    row.mperc_rate = summarize(mr);
    row.uma_offdiag = summarize(uo);
    row.mperc_offdiag = summarize(mo);
    row.uma_error = summarize(ue);
    row.mperc_error = summarize(me);
    out.rows.push_back(row);
  }
  for (std::size_t r = 0; r < cfg.n_runs; ++r) {
    for (auto& cell : cells[r]) {
      out.records.push_back(std::move(cell.uma));
      out.records.push_back(std::move(cell.mperc));
    }
  }
  return out;
}

EstimationSweepResult run_estimation_sweep(const ExperimentConfig& cfg,
                                           const ProtocolHooks& hooks) {
  cfg.validate();
  const UmaConfig uma_cfg = cfg.effective_uma();
  const std::size_t levels = cfg.sweep_range.size();

  struct Cell {
    double fro = 0.0;
    RunRecord uma;
  };
  std::vector<std::vector<Cell>> cells(cfg.n_runs, std::vector<Cell>(levels));

  for_each_run(cfg.n_runs, resolve_threads(cfg), [&](std::size_t run_id) {
    RngStream run = run_stream(cfg.synth.seed, run_id);
    const auto problem = generate_problem(cfg.synth, run);
    auto sweep_rng = run.split(streams::kSweep);
    const auto mats = generate_sweep_matrices(cfg.synth.q_classes, sweep_rng);
    notify(hooks, mats.m);
    auto noise_rng = run.split(streams::kNoise);
    const auto noisy = corrupt(problem.train, mats.m, noise_rng);

    for (std::size_t li = 0; li < levels; ++li) {
      const int level = cfg.sweep_range[li];
      const auto c = sweep_level_matrix(mats.n, level);
      notify(hooks, c);
      const auto t0 = Clock::now();
      auto sel_rng = run.split(streams::kSelection).split(level);
      const auto uma = train_uma(noisy, c, uma_cfg, sel_rng, hooks.on_update);
      auto& cell = cells[run_id][li];
      cell.fro = frobenius_norm(c.matrix());
      cell.uma = make_record(cfg, run_id, "uma", level,
                             evaluate(uma.model, problem.test),
                             seconds_since(t0), uma.updates());
    }
  });

  EstimationSweepResult out;
  for (std::size_t li = 0; li < levels; ++li) {
    EstimationSweepRow row;
    row.level = cfg.sweep_range[li];
    row.factor = (10 - row.level) / 10.0;
    std::vector<double> fro, rate, off, err;
    for (std::size_t r = 0; r < cfg.n_runs; ++r) {
      const auto& cell = cells[r][li];
      fro.push_back(cell.fro);
      rate.push_back(cell.uma.report.confusion_rate);
      off.push_back(cell.uma.report.offdiag_confusion_rate);
      err.push_back(cell.uma.report.error_rate);
    }
    row.fro_c = summarize(fro).mean;
    row.uma_rate = summarize(rate);
    row.uma_offdiag = summarize(off);
    row.uma_error = summarize(err);
    out.rows.push_back(row);
  }
  for (auto& run_cells : cells)
    for (auto& cell : run_cells) out.records.push_back(std::move(cell.uma));
  return out;
}

SemisupResult run_semisup(const ExperimentConfig& cfg,
                          const ProtocolHooks& hooks) {
  cfg.validate();
  const UmaConfig uma_cfg = cfg.effective_uma();
  SynthConfig synth = cfg.synth;
  synth.n_train = cfg.semisup.n_train;

  std::vector<SemisupRun> runs(cfg.n_runs);
  for_each_run(cfg.n_runs, resolve_threads(cfg), [&](std::size_t run_id) {
    RngStream run = run_stream(cfg.synth.seed, run_id);
    const auto problem = generate_problem(synth, run);
    const std::size_t n = problem.train.size();

    // Random labelled subset: partial Fisher-Yates.
    auto label_rng = run.split(streams::kLabeling);
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    const std::size_t n_labeled = std::clamp<std::size_t>(
        static_cast<std::size_t>(
            std::llround(cfg.semisup.labeled_fraction * static_cast<double>(n))),
        2, n);
    for (std::size_t i = 0; i < n_labeled; ++i)
      std::swap(order[i], order[i + label_rng.below(n - i)]);
    const std::size_t n_boot = std::clamp<std::size_t>(
        static_cast<std::size_t>(std::llround(cfg.semisup.bootstrap_share *
                                              static_cast<double>(n_labeled))),
        1, n_labeled - 1);

    LabeledDataset boot(synth.q_classes, synth.dim);
    for (std::size_t i = 0; i < n_boot; ++i)
      boot.push_back(problem.train[order[i]]);
    const auto labeler =
        train_perceptron(boot,
                         perceptron_for(cfg, run.split(streams::kShuffle).split(0),
                                        LabelSource::true_labels))
            .model;

    const auto relabeled = with_predicted_labels(problem.train, labeler);
    LabeledDataset held_out(synth.q_classes, synth.dim);
    for (std::size_t i = n_boot; i < n_labeled; ++i)
      held_out.push_back(relabeled[order[i]]);
    const auto estimate = estimate_confusion_from_pairs(held_out);

    SemisupRun& out = runs[run_id];
    out.run_id = run_id;
    out.bootstrap_error = evaluate(labeler, problem.test).error_rate;
    std::size_t wrong = 0;
    for (const auto& ex : relabeled.examples())
      if (*ex.noisy_label != *ex.true_label) ++wrong;
    out.relabel_noise = static_cast<double>(wrong) / static_cast<double>(n);

    const auto mperc = train_perceptron(
        relabeled,
        perceptron_for(cfg, run.split(streams::kShuffle).split(1),
                       LabelSource::noisy_labels),
        hooks.on_update);
    out.error_mperc = evaluate(mperc.model, problem.test).error_rate;
    const auto full = train_perceptron(
        relabeled,
        perceptron_for(cfg, run.split(streams::kShuffle).split(2),
                       LabelSource::true_labels),
        hooks.on_update);
    out.error_mperc_full = evaluate(full.model, problem.test).error_rate;

    if (!estimate.ok()) {
      out.diagnostic = estimate.diagnostic;
      return;
    }
    notify(hooks, *estimate.matrix);
    auto sel_rng = run.split(streams::kSelection);
    const auto uma =
        train_uma(relabeled, *estimate.matrix, uma_cfg, sel_rng, hooks.on_update);
    out.error_uma = evaluate(uma.model, problem.test).error_rate;
  });

  SemisupResult result;
  result.runs = std::move(runs);
  std::vector<double> mp, mf, um;
  for (const auto& r : result.runs) {
    mp.push_back(r.error_mperc);
    mf.push_back(r.error_mperc_full);
    if (r.error_uma)
      um.push_back(*r.error_uma);
    else
      ++result.degraded_runs;
  }
  result.mperc = summarize(mp);
  result.mperc_full = summarize(mf);
  result.uma = summarize(um);
  return result;
}

// ---- CSV ----

std::string csv_comment(const ExperimentConfig& cfg) {
  return "# config_hash=" + hex64(config_hash(cfg)) +
         " seed=" + std::to_string(cfg.synth.seed) + "\n";
}

namespace {

void put(std::ostringstream& os, const Summary& s) {
  os << ',' << io::format_double(s.mean) << ',' << io::format_double(s.stddev);
}

}  // namespace

std::string noise_sweep_csv(const ExperimentConfig& cfg,
                            const NoiseSweepResult& r) {
  std::ostringstream os;
  os << csv_comment(cfg);
  os << "level,fro_c,uma_rate_mean,uma_rate_std,mperc_rate_mean,"
        "mperc_rate_std,uma_offdiag_mean,uma_offdiag_std,mperc_offdiag_mean,"
        "mperc_offdiag_std,uma_error_mean,uma_error_std,mperc_error_mean,"
        "mperc_error_std\n";
  for (const auto& row : r.rows) {
    os << row.level << ',' << io::format_double(row.fro_c);
    put(os, row.uma_rate);
    put(os, row.mperc_rate);
    put(os, row.uma_offdiag);
    put(os, row.mperc_offdiag);
    put(os, row.uma_error);
    put(os, row.mperc_error);
    os << '\n';
  }
  return os.str();
}

std::string estimation_sweep_csv(const ExperimentConfig& cfg,
                                 const EstimationSweepResult& r) {
  std::ostringstream os;
  os << csv_comment(cfg);
  os << "level,factor,fro_c,uma_rate_mean,uma_rate_std,uma_offdiag_mean,"
        "uma_offdiag_std,uma_error_mean,uma_error_std\n";
  for (const auto& row : r.rows) {
    os << row.level << ',' << io::format_double(row.factor) << ','
       << io::format_double(row.fro_c);
    put(os, row.uma_rate);
    put(os, row.uma_offdiag);
    put(os, row.uma_error);
    os << '\n';
  }
  return os.str();
}

std::string semisup_csv(const ExperimentConfig& cfg, const SemisupResult& r) {
  std::ostringstream os;
  os << csv_comment(cfg);
  os << "run,bootstrap_error,relabel_noise,error_mperc,error_mperc_full,"
        "error_uma\n";
  for (const auto& run : r.runs) {
    os << run.run_id << ',' << io::format_double(run.bootstrap_error) << ','
       << io::format_double(run.relabel_noise) << ','
       << io::format_double(run.error_mperc) << ','
       << io::format_double(run.error_mperc_full) << ',';
    if (run.error_uma) os << io::format_double(*run.error_uma);
    os << '\n';
  }
  return os.str();
}

std::string run_records_jsonl(const std::vector<RunRecord>& records) {
  std::string out;
  for (const auto& r : records) out += to_json(r).dump() + "\n";
  return out;
}

}  // namespace unconfused
