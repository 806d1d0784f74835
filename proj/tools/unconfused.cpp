// unconfused: command-line driver for data generation, training, evaluation
// and the experiment protocols.

#include <cstdint>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "unconfused/bounds.hpp"
#include "unconfused/error.hpp"
#include "unconfused/experiment.hpp"
#include "unconfused/io.hpp"
#include "unconfused/metrics.hpp"
#include "unconfused/perceptron.hpp"
#include "unconfused/synthgen.hpp"
#include "unconfused/uma.hpp"

namespace fs = std::filesystem;
using namespace unconfused;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFailure = 1;
constexpr int kExitInvalid = 2;
constexpr int kExitNumerical = 3;
constexpr int kExitStalled = 4;

struct Overrides {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out;
  std::optional<std::size_t> runs;
  std::optional<std::string> selection;
  std::optional<double> alpha;
  std::optional<double> stop_norm;
  std::optional<std::size_t> max_iters;
};

ExperimentConfig resolve_config(const Overrides& o) {
  ExperimentConfig cfg = o.config.empty() ? ExperimentConfig{} : load_config(o.config);
  if (o.seed) cfg.synth.seed = *o.seed;
  if (o.out) cfg.output_dir = *o.out;
  if (o.runs) cfg.n_runs = *o.runs;
  if (o.selection) cfg.uma.selection = parse_selection(*o.selection);
  if (o.alpha) cfg.uma.alpha = *o.alpha;
  if (o.stop_norm) cfg.uma.stop_norm = *o.stop_norm;
  if (o.max_iters) cfg.uma_max_iters = *o.max_iters;
  cfg.validate();
  return cfg;
}

fs::path out_path(const ExperimentConfig& cfg, const std::string& name) {
  return fs::path(cfg.output_dir) / name;
}

int cmd_generate(const ExperimentConfig& cfg) {
  RngStream run = run_stream(cfg.synth.seed, 0);
  const auto problem = generate_problem(cfg.synth, run);
  io::write_model_json(out_path(cfg, "concept.json"), problem.reference);
  io::write_dataset_csv(out_path(cfg, "train.csv"), problem.train);
  io::write_dataset_csv(out_path(cfg, "test.csv"), problem.test);
  std::cout << "wrote " << problem.train.size() << " training and "
            << problem.test.size() << " test points to " << cfg.output_dir
            << "\n";
  return kExitOk;
}

int cmd_corrupt(const ExperimentConfig& cfg, const std::string& data,
                const std::string& confusion, std::optional<int> level) {
  const auto ds = io::read_dataset_csv(data, cfg.synth.q_classes);
  RngStream run = run_stream(cfg.synth.seed, 0);
  std::optional<ConfusionMatrix> c;
  if (!confusion.empty()) {
    c = io::read_confusion_json(confusion);
  } else {
    auto sweep_rng = run.split(streams::kSweep);
    const auto mats = generate_sweep_matrices(ds.q_classes(), sweep_rng);
    c = level ? sweep_level_matrix(mats.n, *level) : mats.m;
    io::write_matrix_json(out_path(cfg, "confusion.json"), c->matrix(),
                          "confusion");
  }
  auto noise_rng = run.split(streams::kNoise);
  const auto noisy = corrupt(ds, *c, noise_rng);
  io::write_dataset_csv(out_path(cfg, "noisy.csv"), noisy);
  std::size_t flipped = 0;
  for (const auto& ex : noisy.examples())
    if (ex.noisy_label != ex.true_label) ++flipped;
  std::cout << "flipped " << flipped << " of " << noisy.size() << " labels\n";
  return kExitOk;
}

int cmd_train(const ExperimentConfig& cfg, const std::string& data,
              const std::string& confusion, const std::string& learner,
              bool true_labels) {
  const auto ds = io::read_dataset_csv(data, cfg.synth.q_classes);
  if (learner == "perceptron") {
    PerceptronConfig pc = cfg.perceptron;
    pc.seed = cfg.synth.seed;
    pc.label_source =
        true_labels ? LabelSource::true_labels : LabelSource::noisy_labels;
    const auto res = train_perceptron(ds, pc);
    io::write_model_json(out_path(cfg, "model.json"), res.model);
    std::cout << "perceptron: " << res.updates << " updates, " << res.epochs
              << " epochs" << (res.converged ? ", converged" : "") << "\n";
    return kExitOk;
  }
  if (learner != "uma") throw InvalidValue("unknown learner '" + learner + "'");
  const ConfusionMatrix c = confusion.empty()
                                ? ConfusionMatrix::identity(ds.q_classes())
                                : io::read_confusion_json(confusion);
  RngStream rng = run_stream(cfg.synth.seed, 0).split(streams::kSelection);
  const auto res = train_uma(ds, c, cfg.effective_uma(), rng);
  io::write_model_json(out_path(cfg, "model.json"), res.model);
  io::write_trace_csv(out_path(cfg, "trace.csv"), res.trace);
  std::cout << "uma: " << res.updates() << " updates, "
            << to_string(res.reason) << "\n";
  return kExitOk;
}

int cmd_eval(const ExperimentConfig& cfg, const std::string& model_path,
             const std::string& data) {
  const auto model = io::read_model_json(model_path);
  const auto ds = io::read_dataset_csv(data, model.q_classes());
  const auto report = evaluate(model, ds);
  const std::string text = to_json(report).dump(2) + "\n";
  io::write_text(out_path(cfg, "eval.json"), text);
  std::cout << text;
  return kExitOk;
}

int cmd_sweep_noise(const ExperimentConfig& cfg) {
  const auto result = run_noise_sweep(cfg);
  io::write_text(out_path(cfg, "sweep_noise.csv"), noise_sweep_csv(cfg, result));
  io::write_text(out_path(cfg, "sweep_noise_runs.jsonl"),
                 run_records_jsonl(result.records));
  std::cout << noise_sweep_csv(cfg, result);
  return kExitOk;
}

int cmd_sweep_estimation(const ExperimentConfig& cfg) {
  const auto result = run_estimation_sweep(cfg);
  io::write_text(out_path(cfg, "sweep_estimation.csv"),
                 estimation_sweep_csv(cfg, result));
  io::write_text(out_path(cfg, "sweep_estimation_runs.jsonl"),
                 run_records_jsonl(result.records));
  std::cout << estimation_sweep_csv(cfg, result);
  return kExitOk;
}

int cmd_semisup(const ExperimentConfig& cfg) {
  const auto result = run_semisup(cfg);
  const auto csv = semisup_csv(cfg, result);
  io::write_text(out_path(cfg, "semisup.csv"), csv);
  std::cout << csv;
  std::cout << "mean error: mperc " << result.mperc.mean << ", mperc_full "
            << result.mperc_full.mean << ", uma ";
  if (result.uma.count > 0)
    std::cout << result.uma.mean << " (" << result.uma.count << " runs)";
  else
    std::cout << "n/a";
  std::cout << "\n";
  for (const auto& r : result.runs)
    if (!r.error_uma)
      std::cout << "run " << r.run_id << ": uma skipped: " << r.diagnostic
                << "\n";
  return kExitOk;
}

int cmd_bounds(const ExperimentConfig& cfg) {
  const double epsilons[] = {1.0, 0.5, 0.25, 0.1, 0.05};
  const double deltas[] = {0.1, 0.05, 0.01, 0.005, 0.001};
  std::ostringstream os;
  os << "# d=" << cfg.synth.dim << " q=" << cfg.synth.q_classes << "\n";
  os << "epsilon,delta,min_sample_size,bound_at_m\n";
  for (double eps : epsilons) {
    for (double delta : deltas) {
      const auto m =
          min_sample_size(eps, delta, cfg.synth.dim, cfg.synth.q_classes);
      const double b = deviation_bound({static_cast<double>(m), eps, delta,
                                        cfg.synth.dim, cfg.synth.q_classes});
      os << io::format_double(eps) << ',' << io::format_double(delta) << ','
         << m << ',' << io::format_double(b) << "\n";
    }
  }
  io::write_text(out_path(cfg, "bounds.csv"), os.str());
  std::cout << os.str();
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Multiclass learning from noisy labels with a known confusion "
               "matrix"};
  app.require_subcommand(1);
  app.fallthrough();

  Overrides o;
  app.add_option("--config", o.config, "JSON configuration file");
  app.add_option("--seed", o.seed, "Base seed");
  app.add_option("--out", o.out, "Output directory");
  app.add_option("--runs", o.runs, "Number of runs");
  app.add_option("--selection", o.selection, "UMA pair selection")
      ->check(CLI::IsMember({"error", "confusion", "random"}));
  app.add_option("--alpha", o.alpha, "UMA region threshold");
  app.add_option("--stop-norm", o.stop_norm, "UMA stopping norm");
  app.add_option("--max-iters", o.max_iters, "UMA iteration cap");

  auto* generate = app.add_subcommand("generate", "Generate concept, train and test sets");
  std::string data, confusion, model, learner = "uma";
  std::optional<int> level;
  bool true_labels = false;

  auto* corrupt_cmd = app.add_subcommand("corrupt", "Draw noisy labels");
  corrupt_cmd->add_option("--data", data, "Dataset CSV")->required();
  corrupt_cmd->add_option("--confusion", confusion,
                          "Confusion matrix JSON (default: random sweep matrix)");
  corrupt_cmd->add_option("--level", level, "Sweep level of the random matrix")
      ->check(CLI::Range(0, 20));

  auto* train = app.add_subcommand("train", "Train a model");
  train->add_option("--data", data, "Noisy dataset CSV")->required();
  train->add_option("--confusion", confusion, "Confusion matrix JSON (default: identity)");
  train->add_option("--learner", learner, "uma or perceptron")
      ->check(CLI::IsMember({"uma", "perceptron"}));
  train->add_flag("--true-labels", true_labels, "Perceptron on true labels");

  auto* eval = app.add_subcommand("eval", "Evaluate a model on a labelled set");
  eval->add_option("--model", model, "Model JSON")->required();
  eval->add_option("--data", data, "Dataset CSV")->required();

  auto* sweep_noise = app.add_subcommand("sweep-noise", "UMA and perceptron across noise levels");
  auto* sweep_est = app.add_subcommand("sweep-estimation", "UMA with misestimated confusion");
  auto* semisup = app.add_subcommand("semisup", "Semi-supervised relabelling pipeline");
  auto* bounds = app.add_subcommand("bounds", "Sample-size bound table");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitInvalid;
  }

  try {
    const auto cfg = resolve_config(o);
    if (generate->parsed()) return cmd_generate(cfg);
    if (corrupt_cmd->parsed()) return cmd_corrupt(cfg, data, confusion, level);
    if (train->parsed()) return cmd_train(cfg, data, confusion, learner, true_labels);
    if (eval->parsed()) return cmd_eval(cfg, model, data);
    if (sweep_noise->parsed()) return cmd_sweep_noise(cfg);
    if (sweep_est->parsed()) return cmd_sweep_estimation(cfg);
    if (semisup->parsed()) return cmd_semisup(cfg);
    if (bounds->parsed()) return cmd_bounds(cfg);
  } catch (const SingularMatrix& e) {
    std::cerr << "error: singular matrix: " << e.what() << "\n";
    return kExitNumerical;
  } catch (const GenerationStalled& e) {
    std::cerr << "error: generation stalled: " << e.what() << "\n";
    return kExitStalled;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInvalid;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitFailure;
  }
  return kExitOk;
}
