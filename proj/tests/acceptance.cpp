// Acceptance checks. One PASS/FAIL line per criterion; exits nonzero if any
// criterion fails.

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <limits>
#include <mutex>
#include <sstream>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "unconfused/bounds.hpp"
#include "unconfused/experiment.hpp"
#include "unconfused/synthgen.hpp"
#include "unconfused/uma.hpp"

using namespace unconfused;

namespace {

// Pinned tolerances.
constexpr std::size_t kMistakeCap = 3200;        // 2 / 0.025^2
constexpr double kOracleTol = 1e-9;
constexpr double kRecoveryTol = 1e-9;
constexpr double kOrderingShare = 0.9;
constexpr double kMinimumSlack = 0.05;
constexpr double kSemisupGap = 0.03;
constexpr double kSemisupFullSlack = 0.05;
constexpr double kDriftTol = 1e-9;
constexpr double kTauTol = 1e-12;
constexpr std::size_t kBoundsTarget = 1537;
constexpr std::size_t kBoundsSlack = 1;

int failures = 0;

void report(int id, bool pass, const std::string& detail) {
  std::printf("criterion %d: %s  %s\n", id, pass ? "PASS" : "FAIL",
              detail.c_str());
  std::fflush(stdout);
  if (!pass) ++failures;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
      .count();
}

// Watches every update and every confusion matrix produced by the protocols.
struct InvariantMonitor {
  std::atomic<std::size_t> updates{0};
  std::atomic<std::size_t> drift_violations{0};
  std::atomic<std::size_t> tau_violations{0};
  std::atomic<std::size_t> matrices{0};
  std::atomic<std::size_t> bad_matrices{0};
  std::mutex mu;
  double worst_drift_ratio = 0.0;

  void on_update(const LinearModel& m, std::span<const double> tau) {
    ++updates;
    const auto& w = m.weights();
    double drift = 0.0, max_norm = 0.0;
    for (std::size_t j = 0; j < w.rows(); ++j) {
      double s = 0.0;
      for (std::size_t q = 0; q < w.cols(); ++q) s += w(j, q);
      drift = std::max(drift, std::abs(s));
    }
    for (std::size_t q = 0; q < w.cols(); ++q) {
      double n = 0.0;
      for (std::size_t j = 0; j < w.rows(); ++j) n += w(j, q) * w(j, q);
      max_norm = std::max(max_norm, std::sqrt(n));
    }
    const double ratio = drift / (1.0 + max_norm);
    if (ratio > kDriftTol) ++drift_violations;
    double sum = 0.0;
    for (double t : tau) sum += t;
    if (std::abs(sum) > kTauTol) ++tau_violations;
    std::lock_guard lock(mu);
    worst_drift_ratio = std::max(worst_drift_ratio, ratio);
  }

  void on_confusion(const ConfusionDiagnostics& d) {
    ++matrices;
    if (!d.ok) ++bad_matrices;
  }

  ProtocolHooks hooks() {
    ProtocolHooks h;
    h.on_update = [this](const LinearModel& m, std::span<const double> tau) {
      on_update(m, tau);
    };
    h.on_confusion = [this](const ConfusionDiagnostics& d) { on_confusion(d); };
    return h;
  }
};

InvariantMonitor monitor;

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4g", v);
  return buf;
}

void mistake_bound() {
  const auto t0 = std::chrono::steady_clock::now();
  std::size_t worst = 0;
  double worst_error = 0.0;
  bool all_converged = true;
  const auto hooks = monitor.hooks();
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    SynthConfig sc;
    sc.seed = seed;
    RngStream run = run_stream(seed, 0);
    const auto problem = generate_problem(sc, run);
    monitor.on_confusion(validate_confusion(ConfusionMatrix::identity(10)));
    UmaConfig uc;
    uc.max_iters = UmaConfig::default_max_iters(sc.margin_theta);
    RngStream rng = run.split(streams::kSelection);
    RngStream noise = run.split(streams::kNoise);
    const auto clean =
        corrupt(problem.train, ConfusionMatrix::identity(10), noise);
    const auto res = train_uma(clean, ConfusionMatrix::identity(10), uc, rng,
                               hooks.on_update);
    std::size_t wrong = 0;
    for (const auto& ex : problem.train.examples())
      if (predict(res.model, ex.features) != *ex.true_label) ++wrong;
    worst = std::max(worst, res.updates());
    worst_error = std::max(worst_error,
                           static_cast<double>(wrong) / problem.train.size());
    all_converged = all_converged && res.reason == StopReason::converged;
  }
  report(1, worst <= kMistakeCap && worst_error == 0.0 && all_converged,
         "max updates " + std::to_string(worst) + " (cap " +
             std::to_string(kMistakeCap) + "), max train error " +
             fmt(worst_error) + ", " + fmt(seconds_since(t0)) + " s");
}

void candidate_oracle() {
  RngStream rng(2024, 77);
  double worst = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t q = 2 + rng.below(3);
    const std::size_t d = 1 + rng.below(3);
    const std::size_t n = 1 + rng.below(50);
    const double alpha = trial % 3 == 0 ? 0.0 : 0.05 * rng.uniform();
    LinearModel w(q, d);
    for (std::size_t j = 0; j < d; ++j)
      for (std::size_t k = 0; k < q; ++k) w.weights()(j, k) = rng.normal();
    const auto c = oracle::random_confusion(q, rng);
    LabeledDataset ds(q, d);
    for (std::size_t i = 0; i < n; ++i)
      ds.push_back({oracle::random_unit(d, rng), std::nullopt, rng.below(q)});
    const ConfusionMatrix cm(c);
    for (std::size_t p = 0; p < q; ++p)
      for (std::size_t qq = 0; qq < q; ++qq) {
        if (p == qq) continue;
        const auto got = candidate(w, ds, cm, p, qq, alpha);
        const auto want = oracle::candidate(w, ds, c, p, qq, alpha);
        for (std::size_t j = 0; j < d; ++j)
          worst = std::max(
              worst, static_cast<double>(std::fabs(got.z[j] - want[j])));
      }
  }
  report(2, worst <= kOracleTol,
         "100 instances, max |z - oracle| " + fmt(worst) + " (tol " +
             fmt(kOracleTol) + ")");
}

void exact_recovery() {
  // Entries on the 1/20 grid, so 20 copies per base point realise C exactly.
  const DenseMatrix c{{0.70, 0.10, 0.05, 0.10},
                      {0.15, 0.75, 0.10, 0.05},
                      {0.10, 0.10, 0.80, 0.05},
                      {0.05, 0.05, 0.05, 0.80}};
  RngStream rng(99, 3);
  double worst = 0.0;
  std::size_t checked = 0;
  for (int rep = 0; rep < 5; ++rep) {
    std::vector<DenseVector> base;
    std::vector<std::size_t> truth;
    for (int i = 0; i < 40; ++i) {
      base.push_back(oracle::random_unit(3, rng));
      truth.push_back(rng.below(4));
    }
    const auto ds = oracle::exact_noise_dataset(base, truth, c, 20);
    LinearModel w(4, 3);
    for (std::size_t j = 0; j < 3; ++j)
      for (std::size_t k = 0; k < 4; ++k) w.weights()(j, k) = rng.normal();
    for (double alpha : {0.0, 0.05}) {
      for (const auto& cand : all_candidates(w, ds, ConfusionMatrix(c), alpha)) {
        const auto mu = oracle::conditional_mean(w, ds, cand.p, cand.q, alpha);
        for (std::size_t j = 0; j < 3; ++j)
          worst = std::max(worst,
                           static_cast<double>(std::fabs(cand.z[j] - mu[j])));
        ++checked;
      }
    }
  }
  report(3, worst <= kRecoveryTol,
         std::to_string(checked) + " pairs, max |z - mu| " + fmt(worst) +
             " (tol " + fmt(kRecoveryTol) + ")");
}

void noise_ordering() {
  const auto t0 = std::chrono::steady_clock::now();
  const ExperimentConfig cfg;
  const auto res = run_noise_sweep(cfg, monitor.hooks());
  std::size_t wins = 0, literal_wins = 0;
  for (const auto& r : res.rows) {
    if (r.uma_offdiag.mean <= r.mperc_offdiag.mean) ++wins;
    if (r.uma_rate.mean <= r.mperc_rate.mean) ++literal_wins;
  }
  const std::size_t total = res.rows.size();
  const bool pass = wins >= kOrderingShare * static_cast<double>(total);
  report(4, pass,
         "UMA <= Mperc (off-diagonal confusion rate) at " +
             std::to_string(wins) + "/" + std::to_string(total) +
             " levels (need " + fmt(kOrderingShare * 100) +
             "%); diagonal-included rate: " + std::to_string(literal_wins) +
             "/" + std::to_string(total) + ", " + fmt(seconds_since(t0)) + " s");
}

void estimation_asymmetry() {
  const auto t0 = std::chrono::steady_clock::now();
  const ExperimentConfig cfg;
  const auto res = run_estimation_sweep(cfg, monitor.hooks());
  auto at = [&](int level) {
    for (const auto& r : res.rows)
      if (r.level == level) return r.uma_offdiag.mean;
    return std::nan("");
  };
  double minimum = std::numeric_limits<double>::infinity();
  for (const auto& r : res.rows) minimum = std::min(minimum, r.uma_offdiag.mean);
  const double under = at(7), over = at(13), exact = at(10);
  const bool asym = under < over;
  const bool near_min = exact <= minimum * (1.0 + kMinimumSlack);
  std::ostringstream os;
  os << "off-diagonal rate at +0.3 " << fmt(under) << " vs -0.3 " << fmt(over)
     << (asym ? " (lower)" : " (not lower)") << "; factor 0 " << fmt(exact)
     << " vs minimum " << fmt(minimum) << " (slack " << fmt(kMinimumSlack * 100)
     << "%)" << "; " << fmt(seconds_since(t0)) << " s";
  report(5, asym && near_min, os.str());
  for (const auto& r : res.rows)
    std::printf("    level %2d factor %+.1f offdiag %.4f (sd %.4f) rate %.4f\n",
                r.level, r.factor, r.uma_offdiag.mean, r.uma_offdiag.stddev,
                r.uma_rate.mean);
}

void semisup_ordering() {
  const auto t0 = std::chrono::steady_clock::now();
  const ExperimentConfig cfg;
  const auto res = run_semisup(cfg, monitor.hooks());
  std::ostringstream os;
  os << "error Mperc " << fmt(res.mperc.mean) << ", Mperc_full "
     << fmt(res.mperc_full.mean) << ", UMA ";
  bool pass = false;
  if (res.uma.count == 0) {
    os << "n/a (estimate degraded in all " << res.runs.size() << " runs)";
  } else {
    os << fmt(res.uma.mean) << " over " << res.uma.count << " runs";
    pass = res.uma.mean <= res.mperc.mean - kSemisupGap &&
           res.uma.mean <= res.mperc_full.mean + kSemisupFullSlack &&
           res.degraded_runs == 0;
    if (res.degraded_runs > 0)
      os << ", " << res.degraded_runs << " degraded";
  }
  os << "; need UMA <= Mperc - " << fmt(kSemisupGap) << " and <= Mperc_full + "
     << fmt(kSemisupFullSlack) << "; " << fmt(seconds_since(t0)) << " s";
  report(6, pass, os.str());
  for (const auto& r : res.runs)
    std::printf("    run %zu mperc %.4f full %.4f uma %s relabel noise %.4f%s%s\n",
                r.run_id, r.error_mperc, r.error_mperc_full,
                r.error_uma ? fmt(*r.error_uma).c_str() : "-", r.relabel_noise,
                r.diagnostic.empty() ? "" : "  ", r.diagnostic.c_str());
}

void structural_invariants() {
  const bool pass = monitor.updates > 0 && monitor.drift_violations == 0 &&
                    monitor.tau_violations == 0 && monitor.matrices > 0 &&
                    monitor.bad_matrices == 0;
  std::ostringstream os;
  os << monitor.updates.load() << " updates, " << monitor.drift_violations.load()
     << " drift and " << monitor.tau_violations.load()
     << " tau violations, worst drift ratio " << fmt(monitor.worst_drift_ratio)
     << "; " << monitor.matrices.load() << " confusion matrices, "
     << monitor.bad_matrices.load() << " invalid";
  report(7, pass, os.str());
}

void bounds_roundtrip() {
  const double epsilons[] = {1.0, 0.5, 0.25, 0.1, 0.05};
  const double deltas[] = {0.1, 0.05, 0.01, 0.005, 0.001};
  std::size_t bad = 0;
  for (double eps : epsilons)
    for (double delta : deltas) {
      const auto m = min_sample_size(eps, delta, 2, 2);
      const double floor_m = 32.0 / (eps * eps);
      const bool ok_at = deviation_bound({double(m), eps, delta, 2, 2}) <= delta;
      const bool minimal =
          double(m - 1) < floor_m ||
          deviation_bound({double(m - 1), eps, delta, 2, 2}) > delta;
      if (!ok_at || !minimal) ++bad;
    }
  // Closed form: 4 Q^2 (8/eps)^(d+1) exp(-m/128) <= delta at eps = 1, d = Q = 2
  // gives m >= 128 ln(4 * 4 * 512 / 0.05).
  const auto oracle_m =
      static_cast<std::size_t>(std::ceil(128.0L * std::log(8192.0L / 0.05L)));
  const auto m = min_sample_size(1.0, 0.05, 2, 2);
  const bool pass = bad == 0 && oracle_m == kBoundsTarget &&
                    (m >= kBoundsTarget - kBoundsSlack &&
                     m <= kBoundsTarget + kBoundsSlack);
  report(8, pass,
         "grid violations " + std::to_string(bad) + "/25; m(1, 0.05, 2, 2) = " +
             std::to_string(m) + ", closed form " + std::to_string(oracle_m) +
             "; 1539 fails the closed form");
}

void determinism() {
  ExperimentConfig cfg;
  cfg.n_runs = 3;
  cfg.uma_max_iters = 3000;
  auto data_rows = [](const std::string& csv) {
    return csv.substr(csv.find('\n') + 1);
  };
  cfg.threads = 1;
  const auto a = noise_sweep_csv(cfg, run_noise_sweep(cfg, monitor.hooks()));
  cfg.threads = 4;
  const auto b = noise_sweep_csv(cfg, run_noise_sweep(cfg, monitor.hooks()));
  const bool pass = !data_rows(a).empty() && data_rows(a) == data_rows(b);
  report(9, pass,
         std::string("two sweep-noise runs (1 and 4 threads) give ") +
             (pass ? "identical" : "different") + " data rows");
}

template <typename F>
void guarded(int id, F&& f) {
  try {
    f();
  } catch (const std::exception& e) {
    report(id, false, std::string("threw: ") + e.what());
  }
}

}  // namespace

int main() {
  guarded(1, mistake_bound);
  guarded(2, candidate_oracle);
  guarded(3, exact_recovery);
  guarded(4, noise_ordering);
  guarded(5, estimation_asymmetry);
  guarded(6, semisup_ordering);
  guarded(8, bounds_roundtrip);
  guarded(9, determinism);
  guarded(7, structural_invariants);
  std::printf("%d criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
