#include "unconfused/uma.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "unconfused/error.hpp"

namespace unconfused {
namespace {

constexpr std::size_t kNoRegion = std::numeric_limits<std::size_t>::max();

void require_noisy(const LabeledDataset& ds) {
  if (!ds.all_have_noisy_labels())
    throw MissingLabels("UMA requires a noisy label on every example");
  if (ds.empty()) throw InvalidValue("UMA requires a non-empty dataset");
}

void require_dims(const LinearModel& model, const LabeledDataset& ds) {
  if (model.dim() != ds.dim() || model.q_classes() != ds.q_classes())
    throw DimensionMismatch("model and dataset shapes differ");
}

// Region index of x (kNoRegion when x is in no A_p), given its scores and
// their argmax.
std::size_t region_of(std::span<const double> scores, ClassIndex top,
                      double alpha) {
  if (alpha == 0.0) return top;
  for (std::size_t k = 0; k < scores.size(); ++k) {
    if (k != top && !(scores[top] - scores[k] > alpha)) return kNoRegion;
  }
  return top;
}

// Row-major copy of the features and noisy labels, built once per training
// run so the per-iteration passes stay on contiguous memory.
struct FlatData {
  std::size_t n = 0;
  std::size_t d = 0;
  std::size_t q = 0;
  std::vector<double> x;
  std::vector<ClassIndex> noisy;

  explicit FlatData(const LabeledDataset& ds)
      : n(ds.size()), d(ds.dim()), q(ds.q_classes()) {
    x.reserve(n * d);
    noisy.reserve(n);
    for (const auto& ex : ds.examples()) {
      x.insert(x.end(), ex.features.entries().begin(),
               ex.features.entries().end());
      noisy.push_back(*ex.noisy_label);
    }
  }
  const double* row(std::size_t i) const { return x.data() + i * d; }
};

struct RegionPass {
  std::vector<std::size_t> region;     // per example
  std::vector<ClassIndex> prediction;  // per example
};

void assign_regions(const LinearModel& model, const FlatData& data,
                    double alpha, RegionPass& pass) {
  pass.region.resize(data.n);
  pass.prediction.resize(data.n);
  const std::size_t q = data.q;
  const double* w = model.weights().entries().data();
  std::vector<double> scores(q);
  for (std::size_t i = 0; i < data.n; ++i) {
    const double* x = data.row(i);
    std::fill(scores.begin(), scores.end(), 0.0);
    for (std::size_t j = 0; j < data.d; ++j) {
      const double xj = x[j];
      const double* wj = w + j * q;
      for (std::size_t c = 0; c < q; ++c) scores[c] += xj * wj[c];
    }
    const ClassIndex top = argmax_lowest(scores);
    pass.prediction[i] = top;
    pass.region[i] = region_of(scores, top, alpha);
  }
}

// Gamma^p for every p, flattened as [p][k][j], plus |A_p|.
struct GammaStack {
  std::size_t q = 0;
  std::size_t d = 0;
  std::vector<double> values;
  std::vector<std::size_t> support;

  double* row(std::size_t p, std::size_t k) {
    return values.data() + (p * q + k) * d;
  }
  const double* row(std::size_t p, std::size_t k) const {
    return values.data() + (p * q + k) * d;
  }
};

void build_gammas(const FlatData& data, const RegionPass& pass,
                  GammaStack& g) {
  g.q = data.q;
  g.d = data.d;
  g.values.assign(g.q * g.q * g.d, 0.0);
  g.support.assign(g.q, 0);
  for (std::size_t i = 0; i < data.n; ++i) {
    const std::size_t p = pass.region[i];
    if (p == kNoRegion) continue;
    ++g.support[p];
    double* dst = g.row(p, data.noisy[i]);
    const double* x = data.row(i);
    for (std::size_t j = 0; j < g.d; ++j) dst[j] += x[j];
  }
  const double inv_n = 1.0 / static_cast<double>(data.n);
  for (double& v : g.values) v *= inv_n;
}

// Writes z_pq = row q of C^-1 Gamma^p into `cand`, reusing its storage.
// `scale` multiplies the stored rows (1/n when they hold raw sums).
void fill_candidate(const GammaStack& g, const DenseMatrix& c_inv,
                    ClassIndex p, ClassIndex q, UpdateCandidate& cand,
                    double scale = 1.0) {
  if (cand.z.dim() != g.d) cand.z = DenseVector(g.d);
  auto z = cand.z.span();
  std::fill(z.begin(), z.end(), 0.0);
  for (std::size_t k = 0; k < g.q; ++k) {
    const double coef = c_inv(q, k) * scale;
    if (coef == 0.0) continue;
    const double* src = g.row(p, k);
    for (std::size_t j = 0; j < g.d; ++j) z[j] += coef * src[j];
  }
  cand.p = p;
  cand.q = q;
  cand.norm_z = cand.z.norm();
  cand.support = g.support[p];
}

// Scratch state for recomputing every candidate against the current model.
struct CandidateWorkspace {
  RegionPass pass;
  GammaStack gammas;
  std::vector<UpdateCandidate> candidates;

  void refresh(const LinearModel& model, const FlatData& data,
               const ConfusionMatrix& c, double alpha) {
    assign_regions(model, data, alpha, pass);
    build_gammas(data, pass, gammas);
    const std::size_t q = data.q;
    candidates.resize(q * (q - 1));
    std::size_t slot = 0;
    for (ClassIndex p = 0; p < q; ++p)
      for (ClassIndex k = 0; k < q; ++k)
        if (p != k) fill_candidate(gammas, c.inverse(), p, k, candidates[slot++]);
  }
};

// Training-loop state. Scores, regions and the Gamma sums are updated in
// place after each step (only classes with tau_r != 0 move) and rebuilt from
// scratch every kResyncEvery updates to bound rounding drift.
class TrainState {
 public:
  static constexpr std::size_t kResyncEvery = 256;

  TrainState(const FlatData& data, double alpha) : data_(data), alpha_(alpha) {
    scores_.resize(data.n * data.q);
    top_.resize(data.n);
    region_.resize(data.n);
    gammas_.q = data.q;
    gammas_.d = data.d;
  }

  void resync(const LinearModel& model) {
    const std::size_t q = data_.q;
    const double* w = model.weights().entries().data();
    gammas_.values.assign(q * q * data_.d, 0.0);
    gammas_.support.assign(q, 0);
    noisy_errors_ = 0;
    for (std::size_t i = 0; i < data_.n; ++i) {
      double* s = &scores_[i * q];
      std::fill(s, s + q, 0.0);
      const double* x = data_.row(i);
      for (std::size_t j = 0; j < data_.d; ++j) {
        const double* wj = w + j * q;
        for (std::size_t c = 0; c < q; ++c) s[c] += x[j] * wj[c];
      }
      top_[i] = argmax_lowest({s, q});
      region_[i] = region_of({s, q}, top_[i], alpha_);
      if (top_[i] != data_.noisy[i]) ++noisy_errors_;
      add_to_gamma(i, region_[i], 1.0);
    }
    since_resync_ = 0;
  }

  void step(const LinearModel& model, std::span<const double> tau,
            const DenseVector& z) {
    if (++since_resync_ >= kResyncEvery) {
      resync(model);
      return;
    }
    const std::size_t q = data_.q;
    moved_.clear();
    for (std::size_t c = 0; c < q; ++c)
      if (tau[c] != 0.0) moved_.push_back(c);
    for (std::size_t i = 0; i < data_.n; ++i) {
      const double* x = data_.row(i);
      double proj = 0.0;
      for (std::size_t j = 0; j < data_.d; ++j) proj += x[j] * z[j];
      double* s = &scores_[i * q];
      ClassIndex top = top_[i];
      bool rescan = false;
      for (ClassIndex c : moved_) {
        s[c] += tau[c] * proj;
        if (c == top && tau[c] * proj < 0.0) rescan = true;
      }
      if (rescan) {
        top = argmax_lowest({s, q});
      } else {
        // The old top did not drop, so only a raised class can overtake it.
        for (ClassIndex c : moved_)
          if (s[c] > s[top] || (s[c] == s[top] && c < top)) top = c;
      }
      const std::size_t region =
          alpha_ == 0.0 ? top : region_of({s, q}, top, alpha_);
      if (top != top_[i]) {
        if (top_[i] != data_.noisy[i]) --noisy_errors_;
        if (top != data_.noisy[i]) ++noisy_errors_;
        top_[i] = top;
      }
      if (region != region_[i]) {
        add_to_gamma(i, region_[i], -1.0);
        add_to_gamma(i, region, 1.0);
        region_[i] = region;
      }
    }
  }

  void fill_candidates(const ConfusionMatrix& c,
                       std::vector<UpdateCandidate>& out) const {
    const std::size_t q = data_.q;
    const double scale = 1.0 / static_cast<double>(data_.n);
    out.resize(q * (q - 1));
    std::size_t slot = 0;
    for (ClassIndex p = 0; p < q; ++p)
      for (ClassIndex k = 0; k < q; ++k)
        if (p != k)
          fill_candidate(gammas_, c.inverse(), p, k, out[slot++], scale);
  }

  std::size_t noisy_errors() const { return noisy_errors_; }

 private:
  void add_to_gamma(std::size_t i, std::size_t region, double sign) {
    if (region == kNoRegion) return;
    if (sign > 0.0)
      ++gammas_.support[region];
    else
      --gammas_.support[region];
    double* dst = gammas_.row(region, data_.noisy[i]);
    const double* x = data_.row(i);
    for (std::size_t j = 0; j < data_.d; ++j) dst[j] += sign * x[j];
  }

  const FlatData& data_;
  double alpha_;
  std::vector<double> scores_;  // n x q
  std::vector<ClassIndex> top_;
  std::vector<std::size_t> region_;
  GammaStack gammas_;  // raw sums
  std::vector<ClassIndex> moved_;
  std::size_t noisy_errors_ = 0;
  std::size_t since_resync_ = 0;
};

bool lex_less(const UpdateCandidate& a, const UpdateCandidate& b) {
  return a.p != b.p ? a.p < b.p : a.q < b.q;
}

}  // namespace

std::string to_string(Selection s) {
  switch (s) {
    case Selection::error: return "error";
    case Selection::confusion: return "confusion";
    case Selection::random: return "random";
  }
  return "?";
}

std::string to_string(StepRule r) {
  return r == StepRule::perceptron ? "perceptron" : "uniform";
}

std::string to_string(StopReason r) {
  switch (r) {
    case StopReason::converged: return "converged";
    case StopReason::stalled: return "stalled";
    case StopReason::max_iters: return "max_iters";
  }
  return "?";
}

Selection parse_selection(const std::string& s) {
  if (s == "error") return Selection::error;
  if (s == "confusion") return Selection::confusion;
  if (s == "random") return Selection::random;
  throw InvalidValue("unknown selection strategy '" + s + "'");
}

StepRule parse_step_rule(const std::string& s) {
  if (s == "perceptron") return StepRule::perceptron;
  if (s == "uniform") return StepRule::uniform;
  throw InvalidValue("unknown step rule '" + s + "'");
}

void UmaConfig::validate() const {
  if (!(alpha >= 0.0) || !std::isfinite(alpha))
    throw InvalidValue("alpha must be >= 0");
  if (!(stop_norm > 0.0)) throw InvalidValue("stop_norm must be > 0");
  if (max_iters < 1) throw InvalidValue("max_iters must be >= 1");
  if (!(prior_floor > 0.0)) throw InvalidValue("prior_floor must be > 0");
}

std::size_t UmaConfig::default_max_iters(std::optional<double> theta) {
  if (!theta || *theta <= 0.0) return 100000;
  return static_cast<std::size_t>(std::ceil(10.0 * 2.0 / (*theta * *theta)));
}

std::vector<std::size_t> region_a(const LinearModel& model,
                                  const LabeledDataset& ds, ClassIndex p,
                                  double alpha) {
  require_dims(model, ds);
  std::vector<std::size_t> out;
  std::vector<double> scores(model.q_classes());
  for (std::size_t i = 0; i < ds.size(); ++i) {
    model.scores(ds[i].features.span(), scores);
    if (region_of(scores, argmax_lowest(scores), alpha) == p) out.push_back(i);
  }
  return out;
}

DenseMatrix gamma_matrix(const LinearModel& model, const LabeledDataset& ds,
                         ClassIndex p, double alpha) {
  require_dims(model, ds);
  require_noisy(ds);
  const FlatData data(ds);
  RegionPass pass;
  GammaStack g;
  assign_regions(model, data, alpha, pass);
  build_gammas(data, pass, g);
  DenseMatrix out(ds.q_classes(), ds.dim());
  for (std::size_t k = 0; k < ds.q_classes(); ++k)
    std::copy_n(g.row(p, k), ds.dim(), out.row(k).begin());
  return out;
}

UpdateCandidate candidate(const LinearModel& model, const LabeledDataset& ds,
                          const ConfusionMatrix& c, ClassIndex p, ClassIndex q,
                          double alpha) {
  if (p == q) throw InvalidValue("candidate requires p != q");
  require_dims(model, ds);
  require_noisy(ds);
  const FlatData data(ds);
  RegionPass pass;
  GammaStack g;
  assign_regions(model, data, alpha, pass);
  build_gammas(data, pass, g);
  UpdateCandidate cand;
  fill_candidate(g, c.inverse(), p, q, cand);
  return cand;
}

std::vector<UpdateCandidate> all_candidates(const LinearModel& model,
                                            const LabeledDataset& ds,
                                            const ConfusionMatrix& c,
                                            double alpha) {
  require_dims(model, ds);
  require_noisy(ds);
  CandidateWorkspace ws;
  ws.refresh(model, FlatData(ds), c, alpha);
  return std::move(ws.candidates);
}

std::vector<ClassIndex> error_set(const LinearModel& model,
                                  const DenseVector& z, ClassIndex q,
                                  double alpha) {
  const auto s = model.scores(z);
  std::vector<ClassIndex> out;
  for (ClassIndex r = 0; r < s.size(); ++r)
    if (r != q && s[r] - s[q] >= alpha) out.push_back(r);
  return out;
}

std::vector<double> tau_steps(std::span<const ClassIndex> errors, ClassIndex q,
                              StepRule rule, ClassIndex p,
                              std::size_t q_classes) {
  std::vector<double> tau(q_classes, 0.0);
  if (errors.empty()) return tau;
  if (std::find(errors.begin(), errors.end(), q) != errors.end())
    throw InvalidValue("error set must not contain q");
  tau[q] = 1.0;
  const bool p_in_errors =
      std::find(errors.begin(), errors.end(), p) != errors.end();
  if (rule == StepRule::perceptron && p_in_errors) {
    tau[p] = -1.0;
    return tau;
  }
  const double share = -1.0 / static_cast<double>(errors.size());
  for (ClassIndex r : errors) tau[r] = share;
  return tau;
}

void apply_update(LinearModel& model, std::span<const double> tau,
                  const DenseVector& z) {
  if (tau.size() != model.q_classes() || z.dim() != model.dim())
    throw DimensionMismatch("update shape does not match the model");
  double sum = 0.0;
  for (double t : tau) sum += t;
  if (std::abs(sum) > 1e-12)
    throw InvalidValue("update steps must sum to zero");
  auto& w = model.weights();
  for (std::size_t j = 0; j < model.dim(); ++j) {
    auto row = w.row(j);
    for (std::size_t r = 0; r < tau.size(); ++r)
      if (tau[r] != 0.0) row[r] += tau[r] * z[j];
  }
}

PriorEstimate estimate_class_priors(const LabeledDataset& ds,
                                    const ConfusionMatrix& c) {
  require_noisy(ds);
  if (c.q_classes() != ds.q_classes())
    throw DimensionMismatch("confusion matrix size does not match dataset");
  const auto counts = ds.noisy_label_counts();
  std::vector<double> freq(counts.size());
  for (std::size_t k = 0; k < counts.size(); ++k)
    freq[k] = static_cast<double>(counts[k]) / static_cast<double>(ds.size());
  PriorEstimate est{matvec(c.inverse(), DenseVector(std::move(freq))), {}};
  est.clamped = est.raw;
  for (double& v : est.clamped.span()) v = std::max(v, 0.0);
  return est;
}

std::pair<ClassIndex, ClassIndex> select_pair(
    std::span<const UpdateCandidate> candidates, const DenseVector& priors,
    const UmaConfig& cfg, RngStream& rng) {
  std::vector<const UpdateCandidate*> viable;
  for (const auto& c : candidates)
    if (c.norm_z > cfg.stop_norm) viable.push_back(&c);
  if (viable.empty())
    throw NoViableCandidate("every candidate norm is <= stop_norm");
  auto by_pair = [](const auto* a, const auto* b) { return lex_less(*a, *b); };
  if (!std::is_sorted(viable.begin(), viable.end(), by_pair))
    std::sort(viable.begin(), viable.end(), by_pair);

  if (cfg.selection == Selection::random) {
    const auto* pick = viable[rng.below(viable.size())];
    return {pick->p, pick->q};
  }
  auto score = [&](const UpdateCandidate& c) {
    if (cfg.selection == Selection::error) return c.norm_z;
    const double prior = c.q < priors.dim() ? priors[c.q] : 0.0;
    return c.norm_z / std::max(prior, cfg.prior_floor);
  };
  const UpdateCandidate* best = viable.front();
  double best_score = score(*best);
  for (const auto* c : viable) {
    const double s = score(*c);
    if (s > best_score) {
      best = c;
      best_score = s;
    }
  }
  return {best->p, best->q};
}

UmaResult train_uma(const LabeledDataset& ds, const ConfusionMatrix& c,
                    const UmaConfig& cfg, RngStream& rng,
                    const UpdateObserver& observer) {
  cfg.validate();
  require_noisy(ds);
  if (c.q_classes() != ds.q_classes())
    throw DimensionMismatch("confusion matrix size does not match dataset");

  const std::size_t q_classes = ds.q_classes();
  UmaResult result{LinearModel(q_classes, ds.dim()), {}, StopReason::max_iters};
  const DenseVector priors = cfg.selection == Selection::confusion
                                 ? estimate_class_priors(ds, c).raw
                                 : DenseVector(q_classes, 0.0);

  const FlatData data(ds);
  TrainState state(data, cfg.alpha);
  state.resync(result.model);
  std::vector<UpdateCandidate> candidates;
  for (std::size_t iter = 0; iter < cfg.max_iters; ++iter) {
    state.fill_candidates(c, candidates);
    const std::size_t noisy_errors = state.noisy_errors();

    // Candidates whose error set is empty are dropped for this iteration and
    // the next best pair is tried.
    bool updated = false;
    std::size_t spent = 0;
    while (!updated) {
      std::pair<ClassIndex, ClassIndex> pick;
      try {
        pick = select_pair(candidates, priors, cfg, rng);
      } catch (const NoViableCandidate&) {
        break;
      }
      auto it = std::find_if(candidates.begin(), candidates.end(),
                             [&](const UpdateCandidate& u) {
                               return u.p == pick.first && u.q == pick.second;
                             });
      const auto errors = error_set(result.model, it->z, it->q, cfg.alpha);
      const auto tau =
          tau_steps(errors, it->q, cfg.step_rule, it->p, q_classes);
      if (errors.empty()) {
        candidates.erase(it);
        ++spent;
        continue;
      }
      apply_update(result.model, tau, it->z);
      state.step(result.model, tau, it->z);
      if (observer) observer(result.model, tau);
      result.trace.push_back(
          {iter, it->p, it->q, it->norm_z, errors.size(),
           static_cast<double>(noisy_errors) / static_cast<double>(ds.size())});
      updated = true;
    }
    if (!updated) {
      result.reason = spent == 0 ? StopReason::converged : StopReason::stalled;
      return result;
    }
  }
  return result;
}

}  // namespace unconfused
