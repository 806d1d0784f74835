#pragma once

// Unconfused ultraconservative multiclass additive learner.
//
// Training data carries only noisy labels y drawn from P(y = p | t = q) =
// C(p, q). For every ordered pair (p, q) the learner builds an update vector
// z_pq from the points the current model confidently assigns to p:
//
//   A_p       = { x : <w_p - w_k, x> > alpha for all k != p }
//   Gamma^p_k = (1/n) sum_{x in A_p, y = k} x          (Q x d)
//   z_pq      = row q of C^-1 Gamma^p
//
// z_pq estimates the (mass-weighted) mean of true-class-q points predicted p,
// without ever seeing true labels. One pair is selected, an ultraconservative
// step tau (tau_q = 1, tau_r <= 0 on the error set, sum tau = 0) is applied,
// and the loop stops once every ||z_pq|| is below a threshold.

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "unconfused/matrix.hpp"
#include "unconfused/problem.hpp"
#include "unconfused/rng.hpp"

namespace unconfused {

enum class Selection { error, confusion, random };
enum class StepRule { perceptron, uniform };

std::string to_string(Selection s);
std::string to_string(StepRule r);
Selection parse_selection(const std::string& s);
StepRule parse_step_rule(const std::string& s);

struct UmaConfig {
  /// Region/error-set threshold. 0 makes the region the predicted-class cell.
  double alpha = 0.0;
  double stop_norm = 1e-4;
  std::size_t max_iters = 100000;
  Selection selection = Selection::error;
  StepRule step_rule = StepRule::perceptron;
  /// Floor on estimated priors in the confusion strategy.
  double prior_floor = 1e-6;

  void validate() const;
  /// 10 * (2 / theta^2) when the margin is known, 10^5 otherwise.
  static std::size_t default_max_iters(std::optional<double> theta);
};

struct UpdateCandidate {
  ClassIndex p = 0;
  ClassIndex q = 0;
  DenseVector z;
  std::size_t support = 0;  // |A_p|
  double norm_z = 0.0;
};

struct IterationTrace {
  std::size_t iter = 0;
  ClassIndex chosen_p = 0;
  ClassIndex chosen_q = 0;
  double norm_z = 0.0;
  std::size_t error_set_size = 0;
  /// Fraction of training points whose prediction differs from the noisy
  /// label, measured on the model the candidates were built from.
  double train_noisy_error = 0.0;
};

/// Indices i with <w_p - w_k, x_i> > alpha for every k != p. With alpha == 0
/// the strict test is replaced by the prediction rule (argmax, lowest index on
/// ties), so the regions partition the data even at W = 0.
std::vector<std::size_t> region_a(const LinearModel& model,
                                  const LabeledDataset& ds, ClassIndex p,
                                  double alpha);

/// Q x d; row k = (1/n) sum of x_i over A_p with noisy label k.
DenseMatrix gamma_matrix(const LinearModel& model, const LabeledDataset& ds,
                         ClassIndex p, double alpha);

/// z_pq = row q of C^-1 Gamma^p.
UpdateCandidate candidate(const LinearModel& model, const LabeledDataset& ds,
                          const ConfusionMatrix& c, ClassIndex p, ClassIndex q,
                          double alpha);

/// Every candidate (p, q), p != q, in lexicographic order, from one pass over
/// the data.
std::vector<UpdateCandidate> all_candidates(const LinearModel& model,
                                            const LabeledDataset& ds,
                                            const ConfusionMatrix& c,
                                            double alpha);

/// { r != q : <w_r - w_q, z> >= alpha }.
std::vector<ClassIndex> error_set(const LinearModel& model,
                                  const DenseVector& z, ClassIndex q,
                                  double alpha);

/// Step sizes over all Q classes. Perceptron: tau_q = 1, tau_p = -1 when p is
/// in the error set, else the uniform rule. Uniform: tau_r = -1/|E| on E.
/// Empty error set gives all zeros.
std::vector<double> tau_steps(std::span<const ClassIndex> errors, ClassIndex q,
                              StepRule rule, ClassIndex p,
                              std::size_t q_classes);

/// w_r += tau_r z. Throws InvalidValue unless |sum tau| <= 1e-12.
void apply_update(LinearModel& model, std::span<const double> tau,
                  const DenseVector& z);

struct PriorEstimate {
  DenseVector raw;      // C^-1 (counts / n)
  DenseVector clamped;  // raw with negatives set to 0
};

PriorEstimate estimate_class_priors(const LabeledDataset& ds,
                                    const ConfusionMatrix& c);

/// Pair chosen among candidates with norm_z > stop_norm. Throws
/// NoViableCandidate when there is none.
std::pair<ClassIndex, ClassIndex> select_pair(
    std::span<const UpdateCandidate> candidates, const DenseVector& priors,
    const UmaConfig& cfg, RngStream& rng);

enum class StopReason {
  converged,  // every ||z_pq|| <= stop_norm
  stalled,    // viable candidates exist but none yields a non-empty error set
  max_iters,
};

std::string to_string(StopReason r);

struct UmaResult {
  LinearModel model;
  std::vector<IterationTrace> trace;
  StopReason reason = StopReason::converged;
  std::size_t updates() const { return trace.size(); }
};

/// Called after every applied update with the new model and the step vector.
using UpdateObserver =
    std::function<void(const LinearModel&, std::span<const double> tau)>;

UmaResult train_uma(const LabeledDataset& ds, const ConfusionMatrix& c,
                    const UmaConfig& cfg, RngStream& rng,
                    const UpdateObserver& observer = {});

}  // namespace unconfused
