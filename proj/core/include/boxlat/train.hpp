#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "boxlat/box.hpp"
#include "boxlat/measure.hpp"
#include "boxlat/model.hpp"
#include "boxlat/vocabulary.hpp"

namespace boxlat {

// One maximum-likelihood target: a unary marginal p(a), or a pairwise
// conditional P(a | b). Negative examples come from corrupted edges and have
// target 0; their loss terms never move box widths.
struct TrainExample {
  enum class Kind { unary, pair };

  Kind kind = Kind::unary;
  std::size_t a = 0;
  std::size_t b = 0;
  double target = 0.0;
  double weight = 1.0;
  bool is_negative = false;

  static TrainExample unary(std::size_t concept_index, double p, double weight = 1.0) {
    return {Kind::unary, concept_index, concept_index, p, weight, false};
  }
  static TrainExample pair(std::size_t a, std::size_t b, double p_a_given_b, double weight = 1.0,
                           bool is_negative = false) {
    return {Kind::pair, a, b, p_a_given_b, weight, is_negative};
  }
};

struct AdamConfig {
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
};

// Initial boxes: min ~ U(min_lo, min_hi), side ~ U(side_lo, side_hi) per
// coordinate, then projected onto the feasible set.
struct InitSpec {
  double min_lo = 0.0;
  double min_hi = 0.1;
  double side_lo = 0.2;
  double side_hi = 0.9;
};

// Defaults are the WordNet hyperparameters (batch 800, 50 dimensions, edge
// weight 1, unary weight 9, learning rate 1e-3, min delta 1e-6, max
// regularization 5e-3, Adam).
struct TrainConfig {
  std::size_t dimension = 50;
  MeasureKind measure = MeasureKind::uniform;
  double max_coordinate = kDefaultExponentialMax;
  double learning_rate = 1e-3;
  std::size_t batch_size = 800;
  double unary_weight = 9.0;
  double edge_weight = 1.0;
  double min_delta = 1e-6;
  double surrogate_eps = 1e-8;
  double max_reg_weight = 0.005;
  // Pair terms whose conditioning box has probability at or below this are
  // skipped and counted. Volumes are evaluated in log space, so only a true
  // null event needs skipping.
  double null_event_prob = 0.0;
  std::size_t epochs = 50;
  std::uint64_t seed = 0;
  bool poe_mode = false;
  bool poe_double_dimension = false;
  AdamConfig adam;
  std::size_t threads = 1;

  // Throws InvalidArgument on negative weights, zero dimension or batch size,
  // or an unsupported measure.
  void validate() const;
  std::size_t effective_dimension() const { return poe_mode && poe_double_dimension ? 2 * dimension : dimension; }
  ProductMeasure make_measure() const;
};

// Dense trainable parameters. Row c of `mins` / `deltas` holds concept c.
struct BoxParams {
  std::size_t concepts = 0;
  std::size_t dimension = 0;
  std::vector<double> mins;
  std::vector<double> deltas;

  BoxParams() = default;
  BoxParams(std::size_t concepts, std::size_t dimension)
      : concepts(concepts), dimension(dimension), mins(concepts * dimension), deltas(concepts * dimension) {}

  static BoxParams from_model(const Model& model);
  Model to_model(Vocabulary vocabulary, ProductMeasure measure, bool poe) const;
  Box box(std::size_t c) const;

  std::span<double> min_row(std::size_t c) { return {mins.data() + c * dimension, dimension}; }
  std::span<double> delta_row(std::size_t c) { return {deltas.data() + c * dimension, dimension}; }
  std::span<const double> min_row(std::size_t c) const { return {mins.data() + c * dimension, dimension}; }
  std::span<const double> delta_row(std::size_t c) const { return {deltas.data() + c * dimension, dimension}; }

  bool operator==(const BoxParams&) const = default;
};

struct LossResult {
  double loss = 0.0;
  BoxParams gradient;  // same shape as the parameters
  std::size_t surrogate_terms = 0;
  std::size_t skipped_null_conditionals = 0;
};

// p(a) + p(b) - p(a ∨ b): a lower bound on p(a ∧ b) that is differentiable
// everywhere and nonpositive unless the boxes intersect.
double surrogate_gap(const Box& a, const Box& b, const ProductMeasure& m);

struct PairLogProb {
  double value = 0.0;
  bool used_surrogate = false;
};

// log p(a ∧ b) when the boxes intersect; otherwise -log(p(a ∨ b) - p(a) - p(b) + eps),
// the quantity whose maximization pulls disjoint boxes together.
PairLogProb pair_log_prob(const Box& a, const Box& b, const ProductMeasure& m, double surrogate_eps = 1e-8);

// Weighted binary cross-entropy over the batch (mean over examples) plus the
// L1 pull of every batch concept's upper corner toward the support's upper
// bound, with analytic gradients. Throws NumericError naming the concept
// indices when a gradient is not finite.
LossResult evaluate_loss(const BoxParams& params, const ProductMeasure& m, std::span<const TrainExample> batch,
                         const TrainConfig& cfg);
LossResult loss(const Model& model, std::span<const TrainExample> batch, const TrainConfig& cfg);

// Euclidean projection onto the feasible set, per coordinate: delta is clamped
// to [min_delta, upper - lower] first, then min to [lower, upper - delta]. In
// POE mode min + delta equals the upper bound exactly.
void project(BoxParams& params, const ProductMeasure& m, double min_delta, bool poe_mode);
Model project(const Model& model, const TrainConfig& cfg);

class Adam {
 public:
  Adam(std::size_t size, AdamConfig cfg);
  void step(std::span<double> params, std::span<const double> grad, double learning_rate);
  std::size_t steps() const noexcept { return steps_; }

 private:
  AdamConfig cfg_;
  std::vector<double> m_;
  std::vector<double> v_;
  std::size_t steps_ = 0;
};

BoxParams initialize(std::size_t concepts, const TrainConfig& cfg, const InitSpec& init);

struct EpochLog {
  std::size_t epoch = 0;
  double loss = 0.0;
  std::optional<double> dev_metric;
};

struct FitHooks {
  std::function<double(const Model&)> dev_metric;
  std::function<void(const EpochLog&)> on_epoch;
};

struct FitResult {
  Model model;
  std::vector<EpochLog> log;
  std::size_t skipped_null_conditionals = 0;
};

// Shuffled mini-batch Adam on the analytic gradients, projecting after every
// step. Deterministic for a given seed. Throws NumericError on divergence and
// InvalidArgument on empty data or out-of-vocabulary examples.
FitResult fit(const Vocabulary& vocabulary, std::span<const TrainExample> data, const TrainConfig& cfg,
              const InitSpec& init = {}, const FitHooks& hooks = {});

}  // namespace boxlat
