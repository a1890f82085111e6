#include "boxlat/train.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>
#include <thread>

#include "boxlat/error.hpp"
#include "boxlat/random.hpp"

namespace boxlat {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

// Floor on 1 - p inside log(1 - p); beyond it the (1 - t) term is constant.
constexpr double kOneMinusFloor = 1e-12;

struct Row {
  const double* lo;
  const double* width;
};

// Gradient contributions of one example, for at most two concepts (slots).
class Sink {
 public:
  Sink(double* base, std::size_t n, bool freeze_widths) : base_(base), n_(n), freeze_widths_(freeze_widths) {}

  void add_min(int slot, std::size_t i, double v) { base_[slot * 2 * n_ + i] += v; }
  void add_width(int slot, std::size_t i, double v) {
    if (!freeze_widths_) base_[slot * 2 * n_ + n_ + i] += v;
  }

 private:
  double* base_;
  std::size_t n_;
  bool freeze_widths_;
};

double row_log_volume(const ProductMeasure& m, Row r, std::size_t n) {
  double total = 0.0;
  for (std::size_t i = 0; i < n; ++i) total += m.log_mass(i, r.lo[i], r.width[i]);
  return total;
}

void add_row_grad(const ProductMeasure& m, Row r, std::size_t n, double scale, Sink& sink, int slot) {
  for (std::size_t i = 0; i < n; ++i) {
    const LogMassGradient g = m.log_mass_gradient(i, r.lo[i], r.width[i]);
    sink.add_min(slot, i, scale * g.d_lower);
    sink.add_width(slot, i, scale * g.d_width);
  }
}

// Per-coordinate bounds of a meet or join and which operand supplied each end.
struct Extremes {
  std::vector<double> lo;
  std::vector<double> width;
  std::vector<int> lo_slot;
  std::vector<int> hi_slot;

  void resize(std::size_t n) {
    lo.resize(n);
    width.resize(n);
    lo_slot.resize(n);
    hi_slot.resize(n);
  }
};

// Ties route to the first operand (slot sa).
bool compute_extremes(Row a, Row b, int sa, int sb, std::size_t n, bool is_meet, Extremes& out) {
  out.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double a_hi = a.lo[i] + a.width[i];
    const double b_hi = b.lo[i] + b.width[i];
    const bool lo_from_a = is_meet ? a.lo[i] >= b.lo[i] : a.lo[i] <= b.lo[i];
    const bool hi_from_a = is_meet ? a_hi <= b_hi : a_hi >= b_hi;
    const double lo = lo_from_a ? a.lo[i] : b.lo[i];
    const double hi = hi_from_a ? a_hi : b_hi;
    if (is_meet && !(hi > lo)) return false;
    out.lo[i] = lo;
    out.lo_slot[i] = lo_from_a ? sa : sb;
    out.hi_slot[i] = hi_from_a ? sa : sb;
    if (lo_from_a == hi_from_a) {
      out.width[i] = lo_from_a ? a.width[i] : b.width[i];
    } else {
      out.width[i] = hi - lo;
    }
  }
  return true;
}

double extremes_log_volume(const ProductMeasure& m, const Extremes& e, std::size_t n) {
  double total = 0.0;
  for (std::size_t i = 0; i < n; ++i) total += m.log_mass(i, e.lo[i], e.width[i]);
  return total;
}

// The lower end moves with its source's min; the upper end moves with its
// source's min and width.
void add_extremes_grad(const ProductMeasure& m, const Extremes& e, std::size_t n, double scale, Sink& sink) {
  for (std::size_t i = 0; i < n; ++i) {
    const LogMassGradient g = m.log_mass_gradient(i, e.lo[i], e.width[i]);
    const double d_lo = g.d_lower - g.d_width;
    const double d_hi = g.d_width;
    sink.add_min(e.lo_slot[i], i, scale * d_lo);
    sink.add_min(e.hi_slot[i], i, scale * d_hi);
    sink.add_width(e.hi_slot[i], i, scale * d_hi);
  }
}

// -(t log p + (1 - t) log(1 - p)) and its derivative with respect to log p.
struct CrossEntropy {
  double value;
  double d_log_p;
};

CrossEntropy cross_entropy_from_log(double log_p, double t) {
  log_p = std::min(log_p, 0.0);
  const double p = std::exp(log_p);
  const double one_minus = -std::expm1(log_p);
  double value = 0.0;
  double d = 0.0;
  if (t > 0.0) {
    value -= t * log_p;
    d -= t;
  }
  if (t < 1.0) {
    value -= (1.0 - t) * std::log(std::max(one_minus, kOneMinusFloor));
    if (one_minus > kOneMinusFloor) d += (1.0 - t) * p / one_minus;
  }
  return {value, d};
}

struct ExampleOutcome {
  double loss = 0.0;
  bool surrogate = false;
  bool skipped = false;
};

ExampleOutcome example_terms(const BoxParams& params, const ProductMeasure& m, const TrainExample& ex,
                             const TrainConfig& cfg, double inv_batch, double* grad_base, Extremes& scratch) {
  const std::size_t n = params.dimension;
  Sink sink(grad_base, n, ex.is_negative);
  const Row ra{params.mins.data() + ex.a * n, params.deltas.data() + ex.a * n};
  ExampleOutcome out;

  if (ex.kind == TrainExample::Kind::unary) {
    const double scale = ex.weight * cfg.unary_weight * inv_batch;
    const CrossEntropy ce = cross_entropy_from_log(row_log_volume(m, ra, n), ex.target);
    out.loss = scale * ce.value;
    add_row_grad(m, ra, n, scale * ce.d_log_p, sink, 0);
    return out;
  }

  const int slot_b = ex.a == ex.b ? 0 : 1;
  const Row rb{params.mins.data() + ex.b * n, params.deltas.data() + ex.b * n};
  const double scale = ex.weight * cfg.edge_weight * inv_batch;
  const double log_pb = row_log_volume(m, rb, n);
  const double log_floor = cfg.null_event_prob > 0.0 ? std::log(cfg.null_event_prob) : kNegInf;
  if (log_pb == kNegInf || log_pb <= log_floor) {
    out.skipped = true;
    return out;
  }

  if (compute_extremes(ra, rb, 0, slot_b, n, /*is_meet=*/true, scratch)) {
    const double log_joint = extremes_log_volume(m, scratch, n);
    const CrossEntropy ce = cross_entropy_from_log(log_joint - log_pb, ex.target);
    out.loss = scale * ce.value;
    add_extremes_grad(m, scratch, n, scale * ce.d_log_p, sink);
    add_row_grad(m, rb, n, -scale * ce.d_log_p, sink, slot_b);
    return out;
  }

  // Disjoint boxes: a zero-target term is already satisfied.
  if (ex.target <= 0.0) return out;

  out.surrogate = true;
  const double t = ex.target;
  const double log_pa = row_log_volume(m, ra, n);
  compute_extremes(ra, rb, 0, slot_b, n, /*is_meet=*/false, scratch);
  const double log_pj = extremes_log_volume(m, scratch, n);
  const double pa = std::exp(log_pa);
  const double pb = std::exp(log_pb);
  const double pj = std::exp(log_pj);
  const double raw_gap = pj - pa - pb;
  const double gap = std::max(raw_gap, 0.0);
  // Loss -t * (surrogate log joint - log p(b)) = t log(gap + eps) + t log p(b).
  out.loss = scale * (t * std::log(gap + cfg.surrogate_eps) + t * log_pb);
  const double d_gap = raw_gap >= 0.0 ? t / (gap + cfg.surrogate_eps) : 0.0;
  add_extremes_grad(m, scratch, n, scale * d_gap * pj, sink);
  add_row_grad(m, ra, n, -scale * d_gap * pa, sink, 0);
  add_row_grad(m, rb, n, scale * (t - d_gap * pb), sink, slot_b);
  return out;
}

void check_example(const TrainExample& ex, std::size_t concepts) {
  if (ex.a >= concepts || ex.b >= concepts) {
    throw InvalidArgument("training example references concept index outside the vocabulary");
  }
  if (!(ex.target >= 0.0 && ex.target <= 1.0)) throw InvalidArgument("training target outside [0, 1]");
  if (!(ex.weight >= 0.0)) throw InvalidArgument("training weight must be nonnegative");
}

void evaluate_loss_into(const BoxParams& params, const ProductMeasure& m, std::span<const TrainExample> batch,
                        const TrainConfig& cfg, LossResult& out) {
  const std::size_t n = params.dimension;
  if (m.dimension() != n) throw InvalidArgument("measure dimension does not match parameter dimension");
  out.gradient.concepts = params.concepts;
  out.gradient.dimension = n;
  out.gradient.mins.assign(params.mins.size(), 0.0);
  out.gradient.deltas.assign(params.deltas.size(), 0.0);
  out.loss = 0.0;
  out.surrogate_terms = 0;
  out.skipped_null_conditionals = 0;
  if (batch.empty()) return;

  for (const auto& ex : batch) check_example(ex, params.concepts);

  const double inv_batch = 1.0 / static_cast<double>(batch.size());
  const std::size_t stride = 4 * n;  // two slots of (min, width)
  std::vector<double> per_example(batch.size() * stride, 0.0);
  std::vector<ExampleOutcome> outcomes(batch.size());

  auto run_range = [&](std::size_t begin, std::size_t end) {
    Extremes scratch;
    for (std::size_t e = begin; e < end; ++e) {
      outcomes[e] = example_terms(params, m, batch[e], cfg, inv_batch, per_example.data() + e * stride, scratch);
    }
  };

  const std::size_t workers = std::clamp<std::size_t>(cfg.threads, 1, std::max<std::size_t>(1, batch.size() / 64));
  if (workers <= 1) {
    run_range(0, batch.size());
  } else {
    std::vector<std::jthread> pool;
    const std::size_t chunk = (batch.size() + workers - 1) / workers;
    for (std::size_t w = 0; w < workers; ++w) {
      const std::size_t begin = w * chunk;
      const std::size_t end = std::min(batch.size(), begin + chunk);
      if (begin < end) pool.emplace_back(run_range, begin, end);
    }
  }

  // Serial reduction in example order keeps results independent of the worker count.
  for (std::size_t e = 0; e < batch.size(); ++e) {
    const TrainExample& ex = batch[e];
    const ExampleOutcome& o = outcomes[e];
    const double* g = per_example.data() + e * stride;
    for (std::size_t k = 0; k < stride; ++k) {
      if (!std::isfinite(g[k])) {
        std::vector<std::size_t> ids{ex.a};
        if (ex.b != ex.a) ids.push_back(ex.b);
        throw NumericError("non-finite gradient", ids);
      }
    }
    out.loss += o.loss;
    out.surrogate_terms += o.surrogate ? 1 : 0;
    out.skipped_null_conditionals += o.skipped ? 1 : 0;
    const bool two = ex.kind == TrainExample::Kind::pair && ex.a != ex.b;
    const std::size_t concepts_in_slot[2] = {ex.a, ex.b};
    for (int slot = 0; slot < (two ? 2 : 1); ++slot) {
      const std::size_t c = concepts_in_slot[slot];
      const double* gs = g + slot * 2 * n;
      double* gm = out.gradient.mins.data() + c * n;
      double* gd = out.gradient.deltas.data() + c * n;
      for (std::size_t i = 0; i < n; ++i) {
        gm[i] += gs[i];
        gd[i] += gs[n + i];
      }
    }
  }

  if (cfg.max_reg_weight > 0.0) {
    std::vector<std::size_t> seen;
    seen.reserve(2 * batch.size());
    for (const auto& ex : batch) {
      seen.push_back(ex.a);
      if (ex.kind == TrainExample::Kind::pair) seen.push_back(ex.b);
    }
    std::sort(seen.begin(), seen.end());
    seen.erase(std::unique(seen.begin(), seen.end()), seen.end());
    const double scale = cfg.max_reg_weight * inv_batch;
    for (std::size_t c : seen) {
      for (std::size_t i = 0; i < n; ++i) {
        const double hi = params.mins[c * n + i] + params.deltas[c * n + i];
        out.loss += scale * std::abs(m.upper(i) - hi);
        const double sign = hi < m.upper(i) ? -1.0 : (hi > m.upper(i) ? 1.0 : 0.0);
        out.gradient.mins[c * n + i] += scale * sign;
        out.gradient.deltas[c * n + i] += scale * sign;
      }
    }
  }

  if (!std::isfinite(out.loss)) throw NumericError("non-finite loss");
}

void project_coordinate(double& lo, double& width, double lower, double upper, double min_delta, bool poe_mode) {
  if (poe_mode) {
    lo = std::clamp(lo, lower, upper - min_delta);
    width = delta_to_reach(lo, upper);
    while (width < min_delta && lo > lower) {
      lo = std::nextafter(lo, lower);
      width = delta_to_reach(lo, upper);
    }
    return;
  }
  width = std::clamp(width, min_delta, upper - lower);
  lo = std::clamp(lo, lower, upper - width);
  while (lo + width > upper && lo > lower) lo = std::nextafter(lo, lower);
  if (lo + width > upper) width = delta_to_reach(lo, upper);
}

}  // namespace

void TrainConfig::validate() const {
  if (dimension == 0) throw InvalidArgument("dimension must be positive");
  if (batch_size == 0) throw InvalidArgument("batch size must be positive");
  if (measure == MeasureKind::custom) throw InvalidArgument("training supports the uniform and exponential measures");
  for (double w : {learning_rate, unary_weight, edge_weight, max_reg_weight, surrogate_eps, null_event_prob}) {
    if (!(w >= 0.0) || !std::isfinite(w)) throw InvalidArgument("training weights and rates must be nonnegative");
  }
  if (!(min_delta > 0.0)) throw InvalidArgument("min delta must be positive");
  if (!(adam.beta1 >= 0.0 && adam.beta1 < 1.0 && adam.beta2 >= 0.0 && adam.beta2 < 1.0 && adam.epsilon > 0.0)) {
    throw InvalidArgument("invalid Adam hyperparameters");
  }
}

ProductMeasure TrainConfig::make_measure() const {
  return measure == MeasureKind::exponential ? ProductMeasure::exponential(effective_dimension(), max_coordinate)
                                             : ProductMeasure::uniform(effective_dimension());
}

BoxParams BoxParams::from_model(const Model& model) {
  BoxParams p(model.size(), model.dimension());
  for (std::size_t c = 0; c < model.size(); ++c) {
    const Box& b = model.box(c);
    std::copy(b.mins().begin(), b.mins().end(), p.min_row(c).begin());
    std::copy(b.deltas().begin(), b.deltas().end(), p.delta_row(c).begin());
  }
  return p;
}

Box BoxParams::box(std::size_t c) const {
  const auto lo = min_row(c);
  const auto w = delta_row(c);
  return Box(std::vector<double>(lo.begin(), lo.end()), std::vector<double>(w.begin(), w.end()));
}

Model BoxParams::to_model(Vocabulary vocabulary, ProductMeasure measure, bool poe) const {
  std::vector<Box> boxes;
  boxes.reserve(concepts);
  for (std::size_t c = 0; c < concepts; ++c) boxes.push_back(box(c));
  return Model(std::move(vocabulary), std::move(boxes), std::move(measure), poe);
}

double surrogate_gap(const Box& a, const Box& b, const ProductMeasure& m) {
  return volume(a, m) + volume(b, m) - volume(join(a, b), m);
}

PairLogProb pair_log_prob(const Box& a, const Box& b, const ProductMeasure& m, double surrogate_eps) {
  const LatticeElement both = meet(a, b);
  if (!both.is_bottom()) return {log_volume(both, m), false};
  const double gap = std::max(volume(join(a, b), m) - volume(a, m) - volume(b, m), 0.0);
  return {-std::log(gap + surrogate_eps), true};
}

LossResult evaluate_loss(const BoxParams& params, const ProductMeasure& m, std::span<const TrainExample> batch,
                         const TrainConfig& cfg) {
  LossResult out;
  evaluate_loss_into(params, m, batch, cfg, out);
  return out;
}

LossResult loss(const Model& model, std::span<const TrainExample> batch, const TrainConfig& cfg) {
  return evaluate_loss(BoxParams::from_model(model), model.measure(), batch, cfg);
}

void project(BoxParams& params, const ProductMeasure& m, double min_delta, bool poe_mode) {
  const std::size_t n = params.dimension;
  if (m.dimension() != n) throw InvalidArgument("measure dimension does not match parameter dimension");
  for (std::size_t c = 0; c < params.concepts; ++c) {
    for (std::size_t i = 0; i < n; ++i) {
      project_coordinate(params.mins[c * n + i], params.deltas[c * n + i], m.lower(i), m.upper(i), min_delta,
                         poe_mode);
    }
  }
}

Model project(const Model& model, const TrainConfig& cfg) {
  BoxParams p = BoxParams::from_model(model);
  project(p, model.measure(), cfg.min_delta, cfg.poe_mode);
  return p.to_model(model.vocabulary(), model.measure(), cfg.poe_mode || model.poe());
}

Adam::Adam(std::size_t size, AdamConfig cfg) : cfg_(cfg), m_(size, 0.0), v_(size, 0.0) {}

void Adam::step(std::span<double> params, std::span<const double> grad, double learning_rate) {
  if (params.size() != m_.size() || grad.size() != m_.size()) throw InvalidArgument("Adam size mismatch");
  ++steps_;
  const double t = static_cast<double>(steps_);
  const double c1 = 1.0 - std::pow(cfg_.beta1, t);
  const double c2 = 1.0 - std::pow(cfg_.beta2, t);
  for (std::size_t k = 0; k < params.size(); ++k) {
    m_[k] = cfg_.beta1 * m_[k] + (1.0 - cfg_.beta1) * grad[k];
    v_[k] = cfg_.beta2 * v_[k] + (1.0 - cfg_.beta2) * grad[k] * grad[k];
    params[k] -= learning_rate * (m_[k] / c1) / (std::sqrt(v_[k] / c2) + cfg_.epsilon);
  }
}

BoxParams initialize(std::size_t concepts, const TrainConfig& cfg, const InitSpec& init) {
  const ProductMeasure m = cfg.make_measure();
  BoxParams p(concepts, m.dimension());
  Rng rng(cfg.seed);
  for (std::size_t c = 0; c < concepts; ++c) {
    for (std::size_t i = 0; i < p.dimension; ++i) {
      p.mins[c * p.dimension + i] = m.lower(i) + rng.uniform(init.min_lo, init.min_hi);
      p.deltas[c * p.dimension + i] = rng.uniform(init.side_lo, init.side_hi);
    }
  }
  project(p, m, cfg.min_delta, cfg.poe_mode);
  return p;
}

FitResult fit(const Vocabulary& vocabulary, std::span<const TrainExample> data, const TrainConfig& cfg,
              const InitSpec& init, const FitHooks& hooks) {
  cfg.validate();
  if (data.empty()) throw InvalidArgument("no training examples");
  if (vocabulary.empty()) throw InvalidArgument("empty vocabulary");
  for (const auto& ex : data) check_example(ex, vocabulary.size());

  const ProductMeasure m = cfg.make_measure();
  BoxParams params = initialize(vocabulary.size(), cfg, init);
  // Shuffling draws from a stream separate from initialization.
  Rng rng(cfg.seed ^ 0x9e3779b97f4a7c15ULL);

  std::vector<std::size_t> order(data.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::vector<TrainExample> batch;
  batch.reserve(cfg.batch_size);
  Adam min_opt(params.mins.size(), cfg.adam);
  Adam delta_opt(params.deltas.size(), cfg.adam);
  LossResult step;
  FitResult result{params.to_model(vocabulary, m, cfg.poe_mode), {}, 0};

  for (std::size_t epoch = 1; epoch <= cfg.epochs; ++epoch) {
    rng.shuffle(std::span<std::size_t>(order));
    double epoch_loss = 0.0;
    std::size_t batch_index = 0;
    for (std::size_t start = 0; start < order.size(); start += cfg.batch_size, ++batch_index) {
      const std::size_t end = std::min(order.size(), start + cfg.batch_size);
      batch.clear();
      for (std::size_t k = start; k < end; ++k) batch.push_back(data[order[k]]);
      try {
        evaluate_loss_into(params, m, batch, cfg, step);
      } catch (const NumericError& e) {
        std::string ids;
        for (std::size_t c : e.concepts()) ids += (ids.empty() ? "" : ", ") + vocabulary.id(c);
        throw NumericError("training diverged at epoch " + std::to_string(epoch) + ", batch " +
                               std::to_string(batch_index) + ": " + e.what() + (ids.empty() ? "" : " for " + ids),
                           e.concepts());
      }
      if (cfg.poe_mode) {
        // Width is determined by min (max is pinned), so its gradient folds into min's.
        for (std::size_t k = 0; k < step.gradient.mins.size(); ++k) {
          step.gradient.mins[k] -= step.gradient.deltas[k];
          step.gradient.deltas[k] = 0.0;
        }
      }
      min_opt.step(params.mins, step.gradient.mins, cfg.learning_rate);
      delta_opt.step(params.deltas, step.gradient.deltas, cfg.learning_rate);
      project(params, m, cfg.min_delta, cfg.poe_mode);
      epoch_loss += step.loss * static_cast<double>(end - start);
      result.skipped_null_conditionals += step.skipped_null_conditionals;
    }
    EpochLog entry{epoch, epoch_loss / static_cast<double>(order.size()), std::nullopt};
    if (hooks.dev_metric) entry.dev_metric = hooks.dev_metric(params.to_model(vocabulary, m, cfg.poe_mode));
    if (hooks.on_epoch) hooks.on_epoch(entry);
    result.log.push_back(entry);
  }
  result.model = params.to_model(vocabulary, m, cfg.poe_mode);
  return result;
}

}  // namespace boxlat
