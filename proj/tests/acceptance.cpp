#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <limits>
#include <set>
#include <string>
#include <vector>

#include "boxlat/box.hpp"
#include "boxlat/dag.hpp"
#include "boxlat/data.hpp"
#include "boxlat/error.hpp"
#include "boxlat/eval.hpp"
#include "boxlat/measure.hpp"
#include "boxlat/model_io.hpp"
#include "boxlat/poe.hpp"
#include "boxlat/query.hpp"
#include "boxlat/random.hpp"
#include "boxlat/train.hpp"
#include "oracles.hpp"
#include "support.hpp"

using namespace boxlat;
using boxlat::testing::interval;
using boxlat::testing::random_box;
using boxlat::testing::rel_err;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* format, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, format, args...);
  return buf;
}

class Stopwatch {
 public:
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

ProductMeasure random_power_measure(Rng& rng, std::size_t dim) {
  std::vector<CoordinateCdf> coords;
  for (std::size_t i = 0; i < dim; ++i) {
    const double a = rng.uniform(0.2, 5.0);
    coords.push_back({[a](double t) { return std::pow(t, a); }, [a](double t) { return a * std::pow(t, a - 1.0); },
                      0.0, 1.0});
  }
  return ProductMeasure::custom(std::move(coords));
}

Outcome cone_covariance() {
  const Stopwatch clock;
  Rng rng(1001);
  double worst = std::numeric_limits<double>::infinity();
  std::size_t pairs = 0;
  for (int k = 0; k < 10000; ++k) {
    Cone a, b;
    const std::size_t dim = 1 + rng.index(8);
    for (std::size_t i = 0; i < dim; ++i) {
      a.apex.push_back(rng.uniform(0.0, 3.0));
      b.apex.push_back(rng.uniform(0.0, 3.0));
    }
    worst = std::min(worst, poe_covariance(a, b));
    ++pairs;
  }
  for (int k = 0; k < 10000; ++k) {
    const std::size_t dim = 1 + rng.index(8);
    const ProductMeasure m = random_power_measure(rng, dim);
    const auto u = ProductMeasure::uniform(dim);
    std::vector<double> x(dim), y(dim);
    for (std::size_t i = 0; i < dim; ++i) {
      x[i] = rng.uniform();
      y[i] = rng.uniform();
    }
    const Box a = cone_to_box(x, m), b = cone_to_box(y, m);
    worst = std::min(worst, volume(meet(a, b), u) - volume(a, u) * volume(b, u));
    ++pairs;
  }
  const double t = clock.seconds();
  return {worst >= -1e-12 && t < 5.0, fmt("%zu cone pairs, min covariance %.3g, %.2f s", pairs, worst, t)};
}

Outcome correlation_extremes() {
  const Stopwatch clock;
  Rng rng(1002);
  const auto m = ProductMeasure::uniform(1);
  const double lowest = boxlat::testing::search_correlation(rng, -1.0);
  const double highest = boxlat::testing::search_correlation(rng, 1.0);
  // Complementary halves are perfectly anticorrelated; equal boxes perfectly correlated.
  const double minus_one = correlation(interval(0.0, 0.5), interval(0.5, 1.0), m);
  const double plus_one = correlation(interval(0.2, 0.7), interval(0.2, 0.7), m);
  const double t = clock.seconds();
  const bool pass = lowest <= -0.99 && highest >= 0.99 && std::abs(minus_one + 1.0) <= 1e-12 &&
                    std::abs(plus_one - 1.0) <= 1e-12 && t < 5.0;
  return {pass, fmt("search min %.4f max %.4f, constructions %.15g / %.15g, %.2f s", lowest, highest, minus_one,
                    plus_one, t)};
}

Outcome surrogate_bound() {
  Rng rng(1003);
  double worst = -std::numeric_limits<double>::infinity();
  for (int k = 0; k < 100000; ++k) {
    const std::size_t dim = 1 + rng.index(5);
    const bool uniform = k % 2 == 0;
    const auto m = uniform ? ProductMeasure::uniform(dim) : ProductMeasure::exponential(dim, 6.0);
    const double hi = uniform ? 1.0 : 6.0;
    const Box a = random_box(rng, dim, 0.0, hi), b = random_box(rng, dim, 0.0, hi);
    worst = std::max(worst, surrogate_gap(a, b, m) - volume(meet(a, b), m));
  }
  // Equality cases: a = b, and a inside b.
  double equality_err = 0.0;
  for (int k = 0; k < 10000; ++k) {
    const std::size_t dim = 1 + rng.index(5);
    const auto m = ProductMeasure::uniform(dim);
    const Box b = random_box(rng, dim, 0.0, 1.0, 0.05);
    std::vector<double> lo(dim), hi(dim);
    for (std::size_t i = 0; i < dim; ++i) {
      const double x = rng.uniform(b.min(i), b.max(i)), y = rng.uniform(b.min(i), b.max(i));
      lo[i] = std::min(x, y);
      hi[i] = std::max(std::max(x, y), lo[i] + 1e-9);
      hi[i] = std::min(hi[i], b.max(i));
    }
    const Box a = Box::from_bounds(lo, hi);
    if (!contains(b, a)) continue;
    equality_err = std::max(equality_err, std::abs(surrogate_gap(b, b, m) - volume(b, m)));
    equality_err = std::max(equality_err, std::abs(surrogate_gap(a, b, m) - volume(meet(a, b), m)));
  }
  return {worst <= 1e-12 && equality_err <= 1e-15,
          fmt("max gap - meet over 1e5 pairs %.3g, equality-case error %.3g", worst, equality_err)};
}

BoxParams params_of(const std::vector<Box>& boxes) {
  BoxParams p(boxes.size(), boxes.front().dim());
  for (std::size_t c = 0; c < boxes.size(); ++c) {
    for (std::size_t i = 0; i < p.dimension; ++i) {
      p.min_row(c)[i] = boxes[c].min(i);
      p.delta_row(c)[i] = boxes[c].delta(i);
    }
  }
  return p;
}

// Worst relative error of the analytic gradient against central differences.
// Widths of negative examples are frozen by design, so only mins are probed.
double gradient_error(const BoxParams& p, const ProductMeasure& m, std::span<const TrainExample> batch,
                      const TrainConfig& cfg, bool probe_deltas) {
  const double h = 1e-5;
  const LossResult analytic = evaluate_loss(p, m, batch, cfg);
  double worst = 0.0;
  auto probe = [&](std::vector<double> BoxParams::*field, const std::vector<double>& grad) {
    for (std::size_t k = 0; k < (p.*field).size(); ++k) {
      BoxParams up = p, down = p;
      (up.*field)[k] += h;
      (down.*field)[k] -= h;
      const double numeric =
          (evaluate_loss(up, m, batch, cfg).loss - evaluate_loss(down, m, batch, cfg).loss) / (2 * h);
      worst = std::max(worst, rel_err(grad[k], numeric));
    }
  };
  probe(&BoxParams::mins, analytic.gradient.mins);
  if (probe_deltas) probe(&BoxParams::deltas, analytic.gradient.deltas);
  return worst;
}

bool separated_ends(const Box& a, const Box& b, double gap) {
  for (std::size_t i = 0; i < a.dim(); ++i) {
    if (std::abs(a.min(i) - b.min(i)) < gap || std::abs(a.max(i) - b.max(i)) < gap ||
        std::abs(a.min(i) - b.max(i)) < gap || std::abs(a.max(i) - b.min(i)) < gap) {
      return false;
    }
  }
  return true;
}

Outcome gradients() {
  Rng rng(1004);
  const std::size_t dim = 3;
  std::string detail;
  bool pass = true;
  for (MeasureKind kind : {MeasureKind::uniform, MeasureKind::exponential}) {
    const double hi = kind == MeasureKind::uniform ? 1.0 : 4.0;
    const auto m = kind == MeasureKind::uniform ? ProductMeasure::uniform(dim) : ProductMeasure::exponential(dim, hi);
    TrainConfig cfg;
    cfg.dimension = dim;
    cfg.measure = kind;
    cfg.max_coordinate = hi;
    cfg.unary_weight = 1.0;
    cfg.edge_weight = 1.0;
    cfg.max_reg_weight = 0.0;
    auto inner = [&] { return random_box(rng, dim, 0.01 * hi, 0.99 * hi, 0.05 * hi); };
    enum Term { unary, meet_pair, disjoint_pair, negative_pair, regularizer };
    const char* names[] = {"unary", "pair", "surrogate", "negative", "max-reg"};
    for (Term term : {unary, meet_pair, disjoint_pair, negative_pair, regularizer}) {
      double worst = 0.0;
      int done = 0;
      while (done < 100) {
        TrainConfig c = cfg;
        std::vector<Box> boxes{inner(), inner()};
        std::vector<TrainExample> batch;
        switch (term) {
          case unary:
            batch.push_back(TrainExample::unary(0, rng.uniform()));
            break;
          case meet_pair:
          case disjoint_pair:
            if (meet(boxes[0], boxes[1]).is_bottom() != (term == disjoint_pair)) continue;
            if (!separated_ends(boxes[0], boxes[1], 1e-3 * hi)) continue;
            batch.push_back(TrainExample::pair(0, 1, rng.uniform(0.05, 1.0)));
            break;
          case negative_pair:
            if (meet(boxes[0], boxes[1]).is_bottom() || !separated_ends(boxes[0], boxes[1], 1e-3 * hi)) continue;
            batch.push_back(TrainExample::pair(0, 1, 0.0, 1.0, true));
            break;
          case regularizer:
            c.max_reg_weight = 0.005;
            batch.push_back(TrainExample::pair(0, 1, 0.0, 0.0));
            break;
        }
        worst = std::max(worst, gradient_error(params_of(boxes), m, batch, c, term != negative_pair));
        ++done;
      }
      pass = pass && worst < 1e-4;
      detail += fmt("%s/%s %.1e ", std::string(to_token(kind)).c_str(), names[term], worst);
    }
  }
  return {pass, "worst relative error: " + detail};
}

Model model_of(const std::vector<Box>& boxes) {
  std::vector<std::string> ids;
  for (std::size_t i = 0; i < boxes.size(); ++i) ids.push_back("c" + std::to_string(i));
  return Model(Vocabulary(ids), boxes, ProductMeasure::uniform(boxes.front().dim()));
}

Outcome inclusion_exclusion() {
  Rng rng(1005);
  const std::size_t grid = 2000, samples = 1000000;
  std::size_t grid_fail = 0, mc_fail = 0;
  double worst_grid = 0.0, worst_sigma = 0.0;
  for (int k = 0; k < 100; ++k) {
    const std::size_t positives = 1 + rng.index(2), negatives = rng.index(6);
    std::vector<Box> boxes;
    for (std::size_t i = 0; i < positives + negatives; ++i) boxes.push_back(random_box(rng, 2, 0.0, 1.0, 0.05));
    const Model m = model_of(boxes);
    Query q;
    for (std::size_t i = 0; i < positives; ++i) q.positives.push_back(i);
    for (std::size_t i = 0; i < negatives; ++i) q.negatives.push_back(positives + i);
    const std::span<const Box> all(boxes);
    const auto pos = all.first(positives), neg = all.subspan(positives);
    const double exact = query_prob(m, q);
    const double union_exact = union_volume(all, m.measure());

    // Cell-center rasterization misclassifies at most half a cell along each
    // box edge: 2 / n of area per box.
    const double tol = 2.0 * static_cast<double>(boxes.size()) / static_cast<double>(grid);
    const double g = boxlat::testing::grid_fraction(pos, neg, grid);
    const double u = 1.0 - boxlat::testing::grid_fraction({}, all, grid);
    const double err = std::max(std::abs(exact - g), std::abs(union_exact - u));
    worst_grid = std::max(worst_grid, err / tol);
    grid_fail += err > tol;

    const auto mc = boxlat::testing::monte_carlo(pos, neg, 2, samples, rng);
    const double se = std::sqrt(exact * (1.0 - exact) / static_cast<double>(samples));
    const double diff = std::abs(mc.mean - exact);
    if (se > 0) worst_sigma = std::max(worst_sigma, diff / se);
    mc_fail += diff > 4.0 * se + 1e-12;
  }
  return {grid_fail == 0 && mc_fail == 0,
          fmt("100 queries: grid failures %zu (worst %.2f of tolerance), Monte Carlo failures %zu (worst %.2f SE)",
              grid_fail, worst_grid, mc_fail, worst_sigma)};
}

TrainConfig toy_config() {
  TrainConfig cfg;
  cfg.dimension = 2;
  cfg.epochs = 2000;
  cfg.batch_size = 64;
  cfg.learning_rate = 0.01;
  cfg.max_reg_weight = 0.0;
  cfg.seed = 0;
  return cfg;
}

double ask(const Model& m, const char* given, const char* target) {
  return answer(m, parse_query(m.vocabulary(), given, std::string_view(target)));
}

Outcome toy_reproduction() {
  const Stopwatch clock;
  const CpdTable toy = toy_dataset(default_toy_spec());
  const auto data = cpd_examples(toy, 9.0, 1.0);
  TrainConfig cfg = toy_config();
  const Model box = fit(toy.vocabulary(), data, cfg).model;
  cfg.poe_mode = true;
  const Model poe = fit(toy.vocabulary(), data, cfg).model;

  const double g = ask(box, "", "grizzly_bear"), g_o = ask(box, "omnivore", "grizzly_bear");
  const double g_ow = ask(box, "omnivore,white", "grizzly_bear"), g_ob = ask(box, "omnivore,brown", "grizzly_bear");
  const bool table1 = g_ow < 0.02 && g_ob > g_o && g_o > g;
  const double d = ask(box, "", "deer"), d_a = ask(box, "animal", "deer");
  const double d_h = ask(box, "!white,animal,herbivore,!rabbit", "deer");
  const double d_nh = ask(box, "!white,animal,!herbivore,!rabbit", "deer");
  const bool table5 = d_h > d_a && d_a > d && d_nh < 0.02;

  // Conditioning on any one or two concepts never lowers a POE probability.
  const std::size_t n = toy.size();
  double poe_worst = 0.0, box_worst = 0.0;
  for (std::size_t a = 0; a < n; ++a) {
    const std::size_t only_a[] = {a};
    const double pa_poe = joint(poe, only_a), pa_box = joint(box, only_a);
    for (std::size_t b = 0; b < n; ++b) {
      for (std::size_t c = b; c < n; ++c) {
        const std::size_t evidence[] = {b, c};
        const std::span<const std::size_t> e(evidence, b == c ? 1 : 2);
        try {
          poe_worst = std::min(poe_worst, conditional(poe, a, e) - pa_poe);
        } catch (const NullEventError&) {
        }
        try {
          box_worst = std::min(box_worst, conditional(box, a, e) - pa_box);
        } catch (const NullEventError&) {
        }
      }
    }
  }
  const bool monotone = poe_worst >= -1e-12 && box_worst < -1e-3;
  const double t = clock.seconds();
  return {table1 && table5 && monotone && t < 120.0,
          fmt("grizzly %.3f | omnivore %.3f | omnivore,brown %.3f | omnivore,white %.3f; deer %.3f | animal %.3f | "
              "herbivore pattern %.3f | non-herbivore pattern %.3f; POE min P(a|e)-P(a) %.2g, box %.2g; %.1f s",
              g, g_o, g_ob, g_ow, d, d_a, d_h, d_nh, poe_worst, box_worst, t)};
}

Vocabulary numbered(std::size_t n) {
  std::vector<std::string> ids;
  for (std::size_t i = 0; i < n; ++i) ids.push_back(std::to_string(i + 1));
  return Vocabulary(ids);
}

CpdTable random_jpd_cpd(std::size_t n, Rng& rng) {
  std::vector<double> states(std::size_t{1} << n);
  double total = 0.0;
  for (auto& p : states) total += p = rng.uniform(0.01, 1.0);
  std::vector<double> marginals(n, 0.0);
  std::vector<CpdTable::JointEntry> joints;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) joints.push_back({i, j, 0.0});
  }
  for (std::size_t s = 0; s < states.size(); ++s) {
    const double p = states[s] / total;
    for (std::size_t i = 0; i < n; ++i) {
      if (s >> i & 1) marginals[i] += p;
    }
    for (auto& e : joints) {
      if ((s >> e.i & 1) && (s >> e.j & 1)) e.joint += p;
    }
  }
  return CpdTable(numbered(n), marginals, joints);
}

Outcome jpd_acyclic() {
  const Stopwatch clock;
  Rng rng(1007);
  std::size_t failures = 0, edges = 0;
  for (int k = 0; k < 10000; ++k) {
    const std::size_t n = 3 + rng.index(5);
    const CpdTable t = perturb_ties(random_jpd_cpd(n, rng), 1e-6, rng.next());
    const Digraph g = asymmetrize(t.conditional_matrix());
    edges += g.edges.size();
    failures += !is_acyclic(g).acyclic;
  }
  const double t = clock.seconds();
  return {failures == 0 && t < 30.0, fmt("10000 JPDs, %zu edges, %zu cyclic, %.2f s", edges, failures, t)};
}

// Every simple directed cycle, each listed once starting from its smallest vertex.
std::vector<std::vector<std::size_t>> simple_cycles(const Digraph& g) {
  std::vector<std::vector<std::size_t>> out;
  std::vector<std::size_t> path;
  std::vector<char> on_path(g.vertices, 0);
  std::function<void(std::size_t, std::size_t)> walk = [&](std::size_t start, std::size_t v) {
    for (const auto& e : g.edges) {
      if (e.src != v || e.dst < start) continue;
      if (e.dst == start) {
        out.push_back(path);
      } else if (!on_path[e.dst]) {
        on_path[e.dst] = 1;
        path.push_back(e.dst);
        walk(start, e.dst);
        path.pop_back();
        on_path[e.dst] = 0;
      }
    }
  };
  for (std::size_t s = 0; s < g.vertices; ++s) {
    path = {s};
    on_path[s] = 1;
    walk(s, s);
    on_path[s] = 0;
  }
  return out;
}

Outcome gaussian_cycle() {
  const std::vector<DiagGaussian> gaussians = {
      {{-5, -3}, {3, 7}}, {{-3, 5}, {7, 4}}, {{-5, -6}, {8, 1}}, {{-7, 6}, {5, 5}}, {{9, 3}, {5, 9}}};
  const std::set<std::size_t> wanted{4, 0, 2};
  bool found = false;
  std::string detail;
  for (KlDirection dir : {KlDirection::forward, KlDirection::reverse}) {
    const Digraph g = kl_graph(gaussians, 1.0, dir);
    detail += dir == KlDirection::forward ? "KL(i||j):" : " KL(j||i):";
    const auto cycles = simple_cycles(g);
    if (cycles.empty()) detail += " none";
    for (const auto& c : cycles) {
      detail += " ";
      for (std::size_t v : c) detail += std::to_string(v + 1) + "->";
      detail += std::to_string(c.front() + 1);
      found = found || std::set<std::size_t>(c.begin(), c.end()) == wanted;
    }
  }
  return {found, "cycle through {5,1,3} " + std::string(found ? "found" : "not found") + "; cycles " + detail};
}

Outcome non_distributive() {
  const LatticeElement x(interval(0.25, 0.35)), y(interval(0.0, 0.2)), z(interval(0.4, 0.6));
  const auto lhs = meet(x, join(y, z));
  const auto rhs = join(meet(x, y), meet(x, z));
  const auto m = ProductMeasure::uniform(1);
  return {!(lhs == rhs), fmt("x meet (y join z) has measure %.2f, (x meet y) join (x meet z) has measure %.2f",
                             volume(lhs, m), volume(rhs, m))};
}

struct WordnetRun {
  double dev_accuracy = 0.0;
  double test_accuracy = 0.0;
  double threshold = 0.0;
  double seconds = 0.0;
};

WordnetRun wordnet_run(const Hierarchy& train, std::span<const TrainExample> data, std::span<const LabeledPair> dev,
                       std::span<const LabeledPair> test, bool poe) {
  const Stopwatch clock;
  TrainConfig cfg;
  cfg.poe_mode = poe;
  cfg.poe_double_dimension = poe;
  const Model model = fit(train.nodes, data, cfg).model;
  WordnetRun r;
  r.seconds = clock.seconds();
  const auto dev_scores = pair_scores(model, dev);
  const ThresholdChoice choice = best_threshold(dev_scores, dev);
  r.dev_accuracy = choice.accuracy;
  r.threshold = choice.threshold;
  r.test_accuracy = classify_accuracy(model, test, choice.threshold);
  return r;
}

Outcome wordnet_subsample() {
  const Hierarchy base = read_hierarchy(std::string(BOXLAT_DATA_DIR) + "/wordnet_artifact_edges.tsv");
  const Hierarchy closure = transitive_closure(base);
  const EdgeSplit split = split_edges(closure.edges, 1000, 1000, 2018);
  const EdgeSet known(closure.edges);
  const Hierarchy train{closure.nodes, split.train};

  std::vector<TrainExample> data;
  const auto marginals = node_marginals(train);
  const TrainConfig defaults;
  for (std::size_t i = 0; i < marginals.size(); ++i) {
    data.push_back(TrainExample::unary(i, marginals[i], defaults.unary_weight));
  }
  for (const auto& p : corrupt_negatives(split.train, known, closure.nodes.size(), 1, 11)) {
    data.push_back(TrainExample::pair(p.ancestor, p.descendant, p.label, defaults.edge_weight, p.label < 0.5));
  }
  const auto dev = corrupt_negatives(split.dev, known, closure.nodes.size(), 1, 12);
  const auto test = corrupt_negatives(split.test, known, closure.nodes.size(), 1, 13);

  const WordnetRun box = wordnet_run(train, data, dev, test, false);
  const WordnetRun poe = wordnet_run(train, data, dev, test, true);
  const bool pass = box.test_accuracy > poe.test_accuracy && box.seconds < 1800.0;
  return {pass, fmt("%zu nodes, %zu closure edges, %zu train / %zu dev / %zu test positives; box 50-D test %.4f "
                    "(dev %.4f, %.0f s), POE 100-D test %.4f (dev %.4f, %.0f s)",
                    closure.nodes.size(), closure.edges.size(), split.train.size(), split.dev.size(),
                    split.test.size(), box.test_accuracy, box.dev_accuracy, box.seconds, poe.test_accuracy,
                    poe.dev_accuracy, poe.seconds)};
}

Outcome reproducibility() {
  const CpdTable toy = toy_dataset(default_toy_spec());
  const auto data = cpd_examples(toy, 9.0, 1.0);
  TrainConfig cfg = toy_config();
  cfg.epochs = 300;
  const std::string first = serialize_model(fit(toy.vocabulary(), data, cfg).model);
  const std::string again = serialize_model(fit(toy.vocabulary(), data, cfg).model);
  cfg.threads = 4;
  const std::string threaded = serialize_model(fit(toy.vocabulary(), data, cfg).model);
  cfg.threads = 1;
  cfg.poe_mode = true;
  const bool poe_same =
      serialize_model(fit(toy.vocabulary(), data, cfg).model) == serialize_model(fit(toy.vocabulary(), data, cfg).model);

  const Hierarchy closure =
      transitive_closure(read_hierarchy(std::string(BOXLAT_DATA_DIR) + "/wordnet_artifact_edges.tsv"));
  const EdgeSet known(closure.edges);
  const bool split_same = split_edges(closure.edges, 1000, 1000, 2018).test ==
                          split_edges(closure.edges, 1000, 1000, 2018).test;
  const bool negatives_same = corrupt_negatives(closure.edges, known, closure.nodes.size(), 1, 11) ==
                              corrupt_negatives(closure.edges, known, closure.nodes.size(), 1, 11);

  Rng a(7), b(7);
  const bool ties_same = format_cpd(perturb_ties(random_jpd_cpd(6, a), 1e-6, 3)) ==
                         format_cpd(perturb_ties(random_jpd_cpd(6, b), 1e-6, 3));

  const bool pass = first == again && first == threaded && poe_same && split_same && negatives_same && ties_same;
  return {pass, fmt("toy model repeat %s, 1 vs 4 threads %s, POE repeat %s, split %s, negatives %s, tie perturbation %s",
                    first == again ? "identical" : "DIFFERS", first == threaded ? "identical" : "DIFFERS",
                    poe_same ? "identical" : "DIFFERS", split_same ? "identical" : "DIFFERS",
                    negatives_same ? "identical" : "DIFFERS", ties_same ? "identical" : "DIFFERS")};
}

struct Criterion {
  int number;
  const char* name;
  Outcome (*run)();
};

const Criterion kCriteria[] = {
    {1, "cone covariance is never negative", cone_covariance},
    {2, "boxes reach correlation -1 and +1", correlation_extremes},
    {3, "surrogate lower bound", surrogate_bound},
    {4, "analytic gradients", gradients},
    {5, "inclusion-exclusion queries", inclusion_exclusion},
    {6, "toy lattice queries", toy_reproduction},
    {7, "asymmetrized JPD conditionals are acyclic", jpd_acyclic},
    {8, "Gaussian KL cycle through 5, 1, 3", gaussian_cycle},
    {9, "box lattice is not distributive", non_distributive},
    {10, "WordNet subsample: box beats POE", wordnet_subsample},
    {11, "bit-reproducible runs", reproducibility},
};

}  // namespace

int main(int argc, char** argv) {
  int only = 0;
  for (int i = 1; i < argc; ++i) {
    const std::string arg = argv[i];
    if (arg == "--criterion" && i + 1 < argc) {
      only = std::atoi(argv[++i]);
    } else {
      std::fprintf(stderr, "usage: %s [--criterion N]\n", argv[0]);
      return 2;
    }
  }
  int failed = 0, ran = 0;
  for (const auto& c : kCriteria) {
    if (only != 0 && c.number != only) continue;
    ++ran;
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("error: ") + e.what()};
    }
    std::printf("criterion %d %s: %s (%s)\n", c.number, o.pass ? "PASS" : "FAIL", c.name, o.detail.c_str());
    std::fflush(stdout);
    failed += !o.pass;
  }
  if (ran == 0) {
    std::fprintf(stderr, "no criterion %d\n", only);
    return 2;
  }
  return failed == 0 ? 0 : 1;
}
