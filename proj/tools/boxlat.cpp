#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "boxlat/dag.hpp"
#include "boxlat/data.hpp"
#include "boxlat/error.hpp"
#include "boxlat/eval.hpp"
#include "boxlat/model_io.hpp"
#include "boxlat/query.hpp"
#include "boxlat/svg.hpp"
#include "boxlat/train.hpp"
#include "boxlat/tsv.hpp"

namespace {

using namespace boxlat;

enum ExitCode { kOk = 0, kUsage = 1, kData = 2, kDivergence = 3 };

// Writes to `path`, or stdout when the path is empty or "-".
void emit(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::fwrite(text.data(), 1, text.size(), stdout);
    std::fflush(stdout);
  } else {
    tsv::write_file(path, text);
  }
}

struct TrainOptions {
  TrainConfig cfg;
  std::string measure = "uniform";
  std::string cpd;
  bool toy = false;
  std::string toy_spec;
  std::string edges;
  std::size_t negatives = 1;
  std::string known;
  std::string soft_edges;
  std::string dev;
  std::string out;
};

void add_train(CLI::App& app, TrainOptions& o, int& status) {
  auto* cmd = app.add_subcommand("train", "Fit a box model and write a model file");
  auto& c = o.cfg;
  cmd->add_option("--cpd", o.cpd, "CPD TSV: train on every marginal and pairwise conditional");
  cmd->add_flag("--toy", o.toy, "Train on the built-in toy lattice");
  cmd->add_option("--toy-spec", o.toy_spec, "Train on a toy leaf table");
  cmd->add_option("--edges", o.edges, "Positive child<TAB>parent pairs (usually a training closure)");
  cmd->add_option("--negatives", o.negatives, "Corrupted pairs per positive edge")->capture_default_str();
  cmd->add_option("--known", o.known, "Full closure: its nodes join the vocabulary and its edges are never negatives");
  cmd->add_option("--soft-edges", o.soft_edges, "Extra t1<TAB>t2<TAB>P(t1|t2) targets");
  cmd->add_option("--dev", o.dev, "Labeled pairs scored each epoch (dev accuracy at the best threshold)");
  cmd->add_option("-o,--out", o.out, "Model file to write")->required();
  cmd->add_option("--dim", c.dimension, "Box dimension")->capture_default_str();
  cmd->add_option("--measure", o.measure, "uniform or exponential")
      ->check(CLI::IsMember({"uniform", "exponential"}))
      ->capture_default_str();
  cmd->add_option("--max-coordinate", c.max_coordinate, "Support bound of the exponential measure")
      ->capture_default_str();
  cmd->add_option("--lr", c.learning_rate, "Adam learning rate")->capture_default_str();
  cmd->add_option("--batch", c.batch_size, "Batch size")->capture_default_str();
  cmd->add_option("--epochs", c.epochs, "Passes over the data")->capture_default_str();
  cmd->add_option("--unary-weight", c.unary_weight, "Weight of unary terms")->capture_default_str();
  cmd->add_option("--edge-weight", c.edge_weight, "Weight of pair terms")->capture_default_str();
  cmd->add_option("--min-delta", c.min_delta, "Smallest box side")->capture_default_str();
  cmd->add_option("--surrogate-eps", c.surrogate_eps, "Constant inside the surrogate log")->capture_default_str();
  cmd->add_option("--reg", c.max_reg_weight, "L1 pull of box maxima to the upper bound")->capture_default_str();
  cmd->add_option("--seed", c.seed, "Random seed")->capture_default_str();
  cmd->add_option("--threads", c.threads, "Worker threads for gradients")->capture_default_str();
  cmd->add_flag("--poe", c.poe_mode, "Pin every box to the upper corner (order-embedding cones)");
  cmd->add_flag("--poe-double-dim", c.poe_double_dimension, "Give POE models twice the dimension");
  cmd->callback([&] {
    c.measure = parse_measure_token(o.measure);
    const int sources = !o.cpd.empty() + o.toy + !o.toy_spec.empty() + !o.edges.empty();
    if (sources != 1) throw InvalidArgument("train needs exactly one of --cpd, --toy, --toy-spec, --edges");

    Vocabulary vocab;
    std::vector<TrainExample> data;
    if (!o.edges.empty()) {
      Hierarchy h = read_hierarchy(o.edges);
      if (!o.dev.empty()) {
        for (const auto& row : tsv::read_file(o.dev)) {
          for (std::size_t k = 0; k < std::min<std::size_t>(2, row.fields.size()); ++k) h.nodes.add(row.fields[k]);
        }
      }
      EdgeSet known(h.edges);
      if (!o.known.empty()) {
        for (const auto& row : tsv::read_file(o.known)) {
          if (row.fields.size() != 2) throw DataError(o.known + ":" + std::to_string(row.line) + ": expected child<TAB>parent");
          known.insert({h.nodes.add(row.fields[0]), h.nodes.add(row.fields[1])});
        }
      }
      data = hierarchy_examples(h, o.negatives, c.seed, c.unary_weight, c.edge_weight, &known);
      vocab = h.nodes;
    } else {
      CpdTable table;
      if (!o.cpd.empty()) {
        table = parse_cpd(read_text_file(o.cpd), o.cpd);
      } else {
        table = toy_dataset(o.toy ? default_toy_spec() : read_toy_spec(o.toy_spec));
      }
      vocab = table.vocabulary();
      data = cpd_examples(table, c.unary_weight, c.edge_weight);
    }
    if (!o.soft_edges.empty()) {
      for (const auto& row : tsv::read_file(o.soft_edges)) {
        if (row.fields.size() != 3) {
          throw DataError(o.soft_edges + ":" + std::to_string(row.line) + ": expected t1<TAB>t2<TAB>p");
        }
        const double p = tsv::parse_double(row.fields[2], o.soft_edges, row.line);
        data.push_back(TrainExample::pair(vocab.index_of(row.fields[0]), vocab.index_of(row.fields[1]), p,
                                          c.edge_weight));
      }
    }

    FitHooks hooks;
    std::vector<LabeledPair> dev;
    if (!o.dev.empty()) {
      dev = parse_labeled_pairs(vocab, read_text_file(o.dev), o.dev);
      hooks.dev_metric = [&](const Model& m) {
        const auto scores = pair_scores(m, dev, c.threads);
        return best_threshold(scores, dev).accuracy;
      };
    }
    hooks.on_epoch = [](const EpochLog& e) {
      std::printf("%zu\t%s\t%s\n", e.epoch, tsv::format(e.loss, 9).c_str(),
                  e.dev_metric ? tsv::format(*e.dev_metric, 9).c_str() : "-");
      std::fflush(stdout);
    };
    const FitResult result = fit(vocab, data, c, InitSpec{}, hooks);
    if (result.skipped_null_conditionals > 0) {
      std::fprintf(stderr, "warning: skipped %zu pair terms conditioned on null events\n",
                   result.skipped_null_conditionals);
    }
    save_model(result.model, o.out);
    status = kOk;
  });
}

void add_query(CLI::App& app, int& status) {
  auto* cmd = app.add_subcommand("query", "Print P(target | given) or P(given) from a model");
  static std::string model_path, given, target;
  cmd->add_option("-m,--model", model_path, "Model file")->required();
  cmd->add_option("--given", given, "Comma-separated evidence; prefix ! to negate");
  cmd->add_option("--target", target, "Target concept (! to negate); omit for the joint of --given");
  cmd->callback([&] {
    const Model model = load_model(model_path);
    std::optional<std::string_view> t;
    if (!target.empty()) t = target;
    const Query q = parse_query(model.vocabulary(), given, t);
    if (!q.target && q.positives.empty() && q.negatives.empty()) {
      throw InvalidArgument("query needs --target or --given");
    }
    std::printf("%.6g\n", answer(model, q));
    status = kOk;
  });
}

void add_eval(CLI::App& app, int& status) {
  auto* cmd = app.add_subcommand("eval", "Score labeled pairs: accuracy, or KL and Pearson against gold probabilities");
  static std::string model_path, pairs_path, dev_path, calibration_path, out, mode = "classify";
  static std::optional<double> threshold;
  static std::size_t bins = 10, threads = 1;
  cmd->add_option("-m,--model", model_path, "Model file")->required();
  cmd->add_option("--pairs", pairs_path, "descendant<TAB>ancestor<TAB>label pairs")->required();
  cmd->add_option("--mode", mode, "classify or prob")->check(CLI::IsMember({"classify", "prob"}))->capture_default_str();
  cmd->add_option("--threshold", threshold, "Fixed decision threshold on P(ancestor | descendant)");
  cmd->add_option("--dev", dev_path, "Labeled pairs used to tune the threshold");
  cmd->add_option("--calibration", calibration_path, "Write per-bin calibration TSV (prob mode)");
  cmd->add_option("--bins", bins, "Calibration bins")->capture_default_str();
  cmd->add_option("--threads", threads, "Worker threads")->capture_default_str();
  cmd->add_option("-o,--out", out, "Metrics TSV (default stdout)");
  cmd->callback([&] {
    const Model model = load_model(model_path);
    const auto pairs = parse_labeled_pairs(model.vocabulary(), read_text_file(pairs_path), pairs_path);
    if (pairs.empty()) throw DataError(pairs_path + ": no pairs");
    const auto scores = pair_scores(model, pairs, threads);
    std::vector<std::pair<std::string, double>> metrics;
    if (mode == "classify") {
      double t = 0.5;
      if (threshold) {
        t = *threshold;
      } else if (!dev_path.empty()) {
        const auto dev = parse_labeled_pairs(model.vocabulary(), read_text_file(dev_path), dev_path);
        if (dev.empty()) throw DataError(dev_path + ": no pairs");
        const auto choice = best_threshold(pair_scores(model, dev, threads), dev);
        t = choice.threshold;
        metrics.emplace_back("dev_accuracy", choice.accuracy);
      } else {
        t = best_threshold(scores, pairs).threshold;
      }
      metrics.emplace_back("threshold", t);
      metrics.emplace_back("accuracy", accuracy_at(scores, pairs, t));
    } else {
      std::vector<double> gold;
      for (const auto& p : pairs) gold.push_back(p.label);
      const auto pm = prob_metrics(scores, gold);
      metrics.emplace_back("kl", pm.kl);
      metrics.emplace_back("pearson", pm.pearson);
      if (!calibration_path.empty()) {
        emit(calibration_path, format_calibration(calibration_bins(scores, gold, bins)));
      }
    }
    metrics.emplace_back("pairs", static_cast<double>(pairs.size()));
    emit(out, format_metrics(metrics));
    status = kOk;
  });
}

void add_asymmetrize(CLI::App& app, int& status) {
  auto* cmd = app.add_subcommand("asymmetrize", "Keep the larger direction of every pair of a score matrix");
  static std::string matrix_path, cpd_path, out;
  static double threshold = 0.0;
  static bool check = false;
  cmd->add_option("--matrix", matrix_path, "Square score matrix TSV");
  cmd->add_option("--cpd", cpd_path, "CPD TSV; its conditional matrix is used");
  cmd->add_option("--threshold", threshold, "Drop pairs whose scores differ by less than this")->capture_default_str();
  cmd->add_flag("--check-acyclic", check, "Fail with a witness cycle when the result is cyclic");
  cmd->add_option("-o,--out", out, "Edge list TSV (default stdout)");
  cmd->callback([&] {
    if (matrix_path.empty() == cpd_path.empty()) throw InvalidArgument("asymmetrize needs one of --matrix, --cpd");
    const ScoreMatrix scores = !matrix_path.empty()
                                   ? read_score_matrix(matrix_path)
                                   : parse_cpd(read_text_file(cpd_path), cpd_path).conditional_matrix();
    const Digraph g = asymmetrize(scores, threshold);
    emit(out, format_edge_list(g, scores.ids()));
    status = kOk;
    if (check) {
      const auto r = is_acyclic(g);
      if (!r.acyclic) {
        std::string text = "cycle:";
        for (auto v : r.cycle) text += " " + scores.ids().id(v) + " ->";
        text += " " + scores.ids().id(r.cycle.front());
        std::fprintf(stderr, "%s\n", text.c_str());
        status = kData;
      }
    }
  });
}

void add_closure(CLI::App& app, int& status) {
  auto* cmd = app.add_subcommand("closure", "Transitive closure of a child<TAB>parent edge list");
  static std::string edges_path, out, split_dir;
  static std::size_t dev_count = 4000, test_count = 4000;
  static std::uint64_t seed = 0;
  cmd->add_option("--edges", edges_path, "Edges TSV")->required();
  cmd->add_option("-o,--out", out, "Closure TSV (default stdout)");
  cmd->add_option("--split-dir", split_dir, "Also write train/dev/test closure splits here");
  cmd->add_option("--dev-count", dev_count, "Dev positives")->capture_default_str();
  cmd->add_option("--test-count", test_count, "Test positives")->capture_default_str();
  cmd->add_option("--seed", seed, "Split seed")->capture_default_str();
  cmd->callback([&] {
    const Hierarchy closure = transitive_closure(read_hierarchy(edges_path));
    emit(out, format_edges(closure));
    if (!split_dir.empty()) {
      std::filesystem::create_directories(split_dir);
      const auto split = split_edges(closure.edges, dev_count, test_count, seed);
      const std::filesystem::path dir(split_dir);
      for (const auto& [name, part] : {std::pair{"train.tsv", &split.train}, std::pair{"dev.tsv", &split.dev},
                                       std::pair{"test.tsv", &split.test}}) {
        emit((dir / name).string(), format_edges(Hierarchy{closure.nodes, *part}));
      }
    }
    status = kOk;
  });
}

void add_marginals(CLI::App& app, int& status) {
  auto* cmd = app.add_subcommand("marginals", "Per-node descendant fractions of a hierarchy");
  static std::string edges_path, out;
  static bool no_self = false;
  cmd->add_option("--edges", edges_path, "Edges TSV")->required();
  cmd->add_flag("--no-self", no_self, "Do not count a node among its own descendants");
  cmd->add_option("-o,--out", out, "Marginals TSV (default stdout)");
  cmd->callback([&] {
    const Hierarchy h = read_hierarchy(edges_path);
    emit(out, format_marginals(h.nodes, node_marginals(h, !no_self)));
    status = kOk;
  });
}

void add_cpd(CLI::App& app, int& status) {
  auto* cmd = app.add_subcommand("cpd", "Leaf co-occurrence CPD of a hierarchy");
  static std::string edges_path, out;
  cmd->add_option("--edges", edges_path, "Edges TSV (training edges only)")->required();
  cmd->add_option("-o,--out", out, "CPD TSV (default stdout)");
  cmd->callback([&] {
    emit(out, format_cpd(leaf_cooccurrence_cpd(read_hierarchy(edges_path))));
    status = kOk;
  });
}

void add_prune(CLI::App& app, int& status) {
  auto* cmd = app.add_subcommand("prune-cpd", "Soft edges with a large forward and small reverse conditional");
  static std::string cpd_path, out;
  static double hi = 0.6, lo = 0.4;
  cmd->add_option("--cpd", cpd_path, "CPD TSV")->required();
  cmd->add_option("--hi", hi, "Minimum P(t1 | t2)")->capture_default_str();
  cmd->add_option("--lo", lo, "Maximum P(t2 | t1)")->capture_default_str();
  cmd->add_option("-o,--out", out, "Soft-edge TSV (default stdout)");
  cmd->callback([&] {
    const CpdTable table = parse_cpd(read_text_file(cpd_path), cpd_path);
    const auto edges = prune_cpd(table, hi, lo);
    emit(out, format_soft_edges(table.vocabulary(), edges));
    status = kOk;
  });
}

void add_negatives(CLI::App& app, int& status) {
  auto* cmd = app.add_subcommand("negatives", "Labeled positives plus corrupted negatives");
  static std::string edges_path, known_path, out;
  static std::size_t k = 1;
  static std::uint64_t seed = 0;
  cmd->add_option("--edges", edges_path, "Positive child<TAB>parent pairs")->required();
  cmd->add_option("--known", known_path, "Known positives to avoid (default: closure of --edges)");
  cmd->add_option("-k,--per-edge", k, "Corruptions per positive")->capture_default_str();
  cmd->add_option("--seed", seed, "Random seed")->capture_default_str();
  cmd->add_option("-o,--out", out, "Labeled pair TSV (default stdout)");
  cmd->callback([&] {
    Hierarchy h = read_hierarchy(edges_path);
    EdgeSet known;
    if (known_path.empty()) {
      known = EdgeSet(transitive_closure(h).edges);
    } else {
      for (const auto& row : tsv::read_file(known_path)) {
        if (row.fields.size() != 2) throw DataError(known_path + ":" + std::to_string(row.line) + ": expected child<TAB>parent");
        known.insert({h.nodes.add(row.fields[0]), h.nodes.add(row.fields[1])});
      }
    }
    const auto pairs = corrupt_negatives(h.edges, known, h.nodes.size(), k, seed);
    emit(out, format_labeled_pairs(h.nodes, pairs));
    status = kOk;
  });
}

void add_toy(CLI::App& app, int& status) {
  auto* cmd = app.add_subcommand("toy", "Ground-truth CPD of the toy lattice");
  static std::string spec_path, out;
  static bool print_spec = false;
  cmd->add_option("--spec", spec_path, "Leaf table TSV (default: built-in fixture)");
  cmd->add_flag("--print-spec", print_spec, "Print the leaf table instead of the CPD");
  cmd->add_option("-o,--out", out, "Output TSV (default stdout)");
  cmd->callback([&] {
    const ToySpec spec = spec_path.empty() ? default_toy_spec() : read_toy_spec(spec_path);
    emit(out, print_spec ? format_toy_spec(spec) : format_cpd(toy_dataset(spec)));
    status = kOk;
  });
}

void add_plot(CLI::App& app, int& status) {
  auto* cmd = app.add_subcommand("plot", "SVG drawing of a 2-D model");
  static std::string model_path, out;
  static int size = 480;
  cmd->add_option("-m,--model", model_path, "Model file")->required();
  cmd->add_option("--size", size, "Frame side in pixels")->capture_default_str();
  cmd->add_option("-o,--out", out, "SVG file (default stdout)");
  cmd->callback([&] {
    emit(out, render_svg(load_model(model_path), size));
    status = kOk;
  });
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Box lattice embeddings: train, query and inspect probabilistic box models"};
  app.require_subcommand(1);
  app.set_config("--config", "", "TOML/INI file of option values; flags override it");
  app.fallthrough();
  int status = kOk;
  TrainOptions train;
  add_train(app, train, status);
  add_query(app, status);
  add_eval(app, status);
  add_asymmetrize(app, status);
  add_closure(app, status);
  add_marginals(app, status);
  add_cpd(app, status);
  add_prune(app, status);
  add_negatives(app, status);
  add_toy(app, status);
  add_plot(app, status);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  } catch (const NumericError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kDivergence;
  } catch (const NullEventError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kData;
  } catch (const InvalidArgument& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kUsage;
  } catch (const DataError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kData;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kData;
  }
  return status;
}
