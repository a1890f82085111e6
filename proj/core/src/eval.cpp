#include "boxlat/eval.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <thread>

#include "boxlat/error.hpp"
#include "boxlat/query.hpp"
#include "boxlat/tsv.hpp"

namespace boxlat {

double pair_score(const Model& model, const LabeledPair& pair) {
  const std::size_t both[] = {pair.descendant, pair.ancestor};
  const std::size_t given[] = {pair.descendant};
  const double log_given = log_joint(model, given);
  if (log_given == -std::numeric_limits<double>::infinity()) return 0.0;
  return std::min(1.0, std::exp(log_joint(model, both) - log_given));
}

std::vector<double> pair_scores(const Model& model, std::span<const LabeledPair> pairs, std::size_t threads) {
  std::vector<double> out(pairs.size());
  threads = std::max<std::size_t>(1, std::min(threads, pairs.size() / 1024 + 1));
  auto work = [&](std::size_t t) {
    for (std::size_t i = t; i < pairs.size(); i += threads) out[i] = pair_score(model, pairs[i]);
  };
  if (threads == 1) {
    work(0);
    return out;
  }
  std::vector<std::thread> pool;
  for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(work, t);
  for (auto& th : pool) th.join();
  return out;
}

double accuracy_at(std::span<const double> scores, std::span<const LabeledPair> pairs, double threshold) {
  if (pairs.empty()) throw InvalidArgument("accuracy of an empty pair set");
  if (scores.size() != pairs.size()) throw InvalidArgument("score and pair counts differ");
  std::size_t correct = 0;
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    correct += (scores[i] >= threshold) == (pairs[i].label >= 0.5);
  }
  return static_cast<double>(correct) / static_cast<double>(pairs.size());
}

double classify_accuracy(const Model& model, std::span<const LabeledPair> pairs, double threshold) {
  const auto scores = pair_scores(model, pairs);
  return accuracy_at(scores, pairs, threshold);
}

ThresholdChoice best_threshold(std::span<const double> scores, std::span<const LabeledPair> pairs) {
  if (pairs.empty()) throw InvalidArgument("threshold sweep over an empty pair set");
  if (scores.size() != pairs.size()) throw InvalidArgument("score and pair counts differ");
  std::vector<std::size_t> order(scores.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return scores[a] < scores[b]; });
  // At threshold scores[order[k]] everything from k on is predicted positive.
  std::size_t positives = 0;
  for (const auto& p : pairs) positives += p.label >= 0.5;
  std::size_t correct = positives;  // threshold at the minimum: all positive
  std::size_t best_correct = 0;
  double best_t = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < order.size();) {
    const double t = scores[order[k]];
    if (correct > best_correct) {
      best_correct = correct;
      best_t = t;
    }
    for (; k < order.size() && scores[order[k]] == t; ++k) {
      if (pairs[order[k]].label >= 0.5) {
        --correct;
      } else {
        ++correct;
      }
    }
  }
  if (correct > best_correct) {
    best_correct = correct;
    best_t = std::numeric_limits<double>::infinity();
  }
  return {best_t, static_cast<double>(best_correct) / static_cast<double>(pairs.size())};
}

double bernoulli_kl(double gold, double predicted) {
  const double g = std::clamp(gold, kProbClamp, 1.0 - kProbClamp);
  const double p = std::clamp(predicted, kProbClamp, 1.0 - kProbClamp);
  return g * std::log(g / p) + (1.0 - g) * std::log((1.0 - g) / (1.0 - p));
}

double pearson(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw InvalidArgument("Pearson inputs differ in length");
  if (x.size() < 2) throw InvalidArgument("Pearson needs at least two values");
  const double n = static_cast<double>(x.size());
  const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
  const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (sxx == 0.0 || syy == 0.0) throw InvalidArgument("Pearson correlation of a constant vector is undefined");
  return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

ProbMetrics prob_metrics(std::span<const double> predicted, std::span<const double> gold) {
  if (predicted.size() != gold.size()) throw InvalidArgument("predicted and gold differ in length");
  if (predicted.size() < 2) throw InvalidArgument("probability metrics need at least two pairs");
  double kl = 0.0;
  for (std::size_t i = 0; i < gold.size(); ++i) kl += bernoulli_kl(gold[i], predicted[i]);
  return {kl / static_cast<double>(gold.size()), pearson(predicted, gold)};
}

std::vector<CalibrationBin> calibration_bins(std::span<const double> predicted, std::span<const double> gold,
                                             std::size_t bins) {
  if (predicted.size() != gold.size()) throw InvalidArgument("predicted and gold differ in length");
  if (bins == 0) throw InvalidArgument("need at least one bin");
  std::vector<std::vector<std::size_t>> members(bins);
  for (std::size_t i = 0; i < gold.size(); ++i) {
    const double g = std::clamp(gold[i], 0.0, 1.0);
    members[std::min(bins - 1, static_cast<std::size_t>(g * static_cast<double>(bins)))].push_back(i);
  }
  std::vector<CalibrationBin> out;
  for (std::size_t b = 0; b < bins; ++b) {
    CalibrationBin bin;
    bin.lo = static_cast<double>(b) / static_cast<double>(bins);
    bin.hi = static_cast<double>(b + 1) / static_cast<double>(bins);
    bin.count = members[b].size();
    std::vector<double> p, g;
    for (auto i : members[b]) {
      p.push_back(predicted[i]);
      g.push_back(gold[i]);
    }
    if (bin.count > 0) {
      bin.mean_predicted = std::accumulate(p.begin(), p.end(), 0.0) / static_cast<double>(bin.count);
      bin.mean_gold = std::accumulate(g.begin(), g.end(), 0.0) / static_cast<double>(bin.count);
    }
    try {
      bin.pearson = pearson(p, g);
    } catch (const InvalidArgument&) {
      bin.pearson = std::numeric_limits<double>::quiet_NaN();
    }
    out.push_back(bin);
  }
  return out;
}

std::string format_metrics(std::span<const std::pair<std::string, double>> metrics) {
  std::string out;
  for (const auto& [name, value] : metrics) out += name + "\t" + tsv::format(value, 12) + "\n";
  return out;
}

std::string format_calibration(std::span<const CalibrationBin> bins) {
  std::string out = "lo\thi\tcount\tmean_predicted\tmean_gold\tpearson\n";
  for (const auto& b : bins) {
    out += tsv::format(b.lo, 12) + "\t" + tsv::format(b.hi, 12) + "\t" + std::to_string(b.count) + "\t" +
           tsv::format(b.mean_predicted, 12) + "\t" + tsv::format(b.mean_gold, 12) + "\t" + tsv::format(b.pearson, 12) +
           "\n";
  }
  return out;
}

}  // namespace boxlat
