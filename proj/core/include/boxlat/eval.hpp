#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "boxlat/data.hpp"
#include "boxlat/model.hpp"

namespace boxlat {

// P(ancestor | descendant) under the model; 0 when the boxes are disjoint.
double pair_score(const Model& model, const LabeledPair& pair);
std::vector<double> pair_scores(const Model& model, std::span<const LabeledPair> pairs, std::size_t threads = 1);

// Fraction of pairs whose prediction (score >= t) matches label >= 0.5.
// Throws InvalidArgument on empty input.
double accuracy_at(std::span<const double> scores, std::span<const LabeledPair> pairs, double threshold);
double classify_accuracy(const Model& model, std::span<const LabeledPair> pairs, double threshold);

struct ThresholdChoice {
  double threshold = 0.0;
  double accuracy = 0.0;
};

// Exact sweep over every observed score as threshold, plus +inf (predict all
// negative). Ties in accuracy go to the smaller threshold.
ThresholdChoice best_threshold(std::span<const double> scores, std::span<const LabeledPair> pairs);

struct ProbMetrics {
  double kl = 0.0;       // mean Bernoulli KL(gold || predicted)
  double pearson = 0.0;
};

inline constexpr double kProbClamp = 1e-12;

// Throws InvalidArgument for mismatched lengths, fewer than two values, or a
// constant vector (Pearson undefined).
ProbMetrics prob_metrics(std::span<const double> predicted, std::span<const double> gold);
double bernoulli_kl(double gold, double predicted);
double pearson(std::span<const double> x, std::span<const double> y);

struct CalibrationBin {
  double lo = 0.0;
  double hi = 0.0;
  std::size_t count = 0;
  double mean_predicted = 0.0;
  double mean_gold = 0.0;
  double pearson = 0.0;  // NaN when undefined inside the bin
};

// Equal-width bins over gold probability in [0, 1]; the last bin is closed.
std::vector<CalibrationBin> calibration_bins(std::span<const double> predicted, std::span<const double> gold,
                                             std::size_t bins);

// metric<TAB>value lines.
std::string format_metrics(std::span<const std::pair<std::string, double>> metrics);
// lo<TAB>hi<TAB>count<TAB>mean_predicted<TAB>mean_gold<TAB>pearson with a header.
std::string format_calibration(std::span<const CalibrationBin> bins);

}  // namespace boxlat
