#include <doctest.h>

#include <cmath>
#include <limits>

#include "boxlat/error.hpp"
#include "boxlat/eval.hpp"
#include "boxlat/random.hpp"
#include "support.hpp"

using namespace boxlat;
using boxlat::testing::square;

TEST_SUITE("eval") {
  TEST_CASE("pair scores are conditional probabilities") {
    const Model m(Vocabulary({"a", "b", "c"}), {square(0, 0.5, 0, 0.5), square(0.25, 0.5, 0, 0.5), square(0.6, 1, 0.6, 1)},
                  ProductMeasure::uniform(2));
    CHECK(pair_score(m, {1, 0, 1.0}) == doctest::Approx(1.0));
    CHECK(pair_score(m, {0, 1, 1.0}) == doctest::Approx(0.5));
    CHECK(pair_score(m, {0, 2, 0.0}) == 0.0);
    const LabeledPair pairs[] = {{1, 0, 1.0}, {0, 1, 0.0}, {0, 2, 0.0}};
    CHECK(classify_accuracy(m, pairs, 0.75) == doctest::Approx(1.0));
    CHECK(classify_accuracy(m, pairs, 0.4) == doctest::Approx(2.0 / 3));
    CHECK(pair_scores(m, pairs, 1) == pair_scores(m, pairs, 3));
  }

  TEST_CASE("accuracy examples") {
    const double scores[] = {0.9, 0.2, 0.6, 0.4};
    const LabeledPair pairs[] = {{0, 1, 1}, {0, 1, 0}, {0, 1, 1}, {0, 1, 1}};
    CHECK(accuracy_at(scores, pairs, 0.5) == doctest::Approx(0.75));
    CHECK(accuracy_at(scores, pairs, 0.6) == doctest::Approx(0.75));
    CHECK(accuracy_at(scores, pairs, 0.0) == doctest::Approx(0.75));
    CHECK(accuracy_at(scores, pairs, 0.3) == doctest::Approx(1.0));
    CHECK_THROWS_AS(accuracy_at({}, {}, 0.5), InvalidArgument);
  }

  TEST_CASE("threshold sweep beats every grid threshold") {
    Rng rng(81);
    for (int k = 0; k < 200; ++k) {
      const std::size_t n = 1 + rng.index(40);
      std::vector<double> scores(n);
      std::vector<LabeledPair> pairs(n);
      for (std::size_t i = 0; i < n; ++i) {
        // Quantized scores make ties common.
        scores[i] = static_cast<double>(rng.index(200)) / 200.0;
        pairs[i].label = rng.coin() ? 1.0 : 0.0;
      }
      const ThresholdChoice best = best_threshold(scores, pairs);
      CHECK(best.accuracy == doctest::Approx(accuracy_at(scores, pairs, best.threshold)));
      for (int g = 0; g <= 200; ++g) {
        CHECK(accuracy_at(scores, pairs, g / 200.0) <= best.accuracy + 1e-12);
      }
      CHECK(accuracy_at(scores, pairs, std::numeric_limits<double>::infinity()) <= best.accuracy + 1e-12);
    }
  }

  TEST_CASE("threshold ties go to the smaller value") {
    const double scores[] = {0.2, 0.8};
    const LabeledPair pairs[] = {{0, 1, 0}, {0, 1, 1}};
    const ThresholdChoice c = best_threshold(scores, pairs);
    CHECK(c.threshold == 0.8);
    CHECK(c.accuracy == 1.0);
    const LabeledPair negatives[] = {{0, 1, 0}, {0, 1, 0}};
    CHECK(std::isinf(best_threshold(scores, negatives).threshold));
  }

  TEST_CASE("Bernoulli KL examples") {
    CHECK(bernoulli_kl(0.5, 0.5) == doctest::Approx(0.0));
    CHECK(bernoulli_kl(1.0, 0.5) == doctest::Approx(std::log(2.0)));
    CHECK(bernoulli_kl(0.0, 0.25) == doctest::Approx(-std::log(0.75)));
    CHECK(bernoulli_kl(0.3, 0.6) == doctest::Approx(0.3 * std::log(0.5) + 0.7 * std::log(0.7 / 0.4)));
    CHECK(std::isfinite(bernoulli_kl(1.0, 0.0)));
    Rng rng(82);
    for (int k = 0; k < 1000; ++k) CHECK(bernoulli_kl(rng.uniform(), rng.uniform()) >= -1e-15);
  }

  TEST_CASE("Pearson examples and invariances") {
    const double x[] = {1, 2, 3, 4};
    const double y[] = {2, 4, 6, 8};
    const double z[] = {4, 3, 2, 1};
    const double w[] = {1, 3, 2, 4};
    CHECK(pearson(x, y) == doctest::Approx(1.0));
    CHECK(pearson(x, z) == doctest::Approx(-1.0));
    CHECK(pearson(x, w) == doctest::Approx(0.8));
    const double flat[] = {1, 1, 1, 1};
    CHECK_THROWS_AS(pearson(x, flat), InvalidArgument);
    CHECK_THROWS_AS(pearson(std::span<const double>(x, 3), y), InvalidArgument);
    Rng rng(83);
    for (int k = 0; k < 200; ++k) {
      std::vector<double> a(10), b(10), c(10);
      for (std::size_t i = 0; i < 10; ++i) {
        a[i] = rng.uniform();
        b[i] = rng.uniform();
      }
      const double s = rng.uniform(0.1, 5.0), t = rng.uniform(-3.0, 3.0);
      for (std::size_t i = 0; i < 10; ++i) c[i] = s * a[i] + t;
      const double r = pearson(a, b);
      CHECK(r == doctest::Approx(pearson(c, b)).epsilon(1e-9));
      CHECK(r == doctest::Approx(pearson(b, a)).epsilon(1e-12));
      CHECK(std::abs(r) <= 1.0 + 1e-12);
    }
  }

  TEST_CASE("probability metrics") {
    const double gold[] = {0.1, 0.5, 0.9};
    const ProbMetrics same = prob_metrics(gold, gold);
    CHECK(same.kl == doctest::Approx(0.0));
    CHECK(same.pearson == doctest::Approx(1.0));
    const double pred[] = {0.2, 0.5, 0.7};
    const ProbMetrics m = prob_metrics(pred, gold);
    const double kl = (bernoulli_kl(0.1, 0.2) + bernoulli_kl(0.5, 0.5) + bernoulli_kl(0.9, 0.7)) / 3;
    CHECK(m.kl == doctest::Approx(kl));
    CHECK(m.pearson == doctest::Approx(pearson(pred, gold)));
  }

  TEST_CASE("calibration bins") {
    const double gold[] = {0.05, 0.1, 0.55, 0.6, 1.0};
    const double pred[] = {0.1, 0.2, 0.5, 0.7, 0.9};
    const auto bins = calibration_bins(pred, gold, 2);
    REQUIRE(bins.size() == 2);
    CHECK(bins[0].lo == 0.0);
    CHECK(bins[0].hi == 0.5);
    CHECK(bins[0].count == 2);
    CHECK(bins[0].mean_predicted == doctest::Approx(0.15));
    CHECK(bins[0].mean_gold == doctest::Approx(0.075));
    CHECK(bins[0].pearson == doctest::Approx(1.0));
    CHECK(bins[1].count == 3);
    CHECK(bins[1].mean_gold == doctest::Approx(0.7166666666666667));
    const auto ten = calibration_bins(pred, gold, 10);
    std::size_t total = 0;
    for (const auto& b : ten) total += b.count;
    CHECK(total == 5);
    CHECK(std::isnan(ten[2].pearson));
    CHECK(format_calibration(bins).rfind("lo\thi\tcount", 0) == 0);
    const std::pair<std::string, double> metrics[] = {{"accuracy", 0.5}};
    CHECK(format_metrics(metrics) == "accuracy\t0.5\n");
  }
}
