#include "boxlat/query.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <limits>
#include <string>

#include "boxlat/error.hpp"

namespace boxlat {

namespace {

// Compensated summation for the alternating inclusion-exclusion series.
class KahanSum {
 public:
  void add(double x) {
    const double y = x - carry_;
    const double t = sum_ + y;
    carry_ = (t - sum_) - y;
    sum_ = t;
  }
  double value() const { return sum_; }

 private:
  double sum_ = 0.0;
  double carry_ = 0.0;
};

// Adds sign * vol(running ∧ meet(S)) for every nonempty S drawn from
// boxes[first..]. A Bottom prefix contributes nothing, and neither does any
// extension of it, so the whole subtree is skipped.
void alternating_terms(const LatticeElement& running, std::span<const Box> boxes, std::size_t first, double sign,
                       const ProductMeasure& m, KahanSum& acc) {
  for (std::size_t k = first; k < boxes.size(); ++k) {
    LatticeElement next = meet(running, boxes[k]);
    if (next.is_bottom()) continue;
    acc.add(sign * std::exp(log_volume(next, m)));
    alternating_terms(next, boxes, k + 1, -sign, m, acc);
  }
}

std::vector<Box> boxes_of(const Model& model, std::span<const std::size_t> concepts) {
  std::vector<Box> out;
  out.reserve(concepts.size());
  for (std::size_t c : concepts) out.push_back(model.box(c));
  return out;
}

std::vector<std::size_t> unique_sorted(std::vector<std::size_t> v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
  return v;
}

LatticeElement meet_of(const Model& model, std::span<const std::size_t> concepts) {
  LatticeElement acc = top(model.measure());
  for (std::size_t c : concepts) {
    acc = meet(acc, model.box(c));
    if (acc.is_bottom()) break;
  }
  return acc;
}

}  // namespace

double log_joint(const Model& model, std::span<const std::size_t> concepts) {
  if (concepts.empty()) throw InvalidArgument("joint of an empty concept set");
  for (std::size_t c : concepts) {
    if (c >= model.size()) throw InvalidArgument("concept index " + std::to_string(c) + " out of range");
  }
  return log_volume(meet_of(model, concepts), model.measure());
}

double joint(const Model& model, std::span<const std::size_t> concepts) {
  return std::exp(log_joint(model, concepts));
}

double conditional(const Model& model, std::size_t target, std::span<const std::size_t> evidence) {
  if (evidence.empty()) return joint(model, std::span(&target, 1));
  const double log_evidence = log_joint(model, evidence);
  if (log_evidence == -std::numeric_limits<double>::infinity()) {
    throw NullEventError("conditioning on null event");
  }
  std::vector<std::size_t> all(evidence.begin(), evidence.end());
  all.push_back(target);
  return std::min(1.0, std::exp(log_joint(model, all) - log_evidence));
}

double union_volume(std::span<const Box> boxes, const ProductMeasure& m, std::size_t max_boxes) {
  if (boxes.size() > max_boxes) {
    throw InvalidArgument("union of " + std::to_string(boxes.size()) + " boxes exceeds the inclusion-exclusion cap of " +
                          std::to_string(max_boxes) + "; split the query into smaller unions");
  }
  if (boxes.empty()) return 0.0;
  KahanSum acc;
  alternating_terms(top(m), boxes, 0, 1.0, m, acc);
  return std::clamp(acc.value(), 0.0, 1.0);
}

double query_prob(const Model& model, const Query& q, std::size_t max_negatives) {
  const auto positives = unique_sorted(q.positives);
  const auto negatives = unique_sorted(q.negatives);
  for (std::size_t c : positives) {
    if (c >= model.size()) throw InvalidArgument("concept index " + std::to_string(c) + " out of range");
  }
  for (std::size_t c : negatives) {
    if (c >= model.size()) throw InvalidArgument("concept index " + std::to_string(c) + " out of range");
  }
  if (negatives.size() > max_negatives) {
    throw InvalidArgument("query has " + std::to_string(negatives.size()) +
                          " negated concepts, above the inclusion-exclusion cap of " + std::to_string(max_negatives));
  }
  const LatticeElement conj = meet_of(model, positives);
  if (conj.is_bottom()) return 0.0;
  const double conj_volume = volume(conj, model.measure());
  if (negatives.empty()) return conj_volume;

  // With v1 = vol(T ∪ f_1 ∪ ... ∪ f_k) and v2 = vol(f_1 ∪ ... ∪ f_k), every
  // inclusion-exclusion term of v1 that omits T is also a term of v2. The
  // difference v1 - v2 is therefore the sum over subsets S of the f's of
  // (-1)^|S| vol(T ∧ meet(S)), evaluated here without the cancelling terms.
  const auto neg_boxes = boxes_of(model, negatives);
  KahanSum acc;
  acc.add(conj_volume);
  alternating_terms(conj, neg_boxes, 0, -1.0, model.measure(), acc);
  return std::clamp(acc.value(), 0.0, conj_volume);
}

double answer(const Model& model, const Query& q, std::size_t max_negatives) {
  if (!q.target) return query_prob(model, q, max_negatives);
  const double evidence = query_prob(model, q, max_negatives);
  if (evidence <= 0.0) throw NullEventError("conditioning on null event");
  Query with_target = q;
  if (q.target->negated) {
    with_target.negatives.push_back(q.target->concept_index);
  } else {
    with_target.positives.push_back(q.target->concept_index);
  }
  const double both = query_prob(model, with_target, max_negatives);
  return std::clamp(both / evidence, 0.0, 1.0);
}

std::vector<Literal> parse_literals(const Vocabulary& vocab, std::string_view list) {
  std::vector<Literal> out;
  std::size_t start = 0;
  while (start <= list.size()) {
    std::size_t end = list.find(',', start);
    if (end == std::string_view::npos) end = list.size();
    std::string_view token = list.substr(start, end - start);
    while (!token.empty() && std::isspace(static_cast<unsigned char>(token.front()))) token.remove_prefix(1);
    while (!token.empty() && std::isspace(static_cast<unsigned char>(token.back()))) token.remove_suffix(1);
    if (!token.empty()) {
      bool negated = false;
      if (token.front() == '!') {
        negated = true;
        token.remove_prefix(1);
      }
      out.push_back({vocab.index_of(token), negated});
    }
    start = end + 1;
  }
  return out;
}

Query parse_query(const Vocabulary& vocab, std::string_view given, std::optional<std::string_view> target) {
  Query q;
  for (const Literal& lit : parse_literals(vocab, given)) {
    (lit.negated ? q.negatives : q.positives).push_back(lit.concept_index);
  }
  if (target) {
    const auto lits = parse_literals(vocab, *target);
    if (lits.size() != 1) throw DataError("expected exactly one target concept");
    q.target = lits.front();
  }
  return q;
}

}  // namespace boxlat
