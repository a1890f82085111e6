#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "boxlat/box.hpp"
#include "boxlat/model.hpp"

namespace boxlat {

// Inclusion-exclusion enumerates up to 2^K subsets.
inline constexpr std::size_t kDefaultMaxUnionTerms = 20;

struct Literal {
  std::size_t concept_index = 0;
  bool negated = false;

  bool operator==(const Literal&) const = default;
};

// A conjunction of concepts and negated concepts, optionally with a target
// literal to condition on it.
struct Query {
  std::vector<std::size_t> positives;
  std::vector<std::size_t> negatives;
  std::optional<Literal> target;
};

// Probability of the meet of all listed concepts. Throws InvalidArgument on an
// empty list.
double joint(const Model& model, std::span<const std::size_t> concepts);
double log_joint(const Model& model, std::span<const std::size_t> concepts);

// P(target | evidence). Empty evidence gives the marginal; evidence of
// probability zero throws NullEventError.
double conditional(const Model& model, std::size_t target, std::span<const std::size_t> evidence);

// Volume of the union of at most `max_boxes` boxes by inclusion-exclusion,
// clamped to [0, 1]. Throws InvalidArgument above the cap.
double union_volume(std::span<const Box> boxes, const ProductMeasure& m,
                    std::size_t max_boxes = kDefaultMaxUnionTerms);

// P(all positives, no negatives); the target field is ignored. Concepts in both
// sets make the query contradictory and yield 0.
double query_prob(const Model& model, const Query& q, std::size_t max_negatives = kDefaultMaxUnionTerms);

// query_prob when q has no target; otherwise P(target | evidence), throwing
// NullEventError when the evidence has probability zero.
double answer(const Model& model, const Query& q, std::size_t max_negatives = kDefaultMaxUnionTerms);

// Parses comma-separated concept lists where a leading '!' negates, e.g.
// given = "omnivore,!white", target = "grizzly_bear". Unknown ids throw
// DataError naming the concept.
Query parse_query(const Vocabulary& vocab, std::string_view given, std::optional<std::string_view> target = {});
std::vector<Literal> parse_literals(const Vocabulary& vocab, std::string_view list);

}  // namespace boxlat
