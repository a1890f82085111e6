#pragma once

#include <cstddef>
#include <string_view>
#include <vector>

#include "boxlat/box.hpp"
#include "boxlat/measure.hpp"
#include "boxlat/vocabulary.hpp"

namespace boxlat {

// A trained knowledge base: one box per concept under a product measure.
// Immutable after construction; replace the whole value to update it.
class Model {
 public:
  // Throws InvalidArgument unless every box has the measure's dimension, lies
  // in its support and has strictly positive widths.
  Model(Vocabulary vocabulary, std::vector<Box> boxes, ProductMeasure measure, bool poe = false);

  const Vocabulary& vocabulary() const noexcept { return vocabulary_; }
  const std::vector<Box>& boxes() const noexcept { return boxes_; }
  const Box& box(std::size_t concept_index) const { return boxes_.at(concept_index); }
  const Box& box(std::string_view id) const { return boxes_[vocabulary_.index_of(id)]; }
  const ProductMeasure& measure() const noexcept { return measure_; }
  bool poe() const noexcept { return poe_; }
  std::size_t dimension() const noexcept { return measure_.dimension(); }
  std::size_t size() const noexcept { return boxes_.size(); }

 private:
  Vocabulary vocabulary_;
  std::vector<Box> boxes_;
  ProductMeasure measure_;
  bool poe_;
};

}  // namespace boxlat
