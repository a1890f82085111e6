#include "boxlat/model.hpp"

#include <string>

#include "boxlat/error.hpp"

namespace boxlat {

Model::Model(Vocabulary vocabulary, std::vector<Box> boxes, ProductMeasure measure, bool poe)
    : vocabulary_(std::move(vocabulary)), boxes_(std::move(boxes)), measure_(std::move(measure)), poe_(poe) {
  if (vocabulary_.size() != boxes_.size()) {
    throw InvalidArgument("model has " + std::to_string(vocabulary_.size()) + " concepts but " +
                          std::to_string(boxes_.size()) + " boxes");
  }
  for (std::size_t c = 0; c < boxes_.size(); ++c) {
    const Box& b = boxes_[c];
    if (b.dim() != measure_.dimension()) {
      throw InvalidArgument("box for '" + vocabulary_.id(c) + "' has dimension " + std::to_string(b.dim()) +
                            ", expected " + std::to_string(measure_.dimension()));
    }
    if (!within_support(b, measure_)) {
      throw InvalidArgument("box for '" + vocabulary_.id(c) + "' leaves the measure support");
    }
    for (std::size_t i = 0; i < b.dim(); ++i) {
      if (!(b.delta(i) > 0.0)) throw InvalidArgument("box for '" + vocabulary_.id(c) + "' has a zero width");
    }
  }
}

}  // namespace boxlat
