#include "boxlat/measure.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "boxlat/box.hpp"
#include "boxlat/error.hpp"

namespace boxlat {

std::string_view to_token(MeasureKind kind) {
  switch (kind) {
    case MeasureKind::uniform: return "uniform";
    case MeasureKind::exponential: return "exponential";
    case MeasureKind::custom: return "custom";
  }
  return "custom";
}

MeasureKind parse_measure_token(std::string_view token) {
  if (token == "uniform") return MeasureKind::uniform;
  if (token == "exponential") return MeasureKind::exponential;
  throw DataError("unknown measure '" + std::string(token) + "' (expected uniform or exponential)");
}

ProductMeasure ProductMeasure::uniform(std::size_t dimension) {
  if (dimension == 0) throw InvalidArgument("measure dimension must be positive");
  return ProductMeasure(MeasureKind::uniform, dimension, 0.0, 1.0);
}

ProductMeasure ProductMeasure::exponential(std::size_t dimension, double max_coordinate) {
  if (dimension == 0) throw InvalidArgument("measure dimension must be positive");
  if (!(max_coordinate > 0.0) || !std::isfinite(max_coordinate)) {
    throw InvalidArgument("exponential max coordinate must be positive and finite");
  }
  return ProductMeasure(MeasureKind::exponential, dimension, 0.0, max_coordinate);
}

ProductMeasure ProductMeasure::custom(std::vector<CoordinateCdf> coordinates) {
  if (coordinates.empty()) throw InvalidArgument("measure dimension must be positive");
  for (const auto& c : coordinates) {
    if (!c.cdf) throw InvalidArgument("custom coordinate is missing its cdf");
    if (!(c.lower < c.upper)) throw InvalidArgument("custom coordinate support is empty");
  }
  ProductMeasure m(MeasureKind::custom, coordinates.size(), 0.0, 1.0);
  m.custom_ = std::make_shared<const std::vector<CoordinateCdf>>(std::move(coordinates));
  return m;
}

double ProductMeasure::lower(std::size_t dim) const {
  return kind_ == MeasureKind::custom ? custom_->at(dim).lower : lower_;
}

double ProductMeasure::upper(std::size_t dim) const {
  return kind_ == MeasureKind::custom ? custom_->at(dim).upper : upper_;
}

double ProductMeasure::cdf(double t, std::size_t dim) const {
  if (dim >= dimension_) throw InvalidArgument("coordinate index out of range");
  if (!(t >= lower(dim) && t <= upper(dim))) {
    throw InvalidArgument("point " + std::to_string(t) + " is outside the measure support");
  }
  switch (kind_) {
    case MeasureKind::uniform: return t;
    case MeasureKind::exponential: return -std::expm1(-t);
    case MeasureKind::custom: return (*custom_)[dim].cdf(t);
  }
  return t;
}

double ProductMeasure::log_mass(std::size_t dim, double lo, double width) const {
  switch (kind_) {
    case MeasureKind::uniform: return std::log(width);
    case MeasureKind::exponential: return -lo + std::log(-std::expm1(-width));
    case MeasureKind::custom: {
      const auto& c = (*custom_)[dim];
      return std::log(c.cdf(lo + width) - c.cdf(lo));
    }
  }
  return std::log(width);
}

LogMassGradient ProductMeasure::log_mass_gradient(std::size_t dim, double lo, double width) const {
  switch (kind_) {
    case MeasureKind::uniform: return {0.0, 1.0 / width};
    case MeasureKind::exponential: return {-1.0, 1.0 / std::expm1(width)};
    case MeasureKind::custom: {
      const auto& c = (*custom_)[dim];
      if (!c.density) throw InvalidArgument("custom coordinate has no density; gradients unavailable");
      const double hi = lo + width;
      const double mass = c.cdf(hi) - c.cdf(lo);
      return {(c.density(hi) - c.density(lo)) / mass, c.density(hi) / mass};
    }
  }
  return {};
}

bool ProductMeasure::operator==(const ProductMeasure& other) const {
  return kind_ == other.kind_ && dimension_ == other.dimension_ && lower_ == other.lower_ &&
         upper_ == other.upper_ && custom_ == other.custom_;
}

Box cone_to_box(std::span<const double> apex, const ProductMeasure& m) {
  if (apex.size() != m.dimension()) {
    throw InvalidArgument("cone dimension " + std::to_string(apex.size()) + " does not match measure dimension " +
                          std::to_string(m.dimension()));
  }
  std::vector<double> mins(apex.size());
  std::vector<double> deltas(apex.size());
  for (std::size_t i = 0; i < apex.size(); ++i) {
    mins[i] = m.cdf(apex[i], i);
    deltas[i] = delta_to_reach(mins[i], 1.0);
  }
  return Box(std::move(mins), std::move(deltas));
}

}  // namespace boxlat
