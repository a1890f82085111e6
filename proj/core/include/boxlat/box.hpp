#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "boxlat/measure.hpp"

namespace boxlat {

// Axis-aligned hyperrectangle stored as (min, delta); max = min + delta.
// Widths are nonnegative; model boxes additionally keep delta >= eps_min,
// which the trainer's projection enforces.
class Box {
 public:
  Box() = default;
  Box(std::vector<double> mins, std::vector<double> deltas);

  static Box from_bounds(std::span<const double> lo, std::span<const double> hi);

  std::size_t dim() const noexcept { return min_.size(); }
  double min(std::size_t i) const { return min_[i]; }
  double delta(std::size_t i) const { return delta_[i]; }
  double max(std::size_t i) const { return min_[i] + delta_[i]; }
  std::span<const double> mins() const noexcept { return min_; }
  std::span<const double> deltas() const noexcept { return delta_; }

  bool operator==(const Box&) const = default;

 private:
  std::vector<double> min_;
  std::vector<double> delta_;
};

// A box or the distinguished Bottom element (the empty set).
class LatticeElement {
 public:
  LatticeElement() = default;  // Bottom
  LatticeElement(Box box) : box_(std::move(box)) {}  // NOLINT(google-explicit-constructor)

  static LatticeElement bottom() { return {}; }

  bool is_bottom() const noexcept { return !box_.has_value(); }
  const Box& box() const;

  bool operator==(const LatticeElement&) const = default;

 private:
  std::optional<Box> box_;
};

// Intersection box; Bottom when any coordinate has max(lo) >= min(hi), so a
// zero-width touch is Bottom. Throws InvalidArgument on dimension mismatch.
LatticeElement meet(const LatticeElement& a, const LatticeElement& b);

// Smallest enclosing box; Bottom is the identity.
LatticeElement join(const LatticeElement& a, const LatticeElement& b);
Box join(const Box& a, const Box& b);

// The full-support box (lattice top) of a measure.
Box top(const ProductMeasure& m);

bool within_support(const Box& x, const ProductMeasure& m);

// log of the measure of x; -inf for Bottom. Throws on dimension mismatch or
// when x leaves the support.
double log_volume(const LatticeElement& x, const ProductMeasure& m);
double volume(const LatticeElement& x, const ProductMeasure& m);

// a.min <= b.min and b.max <= a.max in every coordinate.
bool contains(const Box& a, const Box& b);

// Bernoulli correlation of the two concepts' indicator variables. Throws
// InvalidArgument when either marginal is 0 or 1.
double correlation(const Box& a, const Box& b, const ProductMeasure& m);

// A width d such that min + d == target in floating point (the largest d with
// min + d <= target if no exact one exists). Requires min <= target.
double delta_to_reach(double min, double target);

}  // namespace boxlat
