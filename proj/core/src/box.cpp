#include "boxlat/box.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "boxlat/error.hpp"

namespace boxlat {

namespace {

void require_same_dim(const Box& a, const Box& b) {
  if (a.dim() != b.dim()) {
    throw InvalidArgument("box dimension mismatch: " + std::to_string(a.dim()) + " vs " + std::to_string(b.dim()));
  }
}

}  // namespace

Box::Box(std::vector<double> mins, std::vector<double> deltas) : min_(std::move(mins)), delta_(std::move(deltas)) {
  if (min_.size() != delta_.size()) throw InvalidArgument("box min/delta length mismatch");
  for (std::size_t i = 0; i < min_.size(); ++i) {
    if (!std::isfinite(min_[i]) || !std::isfinite(delta_[i]) || delta_[i] < 0.0) {
      throw InvalidArgument("box coordinate " + std::to_string(i) + " is not a finite interval");
    }
  }
}

Box Box::from_bounds(std::span<const double> lo, std::span<const double> hi) {
  if (lo.size() != hi.size()) throw InvalidArgument("box bound length mismatch");
  std::vector<double> mins(lo.begin(), lo.end());
  std::vector<double> deltas(lo.size());
  for (std::size_t i = 0; i < lo.size(); ++i) {
    if (!(hi[i] >= lo[i])) throw InvalidArgument("box upper bound below lower bound");
    deltas[i] = delta_to_reach(lo[i], hi[i]);
  }
  return Box(std::move(mins), std::move(deltas));
}

const Box& LatticeElement::box() const {
  if (!box_) throw InvalidArgument("Bottom has no box");
  return *box_;
}

LatticeElement meet(const LatticeElement& a, const LatticeElement& b) {
  if (a.is_bottom() || b.is_bottom()) return LatticeElement::bottom();
  const Box& x = a.box();
  const Box& y = b.box();
  require_same_dim(x, y);
  const std::size_t n = x.dim();
  std::vector<double> mins(n);
  std::vector<double> deltas(n);
  for (std::size_t i = 0; i < n; ++i) {
    const Box& lo_src = x.min(i) >= y.min(i) ? x : y;
    const Box& hi_src = x.max(i) <= y.max(i) ? x : y;
    const double lo = lo_src.min(i);
    const double hi = hi_src.max(i);
    if (!(hi > lo)) return LatticeElement::bottom();
    mins[i] = lo;
    // Copying the stored width when one box supplies both ends keeps meet(a, a) == a exactly.
    deltas[i] = (&lo_src == &hi_src) ? lo_src.delta(i) : hi - lo;
  }
  return Box(std::move(mins), std::move(deltas));
}

Box join(const Box& x, const Box& y) {
  require_same_dim(x, y);
  const std::size_t n = x.dim();
  std::vector<double> mins(n);
  std::vector<double> deltas(n);
  for (std::size_t i = 0; i < n; ++i) {
    const Box& lo_src = x.min(i) <= y.min(i) ? x : y;
    const Box& hi_src = x.max(i) >= y.max(i) ? x : y;
    mins[i] = lo_src.min(i);
    deltas[i] = (&lo_src == &hi_src) ? lo_src.delta(i) : hi_src.max(i) - lo_src.min(i);
  }
  return Box(std::move(mins), std::move(deltas));
}

LatticeElement join(const LatticeElement& a, const LatticeElement& b) {
  if (a.is_bottom()) return b;
  if (b.is_bottom()) return a;
  return join(a.box(), b.box());
}

Box top(const ProductMeasure& m) {
  std::vector<double> lo(m.dimension());
  std::vector<double> hi(m.dimension());
  for (std::size_t i = 0; i < m.dimension(); ++i) {
    lo[i] = m.lower(i);
    hi[i] = m.upper(i);
  }
  return Box::from_bounds(lo, hi);
}

bool within_support(const Box& x, const ProductMeasure& m) {
  if (x.dim() != m.dimension()) return false;
  for (std::size_t i = 0; i < x.dim(); ++i) {
    if (x.min(i) < m.lower(i) || x.max(i) > m.upper(i)) return false;
  }
  return true;
}

double log_volume(const LatticeElement& x, const ProductMeasure& m) {
  if (x.is_bottom()) return -std::numeric_limits<double>::infinity();
  const Box& b = x.box();
  if (b.dim() != m.dimension()) {
    throw InvalidArgument("box dimension " + std::to_string(b.dim()) + " does not match measure dimension " +
                          std::to_string(m.dimension()));
  }
  if (!within_support(b, m)) throw InvalidArgument("box leaves the measure support");
  double total = 0.0;
  for (std::size_t i = 0; i < b.dim(); ++i) total += m.log_mass(i, b.min(i), b.delta(i));
  return total;
}

double volume(const LatticeElement& x, const ProductMeasure& m) { return std::exp(log_volume(x, m)); }

bool contains(const Box& a, const Box& b) {
  require_same_dim(a, b);
  for (std::size_t i = 0; i < a.dim(); ++i) {
    if (a.min(i) > b.min(i) || b.max(i) > a.max(i)) return false;
  }
  return true;
}

double correlation(const Box& a, const Box& b, const ProductMeasure& m) {
  const double pa = volume(a, m);
  const double pb = volume(b, m);
  if (!(pa > 0.0 && pa < 1.0) || !(pb > 0.0 && pb < 1.0)) {
    throw InvalidArgument("correlation undefined for a marginal of 0 or 1");
  }
  const double pab = volume(meet(a, b), m);
  return (pab - pa * pb) / std::sqrt(pa * (1.0 - pa) * pb * (1.0 - pb));
}

double delta_to_reach(double min, double target) {
  if (!(min <= target)) throw InvalidArgument("interval end below its start");
  double d = target - min;
  while (d > 0.0 && min + d > target) d = std::nextafter(d, 0.0);
  while (min + d < target) {
    const double next = std::nextafter(d, std::numeric_limits<double>::infinity());
    if (min + next > target) break;
    d = next;
  }
  return d;
}

}  // namespace boxlat
