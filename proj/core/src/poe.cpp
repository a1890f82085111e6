#include "boxlat/poe.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "boxlat/error.hpp"

namespace boxlat {

namespace {

double apex_sum(std::span<const double> apex) {
  double total = 0.0;
  for (std::size_t i = 0; i < apex.size(); ++i) {
    if (!(apex[i] >= 0.0)) {
      throw InvalidArgument("cone apex coordinate " + std::to_string(i) + " must be nonnegative");
    }
    total += apex[i];
  }
  return total;
}

}  // namespace

double poe_prob(const Cone& c) { return std::exp(-apex_sum(c.apex)); }

double poe_joint(const Cone& a, const Cone& b) {
  if (a.apex.size() != b.apex.size()) throw InvalidArgument("cone dimension mismatch");
  apex_sum(a.apex);
  apex_sum(b.apex);
  double total = 0.0;
  for (std::size_t i = 0; i < a.apex.size(); ++i) total += std::max(a.apex[i], b.apex[i]);
  return std::exp(-total);
}

double poe_covariance(const Cone& a, const Cone& b) { return poe_joint(a, b) - poe_prob(a) * poe_prob(b); }

}  // namespace boxlat
