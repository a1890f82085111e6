#pragma once

#include <span>
#include <vector>

namespace boxlat {

// Probabilistic order embedding: the cone {z : z >= apex} in the nonnegative
// orthant under the exponential measure. Coordinates may be +inf.
struct Cone {
  std::vector<double> apex;
};

// exp(-||apex||_1). Throws InvalidArgument on a negative or NaN coordinate.
double poe_prob(const Cone& c);

// exp(-sum_i max(a_i, b_i)): the mass of the cones' meet.
double poe_joint(const Cone& a, const Cone& b);

// poe_joint(a, b) - poe_prob(a) * poe_prob(b); never negative in exact arithmetic.
double poe_covariance(const Cone& a, const Cone& b);

}  // namespace boxlat
