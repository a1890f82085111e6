#pragma once

#include <cstddef>
#include <functional>
#include <memory>
#include <span>
#include <string_view>
#include <vector>

namespace boxlat {

class Box;

enum class MeasureKind { uniform, exponential, custom };

// Token used in model file headers: "uniform" / "exponential".
std::string_view to_token(MeasureKind kind);
MeasureKind parse_measure_token(std::string_view token);

// One coordinate of a custom product measure. `cdf` must be monotone
// increasing with cdf(lower) == 0 and cdf(upper) == 1. `density` is only
// required for gradient evaluation.
struct CoordinateCdf {
  std::function<double(double)> cdf;
  std::function<double(double)> density;
  double lower = 0.0;
  double upper = 1.0;
};

// Partial derivatives of log_mass with respect to the interval's lower end
// (width held fixed) and its width.
struct LogMassGradient {
  double d_lower = 0.0;
  double d_width = 0.0;
};

inline constexpr double kDefaultExponentialMax = 50.0;

// A product probability measure p(x) = prod_i p_i(x_i) over the embedding
// space. Uniform lives on [0,1]^n; exponential (density exp(-x)) on
// [0, max_coordinate]^n, where the clipped tail mass (< 2e-22 at the default)
// is treated as zero.
class ProductMeasure {
 public:
  static ProductMeasure uniform(std::size_t dimension);
  static ProductMeasure exponential(std::size_t dimension, double max_coordinate = kDefaultExponentialMax);
  static ProductMeasure custom(std::vector<CoordinateCdf> coordinates);

  MeasureKind kind() const noexcept { return kind_; }
  std::size_t dimension() const noexcept { return dimension_; }
  double lower(std::size_t dim) const;
  double upper(std::size_t dim) const;

  // F_dim(t). Throws InvalidArgument when t is outside the support.
  double cdf(double t, std::size_t dim) const;

  // log(F(lo + width) - F(lo)) without support checks. Uniform and
  // exponential use closed forms that stay accurate for tiny widths.
  double log_mass(std::size_t dim, double lo, double width) const;
  LogMassGradient log_mass_gradient(std::size_t dim, double lo, double width) const;

  bool operator==(const ProductMeasure& other) const;

 private:
  ProductMeasure(MeasureKind kind, std::size_t dimension, double lower, double upper)
      : kind_(kind), dimension_(dimension), lower_(lower), upper_(upper) {}

  MeasureKind kind_;
  std::size_t dimension_;
  double lower_;
  double upper_;
  std::shared_ptr<const std::vector<CoordinateCdf>> custom_;
};

// Maps the cone {z : z >= x} to the unit-cube box prod_i [F_i(x_i), 1], whose
// uniform volume equals the cone's mass under m. The upper end is exactly 1.
Box cone_to_box(std::span<const double> apex, const ProductMeasure& m);

}  // namespace boxlat
