#pragma once

#include <Eigen/Dense>
#include <cmath>

#include "domlab/errors.hpp"

namespace domlab {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

inline constexpr int kMinDim = 2;
inline constexpr int kMaxDim = 4;

// Fractional part in [0,1).  floor rounding can land exactly on 1 for tiny
// negative inputs; fold that back to 0.
inline double wrap_unit(double x) {
  double r = x - std::floor(x);
  return r < 1.0 ? r : 0.0;
}

// Signed representative of a coordinate difference in [-1/2, 1/2).
inline double wrap_half(double dx) {
  double r = dx - std::round(dx);
  return r < 0.5 ? r : -0.5;
}

// Point on the flat torus T^d = R^d / Z^d, coordinates kept in [0,1)^d.
class TorusPoint {
 public:
  explicit TorusPoint(Vec coords) : x_(std::move(coords)) {
    if (x_.size() < kMinDim || x_.size() > kMaxDim)
      throw ValidationError("torus dimension must be 2, 3 or 4");
    for (Eigen::Index i = 0; i < x_.size(); ++i) x_[i] = wrap_unit(x_[i]);
  }

  static TorusPoint from_lift(const Vec& lift) { return TorusPoint(lift); }

  const Vec& coords() const { return x_; }
  int dim() const { return static_cast<int>(x_.size()); }
  double operator[](int i) const { return x_[i]; }

 private:
  Vec x_;
};

// Minimal-norm displacement realizing to - from, one representative per
// coordinate in [-1/2, 1/2).
inline Vec displacement(const TorusPoint& from, const TorusPoint& to) {
  Vec d(from.dim());
  for (int i = 0; i < from.dim(); ++i) d[i] = wrap_half(to[i] - from[i]);
  return d;
}

// Flat metric induced from the Euclidean norm on R^d.
inline double distance(const TorusPoint& a, const TorusPoint& b) {
  return displacement(a, b).norm();
}

inline TorusPoint translate(const TorusPoint& x, const Vec& v) {
  return TorusPoint(x.coords() + v);
}

}  // namespace domlab
