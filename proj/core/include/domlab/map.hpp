#pragma once

#include <map>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "domlab/torus.hpp"

namespace domlab {

inline constexpr std::size_t kOrbitCap = 1'000'000;

// Invertible volume-preserving diffeomorphism of T^d with analytic
// differentials.  forward_lift is a continuous lift to R^d commuting with the
// projection; all catalog maps have lifts whose displacement fields are
// Z^d-periodic, so lift arithmetic stays coherent across a whole mesh.
class TorusMap {
 public:
  virtual ~TorusMap() = default;

  int dim() const { return dim_; }
  const std::string& name() const { return name_; }
  const std::map<std::string, double>& params() const { return params_; }

  TorusPoint forward(const TorusPoint& x) const {
    return TorusPoint(forward_lift(x.coords()));
  }
  TorusPoint inverse(const TorusPoint& y) const {
    return TorusPoint(inverse_lift(y.coords()));
  }

  virtual Vec forward_lift(const Vec& v) const = 0;
  virtual Vec inverse_lift(const Vec& v) const = 0;

  // d(f) at x.
  virtual Mat jacobian(const TorusPoint& x) const = 0;

  // d(f^{-1}) at y; equals jacobian(inverse(y))^{-1}.  Overridden wherever an
  // analytic form exists.
  virtual Mat inverse_jacobian(const TorusPoint& y) const;

 protected:
  TorusMap(int dim, std::string name, std::map<std::string, double> params);

  int dim_;
  std::string name_;
  std::map<std::string, double> params_;
};

using MapPtr = std::shared_ptr<const TorusMap>;

// x -> M x mod 1 for an integer matrix with det = +-1.  The inverse matrix is
// computed exactly over the integers.
class LinearTorusMap : public TorusMap {
 public:
  LinearTorusMap(std::string name, Eigen::MatrixXi m);

  Vec forward_lift(const Vec& v) const override;
  Vec inverse_lift(const Vec& v) const override;
  Mat jacobian(const TorusPoint& x) const override;
  Mat inverse_jacobian(const TorusPoint& y) const override;

  const Eigen::MatrixXi& matrix_int() const { return m_int_; }

 private:
  Eigen::MatrixXi m_int_, minv_int_;
  Mat m_, minv_;
};

// x_target += amp * sin(2 pi (<wave, x> + phase)).  wave[target] = 0, so the
// displacement never feeds back into its own argument: det = 1 exactly and
// the inverse is the same shear with -amp.
class ShearTorusMap : public TorusMap {
 public:
  ShearTorusMap(std::string name, int dim, int target, Eigen::VectorXi wave,
                double amp, double phase = 0.0);

  Vec forward_lift(const Vec& v) const override;
  Vec inverse_lift(const Vec& v) const override;
  Mat jacobian(const TorusPoint& x) const override;
  Mat inverse_jacobian(const TorusPoint& y) const override;

 private:
  double phase_arg(const Vec& v) const;

  int target_;
  Eigen::VectorXi wave_;
  Vec wave_d_;
  double amp_, phase_;
};

// Applies stages left to right: f = s_k o ... o s_1.
class ComposedTorusMap : public TorusMap {
 public:
  ComposedTorusMap(std::string name, std::vector<MapPtr> stages,
                   std::map<std::string, double> params = {});

  Vec forward_lift(const Vec& v) const override;
  Vec inverse_lift(const Vec& v) const override;
  Mat jacobian(const TorusPoint& x) const override;
  Mat inverse_jacobian(const TorusPoint& y) const override;

 private:
  std::vector<MapPtr> stages_;
};

// View of f^{-1} as a map in its own right.
class InverseTorusMap : public TorusMap {
 public:
  explicit InverseTorusMap(MapPtr base);

  Vec forward_lift(const Vec& v) const override;
  Vec inverse_lift(const Vec& v) const override;
  Mat jacobian(const TorusPoint& x) const override;
  Mat inverse_jacobian(const TorusPoint& y) const override;

  const MapPtr& base() const { return base_; }

 private:
  MapPtr base_;
};

// Inverse view over a shared pointer; double inversion unwraps.
MapPtr inverse_of(MapPtr m);

// Non-owning inverse view for stack use; caller keeps m alive.
InverseTorusMap inverse_view(const TorusMap& m);

// Orbit x, f(x), ..., f^n(x) (or backward for n < 0).  Size |n|+1.
std::vector<TorusPoint> iterate_orbit(const TorusMap& f, const TorusPoint& x,
                                      long n, std::size_t cap = kOrbitCap);

}  // namespace domlab
