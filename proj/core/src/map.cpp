#include "domlab/map.hpp"

#include <cmath>
#include <numbers>

namespace domlab {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

using IntMat = Eigen::Matrix<long long, Eigen::Dynamic, Eigen::Dynamic>;

long long int_det(const IntMat& m) {
  const auto n = m.rows();
  if (n == 1) return m(0, 0);
  if (n == 2) return m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0);
  long long det = 0;
  for (Eigen::Index j = 0; j < n; ++j) {
    IntMat minor(n - 1, n - 1);
    for (Eigen::Index r = 1; r < n; ++r) {
      Eigen::Index cc = 0;
      for (Eigen::Index c = 0; c < n; ++c) {
        if (c == j) continue;
        minor(r - 1, cc++) = m(r, c);
      }
    }
    long long term = m(0, j) * int_det(minor);
    det += (j % 2 == 0) ? term : -term;
  }
  return det;
}

// Exact inverse of a unimodular integer matrix via the adjugate.
Eigen::MatrixXi unimodular_inverse(const Eigen::MatrixXi& m) {
  const auto n = m.rows();
  IntMat w = m.cast<long long>();
  long long det = int_det(w);
  if (det != 1 && det != -1)
    throw ValidationError("linear torus map must have determinant +-1, got " +
                          std::to_string(det));
  Eigen::MatrixXi inv(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      IntMat minor(n - 1, n - 1);
      Eigen::Index rr = 0;
      for (Eigen::Index r = 0; r < n; ++r) {
        if (r == j) continue;
        Eigen::Index cc = 0;
        for (Eigen::Index c = 0; c < n; ++c) {
          if (c == i) continue;
          minor(rr, cc++) = w(r, c);
        }
        ++rr;
      }
      long long cof = int_det(minor);
      if ((i + j) % 2 != 0) cof = -cof;
      inv(i, j) = static_cast<int>(det * cof);  // det = 1/det for +-1
    }
  }
  return inv;
}

}  // namespace

TorusMap::TorusMap(int dim, std::string name, std::map<std::string, double> params)
    : dim_(dim), name_(std::move(name)), params_(std::move(params)) {
  if (dim < kMinDim || dim > kMaxDim)
    throw ValidationError("torus map dimension must be 2, 3 or 4");
}

Mat TorusMap::inverse_jacobian(const TorusPoint& y) const {
  return jacobian(inverse(y)).inverse();
}

LinearTorusMap::LinearTorusMap(std::string name, Eigen::MatrixXi m)
    : TorusMap(static_cast<int>(m.rows()), std::move(name), {}),
      m_int_(std::move(m)) {
  if (m_int_.rows() != m_int_.cols())
    throw ValidationError("linear torus map matrix must be square");
  minv_int_ = unimodular_inverse(m_int_);
  m_ = m_int_.cast<double>();
  minv_ = minv_int_.cast<double>();
}

Vec LinearTorusMap::forward_lift(const Vec& v) const { return m_ * v; }
Vec LinearTorusMap::inverse_lift(const Vec& v) const { return minv_ * v; }
Mat LinearTorusMap::jacobian(const TorusPoint&) const { return m_; }
Mat LinearTorusMap::inverse_jacobian(const TorusPoint&) const { return minv_; }

ShearTorusMap::ShearTorusMap(std::string name, int dim, int target,
                             Eigen::VectorXi wave, double amp, double phase)
    : TorusMap(dim, std::move(name), {{"amp", amp}}),
      target_(target),
      wave_(std::move(wave)),
      amp_(amp),
      phase_(phase) {
  if (target_ < 0 || target_ >= dim)
    throw ValidationError("shear target coordinate out of range");
  if (wave_.size() != dim)
    throw ValidationError("shear wave vector size mismatch");
  if (wave_[target_] != 0)
    throw ValidationError("shear wave must not involve the sheared coordinate");
  wave_d_ = wave_.cast<double>();
}

double ShearTorusMap::phase_arg(const Vec& v) const {
  return kTwoPi * (wave_d_.dot(v) + phase_);
}

Vec ShearTorusMap::forward_lift(const Vec& v) const {
  Vec w = v;
  w[target_] += amp_ * std::sin(phase_arg(v));
  return w;
}

Vec ShearTorusMap::inverse_lift(const Vec& v) const {
  // wave[target] = 0, so the phase is unchanged by the shear itself.
  Vec w = v;
  w[target_] -= amp_ * std::sin(phase_arg(v));
  return w;
}

Mat ShearTorusMap::jacobian(const TorusPoint& x) const {
  Mat j = Mat::Identity(dim_, dim_);
  double c = kTwoPi * amp_ * std::cos(phase_arg(x.coords()));
  j.row(target_) += c * wave_d_.transpose();
  j(target_, target_) = 1.0;
  return j;
}

Mat ShearTorusMap::inverse_jacobian(const TorusPoint& y) const {
  // (I + u w^T)^{-1} = I - u w^T because w^T u = 0.
  Mat j = Mat::Identity(dim_, dim_);
  double c = kTwoPi * amp_ * std::cos(phase_arg(y.coords()));
  j.row(target_) -= c * wave_d_.transpose();
  j(target_, target_) = 1.0;
  return j;
}

ComposedTorusMap::ComposedTorusMap(std::string name, std::vector<MapPtr> stages,
                                   std::map<std::string, double> params)
    : TorusMap(stages.empty() ? kMinDim : stages.front()->dim(), std::move(name),
               std::move(params)),
      stages_(std::move(stages)) {
  if (stages_.empty()) throw ValidationError("composition needs at least one stage");
  for (const auto& s : stages_)
    if (s->dim() != dim_) throw ValidationError("composition stage dimension mismatch");
}

Vec ComposedTorusMap::forward_lift(const Vec& v) const {
  Vec w = v;
  for (const auto& s : stages_) w = s->forward_lift(w);
  return w;
}

Vec ComposedTorusMap::inverse_lift(const Vec& v) const {
  Vec w = v;
  for (auto it = stages_.rbegin(); it != stages_.rend(); ++it)
    w = (*it)->inverse_lift(w);
  return w;
}

Mat ComposedTorusMap::jacobian(const TorusPoint& x) const {
  TorusPoint p = x;
  Mat j = Mat::Identity(dim_, dim_);
  for (const auto& s : stages_) {
    j = s->jacobian(p) * j;
    p = s->forward(p);
  }
  return j;
}

Mat ComposedTorusMap::inverse_jacobian(const TorusPoint& y) const {
  TorusPoint p = y;
  Mat j = Mat::Identity(dim_, dim_);
  for (auto it = stages_.rbegin(); it != stages_.rend(); ++it) {
    j = (*it)->inverse_jacobian(p) * j;
    p = (*it)->inverse(p);
  }
  return j;
}

InverseTorusMap::InverseTorusMap(MapPtr base)
    : TorusMap(base->dim(), base->name() + "^-1", base->params()),
      base_(std::move(base)) {}

Vec InverseTorusMap::forward_lift(const Vec& v) const { return base_->inverse_lift(v); }
Vec InverseTorusMap::inverse_lift(const Vec& v) const { return base_->forward_lift(v); }
Mat InverseTorusMap::jacobian(const TorusPoint& x) const {
  return base_->inverse_jacobian(x);
}
Mat InverseTorusMap::inverse_jacobian(const TorusPoint& y) const {
  return base_->jacobian(y);
}

MapPtr inverse_of(MapPtr m) {
  if (auto inv = std::dynamic_pointer_cast<const InverseTorusMap>(m))
    return inv->base();
  return std::make_shared<InverseTorusMap>(std::move(m));
}

InverseTorusMap inverse_view(const TorusMap& m) {
  return InverseTorusMap(MapPtr(MapPtr(), &m));
}

std::vector<TorusPoint> iterate_orbit(const TorusMap& f, const TorusPoint& x,
                                      long n, std::size_t cap) {
  std::size_t steps = static_cast<std::size_t>(n < 0 ? -n : n);
  if (steps > cap)
    throw OrbitLengthExceeded("orbit of length " + std::to_string(steps) +
                              " exceeds cap " + std::to_string(cap));
  std::vector<TorusPoint> orbit;
  orbit.reserve(steps + 1);
  orbit.push_back(x);
  for (std::size_t k = 0; k < steps; ++k)
    orbit.push_back(n >= 0 ? f.forward(orbit.back()) : f.inverse(orbit.back()));
  return orbit;
}

}  // namespace domlab
