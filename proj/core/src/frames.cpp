#include "domlab/frames.hpp"

#include <Eigen/LU>
#include <Eigen/QR>
#include <Eigen/SVD>
#include <algorithm>
#include <cmath>

namespace domlab {

namespace {

double largest_singular_value(const Mat& m) {
  return Eigen::JacobiSVD<Mat>(m).singularValues()(0);
}

}  // namespace

QrFactors thin_qr(const Mat& m) {
  const auto k = m.cols();
  Eigen::HouseholderQR<Mat> qr(m);
  Mat q = qr.householderQ() * Mat::Identity(m.rows(), k);
  Mat r = qr.matrixQR().topRows(k).triangularView<Eigen::Upper>();
  for (Eigen::Index i = 0; i < k; ++i) {
    double d = r(i, i);
    if (!(std::abs(d) > 1e-300) || !std::isfinite(d))
      throw SingularRestriction("rank loss in frame push");
    if (d < 0) {
      r.row(i) = -r.row(i);
      q.col(i) = -q.col(i);
    }
  }
  return {std::move(q), std::move(r)};
}

double grassmann_distance(const Mat& u, const Mat& v) {
  // sin(theta_max) = || (I - u u^T) v ||_2 for orthonormal u, v.
  Mat residual = v - u * (u.transpose() * v);
  double s = largest_singular_value(residual);
  return std::asin(std::clamp(s, 0.0, 1.0));
}

double min_principal_angle(const Mat& u, const Mat& v) {
  double c = largest_singular_value(u.transpose() * v);
  return std::acos(std::clamp(c, -1.0, 1.0));
}

Mat random_frame(int d, int k, const RngStream& rng, std::uint64_t index0) {
  Mat m(d, k);
  std::uint64_t idx = index0;
  for (int j = 0; j < k; ++j)
    for (int i = 0; i < d; ++i) m(i, j) = rng.symmetric(idx++);
  return thin_qr(m).q;
}

RestrictedCocycle::RestrictedCocycle(Mat frame) : frame_(std::move(frame)) {
  const auto k = frame_.cols();
  product_ = Mat::Identity(k, k);
  inv_product_ = Mat::Identity(k, k);
}

void RestrictedCocycle::push(const Mat& jac) {
  QrFactors f = thin_qr(jac * frame_);
  frame_ = std::move(f.q);
  for (Eigen::Index i = 0; i < f.r.rows(); ++i) log_det_ += std::log(f.r(i, i));
  product_ = f.r * product_;
  // inv_product_ <- inv_product_ * r^{-1}, via r^T y^T = inv^T.
  inv_product_ = f.r.transpose()
                     .triangularView<Eigen::Lower>()
                     .solve(inv_product_.transpose())
                     .transpose();
  ++steps_;
  rescale();
}

void RestrictedCocycle::push_anchored(const Mat& jac, const Mat& next_frame) {
  Mat r = next_frame.transpose() * (jac * frame_);
  Eigen::PartialPivLU<Mat> lu(r);
  double det = lu.determinant();
  if (!(std::abs(det) > 1e-300) || !std::isfinite(det))
    throw SingularRestriction("rank loss in anchored frame push");
  frame_ = next_frame;
  log_det_ += std::log(std::abs(det));
  product_ = r * product_;
  inv_product_ =
      r.transpose().partialPivLu().solve(inv_product_.transpose()).transpose();
  ++steps_;
  rescale();
}

void RestrictedCocycle::rescale() {
  double s = product_.cwiseAbs().maxCoeff();
  if (s > 1e100 || (s < 1e-100 && s > 0)) {
    product_ /= s;
    scale_ += std::log(s);
  }
  double si = inv_product_.cwiseAbs().maxCoeff();
  if (si > 1e100 || (si < 1e-100 && si > 0)) {
    inv_product_ /= si;
    inv_scale_ += std::log(si);
  }
}

double RestrictedCocycle::log_norm() const {
  return scale_ + std::log(largest_singular_value(product_));
}

double RestrictedCocycle::log_sigma_min() const {
  return -(inv_scale_ + std::log(largest_singular_value(inv_product_)));
}

double RestrictedCocycle::log_exterior_norm() const {
  if (k() == 1) return 0.0;
  return log_det_ - log_sigma_min();
}

std::vector<double> RestrictedCocycle::log_singular_values() const {
  switch (k()) {
    case 1:
      return {log_det_};
    case 2: {
      // The second value can exceed the first by rounding when the two
      // singular values coincide; clamp to keep the list descending.
      double top = log_norm();
      return {top, std::min(log_det_ - top, top)};
    }
    case 3: {
      double top = log_norm(), bottom = log_sigma_min();
      double mid = std::clamp(log_det_ - top - bottom, bottom, top);
      return {top, mid, bottom};
    }
    default:
      throw ValidationError("restricted cocycle supports bundle dimension <= 3");
  }
}

}  // namespace domlab
