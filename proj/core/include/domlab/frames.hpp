#pragma once

#include <vector>

#include "domlab/map.hpp"
#include "domlab/rng.hpp"
#include "domlab/torus.hpp"

namespace domlab {

// Thin QR with the sign convention diag(R) > 0, so Q is uniquely determined
// by the column span and the factor diagonals are safe to log.
struct QrFactors {
  Mat q;  // d x k, orthonormal columns
  Mat r;  // k x k, upper triangular, positive diagonal
};
QrFactors thin_qr(const Mat& m);  // throws SingularRestriction on rank loss

// Largest principal angle between equal-dimensional column spans, in radians.
// Computed from sines, so it stays accurate near zero.
double grassmann_distance(const Mat& u, const Mat& v);

// Smallest angle between any two unit vectors of the two spans.
double min_principal_angle(const Mat& u, const Mat& v);

// Orthonormal frame with entries drawn from the stream at indices
// [index0, index0 + d*k).
Mat random_frame(int d, int k, const RngStream& rng, std::uint64_t index0 = 0);

// Product of restricted differentials along an orbit, kept in factored form:
// the orthonormal frame is re-extracted after every push and the triangular
// factors are accumulated as a rescaled k x k product together with its
// inverse.  Singular values of the full product are recovered from these
// pieces at any orbit length without overflow.
class RestrictedCocycle {
 public:
  explicit RestrictedCocycle(Mat frame);

  void push(const Mat& jac);

  // Accumulates the factor next_frame^T jac frame_ and adopts next_frame.
  // Used when accurate frames along the orbit are known from a separate
  // stable transport; the factor is a general k x k matrix, not triangular.
  void push_anchored(const Mat& jac, const Mat& next_frame);

  const Mat& frame() const { return frame_; }
  int steps() const { return steps_; }
  int k() const { return static_cast<int>(frame_.cols()); }

  double log_det() const { return log_det_; }      // log|det|, exact sum
  double log_norm() const;                         // log sigma_max
  double log_sigma_min() const;
  // log of the operator norm of the (k-1)-st exterior power: the sum of the
  // top k-1 log singular values.  Zero for k = 1 by convention.
  double log_exterior_norm() const;
  // All k log singular values, descending.  Supports k <= 3, which covers
  // every bundle on T^d, d <= 4.
  std::vector<double> log_singular_values() const;

 private:
  void rescale();

  Mat frame_;
  Mat product_, inv_product_;
  double scale_ = 0.0, inv_scale_ = 0.0;
  double log_det_ = 0.0;
  int steps_ = 0;
};

}  // namespace domlab
