#pragma once

#include <utility>
#include <vector>

#include "domlab/frames.hpp"
#include "domlab/map.hpp"
#include "domlab/rng.hpp"

namespace domlab {

struct EstimateOptions {
  int burn_in = 100;
  int iters = 200;
  double tolerance = 1e-9;  // accepted Grassmannian residual
  std::size_t orbit_cap = kOrbitCap;
};

// One estimated bundle at a point.  The residual is the Grassmannian gap
// between the frames produced by the last two start depths of the power
// iteration, floored at 1e-14 so downstream bounds scale sensibly.
struct BundleEstimate {
  TorusPoint base;
  Mat basis;  // d x k, orthonormal
  double residual;
};

// Both bundles at a point.  angle is the smallest principal angle between
// the two spans; convergence_residual the worse of the two bundle residuals.
struct SplittingFrame {
  TorusPoint base;
  Mat cs_basis;
  Mat cu_basis;
  double convergence_residual;
  double angle;
};

// Pushes random frames with df along the backward-started orbit segment
// ending at x, re-orthonormalizing each step.  Throws NoConvergenceError if
// the residual stays above tolerance.
BundleEstimate estimate_cu(const TorusMap& f, const TorusPoint& x, int dim_cu,
                           const EstimateOptions& opts, const RngStream& rng);

// Mirror of estimate_cu under the inverse map: frames are pushed with
// df^{-1} along the forward-started orbit segment ending at x.
BundleEstimate estimate_cs(const TorusMap& f, const TorusPoint& x, int dim_cs,
                           const EstimateOptions& opts, const RngStream& rng);

SplittingFrame estimate_splitting(const TorusMap& f, const TorusPoint& x,
                                  int dim_cu, const EstimateOptions& opts,
                                  const RngStream& rng);

// Residual per candidate dim_cu in 1..d-1; entries where the iteration does
// not converge carry the measured residual rather than throwing.
std::vector<std::pair<int, double>> scan_splits(const TorusMap& f,
                                                const TorusPoint& x,
                                                const EstimateOptions& opts,
                                                const RngStream& rng);

// Forward products restricted to the cs bundle are ill-conditioned when
// computed by forward frame transport: rounding feeds the dominant cu
// directions, which outgrow the signal as (rate)^{-n}.  The stable route is
// one bundle estimate at the orbit endpoint followed by a backward sweep with
// the inverse differentials, along which the cs bundle is attracting.  The
// sweep records accurate frames at every orbit point and the restricted
// product of df^{-n}; forward cs norms are its reciprocal singular values.
// The endpoint estimate starts from a fixed generic frame, so results do not
// depend on any caller-provided stream.
struct CsOrbitFrames {
  std::vector<TorusPoint> orbit;  // x, f x, ..., f^n x
  std::vector<Mat> frames;        // cs frame at each orbit point
  RestrictedCocycle backward;     // product of df^{-1}|cs from f^n x down to x
};
CsOrbitFrames cs_frames_along(const TorusMap& f, const TorusPoint& x,
                              int dim_cs, int n, const EstimateOptions& opts);

// ||df^n restricted to cs|| * ||(df^n restricted to cu)^{-1}|| along the
// forward orbit of the frame's base point.
double domination_ratio(const TorusMap& f, const SplittingFrame& frame, int n);
double log_domination_ratio(const TorusMap& f, const SplittingFrame& frame, int n);

// Fit of ratio(n) <= C rate^n by log-linear regression over n = 1..horizon of
// the per-n supremum across the given frames.  cs norms come from the stable
// backward sweep; when its endpoint estimate cannot converge (no dominated cs
// bundle exists), the supplied frames are pushed forward directly, which is
// well conditioned exactly in that non-decaying regime.
struct DominationEstimate {
  double constant;      // C
  double rate;          // fitted geometric rate
  double fit_residual;  // rms of regression residuals in log space
  int horizon;
  bool dominated;  // rate < 1 and fit_residual below the flag threshold
};

DominationEstimate fit_domination(const TorusMap& f,
                                  const std::vector<SplittingFrame>& frames,
                                  int horizon, double flag_threshold = 0.05);

}  // namespace domlab
