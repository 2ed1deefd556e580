#include "domlab/splitting.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace domlab {

namespace {

constexpr double kResidualFloor = 1e-14;

void check_options(const EstimateOptions& opts) {
  if (opts.burn_in < 0 || opts.iters < 1)
    throw ValidationError("power iteration needs burn_in >= 0 and iters >= 1");
  if (static_cast<std::size_t>(opts.burn_in) + opts.iters > opts.orbit_cap)
    throw OrbitLengthExceeded("power iteration length exceeds orbit cap");
}

// Frames started at depth N and N-1 are successive iterates of the
// deepen-the-start process; their gap at x is the convergence residual.
BundleEstimate power_iterate(const TorusMap& f, const TorusPoint& x, int k,
                             const EstimateOptions& opts, const RngStream& rng) {
  const int d = f.dim();
  if (k < 1 || k >= d)
    throw ValidationError("bundle dimension must lie in [1, d-1]");
  check_options(opts);
  const int depth = opts.burn_in + opts.iters;

  std::vector<TorusPoint> orbit;  // orbit[j] = f^{-j}(x)
  orbit.reserve(depth + 1);
  orbit.push_back(x);
  for (int j = 0; j < depth; ++j) orbit.push_back(f.inverse(orbit.back()));

  Mat deep = random_frame(d, k, rng.derive(1));
  Mat shallow = random_frame(d, k, rng.derive(2));
  for (int j = depth; j > 0; --j) {
    const Mat jac = f.jacobian(orbit[j]);
    deep = thin_qr(jac * deep).q;
    if (j < depth) shallow = thin_qr(jac * shallow).q;
  }
  double residual =
      std::max(grassmann_distance(deep, shallow), kResidualFloor);
  if (!(residual <= opts.tolerance))
    throw NoConvergenceError("bundle estimate did not converge at (" +
                             std::to_string(x[0]) + ", ...): residual " +
                             std::to_string(residual));
  return {x, std::move(deep), residual};
}

}  // namespace

BundleEstimate estimate_cu(const TorusMap& f, const TorusPoint& x, int dim_cu,
                           const EstimateOptions& opts, const RngStream& rng) {
  return power_iterate(f, x, dim_cu, opts, rng);
}

BundleEstimate estimate_cs(const TorusMap& f, const TorusPoint& x, int dim_cs,
                           const EstimateOptions& opts, const RngStream& rng) {
  InverseTorusMap inv = inverse_view(f);
  return power_iterate(inv, x, dim_cs, opts, rng);
}

SplittingFrame estimate_splitting(const TorusMap& f, const TorusPoint& x,
                                  int dim_cu, const EstimateOptions& opts,
                                  const RngStream& rng) {
  BundleEstimate cu = estimate_cu(f, x, dim_cu, opts, rng.derive(11));
  BundleEstimate cs = estimate_cs(f, x, f.dim() - dim_cu, opts, rng.derive(12));
  SplittingFrame out{x, std::move(cs.basis), std::move(cu.basis),
                     std::max(cs.residual, cu.residual), 0.0};
  out.angle = min_principal_angle(out.cs_basis, out.cu_basis);
  return out;
}

std::vector<std::pair<int, double>> scan_splits(const TorusMap& f,
                                                const TorusPoint& x,
                                                const EstimateOptions& opts,
                                                const RngStream& rng) {
  EstimateOptions relaxed = opts;
  relaxed.tolerance = 4.0;  // never throws; angles cannot exceed pi/2
  std::vector<std::pair<int, double>> out;
  for (int k = 1; k < f.dim(); ++k) {
    BundleEstimate cu = estimate_cu(f, x, k, relaxed, rng.derive(100 + k));
    out.emplace_back(k, cu.residual);
  }
  return out;
}

CsOrbitFrames cs_frames_along(const TorusMap& f, const TorusPoint& x,
                              int dim_cs, int n, const EstimateOptions& opts) {
  if (n < 0) throw ValidationError("orbit horizon must be >= 0");
  if (static_cast<std::size_t>(n) > opts.orbit_cap)
    throw OrbitLengthExceeded("orbit horizon exceeds orbit cap");

  std::vector<TorusPoint> orbit;
  orbit.reserve(n + 1);
  orbit.push_back(x);
  for (int j = 0; j < n; ++j) orbit.push_back(f.forward(orbit.back()));

  // Any generic start frame converges to the same bundle; a fixed stream
  // keeps the whole sweep a pure function of (map, point, horizon).
  InverseTorusMap inv = inverse_view(f);
  BundleEstimate end = power_iterate(inv, orbit.back(), dim_cs, opts,
                                     RngStream(0x05ca1ab1e, "cs.endpoint"));

  std::vector<Mat> frames(n + 1);
  frames[n] = end.basis;
  RestrictedCocycle backward(end.basis);
  for (int j = n; j > 0; --j) {
    backward.push(f.inverse_jacobian(orbit[j]));
    frames[j - 1] = backward.frame();
  }
  return {std::move(orbit), std::move(frames), std::move(backward)};
}

double log_domination_ratio(const TorusMap& f, const SplittingFrame& frame,
                            int n) {
  if (n < 0) throw ValidationError("domination horizon must be >= 0");
  const int dim_cs = static_cast<int>(frame.cs_basis.cols());
  EstimateOptions opts;
  CsOrbitFrames sweep = cs_frames_along(f, frame.base, dim_cs, n, opts);

  RestrictedCocycle cu(frame.cu_basis);
  for (int j = 0; j < n; ++j) cu.push(f.jacobian(sweep.orbit[j]));

  // log||df^n|cs|| = -log sigma_min(df^{-n}|cs).
  return -sweep.backward.log_sigma_min() - cu.log_sigma_min();
}

double domination_ratio(const TorusMap& f, const SplittingFrame& frame, int n) {
  return std::exp(log_domination_ratio(f, frame, n));
}

DominationEstimate fit_domination(const TorusMap& f,
                                  const std::vector<SplittingFrame>& frames,
                                  int horizon, double flag_threshold) {
  if (horizon < 3) throw ValidationError("domination fit needs horizon >= 3");
  if (frames.empty()) throw ValidationError("domination fit needs frames");

  // One pass per frame, recording the log ratio at every n.  The cs norms at
  // all intermediate horizons come from a forward product re-anchored to the
  // sweep frames, so no quantity is ever pushed against its stable direction.
  std::vector<double> sup(horizon + 1, -std::numeric_limits<double>::infinity());
  for (const auto& frame : frames) {
    const int dim_cs = static_cast<int>(frame.cs_basis.cols());
    EstimateOptions opts;
    std::vector<double> cs_log_norm(horizon + 1, 0.0);
    bool swept = true;
    try {
      CsOrbitFrames sweep =
          cs_frames_along(f, frame.base, dim_cs, horizon, opts);
      RestrictedCocycle anchored(sweep.frames[0]);
      for (int n = 1; n <= horizon; ++n) {
        anchored.push_anchored(f.jacobian(sweep.orbit[n - 1]),
                               sweep.frames[n]);
        cs_log_norm[n] = anchored.log_norm();
      }
    } catch (const NoConvergenceError&) {
      swept = false;  // no invariant cs bundle: direct push is conditioned
    }
    RestrictedCocycle cs(frame.cs_basis), cu(frame.cu_basis);
    TorusPoint p = frame.base;
    for (int n = 1; n <= horizon; ++n) {
      const Mat jac = f.jacobian(p);
      if (!swept) cs.push(jac);
      cu.push(jac);
      p = f.forward(p);
      double cs_norm = swept ? cs_log_norm[n] : cs.log_norm();
      sup[n] = std::max(sup[n], cs_norm - cu.log_sigma_min());
    }
  }

  double sn = 0, sy = 0, snn = 0, sny = 0;
  for (int n = 1; n <= horizon; ++n) {
    sn += n;
    sy += sup[n];
    snn += double(n) * n;
    sny += n * sup[n];
  }
  const double m = horizon;
  double slope = (m * sny - sn * sy) / (m * snn - sn * sn);
  double intercept = (sy - slope * sn) / m;
  double ss = 0;
  for (int n = 1; n <= horizon; ++n) {
    double r = sup[n] - (intercept + slope * n);
    ss += r * r;
  }
  DominationEstimate est;
  est.constant = std::exp(intercept);
  est.rate = std::exp(slope);
  est.fit_residual = std::sqrt(ss / m);
  est.horizon = horizon;
  est.dominated = est.rate < 1.0 - 1e-6 && est.fit_residual <= flag_threshold;
  return est;
}

}  // namespace domlab
