#include "domlab/lyapunov.hpp"

#include <cmath>
#include <string>

#include "domlab/parallel.hpp"

namespace domlab {

LyapunovEstimate finite_time_exponents(const TorusMap& f,
                                       const SplittingFrame& frame, int n,
                                       const EstimateOptions& opts) {
  if (n < 1) throw ValidationError("exponent horizon must be >= 1");
  const int dim_cs = static_cast<int>(frame.cs_basis.cols());
  CsOrbitFrames sweep = cs_frames_along(f, frame.base, dim_cs, n, opts);

  RestrictedCocycle cu(frame.cu_basis);
  for (int j = 0; j < n; ++j) cu.push(f.jacobian(sweep.orbit[j]));

  // Singular values of df^n|cs are the reciprocals of those of df^{-n}|cs.
  LyapunovEstimate est{frame.base, n, 0.0, 0.0, {}, {}};
  est.lambda_cs = -sweep.backward.log_sigma_min() / n;
  est.lambda_cu = cu.log_sigma_min() / n;
  std::vector<double> bwd = sweep.backward.log_singular_values();
  for (auto it = bwd.rbegin(); it != bwd.rend(); ++it)
    est.spectrum_cs.push_back(-*it / n);
  for (double v : cu.log_singular_values()) est.spectrum_cu.push_back(v / n);
  return est;
}

HyperbolicityVerdict classify_point(const LyapunovEstimate& est,
                                    double threshold) {
  double margin = std::min(-est.lambda_cs, est.lambda_cu);
  bool undecided = std::abs(margin) <= threshold;
  return {!undecided && margin > threshold, undecided, margin};
}

HyperbolicFraction classify_hyperbolic(const TorusMap& f, int dim_cu,
                                       int samples, int n, double threshold,
                                       std::uint64_t seed, int threads,
                                       const EstimateOptions& opts) {
  if (samples < 1) throw ValidationError("need at least one sample");
  const int d = f.dim();
  RngStream points(seed, "lyapunov.samples");
  RngStream frames(seed, "lyapunov.frames");

  std::vector<int> verdict(samples, 0);  // 1 hyperbolic, 0 undecided, -1 skip, 2 not
  parallel_for(samples, threads, [&](std::size_t i) {
    Vec c(d);
    for (int a = 0; a < d; ++a)
      c[a] = points.uniform(static_cast<std::uint64_t>(i) * d + a);
    try {
      SplittingFrame frame =
          estimate_splitting(f, TorusPoint(c), dim_cu, opts, frames.derive(i));
      HyperbolicityVerdict v =
          classify_point(finite_time_exponents(f, frame, n, opts), threshold);
      verdict[i] = v.hyperbolic ? 1 : (v.undecided ? 0 : 2);
    } catch (const NoConvergenceError&) {
      verdict[i] = -1;
    }
  });

  int hyp = 0, undec = 0, skip = 0;
  for (int v : verdict) {
    if (v == -1) ++skip;
    else if (v == 1) ++hyp;
    else if (v == 0) ++undec;
  }
  if (skip * 100 > samples)
    throw NoConvergenceError("bundle estimation failed at " +
                             std::to_string(skip) + "/" +
                             std::to_string(samples) + " sample points");
  int valid = samples - skip;
  return {valid ? double(hyp) / valid : 0.0, valid ? double(undec) / valid : 0.0,
          samples, skip};
}

double birkhoff_average(const TorusMap& f, const TorusPoint& x,
                        const std::function<double(const TorusPoint&)>& phi,
                        long n, Direction dir, std::size_t orbit_cap) {
  if (n < 1) throw ValidationError("birkhoff horizon must be >= 1");
  if (static_cast<std::size_t>(n) > orbit_cap)
    throw OrbitLengthExceeded("birkhoff horizon exceeds orbit cap");
  double sum = 0.0;
  TorusPoint p = x;
  for (long k = 0; k < n; ++k) {
    sum += phi(p);
    if (k + 1 < n)
      p = dir == Direction::forward ? f.forward(p) : f.inverse(p);
  }
  return sum / static_cast<double>(n);
}

}  // namespace domlab
