#pragma once

#include <functional>
#include <vector>

#include "domlab/map.hpp"
#include "domlab/splitting.hpp"

namespace domlab {

// Finite-time exponents at one point over one forward orbit segment.
// lambda_cs is the top growth rate on the cs bundle (negative when the bundle
// contracts); lambda_cu the bottom growth rate on the cu bundle (positive
// when every cu direction expands), i.e. minus the log norm of the inverted
// restricted cocycle.  Spectra are per-direction rates, descending.
struct LyapunovEstimate {
  TorusPoint base;
  int horizon;
  double lambda_cs;
  double lambda_cu;
  std::vector<double> spectrum_cs;
  std::vector<double> spectrum_cu;
};

// The cu side accumulates forward; the cs side comes from the backward sweep
// of cs_frames_along, whose endpoint estimate reuses opts.  Both sides cover
// the same forward orbit segment [x, f^n x], so the joint spectrum sums to
// the volume growth.
LyapunovEstimate finite_time_exponents(const TorusMap& f,
                                       const SplittingFrame& frame, int n,
                                       const EstimateOptions& opts = {});

// margin = min(-lambda_cs, lambda_cu); hyperbolic when margin > threshold,
// undecided when |margin| <= threshold.
struct HyperbolicityVerdict {
  bool hyperbolic;
  bool undecided;
  double margin;
};

HyperbolicityVerdict classify_point(const LyapunovEstimate& est,
                                    double threshold);

struct HyperbolicFraction {
  double fraction;            // hyperbolic share of valid samples
  double undecided_fraction;  // |margin| <= threshold share
  int samples;
  int skipped;  // bundle estimation failures, capped at 1% of samples
};

HyperbolicFraction classify_hyperbolic(const TorusMap& f, int dim_cu,
                                       int samples, int n, double threshold,
                                       std::uint64_t seed, int threads,
                                       const EstimateOptions& opts);

enum class Direction { forward, backward };

double birkhoff_average(const TorusMap& f, const TorusPoint& x,
                        const std::function<double(const TorusPoint&)>& phi,
                        long n, Direction dir,
                        std::size_t orbit_cap = kOrbitCap);

}  // namespace domlab
