#pragma once

#include <string>
#include <vector>

#include "domlab/catalog.hpp"
#include "domlab/splitting.hpp"

namespace domlab {

// Which bundle carries the volume-growth test.  The cu side integrates the
// log determinant of df^n on E^cu; the cs side integrates the log determinant
// of df^{-n} on E^cs.  Either way the restricted cocycle runs along its
// expanding time direction, so the accumulation is stable.
enum class Side { cu, cs };

std::string side_name(Side side);

struct InflatabilitySettings {
  int samples = 10000;
  int grid_resolution = 0;  // 0: per-dimension default
  std::uint64_t seed = 0;
  int threads = 0;
  EstimateOptions estimate;
};

struct InflatabilityReport {
  Side side;
  int horizon;
  double lhs;             // volume-average of the pointwise log volume growth
  double standard_error;  // of lhs; floored, see check_inflatable
  double rhs;             // sup estimate of the codimension-one growth
  double margin;          // lhs - rhs
  bool inflatable;        // margin > 2 * standard_error
  int samples;
  int grid_resolution;
  int skipped;  // non-converged sample or grid points, quota 1%
};

// Pointwise log volume growth on the designated bundle:
// side cu: log|det df^n  restricted to E^cu(x)|
// side cs: log|det df^-n restricted to E^cs(x)|
double xi_n(const TorusMap& f, const SplittingFrame& frame, int n, Side side,
            std::size_t orbit_cap = kOrbitCap);

// Worst-case log growth of codimension-one volume inside the bundle: the log
// of the largest (k-1)-st exterior-power norm of the restricted cocycle over
// a uniform lattice.  Identically zero for one-dimensional bundles.
struct XiSupEstimate {
  double value;
  int grid_points;
  int skipped;
};
XiSupEstimate Xi_n(const TorusMap& f, int n, Side side, int grid_resolution,
                   int dim_bundle, const InflatabilitySettings& settings);

// Monte Carlo for the integral versus lattice-plus-samples max for the sup.
// Verdict requires the margin to clear twice the standard error; the error
// is floored at 1e-12 * (1 + |lhs|) so exact-integrand cases (linear maps)
// cannot assert a verdict from rounding noise alone.
InflatabilityReport check_inflatable(const TorusMap& f, Side side, int n,
                                     const InflatabilitySettings& settings);

// One shared pass per sample point covering every horizon in the list;
// horizons must be nonnegative and strictly increasing.
std::vector<InflatabilityReport> check_inflatable_scan(
    const TorusMap& f, Side side, const std::vector<int>& horizons,
    const InflatabilitySettings& settings);

struct BiInflatabilityReport {
  InflatabilityReport cs_side;
  InflatabilityReport cu_side;
  bool bi_inflatable;  // both margins clear their error bars
};
BiInflatabilityReport check_bi_inflatable(const TorusMap& f, int n_cs,
                                          int n_cu,
                                          const InflatabilitySettings& settings);

// Re-runs the check across a perturbation family (a catalog entry with an
// "eps" parameter).  Reports margin as a function of eps, the largest eps
// whose verdict is positive, and the largest observed finite-difference
// slope of the margin.
struct PerturbationSweep {
  Side side;
  int horizon;
  std::vector<double> epsilons;
  std::vector<InflatabilityReport> reports;
  double max_inflatable_eps;  // NaN when no epsilon verifies
  double lipschitz;           // max |margin'| between adjacent epsilons
  bool verdict_uniform;       // same verdict across the whole sweep
};
PerturbationSweep perturbation_sweep(const std::string& family_id,
                                     const std::vector<double>& epsilons,
                                     Side side, int n,
                                     const InflatabilitySettings& settings);

}  // namespace domlab
