#include "domlab/inflatability.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "domlab/catalog.hpp"
#include "domlab/config.hpp"
#include "domlab/parallel.hpp"
#include "domlab/rng.hpp"

namespace domlab {

namespace {

// Both sides run through the same engine against a directional view of the
// map: the cu side against f itself, the cs side against f^{-1}, whose cu
// bundle is E^cs.  All cocycles then accumulate along their expanding
// direction.
struct PointPass {
  bool ok = false;
  std::vector<double> log_det;       // per horizon
  std::vector<double> log_exterior;  // per horizon
};

PointPass run_point(const TorusMap& g, const TorusPoint& x, int dim,
                    const std::vector<int>& horizons,
                    const EstimateOptions& opts, const RngStream& rng) {
  PointPass pass;
  BundleEstimate bundle = estimate_cu(g, x, dim, opts, rng);
  RestrictedCocycle cocycle(bundle.basis);
  TorusPoint p = x;
  std::size_t next = 0;
  for (int step = 0; next < horizons.size(); ++step) {
    while (next < horizons.size() && horizons[next] == step) {
      pass.log_det.push_back(cocycle.log_det());
      pass.log_exterior.push_back(cocycle.log_exterior_norm());
      ++next;
    }
    if (next == horizons.size()) break;
    cocycle.push(g.jacobian(p));
    p = g.forward(p);
  }
  pass.ok = true;
  return pass;
}

void validate_horizons(const std::vector<int>& horizons) {
  if (horizons.empty()) throw ValidationError("need at least one horizon");
  for (std::size_t i = 0; i < horizons.size(); ++i) {
    if (horizons[i] < 0) throw ValidationError("horizons must be >= 0");
    if (i > 0 && horizons[i] <= horizons[i - 1])
      throw ValidationError("horizons must be strictly increasing");
  }
}

int bundle_dim(const TorusMap& f, Side side) {
  const CatalogEntry& entry = catalog_entry(f.name());
  return side == Side::cu ? entry.dim_cu : f.dim() - entry.dim_cu;
}

TorusPoint lattice_point(int d, int res, std::size_t flat) {
  Vec c(d);
  for (int a = 0; a < d; ++a) {
    c[a] = static_cast<double>(flat % res) / res;
    flat /= res;
  }
  return TorusPoint(c);
}

std::size_t lattice_size(int d, int res) {
  std::size_t n = 1;
  for (int a = 0; a < d; ++a) n *= res;
  return n;
}

}  // namespace

std::string side_name(Side side) { return side == Side::cu ? "cu" : "cs"; }

double xi_n(const TorusMap& f, const SplittingFrame& frame, int n, Side side,
            std::size_t orbit_cap) {
  if (n < 0) throw ValidationError("horizon must be >= 0");
  if (static_cast<std::size_t>(n) > orbit_cap)
    throw OrbitLengthExceeded("horizon exceeds orbit cap");
  InverseTorusMap inv = inverse_view(f);
  const TorusMap& g = side == Side::cu ? f : static_cast<const TorusMap&>(inv);
  RestrictedCocycle cocycle(side == Side::cu ? frame.cu_basis : frame.cs_basis);
  TorusPoint p = frame.base;
  for (int j = 0; j < n; ++j) {
    cocycle.push(g.jacobian(p));
    p = g.forward(p);
  }
  return cocycle.log_det();
}

XiSupEstimate Xi_n(const TorusMap& f, int n, Side side, int grid_resolution,
                   int dim_bundle, const InflatabilitySettings& settings) {
  if (n < 0) throw ValidationError("horizon must be >= 0");
  if (grid_resolution < 1)
    throw ValidationError("grid resolution must be >= 1");
  const int d = f.dim();
  InverseTorusMap inv = inverse_view(f);
  const TorusMap& g = side == Side::cu ? f : static_cast<const TorusMap&>(inv);
  const std::vector<int> horizons{n};
  const std::size_t points = lattice_size(d, grid_resolution);
  RngStream frames(settings.seed, "inflatability.grid_frames");

  std::vector<PointPass> slots(points);
  parallel_for(points, settings.threads, [&](std::size_t i) {
    try {
      slots[i] = run_point(g, lattice_point(d, grid_resolution, i), dim_bundle,
                           horizons, settings.estimate, frames.derive(i));
    } catch (const NoConvergenceError&) {
      slots[i].ok = false;
    }
  });

  XiSupEstimate est{-std::numeric_limits<double>::infinity(),
                    static_cast<int>(points), 0};
  for (const PointPass& pass : slots) {
    if (!pass.ok) {
      ++est.skipped;
      continue;
    }
    est.value = std::max(est.value, pass.log_exterior[0]);
  }
  if (static_cast<std::size_t>(est.skipped) * 100 > points)
    throw NoConvergenceError("bundle estimation failed on more than 1% of the "
                             "grid");
  return est;
}

std::vector<InflatabilityReport> check_inflatable_scan(
    const TorusMap& f, Side side, const std::vector<int>& horizons,
    const InflatabilitySettings& settings) {
  validate_horizons(horizons);
  if (settings.samples < 100) throw ValidationError("need samples >= 100");
  const int d = f.dim();
  const int dim = bundle_dim(f, side);
  const int res = settings.grid_resolution > 0 ? settings.grid_resolution
                                               : default_grid_resolution(d);
  InverseTorusMap inv = inverse_view(f);
  const TorusMap& g = side == Side::cu ? f : static_cast<const TorusMap&>(inv);

  const std::size_t samples = settings.samples;
  const std::size_t grid_points = lattice_size(d, res);
  RngStream points(settings.seed, "inflatability.samples");
  RngStream sample_frames(settings.seed, "inflatability.sample_frames");
  RngStream grid_frames(settings.seed, "inflatability.grid_frames");

  std::vector<PointPass> slots(samples + grid_points);
  parallel_for(samples + grid_points, settings.threads, [&](std::size_t i) {
    try {
      if (i < samples) {
        Vec c(d);
        for (int a = 0; a < d; ++a) c[a] = points.uniform(i * d + a);
        slots[i] = run_point(g, TorusPoint(c), dim, horizons,
                             settings.estimate, sample_frames.derive(i));
      } else {
        std::size_t j = i - samples;
        slots[i] = run_point(g, lattice_point(d, res, j), dim, horizons,
                             settings.estimate, grid_frames.derive(j));
      }
    } catch (const NoConvergenceError&) {
      slots[i].ok = false;
    }
  });

  int skipped = 0;
  for (const PointPass& pass : slots)
    if (!pass.ok) ++skipped;
  if (static_cast<std::size_t>(skipped) * 100 > slots.size())
    throw NoConvergenceError("bundle estimation failed on more than 1% of "
                             "sample and grid points");

  std::vector<InflatabilityReport> reports;
  for (std::size_t h = 0; h < horizons.size(); ++h) {
    double sum = 0.0;
    std::size_t ok_samples = 0;
    double sup = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < slots.size(); ++i) {
      if (!slots[i].ok) continue;
      if (i < samples) {
        sum += slots[i].log_det[h];
        ++ok_samples;
      }
      sup = std::max(sup, slots[i].log_exterior[h]);
    }
    const double lhs = sum / ok_samples;
    double ss = 0.0;
    for (std::size_t i = 0; i < samples; ++i) {
      if (!slots[i].ok) continue;
      double r = slots[i].log_det[h] - lhs;
      ss += r * r;
    }
    double se = ok_samples > 1
                    ? std::sqrt(ss / (ok_samples - 1) / ok_samples)
                    : 0.0;
    // A floor keeps exact integrands (linear maps, SE = 0) from certifying
    // strict inequalities out of rounding noise.
    se = std::max(se, 1e-12 * (1.0 + std::abs(lhs)));
    InflatabilityReport rep{side,
                            horizons[h],
                            lhs,
                            se,
                            sup,
                            lhs - sup,
                            lhs - sup > 2.0 * se,
                            static_cast<int>(samples),
                            res,
                            skipped};
    reports.push_back(rep);
  }
  return reports;
}

InflatabilityReport check_inflatable(const TorusMap& f, Side side, int n,
                                     const InflatabilitySettings& settings) {
  return check_inflatable_scan(f, side, {n}, settings).front();
}

BiInflatabilityReport check_bi_inflatable(const TorusMap& f, int n_cs,
                                          int n_cu,
                                          const InflatabilitySettings& settings) {
  BiInflatabilityReport rep{check_inflatable(f, Side::cs, n_cs, settings),
                            check_inflatable(f, Side::cu, n_cu, settings),
                            false};
  rep.bi_inflatable = rep.cs_side.inflatable && rep.cu_side.inflatable;
  return rep;
}

PerturbationSweep perturbation_sweep(const std::string& family_id,
                                     const std::vector<double>& epsilons,
                                     Side side, int n,
                                     const InflatabilitySettings& settings) {
  const CatalogEntry& entry = catalog_entry(family_id);
  bool has_eps = false;
  for (const ParamSpec& p : entry.params) has_eps |= p.name == "eps";
  if (!has_eps)
    throw ValidationError("system '" + family_id +
                          "' has no perturbation parameter 'eps'");
  if (epsilons.empty()) throw ValidationError("need at least one epsilon");
  for (std::size_t i = 1; i < epsilons.size(); ++i)
    if (epsilons[i] <= epsilons[i - 1])
      throw ValidationError("epsilons must be strictly increasing");

  PerturbationSweep sweep{side,
                          n,
                          epsilons,
                          {},
                          std::numeric_limits<double>::quiet_NaN(),
                          0.0,
                          true};
  for (double eps : epsilons) {
    MapPtr f = make_system(family_id, {{"eps", eps}});
    sweep.reports.push_back(check_inflatable(*f, side, n, settings));
    if (sweep.reports.back().inflatable) sweep.max_inflatable_eps = eps;
  }
  for (std::size_t i = 1; i < sweep.reports.size(); ++i) {
    double slope = std::abs(sweep.reports[i].margin - sweep.reports[i - 1].margin) /
                   (epsilons[i] - epsilons[i - 1]);
    sweep.lipschitz = std::max(sweep.lipschitz, slope);
    sweep.verdict_uniform &=
        sweep.reports[i].inflatable == sweep.reports.front().inflatable;
  }
  return sweep;
}

}  // namespace domlab
