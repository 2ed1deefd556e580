#pragma once

#include <vector>

#include "domlab/map.hpp"
#include "domlab/splitting.hpp"

namespace domlab {

// Constant cones around fitted axis subspaces that contain the estimated
// bundles over a uniform lattice.  Axes are the chordal Grassmannian means
// (top eigenvectors of the averaged projection matrices); the half angle is
// the largest observed deviation plus a safety margin, so every containment
// margin is at least that margin by construction.  Disjointness of the two
// cones is what certifies product structure.
struct ConefieldCertificate {
  Mat axis_cs;  // d x k_cs orthonormal
  Mat axis_cu;  // d x k_cu orthonormal
  double half_angle_cs = 0.0;
  double half_angle_cu = 0.0;
  double max_deviation_cs = 0.0;  // before the safety margin
  double max_deviation_cu = 0.0;
  std::vector<double> margins_cs;  // half angle minus per-point deviation
  std::vector<double> margins_cu;
  double axis_angle = 0.0;  // minimal principal angle between the axes
  double transversality_margin = 0.0;  // axis_angle - both half angles
  bool valid = false;
  int grid_points = 0;
};

struct ProductSettings {
  int dim_cs = 0;  // 0: complement of the catalog cu dimension
  int dim_cu = 0;  // 0: from the catalog by map name
  std::uint64_t seed = 0;
  int threads = 0;
  double safety_margin = 0.01;  // radians added to the fitted half angles
  double separation = 0.0;      // basepoint distance; 0: half the span
  double tolerance = 1e-6;      // proximity threshold counting as a hit
  EstimateOptions estimate;
};

// Bundle estimation failures on the lattice propagate; an invalid
// certificate is a result, not an error.
ConefieldCertificate fit_constant_cones(const TorusMap& f, int grid_resolution,
                                        const ProductSettings& settings = {});

// Chart-local intersection statistics: per trial, a flat cs-disk and a flat
// cu-disk of the given span are placed tangent to the estimated bundles at
// random basepoints at exactly the settings separation (uniform direction),
// and the pair counts as a hit when the disks come within the proximity
// tolerance.  Exact separation is the worst case inside the chart, and the
// reading under which spans below half the separation cannot hit at all.
// The disks are exact affine balls, so hits and misses are decided by a
// linear solve plus alternating projections, not by meshing.
struct IntersectionStats {
  int trials = 0;
  int hits = 0;
  double hit_rate = 0.0;
  double span = 0.0;
  double separation = 0.0;
  int dim_cs = 0;
  int dim_cu = 0;
  double max_param_fraction = 0.0;  // largest |disk parameter| / span on hits
  double min_miss_distance = 0.0;   // smallest disk distance on misses
  bool chart_local = true;  // the test never leaves one chart of the lift
};

// Spans above 0.4 are rejected: beyond that the flat tangent disk stops
// being an honest chart-local surrogate for an invariant disk.
IntersectionStats disk_intersection_test(const TorusMap& f, double span,
                                         int trials, std::uint64_t seed,
                                         const ProductSettings& settings = {});

// Largest basepoint separation at which a valid certificate forces every
// trial to hit: the solve parameter norm is bounded by separation over
// sqrt(1 - cos(angle between the disks)), and the cone geometry keeps that
// angle at least the transversality margin.  Zero for invalid certificates.
double admissible_separation(const ConefieldCertificate& certificate,
                             double span);

}  // namespace domlab
