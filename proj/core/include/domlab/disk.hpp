#pragma once

#include <array>
#include <string>
#include <vector>

#include "domlab/errors.hpp"
#include "domlab/map.hpp"
#include "domlab/splitting.hpp"

namespace domlab {

// An embedded disk of intrinsic dimension k in {1, 2}: a polyline (k = 1) or
// a triangle mesh (k = 2) whose vertices live in lifted coordinates, so the
// geometry never sees mod-1 seams no matter how large the disk grows.
//
// Vertices remember their chart coordinates in the flat seed disk; midpoints
// inserted during refinement are corrected by mapping their seed-chart point
// forward through the full generation.  Disks loaded from a mesh file carry
// no chart, and refinement then falls back to raw embedded midpoints.
struct Disk {
  int k = 1;
  int d = 0;
  int generation = 0;

  // Edge-length window maintained by refinement.  h_max may grow over
  // generations when the vertex budget forces coarser resolution; edges are
  // kept at or below h_max always, while the h_min floor is guaranteed only
  // on freshly seeded disks.
  double h_min = 0.0;
  double h_max = 0.0;

  std::vector<double> coords;  // vertex_count * d lifted coordinates
  std::vector<std::array<int, 2>> edges;      // k = 1 simplices
  std::vector<std::array<int, 3>> triangles;  // k = 2 simplices
  std::vector<int> boundary;  // endpoint pair (k = 1) or boundary loop (k = 2)
  int basepoint = 0;

  Vec seed_base;
  Mat seed_frame;  // d x k orthonormal
  double seed_radius = 0.0;
  int seed_rings = 0;  // chart rings of the seed mesh, reused by rebuilds
  std::vector<std::array<double, 2>> seed_params;  // first k entries used

  std::size_t vertex_count() const { return d ? coords.size() / d : 0; }
  Eigen::Map<const Vec> vertex(int i) const {
    return Eigen::Map<const Vec>(coords.data() + static_cast<std::size_t>(i) * d, d);
  }
  std::size_t simplex_count() const {
    return k == 1 ? edges.size() : triangles.size();
  }
};

struct MeshLimits {
  // Soft target: refinement resolution coarsens (h_max doubles) until the
  // predicted vertex count fits.  Hard cap: exceeding it throws MeshBlowup.
  std::size_t vertex_budget = 200'000;
  std::size_t vertex_cap = 10'000'000;
};

// Flat round disk of intrinsic radius r0 centered at frame.base, tangent to
// frame.cu_basis, meshed with edge lengths near the given resolution.
// k = number of cu columns; only k = 1 and k = 2 are supported.
Disk seed_disk(const TorusMap& f, const SplittingFrame& frame, double r0,
               double resolution);

// Applies the lifted map vertex-wise one step at a time, refining after each
// step so every edge is at most h_max.  When the predicted vertex count
// would exceed the budget, h_max doubles and a chart-tracked disk is rebuilt
// from its chart at the coarser resolution, which keeps the budget binding
// across generations; disks without a chart only coarsen h_max, so their
// counts can ratchet upward with repeated refinement.
Disk iterate_disk(const TorusMap& f, const Disk& disk, int steps,
                  const MeshLimits& limits = {});

// Structural checks: index ranges, manifold-with-boundary combinatorics,
// boundary list consistency, edge-length ceiling.  The floor and polyline
// simplicity are opt-in, as they hold unconditionally only on seeds.
void validate_disk(const Disk& disk, bool require_floor = false,
                   bool check_simple = false);

// Unique undirected edges (the k = 1 list itself, or derived from triangles).
std::vector<std::array<int, 2>> edge_list(const Disk& disk);

double total_volume(const Disk& disk);     // length or area
double boundary_measure(const Disk& disk); // endpoint count or arclength

// Lumped vertex measures: half of the incident edge lengths (k = 1) or a
// third of the incident triangle areas (k = 2).  Sums to total_volume.
std::vector<double> vertex_masses(const Disk& disk);

// Weight per entry of disk.boundary: 1 for polyline endpoints, half of the
// incident boundary edge lengths on meshes.  Sums to boundary_measure.
std::vector<double> boundary_masses(const Disk& disk);

// Shortest-path distance from one vertex to all others along mesh edges.
std::vector<double> intrinsic_distances(const Disk& disk, int source);

// Distance to the nearest boundary vertex, truncated at cutoff (entries
// beyond it hold infinity).  cutoff <= 0 means no truncation.
std::vector<double> boundary_distances(const Disk& disk, double cutoff = 0.0);

// Plain-text mesh exchange: header "k d n_vertices n_simplices generation",
// vertex lines in full precision, simplex index lines, a "boundary m"
// section listing indices, and a final "basepoint i" line.
void write_mesh(const Disk& disk, const std::string& path);
Disk read_mesh(const std::string& path);

}  // namespace domlab
