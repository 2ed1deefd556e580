#pragma once

#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "domlab/map.hpp"
#include "domlab/splitting.hpp"

namespace domlab {

// Named continuous scalar on T^d with range inside [-1, 1].
struct Observable {
  std::string name;
  std::function<double(const TorusPoint&)> eval;
};

struct ObservableBank {
  int dim = 0;
  std::vector<Observable> items;
};

// cos/sin of every coordinate plus the pair cosines cos 2pi(x_i + x_j).
// All entries are mean-zero for Lebesgue, so ergodic averages tend to 0.
ObservableBank default_bank(int dim);

// Forward and backward Birkhoff averages of every bank observable over the
// orbit segment of length n through x.  The two directions are independent
// walks; the backward walk is literally the forward walk of the inverse
// view, so backward(f) == forward(f^{-1}) bitwise.
struct BirkhoffProfile {
  TorusPoint point;
  int horizon;
  Vec forward;
  Vec backward;
};

// Horizons below 1000 are rejected: shorter averages say nothing about the
// limit and every downstream tolerance assumes at least that much mixing.
BirkhoffProfile profile(const TorusMap& f, const TorusPoint& x,
                        const ObservableBank& bank, long n,
                        std::size_t orbit_cap = kOrbitCap);

std::vector<BirkhoffProfile> profiles_at(const TorusMap& f,
                                         const std::vector<TorusPoint>& points,
                                         const ObservableBank& bank, long n,
                                         int threads = 0,
                                         std::size_t orbit_cap = kOrbitCap);

// Sup distance over both direction vectors.
double profile_distance(const BirkhoffProfile& a, const BirkhoffProfile& b);

// Greedy leader clustering: profiles are sorted lexicographically by point
// coordinates, then swept once; a profile joins the first cluster whose
// leader is within merge_radius, else it becomes a new leader.  Every member
// is within merge_radius of its leader and leaders are pairwise farther than
// merge_radius apart.
struct ComponentClustering {
  std::vector<BirkhoffProfile> profiles;  // in sweep order
  std::vector<int> assignment;            // cluster id per profile
  std::vector<int> centers;               // profile index of each leader
  double merge_radius = 0.0;
  int component_count = 0;
  std::vector<double> fractions;          // sample share per cluster
};

ComponentClustering cluster_components(std::vector<BirkhoffProfile> profiles,
                                       double merge_radius);

// Convergence is judged by the closest approach of the two orbits, not the
// terminal distance: rounding noise injected at every step is amplified
// along the unstable direction, so even a pair on one stable leaf drifts
// back apart once the true separation falls under that floor.  The closest
// approach of a converging pair still undercuts converge_tol by orders of
// magnitude, while neutral or expanding pairs never get near it.
struct TransferSettings {
  long profile_horizon = 100000;  // n for the forward averages
  int horizon_conv = 30;          // steps of the pair-convergence test
  double converge_tol = 1e-8;     // closest-approach threshold
  double transfer_tol = 5e-2;     // asserted sup gap of forward profiles
  std::size_t orbit_cap = kOrbitCap;
  int threads = 0;
};

// One candidate stable pair.  rate is the least-squares slope of log d_k
// against k; for converging pairs the fit stops three decades above the
// closest approach so the unstable noise floor cannot bias it.  profile_gap
// is only measured for converging pairs and is -1 otherwise.
struct PairReport {
  TorusPoint x;
  TorusPoint y;
  bool converged = false;
  double rate = 0.0;
  double first_distance = 0.0;
  double min_distance = 0.0;
  double last_distance = 0.0;
  double profile_gap = -1.0;
  bool within_tolerance = false;
};

struct TransferSummary {
  std::vector<PairReport> pairs;
  int converging = 0;
  int nonconverging = 0;
  int passing = 0;     // converging pairs with gap <= transfer_tol
  double max_gap = 0.0;  // over converging pairs
};

// The Hopf mechanism check: pairs whose orbits approach must share forward
// averages.  Non-converging pairs are excluded from the gap assertion and
// only counted.
TransferSummary stable_transfer_check(
    const TorusMap& f,
    const std::vector<std::pair<TorusPoint, TorusPoint>>& pairs,
    const ObservableBank& bank, const TransferSettings& settings = {});

// Deterministic linear sampling along the estimated cs directions: points
// x + s * t * v with v cycling the cs columns, signs alternating by block
// and magnitudes increasing to t_scale, kept only when the orbit distance
// test of stable_transfer_check converges.  A surrogate for the local stable
// manifold, honest exactly because of the filter; may return nothing.
std::vector<TorusPoint> stable_candidates(const TorusMap& f,
                                          const TorusPoint& x,
                                          const SplittingFrame& frame,
                                          int count, double t_scale,
                                          const TransferSettings& settings = {});

}  // namespace domlab
