#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "domlab/disk.hpp"
#include "domlab/rng.hpp"

namespace domlab {

// Per-vertex boundary visibility: theta(p) is the boundary measure within
// intrinsic distance delta of p (endpoint count on polylines, boundary
// arclength on meshes).
struct BoundaryVisibility {
  std::vector<double> theta;
  double delta = 0.0;
  double good_threshold = 0.0;
  double good_fraction = 0.0;   // m_D-weighted fraction with theta < threshold
  double boundary_total = 0.0;
  double geometry_bound = 0.0;  // K: max ball mass seen from a boundary vertex
};

BoundaryVisibility theta(const Disk& disk, double delta, double good_threshold);

// The visibility double sum evaluated in both orders, plus the geometry
// bound.  lhs integrates theta against m_D; identity_rhs integrates ball
// masses against the boundary measure.  Discretely these are the same sum of
// pair terms, so they agree to rounding, and lhs <= K * |m_boundary| holds
// term by term.
struct FubiniCheck {
  double lhs = 0.0;
  double rhs_bound = 0.0;
  double identity_rhs = 0.0;
  double geometry_bound = 0.0;
};

FubiniCheck fubini_check(const Disk& disk, double delta);

struct GrowthRow {
  int n = 0;
  double volume = 0.0;
  double boundary_measure = 0.0;
  double good_fraction = 0.0;
  double chebyshev_bound = 0.0;  // (K/h)|m_bnd|/|m_D|: bound on the bad fraction
  double geometry_bound = 0.0;
};

// Iterates the seed one generation at a time and reports the visibility
// statistics for n = 1..generations.  The Markov bound
// bad mass <= (K/threshold)|m_bnd| is re-checked on every generation and a
// violation beyond rounding throws NumericalError.
std::vector<GrowthRow> good_fraction_series(const TorusMap& f, const Disk& seed,
                                            double delta, double good_threshold,
                                            int generations,
                                            const MeshLimits& limits = {});

// Span at a vertex: the largest multiple of the dyadic resolution below the
// intrinsic distance to the boundary, capped at the chart-scale ceiling.
struct SpanEstimate {
  int vertex = 0;
  double span = 0.0;
  double resolution = 0.0;
  bool capped = false;
};

struct SpanSettings {
  int samples = 64;
  std::uint64_t seed = 0;
  double cap = 0.4;  // chart-scale ceiling on reported spans
  int levels = 10;   // resolution = cap / 2^levels
  MeshLimits limits;
};

SpanEstimate span_at(const Disk& disk, int vertex, double cap = 0.4,
                     int levels = 10);

struct SpanRow {
  int n = 0;
  SpanEstimate basepoint;
  std::vector<SpanEstimate> samples;  // at m_D-weighted random vertices
  double q25 = 0.0, q50 = 0.0, q75 = 0.0;
  double capped_fraction = 0.0;
};

std::vector<SpanRow> span_series(const TorusMap& f, const Disk& seed,
                                 int generations,
                                 const SpanSettings& settings = {});

// CSV with columns n,volume,boundary_measure,good_fraction,chebyshev_bound,
// span_q25,span_q50,span_q75; span columns stay empty for generations the
// span series does not cover.
void write_growth_csv(const std::string& path,
                      const std::vector<GrowthRow>& growth,
                      const std::vector<SpanRow>& spans);

}  // namespace domlab
