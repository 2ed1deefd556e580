#include "domlab/diskgrowth.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <queue>

#include "domlab/errors.hpp"

namespace domlab {

namespace {

struct VisibilitySweep {
  std::vector<double> theta;      // per vertex
  std::vector<double> ball_mass;  // per boundary entry: m_D(B_delta(y))
  std::vector<double> vmass;
  std::vector<double> bmass;
  double geometry_bound = 0.0;
};

// One truncated Dijkstra per boundary vertex.  The distance buffer is shared
// across sources and only touched entries are reset, so the cost scales with
// the ball sizes, not the mesh size.
VisibilitySweep visibility_sweep(const Disk& disk, double delta) {
  if (!(delta > 0.0)) throw ValidationError("need delta > 0");
  VisibilitySweep sweep;
  sweep.vmass = vertex_masses(disk);
  sweep.bmass = boundary_masses(disk);
  const std::size_t v = disk.vertex_count();
  sweep.theta.assign(v, 0.0);
  sweep.ball_mass.assign(disk.boundary.size(), 0.0);

  std::vector<std::vector<std::pair<int, double>>> adj(v);
  for (const auto& e : edge_list(disk)) {
    double len = (disk.vertex(e[0]) - disk.vertex(e[1])).norm();
    adj[e[0]].push_back({e[1], len});
    adj[e[1]].push_back({e[0], len});
  }

  std::vector<double> dist(v, std::numeric_limits<double>::infinity());
  std::vector<int> touched;
  using Item = std::pair<double, int>;
  for (std::size_t bi = 0; bi < disk.boundary.size(); ++bi) {
    const int src = disk.boundary[bi];
    std::priority_queue<Item, std::vector<Item>, std::greater<Item>> heap;
    dist[src] = 0.0;
    touched.push_back(src);
    heap.push({0.0, src});
    while (!heap.empty()) {
      auto [du, u] = heap.top();
      heap.pop();
      if (du > dist[u]) continue;
      for (const auto& [w, len] : adj[u]) {
        double dw = du + len;
        if (dw <= delta && dw < dist[w]) {
          if (!std::isfinite(dist[w])) touched.push_back(w);
          dist[w] = dw;
          heap.push({dw, w});
        }
      }
    }
    for (int u : touched) {
      sweep.theta[u] += sweep.bmass[bi];
      sweep.ball_mass[bi] += sweep.vmass[u];
      dist[u] = std::numeric_limits<double>::infinity();
    }
    sweep.geometry_bound = std::max(sweep.geometry_bound, sweep.ball_mass[bi]);
    touched.clear();
  }
  return sweep;
}

}  // namespace

BoundaryVisibility theta(const Disk& disk, double delta, double good_threshold) {
  if (!(good_threshold > 0.0)) throw ValidationError("need good threshold > 0");
  VisibilitySweep sweep = visibility_sweep(disk, delta);
  BoundaryVisibility out;
  out.theta = std::move(sweep.theta);
  out.delta = delta;
  out.good_threshold = good_threshold;
  out.geometry_bound = sweep.geometry_bound;
  double total = 0.0, good = 0.0;
  for (std::size_t i = 0; i < out.theta.size(); ++i) {
    total += sweep.vmass[i];
    if (out.theta[i] < good_threshold) good += sweep.vmass[i];
  }
  out.good_fraction = total > 0.0 ? good / total : 0.0;
  for (double w : sweep.bmass) out.boundary_total += w;
  return out;
}

FubiniCheck fubini_check(const Disk& disk, double delta) {
  VisibilitySweep sweep = visibility_sweep(disk, delta);
  FubiniCheck out;
  out.geometry_bound = sweep.geometry_bound;
  for (std::size_t i = 0; i < sweep.theta.size(); ++i)
    out.lhs += sweep.vmass[i] * sweep.theta[i];
  double boundary_total = 0.0;
  for (std::size_t bi = 0; bi < sweep.ball_mass.size(); ++bi) {
    out.identity_rhs += sweep.bmass[bi] * sweep.ball_mass[bi];
    boundary_total += sweep.bmass[bi];
  }
  out.rhs_bound = sweep.geometry_bound * boundary_total;
  return out;
}

std::vector<GrowthRow> good_fraction_series(const TorusMap& f, const Disk& seed,
                                            double delta, double good_threshold,
                                            int generations,
                                            const MeshLimits& limits) {
  if (generations < 1) throw ValidationError("need generations >= 1");
  if (!(delta > 0.0)) throw ValidationError("need delta > 0");
  if (!(good_threshold > 0.0)) throw ValidationError("need good threshold > 0");
  std::vector<GrowthRow> rows;
  Disk cur = seed;
  for (int n = 1; n <= generations; ++n) {
    cur = iterate_disk(f, cur, 1, limits);
    VisibilitySweep sweep = visibility_sweep(cur, delta);
    GrowthRow row;
    row.n = cur.generation;
    row.geometry_bound = sweep.geometry_bound;
    double total = 0.0, bad = 0.0, boundary_total = 0.0;
    for (std::size_t i = 0; i < sweep.theta.size(); ++i) {
      total += sweep.vmass[i];
      if (sweep.theta[i] >= good_threshold) bad += sweep.vmass[i];
    }
    for (double w : sweep.bmass) boundary_total += w;
    row.volume = total;
    row.boundary_measure = boundary_total;
    row.good_fraction = total > 0.0 ? 1.0 - bad / total : 0.0;
    double bound_mass = sweep.geometry_bound / good_threshold * boundary_total;
    row.chebyshev_bound = total > 0.0 ? bound_mass / total : 0.0;
    if (bad > bound_mass * (1.0 + 1e-9) + 1e-12)
      throw NumericalError("bad mass exceeds the Chebyshev bound");
    rows.push_back(row);
  }
  return rows;
}

SpanEstimate span_at(const Disk& disk, int vertex, double cap, int levels) {
  if (vertex < 0 || static_cast<std::size_t>(vertex) >= disk.vertex_count())
    throw ValidationError("span vertex out of range");
  if (!(cap > 0.0) || levels < 1) throw ValidationError("bad span search");
  const double res = cap / static_cast<double>(1 << levels);
  std::vector<double> dist = boundary_distances(disk, cap + 2.0 * res);
  SpanEstimate est;
  est.vertex = vertex;
  est.resolution = res;
  double d = dist[vertex];
  est.capped = d >= cap;
  est.span = est.capped ? cap : res * std::floor(d / res);
  return est;
}

std::vector<SpanRow> span_series(const TorusMap& f, const Disk& seed,
                                 int generations,
                                 const SpanSettings& settings) {
  if (generations < 1) throw ValidationError("need generations >= 1");
  if (settings.samples < 1) throw ValidationError("need span samples >= 1");
  if (!(settings.cap > 0.0) || settings.levels < 1)
    throw ValidationError("bad span search");
  const double res = settings.cap / static_cast<double>(1 << settings.levels);
  RngStream rng(settings.seed, "diskgrowth.span");

  std::vector<SpanRow> rows;
  Disk cur = seed;
  for (int n = 1; n <= generations; ++n) {
    cur = iterate_disk(f, cur, 1, settings.limits);
    std::vector<double> dist =
        boundary_distances(cur, settings.cap + 2.0 * res);
    auto estimate = [&](int vertex) {
      SpanEstimate est;
      est.vertex = vertex;
      est.resolution = res;
      double d = dist[vertex];
      est.capped = d >= settings.cap;
      est.span = est.capped ? settings.cap : res * std::floor(d / res);
      return est;
    };

    SpanRow row;
    row.n = cur.generation;
    row.basepoint = estimate(cur.basepoint);

    std::vector<double> mass = vertex_masses(cur);
    std::vector<double> cum(mass.size());
    double total = 0.0;
    for (std::size_t i = 0; i < mass.size(); ++i) {
      total += mass[i];
      cum[i] = total;
    }
    RngStream draws = rng.derive(static_cast<std::uint64_t>(n));
    std::vector<double> spans;
    int capped = 0;
    for (int s = 0; s < settings.samples; ++s) {
      double u = draws.uniform(static_cast<std::size_t>(s)) * total;
      std::size_t idx =
          std::lower_bound(cum.begin(), cum.end(), u) - cum.begin();
      if (idx >= mass.size()) idx = mass.size() - 1;
      SpanEstimate est = estimate(static_cast<int>(idx));
      row.samples.push_back(est);
      spans.push_back(est.span);
      if (est.capped) ++capped;
    }
    std::sort(spans.begin(), spans.end());
    auto quantile = [&](double q) {
      return spans[static_cast<std::size_t>(
          std::floor(q * (spans.size() - 1)))];
    };
    row.q25 = quantile(0.25);
    row.q50 = quantile(0.50);
    row.q75 = quantile(0.75);
    row.capped_fraction =
        static_cast<double>(capped) / static_cast<double>(settings.samples);
    rows.push_back(row);
  }
  return rows;
}

void write_growth_csv(const std::string& path,
                      const std::vector<GrowthRow>& growth,
                      const std::vector<SpanRow>& spans) {
  std::ofstream out(path);
  if (!out) throw ValidationError("cannot open csv for writing: " + path);
  out << std::setprecision(17);
  out << "n,volume,boundary_measure,good_fraction,chebyshev_bound,"
         "span_q25,span_q50,span_q75\n";
  for (const GrowthRow& row : growth) {
    out << row.n << ',' << row.volume << ',' << row.boundary_measure << ','
        << row.good_fraction << ',' << row.chebyshev_bound;
    const SpanRow* match = nullptr;
    for (const SpanRow& s : spans)
      if (s.n == row.n) match = &s;
    if (match)
      out << ',' << match->q25 << ',' << match->q50 << ',' << match->q75;
    else
      out << ",,,";
    out << '\n';
  }
  if (!out) throw ValidationError("failed writing csv: " + path);
}

}  // namespace domlab
