#include "domlab/disk.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <map>
#include <queue>
#include <set>
#include <sstream>

namespace domlab {

namespace {

constexpr double kPi = 3.14159265358979323846;

Vec map_vertex(const Disk& disk, int i) { return disk.vertex(i); }

double edge_length(const Disk& disk, int a, int b) {
  return (disk.vertex(a) - disk.vertex(b)).norm();
}

bool tracking_params(const Disk& disk) {
  return disk.seed_params.size() == disk.vertex_count() &&
         disk.seed_frame.size() > 0;
}

void append_vertex(Disk& disk, const Vec& pos) {
  for (int a = 0; a < disk.d; ++a) disk.coords.push_back(pos[a]);
}

// Chart point of the flat seed disk pushed through the full generation.
Vec push_from_seed(const TorusMap& f, const Disk& disk,
                   const std::array<double, 2>& param) {
  Vec p = disk.seed_base;
  for (int a = 0; a < disk.k; ++a) p += param[a] * disk.seed_frame.col(a);
  for (int g = 0; g < disk.generation; ++g) p = f.forward_lift(p);
  return p;
}

int insert_midpoint(const TorusMap& f, Disk& disk, int a, int b) {
  const bool tracked = tracking_params(disk);
  Vec pos;
  std::array<double, 2> pm{0.0, 0.0};
  if (tracked) {
    for (int c = 0; c < 2; ++c)
      pm[c] = 0.5 * (disk.seed_params[a][c] + disk.seed_params[b][c]);
    pos = push_from_seed(f, disk, pm);
  } else {
    pos = 0.5 * (map_vertex(disk, a) + map_vertex(disk, b));
  }
  int idx = static_cast<int>(disk.vertex_count());
  append_vertex(disk, pos);
  if (tracked) disk.seed_params.push_back(pm);
  return idx;
}

// Splits oversized edges until all fit under h_max.  A nonzero soft_cap
// aborts early (returning false) once the count crosses it, leaving the
// disk refinable-but-coarse for the caller to discard.
bool refine_polyline(const TorusMap& f, Disk& disk, const MeshLimits& limits,
                     std::size_t soft_cap = 0) {
  std::vector<std::size_t> work(disk.edges.size());
  for (std::size_t e = 0; e < work.size(); ++e) work[e] = e;
  while (!work.empty()) {
    std::size_t e = work.back();
    work.pop_back();
    int a = disk.edges[e][0], b = disk.edges[e][1];
    if (edge_length(disk, a, b) <= disk.h_max) continue;
    if (disk.vertex_count() >= limits.vertex_cap)
      throw MeshBlowup("refinement exceeded the vertex cap");
    if (soft_cap && disk.vertex_count() >= soft_cap) return false;
    int mid = insert_midpoint(f, disk, a, b);
    disk.edges[e] = {a, mid};
    disk.edges.push_back({mid, b});
    work.push_back(e);
    work.push_back(disk.edges.size() - 1);
  }
  return true;
}

std::pair<int, int> ordered(int a, int b) {
  return a < b ? std::pair<int, int>{a, b} : std::pair<int, int>{b, a};
}

void rebuild_boundary_loop(Disk& disk) {
  std::set<std::pair<int, int>> directed;
  for (const auto& t : disk.triangles) {
    directed.insert({t[0], t[1]});
    directed.insert({t[1], t[2]});
    directed.insert({t[2], t[0]});
  }
  std::map<int, int> next;
  for (const auto& e : directed)
    if (!directed.count({e.second, e.first})) {
      if (next.count(e.first))
        throw ValidationError("boundary is not a manifold loop");
      next[e.first] = e.second;
    }
  if (next.empty()) throw ValidationError("mesh has no boundary");
  disk.boundary.clear();
  int start = next.begin()->first;
  int v = start;
  do {
    disk.boundary.push_back(v);
    auto it = next.find(v);
    if (it == next.end())
      throw ValidationError("boundary walk left the loop");
    v = it->second;
  } while (v != start && disk.boundary.size() <= next.size());
  if (disk.boundary.size() != next.size())
    throw ValidationError("boundary is not a single loop");
}

bool refine_mesh(const TorusMap& f, Disk& disk, const MeshLimits& limits,
                 std::size_t soft_cap = 0) {
  while (true) {
    std::map<std::pair<int, int>, int> mid;
    for (const auto& t : disk.triangles)
      for (int c = 0; c < 3; ++c) {
        auto key = ordered(t[c], t[(c + 1) % 3]);
        if (!mid.count(key) &&
            edge_length(disk, key.first, key.second) > disk.h_max)
          mid[key] = -1;
      }
    if (mid.empty()) break;
    if (disk.vertex_count() + mid.size() > limits.vertex_cap)
      throw MeshBlowup("refinement exceeded the vertex cap");
    if (soft_cap && disk.vertex_count() + mid.size() > soft_cap) return false;
    for (auto& entry : mid)
      entry.second = insert_midpoint(f, disk, entry.first.first, entry.first.second);

    std::vector<std::array<int, 3>> next_tris;
    next_tris.reserve(disk.triangles.size() * 2);
    for (const auto& t : disk.triangles) {
      int m[3];
      int count = 0;
      for (int c = 0; c < 3; ++c) {
        auto it = mid.find(ordered(t[c], t[(c + 1) % 3]));
        m[c] = it == mid.end() ? -1 : it->second;
        if (m[c] >= 0) ++count;
      }
      // Rotate so the split pattern is canonical: count==1 -> edge 0 split,
      // count==2 -> edges 0 and 1 split.
      int v[3] = {t[0], t[1], t[2]};
      auto rotate = [&](int r) {
        int vv[3] = {v[r % 3], v[(r + 1) % 3], v[(r + 2) % 3]};
        int mm[3] = {m[r % 3], m[(r + 1) % 3], m[(r + 2) % 3]};
        std::copy(vv, vv + 3, v);
        std::copy(mm, mm + 3, m);
      };
      if (count == 1) {
        if (m[1] >= 0) rotate(1);
        else if (m[2] >= 0) rotate(2);
      } else if (count == 2) {
        if (m[0] < 0) rotate(1);
        else if (m[1] < 0) rotate(2);
      }
      if (count == 0) {
        next_tris.push_back({v[0], v[1], v[2]});
      } else if (count == 1) {
        next_tris.push_back({v[0], m[0], v[2]});
        next_tris.push_back({m[0], v[1], v[2]});
      } else if (count == 2) {
        next_tris.push_back({m[0], v[1], m[1]});
        if (edge_length(disk, v[0], m[1]) <= edge_length(disk, m[0], v[2])) {
          next_tris.push_back({v[0], m[0], m[1]});
          next_tris.push_back({v[0], m[1], v[2]});
        } else {
          next_tris.push_back({v[0], m[0], v[2]});
          next_tris.push_back({m[0], m[1], v[2]});
        }
      } else {
        next_tris.push_back({v[0], m[0], m[2]});
        next_tris.push_back({m[0], v[1], m[1]});
        next_tris.push_back({m[2], m[1], v[2]});
        next_tris.push_back({m[0], m[1], m[2]});
      }
    }
    disk.triangles.swap(next_tris);
  }
  rebuild_boundary_loop(disk);
  return true;
}

// Chart-space mesh over the seed disk with m rings of spacing dr, embedded
// by pushing every chart point through the current generation.  Expects the
// vertex, simplex, and boundary containers to be empty.
void build_chart_mesh(const TorusMap& f, Disk& disk, int m, double dr) {
  if (disk.k == 1) {
    for (int i = 0; i <= 2 * m; ++i) {
      std::array<double, 2> p{(i - m) * dr, 0.0};
      disk.seed_params.push_back(p);
      append_vertex(disk, push_from_seed(f, disk, p));
    }
    for (int i = 0; i < 2 * m; ++i) disk.edges.push_back({i, i + 1});
    disk.boundary = {0, 2 * m};
    disk.basepoint = m;
    return;
  }

  disk.seed_params.push_back({0.0, 0.0});
  append_vertex(disk, push_from_seed(f, disk, {0.0, 0.0}));
  std::vector<int> ring_start{0};
  for (int j = 1; j <= m; ++j) {
    ring_start.push_back(static_cast<int>(disk.vertex_count()));
    const int nj = 6 * j;
    for (int i = 0; i < nj; ++i) {
      double ang = 2.0 * kPi * i / nj;
      std::array<double, 2> p{j * dr * std::cos(ang), j * dr * std::sin(ang)};
      disk.seed_params.push_back(p);
      append_vertex(disk, push_from_seed(f, disk, p));
    }
  }
  for (int i = 0; i < 6; ++i)
    disk.triangles.push_back({0, ring_start[1] + i, ring_start[1] + (i + 1) % 6});
  for (int j = 1; j < m; ++j) {
    const int ni = 6 * j, no = 6 * (j + 1);
    const int si = ring_start[j], so = ring_start[j + 1];
    int i = 0, o = 0;
    while (i < ni || o < no) {
      bool advance_inner;
      if (i == ni) advance_inner = false;
      else if (o == no) advance_inner = true;
      else advance_inner =
          static_cast<double>(i + 1) / ni <= static_cast<double>(o + 1) / no;
      if (advance_inner) {
        disk.triangles.push_back({si + i % ni, so + o % no, si + (i + 1) % ni});
        ++i;
      } else {
        disk.triangles.push_back({si + i % ni, so + o % no, so + (o + 1) % no});
        ++o;
      }
    }
  }
  for (int i = 0; i < 6 * m; ++i) disk.boundary.push_back(ring_start[m] + i);
  disk.basepoint = 0;
}

// Regenerates the embedded mesh from the chart at the current h_max: a
// chart mesh at the seed ring count (so the chart-space polygon, and with
// it the exact area and boundary bookkeeping, is preserved) plus refinement
// repopulates the disk at the new resolution.  Existing vertices are
// dropped, which is what makes the vertex budget bind across generations
// instead of ratcheting upward.  Returns false when refinement crossed the
// soft cap before finishing.
bool rebuild_from_chart(const TorusMap& f, Disk& disk,
                        const MeshLimits& limits, std::size_t soft_cap) {
  disk.coords.clear();
  disk.edges.clear();
  disk.triangles.clear();
  disk.boundary.clear();
  disk.seed_params.clear();
  int m = std::max(1, disk.seed_rings);
  if (disk.k == 2 && soft_cap > 0) {
    while (m > 1 &&
           static_cast<std::size_t>(1 + 3 * m * (m + 1)) > soft_cap / 2)
      m /= 2;
  }
  build_chart_mesh(f, disk, m, disk.seed_radius / m);
  return disk.k == 1 ? refine_polyline(f, disk, limits, soft_cap)
                     : refine_mesh(f, disk, limits, soft_cap);
}

// Refined vertex count predicted at the current h_max.  Midpoint
// subdivision is self-similar in chart space, so anisotropically stretched
// meshes refine as if they filled the isotropic disk over their diameter;
// the prediction therefore uses pi D^2 / 4 rather than the true area.
double predicted_refined(const Disk& disk) {
  if (disk.k == 1) return total_volume(disk) / disk.h_max;
  const std::size_t v = disk.vertex_count();
  if (v == 0) return 0.0;
  Vec lo = disk.vertex(0), hi = disk.vertex(0);
  for (std::size_t i = 1; i < v; ++i) {
    auto p = disk.vertex(static_cast<int>(i));
    lo = lo.cwiseMin(p);
    hi = hi.cwiseMax(p);
  }
  const double diam = (hi - lo).norm();
  const double area = std::max(total_volume(disk), kPi * diam * diam / 4.0);
  return 2.0 * area / (std::sqrt(3.0) * disk.h_max * disk.h_max) +
         boundary_measure(disk) / disk.h_max;
}

// Doubles the edge bounds until the predicted refined count fits the budget.
void coarsen_to_budget(Disk& disk, const MeshLimits& limits) {
  while (predicted_refined(disk) > static_cast<double>(limits.vertex_budget)) {
    disk.h_max *= 2.0;
    disk.h_min *= 2.0;
  }
}

std::vector<std::vector<std::pair<int, double>>> adjacency(const Disk& disk) {
  std::vector<std::vector<std::pair<int, double>>> adj(disk.vertex_count());
  for (const auto& e : edge_list(disk)) {
    double len = edge_length(disk, e[0], e[1]);
    adj[e[0]].push_back({e[1], len});
    adj[e[1]].push_back({e[0], len});
  }
  return adj;
}

std::vector<double> dijkstra(
    const std::vector<std::vector<std::pair<int, double>>>& adj,
    const std::vector<int>& sources, double cutoff) {
  std::vector<double> dist(adj.size(), std::numeric_limits<double>::infinity());
  using Item = std::pair<double, int>;
  std::priority_queue<Item, std::vector<Item>, std::greater<Item>> heap;
  for (int s : sources) {
    dist[s] = 0.0;
    heap.push({0.0, s});
  }
  while (!heap.empty()) {
    auto [du, u] = heap.top();
    heap.pop();
    if (du > dist[u]) continue;
    for (const auto& [v, w] : adj[u]) {
      double dv = du + w;
      if (dv < dist[v] && (cutoff <= 0.0 || dv <= cutoff)) {
        dist[v] = dv;
        heap.push({dv, v});
      }
    }
  }
  return dist;
}

double triangle_area(const Disk& disk, const std::array<int, 3>& t) {
  Vec u = disk.vertex(t[1]) - disk.vertex(t[0]);
  Vec v = disk.vertex(t[2]) - disk.vertex(t[0]);
  double g = u.squaredNorm() * v.squaredNorm() - std::pow(u.dot(v), 2);
  return 0.5 * std::sqrt(std::max(0.0, g));
}

// Minimum distance between segments [a0,a1] and [b0,b1] in R^d.
double segment_gap(const Vec& a0, const Vec& a1, const Vec& b0, const Vec& b1) {
  Vec u = a1 - a0, v = b1 - b0, w = a0 - b0;
  double A = u.dot(u), B = u.dot(v), C = v.dot(v), D = u.dot(w), E = v.dot(w);
  double den = A * C - B * B;
  double s, t;
  if (den > 1e-300) {
    s = std::clamp((B * E - C * D) / den, 0.0, 1.0);
  } else {
    s = 0.0;
  }
  t = C > 1e-300 ? std::clamp((B * s + E) / C, 0.0, 1.0) : 0.0;
  s = A > 1e-300 ? std::clamp((B * t - D) / A, 0.0, 1.0) : s;
  return (a0 + s * u - (b0 + t * v)).norm();
}

}  // namespace

Disk seed_disk(const TorusMap& f, const SplittingFrame& frame, double r0,
               double resolution) {
  const int k = static_cast<int>(frame.cu_basis.cols());
  const int d = f.dim();
  if (k > 2) throw ValidationError("unsupported-dimension: cu bundles above 2");
  if (k < 1) throw ValidationError("need a nonempty cu frame");
  if (frame.cu_basis.rows() != d)
    throw ValidationError("frame dimension does not match the map");
  if (!(r0 > 0.0) || r0 > 0.05)
    throw ValidationError("seed radius must lie in (0, 0.05]");
  if (!(resolution > 0.0) || resolution > r0)
    throw ValidationError("resolution must lie in (0, r0]");

  Disk disk;
  disk.k = k;
  disk.d = d;
  disk.seed_base = frame.base.coords();
  disk.seed_frame = frame.cu_basis;
  disk.seed_radius = r0;

  const int m = std::max(1, static_cast<int>(std::ceil(r0 / resolution - 1e-9)));
  const double dr = r0 / m;
  if (k == 1) {
    disk.h_max = dr * (1.0 + 1e-12);
  } else {
    disk.h_max = 1.5 * dr;
  }
  disk.h_min = disk.h_max / 2.0;
  disk.seed_rings = m;
  build_chart_mesh(f, disk, m, dr);
  return disk;
}

Disk iterate_disk(const TorusMap& f, const Disk& disk, int steps,
                  const MeshLimits& limits) {
  if (steps < 1) throw ValidationError("need steps >= 1");
  if (f.dim() != disk.d)
    throw ValidationError("map dimension does not match the disk");
  Disk out = disk;
  // Slack over the nominal budget absorbs boundary-heavy and anisotropic
  // meshes whose refined count overshoots the area prediction.
  const std::size_t slack =
      limits.vertex_budget + limits.vertex_budget / 2;
  for (int s = 0; s < steps; ++s) {
    for (std::size_t i = 0; i < out.vertex_count(); ++i) {
      Vec w = f.forward_lift(out.vertex(static_cast<int>(i)));
      for (int a = 0; a < out.d; ++a) out.coords[i * out.d + a] = w[a];
    }
    ++out.generation;
    const double h_before = out.h_max;
    coarsen_to_budget(out, limits);
    const bool rebuild =
        tracking_params(out) &&
        (out.h_max > h_before ||
         static_cast<double>(out.vertex_count()) + predicted_refined(out) >
             static_cast<double>(slack));
    if (rebuild) {
      int guard = 0;
      while (!rebuild_from_chart(f, out, limits, slack)) {
        if (++guard > 60)
          throw MeshBlowup("coarsening failed to meet the vertex budget");
        out.h_max *= 2.0;
        out.h_min *= 2.0;
      }
    } else if (out.k == 1) {
      refine_polyline(f, out, limits);
    } else {
      refine_mesh(f, out, limits);
    }
    if (out.vertex_count() > limits.vertex_cap)
      throw MeshBlowup("vertex cap exceeded");
  }
  return out;
}

std::vector<std::array<int, 2>> edge_list(const Disk& disk) {
  if (disk.k == 1) return disk.edges;
  std::vector<std::array<int, 2>> out;
  out.reserve(disk.triangles.size() * 3 / 2);
  for (const auto& t : disk.triangles)
    for (int c = 0; c < 3; ++c) {
      auto p = ordered(t[c], t[(c + 1) % 3]);
      out.push_back({p.first, p.second});
    }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

double total_volume(const Disk& disk) {
  double v = 0.0;
  if (disk.k == 1) {
    for (const auto& e : disk.edges) v += edge_length(disk, e[0], e[1]);
  } else {
    for (const auto& t : disk.triangles) v += triangle_area(disk, t);
  }
  return v;
}

double boundary_measure(const Disk& disk) {
  if (disk.k == 1) return 2.0;
  double len = 0.0;
  const std::size_t b = disk.boundary.size();
  for (std::size_t i = 0; i < b; ++i)
    len += edge_length(disk, disk.boundary[i], disk.boundary[(i + 1) % b]);
  return len;
}

std::vector<double> vertex_masses(const Disk& disk) {
  std::vector<double> mass(disk.vertex_count(), 0.0);
  if (disk.k == 1) {
    for (const auto& e : disk.edges) {
      double half = 0.5 * edge_length(disk, e[0], e[1]);
      mass[e[0]] += half;
      mass[e[1]] += half;
    }
  } else {
    for (const auto& t : disk.triangles) {
      double third = triangle_area(disk, t) / 3.0;
      for (int c = 0; c < 3; ++c) mass[t[c]] += third;
    }
  }
  return mass;
}

std::vector<double> boundary_masses(const Disk& disk) {
  if (disk.k == 1) return {1.0, 1.0};
  const std::size_t b = disk.boundary.size();
  std::vector<double> mass(b, 0.0);
  for (std::size_t i = 0; i < b; ++i) {
    double half =
        0.5 * edge_length(disk, disk.boundary[i], disk.boundary[(i + 1) % b]);
    mass[i] += half;
    mass[(i + 1) % b] += half;
  }
  return mass;
}

std::vector<double> intrinsic_distances(const Disk& disk, int source) {
  if (source < 0 || static_cast<std::size_t>(source) >= disk.vertex_count())
    throw ValidationError("source vertex out of range");
  return dijkstra(adjacency(disk), {source}, 0.0);
}

std::vector<double> boundary_distances(const Disk& disk, double cutoff) {
  return dijkstra(adjacency(disk), disk.boundary, cutoff);
}

void validate_disk(const Disk& disk, bool require_floor, bool check_simple) {
  if (disk.k != 1 && disk.k != 2)
    throw ValidationError("intrinsic dimension must be 1 or 2");
  if (disk.d < disk.k) throw ValidationError("ambient dimension too small");
  if (disk.d == 0 || disk.coords.size() % disk.d != 0)
    throw ValidationError("coordinate buffer does not match the dimension");
  const int v = static_cast<int>(disk.vertex_count());
  if (v < disk.k + 1) throw ValidationError("too few vertices");
  if (disk.basepoint < 0 || disk.basepoint >= v)
    throw ValidationError("basepoint out of range");
  auto check_index = [&](int i) {
    if (i < 0 || i >= v) throw ValidationError("simplex index out of range");
  };

  if (disk.k == 1) {
    if (disk.edges.empty()) throw ValidationError("polyline has no edges");
    std::vector<int> deg(v, 0);
    for (const auto& e : disk.edges) {
      check_index(e[0]);
      check_index(e[1]);
      if (e[0] == e[1]) throw ValidationError("degenerate edge");
      ++deg[e[0]];
      ++deg[e[1]];
    }
    std::vector<int> ends;
    for (int i = 0; i < v; ++i) {
      if (deg[i] == 1) ends.push_back(i);
      else if (deg[i] != 2)
        throw ValidationError("polyline vertex degree must be 1 or 2");
    }
    if (ends.size() != 2) throw ValidationError("polyline must have 2 endpoints");
    std::vector<int> bnd = disk.boundary, drv = ends;
    std::sort(bnd.begin(), bnd.end());
    std::sort(drv.begin(), drv.end());
    if (bnd != drv) throw ValidationError("stored boundary mismatches endpoints");
    auto adj = adjacency(disk);
    std::vector<char> seen(v, 0);
    int cur = ends[0], prev = -1, count = 1;
    seen[cur] = 1;
    while (true) {
      int nxt = -1;
      for (const auto& [u, w] : adj[cur])
        if (u != prev) nxt = u;
      if (nxt < 0) break;
      if (seen[nxt]) throw ValidationError("polyline revisits a vertex");
      seen[nxt] = 1;
      prev = cur;
      cur = nxt;
      ++count;
    }
    if (count != v) throw ValidationError("polyline is disconnected");
    if (check_simple) {
      for (std::size_t a = 0; a < disk.edges.size(); ++a)
        for (std::size_t b = a + 1; b < disk.edges.size(); ++b) {
          const auto &ea = disk.edges[a], &eb = disk.edges[b];
          if (ea[0] == eb[0] || ea[0] == eb[1] || ea[1] == eb[0] ||
              ea[1] == eb[1])
            continue;
          if (segment_gap(disk.vertex(ea[0]), disk.vertex(ea[1]),
                          disk.vertex(eb[0]), disk.vertex(eb[1])) < 1e-12)
            throw ValidationError("polyline self-intersects in the lift");
        }
    }
  } else {
    if (disk.triangles.empty()) throw ValidationError("mesh has no triangles");
    std::map<std::pair<int, int>, int> edge_use;
    for (const auto& t : disk.triangles) {
      for (int c = 0; c < 3; ++c) check_index(t[c]);
      if (t[0] == t[1] || t[1] == t[2] || t[0] == t[2])
        throw ValidationError("degenerate triangle");
      for (int c = 0; c < 3; ++c) ++edge_use[ordered(t[c], t[(c + 1) % 3])];
    }
    for (const auto& [e, uses] : edge_use)
      if (uses > 2)
        throw ValidationError("edge shared by more than two triangles");
    Disk probe = disk;
    rebuild_boundary_loop(probe);
    std::vector<int> bnd = disk.boundary, drv = probe.boundary;
    std::sort(bnd.begin(), bnd.end());
    std::sort(drv.begin(), drv.end());
    if (bnd != drv)
      throw ValidationError("stored boundary mismatches the mesh boundary");
  }

  for (const auto& e : edge_list(disk)) {
    double len = edge_length(disk, e[0], e[1]);
    if (len > disk.h_max * (1.0 + 1e-9))
      throw ValidationError("edge exceeds h_max");
    if (require_floor && len < disk.h_min * (1.0 - 1e-9))
      throw ValidationError("edge below h_min");
  }
}

void write_mesh(const Disk& disk, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ValidationError("cannot open mesh file for writing: " + path);
  out << std::setprecision(17);
  out << disk.k << ' ' << disk.d << ' ' << disk.vertex_count() << ' '
      << disk.simplex_count() << ' ' << disk.generation << '\n';
  for (std::size_t i = 0; i < disk.vertex_count(); ++i) {
    for (int a = 0; a < disk.d; ++a)
      out << (a ? " " : "") << disk.coords[i * disk.d + a];
    out << '\n';
  }
  if (disk.k == 1) {
    for (const auto& e : disk.edges) out << e[0] << ' ' << e[1] << '\n';
  } else {
    for (const auto& t : disk.triangles)
      out << t[0] << ' ' << t[1] << ' ' << t[2] << '\n';
  }
  out << "boundary " << disk.boundary.size() << '\n';
  for (int b : disk.boundary) out << b << '\n';
  out << "basepoint " << disk.basepoint << '\n';
  if (!out) throw ValidationError("failed writing mesh file: " + path);
}

Disk read_mesh(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open mesh file: " + path);
  Disk disk;
  std::size_t nv = 0, ns = 0;
  if (!(in >> disk.k >> disk.d >> nv >> ns >> disk.generation))
    throw ValidationError("malformed mesh header");
  if (disk.k != 1 && disk.k != 2)
    throw ValidationError("mesh dimension must be 1 or 2");
  disk.coords.resize(nv * disk.d);
  for (double& c : disk.coords)
    if (!(in >> c)) throw ValidationError("malformed vertex line");
  for (std::size_t s = 0; s < ns; ++s) {
    if (disk.k == 1) {
      std::array<int, 2> e{};
      if (!(in >> e[0] >> e[1])) throw ValidationError("malformed simplex line");
      disk.edges.push_back(e);
    } else {
      std::array<int, 3> t{};
      if (!(in >> t[0] >> t[1] >> t[2]))
        throw ValidationError("malformed simplex line");
      disk.triangles.push_back(t);
    }
  }
  std::string tag;
  std::size_t nb = 0;
  if (!(in >> tag >> nb) || tag != "boundary")
    throw ValidationError("missing boundary section");
  disk.boundary.resize(nb);
  for (int& b : disk.boundary)
    if (!(in >> b)) throw ValidationError("malformed boundary index");
  if (!(in >> tag >> disk.basepoint) || tag != "basepoint")
    throw ValidationError("missing basepoint line");

  double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
  for (const auto& e : edge_list(disk)) {
    double len = (disk.vertex(e[0]) - disk.vertex(e[1])).norm();
    lo = std::min(lo, len);
    hi = std::max(hi, len);
  }
  disk.h_max = hi * (1.0 + 1e-12);
  disk.h_min = std::min(lo, disk.h_max / 2.0);
  validate_disk(disk);
  return disk;
}

}  // namespace domlab
