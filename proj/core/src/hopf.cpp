#include "domlab/hopf.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <optional>

#include "domlab/errors.hpp"
#include "domlab/parallel.hpp"

namespace domlab {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// One directional Birkhoff sum.  The backward profile of f and the forward
// profile of the inverse view run this exact loop over the exact same lift
// arithmetic, which is what makes the time-reversal duality bitwise.
Vec direction_average(const TorusMap& g, const TorusPoint& x,
                      const ObservableBank& bank, long n) {
  Vec sums = Vec::Zero(static_cast<Eigen::Index>(bank.items.size()));
  TorusPoint p = x;
  for (long k = 0; k < n; ++k) {
    for (std::size_t j = 0; j < bank.items.size(); ++j)
      sums[static_cast<Eigen::Index>(j)] += bank.items[j].eval(p);
    p = g.forward(p);
  }
  return sums / static_cast<double>(n);
}

void check_bank(const TorusMap& f, const ObservableBank& bank) {
  if (bank.dim != f.dim())
    throw ValidationError("observable bank dimension does not match the map");
  if (bank.items.empty()) throw ValidationError("observable bank is empty");
  if (bank.items.size() < static_cast<std::size_t>(bank.dim))
    throw ValidationError("observable bank needs at least one item per dimension");
}

void check_horizon(long n, std::size_t orbit_cap) {
  if (n < 1000) throw ValidationError("need profile horizon n >= 1000");
  if (static_cast<std::size_t>(n) > orbit_cap)
    throw OrbitLengthExceeded("profile horizon exceeds orbit cap");
}

struct ConvergenceFit {
  bool converged = false;
  double rate = 0.0;
  double first_distance = 0.0;
  double min_distance = 0.0;
  double last_distance = 0.0;
};

// Distances d_k = d(f^k x, f^k y) for k = 0..horizon.  Convergence means
// the closest approach beats tol; the terminal distance is useless because
// per-step rounding is amplified along the unstable direction and pulls any
// truly converging pair back apart.  The rate fit runs over the decay
// segment only, cut three decades above the closest approach, where that
// noise floor is still negligible against the signal.
ConvergenceFit fit_convergence(const TorusMap& f, const TorusPoint& x,
                               const TorusPoint& y, int horizon, double tol) {
  ConvergenceFit fit;
  std::vector<double> dist(static_cast<std::size_t>(horizon) + 1);
  TorusPoint p = x;
  TorusPoint q = y;
  std::size_t argmin = 0;
  for (int k = 0; k <= horizon; ++k) {
    dist[k] = displacement(p, q).norm();
    if (dist[k] < dist[argmin]) argmin = k;
    if (k < horizon) {
      p = f.forward(p);
      q = f.forward(q);
    }
  }
  fit.first_distance = dist.front();
  fit.min_distance = dist[argmin];
  fit.last_distance = dist.back();
  fit.converged = fit.min_distance <= tol;
  std::size_t cut = fit.converged ? argmin : dist.size() - 1;
  double floor = fit.converged ? std::max(1e3 * fit.min_distance, 1e-14) : 1e-14;
  double sk = 0, sl = 0, skk = 0, skl = 0;
  int m = 0;
  for (std::size_t k = 0; k <= cut; ++k) {
    if (dist[k] <= floor) continue;
    double l = std::log(dist[k]);
    sk += static_cast<double>(k);
    sl += l;
    skk += static_cast<double>(k) * static_cast<double>(k);
    skl += static_cast<double>(k) * l;
    ++m;
  }
  double denom = m * skk - sk * sk;
  if (m >= 2 && denom > 0) fit.rate = (m * skl - sk * sl) / denom;
  return fit;
}

}  // namespace

ObservableBank default_bank(int dim) {
  if (dim < kMinDim || dim > kMaxDim)
    throw ValidationError("bank dimension must be 2, 3 or 4");
  ObservableBank bank;
  bank.dim = dim;
  for (int i = 0; i < dim; ++i) {
    std::string tag = "x" + std::to_string(i + 1);
    bank.items.push_back({"cos(2pi " + tag + ")", [i](const TorusPoint& p) {
                            return std::cos(kTwoPi * p[i]);
                          }});
    bank.items.push_back({"sin(2pi " + tag + ")", [i](const TorusPoint& p) {
                            return std::sin(kTwoPi * p[i]);
                          }});
  }
  for (int i = 0; i < dim; ++i)
    for (int j = i + 1; j < dim; ++j) {
      std::string name = "cos(2pi(x" + std::to_string(i + 1) + "+x" +
                         std::to_string(j + 1) + "))";
      bank.items.push_back({name, [i, j](const TorusPoint& p) {
                              return std::cos(kTwoPi * (p[i] + p[j]));
                            }});
    }
  return bank;
}

BirkhoffProfile profile(const TorusMap& f, const TorusPoint& x,
                        const ObservableBank& bank, long n,
                        std::size_t orbit_cap) {
  check_bank(f, bank);
  check_horizon(n, orbit_cap);
  if (x.dim() != f.dim())
    throw ValidationError("point dimension does not match the map");
  BirkhoffProfile prof{x, static_cast<int>(n), {}, {}};
  prof.forward = direction_average(f, x, bank, n);
  InverseTorusMap inv = inverse_view(f);
  prof.backward = direction_average(inv, x, bank, n);
  return prof;
}

std::vector<BirkhoffProfile> profiles_at(const TorusMap& f,
                                         const std::vector<TorusPoint>& points,
                                         const ObservableBank& bank, long n,
                                         int threads, std::size_t orbit_cap) {
  check_bank(f, bank);
  check_horizon(n, orbit_cap);
  std::vector<std::optional<BirkhoffProfile>> slots(points.size());
  parallel_for(points.size(), threads, [&](std::size_t i) {
    slots[i] = profile(f, points[i], bank, n, orbit_cap);
  });
  std::vector<BirkhoffProfile> out;
  out.reserve(points.size());
  for (auto& s : slots) out.push_back(std::move(*s));
  return out;
}

double profile_distance(const BirkhoffProfile& a, const BirkhoffProfile& b) {
  if (a.forward.size() != b.forward.size() ||
      a.backward.size() != b.backward.size())
    throw ValidationError("profiles do not share a bank");
  double d = (a.forward - b.forward).lpNorm<Eigen::Infinity>();
  return std::max(d, (a.backward - b.backward).lpNorm<Eigen::Infinity>());
}

ComponentClustering cluster_components(std::vector<BirkhoffProfile> profiles,
                                       double merge_radius) {
  ComponentClustering out;
  out.merge_radius = merge_radius;
  if (profiles.empty()) return out;
  for (const BirkhoffProfile& p : profiles)
    if (p.horizon != profiles.front().horizon ||
        p.forward.size() != profiles.front().forward.size() ||
        p.point.dim() != profiles.front().point.dim())
      throw ValidationError("profiles do not share a horizon and bank");
  std::sort(profiles.begin(), profiles.end(),
            [](const BirkhoffProfile& a, const BirkhoffProfile& b) {
              const Vec& u = a.point.coords();
              const Vec& v = b.point.coords();
              return std::lexicographical_compare(u.begin(), u.end(),
                                                  v.begin(), v.end());
            });
  out.profiles = std::move(profiles);
  out.assignment.resize(out.profiles.size());
  std::vector<int> counts;
  for (std::size_t i = 0; i < out.profiles.size(); ++i) {
    int cluster = -1;
    for (std::size_t c = 0; c < out.centers.size(); ++c)
      if (profile_distance(out.profiles[i], out.profiles[out.centers[c]]) <=
          merge_radius) {
        cluster = static_cast<int>(c);
        break;
      }
    if (cluster < 0) {
      cluster = static_cast<int>(out.centers.size());
      out.centers.push_back(static_cast<int>(i));
      counts.push_back(0);
    }
    out.assignment[i] = cluster;
    ++counts[cluster];
  }
  out.component_count = static_cast<int>(out.centers.size());
  out.fractions.reserve(counts.size());
  for (int c : counts)
    out.fractions.push_back(static_cast<double>(c) /
                            static_cast<double>(out.profiles.size()));
  return out;
}

TransferSummary stable_transfer_check(
    const TorusMap& f,
    const std::vector<std::pair<TorusPoint, TorusPoint>>& pairs,
    const ObservableBank& bank, const TransferSettings& settings) {
  check_bank(f, bank);
  check_horizon(settings.profile_horizon, settings.orbit_cap);
  if (settings.horizon_conv < 1)
    throw ValidationError("need convergence horizon >= 1");
  if (settings.transfer_tol <= 0)
    throw ValidationError("need transfer tolerance > 0");
  std::vector<std::optional<PairReport>> slots(pairs.size());
  parallel_for(pairs.size(), settings.threads, [&](std::size_t i) {
    PairReport rep{pairs[i].first, pairs[i].second};
    ConvergenceFit fit = fit_convergence(f, rep.x, rep.y,
                                         settings.horizon_conv,
                                         settings.converge_tol);
    rep.converged = fit.converged;
    rep.rate = fit.rate;
    rep.first_distance = fit.first_distance;
    rep.min_distance = fit.min_distance;
    rep.last_distance = fit.last_distance;
    if (rep.converged) {
      Vec px = direction_average(f, rep.x, bank, settings.profile_horizon);
      Vec py = direction_average(f, rep.y, bank, settings.profile_horizon);
      rep.profile_gap = (px - py).lpNorm<Eigen::Infinity>();
      rep.within_tolerance = rep.profile_gap <= settings.transfer_tol;
    }
    slots[i] = std::move(rep);
  });
  TransferSummary summary;
  summary.pairs.reserve(pairs.size());
  for (auto& s : slots) {
    PairReport& rep = *s;
    if (rep.converged) {
      ++summary.converging;
      if (rep.within_tolerance) ++summary.passing;
      summary.max_gap = std::max(summary.max_gap, rep.profile_gap);
    } else {
      ++summary.nonconverging;
    }
    summary.pairs.push_back(std::move(rep));
  }
  return summary;
}

std::vector<TorusPoint> stable_candidates(const TorusMap& f,
                                          const TorusPoint& x,
                                          const SplittingFrame& frame,
                                          int count, double t_scale,
                                          const TransferSettings& settings) {
  if (count < 1) throw ValidationError("need candidate count >= 1");
  if (t_scale <= 0) throw ValidationError("need t scale > 0");
  if (settings.horizon_conv < 1)
    throw ValidationError("need convergence horizon >= 1");
  const int k = static_cast<int>(frame.cs_basis.cols());
  if (k < 1 || frame.cs_basis.rows() != f.dim())
    throw ValidationError("frame does not match the map");
  std::vector<TorusPoint> out;
  for (int i = 0; i < count; ++i) {
    int col = i % k;
    double sign = (i / k) % 2 == 0 ? 1.0 : -1.0;
    double t = t_scale * (i + 1) / count;
    TorusPoint y(x.coords() + sign * t * frame.cs_basis.col(col));
    if (fit_convergence(f, x, y, settings.horizon_conv, settings.converge_tol)
            .converged)
      out.push_back(std::move(y));
  }
  return out;
}

}  // namespace domlab
