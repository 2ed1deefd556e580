#include "domlab/product_structure.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <optional>
#include <vector>

#include "domlab/catalog.hpp"
#include "domlab/errors.hpp"
#include "domlab/parallel.hpp"
#include "domlab/rng.hpp"

namespace domlab {

namespace {

constexpr double kSpanCap = 0.4;

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

std::pair<int, int> bundle_dims(const TorusMap& f,
                                const ProductSettings& settings) {
  const int d = f.dim();
  int cu = settings.dim_cu;
  int cs = settings.dim_cs;
  if (cu == 0 && cs == 0) {
    cu = catalog_entry(f.name()).dim_cu;
    cs = d - cu;
  } else if (cu == 0) {
    cu = d - cs;
  } else if (cs == 0) {
    cs = d - cu;
  }
  if (cs < 1 || cu < 1 || cs + cu != d)
    throw ValidationError(
        "bundle dimensions must be positive and complementary");
  return {cs, cu};
}

// sin of the largest principal angle between span(basis) and span(axis),
// from the projection residual: stays fully accurate near zero where the
// cosine formulation would lose half the digits.
double subspace_deviation(const Mat& axis, const Mat& basis) {
  Mat resid = basis - axis * (axis.transpose() * basis);
  Eigen::JacobiSVD<Mat> svd(resid);
  double s = std::clamp(svd.singularValues()(0), 0.0, 1.0);
  return std::asin(s);
}

Mat top_subspace(const Mat& mean_projector, int k) {
  Eigen::SelfAdjointEigenSolver<Mat> es(mean_projector);
  return es.eigenvectors().rightCols(k);
}

// Orthogonal projection onto the affine ball {center + frame * t : |t| <= r}.
Vec project_disk(const Vec& point, const Vec& center, const Mat& frame,
                 double r) {
  Vec t = frame.transpose() * (point - center);
  double norm = t.norm();
  if (norm > r) t *= r / norm;
  return center + frame * t;
}

// Standard normal via Box-Muller on the counter-based stream.
double gaussian(const RngStream& rng, std::uint64_t index) {
  double u1 = 1.0 - rng.uniform(2 * index);
  double u2 = rng.uniform(2 * index + 1);
  return std::sqrt(-2.0 * std::log(u1)) *
         std::cos(2.0 * std::numbers::pi * u2);
}

}  // namespace

ConefieldCertificate fit_constant_cones(const TorusMap& f, int grid_resolution,
                                        const ProductSettings& settings) {
  if (grid_resolution < 1)
    throw ValidationError("need grid resolution >= 1");
  if (settings.safety_margin < 0)
    throw ValidationError("need safety margin >= 0");
  auto [k_cs, k_cu] = bundle_dims(f, settings);
  const int d = f.dim();
  const std::size_t points = lattice_size(d, grid_resolution);

  std::vector<SplittingFrame> frames;
  {
    std::vector<std::optional<SplittingFrame>> slots(points);
    RngStream grid_rng(settings.seed, "cones.grid");
    parallel_for(points, settings.threads, [&](std::size_t i) {
      slots[i] = estimate_splitting(f, lattice_point(d, grid_resolution, i),
                                    k_cu, settings.estimate,
                                    grid_rng.derive(i));
    });
    frames.reserve(points);
    for (auto& s : slots) frames.push_back(std::move(*s));
  }

  Mat mean_cs = Mat::Zero(d, d);
  Mat mean_cu = Mat::Zero(d, d);
  for (const SplittingFrame& fr : frames) {
    mean_cs += fr.cs_basis * fr.cs_basis.transpose();
    mean_cu += fr.cu_basis * fr.cu_basis.transpose();
  }
  mean_cs /= static_cast<double>(points);
  mean_cu /= static_cast<double>(points);

  ConefieldCertificate cert;
  cert.axis_cs = top_subspace(mean_cs, k_cs);
  cert.axis_cu = top_subspace(mean_cu, k_cu);
  cert.grid_points = static_cast<int>(points);
  cert.margins_cs.reserve(points);
  cert.margins_cu.reserve(points);
  for (const SplittingFrame& fr : frames) {
    cert.max_deviation_cs = std::max(
        cert.max_deviation_cs, subspace_deviation(cert.axis_cs, fr.cs_basis));
    cert.max_deviation_cu = std::max(
        cert.max_deviation_cu, subspace_deviation(cert.axis_cu, fr.cu_basis));
  }
  cert.half_angle_cs = cert.max_deviation_cs + settings.safety_margin;
  cert.half_angle_cu = cert.max_deviation_cu + settings.safety_margin;
  for (const SplittingFrame& fr : frames) {
    cert.margins_cs.push_back(cert.half_angle_cs -
                              subspace_deviation(cert.axis_cs, fr.cs_basis));
    cert.margins_cu.push_back(cert.half_angle_cu -
                              subspace_deviation(cert.axis_cu, fr.cu_basis));
  }

  Eigen::JacobiSVD<Mat> angles(cert.axis_cs.transpose() * cert.axis_cu);
  double cos_min = std::clamp(angles.singularValues()(0), 0.0, 1.0);
  cert.axis_angle = std::acos(cos_min);
  cert.transversality_margin =
      cert.axis_angle - cert.half_angle_cs - cert.half_angle_cu;
  bool contained = true;
  for (double m : cert.margins_cs) contained = contained && m > 0;
  for (double m : cert.margins_cu) contained = contained && m > 0;
  cert.valid = contained && cert.transversality_margin > 0;
  return cert;
}

IntersectionStats disk_intersection_test(const TorusMap& f, double span,
                                         int trials, std::uint64_t seed,
                                         const ProductSettings& settings) {
  auto [k_cs, k_cu] = bundle_dims(f, settings);
  if (k_cs > 2 || k_cu > 2)
    throw ValidationError("disk dimensions must be 1 or 2");
  if (!(span > 0) || span > kSpanCap)
    throw ValidationError("need span in (0, 0.4]");
  if (trials < 1) throw ValidationError("need trials >= 1");
  if (settings.tolerance <= 0)
    throw ValidationError("need proximity tolerance > 0");
  const double separation =
      settings.separation > 0 ? settings.separation : span / 2;
  if (separation > 2 * span)
    throw ValidationError(
        "basepoints must stay within one chart: separation <= 2 * span");

  const int d = f.dim();
  struct TrialOut {
    bool hit = false;
    double param_fraction = 0.0;
    double miss_distance = 0.0;
  };
  std::vector<TrialOut> slots(static_cast<std::size_t>(trials));
  RngStream base(seed, "product.disks");
  parallel_for(slots.size(), settings.threads, [&](std::size_t t) {
    RngStream st = base.derive(t);
    Vec c1(d);
    for (int j = 0; j < d; ++j) c1[j] = st.uniform(j);
    Vec dir(d);
    for (int j = 0; j < d; ++j)
      dir[j] = gaussian(st, static_cast<std::uint64_t>(d + j));
    double norm = dir.norm();
    if (norm < 1e-12) {
      dir.setZero();
      dir[0] = 1.0;
      norm = 1.0;
    }
    // Basepoints sit at the exact requested separation: the worst case within
    // the chart, and the only reading under which shrinking spans below half
    // the separation drives the hit rate to zero.
    Vec delta = dir * (separation / norm);

    TorusPoint p1(c1);
    TorusPoint p2(c1 + delta);
    SplittingFrame f1 =
        estimate_splitting(f, p1, k_cu, settings.estimate, st.derive(1));
    SplittingFrame f2 =
        estimate_splitting(f, p2, k_cu, settings.estimate, st.derive(2));
    const Mat& A1 = f1.cs_basis;
    const Mat& A2 = f2.cu_basis;

    Mat M(d, d);
    M.leftCols(k_cs) = A1;
    M.rightCols(k_cu) = -A2;
    Vec z = M.fullPivLu().solve(delta);
    double resid = (M * z - delta).norm();
    double u = z.head(k_cs).norm();
    double w = z.tail(k_cu).norm();
    TrialOut out;
    if (resid <= settings.tolerance && u <= span && w <= span) {
      out.hit = true;
      out.param_fraction = std::max(u, w) / span;
    } else {
      // Constrained closest pair between the two compact convex disks.
      Vec x = c1;
      Vec y = project_disk(x, delta, A2, span);  // D2 is centered at delta
      for (int it = 0; it < 256; ++it) {
        Vec xn = project_disk(y, Vec::Zero(d), A1, span);
        y = project_disk(xn, delta, A2, span);
        if ((xn - x).norm() < 1e-12) {
          x = xn;
          break;
        }
        x = xn;
      }
      double dist = (x - y).norm();
      out.hit = dist <= settings.tolerance;
      out.param_fraction = out.hit ? 1.0 : 0.0;
      out.miss_distance = dist;
    }
    slots[t] = out;
  });

  IntersectionStats stats;
  stats.trials = trials;
  stats.span = span;
  stats.separation = separation;
  stats.dim_cs = k_cs;
  stats.dim_cu = k_cu;
  double min_miss = std::numeric_limits<double>::max();
  bool any_miss = false;
  for (const TrialOut& out : slots) {
    if (out.hit) {
      ++stats.hits;
      stats.max_param_fraction =
          std::max(stats.max_param_fraction, out.param_fraction);
    } else {
      any_miss = true;
      min_miss = std::min(min_miss, out.miss_distance);
    }
  }
  stats.hit_rate = static_cast<double>(stats.hits) / trials;
  stats.min_miss_distance = any_miss ? min_miss : 0.0;
  return stats;
}

double admissible_separation(const ConefieldCertificate& certificate,
                             double span) {
  if (!(span > 0) || span > kSpanCap)
    throw ValidationError("need span in (0, 0.4]");
  if (!certificate.valid) return 0.0;
  double gamma = std::clamp(certificate.transversality_margin, 0.0,
                            std::numbers::pi / 2);
  return 0.9 * span * std::sqrt(1.0 - std::cos(gamma));
}

}  // namespace domlab
