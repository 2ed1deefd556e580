#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <utility>
#include <vector>

#include "domlab/catalog.hpp"
#include "domlab/errors.hpp"
#include "domlab/hopf.hpp"
#include "domlab/map.hpp"
#include "domlab/rng.hpp"
#include "domlab/splitting.hpp"

using namespace domlab;

namespace {

TorusPoint pt2(double a, double b) {
  Vec c(2);
  c << a, b;
  return TorusPoint(c);
}

std::vector<TorusPoint> sample_points(int dim, int count, std::uint64_t seed) {
  RngStream rng(seed, "test.hopf.points");
  std::vector<TorusPoint> out;
  out.reserve(count);
  for (int i = 0; i < count; ++i) {
    Vec c(dim);
    for (int j = 0; j < dim; ++j)
      c[j] = rng.uniform(static_cast<std::uint64_t>(i) * dim + j);
    out.emplace_back(c);
  }
  return out;
}

int bank_index(const ObservableBank& bank, const std::string& name) {
  for (std::size_t j = 0; j < bank.items.size(); ++j)
    if (bank.items[j].name == name) return static_cast<int>(j);
  return -1;
}

double circle_gap(double a, double b) {
  double d = std::fabs(a - b);
  return std::min(d, 1.0 - d);
}

// Eigen directions of the doubled cat matrix, unit length.
Vec contracting_direction() {
  Vec v(2);
  v << 1.0, -(1.0 + std::sqrt(5.0)) / 2.0;
  return v / v.norm();
}

Vec expanding_direction() {
  Vec v(2);
  v << 1.0, (std::sqrt(5.0) - 1.0) / 2.0;
  return v / v.norm();
}

}  // namespace

TEST_CASE("the default bank carries coordinates and their pair sums") {
  ObservableBank b2 = default_bank(2);
  CHECK(b2.dim == 2);
  REQUIRE(b2.items.size() == 5);
  CHECK(bank_index(b2, "cos(2pi x1)") == 0);
  CHECK(bank_index(b2, "sin(2pi x2)") == 3);
  CHECK(bank_index(b2, "cos(2pi(x1+x2))") == 4);
  TorusPoint q = pt2(0.25, 0.5);
  CHECK(std::abs(b2.items[0].eval(q)) <= 1e-15);
  CHECK(b2.items[1].eval(q) == 1.0);
  CHECK(b2.items[2].eval(q) == std::cos(2.0 * 3.14159265358979323846 * 0.5));

  ObservableBank b3 = default_bank(3);
  CHECK(b3.items.size() == 9);
  ObservableBank b4 = default_bank(4);
  CHECK(b4.items.size() == 14);
  CHECK_THROWS_AS(default_bank(1), ValidationError);
  CHECK_THROWS_AS(default_bank(5), ValidationError);
}

TEST_CASE("profiles at a fixed point reduce to pointwise values") {
  MapPtr f = make_system("cat2", {});
  ObservableBank bank = default_bank(2);
  TorusPoint origin = pt2(0.0, 0.0);
  BirkhoffProfile prof = profile(*f, origin, bank, 1000);
  CHECK(prof.horizon == 1000);
  for (std::size_t j = 0; j < bank.items.size(); ++j) {
    CHECK(prof.forward[j] == bank.items[j].eval(origin));
    CHECK(prof.backward[j] == bank.items[j].eval(origin));
  }
}

TEST_CASE("long averages of mean-zero observables vanish on the cat map") {
  MapPtr f = make_system("cat2", {});
  ObservableBank bank = default_bank(2);
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    RngStream rng(seed, "test.hopf.meanzero");
    TorusPoint x = pt2(rng.uniform(0), rng.uniform(1));
    BirkhoffProfile prof = profile(*f, x, bank, 100000);
    CHECK(prof.forward.cwiseAbs().maxCoeff() <= 3e-2);
    CHECK(prof.backward.cwiseAbs().maxCoeff() <= 3e-2);
  }
}

TEST_CASE("the frozen coordinate shows through the product profile") {
  MapPtr f = make_system("cat2xid", {});
  ObservableBank bank = default_bank(3);
  const double z = 0.37;
  Vec c(3);
  c << 0.3, 0.7, z;
  BirkhoffProfile prof = profile(*f, TorusPoint(c), bank, 20000);
  int jc = bank_index(bank, "cos(2pi x3)");
  int js = bank_index(bank, "sin(2pi x3)");
  REQUIRE(jc >= 0);
  REQUIRE(js >= 0);
  const double two_pi = 2.0 * 3.14159265358979323846;
  // The third coordinate never moves, so its averages are the pointwise
  // values up to summation rounding, identically in both time directions.
  CHECK(std::abs(prof.forward[jc] - std::cos(two_pi * z)) <= 1e-10);
  CHECK(std::abs(prof.forward[js] - std::sin(two_pi * z)) <= 1e-10);
  CHECK(prof.forward[jc] == prof.backward[jc]);
  CHECK(prof.forward[js] == prof.backward[js]);
}

TEST_CASE("backward profiles are forward profiles of the inverse") {
  MapPtr f = make_system("cat2", {});
  ObservableBank bank = default_bank(2);
  TorusPoint x = pt2(0.31, 0.64);
  BirkhoffProfile direct = profile(*f, x, bank, 2000);
  InverseTorusMap inv = inverse_view(*f);
  BirkhoffProfile reversed = profile(inv, x, bank, 2000);
  for (int j = 0; j < direct.forward.size(); ++j) {
    CHECK(direct.backward[j] == reversed.forward[j]);
    CHECK(direct.forward[j] == reversed.backward[j]);
  }
}

TEST_CASE("profile horizons and banks are validated") {
  MapPtr f = make_system("cat2", {});
  ObservableBank bank = default_bank(2);
  TorusPoint x = pt2(0.1, 0.2);
  CHECK_THROWS_AS(profile(*f, x, bank, 999), ValidationError);
  CHECK_THROWS_AS(profile(*f, x, bank, 2000, 1500), OrbitLengthExceeded);
  CHECK_THROWS_AS(profile(*f, x, default_bank(3), 1000), ValidationError);
  ObservableBank empty{2, {}};
  CHECK_THROWS_AS(profile(*f, x, empty, 1000), ValidationError);
  ObservableBank thin{2, {{"one", [](const TorusPoint&) { return 1.0; }}}};
  CHECK_THROWS_AS(profile(*f, x, thin, 1000), ValidationError);
}

TEST_CASE("greedy clustering honors its radius invariants") {
  MapPtr f = make_system("cat2", {});
  ObservableBank bank = default_bank(2);
  std::vector<TorusPoint> pts = sample_points(2, 60, 11);
  std::vector<BirkhoffProfile> profs = profiles_at(*f, pts, bank, 5000, 4);
  ComponentClustering cl = cluster_components(profs, 0.3);
  REQUIRE(cl.profiles.size() == profs.size());
  REQUIRE(cl.assignment.size() == profs.size());
  CHECK(cl.component_count == static_cast<int>(cl.centers.size()));
  CHECK(cl.merge_radius == 0.3);
  for (std::size_t i = 0; i < cl.profiles.size(); ++i) {
    int a = cl.assignment[i];
    REQUIRE(a >= 0);
    REQUIRE(a < cl.component_count);
    const BirkhoffProfile& center = cl.profiles[cl.centers[a]];
    CHECK(profile_distance(cl.profiles[i], center) <= 0.3);
  }
  for (std::size_t a = 0; a < cl.centers.size(); ++a)
    for (std::size_t b = a + 1; b < cl.centers.size(); ++b)
      CHECK(profile_distance(cl.profiles[cl.centers[a]],
                             cl.profiles[cl.centers[b]]) > 0.3);
  double total = 0.0;
  for (double frac : cl.fractions) total += frac;
  CHECK(std::abs(total - 1.0) <= 1e-12);

  // The sweep sorts by point coordinates, so input order cannot matter.
  std::vector<BirkhoffProfile> shuffled(profs.rbegin(), profs.rend());
  ComponentClustering again = cluster_components(shuffled, 0.3);
  CHECK(again.component_count == cl.component_count);
  REQUIRE(again.assignment.size() == cl.assignment.size());
  for (std::size_t i = 0; i < cl.assignment.size(); ++i)
    CHECK(again.assignment[i] == cl.assignment[i]);
}

TEST_CASE("the cat map looks like one ergodic component") {
  MapPtr f = make_system("cat2", {});
  ObservableBank bank = default_bank(2);
  std::vector<TorusPoint> pts = sample_points(2, 100, 7);
  std::vector<BirkhoffProfile> profs = profiles_at(*f, pts, bank, 50000, 8);
  ComponentClustering cl = cluster_components(profs, 0.1);
  CHECK(cl.component_count == 1);
  REQUIRE(cl.fractions.size() == 1);
  CHECK(cl.fractions[0] == 1.0);
}

TEST_CASE("invariant circles stratify the product map") {
  MapPtr f = make_system("cat2xid", {});
  ObservableBank bank = default_bank(3);
  std::vector<TorusPoint> pts = sample_points(3, 100, 9);
  std::vector<BirkhoffProfile> profs = profiles_at(*f, pts, bank, 20000, 8);
  ComponentClustering cl = cluster_components(profs, 0.05);
  CHECK(cl.component_count >= 10);
  // Joining a leader bounds the gap in cos and sin of the frozen coordinate,
  // which pins the third coordinates together on the circle.
  for (std::size_t i = 0; i < cl.profiles.size(); ++i) {
    const BirkhoffProfile& center = cl.profiles[cl.centers[cl.assignment[i]]];
    CHECK(circle_gap(cl.profiles[i].point[2], center.point[2]) <= 0.018);
  }

  ComponentClustering whole = cluster_components(profs, 2.0);
  CHECK(whole.component_count == 1);
}

TEST_CASE("cluster assignments survive a doubled horizon") {
  ObservableBank bank2 = default_bank(2);
  MapPtr f = make_system("cat2", {});
  std::vector<TorusPoint> pts2 = sample_points(2, 60, 13);
  ComponentClustering base =
      cluster_components(profiles_at(*f, pts2, bank2, 50000, 8), 0.1);
  ComponentClustering doubled =
      cluster_components(profiles_at(*f, pts2, bank2, 100000, 8), 0.1);
  REQUIRE(base.assignment.size() == doubled.assignment.size());
  for (std::size_t i = 0; i < base.assignment.size(); ++i)
    CHECK(base.assignment[i] == doubled.assignment[i]);

  ObservableBank bank3 = default_bank(3);
  MapPtr g = make_system("cat2xid", {});
  std::vector<TorusPoint> pts3 = sample_points(3, 100, 9);
  ComponentClustering cbase =
      cluster_components(profiles_at(*g, pts3, bank3, 20000, 8), 0.05);
  ComponentClustering cdoubled =
      cluster_components(profiles_at(*g, pts3, bank3, 40000, 8), 0.05);
  REQUIRE(cbase.assignment.size() == cdoubled.assignment.size());
  for (std::size_t i = 0; i < cbase.assignment.size(); ++i)
    CHECK(cbase.assignment[i] == cdoubled.assignment[i]);
}

TEST_CASE("mixed profiles are rejected by the clusterer") {
  MapPtr f = make_system("cat2", {});
  ObservableBank bank = default_bank(2);
  TorusPoint x = pt2(0.2, 0.9);
  std::vector<BirkhoffProfile> mixed = {profile(*f, x, bank, 1000),
                                        profile(*f, x, bank, 2000)};
  CHECK_THROWS_AS(cluster_components(mixed, 0.1), ValidationError);
  CHECK_THROWS_AS(cluster_components(mixed, 0.0), ValidationError);
  MapPtr g = make_system("cat2xid", {});
  BirkhoffProfile other =
      profile(*g, TorusPoint(Vec::Constant(3, 0.4)), default_bank(3), 1000);
  CHECK_THROWS_AS(profile_distance(mixed[0], other), ValidationError);
}

TEST_CASE("orbits along the contracting eigenvector funnel together") {
  MapPtr f = make_system("cat2", {});
  ObservableBank bank = default_bank(2);
  TorusPoint x = pt2(0.3, 0.7);
  TorusPoint y(x.coords() + 1e-4 * contracting_direction());
  TransferSettings settings;
  settings.profile_horizon = 20000;
  TransferSummary sum = stable_transfer_check(*f, {{x, y}}, bank, settings);
  REQUIRE(sum.pairs.size() == 1);
  const PairReport& rep = sum.pairs[0];
  CHECK(rep.converged);
  const double rate = std::log((3.0 - std::sqrt(5.0)) / 2.0);
  CHECK(std::abs(rep.rate - rate) <= 1e-6);
  CHECK(std::abs(rep.first_distance - 1e-4) <= 1e-9);
  CHECK(rep.min_distance <= 1e-8);
  // Rounding amplified along the unstable direction keeps the closest
  // approach strictly above zero and pulls the pair back apart afterwards.
  CHECK(rep.min_distance > 0.0);
  CHECK(rep.last_distance > rep.min_distance);
  CHECK(rep.within_tolerance);
  CHECK(rep.profile_gap >= 0.0);
  CHECK(rep.profile_gap <= 5e-2);
  CHECK(sum.converging == 1);
  CHECK(sum.nonconverging == 0);
  CHECK(sum.passing == 1);
  CHECK(sum.max_gap == rep.profile_gap);
}

TEST_CASE("a pair with itself is exactly degenerate") {
  MapPtr f = make_system("cat2", {});
  ObservableBank bank = default_bank(2);
  TorusPoint x = pt2(0.42, 0.17);
  TransferSettings settings;
  settings.profile_horizon = 1000;
  TransferSummary sum = stable_transfer_check(*f, {{x, x}}, bank, settings);
  const PairReport& rep = sum.pairs[0];
  CHECK(rep.converged);
  CHECK(rep.first_distance == 0.0);
  CHECK(rep.min_distance == 0.0);
  CHECK(rep.last_distance == 0.0);
  CHECK(rep.rate == 0.0);
  CHECK(rep.profile_gap == 0.0);
  CHECK(rep.within_tolerance);
}

TEST_CASE("expanding displacements never converge") {
  MapPtr f = make_system("cat2", {});
  ObservableBank bank = default_bank(2);
  TorusPoint x = pt2(0.3, 0.7);
  TorusPoint y(x.coords() + 1e-4 * expanding_direction());
  TransferSettings settings;
  settings.profile_horizon = 1000;
  TransferSummary sum = stable_transfer_check(*f, {{x, y}}, bank, settings);
  const PairReport& rep = sum.pairs[0];
  CHECK(!rep.converged);
  CHECK(rep.min_distance == rep.first_distance);
  CHECK(rep.min_distance >= 5e-5);
  CHECK(rep.rate > 0.0);
  CHECK(rep.profile_gap == -1.0);
  CHECK(!rep.within_tolerance);
  CHECK(sum.converging == 0);
  CHECK(sum.nonconverging == 1);
  CHECK(sum.passing == 0);
}

TEST_CASE("neutral displacements freeze at their offset") {
  MapPtr f = make_system("cat2xid", {});
  ObservableBank bank = default_bank(3);
  Vec c(3);
  c << 0.3, 0.7, 0.7;
  TorusPoint x(c);
  Vec shift = Vec::Zero(3);
  shift[2] = 1e-3;
  TorusPoint y(c + shift);
  TransferSettings settings;
  settings.profile_horizon = 1000;
  TransferSummary sum = stable_transfer_check(*f, {{x, y}}, bank, settings);
  const PairReport& rep = sum.pairs[0];
  CHECK(!rep.converged);
  // The chaotic block starts identical and the frozen one never moves, so
  // the orbit distance is the constant offset and the fitted slope is zero.
  CHECK(std::abs(rep.min_distance - 1e-3) <= 1e-12);
  CHECK(rep.last_distance == rep.first_distance);
  CHECK(rep.rate == 0.0);
}

TEST_CASE("every converging pair transfers its profile") {
  MapPtr f = make_system("cat2", {});
  ObservableBank bank = default_bank(2);
  TorusPoint x = pt2(0.3, 0.7);
  EstimateOptions opts;
  SplittingFrame frame = estimate_splitting(*f, x, 1, opts,
                                            RngStream(5, "test.hopf.frame"));
  TransferSettings settings;
  settings.profile_horizon = 20000;
  std::vector<TorusPoint> cands =
      stable_candidates(*f, x, frame, 8, 1e-3, settings);
  REQUIRE(cands.size() == 8);
  Vec contract = contracting_direction();
  std::vector<std::pair<TorusPoint, TorusPoint>> pairs;
  for (const TorusPoint& y : cands) {
    Vec d = y.coords() - x.coords();
    CHECK(d.norm() <= 1e-3 * (1.0 + 1e-9));
    CHECK(d.norm() > 0.0);
    CHECK((d - (d.dot(contract)) * contract).norm() <= 1e-9);
    pairs.emplace_back(x, y);
  }
  TransferSummary sum = stable_transfer_check(*f, pairs, bank, settings);
  CHECK(sum.converging == 8);
  CHECK(sum.nonconverging == 0);
  CHECK(sum.passing == 8);
  CHECK(sum.max_gap <= 5e-2);
  const double rate = std::log((3.0 - std::sqrt(5.0)) / 2.0);
  for (const PairReport& rep : sum.pairs) {
    CHECK(std::abs(rep.rate - rate) <= 1e-6);
    CHECK(rep.within_tolerance);
  }
}

TEST_CASE("nothing converges under the identity") {
  Eigen::VectorXi wave(2);
  wave << 0, 1;
  auto id = std::make_shared<ShearTorusMap>("flat", 2, 0, wave, 0.0);
  TorusPoint x = pt2(0.4, 0.9);
  SplittingFrame frame{x, Mat::Identity(2, 2).col(0),
                       Mat::Identity(2, 2).col(1), 1e-14, 1.5707963};
  TransferSettings settings;
  settings.profile_horizon = 1000;
  std::vector<TorusPoint> cands =
      stable_candidates(*id, x, frame, 6, 1e-3, settings);
  CHECK(cands.empty());
}

TEST_CASE("time reversal swaps the candidate directions") {
  MapPtr f = make_system("cat2", {});
  TorusPoint x = pt2(0.3, 0.7);
  EstimateOptions opts;
  SplittingFrame frame = estimate_splitting(*f, x, 1, opts,
                                            RngStream(5, "test.hopf.frame"));
  SplittingFrame reversed{frame.base, frame.cu_basis, frame.cs_basis,
                          frame.convergence_residual, frame.angle};
  InverseTorusMap inv = inverse_view(*f);
  TransferSettings settings;
  settings.profile_horizon = 1000;
  std::vector<TorusPoint> unstable =
      stable_candidates(inv, x, reversed, 4, 1e-3, settings);
  REQUIRE(unstable.size() == 4);
  Vec expand = expanding_direction();
  ObservableBank bank = default_bank(2);
  for (const TorusPoint& y : unstable) {
    Vec d = y.coords() - x.coords();
    CHECK((d - (d.dot(expand)) * expand).norm() <= 1e-9);
    TransferSummary forward = stable_transfer_check(*f, {{x, y}}, bank,
                                                    settings);
    CHECK(!forward.pairs[0].converged);
  }
}

TEST_CASE("transfer arguments are validated") {
  MapPtr f = make_system("cat2", {});
  ObservableBank bank = default_bank(2);
  TorusPoint x = pt2(0.3, 0.7);
  EstimateOptions opts;
  SplittingFrame frame = estimate_splitting(*f, x, 1, opts,
                                            RngStream(5, "test.hopf.frame"));
  TransferSettings bad;
  bad.horizon_conv = 0;
  CHECK_THROWS_AS(stable_transfer_check(*f, {{x, x}}, bank, bad),
                  ValidationError);
  bad = TransferSettings{};
  bad.transfer_tol = 0.0;
  CHECK_THROWS_AS(stable_transfer_check(*f, {{x, x}}, bank, bad),
                  ValidationError);
  CHECK_THROWS_AS(stable_candidates(*f, x, frame, 0, 1e-3), ValidationError);
  CHECK_THROWS_AS(stable_candidates(*f, x, frame, 4, 0.0), ValidationError);
  MapPtr g = make_system("cat2xid", {});
  CHECK_THROWS_AS(stable_candidates(*g, x, frame, 4, 1e-3), ValidationError);
}
