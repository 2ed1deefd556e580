#include "doctest.h"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "domlab/catalog.hpp"
#include "domlab/disk.hpp"
#include "domlab/diskgrowth.hpp"
#include "domlab/inflatability.hpp"
#include "domlab/map.hpp"
#include "domlab/rng.hpp"
#include "domlab/splitting.hpp"

using namespace domlab;

namespace {

SplittingFrame frame_at(const TorusMap& f, double x0, double x1, int dim_cu,
                        std::uint64_t seed) {
  Vec c(f.dim());
  c.setZero();
  c[0] = x0;
  c[1] = x1;
  EstimateOptions opts;
  return estimate_splitting(f, TorusPoint(c), dim_cu, opts,
                            RngStream(seed, "test.growth.frame"));
}

// Unit segment [0,1] x {0} sampled at 101 vertices, spacing 0.01.
Disk unit_segment() {
  Disk d;
  d.k = 1;
  d.d = 2;
  d.h_max = 0.01 * (1.0 + 1e-12);
  d.h_min = d.h_max / 2.0;
  for (int i = 0; i <= 100; ++i) {
    d.coords.push_back(i * 0.01);
    d.coords.push_back(0.0);
  }
  for (int i = 0; i < 100; ++i) d.edges.push_back({i, i + 1});
  d.boundary = {0, 100};
  d.basepoint = 50;
  return d;
}

}  // namespace

TEST_CASE("boundary visibility matches the hand oracle on a segment") {
  Disk seg = unit_segment();
  BoundaryVisibility bv = theta(seg, 0.105, 0.5);
  CHECK(bv.delta == 0.105);
  CHECK(bv.good_threshold == 0.5);
  CHECK(bv.theta[50] == 0.0);
  CHECK(bv.theta[0] == 1.0);
  CHECK(bv.theta[5] == 1.0);
  CHECK(bv.theta[10] == 1.0);
  CHECK(bv.theta[11] == 0.0);
  CHECK(bv.boundary_total == 2.0);
  // Ball around an endpoint holds vertices 0..10: 0.005 + 10 * 0.01.
  CHECK(std::abs(bv.geometry_bound - 0.105) <= 1e-12);
  // Bad set: 11 vertices near each end, mass 0.105 per side out of 1.
  CHECK(std::abs(bv.good_fraction - 0.79) <= 1e-9);
}

TEST_CASE("the visibility double sum balances exactly on a segment") {
  Disk seg = unit_segment();
  FubiniCheck fc = fubini_check(seg, 0.105);
  CHECK(std::abs(fc.lhs - fc.identity_rhs) <= 1e-12);
  CHECK(std::abs(fc.lhs - 0.21) <= 1e-9);
  CHECK(std::abs(fc.rhs_bound - 0.21) <= 1e-9);
  CHECK(fc.lhs <= fc.rhs_bound + 1e-12);

  // Below the mesh spacing only the endpoints see themselves.
  FubiniCheck tiny = fubini_check(seg, 0.004);
  CHECK(std::abs(tiny.lhs - 0.01) <= 1e-12);
  CHECK(std::abs(tiny.geometry_bound - 0.005) <= 1e-15);
  CHECK(std::abs(tiny.lhs - tiny.identity_rhs) <= 1e-15);
}

TEST_CASE("the double sum balances on iterated disks") {
  MapPtr f = make_system("cat2", {});
  SplittingFrame fr = frame_at(*f, 0.31, 0.47, 1, 21);
  MeshLimits limits;
  limits.vertex_budget = 50'000;
  Disk line = iterate_disk(*f, seed_disk(*f, fr, 0.01, 1e-3), 10, limits);
  FubiniCheck fc = fubini_check(line, 0.05);
  CHECK(std::abs(fc.lhs - fc.identity_rhs) <= 1e-9 * (1.0 + std::abs(fc.lhs)));
  CHECK(fc.lhs <= fc.rhs_bound * (1.0 + 1e-12));
  CHECK(fc.geometry_bound > 0.0);

  MapPtr g = make_system("sym3", {});
  SplittingFrame fr2 = frame_at(*g, 0.12, 0.77, 2, 22);
  Disk sheet = iterate_disk(*g, seed_disk(*g, fr2, 0.02, 0.02 / 15.0), 3);
  FubiniCheck fc2 = fubini_check(sheet, 0.01);
  CHECK(std::abs(fc2.lhs - fc2.identity_rhs) <=
        1e-9 * (1.0 + std::abs(fc2.lhs)));
  CHECK(fc2.lhs <= fc2.rhs_bound * (1.0 + 1e-12));
}

TEST_CASE("good fractions climb toward one along expanding curves") {
  MapPtr f = make_system("cat2", {});
  const double lam = catalog_entry("cat2").fact("expansion_log");
  SplittingFrame fr = frame_at(*f, 0.52, 0.18, 1, 23);
  Disk seed = seed_disk(*f, fr, 0.01, 1e-3);
  std::vector<GrowthRow> rows = good_fraction_series(*f, seed, 0.05, 0.5, 12);
  REQUIRE(rows.size() == 12);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const GrowthRow& r = rows[i];
    CHECK(r.n == static_cast<int>(i) + 1);
    CHECK(r.boundary_measure == 2.0);
    double expect = 0.02 * std::exp(r.n * lam);
    CHECK(std::abs(r.volume - expect) <= 1e-6 * expect);
    CHECK(1.0 - r.good_fraction <= r.chebyshev_bound + 1e-12);
    double recheck = r.geometry_bound / 0.5 * r.boundary_measure / r.volume;
    CHECK(std::abs(r.chebyshev_bound - recheck) <= 1e-12 * (1.0 + recheck));
  }
  CHECK(rows.back().good_fraction >= 0.99);
  CHECK(rows.back().good_fraction >= rows.front().good_fraction);
}

TEST_CASE("span quantiles reach the chart cap on long curves") {
  MapPtr f = make_system("cat2", {});
  SplittingFrame fr = frame_at(*f, 0.52, 0.18, 1, 23);
  Disk seed = seed_disk(*f, fr, 0.01, 1e-3);

  SpanEstimate at_seed = span_at(seed, seed.basepoint);
  CHECK(!at_seed.capped);
  CHECK(at_seed.resolution == 0.4 / 1024.0);
  CHECK(at_seed.span <= 0.01 + 1e-15);
  CHECK(at_seed.span >= 0.01 - at_seed.resolution - 1e-12);

  SpanSettings settings;
  settings.samples = 32;
  settings.seed = 3;
  settings.limits.vertex_budget = 50'000;
  std::vector<SpanRow> rows = span_series(*f, seed, 12, settings);
  REQUIRE(rows.size() == 12);
  CHECK(rows.front().n == 1);
  CHECK(rows.front().q50 < 0.1);
  CHECK(rows.back().q50 == 0.4);
  CHECK(rows.back().basepoint.capped);
  CHECK(rows.back().capped_fraction >= 0.5);

  std::vector<SpanRow> again = span_series(*f, seed, 12, settings);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    CHECK(rows[i].q25 == again[i].q25);
    CHECK(rows[i].q50 == again[i].q50);
    CHECK(rows[i].q75 == again[i].q75);
    CHECK(rows[i].basepoint.span == again[i].basepoint.span);
    REQUIRE(rows[i].samples.size() == again[i].samples.size());
    for (std::size_t s = 0; s < rows[i].samples.size(); ++s) {
      CHECK(rows[i].samples[s].vertex == again[i].samples[s].vertex);
      CHECK(rows[i].samples[s].span == again[i].samples[s].span);
    }
  }
}

TEST_CASE("spans stay put under the identity") {
  Eigen::VectorXi wave(2);
  wave << 0, 1;
  auto id = std::make_shared<ShearTorusMap>("flat", 2, 0, wave, 0.0);
  Vec base(2);
  base << 0.4, 0.9;
  SplittingFrame fr{TorusPoint(base), Mat::Identity(2, 2).col(1),
                    Mat::Identity(2, 2).col(0), 1e-14, 1.5707963};
  Disk seed = seed_disk(*id, fr, 0.01, 1e-3);
  SpanSettings settings;
  settings.samples = 16;
  settings.seed = 5;
  std::vector<SpanRow> rows = span_series(*id, seed, 3, settings);
  REQUIRE(rows.size() == 3);
  for (const SpanRow& r : rows) {
    CHECK(r.capped_fraction == 0.0);
    CHECK(r.q50 >= 0.0);
    CHECK(r.q50 <= 0.01);
    CHECK(r.basepoint.span == rows.front().basepoint.span);
  }
}

TEST_CASE("growth tables serialize with stable columns") {
  MapPtr f = make_system("cat2", {});
  SplittingFrame fr = frame_at(*f, 0.71, 0.44, 1, 24);
  Disk seed = seed_disk(*f, fr, 0.01, 1e-3);
  std::vector<GrowthRow> growth = good_fraction_series(*f, seed, 0.02, 0.5, 3);
  SpanSettings settings;
  settings.samples = 8;
  settings.seed = 7;
  std::vector<SpanRow> spans = span_series(*f, seed, 2, settings);

  const std::string path = "/tmp/domlab_test_growth.csv";
  write_growth_csv(path, growth, spans);
  std::ifstream in(path);
  REQUIRE(in.good());
  std::string line;
  REQUIRE(std::getline(in, line));
  CHECK(line ==
        "n,volume,boundary_measure,good_fraction,chebyshev_bound,"
        "span_q25,span_q50,span_q75");
  std::vector<std::string> data;
  while (std::getline(in, line))
    if (!line.empty()) data.push_back(line);
  REQUIRE(data.size() == 3);
  for (const std::string& row : data) {
    long commas = std::count(row.begin(), row.end(), ',');
    CHECK(commas == 7);
  }
  CHECK(data[0].rfind("1,", 0) == 0);
  // The span series stops at n = 2, so the last row carries empty spans.
  CHECK(data[2].substr(data[2].size() - 3) == ",,,");
  CHECK(data[2].rfind("3,", 0) == 0);
  std::remove(path.c_str());
}

TEST_CASE("area outruns boundary on a genuinely two-dimensional bundle") {
  MapPtr f = make_system("sym3", {});
  const CatalogEntry& entry = catalog_entry("sym3");
  const double lg1 = entry.fact("expansion_log_1");
  const double lg2 = entry.fact("expansion_log_2");
  SplittingFrame fr = frame_at(*f, 0.26, 0.63, 2, 25);
  Disk seed = seed_disk(*f, fr, 0.02, 0.02 / 10.0);
  MeshLimits limits;
  limits.vertex_budget = 100'000;
  std::vector<GrowthRow> rows =
      good_fraction_series(*f, seed, 0.01, 0.5, 8, limits);
  REQUIRE(rows.size() == 8);
  double area_rate =
      std::log(rows.back().volume / total_volume(seed)) / 8.0;
  double boundary_rate =
      std::log(rows.back().boundary_measure / boundary_measure(seed)) / 8.0;
  CHECK(std::abs(area_rate - (lg1 + lg2)) <= 1e-9);
  CHECK(std::abs(boundary_rate - lg1) <= 0.15);
  CHECK(area_rate - boundary_rate >= 0.2);
}

TEST_CASE("volume growth tracks the mean bundle expansion") {
  MapPtr f = make_system("cat2shear", {});
  SplittingFrame fr = frame_at(*f, 0.34, 0.58, 1, 26);
  Disk seed = seed_disk(*f, fr, 0.01, 1e-3);
  MeshLimits limits;
  limits.vertex_budget = 20'000;
  Disk out = iterate_disk(*f, seed, 20, limits);
  double rate = std::log(total_volume(out) / total_volume(seed)) / 20.0;

  InflatabilitySettings settings;
  settings.samples = 2000;
  settings.grid_resolution = 16;
  settings.seed = 1;
  InflatabilityReport rep = check_inflatable(*f, Side::cu, 1, settings);
  CHECK(std::abs(rate - rep.lhs) <= 0.1 * std::abs(rep.lhs));
}

TEST_CASE("boundary growth is bounded by the codimension-one supremum") {
  MapPtr f = make_system("sym3", {});
  SplittingFrame fr = frame_at(*f, 0.81, 0.29, 2, 27);
  Disk seed = seed_disk(*f, fr, 0.02, 0.02 / 10.0);
  MeshLimits limits;
  limits.vertex_budget = 100'000;
  std::vector<GrowthRow> rows =
      good_fraction_series(*f, seed, 0.01, 0.5, 6, limits);
  InflatabilitySettings settings;
  settings.samples = 100;
  settings.grid_resolution = 8;
  settings.seed = 2;
  XiSupEstimate xs = Xi_n(*f, 6, Side::cu, 8, 2, settings);
  CHECK(std::log(rows.back().boundary_measure) <=
        std::log(boundary_measure(seed)) + xs.value + 1e-2);
}

TEST_CASE("growth analyses reject bad parameters") {
  MapPtr f = make_system("cat2", {});
  SplittingFrame fr = frame_at(*f, 0.5, 0.5, 1, 28);
  Disk seed = seed_disk(*f, fr, 0.01, 1e-3);
  CHECK_THROWS_AS(theta(seed, 0.0, 0.5), ValidationError);
  CHECK_THROWS_AS(theta(seed, -0.1, 0.5), ValidationError);
  CHECK_THROWS_AS(theta(seed, 0.05, 0.0), ValidationError);
  CHECK_THROWS_AS(fubini_check(seed, 0.0), ValidationError);
  CHECK_THROWS_AS(good_fraction_series(*f, seed, 0.05, 0.5, 0),
                  ValidationError);
  CHECK_THROWS_AS(good_fraction_series(*f, seed, 0.05, -1.0, 3),
                  ValidationError);
  CHECK_THROWS_AS(span_at(seed, -1), ValidationError);
  CHECK_THROWS_AS(span_at(seed, 10'000), ValidationError);
  CHECK_THROWS_AS(span_at(seed, 0, 0.0), ValidationError);
  SpanSettings bad;
  bad.samples = 0;
  CHECK_THROWS_AS(span_series(*f, seed, 3, bad), ValidationError);
  CHECK_THROWS_AS(span_series(*f, seed, 0, SpanSettings{}), ValidationError);
}
