#include "doctest.h"

#include <cmath>

#include "domlab/catalog.hpp"
#include "domlab/map.hpp"
#include "domlab/rng.hpp"
#include "oracles.hpp"

using namespace domlab;

namespace {

TorusPoint random_point(int d, const RngStream& rng, std::uint64_t base) {
  Vec c(d);
  for (int i = 0; i < d; ++i) c[i] = rng.uniform(base + i);
  return TorusPoint(c);
}

}  // namespace

TEST_CASE("torus points wrap and measure distance on the flat metric") {
  Vec c(2);
  c << 1.25, -0.25;
  TorusPoint p(c);
  CHECK(p[0] == doctest::Approx(0.25).epsilon(1e-15));
  CHECK(p[1] == doctest::Approx(0.75).epsilon(1e-15));

  Vec a(2), b(2);
  a << 0.95, 0.5;
  b << 0.05, 0.5;
  CHECK(distance(TorusPoint(a), TorusPoint(b)) == doctest::Approx(0.1).epsilon(1e-12));

  // Wrap never returns a coordinate outside [0, 1).
  Vec tiny(2);
  tiny << -1e-18, 0.999999999999999;
  TorusPoint q(tiny);
  CHECK(q[0] >= 0.0);
  CHECK(q[0] < 1.0);
  CHECK(q[1] < 1.0);
}

TEST_CASE("cat map moves the half-point as expected") {
  MapPtr f = make_system("cat2");
  Vec c(2);
  c << 0.5, 0.5;
  TorusPoint y = f->forward(TorusPoint(c));
  CHECK(y[0] == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(y[1] == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(distance(f->inverse(y), TorusPoint(c)) < 1e-15);
}

TEST_CASE("shear with zero amplitude is the identity") {
  Eigen::VectorXi wave(2);
  wave << 1, 0;
  ShearTorusMap s("s", 2, 1, wave, 0.0);
  RngStream rng(7, "test.shear");
  for (int i = 0; i < 20; ++i) {
    TorusPoint x = random_point(2, rng, 100 * i);
    CHECK(distance(s.forward(x), x) < 1e-15);
    CHECK((s.jacobian(x) - Mat::Identity(2, 2)).norm() < 1e-15);
  }
}

TEST_CASE("shear differential vanishes at the cosine zero") {
  Eigen::VectorXi wave(2);
  wave << 1, 0;
  ShearTorusMap s("s", 2, 1, wave, 0.05);
  Vec c(2);
  c << 0.25, 0.1;  // cos(2 pi 0.25) = 0
  Mat j = s.jacobian(TorusPoint(c));
  CHECK(std::abs(j(1, 0)) < 1e-12);
  CHECK(j(0, 0) == doctest::Approx(1.0));
  CHECK(j(1, 1) == doctest::Approx(1.0));
}

TEST_CASE("differentials match central finite differences") {
  RngStream rng(11, "test.fd");
  for (const auto& entry : catalog()) {
    CAPTURE(entry.id);
    MapPtr f = entry.build
                   ? make_system(entry.id)
                   : nullptr;
    REQUIRE(f);
    for (int i = 0; i < 100; ++i) {
      TorusPoint x = random_point(entry.dim, rng, 1000 * i);
      Mat j = f->jacobian(x);
      Mat fd = oracles::fd_jacobian(*f, x);
      CHECK((j - fd).cwiseAbs().maxCoeff() < 1e-6);
    }
  }
}

TEST_CASE("catalog maps are conservative and invertible") {
  RngStream rng(13, "test.inv");
  for (const auto& entry : catalog()) {
    CAPTURE(entry.id);
    MapPtr f = make_system(entry.id);
    for (int i = 0; i < 1000; ++i) {
      TorusPoint x = random_point(entry.dim, rng, 10 * i);
      CHECK(std::abs(std::abs(f->jacobian(x).determinant()) - 1.0) <= 1e-9);
      if (i % 10 == 0) {
        CHECK(distance(f->inverse(f->forward(x)), x) <= 1e-9);
        CHECK(distance(f->forward(f->inverse(x)), x) <= 1e-9);
      }
    }
  }
}

TEST_CASE("inverse differential is the inverse of the differential") {
  RngStream rng(17, "test.invjac");
  for (const auto& entry : catalog()) {
    CAPTURE(entry.id);
    MapPtr f = make_system(entry.id);
    for (int i = 0; i < 50; ++i) {
      TorusPoint x = random_point(entry.dim, rng, 10 * i);
      TorusPoint y = f->forward(x);
      Mat should_be_id = f->inverse_jacobian(y) * f->jacobian(x);
      CHECK((should_be_id - Mat::Identity(entry.dim, entry.dim)).cwiseAbs().maxCoeff() <
            1e-9);
    }
  }
}

TEST_CASE("orbits respect sign, cap and round trips") {
  MapPtr f = make_system("cat2");
  Vec c(2);
  c << 0.31, 0.77;
  TorusPoint x(c);

  auto orbit0 = iterate_orbit(*f, x, 0);
  CHECK(orbit0.size() == 1);

  auto fwd = iterate_orbit(*f, x, 5);
  auto bwd = iterate_orbit(*f, fwd.back(), -5);
  CHECK(distance(bwd.back(), x) < 1e-12);

  CHECK_THROWS_AS(iterate_orbit(*f, x, 20, 10), OrbitLengthExceeded);

  // Fixed point of every linear catalog map.
  Vec z = Vec::Zero(2);
  auto fix = iterate_orbit(*f, TorusPoint(z), 3);
  CHECK(distance(fix.back(), TorusPoint(z)) < 1e-15);
}

TEST_CASE("lifts commute with projection and stay coherent") {
  MapPtr f = make_system("cat2shear", {{"eps", 0.05}});
  RngStream rng(23, "test.lift");
  for (int i = 0; i < 50; ++i) {
    TorusPoint x = random_point(2, rng, 10 * i);
    Vec lift = x.coords();
    lift[0] += 3.0;  // another representative of the same torus point
    lift[1] -= 2.0;
    Vec image = f->forward_lift(lift);
    TorusPoint projected = TorusPoint::from_lift(image);
    CHECK(distance(projected, f->forward(x)) < 1e-12);
  }
}

TEST_CASE("catalog rejects unknown identifiers and bad parameters") {
  CHECK_THROWS_AS(make_system("nosuchmap"), UnknownIdentifier);
  CHECK_THROWS_AS(make_system("cat2shear", {{"sigma", 0.1}}), ValidationError);
  CHECK_THROWS_AS(make_system("cat2shear", {{"eps", 5.0}}), ValidationError);
  CHECK_THROWS_AS(catalog_entry("cat2").fact("nosuchfact"), UnknownIdentifier);
}

TEST_CASE("catalog spectra match the eigenvalue oracle") {
  auto moduli_of = [](const std::string& id) {
    auto lin = std::dynamic_pointer_cast<const LinearTorusMap>(make_system(id));
    REQUIRE(lin);
    return oracles::eigen_moduli(lin->matrix_int());
  };

  auto cat2 = moduli_of("cat2");
  CHECK(std::log(cat2[0]) ==
        doctest::Approx(catalog_entry("cat2").fact("expansion_log")).epsilon(1e-12));

  auto sym3 = moduli_of("sym3");
  CHECK(std::log(sym3[0]) ==
        doctest::Approx(catalog_entry("sym3").fact("expansion_log_1")).epsilon(1e-12));
  CHECK(std::log(sym3[1]) ==
        doctest::Approx(catalog_entry("sym3").fact("expansion_log_2")).epsilon(1e-12));

  auto cat3 = moduli_of("cat3");
  CHECK(std::log(cat3[0]) ==
        doctest::Approx(catalog_entry("cat3").fact("expansion_log")).epsilon(1e-12));

  // No eigenvalue of any hyperbolic catalog entry sits on the unit circle;
  // cat2xid is the designed exception with its neutral direction.
  for (const char* id : {"cat2", "cat3", "sym3", "cat4"}) {
    for (double m : moduli_of(id)) CHECK(std::abs(m - 1.0) > 0.2);
  }
  auto prod = moduli_of("cat2xid");
  CHECK(prod[1] == doctest::Approx(1.0).epsilon(1e-12));
}
