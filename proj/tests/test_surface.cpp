#include <cmath>

#include "doctest.h"
#include "surfoffset/surface.hpp"
#include "test_helpers.hpp"

using namespace surfoffset;
using namespace surfoffset::testing;

TEST_CASE("evaluate on catalog anchors") {
  Surface plane = Surface::make(SurfaceKind::plane);
  SurfacePoint p = plane.evaluate({0.3, 0.7});
  CHECK(p.x == doctest::Approx(0.3).epsilon(1e-15));
  CHECK(p.y == doctest::Approx(0.7).epsilon(1e-15));
  CHECK(p.z == 0.0);

  Surface sphere = Surface::make(SurfaceKind::sphere);
  SurfacePoint q = sphere.evaluate({0.0, 0.0});
  CHECK(q.x == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(std::abs(q.y) < 1e-15);
  CHECK(std::abs(q.z) < 1e-15);

  Surface cyl = Surface::make(SurfaceKind::cylinder);
  SurfacePoint c = cyl.evaluate({kPi / 2.0, 2.0});
  CHECK(std::abs(c.x) < 1e-15);
  CHECK(c.y == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(c.z == doctest::Approx(2.0).epsilon(1e-15));
}

TEST_CASE("evaluate wraps periodic axes and rejects outside points") {
  Surface cyl = Surface::make(SurfaceKind::cylinder);
  SurfacePoint a = cyl.evaluate({0.25, 0.0});
  SurfacePoint b = cyl.evaluate({0.25 + 2.0 * kPi, 0.0});
  CHECK(distance(a, b) < 1e-12);
  CHECK_THROWS_AS(cyl.evaluate({0.0, 5.0}), DomainError);

  Surface plane = Surface::make(SurfaceKind::plane);
  CHECK_THROWS_AS(plane.evaluate({1.5, 0.5}), DomainError);
}

TEST_CASE("fundamental form anchors") {
  Surface plane = Surface::make(SurfaceKind::plane);
  FundamentalForm f = plane.fundamental_form({0.4, 0.9});
  CHECK(f.E == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(f.F == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(f.G == doctest::Approx(1.0).epsilon(1e-15));

  Surface sphere = Surface::make(SurfaceKind::sphere);
  for (double v : {-1.1, -0.3, 0.0, 0.7, 1.4}) {
    FundamentalForm g = sphere.fundamental_form({1.3, v});
    CHECK(g.E == doctest::Approx(std::cos(v) * std::cos(v)).epsilon(1e-12));
    CHECK(std::abs(g.F) < 1e-14);
    CHECK(g.G == doctest::Approx(1.0).epsilon(1e-12));
  }

  Surface cyl2 = Surface::make(SurfaceKind::cylinder, {{"R", 2.0}});
  FundamentalForm h = cyl2.fundamental_form({2.0, -1.0});
  CHECK(h.E == doctest::Approx(4.0).epsilon(1e-12));
  CHECK(std::abs(h.F) < 1e-14);
  CHECK(h.G == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("finite differences agree with analytic partials") {
  std::mt19937_64 rng(7);
  for (const Surface& s : catalog()) {
    for (int i = 0; i < 200; ++i) {
      ParamPoint p = random_interior(s, rng);
      FundamentalForm a = s.fundamental_form(p);
      FundamentalForm fd = s.fundamental_form_fd(p);
      double scale = std::max({std::abs(a.E), std::abs(a.G), 1e-12});
      CHECK(std::abs(a.E - fd.E) <= 1e-5 * scale);
      CHECK(std::abs(a.F - fd.F) <= 1e-5 * scale);
      CHECK(std::abs(a.G - fd.G) <= 1e-5 * scale);
    }
  }
}

TEST_CASE("positive definiteness at random interior points") {
  std::mt19937_64 rng(11);
  for (const Surface& s : catalog()) {
    for (int i = 0; i < 100000; ++i) {
      ParamPoint p = random_interior(s, rng, 1e-3);
      Vec3 xu, xv;
      s.partials(p, xu, xv);
      FundamentalForm f{xu.dot(xu), xu.dot(xv), xv.dot(xv)};
      REQUIRE(f.E > 0);
      REQUIRE(f.G > 0);
      REQUIRE(f.det() > 0);
    }
  }
}

TEST_CASE("induced length anchors") {
  Surface plane = Surface::make(SurfaceKind::plane);
  // Domain is [0,1]^2; scale the 3-4-5 triangle into it.
  CHECK(plane.induced_length({0, 0}, {0.3, 0.4}) ==
        doctest::Approx(0.5).epsilon(1e-12));
  Surface wide(SurfaceKind::plane, {}, {0, 5, 0, 5}, {false, false});
  CHECK(wide.induced_length({0, 0}, {3, 4}) == doctest::Approx(5.0).epsilon(1e-12));

  Surface cyl = Surface::make(SurfaceKind::cylinder);
  CHECK(cyl.induced_length({0, 0}, {kPi / 2.0, 0}) ==
        doctest::Approx(kPi / 2.0).epsilon(1e-12));
}

TEST_CASE("induced length matches the chord-sum oracle") {
  Surface bump = Surface::make(SurfaceKind::gaussian_bump);
  std::mt19937_64 rng(3);
  for (int i = 0; i < 10; ++i) {
    ParamPoint p = random_interior(bump, rng);
    ParamPoint q{p.u + 0.05, p.v - 0.03};
    double got = bump.induced_length(p, q);
    double oracle = chord_sum_length(bump, p, q);
    CHECK(std::abs(got - oracle) <= 1e-8 * oracle);
  }
}

TEST_CASE("induced length symmetry and chord lower bound") {
  std::mt19937_64 rng(5);
  for (const Surface& s : catalog()) {
    for (int i = 0; i < 50; ++i) {
      ParamPoint p = random_interior(s, rng);
      ParamPoint q = random_interior(s, rng);
      double pq = s.induced_length(p, q);
      double qp = s.induced_length(q, p);
      CHECK(std::abs(pq - qp) <= 1e-12 * std::max(pq, 1e-30));
      double chord = distance(s.evaluate(p), s.evaluate(q));
      CHECK(pq >= chord - 1e-9);
    }
  }
}

TEST_CASE("periodic seam uses the shorter representative") {
  Surface cyl = Surface::make(SurfaceKind::cylinder);
  double across = cyl.induced_length({0.1, 0.0}, {2.0 * kPi - 0.1, 0.0});
  CHECK(across == doctest::Approx(0.2).epsilon(1e-10));
}

TEST_CASE("edge length estimate: chord <= estimate <= arc, exact where known") {
  Surface plane = Surface::make(SurfaceKind::plane);
  CHECK(plane.edge_length({0.1, 0.1}, {0.4, 0.5}) ==
        doctest::Approx(0.5).epsilon(1e-14));

  Surface cyl = Surface::make(SurfaceKind::cylinder);
  // Same-z points: the geodesic is the circular arc.
  CHECK(cyl.edge_length({0, 0}, {kPi / 2.0, 0}) ==
        doctest::Approx(kPi / 2.0).epsilon(1e-12));

  Surface sphere = Surface::make(SurfaceKind::sphere);
  std::mt19937_64 rng(17);
  for (int i = 0; i < 200; ++i) {
    ParamPoint p = random_interior(sphere, rng, 0.05);
    ParamPoint q{p.u + 0.05, p.v + 0.03};
    double est = sphere.edge_length(p, q);
    double truth =
        std::acos(std::clamp(sphere.evaluate(p).dot(sphere.evaluate(q)), -1.0, 1.0));
    double chord = distance(sphere.evaluate(p), sphere.evaluate(q));
    double arc = sphere.induced_length(p, q);
    CHECK(est >= chord - 1e-12);
    CHECK(est <= arc + 1e-12);
    CHECK(std::abs(est - truth) <= 1e-6 * truth);
  }
}

TEST_CASE("sphere pole domain is shrunk away from the singularity") {
  Surface sphere = Surface::make(SurfaceKind::sphere);
  CHECK(sphere.v1() < kPi / 2.0);
  CHECK(sphere.v0() > -kPi / 2.0);
  CHECK_NOTHROW(sphere.fundamental_form({0.0, sphere.v1()}));
}

TEST_CASE("surface JSON round trip") {
  const char* text =
      "{\"kind\":\"torus\",\"params\":{\"R\":2.0,\"r\":0.7},"
      "\"domain\":[0,6.2832,0,6.2832],\"periodic\":[true,true]}";
  Surface t = Surface::from_json_text(text);
  CHECK(t.kind() == SurfaceKind::torus);
  CHECK(t.u_periodic());
  CHECK(t.v_periodic());
  CHECK(t.params().at("R") == 2.0);
  Surface t2 = Surface::from_json_text(t.to_json_text());
  CHECK(t2.params().at("r") == 0.7);
  CHECK(t2.u0() == t.u0());

  CHECK_THROWS_AS(Surface::from_json_text("{\"params\":{}}"), ConfigError);
  CHECK_THROWS_AS(Surface::from_json_text("not json"), ConfigError);
}

TEST_CASE("invalid configurations are rejected") {
  CHECK_THROWS_AS(Surface::make(SurfaceKind::torus, {{"R", 0.5}, {"r", 0.7}}),
                  ConfigError);
  CHECK_THROWS_AS(Surface::make(SurfaceKind::sphere, {{"R", -1.0}}), ConfigError);
  CHECK_THROWS_AS(Surface(SurfaceKind::plane, {}, {0, 1, 0, 1}, {true, false}),
                  ConfigError);
  CHECK_THROWS_AS(Surface(SurfaceKind::plane, {}, {1, 0, 0, 1}, {false, false}),
                  ConfigError);
}
