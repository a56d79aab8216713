#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "fillgeo/disk_polygon.hpp"
#include "fillgeo/hypgeo.hpp"

using namespace fillgeo;
using disk::DiskPolygon;
using disk::Point;
using std::numbers::pi;

namespace {

// Distance from the cross-ratio form, no log1p.
double distance_oracle(Point z, Point w) {
  const double num = 2 * std::norm(z - w);
  const double den = (1 - std::norm(z)) * (1 - std::norm(w));
  return std::acosh(1 + num / den);
}

// Disk automorphism taking a to 0, followed by a rotation.
Point mobius(Point z, Point a, double theta) {
  return std::polar(1.0, theta) * (z - a) / (1.0 - std::conj(a) * z);
}

}  // namespace

TEST_CASE("distance") {
  CHECK(disk::hyp_distance(0, 0.5) == doctest::Approx(std::log(3.0)).epsilon(1e-15));
  CHECK(disk::hyp_distance(0.5, 0) == disk::hyp_distance(0, 0.5));
  CHECK(disk::hyp_distance(Point(0.3, 0.1), Point(0.3, 0.1)) == 0);
  CHECK_THROWS_AS(disk::hyp_distance(0, 1.0), hyp::DomainError);
  CHECK_THROWS_AS(disk::hyp_distance(Point(0.8, 0.8), 0), hyp::DomainError);

  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> r(0, 0.95), t(0, 2 * pi);
  for (int i = 0; i < 200; ++i) {
    const Point z = std::polar(r(rng), t(rng)), w = std::polar(r(rng), t(rng));
    const Point a = std::polar(r(rng), t(rng));
    const double d = disk::hyp_distance(z, w);
    CHECK(d == doctest::Approx(distance_oracle(z, w)).epsilon(1e-9));
    CHECK(disk::hyp_distance(mobius(z, a, 0.7), mobius(w, a, 0.7)) ==
          doctest::Approx(d).epsilon(1e-9));
  }
}

TEST_CASE("log1p keeps short distances accurate") {
  const Point z(0.2, 0.1);
  const Point w = z + Point(1e-9, 0);
  // Near z the metric is 2 |dz| / (1 - |z|^2).
  CHECK(disk::hyp_distance(z, w) == doctest::Approx(2e-9 / (1 - std::norm(z))).epsilon(1e-6));
}

TEST_CASE("polygon construction errors") {
  CHECK_THROWS_AS(DiskPolygon({0, 0.5}), disk::PolygonError);
  CHECK_THROWS_AS(DiskPolygon({0, 0.5, 1.0}), hyp::DomainError);
  CHECK_THROWS_AS(DiskPolygon({0, 0.5, 0.5}), disk::PolygonError);
  CHECK_NOTHROW(DiskPolygon({0, 0.5, Point(0, 0.5)}));
}

TEST_CASE("simplicity") {
  const DiskPolygon square({Point(0.5, 0), Point(0, 0.5), Point(-0.5, 0), Point(0, -0.5)});
  CHECK(square.simple());
  const DiskPolygon bowtie({Point(0.5, 0.5), Point(-0.5, -0.5), Point(0.5, -0.5), Point(-0.5, 0.5)});
  CHECK_FALSE(bowtie.simple());
  CHECK_THROWS_AS(disk::measure(bowtie), disk::PolygonError);
}

TEST_CASE("regular polygon measurements match the closed forms") {
  for (int n : {3, 5, 8, 12, 20}) {
    for (double rho : {0.2, 0.5, 0.8}) {
      CAPTURE(n);
      CAPTURE(rho);
      const auto m = disk::measure(disk::regular_polygon(n, rho));
      const double angle = m.angles[0];
      for (double a : m.angles) CHECK(a == doctest::Approx(angle).epsilon(1e-12));
      for (double s : m.sides) CHECK(s == doctest::Approx(m.sides[0]).epsilon(1e-12));
      CHECK(m.sides[0] == doctest::Approx(hyp::regular_side(n, angle)).epsilon(1e-10));
      CHECK(m.area == doctest::Approx((n - 2) * pi - n * angle).epsilon(1e-12));
    }
  }
}

TEST_CASE("orientation does not change the measurements") {
  std::vector<Point> v = {Point(0.1, 0.05), Point(0.6, 0.1), Point(0.4, 0.5), Point(-0.2, 0.4)};
  const auto a = disk::measure(DiskPolygon(v));
  std::reverse(v.begin(), v.end());
  const auto b = disk::measure(DiskPolygon(v));
  CHECK(a.area == doctest::Approx(b.area).epsilon(1e-14));
  CHECK(a.perimeter == doctest::Approx(b.perimeter).epsilon(1e-14));
  CHECK(a.area > 0);
}

TEST_CASE("area is additive under cutting along a diagonal") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> r(0.2, 0.9), jitter(-0.3, 0.3);
  for (int i = 0; i < 100; ++i) {
    std::vector<Point> q;
    for (int k = 0; k < 4; ++k) q.push_back(std::polar(r(rng), k * pi / 2 + jitter(rng)));
    const DiskPolygon quad(q);
    if (!quad.simple()) continue;
    const double whole = disk::measure(quad).area;
    const double left = disk::measure(DiskPolygon({q[0], q[1], q[2]})).area;
    const double right = disk::measure(DiskPolygon({q[0], q[2], q[3]})).area;
    CHECK(whole == doctest::Approx(left + right).epsilon(1e-11));
  }
}

TEST_CASE("nearly ideal polygons approach the maximal area") {
  for (int n : {3, 4, 7}) {
    const auto m = disk::measure(disk::regular_polygon(n, 1 - 1e-7));
    CHECK(m.area < (n - 2) * pi);
    CHECK(m.area > (n - 2) * pi - 1e-2);
  }
}

TEST_CASE("perimeter of the solved regular polygon matches f") {
  for (int n = 5; n <= 64; ++n) {
    CAPTURE(n);
    const double f = hyp::right_angled_perimeter(n);
    const auto m = disk::measure(disk::solve_regular(n, (n - 4) * pi / 2));
    CHECK(std::abs(m.perimeter - f) <= 1e-8 * f);
  }
  for (int g : {2, 3}) {
    const auto m = disk::measure(disk::solve_regular(8 * g - 4, (4 * g - 4) * pi));
    for (double a : m.angles) CHECK(std::abs(a - pi / 2) <= 1e-9);
  }
  CHECK_THROWS(disk::solve_regular(5, 4 * pi));
}

TEST_CASE("bezdek samples") {
  long resamples = 0;
  const auto p = disk::bezdek_sample(12, 4 * pi, 1, 17, &resamples);
  CHECK(p.size() == 12);
  CHECK(p.simple());
  CHECK(disk::measure(p).area == doctest::Approx(4 * pi).epsilon(1e-9));
  // The same stream gives the same polygon.
  CHECK(disk::bezdek_sample(12, 4 * pi, 1, 17).vertices() == p.vertices());
  CHECK(disk::bezdek_sample(12, 4 * pi, 2, 17).vertices() != p.vertices());
}

TEST_CASE("bezdek spot check") {
  const auto a = disk::bezdek_spot_check(12, 4 * pi, 300, 5);
  CHECK(a.ok());
  CHECK(a.violations == 0);
  CHECK(a.min_ratio >= 1.0);
  CHECK(a.regular_perimeter == doctest::Approx(19.95463069270345).epsilon(1e-9));

  const auto b = disk::bezdek_spot_check_parallel(12, 4 * pi, 300, 5, 4);
  CHECK(a.min_ratio == b.min_ratio);
  CHECK(a.min_trial == b.min_trial);
  CHECK(a.min_perimeter == b.min_perimeter);
  CHECK(a.resamples == b.resamples);

  const auto j = disk::to_json(a);
  CHECK(j["trials"] == 300);
  CHECK(j["ok"] == true);
}

TEST_CASE("polygon CSV round trip") {
  const auto p = disk::regular_polygon(7, 0.6);
  const std::string csv = disk::polygon_csv(p);
  CHECK(csv.rfind("re,im\n", 0) == 0);
  const auto q = disk::parse_polygon_csv(csv);
  REQUIRE(q.size() == 7);
  for (int i = 0; i < 7; ++i) CHECK(std::abs(q.vertices()[i] - p.vertices()[i]) < 1e-14);
  CHECK_THROWS_AS(disk::parse_polygon_csv("re,im\n0.1,abc\n"), disk::PolygonError);
}
