#pragma once

#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

namespace fillgeo::disk {

using Point = std::complex<double>;

class PolygonError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Hyperbolic distance in the Poincare disk. Throws hyp::DomainError for
// points on or outside the unit circle.
double hyp_distance(Point z, Point w);

// Geodesic polygon in the Poincare disk with vertices in cyclic order
// (either orientation). Construction throws PolygonError for fewer than
// three vertices or repeated vertices, hyp::DomainError for points outside
// the open disk.
class DiskPolygon {
 public:
  explicit DiskPolygon(std::vector<Point> vertices);

  const std::vector<Point>& vertices() const { return vertices_; }
  int size() const { return static_cast<int>(vertices_.size()); }

  // Geodesic sides pairwise disjoint except adjacent sides at their shared
  // vertex. Tested in the Klein model, where geodesics are chords.
  bool simple() const;

 private:
  std::vector<Point> vertices_;
};

struct Measurements {
  std::vector<double> sides;   // side i joins vertex i and i+1
  std::vector<double> angles;  // interior angle at vertex i
  double perimeter = 0;
  double area = 0;             // (n-2) pi - sum of angles
};

// Throws PolygonError for a non-simple polygon.
Measurements measure(const DiskPolygon& p);

// Regular n-gon centred at the origin with vertices at radius rho, first
// vertex on the positive real axis.
DiskPolygon regular_polygon(int n, double rho);

// Regular n-gon whose measured area equals target_area (to 1e-10), found by
// bisection on the circumradius.
DiskPolygon solve_regular(int n, double target_area);

struct BezdekReport {
  int sides = 0;
  double area = 0;
  long trials = 0;
  std::uint64_t seed = 0;
  double regular_perimeter = 0;
  double min_ratio = 0;         // min over samples of perimeter / regular perimeter
  long min_trial = -1;
  double min_perimeter = 0;
  long violations = 0;          // samples with perimeter < regular - 1e-9
  long resamples = 0;
  bool ok() const { return violations == 0 && min_ratio >= 1.0 - 1e-12; }
};

// Samples `trials` random star-shaped simple n-gons, scales each radially to
// the target area and compares its perimeter to the regular n-gon of that
// area. Trial i draws from its own stream seeded by (seed, i), so the result
// does not depend on scheduling.
BezdekReport bezdek_spot_check(int n, double target_area, long trials, std::uint64_t seed);
BezdekReport bezdek_spot_check_parallel(int n, double target_area, long trials,
                                        std::uint64_t seed, int jobs = 0);

// One random sample from trial `trial` of the stream, scaled to the area.
DiskPolygon bezdek_sample(int n, double target_area, std::uint64_t seed, long trial,
                          long* resamples = nullptr);

nlohmann::json to_json(const Measurements& m);
nlohmann::json to_json(const BezdekReport& r);
std::string to_text(const BezdekReport& r);

// CSV with header "re,im", one vertex per row, 15 significant digits.
std::string polygon_csv(const DiskPolygon& p);
DiskPolygon parse_polygon_csv(std::string_view text);

}  // namespace fillgeo::disk
