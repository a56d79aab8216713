#include "fillgeo/disk_polygon.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <random>
#include <sstream>

#include <omp.h>

#include "fillgeo/hypgeo.hpp"

namespace fillgeo::disk {

using std::numbers::pi;

namespace {

void require_inside(Point z) {
  if (!(std::norm(z) < 1.0))
    throw hyp::DomainError("point (" + std::to_string(z.real()) + ", " +
                           std::to_string(z.imag()) + ") is not inside the unit disk");
}

Point to_klein(Point z) { return 2.0 * z / (1.0 + std::norm(z)); }

double cross(Point a, Point b) { return a.real() * b.imag() - a.imag() * b.real(); }

// Closed segments [a, b] and [c, d] share a point.
bool segments_meet(Point a, Point b, Point c, Point d) {
  auto orient = [](Point p, Point q, Point r) {
    const double v = cross(q - p, r - p);
    return (v > 0) - (v < 0);
  };
  auto on_segment = [](Point p, Point q, Point r) {
    return std::min(p.real(), q.real()) <= r.real() && r.real() <= std::max(p.real(), q.real()) &&
           std::min(p.imag(), q.imag()) <= r.imag() && r.imag() <= std::max(p.imag(), q.imag());
  };
  const int o1 = orient(a, b, c), o2 = orient(a, b, d);
  const int o3 = orient(c, d, a), o4 = orient(c, d, b);
  if (o1 != o2 && o3 != o4) return true;
  if (o1 == 0 && on_segment(a, b, c)) return true;
  if (o2 == 0 && on_segment(a, b, d)) return true;
  if (o3 == 0 && on_segment(c, d, a)) return true;
  if (o4 == 0 && on_segment(c, d, b)) return true;
  return false;
}

// Moebius map sending `at` to the origin; its derivative at `at` is a
// positive real, so directions of geodesics leaving `at` are preserved.
Point direction_from(Point at, Point toward) {
  return (toward - at) / (1.0 - std::conj(at) * toward);
}

}  // namespace

double hyp_distance(Point z, Point w) {
  require_inside(z);
  require_inside(w);
  const double delta = 2.0 * std::norm(z - w) / ((1.0 - std::norm(z)) * (1.0 - std::norm(w)));
  // arccosh(1 + delta) without cancellation near zero
  return std::log1p(delta + std::sqrt(delta * (2.0 + delta)));
}

DiskPolygon::DiskPolygon(std::vector<Point> vertices) : vertices_(std::move(vertices)) {
  if (vertices_.size() < 3) throw PolygonError("a polygon needs at least 3 vertices");
  for (Point z : vertices_) require_inside(z);
  for (std::size_t i = 0; i < vertices_.size(); ++i)
    for (std::size_t j = i + 1; j < vertices_.size(); ++j)
      if (vertices_[i] == vertices_[j])
        throw PolygonError("vertices " + std::to_string(i) + " and " + std::to_string(j) +
                           " coincide");
}

bool DiskPolygon::simple() const {
  const int n = size();
  std::vector<Point> k(n);
  for (int i = 0; i < n; ++i) k[i] = to_klein(vertices_[i]);
  for (int i = 0; i < n; ++i) {
    const Point a = k[i], b = k[(i + 1) % n];
    // Adjacent sides may only share their common vertex.
    const Point c = k[(i + 2) % n];
    if (cross(b - a, c - b) == 0.0 && std::real((b - a) * std::conj(c - b)) < 0.0) return false;
    for (int j = i + 2; j < n; ++j) {
      if (i == 0 && j == n - 1) continue;
      if (segments_meet(a, b, k[j], k[(j + 1) % n])) return false;
    }
  }
  return true;
}

Measurements measure(const DiskPolygon& p) {
  if (!p.simple()) throw PolygonError("polygon is not simple");
  const auto& v = p.vertices();
  const int n = p.size();

  double signed_area = 0;
  for (int i = 0; i < n; ++i) signed_area += cross(to_klein(v[i]), to_klein(v[(i + 1) % n]));
  const bool ccw = signed_area > 0;

  Measurements m;
  m.sides.resize(n);
  m.angles.resize(n);
  double angle_sum = 0;
  for (int i = 0; i < n; ++i) {
    m.sides[i] = hyp_distance(v[i], v[(i + 1) % n]);
    m.perimeter += m.sides[i];
    const Point to_next = direction_from(v[i], v[(i + 1) % n]);
    const Point to_prev = direction_from(v[i], v[(i + n - 1) % n]);
    // Sweep counterclockwise through the interior.
    double theta = ccw ? std::arg(to_prev / to_next) : std::arg(to_next / to_prev);
    if (theta < 0) theta += 2.0 * pi;
    m.angles[i] = theta;
    angle_sum += theta;
  }
  m.area = (n - 2) * pi - angle_sum;
  return m;
}

DiskPolygon regular_polygon(int n, double rho) {
  if (n < 3) throw PolygonError("a polygon needs at least 3 vertices");
  std::vector<Point> v(n);
  for (int k = 0; k < n; ++k) v[k] = std::polar(rho, 2.0 * pi * k / n);
  return DiskPolygon(std::move(v));
}

namespace {

// Bisection on a scale parameter s in (lo, hi) for a polygon family whose
// area increases with s.
template <class Build>
double bisect_area(Build build, double lo, double hi, double target) {
  for (int it = 0; it < 400; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (measure(build(mid)).area < target)
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace

DiskPolygon solve_regular(int n, double target_area) {
  if (n < 3) throw PolygonError("a polygon needs at least 3 vertices");
  if (!(target_area > 0.0) || !(target_area < (n - 2) * pi))
    throw hyp::DomainError("target area must lie in (0, (n-2) pi)");
  const double hi = std::nextafter(1.0, 0.0);
  if (measure(regular_polygon(n, hi)).area < target_area)
    throw PolygonError("target area not reachable in double precision");
  const double rho = bisect_area([n](double r) { return regular_polygon(n, r); }, 0.0, hi,
                                 target_area);
  DiskPolygon p = regular_polygon(n, rho);
  if (std::abs(measure(p).area - target_area) > 1e-10)
    throw PolygonError("bisection did not converge to the target area");
  return p;
}

DiskPolygon bezdek_sample(int n, double target_area, std::uint64_t seed, long trial,
                          long* resamples) {
  const auto t = static_cast<std::uint64_t>(trial);
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(t), static_cast<std::uint32_t>(t >> 32)};
  std::mt19937_64 rng(seq);
  std::uniform_real_distribution<double> jitter(-0.4, 0.4), radius(0.35, 1.0),
      offset(0.0, 2.0 * pi);

  for (int attempt = 0; attempt < 100; ++attempt) {
    const double phase = offset(rng);
    std::vector<Point> shape(n);
    double max_r = 0;
    for (int k = 0; k < n; ++k) {
      const double r = radius(rng);
      max_r = std::max(max_r, r);
      shape[k] = std::polar(r, phase + 2.0 * pi * (k + jitter(rng)) / n);
    }
    auto build = [&](double s) {
      std::vector<Point> v(n);
      for (int k = 0; k < n; ++k) v[k] = s * shape[k];
      return DiskPolygon(std::move(v));
    };
    const double s_max = (1.0 - 1e-9) / max_r;
    DiskPolygon widest = build(s_max);
    if (!widest.simple() || measure(widest).area <= target_area) {
      if (resamples) ++*resamples;
      continue;
    }
    return build(bisect_area(build, 0.0, s_max, target_area));
  }
  throw PolygonError("could not sample a polygon reaching the target area");
}

namespace {

struct TrialResult {
  double perimeter = 0;
  long resamples = 0;
};

TrialResult run_trial(int n, double area, std::uint64_t seed, long trial) {
  TrialResult out;
  const DiskPolygon p = bezdek_sample(n, area, seed, trial, &out.resamples);
  out.perimeter = measure(p).perimeter;
  return out;
}

BezdekReport summarize(int n, double area, std::uint64_t seed,
                       const std::vector<TrialResult>& results) {
  BezdekReport r;
  r.sides = n;
  r.area = area;
  r.trials = static_cast<long>(results.size());
  r.seed = seed;
  r.regular_perimeter = hyp::regular_perimeter(n, hyp::angle_for_area(n, area));
  r.min_ratio = INFINITY;
  for (long i = 0; i < r.trials; ++i) {
    const double ratio = results[i].perimeter / r.regular_perimeter;
    if (ratio < r.min_ratio) {
      r.min_ratio = ratio;
      r.min_trial = i;
      r.min_perimeter = results[i].perimeter;
    }
    if (results[i].perimeter < r.regular_perimeter - 1e-9) ++r.violations;
    r.resamples += results[i].resamples;
  }
  return r;
}

void check_bezdek_args(int n, double area, long trials) {
  if (n < 5) throw std::invalid_argument("bezdek spot check needs n >= 5");
  if (!(area > 0.0) || !(area < (n - 2) * pi))
    throw hyp::DomainError("target area must lie in (0, (n-2) pi)");
  if (trials < 0) throw std::invalid_argument("trial count must be non-negative");
}

}  // namespace

BezdekReport bezdek_spot_check(int n, double target_area, long trials, std::uint64_t seed) {
  check_bezdek_args(n, target_area, trials);
  std::vector<TrialResult> results(trials);
  for (long i = 0; i < trials; ++i) results[i] = run_trial(n, target_area, seed, i);
  return summarize(n, target_area, seed, results);
}

BezdekReport bezdek_spot_check_parallel(int n, double target_area, long trials,
                                        std::uint64_t seed, int jobs) {
  check_bezdek_args(n, target_area, trials);
  std::vector<TrialResult> results(trials);
  const int threads = jobs > 0 ? jobs : omp_get_max_threads();
#pragma omp parallel for schedule(static) num_threads(threads)
  for (long i = 0; i < trials; ++i) results[i] = run_trial(n, target_area, seed, i);
  return summarize(n, target_area, seed, results);
}

nlohmann::json to_json(const Measurements& m) {
  return {{"sides", m.sides}, {"angles", m.angles}, {"perimeter", m.perimeter}, {"area", m.area}};
}

nlohmann::json to_json(const BezdekReport& r) {
  return {{"sides", r.sides},
          {"area", r.area},
          {"trials", r.trials},
          {"seed", r.seed},
          {"regular_perimeter", r.regular_perimeter},
          {"min_ratio", r.min_ratio},
          {"min_trial", r.min_trial},
          {"min_perimeter", r.min_perimeter},
          {"violations", r.violations},
          {"resamples", r.resamples},
          {"ok", r.ok()}};
}

std::string to_text(const BezdekReport& r) {
  char buf[512];
  std::snprintf(buf, sizeof buf,
                "sides %d, area %.15g, %ld trials, seed %llu\n"
                "regular perimeter   %.15g\n"
                "min perimeter       %.15g (trial %ld)\n"
                "min ratio           %.15g\n"
                "violations          %ld\n"
                "resamples           %ld\n%s\n",
                r.sides, r.area, r.trials, static_cast<unsigned long long>(r.seed),
                r.regular_perimeter, r.min_perimeter, r.min_trial, r.min_ratio, r.violations,
                r.resamples, r.ok() ? "ok" : "VIOLATION");
  return buf;
}

std::string polygon_csv(const DiskPolygon& p) {
  std::string out = "re,im\n";
  char buf[96];
  for (Point z : p.vertices()) {
    std::snprintf(buf, sizeof buf, "%.15g,%.15g\n", z.real(), z.imag());
    out += buf;
  }
  return out;
}

DiskPolygon parse_polygon_csv(std::string_view text) {
  std::vector<Point> v;
  std::istringstream in{std::string(text)};
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line_no == 1 && line == "re,im") continue;
    const auto comma = line.find(',');
    if (comma == std::string::npos)
      throw PolygonError("line " + std::to_string(line_no) + ": expected 're,im'");
    double re = 0, im = 0;
    const auto* b = line.data();
    auto r1 = std::from_chars(b, b + comma, re);
    auto r2 = std::from_chars(b + comma + 1, b + line.size(), im);
    if (r1.ec != std::errc() || r1.ptr != b + comma || r2.ec != std::errc() ||
        r2.ptr != b + line.size())
      throw PolygonError("line " + std::to_string(line_no) + ": bad number");
    v.emplace_back(re, im);
  }
  return DiskPolygon(std::move(v));
}

}  // namespace fillgeo::disk
