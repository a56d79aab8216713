#include "fillgeo/hypgeo.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <sstream>

#include <omp.h>

namespace fillgeo::hyp {

using std::numbers::pi;

const char* verdict_name(Verdict v) {
  switch (v) {
    case Verdict::Holds: return "holds";
    case Verdict::Fails: return "fails";
    case Verdict::Inconclusive: return "inconclusive";
  }
  return "?";
}

Verdict certify(double margin) {
  if (std::isnan(margin)) return Verdict::Inconclusive;
  if (margin > kCertifyMargin) return Verdict::Holds;
  if (margin < -kCertifyMargin) return Verdict::Fails;
  return Verdict::Inconclusive;
}

namespace {

double arccosh_arg(double x) {
  if (!(x > 4.0))
    throw DomainError("right-angled regular x-gon needs x > 4, got " + std::to_string(x));
  const double arg = std::sqrt(2.0) * std::cos(pi / x);
  if (!(arg > 1.0))
    throw DomainError("x = " + std::to_string(x) + " too close to 4 for double precision");
  return arg;
}

}  // namespace

double right_angled_perimeter(double x) {
  return 2.0 * x * std::acosh(arccosh_arg(x));
}

double right_angled_perimeter_d1(double x) {
  const double arg = arccosh_arg(x);
  const double c2 = std::cos(2.0 * pi / x);
  return 2.0 * std::acosh(arg) +
         2.0 * pi * std::sqrt(2.0) * std::sin(pi / x) / (x * std::sqrt(c2));
}

double right_angled_perimeter_d2(double x) {
  arccosh_arg(x);
  const double c2 = std::cos(2.0 * pi / x);
  return -2.0 * pi * pi * std::sqrt(2.0) * std::cos(pi / x) / (x * x * x * std::sqrt(c2 * c2 * c2));
}

double RegularPolygonSpec::side_length() const {
  const double ratio = std::cos(pi / sides) / std::sin(vertex_angle / 2.0);
  return 2.0 * std::acosh(ratio);
}

double RegularPolygonSpec::area() const { return (sides - 2.0) * pi - sides * vertex_angle; }

RegularPolygonSpec make_regular(double sides, double vertex_angle) {
  if (!(sides >= 3.0)) throw DomainError("a polygon needs at least 3 sides");
  if (!(vertex_angle > 0.0) || !(vertex_angle < pi))
    throw DomainError("vertex angle must lie in (0, pi)");
  // Exact equality is the Euclidean case; leave room for rounding.
  if (!(std::cos(pi / sides) - std::sin(vertex_angle / 2.0) > 1e-12))
    throw DomainError("no hyperbolic regular polygon with these sides and angle");
  return {sides, vertex_angle};
}

double regular_side(int sides, double vertex_angle) {
  return make_regular(sides, vertex_angle).side_length();
}

double regular_perimeter(int sides, double vertex_angle) {
  return make_regular(sides, vertex_angle).perimeter();
}

double angle_for_area(int sides, double area) {
  if (!(area > 0.0) || !(area < (sides - 2) * pi))
    throw DomainError("area must lie in (0, (n-2) pi)");
  return ((sides - 2) * pi - area) / sides;
}

GoldenConstants golden_constants() {
  const double phi = (1.0 + std::sqrt(5.0)) / 2.0;
  return {phi, std::acosh(phi / std::sqrt(2.0)), std::sqrt(phi + 1.0 / phi) / 5.0};
}

SplitCheck proposition_holds(int n1, int n2) {
  if (n1 < 5 || n2 < 5)
    throw std::invalid_argument("right-angled regular polygons need at least 5 sides");
  SplitCheck s;
  s.n1 = n1;
  s.n2 = n2;
  s.m = n1 + n2 - 4;
  s.lhs = right_angled_perimeter(n1) + right_angled_perimeter(n2);
  s.rhs = right_angled_perimeter(s.m);
  s.margin = s.lhs - s.rhs;
  s.verdict = certify(s.margin);
  return s;
}

namespace {

// Checks one value of m: every split holds, and {5, m-1} is the unique
// minimizer of the perimeter sum over 5 <= n1 <= n2.
struct MRow {
  long cases = 0;
  long holds = 0;
  double min_margin = INFINITY;
  int worst_n1 = 0;
  int worst_n2 = 0;
  bool minimizer_ok = true;
};

MRow sweep_m(int m) {
  MRow row;
  const int sum = m + 4;
  double at_five = 0;
  for (int n1 = 5; n1 <= sum - n1; ++n1) {
    const SplitCheck s = proposition_holds(n1, sum - n1);
    ++row.cases;
    if (s.verdict == Verdict::Holds) ++row.holds;
    if (s.margin < row.min_margin) {
      row.min_margin = s.margin;
      row.worst_n1 = s.n1;
      row.worst_n2 = s.n2;
    }
    if (n1 == 5)
      at_five = s.lhs;
    else if (certify(s.lhs - at_five) != Verdict::Holds)
      row.minimizer_ok = false;
  }
  return row;
}

void merge_row(SweepReport& r, const MRow& row, int m) {
  r.cases += row.cases;
  r.holds += row.holds;
  if (row.cases > 0 && row.min_margin < r.min_margin) {
    r.min_margin = row.min_margin;
    r.worst_n1 = row.worst_n1;
    r.worst_n2 = row.worst_n2;
  }
  if (row.cases > 0 && !row.minimizer_ok) r.minimizer_failures.push_back(m);
}

}  // namespace

SweepReport proposition_sweep(int max_sum) {
  SweepReport r;
  r.max_sum = max_sum;
  r.min_margin = INFINITY;
  for (int m = 6; m + 4 <= max_sum; ++m) merge_row(r, sweep_m(m), m);
  return r;
}

SweepReport proposition_sweep_parallel(int max_sum, int jobs) {
  SweepReport r;
  r.max_sum = max_sum;
  r.min_margin = INFINITY;
  const int first = 6, last = max_sum - 4;
  if (last < first) return r;
  std::vector<MRow> rows(last - first + 1);
  const int threads = jobs > 0 ? jobs : omp_get_max_threads();
#pragma omp parallel for schedule(dynamic, 4) num_threads(threads)
  for (int m = first; m <= last; ++m) rows[m - first] = sweep_m(m);
  for (int m = first; m <= last; ++m) merge_row(r, rows[m - first], m);
  return r;
}

bool ConstantsReport::ok() const {
  for (const auto& c : checks)
    if (c.verdict != Verdict::Holds) return false;
  return true;
}

ConstantsReport constants_check() {
  const auto k = golden_constants();
  const double phi = k.phi;
  ConstantsReport r;
  auto approx = [&](std::string name, double value, double target, double tol) {
    const double slack = tol - std::abs(value - target);
    std::ostringstream e;
    e << "= " << target << " +/- " << tol;
    r.checks.push_back({std::move(name), value, e.str(), slack,
                        slack >= 0 ? Verdict::Holds : Verdict::Fails});
  };
  auto greater = [&](std::string name, double lhs, double rhs, std::string what) {
    const double margin = lhs - rhs;
    r.checks.push_back({std::move(name), lhs, std::move(what), margin, certify(margin)});
  };

  approx("B = sqrt(phi + 1/phi) / 5", k.b, 0.299, 1e-3);
  approx("A = arccosh(phi / sqrt 2)", k.a, 0.531, 1e-3);
  approx("A - log(phi + sqrt phi) / 2", k.a - 0.5 * std::log(phi + std::sqrt(phi)), 0.0, 1e-12);
  approx("phi^2 - (1 + phi)", phi * phi - (1.0 + phi), 0.0, 1e-12);
  approx("1/phi - (phi - 1)", 1.0 / phi - (phi - 1.0), 0.0, 1e-12);
  approx("phi + 1/phi - sqrt 5", phi + 1.0 / phi - std::sqrt(5.0), 0.0, 1e-12);
  greater("A > 1/2", k.a, 0.5, "> 0.5");
  greater("B < 1/2", 0.5, k.b, "B < 0.5");
  greater("phi + sqrt phi > e", phi + std::sqrt(phi), std::numbers::e, "> e");
  greater("phi + 1/phi < 3", 3.0, phi + 1.0 / phi, "phi + 1/phi < 3");

  const double f5 = right_angled_perimeter(5.0);
  const double d5 = right_angled_perimeter_d1(5.0);
  approx("f(5) - 10 A", f5 - 10.0 * k.a, 0.0, 1e-12);
  approx("f'(5) - (2A + (2 pi / 5) sqrt(phi + 1/phi))",
         d5 - (2.0 * k.a + 2.0 * pi / 5.0 * std::sqrt(phi + 1.0 / phi)), 0.0, 1e-12);
  greater("f'(5) < f(5)", f5, d5, "f'(5) < f(5)");

  // By concavity the unit step is bounded by the slope at the left end,
  // f(m) - f(m-1) < f'(m-1); the slope at the right end is a lower bound.
  double chain_margin = INFINITY;
  for (int m = 6; m <= 200; ++m) {
    const double step = right_angled_perimeter(m) - right_angled_perimeter(m - 1);
    chain_margin = std::min(chain_margin, right_angled_perimeter_d1(m - 1) - step);
  }
  r.checks.push_back({"f(m) - f(m-1) < f'(m-1), 6 <= m <= 200", chain_margin, "min slack > 0",
                      chain_margin, certify(chain_margin)});

  double monotone_margin = INFINITY;
  for (int m = 5; m < 50; ++m)
    monotone_margin = std::min(monotone_margin,
                               right_angled_perimeter_d1(m) - right_angled_perimeter_d1(m + 1));
  r.checks.push_back({"f'(5) > f'(6) > ... > f'(50)", monotone_margin, "min gap > 0",
                      monotone_margin, certify(monotone_margin)});
  return r;
}

nlohmann::json to_json(const ConstantsReport& r) {
  nlohmann::json j;
  const auto k = golden_constants();
  j["phi"] = k.phi;
  j["A"] = k.a;
  j["B"] = k.b;
  auto checks = nlohmann::json::array();
  for (const auto& c : r.checks)
    checks.push_back({{"name", c.name},
                      {"value", c.value},
                      {"expectation", c.expectation},
                      {"margin", c.margin},
                      {"verdict", verdict_name(c.verdict)}});
  j["checks"] = checks;
  j["ok"] = r.ok();
  return j;
}

std::string to_text(const ConstantsReport& r) {
  std::ostringstream os;
  const auto k = golden_constants();
  char buf[160];
  std::snprintf(buf, sizeof buf, "phi = %.15g\nA   = %.15g\nB   = %.15g\n", k.phi, k.a, k.b);
  os << buf;
  for (const auto& c : r.checks) {
    std::snprintf(buf, sizeof buf, "%-13s %-55s value %.12g  margin %.3g\n",
                  verdict_name(c.verdict), c.name.c_str(), c.value, c.margin);
    os << buf;
  }
  os << (r.ok() ? "all checks hold\n" : "SOME CHECKS FAILED\n");
  return os.str();
}

nlohmann::json to_json(const SplitCheck& s) {
  return {{"n1", s.n1},         {"n2", s.n2},         {"m", s.m},
          {"lhs", s.lhs},       {"rhs", s.rhs},       {"margin", s.margin},
          {"verdict", verdict_name(s.verdict)}};
}

nlohmann::json to_json(const SweepReport& s) {
  return {{"max_sum", s.max_sum},   {"cases", s.cases},
          {"holds", s.holds},       {"min_margin", s.min_margin},
          {"worst_n1", s.worst_n1}, {"worst_n2", s.worst_n2},
          {"minimizer_failures", s.minimizer_failures},
          {"ok", s.ok()}};
}

std::string derivative_table_csv(int min, int max) {
  std::string out = "n,f,f_prime,f_second\n";
  char buf[160];
  for (int n = min; n <= max; ++n) {
    std::snprintf(buf, sizeof buf, "%d,%.15g,%.15g,%.15g\n", n, right_angled_perimeter(n),
                  right_angled_perimeter_d1(n), right_angled_perimeter_d2(n));
    out += buf;
  }
  return out;
}

}  // namespace fillgeo::hyp
