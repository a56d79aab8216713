// Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any failure.
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <string>

#include "fillgeo/disk_polygon.hpp"
#include "fillgeo/explore.hpp"
#include "fillgeo/gluing.hpp"
#include "fillgeo/hypgeo.hpp"

using namespace fillgeo;
using std::numbers::pi;

namespace {

struct Verdict {
  bool pass = true;
  std::string detail;
};

int failures = 0;

void report(int id, const char* title, const std::function<Verdict()>& check) {
  Verdict v;
  try {
    v = check();
  } catch (const std::exception& e) {
    v = {false, std::string("threw: ") + e.what()};
  }
  if (!v.pass) ++failures;
  std::printf("%s %2d %s: %s\n", v.pass ? "PASS" : "FAIL", id, title, v.detail.c_str());
  std::fflush(stdout);
}

std::vector<CensusEntry> census_to(int max_n) {
  std::vector<CensusEntry> all;
  for (int n = 1; n <= max_n; ++n)
    for (auto& e : enumerate(n)) all.push_back(std::move(e));
  return all;
}

Verdict side_count_identity() {
  long checked = 0;
  for (const auto& e : census_to(6)) {
    const auto f = face_census(e.complex);
    int total = 0;
    for (const auto& face : f.faces) total += face.sides;
    if (total != 8 * f.genus - 8 + 4 * f.r) return {false, e.id + " sums to " + std::to_string(total)};
    ++checked;
  }
  return {checked > 0, std::to_string(checked) + " complexes with n <= 6"};
}

Verdict lemma() {
  const auto r = verify_lemma(census_to(6));
  std::string d = std::to_string(r.entries) + " complexes, " + std::to_string(r.separating) +
                  " with a separating curve";
  if (!r.ok()) d += ", first violation " + r.violations.front();
  return {r.ok() && r.entries > 0, d};
}

Verdict ledger() {
  long forests = 0, violations = 0;
  for (const auto& e : census_to(6)) {
    const DualGraph g(e.complex);
    const auto census = face_census(e.complex);
    auto check = [&](const std::vector<int>& edges) {
      SpreadForest f;
      f.edges = edges;
      const auto r = glue(e.complex, g, f);
      violations += static_cast<long>(ledger_violations(r, census).size());
      ++forests;
    };
    for (const auto& t : enumerate_spread_trees(g, 1'000'000).trees) check(t);
    for (EdgeLabel label : {EdgeLabel::Horizontal, EdgeLabel::Vertical})
      if (subgraph_components(g, label).count == 2)
        for (const auto& f : enumerate_spread_forests(g, label, 1'000'000).trees) check(f);
  }
  return {violations == 0 && forests > 0,
          std::to_string(forests) + " spread forests, " + std::to_string(violations) + " violations"};
}

Verdict counterexample() {
  CounterexampleQuery q;
  q.profile = parse_profile("8,8,4x8");
  q.genus = 2;
  q.seed = 1;
  const auto o = find_counterexample(q);
  const std::string d = std::string(status_name(o.status)) + " after " + std::to_string(o.nodes) +
                        " of " + std::to_string(q.budget) + " nodes";
  if (o.status != CounterexampleOutcome::Status::Found || !o.entry) return {false, d};
  const auto& e = *o.entry;
  const bool ok = validate(e.complex).ok() && e.genus == 2 && e.alpha_separating &&
                  e.beta_separating && e.spread_trees == 0 && !e.spread_trees_truncated &&
                  !o.spread_path_between_large;
  return {ok, d + ", " + std::to_string(e.complex.squares()) + " squares, no spread tree"};
}

Verdict constants() {
  const auto r = hyp::constants_check();
  std::string d = std::to_string(r.checks.size()) + " checks";
  for (const auto& c : r.checks)
    if (c.verdict != hyp::Verdict::Holds) d += ", not holding: " + c.name;
  return {r.ok(), d};
}

Verdict sweep() {
  const auto r = hyp::proposition_sweep_parallel(204);
  char buf[160];
  std::snprintf(buf, sizeof buf, "%ld cases, min margin %.12g at (%d, %d), %zu minimizer failures",
                r.cases, r.min_margin, r.worst_n1, r.worst_n2, r.minimizer_failures.size());
  return {r.ok(), buf};
}

Verdict concavity() {
  double worst = -INFINITY;
  for (int i = 0; i <= 10000; ++i) {
    const double x = 4.01 + (200.0 - 4.01) * i / 10000;
    worst = std::max(worst, hyp::right_angled_perimeter_d2(x));
  }
  double min_order = INFINITY;
  for (double x : {5.5, 8.0, 12.0, 30.0}) {
    const double hs[] = {0.1, 0.05, 0.025};
    double e1[3], e2[3];
    for (int k = 0; k < 3; ++k) {
      const double h = hs[k];
      const double fp = hyp::right_angled_perimeter(x + h), f0 = hyp::right_angled_perimeter(x),
                   fm = hyp::right_angled_perimeter(x - h);
      e1[k] = std::abs((fp - fm) / (2 * h) - hyp::right_angled_perimeter_d1(x));
      e2[k] = std::abs((fp - 2 * f0 + fm) / (h * h) - hyp::right_angled_perimeter_d2(x));
    }
    for (int k = 0; k < 2; ++k)
      min_order = std::min({min_order, std::log2(e1[k] / e1[k + 1]), std::log2(e2[k] / e2[k + 1])});
  }
  char buf[160];
  std::snprintf(buf, sizeof buf, "max f'' on (4.01, 200] is %.6g, min observed order %.3f", worst,
                min_order);
  return {worst < 0 && min_order >= 1.9, buf};
}

Verdict cross_model() {
  double worst = 0;
  for (int n = 5; n <= 64; ++n) {
    const double f = hyp::right_angled_perimeter(n);
    const auto m = disk::measure(disk::solve_regular(n, (n - 4) * pi / 2));
    worst = std::max(worst, std::abs(m.perimeter - f) / f);
  }
  double angle_err = 0;
  for (int g : {2, 3}) {
    const auto m = disk::measure(disk::solve_regular(8 * g - 4, (4 * g - 4) * pi));
    for (double a : m.angles) angle_err = std::max(angle_err, std::abs(a - pi / 2));
  }
  char buf[160];
  std::snprintf(buf, sizeof buf, "max relative perimeter error %.3g, max angle error %.3g", worst,
                angle_err);
  return {worst <= 1e-8 && angle_err <= 1e-9, buf};
}

Verdict bezdek() {
  const auto r = disk::bezdek_spot_check_parallel(12, 4 * pi, 10000, 1);
  char buf[160];
  std::snprintf(buf, sizeof buf, "%ld trials, min ratio %.9f, %ld violations", r.trials,
                r.min_ratio, r.violations);
  return {r.ok(), buf};
}

Verdict minimal_genus() {
  EnumerateOptions o;
  o.filters.genus = 2;
  o.filters.r = 1;
  const auto three = enumerate(3, o);
  o.filters.genus = 3;
  const auto five = enumerate(5, o);
  return {three.empty() && !five.empty(), "genus 2 with 3 squares: " + std::to_string(three.size()) +
                                              ", genus 3 with 5 squares: " +
                                              std::to_string(five.size())};
}

}  // namespace

int main() {
  report(1, "side counts sum to 8g - 8 + 4r", side_count_identity);
  report(2, "lemma over the census", lemma);
  report(3, "gluing ledger over spread forests", ledger);
  report(4, "complex with no spread tree", counterexample);
  report(5, "numeric constants", constants);
  report(6, "split sweep to 204", sweep);
  report(7, "concavity and difference order", concavity);
  report(8, "disk model agrees with the closed form", cross_model);
  report(9, "Bezdek spot check", bezdek);
  report(10, "one-faced pairs in minimal genus", minimal_genus);
  return failures == 0 ? 0 : 1;
}
