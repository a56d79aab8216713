#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

namespace fillgeo::hyp {

// Raised instead of returning NaN when an argument leaves the domain of a
// formula (for the right-angled perimeter: x <= 4, where the arccosh
// argument drops to 1).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Strict inequalities closer than this are reported as inconclusive.
inline constexpr double kCertifyMargin = 1e-9;

enum class Verdict { Holds, Fails, Inconclusive };
const char* verdict_name(Verdict v);

// Classifies `margin`, the amount by which an inequality is satisfied.
Verdict certify(double margin);

// Perimeter of the regular right-angled x-gon, 2x arccosh(sqrt(2) cos(pi/x)),
// extended to real x > 4.
double right_angled_perimeter(double x);
double right_angled_perimeter_d1(double x);
double right_angled_perimeter_d2(double x);

// Regular polygon with `sides` sides and interior angle `vertex_angle`.
// Exists iff cos(pi/n) > sin(angle/2).
struct RegularPolygonSpec {
  double sides = 0;
  double vertex_angle = 0;

  double side_length() const;
  double perimeter() const { return sides * side_length(); }
  double area() const;  // (n-2) pi - n angle
};

// Throws DomainError unless the polygon exists in the hyperbolic plane.
RegularPolygonSpec make_regular(double sides, double vertex_angle);
double regular_side(int sides, double vertex_angle);
double regular_perimeter(int sides, double vertex_angle);
// Vertex angle of the regular n-gon with the given area.
double angle_for_area(int sides, double area);

struct GoldenConstants {
  double phi;  // (1 + sqrt 5) / 2
  double a;    // arccosh(phi / sqrt 2)
  double b;    // sqrt(phi + 1/phi) / 5
};
GoldenConstants golden_constants();

struct SplitCheck {
  int n1 = 0;
  int n2 = 0;
  int m = 0;  // n1 + n2 - 4
  double lhs = 0;  // perimeter sum of the two pieces
  double rhs = 0;  // perimeter of the merged polygon
  double margin = 0;
  Verdict verdict = Verdict::Inconclusive;
};

// Two regular right-angled polygons with n1 and n2 sides against one with
// n1 + n2 - 4 sides. Throws std::invalid_argument unless n1, n2 >= 5.
SplitCheck proposition_holds(int n1, int n2);

struct SweepReport {
  int max_sum = 0;
  long cases = 0;
  long holds = 0;
  double min_margin = 0;
  int worst_n1 = 0;
  int worst_n2 = 0;
  // Values of m for which {5, m-1} is not the unique minimizing split.
  std::vector<int> minimizer_failures;
  bool ok() const { return holds == cases && minimizer_failures.empty(); }
};

// Every 5 <= n1 <= n2 with n1 + n2 <= max_sum.
SweepReport proposition_sweep(int max_sum);
SweepReport proposition_sweep_parallel(int max_sum, int jobs = 0);

struct ConstantCheck {
  std::string name;
  double value = 0;
  std::string expectation;
  double margin = 0;  // signed slack; positive when the check passes
  Verdict verdict = Verdict::Inconclusive;
};

struct ConstantsReport {
  std::vector<ConstantCheck> checks;
  bool ok() const;
};

ConstantsReport constants_check();
nlohmann::json to_json(const ConstantsReport& r);
std::string to_text(const ConstantsReport& r);
nlohmann::json to_json(const SplitCheck& s);
nlohmann::json to_json(const SweepReport& s);

// CSV "n,f,f_prime,f_second" for integer n in [min, max], 15 significant digits.
std::string derivative_table_csv(int min, int max);

}  // namespace fillgeo::hyp
