#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <set>

#include "fillgeo/square_complex.hpp"
#include "support.hpp"

using namespace fillgeo;
using fillgeo::test::fixture;
using fillgeo::test::for_each_orientable;

namespace {

ParseError::Kind parse_kind(const std::string& text, int* line = nullptr, int* column = nullptr) {
  try {
    parse_complex(text);
  } catch (const ParseError& e) {
    if (line) *line = e.line();
    if (column) *column = e.column();
    return e.kind();
  }
  FAIL("no ParseError for: " << text);
  return ParseError::Kind::Syntax;
}

// Every pairing of the 2n slots with every choice of flips.
template <class F>
void for_each_gluing(int n, F&& visit) {
  std::vector<int> partner(2 * n, -1);
  std::vector<std::pair<int, int>> pairs;
  auto rec = [&](auto&& self) -> void {
    int s = 0;
    while (s < 2 * n && partner[s] >= 0) ++s;
    if (s == 2 * n) {
      for (int mask = 0; mask < (1 << n); ++mask) {
        std::vector<SquareComplex::Pair> ps;
        for (int k = 0; k < n; ++k)
          ps.push_back({SlotId::from_code(pairs[k].first), SlotId::from_code(pairs[k].second),
                        ((mask >> k) & 1) != 0});
        visit(SquareComplex(n, ps));
      }
      return;
    }
    for (int p = s + 1; p < 2 * n; ++p) {
      if (partner[p] >= 0) continue;
      partner[s] = p;
      partner[p] = s;
      pairs.push_back({s, p});
      self(self);
      pairs.pop_back();
      partner[s] = partner[p] = -1;
    }
  };
  rec(rec);
}

// Walk the boundary of each square counterclockwise: the bottom slot runs
// forward, the top slot backward. The surface is orientable iff each glued
// pair is traversed once in each direction.
bool orientable_by_boundary_walk(const SquareComplex& c) {
  for (const auto& p : c.pairs()) {
    const int dir_a = p.a.side == Side::Bottom ? 1 : -1;
    const int dir_b = (p.b.side == Side::Bottom ? 1 : -1) * (p.flip ? -1 : 1);
    if (dir_a != -dir_b) return false;
  }
  return true;
}

}  // namespace

TEST_CASE("slot codes interleave top and bottom") {
  CHECK(SlotId{0, Side::Top}.code() == 0);
  CHECK(SlotId{0, Side::Bottom}.code() == 1);
  CHECK(SlotId{3, Side::Bottom}.code() == 7);
  CHECK(SlotId::from_code(6) == SlotId{3, Side::Top});
  CHECK(SlotId{12, Side::Bottom}.name() == "b12");
}

TEST_CASE("serialization is canonical and round trips") {
  const SquareComplex c = fixture("commented.cmplx");
  const std::string expected =
      "squares 5\n"
      "glue t0 b1\n"
      "glue b0 t2\n"
      "glue t1 t3 flip\n"
      "glue b2 b4 flip\n"
      "glue b3 t4\n";
  CHECK(serialize_complex(c) == expected);
  CHECK(parse_complex(expected) == c);
  CHECK(c == fixture("minimal_g3.cmplx"));

  // Listing a pair backwards describes the same gluing.
  CHECK(parse_complex("squares 1\nglue b0 t0\n") == parse_complex("squares 1\nglue t0 b0\n"));
}

TEST_CASE("round trip over every orientable gluing with three squares") {
  int count = 0;
  for_each_orientable(3, [&](const SquareComplex& c) {
    CHECK(parse_complex(serialize_complex(c)) == c);
    ++count;
  });
  CHECK(count == 15);
}

TEST_CASE("parse errors carry a kind and a position") {
  int line = 0, column = 0;
  CHECK(parse_kind("glue t0 b0\n") == ParseError::Kind::Syntax);
  CHECK(parse_kind("squares 0\n") == ParseError::Kind::Syntax);
  CHECK(parse_kind("squares 2\nglue t0\n") == ParseError::Kind::Syntax);
  CHECK(parse_kind("squares 2\nglue t0 b1 twist\n") == ParseError::Kind::Syntax);
  CHECK(parse_kind("squares 2\nglue x0 b1\n") == ParseError::Kind::Syntax);

  CHECK(parse_kind("squares 2\nglue t0 b7\nglue b0 t1\n", &line, &column) ==
        ParseError::Kind::SlotOutOfRange);
  CHECK(line == 2);
  CHECK(column == 9);

  CHECK(parse_kind("squares 2\nglue t0 b1\nglue t0 t1\n", &line) == ParseError::Kind::SlotReused);
  CHECK(line == 3);
  CHECK(parse_kind("squares 2\nglue t1 t1\n") == ParseError::Kind::SelfPaired);
  CHECK(parse_kind("# header below\nsquares 2\nglue t0 b1\n", &line) == ParseError::Kind::Unmatched);
  CHECK(line == 2);
}

TEST_CASE("constructor rejects a partial matching") {
  CHECK_THROWS_AS(SquareComplex(2, {{{0, Side::Top}, {1, Side::Bottom}, false}}),
                  std::invalid_argument);
  CHECK_THROWS_AS(SquareComplex(1, {{{0, Side::Top}, {0, Side::Top}, false}}),
                  std::invalid_argument);
}

TEST_CASE("one square glued top to bottom is a torus") {
  const auto r = validate(parse_complex("squares 1\nglue t0 b0\n"));
  CHECK(r.orientable);
  CHECK(r.beta_connected);
  CHECK(r.vertices == 1);
  CHECK(r.euler_characteristic == 0);
  REQUIRE(r.genus);
  CHECK(*r.genus == 1);
  CHECK_FALSE(r.genus_at_least_2);
  CHECK_FALSE(r.ok());
}

TEST_CASE("validation failures are listed") {
  const auto r = validate(fixture("bad.cmplx"));
  CHECK_FALSE(r.ok());
  CHECK_FALSE(r.beta_connected);
  CHECK(r.orientable);
  const auto f = r.failures();
  CHECK(f.size() == 2);

  const auto j = to_json(r);
  CHECK(j["ok"] == false);
  CHECK(j["genus"] == 1);
  CHECK(j["failures"].size() == 2);
}

TEST_CASE("non-orientable gluing has no genus") {
  const auto r = validate(parse_complex("squares 1\nglue t0 b0 flip\n"));
  CHECK_FALSE(r.orientable);
  CHECK_FALSE(r.genus);
  CHECK(to_json(r)["genus"].is_null());
}

TEST_CASE("orientability agrees with a boundary-walk oracle") {
  for (int n = 1; n <= 3; ++n) {
    int orientable = 0;
    for_each_gluing(n, [&](const SquareComplex& c) {
      const bool want = orientable_by_boundary_walk(c);
      CHECK(validate(c).orientable == want);
      CHECK(trace_darts(c).consistent() == want);
      orientable += want;
    });
    // (2n-1)!! pairings, each with exactly one orientable flip choice.
    CHECK(orientable == (n == 1 ? 1 : n == 2 ? 3 : 15));
  }
}

TEST_CASE("dart rotations and vertex classes agree") {
  for (int n = 1; n <= 4; ++n) {
    for_each_orientable(n, [&](const SquareComplex& c) {
      const Darts d = trace_darts(c);
      REQUIRE(d.consistent());
      const DartVertices dv = dart_vertices(d);
      const VertexClasses vc = quotient_vertices(c);
      CHECK(dv.count == static_cast<int>(vc.members.size()));
      // Each vertex has two darts per annulus vertex in its class.
      std::multiset<int> a, b;
      for (const auto& rot : dv.rotation) a.insert(static_cast<int>(rot.size()));
      for (const auto& m : vc.members) b.insert(2 * static_cast<int>(m.size()));
      CHECK(a == b);
      // next is a permutation.
      std::vector<int> seen(d.dart_count(), 0);
      for (int x : d.next) ++seen[x];
      for (int s : seen) CHECK(s == 1);
    });
  }
}

TEST_CASE("beta orbit visits squares in gluing order") {
  const auto c = fixture("minimal_g3.cmplx");
  const auto orbit = beta_orbit(c);
  CHECK(orbit.size() == 5);
  CHECK(std::set<int>(orbit.begin(), orbit.end()).size() == 5);
  CHECK(orbit.front() == 0);
}

TEST_CASE("face census of the minimal genus 3 complex") {
  const auto f = face_census(fixture("minimal_g3.cmplx"));
  CHECK(f.genus == 3);
  CHECK(f.r == 1);
  REQUIRE(f.faces.size() == 1);
  CHECK(f.faces[0].sides == 20);
  CHECK(f.faces[0].corners.size() == 20);
  CHECK_FALSE(f.alpha_separating);
  CHECK_FALSE(f.beta_separating);
  CHECK(f.profile() == std::vector<int>{20});
}

TEST_CASE("face census of a separating case") {
  const auto f = face_census(fixture("separating_g2.cmplx"));
  CHECK(f.genus == 2);
  CHECK(f.r == 4);
  CHECK(f.profile() == std::vector<int>{8, 8, 4, 4});
  CHECK(f.alpha_separating);
  CHECK_FALSE(f.beta_separating);

  const auto w = face_census(fixture("no_spread_tree.cmplx"));
  CHECK(w.alpha_separating);
  CHECK(w.beta_separating);
}

TEST_CASE("every corner lands in exactly one face") {
  for_each_orientable(5, [&](const SquareComplex& c) {
    if (!validate(c).ok()) return;
    const auto f = face_census(c);
    std::set<std::pair<int, int>> corners;
    int total = 0;
    for (const auto& face : f.faces) {
      total += face.sides;
      for (const auto& k : face.corners) corners.insert({k.square, static_cast<int>(k.type)});
    }
    CHECK(total == 4 * c.squares());
    CHECK(static_cast<int>(corners.size()) == 4 * c.squares());
    CHECK(total == 8 * f.genus - 8 + 4 * f.r);
  });
}

TEST_CASE("face census refuses invalid complexes") {
  CHECK_THROWS_AS(face_census(fixture("bad.cmplx")), InvalidComplex);
  try {
    face_census(fixture("bad.cmplx"));
  } catch (const InvalidComplex& e) {
    CHECK_FALSE(e.report().beta_connected);
  }
}
