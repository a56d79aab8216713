#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "fillgeo/dual_graph.hpp"
#include "fillgeo/square_complex.hpp"

namespace fillgeo {

// One polygon Q-hat obtained by gluing the complementary polygons of a
// forest component along the sides dual to its edges, and the polygon Q
// left after erasing the new (straight) vertices.
struct GluedPolygon {
  int component = 0;
  std::vector<int> faces;   // complementary polygons glued, ascending
  std::vector<int> edges;   // forest edges used
  int sides_in = 0;         // sum of n(P_k) over the component
  int hat_sides = 0;        // n(Q-hat)
  int new_vertices = 0;     // vertex classes of size two
  int old_vertices = 0;     // vertex classes of size one
  int sides = 0;            // n(Q)

  // Set when the forest has two components, one per side of a separating
  // curve: n(Q)/8, and the genus of that side from its Euler characteristic.
  std::optional<int> genus;
  std::optional<int> euler_genus;

  // Boundary of Q-hat as darts of unglued sides, in order.
  std::vector<int> hat_boundary;
  // Sides of Q: each is a run of Q-hat sides joined at new vertices.
  std::vector<std::vector<int>> q_sides;

  int tree_edges() const { return static_cast<int>(edges.size()); }
};

struct GluingResult {
  EdgeLabel cut = EdgeLabel::Horizontal;  // curve whose sides the components follow
  int components = 0;
  std::vector<GluedPolygon> polygons;
  int max_class_size = 0;    // largest vertex class of the glued polygons
  int straight_checks = 0;   // new vertices verified to sit on a straight angle
};

// Glues the complementary polygons of c along `forest`. Rejects forests
// that are not spread, acyclic and spanning, and two-component forests that
// do not follow the two sides of a separating curve (ForestError).
GluingResult glue(const SquareComplex& c, const SpreadForest& forest);
GluingResult glue(const SquareComplex& c, const DualGraph& g, const SpreadForest& forest);

// Arc names: the alpha arc crossing vertical edge n+i is "a<i>", the beta
// arc crossing horizontal edge k is "b<k>"; odd darts carry a trailing "'".
std::string arc_token(const DualGraph& g, int dart);
// Q-hat boundary, space separated.
std::string hat_word(const DualGraph& g, const GluedPolygon& p);
// Q as a side-pairing word: sides separated by spaces, merged arcs by ".".
std::string side_pairing_word(const DualGraph& g, const GluedPolygon& p);

// Ledger identities that must hold for every glued polygon; returns a list
// of violated identities (empty when all hold).
std::vector<std::string> ledger_violations(const GluingResult& r, const FaceCensus& census);

struct RouteBound {
  EdgeLabel cut = EdgeLabel::Horizontal;
  int components = 0;
  std::vector<int> forest_edges;  // e(T) per component
  std::vector<int> sides;         // n(Q) per component
  std::vector<int> genera;        // two-component case only
  double bound = 0;               // half the perimeter sum of the comparison polygons
};

struct LowerBoundReport {
  int squares = 0;
  int genus = 0;
  int r = 0;
  std::vector<int> profile;
  bool alpha_separating = false;
  bool beta_separating = false;
  RouteBound alpha_route;
  RouteBound beta_route;
  // Half the perimeter of the regular right-angled (8g-4)-gon.
  double theorem_bound = 0;
  // The larger of the two route bounds; never below theorem_bound.
  double bound = 0;
  EdgeLabel best_route = EdgeLabel::Horizontal;
  // Set when r > 1: the lengths then exceed the bound strictly.
  bool strict = false;
};

LowerBoundReport lower_bound(const SquareComplex& c);

nlohmann::json to_json(const DualGraph& g, const GluingResult& r);
nlohmann::json to_json(const LowerBoundReport& r);
std::string to_text(const DualGraph& g, const GluingResult& r);
std::string to_text(const LowerBoundReport& r);

}  // namespace fillgeo
