#include "fillgeo/gluing.hpp"

#include <algorithm>
#include <sstream>

#include "fillgeo/detail/union_find.hpp"
#include "fillgeo/hypgeo.hpp"

namespace fillgeo {

namespace {

enum class SquareSide { Bottom, Right, Top, Left };

// The two sides of the square meeting at a corner, in counterclockwise
// order around the corner point.
std::pair<SquareSide, SquareSide> corner_sides(CornerType t) {
  switch (t) {
    case CornerType::BL: return {SquareSide::Bottom, SquareSide::Left};
    case CornerType::BR: return {SquareSide::Right, SquareSide::Bottom};
    case CornerType::TR: return {SquareSide::Top, SquareSide::Right};
    case CornerType::TL: return {SquareSide::Left, SquareSide::Top};
  }
  return {SquareSide::Bottom, SquareSide::Left};
}

int side_edge(const SquareComplex& c, int square, SquareSide side) {
  const int n = c.squares();
  switch (side) {
    case SquareSide::Bottom: return c.pair_index(SlotId{square, Side::Bottom}.code());
    case SquareSide::Top: return c.pair_index(SlotId{square, Side::Top}.code());
    case SquareSide::Right: return n + square;
    case SquareSide::Left: return n + (square + n - 1) % n;
  }
  return -1;
}

bool contains_side(std::pair<SquareSide, SquareSide> p, SquareSide s) {
  return p.first == s || p.second == s;
}

SquareSide other_side(std::pair<SquareSide, SquareSide> p, SquareSide s) {
  return p.first == s ? p.second : p.first;
}

// A new vertex of Q-hat joins corner `before` (after dart d) and corner
// `after` (after the twin of the glued dart g). It is straight when both
// corners belong to the same square, share the side dual to g, and their
// outer sides are the sides dual to d and e: two opposite sides of the
// square, i.e. consecutive arcs of one curve through the intersection point.
bool straight_angle(const SquareComplex& c, const DualGraph& g, int d, int glued, int e) {
  const Corner& before = g.corner_after(d);
  const Corner& after = g.corner_after(DualGraph::twin(glued));
  if (before.square != after.square) return false;
  const int q = before.square;
  const auto sb = corner_sides(before.type), sa = corner_sides(after.type);
  for (SquareSide shared : {SquareSide::Bottom, SquareSide::Right, SquareSide::Top, SquareSide::Left}) {
    if (!contains_side(sb, shared) || !contains_side(sa, shared)) continue;
    if (side_edge(c, q, shared) != DualGraph::edge_of(glued)) continue;
    const SquareSide outer_before = other_side(sb, shared), outer_after = other_side(sa, shared);
    const bool opposite = (static_cast<int>(outer_before) + 2) % 4 == static_cast<int>(outer_after);
    if (opposite && side_edge(c, q, outer_before) == DualGraph::edge_of(d) &&
        side_edge(c, q, outer_after) == DualGraph::edge_of(e))
      return true;
  }
  return false;
}

}  // namespace

GluingResult glue(const SquareComplex& c, const SpreadForest& forest) {
  return glue(c, DualGraph(c), forest);
}

GluingResult glue(const SquareComplex& c, const DualGraph& g, const SpreadForest& forest) {
  using K = ForestError::Kind;
  for (int e : forest.edges)
    if (e < 0 || e >= g.edge_count()) throw std::out_of_range("unknown edge id " + std::to_string(e));
  if (!is_spread(g, forest.edges)) throw ForestError(K::NotSpread, "forest is not spread");
  {
    detail::UnionFind uf(g.vertex_count());
    for (int e : forest.edges)
      if (!uf.unite(g.vertex_of(2 * e), g.vertex_of(2 * e + 1)))
        throw ForestError(K::NotAcyclic, "forest contains a cycle");
  }
  const Components comps = components(g, forest.edges);
  if (comps.count > 2)
    throw ForestError(K::NotSpanning, "forest has " + std::to_string(comps.count) +
                                          " components; a spanning tree or two-component forest is required");

  GluingResult out;
  out.components = comps.count;
  if (comps.count == 2) {
    const Components h = subgraph_components(g, EdgeLabel::Horizontal);
    const Components v = subgraph_components(g, EdgeLabel::Vertical);
    if (h.count == 2 && h.of_vertex == comps.of_vertex)
      out.cut = EdgeLabel::Horizontal;
    else if (v.count == 2 && v.of_vertex == comps.of_vertex)
      out.cut = EdgeLabel::Vertical;
    else
      throw ForestError(K::NotCurveAligned,
                        "forest components are not the two sides of a separating curve");
  }

  std::vector<char> glued(g.dart_count(), 0);
  for (int e : forest.edges) glued[2 * e] = glued[2 * e + 1] = 1;

  // Vertex classes of the disjoint union of polygons; corners are indexed by
  // the dart they follow.
  detail::UnionFind classes(g.dart_count());
  for (int e : forest.edges) {
    const int a = 2 * e, b = 2 * e + 1;
    for (auto [x, y] : {std::pair{g.prev(a), b}, std::pair{a, g.prev(b)}}) {
      if (g.corner_after(x).square != g.corner_after(y).square)
        throw std::logic_error("glued corners lie at different intersection points");
      classes.unite(x, y);
    }
  }
  for (int d = 0; d < g.dart_count(); ++d)
    out.max_class_size = std::max(out.max_class_size, classes.size_of(d));

  for (int k = 0; k < comps.count; ++k) {
    GluedPolygon p;
    p.component = k;
    p.faces = comps.classes[k];
    for (int e : forest.edges)
      if (comps.of_vertex[g.vertex_of(2 * e)] == k) p.edges.push_back(e);
    std::vector<int> open;
    for (int v : p.faces) {
      p.sides_in += g.degree(v);
      for (int d : g.rotation(v))
        if (!glued[d]) open.push_back(d);
    }
    std::sort(open.begin(), open.end());
    if (open.empty()) throw std::logic_error("glued polygon has no sides left");

    // Walk the boundary of Q-hat; jumping across a glued side passes a new
    // vertex.
    std::vector<char> jumped_after;
    int d = open.front();
    do {
      p.hat_boundary.push_back(d);
      int e = g.next(d);
      int jumps = 0;
      while (glued[e]) {
        const int glued_dart = e;
        e = g.next(DualGraph::twin(e));
        if (++jumps > 1)
          throw std::logic_error("vertex class with three or more corners");
        if (!glued[e]) {
          if (!straight_angle(c, g, d, glued_dart, e))
            throw std::logic_error("new vertex is not a straight angle");
          ++out.straight_checks;
        }
      }
      jumped_after.push_back(jumps > 0);
      d = e;
      if (p.hat_boundary.size() > open.size())
        throw std::logic_error("boundary walk does not close");
    } while (d != open.front());
    if (p.hat_boundary.size() != open.size())
      throw std::logic_error("glued component is not a single polygon");

    p.hat_sides = static_cast<int>(p.hat_boundary.size());
    p.new_vertices = static_cast<int>(std::count(jumped_after.begin(), jumped_after.end(), 1));
    p.old_vertices = p.hat_sides - p.new_vertices;
    p.sides = p.old_vertices;

    // Sides of Q: start after an old vertex and merge across new ones.
    const int len = p.hat_sides;
    int start = 0;
    while (start < len && jumped_after[(start + len - 1) % len]) ++start;
    std::vector<int> run;
    for (int i = 0; i < len; ++i) {
      const int idx = (start + i) % len;
      run.push_back(p.hat_boundary[idx]);
      if (!jumped_after[idx]) {
        p.q_sides.push_back(std::move(run));
        run.clear();
      }
    }

    if (comps.count == 2) {
      if (p.sides % 8 == 0) p.genus = p.sides / 8;
      int cut_edges = 0;
      for (int e = 0; e < g.edge_count(); ++e)
        if (g.label(e) == out.cut && comps.of_vertex[g.vertex_of(2 * e)] == k) ++cut_edges;
      const int chi = static_cast<int>(p.faces.size()) - cut_edges;
      if ((1 - chi) % 2 == 0) p.euler_genus = (1 - chi) / 2;
    }
    out.polygons.push_back(std::move(p));
  }
  return out;
}

std::string arc_token(const DualGraph& g, int dart) {
  const int e = DualGraph::edge_of(dart);
  std::string s = g.label(e) == EdgeLabel::Vertical ? "a" + std::to_string(e - g.squares())
                                                    : "b" + std::to_string(e);
  if (dart & 1) s += "'";
  return s;
}

std::string hat_word(const DualGraph& g, const GluedPolygon& p) {
  std::string out;
  for (int d : p.hat_boundary) {
    if (!out.empty()) out += ' ';
    out += arc_token(g, d);
  }
  return out;
}

std::string side_pairing_word(const DualGraph& g, const GluedPolygon& p) {
  std::string out;
  for (const auto& side : p.q_sides) {
    if (!out.empty()) out += ' ';
    for (std::size_t i = 0; i < side.size(); ++i) {
      if (i) out += '.';
      out += arc_token(g, side[i]);
    }
  }
  return out;
}

std::vector<std::string> ledger_violations(const GluingResult& r, const FaceCensus& census) {
  std::vector<std::string> bad;
  auto expect = [&](bool ok, const std::string& what) {
    if (!ok) bad.push_back(what);
  };
  expect(r.max_class_size <= 2, "a vertex class has more than two corners");
  int genus_sum = 0;
  for (const auto& p : r.polygons) {
    const std::string tag = "component " + std::to_string(p.component) + ": ";
    int sides_in = 0;
    for (int f : p.faces) sides_in += census.faces[f].sides;
    const int e = p.tree_edges();
    expect(sides_in == p.sides_in, tag + "sum of n(P_k) disagrees with the face census");
    expect(p.new_vertices == 2 * e, tag + "new vertices != 2 e(T)");
    expect(p.hat_sides == sides_in - 2 * e, tag + "n(Q-hat) != sum n(P_k) - 2 e(T)");
    expect(p.sides == p.hat_sides - 2 * e, tag + "n(Q) != n(Q-hat) - 2 e(T)");
    expect(p.sides == sides_in - 4 * e, tag + "n(Q) != sum n(P_k) - 4 e(T)");
    expect(static_cast<int>(p.q_sides.size()) == p.sides, tag + "side runs disagree with n(Q)");
    expect(e == static_cast<int>(p.faces.size()) - 1, tag + "e(T) != faces - 1");
    if (r.components == 1) {
      expect(p.sides == 8 * census.genus - 4, tag + "n(Q) != 8g - 4");
    } else {
      expect(p.genus.has_value(), tag + "n(Q) is not divisible by 8");
      expect(p.genus && p.euler_genus && *p.genus == *p.euler_genus,
             tag + "n(Q)/8 disagrees with the Euler characteristic of the side");
      expect(p.genus && *p.genus >= 1, tag + "side of the curve has genus 0");
      if (p.genus) genus_sum += *p.genus;
    }
  }
  if (r.components == 2) expect(genus_sum == census.genus, "g_1 + g_2 != g");
  return bad;
}

namespace {

RouteBound route_bound(const SquareComplex& c, const DualGraph& g, EdgeLabel label, int genus) {
  RouteBound rb;
  rb.cut = label;
  const SpreadForest forest = spread_spanning_forest(g, label);
  const GluingResult glued = glue(c, g, forest);
  rb.components = glued.components;
  double perimeters = 0;
  for (const auto& p : glued.polygons) {
    rb.forest_edges.push_back(p.tree_edges());
    rb.sides.push_back(p.sides);
    if (glued.components == 2) {
      if (!p.genus) throw std::logic_error("side of a separating curve with n(Q) not divisible by 8");
      rb.genera.push_back(*p.genus);
      perimeters += hyp::right_angled_perimeter(8.0 * *p.genus);
    }
  }
  if (glued.components == 1) perimeters = hyp::right_angled_perimeter(8.0 * genus - 4.0);
  rb.bound = 0.5 * perimeters;
  return rb;
}

const char* label_name(EdgeLabel l) { return l == EdgeLabel::Horizontal ? "alpha" : "beta"; }

nlohmann::json to_json(const RouteBound& rb) {
  return {{"curve", label_name(rb.cut)},
          {"components", rb.components},
          {"forest_edges", rb.forest_edges},
          {"n_Q", rb.sides},
          {"genera", rb.genera},
          {"bound", rb.bound}};
}

}  // namespace

LowerBoundReport lower_bound(const SquareComplex& c) {
  const FaceCensus census = face_census(c);
  const DualGraph g(c);
  LowerBoundReport r;
  r.squares = c.squares();
  r.genus = census.genus;
  r.r = census.r;
  r.profile = census.profile();
  r.alpha_separating = census.alpha_separating;
  r.beta_separating = census.beta_separating;
  r.alpha_route = route_bound(c, g, EdgeLabel::Horizontal, census.genus);
  r.beta_route = route_bound(c, g, EdgeLabel::Vertical, census.genus);
  r.theorem_bound = 0.5 * hyp::right_angled_perimeter(8.0 * census.genus - 4.0);
  if (r.beta_route.bound > r.alpha_route.bound) {
    r.bound = r.beta_route.bound;
    r.best_route = EdgeLabel::Vertical;
  } else {
    r.bound = r.alpha_route.bound;
    r.best_route = EdgeLabel::Horizontal;
  }
  r.strict = census.r > 1;
  return r;
}

nlohmann::json to_json(const DualGraph& g, const GluingResult& r) {
  nlohmann::json j;
  j["cut"] = label_name(r.cut);
  j["components"] = r.components;
  j["max_class_size"] = r.max_class_size;
  j["straight_vertices_checked"] = r.straight_checks;
  auto polys = nlohmann::json::array();
  for (const auto& p : r.polygons) {
    nlohmann::json q;
    q["component"] = p.component;
    q["faces"] = p.faces;
    q["forest_edges"] = p.edges;
    q["e_T"] = p.tree_edges();
    q["sum_n_P"] = p.sides_in;
    q["n_Q_hat"] = p.hat_sides;
    q["new_vertices"] = p.new_vertices;
    q["old_vertices"] = p.old_vertices;
    q["n_Q"] = p.sides;
    q["genus"] = p.genus ? nlohmann::json(*p.genus) : nlohmann::json(nullptr);
    q["euler_genus"] = p.euler_genus ? nlohmann::json(*p.euler_genus) : nlohmann::json(nullptr);
    q["q_hat_word"] = hat_word(g, p);
    q["side_pairing_word"] = side_pairing_word(g, p);
    polys.push_back(std::move(q));
  }
  j["polygons"] = polys;
  return j;
}

nlohmann::json to_json(const LowerBoundReport& r) {
  nlohmann::json j;
  j["squares"] = r.squares;
  j["genus"] = r.genus;
  j["r"] = r.r;
  j["profile"] = r.profile;
  j["alpha_separating"] = r.alpha_separating;
  j["beta_separating"] = r.beta_separating;
  j["alpha_route"] = to_json(r.alpha_route);
  j["beta_route"] = to_json(r.beta_route);
  j["theorem_bound"] = r.theorem_bound;
  j["bound"] = r.bound;
  j["best_route"] = label_name(r.best_route);
  j["strict"] = r.strict;
  return j;
}

std::string to_text(const DualGraph& g, const GluingResult& r) {
  std::ostringstream os;
  os << "forest components: " << r.components;
  if (r.components == 2) os << " (sides of " << label_name(r.cut) << ")";
  os << "\nlargest vertex class: " << r.max_class_size << "\n";
  for (const auto& p : r.polygons) {
    os << "component " << p.component << ": " << p.faces.size() << " polygons, e(T) = "
       << p.tree_edges() << ", sum n(P) = " << p.sides_in << ", n(Q-hat) = " << p.hat_sides
       << ", new = " << p.new_vertices << ", old = " << p.old_vertices << ", n(Q) = " << p.sides;
    if (p.genus) os << ", genus " << *p.genus;
    os << "\n  Q: " << side_pairing_word(g, p) << "\n";
  }
  return os.str();
}

std::string to_text(const LowerBoundReport& r) {
  std::ostringstream os;
  os.precision(12);
  os << "genus " << r.genus << ", r = " << r.r << ", squares " << r.squares << "\nprofile:";
  for (int s : r.profile) os << " " << s;
  os << "\nalpha " << (r.alpha_separating ? "separating" : "nonseparating") << ", beta "
     << (r.beta_separating ? "separating" : "nonseparating") << "\n";
  for (const RouteBound* rb : {&r.alpha_route, &r.beta_route}) {
    os << label_name(rb->cut) << " route: " << rb->components << " component(s), n(Q) =";
    for (int s : rb->sides) os << " " << s;
    if (!rb->genera.empty()) {
      os << ", genera";
      for (int x : rb->genera) os << " " << x;
    }
    os << ", bound " << rb->bound << "\n";
  }
  os << "half perimeter of the regular right-angled " << 8 * r.genus - 4 << "-gon: "
     << r.theorem_bound << "\n";
  os << "length lower bound: " << r.bound << " (" << label_name(r.best_route) << " route)"
     << (r.strict ? ", strict since r > 1" : ", equality possible (r = 1)") << "\n";
  return os.str();
}

}  // namespace fillgeo
