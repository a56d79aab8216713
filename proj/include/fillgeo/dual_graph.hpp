#pragma once

#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "fillgeo/square_complex.hpp"

namespace fillgeo {

enum class EdgeLabel { Horizontal, Vertical };

// The 1-skeleton of the square complex, which is the graph dual to the two
// curves. Each vertex is a complementary polygon; its darts are listed in
// the counterclockwise order induced by the surface orientation.
class DualGraph {
 public:
  // Throws InvalidComplex unless validate(c).ok().
  explicit DualGraph(const SquareComplex& c);

  int squares() const { return darts_.squares; }
  int vertex_count() const { return vertices_.count; }
  int edge_count() const { return darts_.edge_count(); }
  int dart_count() const { return darts_.dart_count(); }

  static int twin(int dart) { return dart ^ 1; }
  static int edge_of(int dart) { return dart >> 1; }
  int next(int dart) const { return darts_.next[dart]; }
  int prev(int dart) const { return prev_[dart]; }
  int vertex_of(int dart) const { return vertices_.of_dart[dart]; }
  // The polygon corner between dart d and next(d).
  const Corner& corner_after(int dart) const { return darts_.corner_after[dart]; }
  std::span<const int> rotation(int vertex) const { return vertices_.rotation[vertex]; }
  int degree(int vertex) const { return static_cast<int>(vertices_.rotation[vertex].size()); }
  EdgeLabel label(int edge) const {
    return darts_.horizontal(edge) ? EdgeLabel::Horizontal : EdgeLabel::Vertical;
  }
  std::vector<int> edges_with(EdgeLabel label) const;

  // Genus from the faces of the rotation system (orbits of next . twin).
  int face_count() const;
  int genus() const;

 private:
  Darts darts_;
  DartVertices vertices_;
  std::vector<int> prev_;
};

struct Components {
  int count = 0;
  std::vector<int> of_vertex;
  std::vector<std::vector<int>> classes;
};

// Components of the spanning subgraph with every vertex and the edges in
// `edges`.
Components components(const DualGraph& g, std::span<const int> edges);
Components subgraph_components(const DualGraph& g, EdgeLabel label);

// No two darts of the edge set are consecutive in the rotation at any
// vertex. Throws std::out_of_range on an unknown edge id.
bool is_spread(const DualGraph& g, std::span<const int> edges);

struct SpreadForest {
  std::vector<int> edges;  // ascending
  int components = 0;
  int edge_count() const { return static_cast<int>(edges.size()); }
};

class ForestError : public std::runtime_error {
 public:
  enum class Kind { NotSpread, NotSpanning, NotAcyclic, TooManyComponents, NotCurveAligned };
  ForestError(Kind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  Kind kind() const { return kind_; }

 private:
  Kind kind_;
};

// The while-loop that deletes edges lying on cycles until none remain. Each
// step removes the smallest edge id among all non-bridge edges.
SpreadForest algorithm_star(const DualGraph& g, std::span<const int> start);

SpreadForest spread_spanning_forest(const DualGraph& g, EdgeLabel label = EdgeLabel::Horizontal);
SpreadForest spread_spanning_forest(const SquareComplex& c);

struct TreeEnumeration {
  std::vector<std::vector<int>> trees;  // lexicographic order of sorted edge lists
  bool truncated = false;
};

// All spread spanning trees, in lexicographic order, stopping after `limit`.
TreeEnumeration enumerate_spread_trees(const DualGraph& g, std::size_t limit);
// Spread forests made of `label` edges whose components are those of the
// `label` subgraph. For a separating curve these are the two-component
// forests that follow its sides.
TreeEnumeration enumerate_spread_forests(const DualGraph& g, EdgeLabel label, std::size_t limit);
// Same result as enumerate_spread_trees, with the search split over OpenMP workers by fixing the
// decisions on the first few edges.
TreeEnumeration enumerate_spread_trees_parallel(const DualGraph& g, std::size_t limit,
                                                int jobs = 0);

bool spread_path_exists(const DualGraph& g, int u, int v);

// Vertices with their rotations (dart ids), and per-edge endpoints and labels.
nlohmann::json to_json(const DualGraph& g);
nlohmann::json to_json(const SpreadForest& f);
nlohmann::json to_json(const TreeEnumeration& t);

std::string render_text(const DualGraph& g);
std::string render_dot(const DualGraph& g);

}  // namespace fillgeo
