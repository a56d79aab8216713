#include "fillgeo/dual_graph.hpp"

#include <algorithm>
#include <sstream>

#include <omp.h>

#include "fillgeo/detail/union_find.hpp"

namespace fillgeo {

DualGraph::DualGraph(const SquareComplex& c) {
  const auto report = validate(c);
  if (!report.ok()) throw InvalidComplex(report);
  darts_ = trace_darts(c);
  vertices_ = dart_vertices(darts_);
  prev_.assign(darts_.dart_count(), -1);
  for (int d = 0; d < darts_.dart_count(); ++d) prev_[darts_.next[d]] = d;
}

std::vector<int> DualGraph::edges_with(EdgeLabel which) const {
  std::vector<int> out;
  for (int e = 0; e < edge_count(); ++e)
    if (label(e) == which) out.push_back(e);
  return out;
}

int DualGraph::face_count() const {
  std::vector<char> seen(dart_count(), 0);
  int faces = 0;
  for (int start = 0; start < dart_count(); ++start) {
    if (seen[start]) continue;
    ++faces;
    for (int d = start; !seen[d]; d = next(twin(d))) seen[d] = 1;
  }
  return faces;
}

int DualGraph::genus() const {
  const int chi = vertex_count() - edge_count() + face_count();
  return (2 - chi) / 2;
}

Components components(const DualGraph& g, std::span<const int> edges) {
  detail::UnionFind uf(g.vertex_count());
  for (int e : edges) uf.unite(g.vertex_of(2 * e), g.vertex_of(2 * e + 1));
  Components out;
  out.of_vertex.assign(g.vertex_count(), -1);
  std::vector<int> root_class(g.vertex_count(), -1);
  for (int v = 0; v < g.vertex_count(); ++v) {
    const int root = uf.find(v);
    if (root_class[root] < 0) {
      root_class[root] = out.count++;
      out.classes.emplace_back();
    }
    out.of_vertex[v] = root_class[root];
    out.classes[root_class[root]].push_back(v);
  }
  return out;
}

Components subgraph_components(const DualGraph& g, EdgeLabel label) {
  const auto edges = g.edges_with(label);
  return components(g, edges);
}

namespace {

void check_edge_ids(const DualGraph& g, std::span<const int> edges) {
  for (int e : edges)
    if (e < 0 || e >= g.edge_count())
      throw std::out_of_range("unknown edge id " + std::to_string(e));
}

std::vector<char> dart_mask(const DualGraph& g, std::span<const int> edges) {
  std::vector<char> on(g.dart_count(), 0);
  for (int e : edges) on[2 * e] = on[2 * e + 1] = 1;
  return on;
}

bool spread_mask(const DualGraph& g, const std::vector<char>& on) {
  for (int d = 0; d < g.dart_count(); ++d)
    if (on[d] && on[g.next(d)]) return false;
  return true;
}

}  // namespace

bool is_spread(const DualGraph& g, std::span<const int> edges) {
  check_edge_ids(g, edges);
  return spread_mask(g, dart_mask(g, edges));
}

SpreadForest algorithm_star(const DualGraph& g, std::span<const int> start) {
  check_edge_ids(g, start);
  std::vector<int> current(start.begin(), start.end());
  std::sort(current.begin(), current.end());
  current.erase(std::unique(current.begin(), current.end()), current.end());

  if (!is_spread(g, current))
    throw ForestError(ForestError::Kind::NotSpread, "start edge set is not spread");
  std::vector<char> touched(g.vertex_count(), 0);
  for (int e : current) touched[g.vertex_of(2 * e)] = touched[g.vertex_of(2 * e + 1)] = 1;
  if (g.vertex_count() > 1 && std::find(touched.begin(), touched.end(), 0) != touched.end())
    throw ForestError(ForestError::Kind::NotSpanning, "start edge set does not span");

  const int initial_components = components(g, current).count;
  for (;;) {
    // An edge lies on an embedded loop iff deleting it keeps the component
    // count unchanged.
    int victim = -1;
    const int base = components(g, current).count;
    for (std::size_t i = 0; i < current.size() && victim < 0; ++i) {
      std::vector<int> without = current;
      without.erase(without.begin() + static_cast<std::ptrdiff_t>(i));
      if (components(g, without).count == base) victim = current[i];
    }
    if (victim < 0) break;
    current.erase(std::find(current.begin(), current.end(), victim));
  }
  SpreadForest out;
  out.edges = std::move(current);
  out.components = components(g, out.edges).count;
  if (out.components != initial_components)
    throw std::logic_error("edge deletion changed the component count");
  return out;
}

SpreadForest spread_spanning_forest(const DualGraph& g, EdgeLabel label) {
  const auto start = g.edges_with(label);
  return algorithm_star(g, start);
}

SpreadForest spread_spanning_forest(const SquareComplex& c) {
  return spread_spanning_forest(DualGraph(c), EdgeLabel::Horizontal);
}

namespace {

// Backtracking over edges in id order, trying inclusion before exclusion,
// so trees come out in lexicographic order of their sorted edge lists.
class TreeSearch {
 public:
  TreeSearch(const DualGraph& g, std::size_t limit)
      : g_(g),
        limit_(limit),
        on_(g.dart_count(), 0),
        parent_(g.vertex_count()),
        allowed_(g.edge_count(), 1) {
    for (int v = 0; v < g.vertex_count(); ++v) parent_[v] = v;
    needed_ = g.vertex_count() - 1;
  }

  // Forests using only edges of one label, with the components of that
  // label's subgraph.
  TreeSearch(const DualGraph& g, std::size_t limit, EdgeLabel label) : TreeSearch(g, limit) {
    for (int e = 0; e < g.edge_count(); ++e) allowed_[e] = g.label(e) == label;
    components_ = subgraph_components(g, label).count;
    needed_ = g.vertex_count() - components_;
  }

  // Record states reached at depth `depth` instead of searching past it.
  struct Prefix {
    std::vector<int> chosen;
    int next_edge;
  };
  std::vector<Prefix> prefixes(int depth) {
    prefix_depth_ = depth;
    collect_prefixes_ = true;
    search(0);
    collect_prefixes_ = false;
    return std::move(prefixes_);
  }

  void run_from(const Prefix& p) {
    for (int e : p.chosen) include(e);
    search(p.next_edge);
  }

  void run() { search(0); }

  TreeEnumeration result() && {
    TreeEnumeration out;
    out.trees = std::move(trees_);
    out.truncated = truncated_;
    return out;
  }

 private:
  int root(int v) const {
    while (parent_[v] != v) v = parent_[v];
    return v;
  }

  bool can_include(int e) const {
    const int a = 2 * e, b = 2 * e + 1;
    if (!allowed_[e]) return false;
    if (root(g_.vertex_of(a)) == root(g_.vertex_of(b))) return false;
    for (int d : {a, b})
      if (on_[g_.next(d)] || on_[g_.prev(d)]) return false;
    return true;
  }

  void include(int e) {
    const int ra = root(g_.vertex_of(2 * e)), rb = root(g_.vertex_of(2 * e + 1));
    parent_[rb] = ra;
    history_.push_back(rb);
    on_[2 * e] = on_[2 * e + 1] = 1;
    chosen_.push_back(e);
  }

  void undo() {
    const int e = chosen_.back();
    chosen_.pop_back();
    on_[2 * e] = on_[2 * e + 1] = 0;
    const int rb = history_.back();
    history_.pop_back();
    parent_[rb] = rb;
  }

  // Chosen edges plus every undecided edge after `e` still reach the target
  // component count.
  bool connectable_without(int e) const {
    detail::UnionFind uf(g_.vertex_count());
    for (int c : chosen_) uf.unite(g_.vertex_of(2 * c), g_.vertex_of(2 * c + 1));
    for (int f = e + 1; f < g_.edge_count(); ++f)
      if (allowed_[f]) uf.unite(g_.vertex_of(2 * f), g_.vertex_of(2 * f + 1));
    return uf.sets() == components_;
  }

  void search(int e) {
    if (stop_) return;
    if (static_cast<int>(chosen_.size()) == needed_) {
      if (collect_prefixes_) {
        prefixes_.push_back({chosen_, e});
        return;
      }
      if (trees_.size() >= limit_) {
        truncated_ = true;
        stop_ = true;
        return;
      }
      trees_.push_back(chosen_);
      return;
    }
    if (e >= g_.edge_count()) return;
    if (g_.edge_count() - e < needed_ - static_cast<int>(chosen_.size())) return;
    if (collect_prefixes_ && e == prefix_depth_) {
      prefixes_.push_back({chosen_, e});
      return;
    }
    if (can_include(e)) {
      include(e);
      search(e + 1);
      undo();
    }
    if (!allowed_[e] || connectable_without(e)) search(e + 1);
  }

  const DualGraph& g_;
  std::size_t limit_;
  std::vector<char> on_;
  std::vector<int> parent_;
  std::vector<int> history_;
  std::vector<int> chosen_;
  std::vector<char> allowed_;
  int components_ = 1;
  int needed_ = 0;
  std::vector<std::vector<int>> trees_;
  bool truncated_ = false;
  bool stop_ = false;

  bool collect_prefixes_ = false;
  int prefix_depth_ = 0;
  std::vector<Prefix> prefixes_;
};

}  // namespace

TreeEnumeration enumerate_spread_trees(const DualGraph& g, std::size_t limit) {
  TreeSearch search(g, limit);
  search.run();
  return std::move(search).result();
}

TreeEnumeration enumerate_spread_forests(const DualGraph& g, EdgeLabel label, std::size_t limit) {
  TreeSearch search(g, limit, label);
  search.run();
  return std::move(search).result();
}

TreeEnumeration enumerate_spread_trees_parallel(const DualGraph& g, std::size_t limit, int jobs) {
  const int depth = std::min(g.edge_count(), 8);
  const auto prefixes = TreeSearch(g, limit).prefixes(depth);
  std::vector<TreeEnumeration> parts(prefixes.size());
  const int threads = jobs > 0 ? jobs : omp_get_max_threads();

#pragma omp parallel for schedule(dynamic, 1) num_threads(threads)
  for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(prefixes.size()); ++i) {
    TreeSearch search(g, limit);
    search.run_from(prefixes[i]);
    parts[i] = std::move(search).result();
  }

  TreeEnumeration out;
  for (auto& part : parts) {
    for (auto& tree : part.trees) {
      if (out.trees.size() >= limit) {
        out.truncated = true;
        return out;
      }
      out.trees.push_back(std::move(tree));
    }
    if (part.truncated) {
      out.truncated = true;
      return out;
    }
  }
  return out;
}

namespace {

bool path_search(const DualGraph& g, int x, int target, std::vector<char>& visited,
                 std::vector<char>& on) {
  for (int d : g.rotation(x)) {
    const int back = DualGraph::twin(d);
    const int y = g.vertex_of(back);
    if (visited[y]) continue;
    if (on[g.next(d)] || on[g.prev(d)] || on[g.next(back)] || on[g.prev(back)]) continue;
    if (y == target) return true;
    visited[y] = 1;
    on[d] = on[back] = 1;
    if (path_search(g, y, target, visited, on)) return true;
    on[d] = on[back] = 0;
    visited[y] = 0;
  }
  return false;
}

}  // namespace

bool spread_path_exists(const DualGraph& g, int u, int v) {
  for (int x : {u, v})
    if (x < 0 || x >= g.vertex_count())
      throw std::out_of_range("unknown vertex " + std::to_string(x));
  if (u == v) throw std::invalid_argument("spread_path_exists needs distinct endpoints");
  std::vector<char> visited(g.vertex_count(), 0), on(g.dart_count(), 0);
  visited[u] = 1;
  return path_search(g, u, v, visited, on);
}

namespace {

std::string dart_token(const DualGraph& g, int d) {
  const int e = DualGraph::edge_of(d);
  return std::to_string(e) + ((d & 1) ? "b" : "a") + ":" +
         (g.label(e) == EdgeLabel::Horizontal ? "H" : "V");
}

}  // namespace

nlohmann::json to_json(const DualGraph& g) {
  nlohmann::json vertices = nlohmann::json::array();
  for (int v = 0; v < g.vertex_count(); ++v) {
    const auto rot = g.rotation(v);
    vertices.push_back({{"id", v},
                        {"degree", g.degree(v)},
                        {"rotation", std::vector<int>(rot.begin(), rot.end())}});
  }
  nlohmann::json edges = nlohmann::json::array();
  for (int e = 0; e < g.edge_count(); ++e)
    edges.push_back({{"id", e},
                     {"label", g.label(e) == EdgeLabel::Horizontal ? "H" : "V"},
                     {"ends", {g.vertex_of(2 * e), g.vertex_of(2 * e + 1)}}});
  return {{"vertices", vertices}, {"edges", edges}, {"genus", g.genus()}};
}

nlohmann::json to_json(const SpreadForest& f) {
  return {{"components", f.components}, {"edges", f.edges}, {"edge_count", f.edge_count()}};
}

nlohmann::json to_json(const TreeEnumeration& t) {
  return {{"count", t.trees.size()}, {"truncated", t.truncated}, {"trees", t.trees}};
}

std::string render_text(const DualGraph& g) {
  std::ostringstream os;
  os << "dual graph: " << g.vertex_count() << " vertices, " << g.edge_count() << " edges ("
     << g.squares() << " H, " << g.squares() << " V), genus " << g.genus() << "\n";
  for (int v = 0; v < g.vertex_count(); ++v) {
    os << "v" << v << " [" << g.degree(v) << "]:";
    for (int d : g.rotation(v)) os << " " << dart_token(g, d);
    os << "\n";
  }
  return os.str();
}

std::string render_dot(const DualGraph& g) {
  std::ostringstream os;
  os << "graph dual {\n";
  for (int v = 0; v < g.vertex_count(); ++v)
    os << "  v" << v << " [label=\"v" << v << " (" << g.degree(v) << ")\"];\n";
  for (int e = 0; e < g.edge_count(); ++e) {
    const bool h = g.label(e) == EdgeLabel::Horizontal;
    os << "  v" << g.vertex_of(2 * e) << " -- v" << g.vertex_of(2 * e + 1) << " [label=\"e" << e
       << "\", color=" << (h ? "blue" : "red") << "];\n";
  }
  os << "}\n";
  return os.str();
}

}  // namespace fillgeo
