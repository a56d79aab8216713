#include "fillgeo/explore.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <map>
#include <random>
#include <set>

#include <omp.h>

#include "fillgeo/dual_graph.hpp"

namespace fillgeo {

namespace {

SlotId map_slot(SlotId s, int n, RingSymmetry g) {
  int i = g.reflect ? n - 1 - s.square : s.square;
  i = ((i + g.shift) % n + n) % n;
  Side side = s.side;
  if (g.swap_sides) side = side == Side::Top ? Side::Bottom : Side::Top;
  return {i, side};
}

// partner * 2 + flip, per slot code
using Key = std::vector<int>;

Key key_of(const SquareComplex& c) {
  Key k(c.slot_count());
  for (int code = 0; code < c.slot_count(); ++code)
    k[code] = 2 * c.partner_code(code) + (c.flipped_code(code) ? 1 : 0);
  return k;
}

Key transformed_key(const SquareComplex& c, RingSymmetry g) {
  const int n = c.squares();
  Key k(2 * n);
  for (int code = 0; code < 2 * n; ++code) {
    const int from = map_slot(SlotId::from_code(code), n, g).code();
    const int to = map_slot(SlotId::from_code(c.partner_code(code)), n, g).code();
    k[from] = 2 * to + (c.flipped_code(code) ? 1 : 0);
  }
  return k;
}

SquareComplex complex_from_key(int n, const Key& k) {
  std::vector<SquareComplex::Pair> pairs;
  for (int code = 0; code < 2 * n; ++code) {
    const int partner = k[code] / 2;
    if (code < partner)
      pairs.push_back({SlotId::from_code(code), SlotId::from_code(partner), (k[code] & 1) != 0});
  }
  return SquareComplex(n, pairs);
}

Key canonical_key(const SquareComplex& c) {
  Key best = key_of(c);
  for (int shift = 0; shift < c.squares(); ++shift)
    for (bool reflect : {false, true})
      for (bool swap : {false, true}) {
        Key k = transformed_key(c, {shift, reflect, swap});
        if (k < best) best = std::move(k);
      }
  return best;
}

// Incremental state for building orientable pairings slot by slot. Tracks
// the vertical arcs joined so far (to reject beta closing up early) and the
// quotient vertex classes with their unpaired slot ends (to reject bigons).
// Every pair() must be matched by an unpair().
class PairingState {
 public:
  explicit PairingState(int n)
      : n_(n),
        partner_(2 * n, -1),
        other_end_(2 * n),
        run_length_(2 * n, 1),
        parent_(2 * n),
        size_(2 * n, 1),
        open_(2 * n, 2) {
    for (int i = 0; i < n; ++i) {
      other_end_[2 * i] = 2 * i + 1;
      other_end_[2 * i + 1] = 2 * i;
    }
    for (int v = 0; v < 2 * n; ++v) parent_[v] = v;
  }

  int squares() const { return n_; }
  bool paired(int slot) const { return partner_[slot] >= 0; }
  int partner(int slot) const { return partner_[slot]; }

  // Returns false when the new pair already rules out a valid complex; the
  // pair is applied either way.
  bool pair(int s, int p) {
    Frame f;
    f.s = s;
    f.p = p;
    f.history_mark = history_.size();
    partner_[s] = p;
    partner_[p] = s;
    bool ok = true;

    // beta
    if (other_end_[s] == p) {
      f.closed_cycle = true;
      if (run_length_[s] != n_) ok = false;
    } else {
      const int a = other_end_[s], b = other_end_[p];
      f.a = a;
      f.b = b;
      f.old = {other_end_[a], other_end_[b], run_length_[a], run_length_[b]};
      const int len = run_length_[s] + run_length_[p];
      other_end_[a] = b;
      other_end_[b] = a;
      run_length_[a] = run_length_[b] = len;
    }

    // vertex classes; same-side pairs are glued with a flip
    const bool flip = (s & 1) == (p & 1);
    const int ss = start(s), se = end(s), ps = start(p), pe = end(p);
    unite(ss, flip ? pe : ps);
    unite(se, flip ? ps : pe);
    for (int v : {ss, se, ps, pe}) {
      const int root = find(v);
      --open_[root];
      history_.push_back({Op::Close, root, 0});
    }
    for (int v : {ss, se}) {
      const int root = find(v);
      if (open_[root] == 0 && size_[root] == 1) ok = false;
    }
    frames_.push_back(f);
    return ok;
  }

  void unpair() {
    const Frame f = frames_.back();
    frames_.pop_back();
    while (history_.size() > f.history_mark) {
      const Undo u = history_.back();
      history_.pop_back();
      if (u.op == Op::Close) {
        ++open_[u.x];
      } else {
        size_[u.x] -= size_[u.y];
        open_[u.x] -= open_[u.y];
        parent_[u.y] = u.y;
      }
    }
    if (!f.closed_cycle) {
      other_end_[f.a] = f.old[0];
      other_end_[f.b] = f.old[1];
      run_length_[f.a] = f.old[2];
      run_length_[f.b] = f.old[3];
    }
    partner_[f.s] = partner_[f.p] = -1;
  }

  int find(int v) const {
    while (parent_[v] != v) v = parent_[v];
    return v;
  }
  int class_size(int root) const { return size_[root]; }
  int open_ends(int root) const { return open_[root]; }

  SquareComplex build() const {
    std::vector<SquareComplex::Pair> pairs;
    for (int code = 0; code < 2 * n_; ++code)
      if (code < partner_[code])
        pairs.push_back({SlotId::from_code(code), SlotId::from_code(partner_[code]),
                         (code & 1) == (partner_[code] & 1)});
    return SquareComplex(n_, pairs);
  }

 private:
  enum class Op { Close, Unite };
  struct Undo {
    Op op;
    int x;  // Close: root; Unite: surviving root
    int y;  // Unite: absorbed root
  };
  struct Frame {
    int s = 0, p = 0;
    std::size_t history_mark = 0;
    bool closed_cycle = false;
    int a = 0, b = 0;
    std::array<int, 4> old{};
  };

  // Annulus vertex codes share the slot code layout: u_i = 2i, w_i = 2i+1.
  int start(int slot) const { return slot; }
  int end(int slot) const { return (slot + 2) % (2 * n_); }

  void unite(int x, int y) {
    x = find(x);
    y = find(y);
    if (x == y) return;
    if (size_[x] < size_[y]) std::swap(x, y);
    parent_[y] = x;
    size_[x] += size_[y];
    open_[x] += open_[y];
    history_.push_back({Op::Unite, x, y});
  }

  int n_;
  std::vector<int> partner_;
  std::vector<int> other_end_;
  std::vector<int> run_length_;
  std::vector<int> parent_;
  std::vector<int> size_;
  std::vector<int> open_;
  std::vector<Undo> history_;
  std::vector<Frame> frames_;
};

int first_unpaired(const PairingState& st) {
  for (int s = 0; s < 2 * st.squares(); ++s)
    if (!st.paired(s)) return s;
  return -1;
}

// Collects canonical keys of every valid complex below the current state.
void collect_valid(PairingState& st, std::set<Key>& out) {
  const int s = first_unpaired(st);
  if (s < 0) {
    const SquareComplex c = st.build();
    if (validate(c).ok()) out.insert(canonical_key(c));
    return;
  }
  for (int p = s + 1; p < 2 * st.squares(); ++p) {
    if (st.paired(p)) continue;
    if (st.pair(s, p)) collect_valid(st, out);
    st.unpair();
  }
}

bool passes(const CensusEntry& e, const EnumerateFilters& f) {
  if (f.genus && e.genus != *f.genus) return false;
  if (f.r && e.r != *f.r) return false;
  if (f.alpha_separating && e.alpha_separating != *f.alpha_separating) return false;
  if (f.beta_separating && e.beta_separating != *f.beta_separating) return false;
  return true;
}

std::string entry_id(int n, std::size_t index) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "n%d_%05zu", n, index);
  return buf;
}

void check_cap(int n, const EnumerateOptions& options) {
  if (n < 1) throw std::invalid_argument("enumeration needs n >= 1");
  if (n > options.max_squares)
    throw ResourceCap("n = " + std::to_string(n) + " exceeds the enumeration cap of " +
                      std::to_string(options.max_squares) + " squares");
}

std::vector<CensusEntry> finish(int n, const std::set<Key>& keys, const EnumerateOptions& options,
                                bool parallel) {
  const std::vector<Key> ordered(keys.begin(), keys.end());
  std::vector<std::optional<CensusEntry>> all(ordered.size());
  const int threads = options.jobs > 0 ? options.jobs : omp_get_max_threads();
#pragma omp parallel for schedule(dynamic, 1) num_threads(threads) if (parallel)
  for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(ordered.size()); ++i)
    all[i] = make_entry(complex_from_key(n, ordered[i]), options.tree_limit);

  std::vector<CensusEntry> out;
  for (auto& e : all) {
    if (!passes(*e, options.filters)) continue;
    e->id = entry_id(n, out.size());
    out.push_back(std::move(*e));
  }
  return out;
}

}  // namespace

SquareComplex transform(const SquareComplex& c, RingSymmetry s) {
  return complex_from_key(c.squares(), transformed_key(c, s));
}

SquareComplex canonical_form(const SquareComplex& c) {
  return complex_from_key(c.squares(), canonical_key(c));
}

RawCounts raw_counts(int n) {
  RawCounts counts;
  std::vector<int> partner(2 * n, -1);
  auto rec = [&](auto&& self) -> void {
    int s = 0;
    while (s < 2 * n && partner[s] >= 0) ++s;
    if (s == 2 * n) {
      std::vector<SquareComplex::Pair> pairs;
      for (int code = 0; code < 2 * n; ++code)
        if (code < partner[code])
          pairs.push_back({SlotId::from_code(code), SlotId::from_code(partner[code]),
                           (code & 1) == (partner[code] & 1)});
      const auto r = validate(SquareComplex(n, pairs));
      ++counts.candidates;
      if (r.beta_connected) ++counts.beta_connected;
      if (r.beta_connected && r.no_bigons) ++counts.no_bigons;
      if (r.ok()) ++counts.valid;
      return;
    }
    for (int p = s + 1; p < 2 * n; ++p) {
      if (partner[p] >= 0) continue;
      partner[s] = p;
      partner[p] = s;
      self(self);
      partner[s] = partner[p] = -1;
    }
  };
  rec(rec);
  return counts;
}

CensusEntry make_entry(const SquareComplex& c, std::size_t tree_limit, std::string id) {
  const FaceCensus census = face_census(c);
  const DualGraph g(c);
  CensusEntry e{std::move(id), c, 0, 0, {}, false, false, 0, false, false};
  e.genus = census.genus;
  e.r = census.r;
  e.profile = census.profile();
  e.alpha_separating = census.alpha_separating;
  e.beta_separating = census.beta_separating;
  const auto trees = enumerate_spread_trees(g, tree_limit);
  e.spread_trees = static_cast<long>(trees.trees.size());
  e.spread_trees_truncated = trees.truncated;
  const SpreadForest forest = spread_spanning_forest(g, EdgeLabel::Horizontal);
  e.lemma_ok = forest.components == (census.alpha_separating ? 2 : 1) &&
               is_spread(g, forest.edges) &&
               forest.edge_count() == census.r - forest.components;
  return e;
}

std::vector<CensusEntry> enumerate_serial(int n, const EnumerateOptions& options) {
  check_cap(n, options);
  std::set<Key> keys;
  PairingState st(n);
  collect_valid(st, keys);
  return finish(n, keys, options, false);
}

std::vector<CensusEntry> enumerate(int n, const EnumerateOptions& options) {
  check_cap(n, options);
  // Prefixes: the partners of the first two slots to be paired.
  std::vector<std::pair<int, int>> prefixes;
  for (int p = 1; p < 2 * n; ++p) {
    if (2 * n == 2) {
      prefixes.push_back({p, -1});
      continue;
    }
    const int second = p == 1 ? 2 : 1;
    for (int q = second + 1; q < 2 * n; ++q)
      if (q != p) prefixes.push_back({p, q});
  }

  std::vector<std::set<Key>> parts(prefixes.size());
  const int threads = options.jobs > 0 ? options.jobs : omp_get_max_threads();
#pragma omp parallel for schedule(dynamic, 1) num_threads(threads)
  for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(prefixes.size()); ++i) {
    PairingState st(n);
    const auto [p, q] = prefixes[i];
    if (st.pair(0, p)) {
      if (q < 0) {
        collect_valid(st, parts[i]);
      } else {
        const int second = first_unpaired(st);
        if (st.pair(second, q)) collect_valid(st, parts[i]);
        st.unpair();
      }
    }
    st.unpair();
  }

  std::set<Key> keys;
  for (auto& part : parts) keys.merge(part);
  return finish(n, keys, options, true);
}

LemmaReport verify_lemma(const std::vector<CensusEntry>& entries) {
  LemmaReport r;
  for (const auto& e : entries) {
    ++r.entries;
    const FaceCensus census = face_census(e.complex);
    const DualGraph g(e.complex);
    const SpreadForest forest = spread_spanning_forest(g, EdgeLabel::Horizontal);
    const int expected = census.alpha_separating ? 2 : 1;
    (census.alpha_separating ? r.separating : r.nonseparating)++;
    std::string problem;
    if (forest.components != expected)
      problem = "forest has " + std::to_string(forest.components) + " components, expected " +
                std::to_string(expected);
    else if (!is_spread(g, forest.edges))
      problem = "forest is not spread";
    else if (forest.edge_count() != census.r - expected)
      problem = "e(T) = " + std::to_string(forest.edge_count()) + ", expected r - " +
                std::to_string(expected);
    if (!problem.empty()) r.violations.push_back(e.id + ": " + problem);
  }
  return r;
}

const char* status_name(CounterexampleOutcome::Status s) {
  switch (s) {
    case CounterexampleOutcome::Status::Found: return "found";
    case CounterexampleOutcome::Status::NotFound: return "not-found";
    case CounterexampleOutcome::Status::BudgetExhausted: return "budget-exhausted";
  }
  return "?";
}

namespace {

// Profile-guided search. A nonseparating alpha always admits a spread
// spanning tree, so only pairings of top slots with top slots and bottom
// with bottom are tried.
class CounterexampleSearch {
 public:
  CounterexampleSearch(const CounterexampleQuery& q, int n)
      : q_(q), st_(n), rng_(q.seed) {
    for (int s : q.profile) target_.push_back(s / 2);
    std::sort(target_.begin(), target_.end(), std::greater<>());
    for (int i = 0; i < n; ++i) order_.push_back(2 * i);
    for (int i = 0; i < n; ++i) order_.push_back(2 * i + 1);
  }

  CounterexampleOutcome run() {
    try {
      search();
    } catch (const Stop&) {
    }
    if (!out_.entry && nodes_ > q_.budget)
      out_.status = CounterexampleOutcome::Status::BudgetExhausted;
    out_.nodes = nodes_;
    return out_;
  }

 private:
  struct Stop {};

  // Completed vertex classes must match the profile exactly; open classes
  // can only merge, so there must be enough of them and none may outgrow the
  // largest face still unmatched.
  bool feasible() const {
    const int nv = 2 * st_.squares();
    std::vector<int> remaining = target_;
    int classes = 0, largest_open = 0;
    for (int v = 0; v < nv; ++v) {
      if (st_.find(v) != v) continue;
      ++classes;
      if (st_.open_ends(v) == 0) {
        auto it = std::find(remaining.begin(), remaining.end(), st_.class_size(v));
        if (it == remaining.end()) return false;
        remaining.erase(it);
      } else {
        largest_open = std::max(largest_open, st_.class_size(v));
      }
    }
    if (classes < static_cast<int>(target_.size())) return false;
    if (largest_open > 0 && (remaining.empty() || largest_open > remaining.front())) return false;
    return true;
  }

  void search() {
    if (++nodes_ > q_.budget) throw Stop{};
    int s = -1;
    for (int slot : order_)
      if (!st_.paired(slot)) {
        s = slot;
        break;
      }
    if (s < 0) {
      examine();
      return;
    }
    std::vector<int> partners;
    for (int slot : order_)
      if (slot != s && !st_.paired(slot) && (slot & 1) == (s & 1)) partners.push_back(slot);
    std::shuffle(partners.begin(), partners.end(), rng_);
    for (int p : partners) {
      if (st_.pair(s, p) && feasible()) search();
      st_.unpair();
    }
  }

  void examine() {
    const SquareComplex c = st_.build();
    if (!validate(c).ok()) return;
    const FaceCensus census = face_census(c);
    if (census.genus != q_.genus) return;
    std::vector<int> want = q_.profile;
    std::sort(want.begin(), want.end(), std::greater<>());
    if (census.profile() != want) return;
    ++out_.candidates;
    if (!census.alpha_separating || !census.beta_separating) return;
    const DualGraph g(c);
    if (!enumerate_spread_trees(g, 1).trees.empty()) return;

    const SquareComplex canon = canonical_form(c);
    const DualGraph cg(canon);
    CensusEntry entry = make_entry(canon, 1'000'000, "witness");
    if (entry.spread_trees != 0 || entry.spread_trees_truncated) return;
    std::vector<int> large;
    const int top = want.front();
    for (int v = 0; v < cg.vertex_count(); ++v)
      if (cg.degree(v) == top) large.push_back(v);
    bool path = false;
    for (std::size_t i = 0; i < large.size() && !path; ++i)
      for (std::size_t j = i + 1; j < large.size() && !path; ++j)
        path = spread_path_exists(cg, large[i], large[j]);
    if (path) return;

    out_.status = CounterexampleOutcome::Status::Found;
    out_.entry = std::move(entry);
    out_.large_faces = std::move(large);
    out_.spread_path_between_large = false;
    throw Stop{};
  }

  const CounterexampleQuery& q_;
  PairingState st_;
  std::mt19937_64 rng_;
  std::vector<int> target_;  // profile in annulus vertices (sides / 2)
  std::vector<int> order_;
  long nodes_ = 0;
  CounterexampleOutcome out_;
};

}  // namespace

CounterexampleOutcome find_counterexample(const CounterexampleQuery& q) {
  if (q.profile.empty()) throw std::invalid_argument("empty face profile");
  int total = 0;
  for (int s : q.profile) {
    if (s < 4 || s % 2 != 0)
      throw std::invalid_argument("face side counts must be even and at least 4");
    total += s;
  }
  const int r = static_cast<int>(q.profile.size());
  if (total != 8 * q.genus - 8 + 4 * r)
    throw std::invalid_argument("profile sums to " + std::to_string(total) + ", but genus " +
                                std::to_string(q.genus) + " with " + std::to_string(r) +
                                " faces requires 8g - 8 + 4r = " +
                                std::to_string(8 * q.genus - 8 + 4 * r));
  if (q.genus < 2) throw std::invalid_argument("genus must be at least 2");
  return CounterexampleSearch(q, total / 4).run();
}

nlohmann::json to_json(const CensusEntry& e) {
  return {{"id", e.id},
          {"complex", serialize_complex(e.complex)},
          {"n", e.complex.squares()},
          {"genus", e.genus},
          {"r", e.r},
          {"profile", e.profile},
          {"alpha_separating", e.alpha_separating},
          {"beta_separating", e.beta_separating},
          {"spread_trees", e.spread_trees},
          {"spread_trees_truncated", e.spread_trees_truncated},
          {"lemma_ok", e.lemma_ok}};
}

nlohmann::json to_json(const LemmaReport& r) {
  return {{"entries", r.entries},
          {"nonseparating", r.nonseparating},
          {"separating", r.separating},
          {"violations", r.violations},
          {"ok", r.ok()}};
}

nlohmann::json to_json(const CounterexampleOutcome& o) {
  nlohmann::json j;
  j["status"] = status_name(o.status);
  j["nodes"] = o.nodes;
  j["candidates"] = o.candidates;
  j["entry"] = o.entry ? to_json(*o.entry) : nlohmann::json(nullptr);
  j["large_faces"] = o.large_faces;
  j["spread_path_between_large_faces"] =
      o.entry ? nlohmann::json(o.spread_path_between_large) : nlohmann::json(nullptr);
  return j;
}

std::string profile_string(const std::vector<int>& profile, char sep) {
  std::string out;
  for (std::size_t i = 0; i < profile.size(); ++i) {
    if (i) out += sep;
    out += std::to_string(profile[i]);
  }
  return out;
}

std::vector<int> parse_profile(const std::string& text) {
  std::vector<int> out;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t comma = text.find(',', pos);
    if (comma == std::string::npos) comma = text.size();
    const std::string item = text.substr(pos, comma - pos);
    pos = comma + 1;
    if (item.empty()) throw std::invalid_argument("empty item in profile '" + text + "'");
    const auto x = item.find('x');
    int value = 0, count = 1;
    auto num = [&](const std::string& s, int& v) {
      auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
      if (ec != std::errc() || p != s.data() + s.size() || v < 1)
        throw std::invalid_argument("bad profile item '" + item + "'");
    };
    if (x == std::string::npos) {
      num(item, value);
    } else {
      num(item.substr(0, x), value);
      num(item.substr(x + 1), count);
    }
    out.insert(out.end(), count, value);
  }
  return out;
}

std::string census_index_csv(const std::vector<CensusEntry>& entries) {
  std::string out = "id,n,g,r,profile,alpha_sep,beta_sep,spread_trees,lemma_ok\n";
  for (const auto& e : entries) {
    out += e.id + "," + std::to_string(e.complex.squares()) + "," + std::to_string(e.genus) + "," +
           std::to_string(e.r) + "," + profile_string(e.profile) + "," +
           (e.alpha_separating ? "1" : "0") + "," + (e.beta_separating ? "1" : "0") + "," +
           std::to_string(e.spread_trees) + (e.spread_trees_truncated ? "+" : "") + "," +
           (e.lemma_ok ? "1" : "0") + "\n";
  }
  return out;
}

void write_census(const std::filesystem::path& dir, const std::vector<CensusEntry>& entries) {
  std::filesystem::create_directories(dir);
  for (const auto& e : entries) {
    std::ofstream f(dir / (e.id + ".cmplx"));
    if (!f) throw std::runtime_error("cannot write " + (dir / (e.id + ".cmplx")).string());
    f << serialize_complex(e.complex);
  }
  std::ofstream index(dir / "index.csv");
  if (!index) throw std::runtime_error("cannot write " + (dir / "index.csv").string());
  index << census_index_csv(entries);
}

}  // namespace fillgeo
