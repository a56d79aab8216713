#include "fillgeo/square_complex.hpp"

#include <algorithm>
#include <charconv>
#include <sstream>

#include "fillgeo/detail/union_find.hpp"

namespace fillgeo {

std::string SlotId::name() const {
  return (side == Side::Top ? "t" : "b") + std::to_string(square);
}

ParseError::ParseError(Kind kind, int line, int column, const std::string& what)
    : std::runtime_error(line > 0 ? "line " + std::to_string(line) + ", column " +
                                        std::to_string(column) + ": " + what
                                  : what),
      kind_(kind),
      line_(line),
      column_(column) {}

SquareComplex::SquareComplex(int squares, const std::vector<Pair>& pairs)
    : n_(squares),
      partner_(2 * squares, -1),
      flip_(2 * squares, 0),
      pair_index_(2 * squares, -1) {
  if (squares < 1) throw std::invalid_argument("a complex needs at least one square");
  if (static_cast<int>(pairs.size()) != squares)
    throw std::invalid_argument("expected " + std::to_string(squares) + " pairs, got " +
                                std::to_string(pairs.size()));
  for (const auto& p : pairs) {
    for (SlotId s : {p.a, p.b}) {
      if (s.square < 0 || s.square >= squares)
        throw std::invalid_argument("slot " + s.name() + " out of range");
    }
    const int a = p.a.code(), b = p.b.code();
    if (a == b) throw std::invalid_argument("slot " + p.a.name() + " paired with itself");
    if (partner_[a] >= 0 || partner_[b] >= 0)
      throw std::invalid_argument("slot used twice in pair " + p.a.name() + " " + p.b.name());
    partner_[a] = b;
    partner_[b] = a;
    flip_[a] = flip_[b] = p.flip ? 1 : 0;
  }
  int k = 0;
  for (int code = 0; code < 2 * n_; ++code) {
    if (code < partner_[code]) pair_index_[code] = pair_index_[partner_[code]] = k++;
  }
}

std::vector<SquareComplex::Pair> SquareComplex::pairs() const {
  std::vector<Pair> out;
  out.reserve(n_);
  for (int code = 0; code < 2 * n_; ++code) {
    if (code < partner_[code])
      out.push_back({SlotId::from_code(code), SlotId::from_code(partner_[code]),
                     flip_[code] != 0});
  }
  return out;
}

namespace {

struct Token {
  std::string_view text;
  int column;  // 1-based
};

std::vector<Token> tokenize(std::string_view line) {
  std::vector<Token> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) ++i;
    if (i >= line.size()) break;
    const std::size_t start = i;
    while (i < line.size() && line[i] != ' ' && line[i] != '\t' && line[i] != '\r') ++i;
    out.push_back({line.substr(start, i - start), static_cast<int>(start) + 1});
  }
  return out;
}

bool parse_int(std::string_view s, int& value) {
  if (s.empty()) return false;
  const auto* end = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(s.data(), end, value);
  return ec == std::errc() && ptr == end;
}

}  // namespace

SquareComplex parse_complex(std::string_view text) {
  using K = ParseError::Kind;
  int n = -1;
  int header_line = 0;
  std::vector<SquareComplex::Pair> pairs;
  std::vector<int> used_at;  // line number of first use, per slot code

  int line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t eol = text.find('\n', pos);
    if (eol == std::string_view::npos) eol = text.size();
    std::string_view line = text.substr(pos, eol - pos);
    pos = eol + 1;
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    const auto tokens = tokenize(line);
    if (tokens.empty()) continue;

    if (n < 0) {
      if (tokens[0].text != "squares")
        throw ParseError(K::Syntax, line_no, tokens[0].column, "expected 'squares <n>'");
      if (tokens.size() != 2)
        throw ParseError(K::Syntax, line_no, tokens[0].column,
                         "'squares' takes exactly one count");
      if (!parse_int(tokens[1].text, n) || n < 1)
        throw ParseError(K::Syntax, line_no, tokens[1].column, "square count must be a positive integer");
      header_line = line_no;
      used_at.assign(2 * n, 0);
      continue;
    }

    if (tokens[0].text != "glue")
      throw ParseError(K::Syntax, line_no, tokens[0].column, "expected 'glue <slot> <slot> [flip]'");
    if (tokens.size() < 3 || tokens.size() > 4)
      throw ParseError(K::Syntax, line_no, tokens[0].column, "'glue' takes two slots and an optional 'flip'");
    bool flip = false;
    if (tokens.size() == 4) {
      if (tokens[3].text != "flip")
        throw ParseError(K::Syntax, line_no, tokens[3].column, "expected 'flip'");
      flip = true;
    }
    SlotId slots[2];
    for (int j = 0; j < 2; ++j) {
      const Token& tok = tokens[1 + j];
      const char kind = tok.text.empty() ? '\0' : tok.text[0];
      int index = 0;
      if ((kind != 't' && kind != 'b') || !parse_int(tok.text.substr(1), index) || index < 0 ||
          tok.text.substr(1).starts_with('+'))
        throw ParseError(K::Syntax, line_no, tok.column,
                         "bad slot '" + std::string(tok.text) + "' (expected t<i> or b<i>)");
      if (index >= n)
        throw ParseError(K::SlotOutOfRange, line_no, tok.column,
                         "slot '" + std::string(tok.text) + "' out of range for " +
                             std::to_string(n) + " squares");
      slots[j] = {index, kind == 't' ? Side::Top : Side::Bottom};
    }
    if (slots[0] == slots[1])
      throw ParseError(K::SelfPaired, line_no, tokens[2].column,
                       "slot " + slots[0].name() + " paired with itself");
    for (int j = 0; j < 2; ++j) {
      int& first = used_at[slots[j].code()];
      if (first != 0)
        throw ParseError(K::SlotReused, line_no, tokens[1 + j].column,
                         "slot " + slots[j].name() + " already used on line " +
                             std::to_string(first));
      first = line_no;
    }
    pairs.push_back({slots[0], slots[1], flip});
  }

  if (n < 0) throw ParseError(K::Syntax, line_no, 1, "missing 'squares <n>' header");
  for (int code = 0; code < 2 * n; ++code) {
    if (used_at[code] == 0)
      throw ParseError(K::Unmatched, header_line, 1,
                       "slot " + SlotId::from_code(code).name() + " is not glued");
  }
  return SquareComplex(n, pairs);
}

std::string serialize_complex(const SquareComplex& c) {
  std::string out = "squares " + std::to_string(c.squares()) + "\n";
  for (const auto& p : c.pairs()) {
    out += "glue " + p.a.name() + " " + p.b.name();
    if (p.flip) out += " flip";
    out += "\n";
  }
  return out;
}

const char* corner_name(CornerType t) {
  switch (t) {
    case CornerType::BL: return "BL";
    case CornerType::BR: return "BR";
    case CornerType::TR: return "TR";
    case CornerType::TL: return "TL";
  }
  return "?";
}

namespace {

// Annulus vertices at the two ends of a slot, in ring direction.
int slot_start_vertex(const SquareComplex&, SlotId s) {
  return 2 * s.square + (s.side == Side::Bottom ? 1 : 0);
}
int slot_end_vertex(const SquareComplex& c, SlotId s) {
  return 2 * ((s.square + 1) % c.squares()) + (s.side == Side::Bottom ? 1 : 0);
}

}  // namespace

VertexClasses quotient_vertices(const SquareComplex& c) {
  const int nv = 2 * c.squares();
  detail::UnionFind uf(nv);
  for (const auto& p : c.pairs()) {
    const int as = slot_start_vertex(c, p.a), ae = slot_end_vertex(c, p.a);
    const int bs = slot_start_vertex(c, p.b), be = slot_end_vertex(c, p.b);
    uf.unite(as, p.flip ? be : bs);
    uf.unite(ae, p.flip ? bs : be);
  }
  VertexClasses out;
  out.class_of.assign(nv, -1);
  std::vector<int> root_class(nv, -1);
  for (int v = 0; v < nv; ++v) {
    const int root = uf.find(v);
    if (root_class[root] < 0) {
      root_class[root] = static_cast<int>(out.members.size());
      out.members.emplace_back();
    }
    out.class_of[v] = root_class[root];
    out.members[root_class[root]].push_back(v);
  }
  return out;
}

int slot_dart(const SquareComplex& c, SlotId s, int end) {
  const int code = s.code();
  const int partner = c.partner_code(code);
  const int edge = c.pair_index(code);
  if (code < partner || !c.flipped_code(code)) return 2 * edge + end;
  return 2 * edge + (1 - end);
}

Darts trace_darts(const SquareComplex& c) {
  const int n = c.squares();
  Darts d;
  d.squares = n;
  d.next.assign(4 * n, -1);
  d.corner_after.assign(4 * n, Corner{});
  std::vector<int> as_target(4 * n, 0);

  auto vbottom = [n](int i) { return 2 * (n + ((i % n) + n) % n); };
  auto vtop = [n](int i) { return 2 * (n + ((i % n) + n) % n) + 1; };
  auto link = [&](int from, int to, Corner corner) {
    if (d.next[from] >= 0) {
      ++d.conflicts;
      return;
    }
    d.next[from] = to;
    d.corner_after[from] = corner;
    ++as_target[to];
  };

  for (int i = 0; i < n; ++i) {
    const SlotId top{i, Side::Top}, bottom{i, Side::Bottom};
    link(slot_dart(c, bottom, 0), vbottom(i - 1), {i, CornerType::BL});
    link(vbottom(i), slot_dart(c, bottom, 1), {i, CornerType::BR});
    link(slot_dart(c, top, 1), vtop(i), {i, CornerType::TR});
    link(vtop(i - 1), slot_dart(c, top, 0), {i, CornerType::TL});
  }
  for (int x = 0; x < 4 * n; ++x) {
    if (d.next[x] < 0) ++d.conflicts;
    if (as_target[x] != 1) ++d.conflicts;
  }
  if (d.conflicts > 0) std::fill(d.next.begin(), d.next.end(), -1);
  return d;
}

DartVertices dart_vertices(const Darts& d) {
  DartVertices out;
  out.of_dart.assign(d.dart_count(), -1);
  for (int start = 0; start < d.dart_count(); ++start) {
    if (out.of_dart[start] >= 0) continue;
    std::vector<int> cycle;
    for (int x = start; out.of_dart[x] < 0; x = d.next[x]) {
      out.of_dart[x] = out.count;
      cycle.push_back(x);
    }
    out.rotation.push_back(std::move(cycle));
    ++out.count;
  }
  return out;
}

std::vector<int> beta_orbit(const SquareComplex& c) {
  const int n = c.squares();
  std::vector<int> orbit;
  int square = 0;
  bool up = true;
  do {
    orbit.push_back(square);
    if (static_cast<int>(orbit.size()) > 2 * n) break;
    const SlotId exit{square, up ? Side::Top : Side::Bottom};
    const SlotId entry = c.partner(exit);
    square = entry.square;
    up = entry.side == Side::Bottom;
  } while (square != 0 || !up);
  return orbit;
}

std::vector<std::string> ValidationReport::failures() const {
  std::vector<std::string> out;
  if (!connected) out.push_back("surface is not connected");
  if (!closed) out.push_back("surface is not closed");
  if (!orientable) out.push_back("surface is not orientable");
  if (!beta_connected) out.push_back("vertical arcs do not close up into a single curve");
  if (!no_bigons) out.push_back("complementary bigon (curves not in minimal position)");
  if (!genus_at_least_2) {
    out.push_back(genus ? "genus " + std::to_string(*genus) + " < 2"
                        : "genus undefined on a non-orientable surface");
  }
  return out;
}

ValidationReport validate(const SquareComplex& c) {
  ValidationReport r;
  const int n = c.squares();
  r.squares = n;
  // The annulus is connected and every slot is paired, so the quotient is a
  // connected closed surface; the complementary regions are the vertex disks.
  r.connected = r.closed = r.filling = true;

  const auto classes = quotient_vertices(c);
  r.vertices = static_cast<int>(classes.members.size());
  for (const auto& m : classes.members) r.face_sizes.push_back(2 * static_cast<int>(m.size()));
  r.no_bigons = std::all_of(r.face_sizes.begin(), r.face_sizes.end(), [](int s) { return s >= 4; });

  r.orientable = trace_darts(c).consistent();

  const auto orbit = beta_orbit(c);
  std::vector<char> seen(n, 0);
  bool distinct = true;
  for (int s : orbit) {
    if (seen[s]) distinct = false;
    seen[s] = 1;
  }
  r.beta_connected = distinct && static_cast<int>(orbit.size()) == n;

  r.euler_characteristic = r.vertices - n;
  if (r.orientable) r.genus = (2 - r.euler_characteristic) / 2;
  r.genus_at_least_2 = r.genus && *r.genus >= 2;
  return r;
}

nlohmann::json to_json(const ValidationReport& r) {
  nlohmann::json j;
  j["squares"] = r.squares;
  j["ok"] = r.ok();
  j["connected"] = r.connected;
  j["closed"] = r.closed;
  j["filling"] = r.filling;
  j["orientable"] = r.orientable;
  j["beta_connected"] = r.beta_connected;
  j["no_bigons"] = r.no_bigons;
  j["genus_at_least_2"] = r.genus_at_least_2;
  j["genus"] = r.genus ? nlohmann::json(*r.genus) : nlohmann::json(nullptr);
  j["faces"] = r.vertices;
  j["face_sizes"] = r.face_sizes;
  j["euler_characteristic"] = r.euler_characteristic;
  j["failures"] = r.failures();
  return j;
}

std::string to_text(const ValidationReport& r) {
  std::ostringstream os;
  auto mark = [](bool b) { return b ? "ok  " : "FAIL"; };
  os << "squares: " << r.squares << "\n";
  os << mark(r.connected) << " connected\n";
  os << mark(r.closed) << " closed\n";
  os << mark(r.orientable) << " orientable\n";
  os << mark(r.beta_connected) << " beta is a single closed curve\n";
  os << mark(r.no_bigons) << " no bigons (minimal position)\n";
  os << mark(r.genus_at_least_2) << " genus >= 2\n";
  os << "faces (r): " << r.vertices << "\n";
  os << "euler characteristic: " << r.euler_characteristic << "\n";
  os << "genus: " << (r.genus ? std::to_string(*r.genus) : std::string("n/a")) << "\n";
  os << (r.ok() ? "valid\n" : "INVALID\n");
  return os.str();
}

InvalidComplex::InvalidComplex(const ValidationReport& r)
    : std::runtime_error([&] {
        std::string msg = "invalid complex:";
        for (const auto& f : r.failures()) msg += " " + f + ";";
        return msg;
      }()),
      report_(r) {}

std::vector<int> FaceCensus::profile() const {
  std::vector<int> out;
  for (const auto& f : faces) out.push_back(f.sides);
  std::sort(out.begin(), out.end(), std::greater<>());
  return out;
}

namespace {

int label_components(const Darts& d, const DartVertices& dv, bool horizontal) {
  detail::UnionFind uf(dv.count);
  for (int e = 0; e < d.edge_count(); ++e) {
    if (d.horizontal(e) == horizontal) uf.unite(dv.of_dart[2 * e], dv.of_dart[2 * e + 1]);
  }
  return uf.sets();
}

}  // namespace

FaceCensus face_census(const SquareComplex& c) {
  const auto report = validate(c);
  if (!report.ok()) throw InvalidComplex(report);
  const Darts d = trace_darts(c);
  const DartVertices dv = dart_vertices(d);

  FaceCensus out;
  out.squares = c.squares();
  out.r = dv.count;
  out.genus = *report.genus;
  for (int v = 0; v < dv.count; ++v) {
    Face face;
    face.id = v;
    for (int dart : dv.rotation[v]) face.corners.push_back(d.corner_after[dart]);
    face.sides = static_cast<int>(face.corners.size());
    out.faces.push_back(std::move(face));
  }
  out.alpha_separating = label_components(d, dv, true) == 2;
  out.beta_separating = label_components(d, dv, false) == 2;
  return out;
}

nlohmann::json to_json(const FaceCensus& f) {
  nlohmann::json j;
  j["squares"] = f.squares;
  j["genus"] = f.genus;
  j["r"] = f.r;
  j["profile"] = f.profile();
  j["alpha_separating"] = f.alpha_separating;
  j["beta_separating"] = f.beta_separating;
  auto faces = nlohmann::json::array();
  for (const auto& face : f.faces) {
    std::vector<std::string> corners;
    for (const auto& k : face.corners)
      corners.push_back(std::string(corner_name(k.type)) + std::to_string(k.square));
    faces.push_back({{"id", face.id}, {"sides", face.sides}, {"corners", corners}});
  }
  j["faces"] = faces;
  return j;
}

}  // namespace fillgeo
