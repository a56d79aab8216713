#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

namespace fillgeo {

enum class Side : std::uint8_t { Top = 0, Bottom = 1 };

// One of the 2n horizontal unit edges of the annulus of squares. Square i
// occupies [i, i+1] x [0, 1]; both slots run in the ring direction.
struct SlotId {
  int square = 0;
  Side side = Side::Top;

  // t0 < b0 < t1 < b1 < ...
  int code() const { return 2 * square + (side == Side::Bottom ? 1 : 0); }
  static SlotId from_code(int code) {
    return {code / 2, (code % 2) ? Side::Bottom : Side::Top};
  }
  std::string name() const;

  friend bool operator==(const SlotId&, const SlotId&) = default;
};

class ParseError : public std::runtime_error {
 public:
  enum class Kind { Syntax, SlotOutOfRange, SlotReused, SelfPaired, Unmatched };

  ParseError(Kind kind, int line, int column, const std::string& what);
  Kind kind() const { return kind_; }
  // 1-based; 0 when the error is not tied to a position.
  int line() const { return line_; }
  int column() const { return column_; }

 private:
  Kind kind_;
  int line_;
  int column_;
};

// A filling pair in minimal position, encoded as n unit squares in a ring
// whose 2n horizontal slots are identified in pairs. The core curve of the
// ring is alpha; the vertical mid-arcs make up beta.
//
// The pairing is stored per slot code, which makes the representation
// canonical: two complexes are equal iff they describe the same gluing.
class SquareComplex {
 public:
  struct Pair {
    SlotId a;
    SlotId b;
    bool flip = false;
  };

  // Throws std::invalid_argument if the pairs are not a perfect matching of
  // the 2n slots.
  SquareComplex(int squares, const std::vector<Pair>& pairs);

  int squares() const { return n_; }
  int slot_count() const { return 2 * n_; }
  SlotId partner(SlotId s) const { return SlotId::from_code(partner_[s.code()]); }
  int partner_code(int code) const { return partner_[code]; }
  bool flipped(SlotId s) const { return flip_[s.code()] != 0; }
  bool flipped_code(int code) const { return flip_[code] != 0; }
  // Index of the pair containing slot `code` in pairs() order.
  int pair_index(int code) const { return pair_index_[code]; }

  // Pairs in canonical order: lower slot first, sorted by lower slot.
  std::vector<Pair> pairs() const;

  friend bool operator==(const SquareComplex&, const SquareComplex&) = default;

 private:
  int n_;
  std::vector<int> partner_;
  std::vector<std::uint8_t> flip_;
  std::vector<int> pair_index_;
};

SquareComplex parse_complex(std::string_view text);
std::string serialize_complex(const SquareComplex& c);

// Corner of a square, named by its position in the unit square.
enum class CornerType : std::uint8_t { BL, BR, TR, TL };
const char* corner_name(CornerType t);

struct Corner {
  int square = 0;
  CornerType type = CornerType::BL;
  friend bool operator==(const Corner&, const Corner&) = default;
};

// Vertex classes of the quotient, computed from the 2n annulus vertices.
// Annulus vertex code: top vertex u_i -> 2i, bottom vertex w_i -> 2i + 1.
struct VertexClasses {
  std::vector<int> class_of;           // per annulus vertex
  std::vector<std::vector<int>> members;  // per class, ascending
};
VertexClasses quotient_vertices(const SquareComplex& c);

// Edge numbering of the quotient 1-skeleton: horizontal edges 0..n-1 follow
// the canonical pair order, vertical edge n+i is the right side of square i.
// Edge e has darts 2e and 2e+1. For a horizontal edge the even dart is the
// end at the start of its lower slot; for a vertical edge it is the bottom.
struct Darts {
  int squares = 0;
  // Counterclockwise successor of each dart around its vertex; -1 where the
  // corner data is inconsistent (non-orientable gluing).
  std::vector<int> next;
  // The square corner swept when turning from dart d to next[d].
  std::vector<Corner> corner_after;
  // Darts that turned up as the source of zero or of two corners.
  int conflicts = 0;

  int edge_count() const { return 2 * squares; }
  int dart_count() const { return 4 * squares; }
  bool horizontal(int edge) const { return edge < squares; }
  bool consistent() const { return conflicts == 0; }
};

Darts trace_darts(const SquareComplex& c);

// Vertex id of every dart: cycles of Darts::next numbered by their smallest
// dart. Requires d.consistent().
struct DartVertices {
  int count = 0;
  std::vector<int> of_dart;
  std::vector<std::vector<int>> rotation;  // per vertex, starting at smallest dart
};
DartVertices dart_vertices(const Darts& d);

// Slot end -> dart. end = 0 for the slot start, 1 for the slot end.
int slot_dart(const SquareComplex& c, SlotId s, int end);

// Orbit of the beta traversal starting upward through square 0. beta is
// connected iff this visits every square exactly once.
std::vector<int> beta_orbit(const SquareComplex& c);

struct ValidationReport {
  int squares = 0;
  bool connected = true;
  bool closed = true;
  bool filling = true;
  bool orientable = false;
  bool beta_connected = false;
  bool no_bigons = false;
  bool genus_at_least_2 = false;
  int vertices = 0;           // r
  int euler_characteristic = 0;
  std::optional<int> genus;   // orientable case only
  std::vector<int> face_sizes;  // corner degrees, by vertex class

  bool ok() const {
    return connected && closed && filling && orientable && beta_connected &&
           no_bigons && genus_at_least_2;
  }
  std::vector<std::string> failures() const;
};

ValidationReport validate(const SquareComplex& c);
nlohmann::json to_json(const ValidationReport& r);
std::string to_text(const ValidationReport& r);

class InvalidComplex : public std::runtime_error {
 public:
  explicit InvalidComplex(const ValidationReport& r);
  const ValidationReport& report() const { return report_; }

 private:
  ValidationReport report_;
};

struct Face {
  int id = 0;
  int sides = 0;
  std::vector<Corner> corners;  // cyclic, counterclockwise around the vertex
};

struct FaceCensus {
  int squares = 0;
  int r = 0;
  int genus = 0;
  std::vector<Face> faces;
  bool alpha_separating = false;
  bool beta_separating = false;

  // Side counts sorted in decreasing order.
  std::vector<int> profile() const;
};

// Throws InvalidComplex unless validate(c).ok().
FaceCensus face_census(const SquareComplex& c);
nlohmann::json to_json(const FaceCensus& f);

}  // namespace fillgeo
