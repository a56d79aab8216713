#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "fillgeo/square_complex.hpp"

namespace fillgeo {

// Symmetries of the ring of squares: rotate by `shift`, optionally reverse
// the ring direction, optionally swap top and bottom. Swapping the two
// curves is not a symmetry here.
struct RingSymmetry {
  int shift = 0;
  bool reflect = false;
  bool swap_sides = false;
};

SquareComplex transform(const SquareComplex& c, RingSymmetry s);
// Representative minimal under all 4n ring symmetries (compared by
// partner/flip per slot code).
SquareComplex canonical_form(const SquareComplex& c);

struct CensusEntry {
  std::string id;
  SquareComplex complex;
  int genus = 0;
  int r = 0;
  std::vector<int> profile;
  bool alpha_separating = false;
  bool beta_separating = false;
  long spread_trees = 0;
  bool spread_trees_truncated = false;
  bool lemma_ok = false;
};

struct EnumerateFilters {
  std::optional<int> genus;
  std::optional<int> r;
  std::optional<bool> alpha_separating;
  std::optional<bool> beta_separating;
};

struct EnumerateOptions {
  EnumerateFilters filters;
  std::size_t tree_limit = 100000;
  int max_squares = 10;
  int jobs = 0;  // 0: OpenMP default
};

// Counts of orientable candidates at each validation stage, before
// symmetry reduction.
struct RawCounts {
  long candidates = 0;   // orientable pairings: (2n-1)!!
  long beta_connected = 0;
  long no_bigons = 0;    // and beta connected
  long valid = 0;        // and genus >= 2
};

// Exhaustive count without pruning; meant for very small n.
RawCounts raw_counts(int n);

class ResourceCap : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// One entry per symmetry class of valid complexes with n squares that pass
// the filters, in canonical order. Throws ResourceCap above max_squares.
std::vector<CensusEntry> enumerate(int n, const EnumerateOptions& options = {});
// Serial reference path for the same result.
std::vector<CensusEntry> enumerate_serial(int n, const EnumerateOptions& options = {});

// Census statistics for one complex (which must be valid).
CensusEntry make_entry(const SquareComplex& c, std::size_t tree_limit, std::string id = {});

struct LemmaReport {
  long entries = 0;
  long nonseparating = 0;
  long separating = 0;
  std::vector<std::string> violations;
  bool ok() const { return violations.empty(); }
};

LemmaReport verify_lemma(const std::vector<CensusEntry>& entries);

struct CounterexampleQuery {
  std::vector<int> profile;  // face side counts
  int genus = 2;
  long budget = 50'000'000;  // search nodes
  std::uint64_t seed = 1;
};

struct CounterexampleOutcome {
  enum class Status { Found, NotFound, BudgetExhausted };
  Status status = Status::NotFound;
  long nodes = 0;
  long candidates = 0;  // complete complexes matching the profile
  std::optional<CensusEntry> entry;
  std::vector<int> large_faces;  // vertices of the largest faces in entry
  bool spread_path_between_large = true;
};

// Searches pairings whose faces match the profile for a complex whose dual
// graph has no spread spanning tree. Throws std::invalid_argument when the
// profile is inconsistent with the Euler characteristic of the genus.
CounterexampleOutcome find_counterexample(const CounterexampleQuery& q);

const char* status_name(CounterexampleOutcome::Status s);

nlohmann::json to_json(const CensusEntry& e);
nlohmann::json to_json(const LemmaReport& r);
nlohmann::json to_json(const CounterexampleOutcome& o);

// Writes <id>.cmplx per entry and index.csv into dir (created if needed).
void write_census(const std::filesystem::path& dir, const std::vector<CensusEntry>& entries);
std::string census_index_csv(const std::vector<CensusEntry>& entries);

std::string profile_string(const std::vector<int>& profile, char sep = ';');
// "8,8,4x8" -> {8,8,4,4,4,4,4,4,4,4}
std::vector<int> parse_profile(const std::string& text);

}  // namespace fillgeo
