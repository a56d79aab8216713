#include "fillgeo/cli.hpp"

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <numbers>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "fillgeo/disk_polygon.hpp"
#include "fillgeo/dual_graph.hpp"
#include "fillgeo/explore.hpp"
#include "fillgeo/gluing.hpp"
#include "fillgeo/hypgeo.hpp"
#include "fillgeo/square_complex.hpp"

namespace fillgeo::cli {

namespace {

using nlohmann::json;

// Exit code 2.
struct FileError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Exit code 1.
struct BadInput : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Exit code 1 with a prepared report.
struct Rejected {
  json report;
  std::string text;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FileError("cannot read '" + path + "'");
  std::ostringstream os;
  os << in.rdbuf();
  if (in.bad()) throw FileError("error reading '" + path + "'");
  return os.str();
}

SquareComplex load(const std::string& path) {
  const std::string text = read_file(path);
  try {
    return parse_complex(text);
  } catch (const ParseError& e) {
    throw BadInput(path + ": " + e.what());
  }
}

// Loads and requires a valid complex; rejects with the validation report.
SquareComplex load_valid(const std::string& path) {
  SquareComplex c = load(path);
  const ValidationReport r = validate(c);
  if (!r.ok()) throw Rejected{to_json(r), to_text(r)};
  return c;
}

EdgeLabel parse_label(const std::string& s) {
  return s == "V" || s == "beta" ? EdgeLabel::Vertical : EdgeLabel::Horizontal;
}

// "12.5", "4pi", "4*pi", "pi"
double parse_area(const std::string& s) {
  std::string t = s;
  double factor = 1;
  if (t.size() >= 2 && t.compare(t.size() - 2, 2, "pi") == 0) {
    factor = std::numbers::pi;
    t.erase(t.size() - 2);
    if (!t.empty() && t.back() == '*') t.pop_back();
    if (t.empty()) t = "1";
  }
  std::size_t used = 0;
  double v = 0;
  try {
    v = std::stod(t, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != t.size() || !std::isfinite(v))
    throw std::invalid_argument("bad area '" + s + "'");
  return v * factor;
}

std::string census_text(const FaceCensus& f) {
  std::ostringstream os;
  os << "squares " << f.squares << ", genus " << f.genus << ", r = " << f.r << "\nalpha "
     << (f.alpha_separating ? "separating" : "nonseparating") << ", beta "
     << (f.beta_separating ? "separating" : "nonseparating") << "\n";
  for (const Face& face : f.faces) {
    os << "P" << face.id << ": " << face.sides << " sides, corners";
    for (const Corner& c : face.corners) os << " " << corner_name(c.type) << c.square;
    os << "\n";
  }
  return os.str();
}

std::string forest_text(const SpreadForest& f) {
  std::ostringstream os;
  os << "spread spanning forest: " << f.components << " component(s), " << f.edge_count()
     << " edges:";
  for (int e : f.edges) os << " " << e;
  os << "\n";
  return os.str();
}

std::string counterexample_text(const CounterexampleOutcome& o) {
  std::ostringstream os;
  os << "status: " << status_name(o.status) << "\nnodes: " << o.nodes
     << "\nprofile matches: " << o.candidates << "\n";
  if (o.entry) {
    os << "spread spanning trees: " << o.entry->spread_trees
       << "\nalpha separating: " << (o.entry->alpha_separating ? "yes" : "no")
       << "\nbeta separating: " << (o.entry->beta_separating ? "yes" : "no")
       << "\nlargest faces:";
    for (int v : o.large_faces) os << " v" << v;
    os << "\nspread path between them: " << (o.spread_path_between_large ? "yes" : "no") << "\n"
       << serialize_complex(o.entry->complex);
  }
  return os.str();
}

struct Output {
  json report;
  std::string text;
  int exit_code = 0;
};

struct Options {
  bool json_mode = false;
  int jobs = 0;
};

}  // namespace

int default_jobs() {
  if (const char* env = std::getenv("FILLGEO_JOBS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v > 0 && v < 4096) return static_cast<int>(v);
  }
  return 0;
}

CommandOutcome run(const std::vector<std::string>& args) {
  CLI::App app{"Filling pairs of curves: square complexes, spread trees, gluing and bounds",
               args.empty() ? "fillgeo" : args.front()};
  app.require_subcommand(1);
  app.fallthrough();

  Options opt;
  opt.jobs = default_jobs();
  app.add_flag("--json", opt.json_mode, "Emit one JSON object instead of text");
  app.add_option("--jobs", opt.jobs, "Worker threads for parallel searches (0: default)")
      ->check(CLI::NonNegativeNumber);

  Output out;
  std::function<void()> action;

  std::string file;
  auto* validate_cmd = app.add_subcommand("validate", "Check a complex file");
  validate_cmd->add_option("file", file, "Complex file")->required();
  validate_cmd->callback([&] {
    action = [&] {
      const ValidationReport r = validate(load(file));
      out = {to_json(r), to_text(r), r.ok() ? 0 : 1};
    };
  });

  bool dot = false;
  auto* analyze_cmd = app.add_subcommand("analyze", "Face census and dual graph");
  analyze_cmd->add_option("file", file, "Complex file")->required();
  analyze_cmd->add_flag("--dot", dot, "Print the dual graph in DOT format (text mode)");
  analyze_cmd->callback([&] {
    action = [&] {
      const SquareComplex c = load_valid(file);
      const FaceCensus census = face_census(c);
      const DualGraph g(c);
      out.report = {{"census", to_json(census)}, {"dual_graph", to_json(g)}};
      out.text = dot ? render_dot(g) : census_text(census) + render_text(g);
    };
  });

  bool enumerate_trees = false;
  std::size_t limit = 1000;
  std::string label = "H";
  auto* tree_cmd = app.add_subcommand("tree", "Spread spanning forest");
  tree_cmd->add_option("file", file, "Complex file")->required();
  tree_cmd->add_option("--label", label, "Curve whose sides the forest follows")
      ->check(CLI::IsMember({"H", "V", "alpha", "beta"}));
  tree_cmd->add_flag("--enumerate", enumerate_trees, "List all spread spanning trees");
  tree_cmd->add_option("--limit", limit, "Stop listing after this many trees")
      ->check(CLI::PositiveNumber);
  tree_cmd->callback([&] {
    action = [&] {
      const SquareComplex c = load_valid(file);
      const DualGraph g(c);
      const SpreadForest f = spread_spanning_forest(g, parse_label(label));
      out.report = {{"forest", to_json(f)}};
      out.text = forest_text(f);
      if (enumerate_trees) {
        const TreeEnumeration t = enumerate_spread_trees_parallel(g, limit, opt.jobs);
        out.report["trees"] = to_json(t);
        std::ostringstream os;
        os << "spread spanning trees: " << t.trees.size() << (t.truncated ? "+" : "") << "\n";
        for (const auto& tree : t.trees) {
          if (tree.empty()) os << "(no edges)";
          for (std::size_t i = 0; i < tree.size(); ++i) os << (i ? " " : "") << tree[i];
          os << "\n";
        }
        out.text += os.str();
      }
    };
  });

  auto* glue_cmd = app.add_subcommand("glue", "Glue the complementary polygons along a forest");
  glue_cmd->add_option("file", file, "Complex file")->required();
  glue_cmd->add_option("--label", label, "Curve whose sides the forest follows")
      ->check(CLI::IsMember({"H", "V", "alpha", "beta"}));
  glue_cmd->callback([&] {
    action = [&] {
      const SquareComplex c = load_valid(file);
      const DualGraph g(c);
      const GluingResult r = glue(c, g, spread_spanning_forest(g, parse_label(label)));
      const auto violations = ledger_violations(r, face_census(c));
      const LowerBoundReport b = lower_bound(c);
      out.report = {{"gluing", to_json(g, r)},
                    {"ledger_violations", violations},
                    {"bound", to_json(b)}};
      out.text = to_text(g, r) + to_text(b);
      for (const auto& v : violations) out.text += "ledger violation: " + v + "\n";
      out.exit_code = violations.empty() ? 0 : 1;
    };
  });

  auto* bound_cmd = app.add_subcommand("bound", "Length lower bound for a complex");
  bound_cmd->add_option("file", file, "Complex file")->required();
  bound_cmd->callback([&] {
    action = [&] {
      const LowerBoundReport b = lower_bound(load_valid(file));
      out = {to_json(b), to_text(b), 0};
    };
  });

  int squares = 0;
  std::optional<int> genus_filter, r_filter;
  std::optional<bool> alpha_filter, beta_filter;
  std::string out_dir;
  EnumerateOptions enum_opts;
  auto* enumerate_cmd = app.add_subcommand("enumerate", "Census of valid complexes with n squares");
  enumerate_cmd->add_option("--n", squares, "Number of squares")->required()->check(CLI::PositiveNumber);
  enumerate_cmd->add_option("--genus", genus_filter, "Keep only this genus");
  enumerate_cmd->add_option("--r", r_filter, "Keep only this number of faces");
  enumerate_cmd->add_option("--alpha-separating", alpha_filter, "Keep only this alpha type (true/false)");
  enumerate_cmd->add_option("--beta-separating", beta_filter, "Keep only this beta type (true/false)");
  enumerate_cmd->add_option("--tree-limit", enum_opts.tree_limit, "Cap on spread trees counted per entry");
  enumerate_cmd->add_option("--max-squares", enum_opts.max_squares, "Refuse larger n");
  enumerate_cmd->add_option("--out", out_dir, "Directory for complex files and index.csv");
  enumerate_cmd->callback([&] {
    action = [&] {
      enum_opts.filters = {genus_filter, r_filter, alpha_filter, beta_filter};
      enum_opts.jobs = opt.jobs;
      const auto entries = enumerate(squares, enum_opts);
      const LemmaReport lemma = verify_lemma(entries);
      if (!out_dir.empty()) {
        try {
          write_census(out_dir, entries);
        } catch (const std::exception& e) {
          throw FileError(e.what());
        }
      }
      json list = json::array();
      for (const auto& e : entries) list.push_back(to_json(e));
      out.report = {{"n", squares}, {"count", entries.size()}, {"lemma", to_json(lemma)},
                    {"entries", list}};
      out.text = census_index_csv(entries) + std::to_string(entries.size()) + " entries, " +
                 std::to_string(lemma.violations.size()) + " lemma violations\n";
      for (const auto& v : lemma.violations) out.text += v + "\n";
      out.exit_code = lemma.ok() ? 0 : 1;
    };
  });

  CounterexampleQuery query;
  std::string profile = "8,8,4x8";
  auto* search_cmd = app.add_subcommand("search-counterexample",
                                        "Look for a complex without spread spanning trees");
  search_cmd->add_option("--genus", query.genus, "Genus")->capture_default_str();
  search_cmd->add_option("--profile", profile, "Face side counts, e.g. 8,8,4x8")->capture_default_str();
  search_cmd->add_option("--budget", query.budget, "Search node budget")->capture_default_str();
  search_cmd->add_option("--seed", query.seed, "Seed for the candidate order")->capture_default_str();
  search_cmd->callback([&] {
    action = [&] {
      query.profile = parse_profile(profile);
      const CounterexampleOutcome o = find_counterexample(query);
      out = {to_json(o), counterexample_text(o),
             o.status == CounterexampleOutcome::Status::Found ? 0 : 1};
    };
  });

  int table_min = 5, table_max = 20;
  auto* table_cmd = app.add_subcommand("table", "CSV of f, f' and f'' at integers");
  table_cmd->add_option("--min", table_min, "First n")->capture_default_str();
  table_cmd->add_option("--max", table_max, "Last n")->capture_default_str();
  table_cmd->callback([&] {
    action = [&] {
      const std::string csv = hyp::derivative_table_csv(table_min, table_max);
      out.report = {{"min", table_min}, {"max", table_max}, {"csv", csv}};
      out.text = csv;
    };
  });

  auto* constants_cmd = app.add_subcommand("constants", "Check the numeric constants of the proof");
  constants_cmd->callback([&] {
    action = [&] {
      const hyp::ConstantsReport r = hyp::constants_check();
      out = {to_json(r), to_text(r), r.ok() ? 0 : 1};
    };
  });

  int bezdek_n = 12;
  std::string area = "4pi";
  long trials = 10000;
  std::uint64_t seed = 1;
  auto* bezdek_cmd = app.add_subcommand("bezdek", "Random polygons against the regular one");
  bezdek_cmd->add_option("--n", bezdek_n, "Side count")->capture_default_str();
  bezdek_cmd->add_option("--area", area, "Target area, e.g. 12.5 or 4pi")->capture_default_str();
  bezdek_cmd->add_option("--trials", trials, "Number of samples")->capture_default_str();
  bezdek_cmd->add_option("--seed", seed, "Seed")->capture_default_str();
  bezdek_cmd->callback([&] {
    action = [&] {
      const disk::BezdekReport r =
          disk::bezdek_spot_check_parallel(bezdek_n, parse_area(area), trials, seed, opt.jobs);
      out = {to_json(r), to_text(r), r.ok() ? 0 : 1};
    };
  });

  CommandOutcome result;
  auto fail = [&](int code, const std::string& message, json report = nullptr,
                  const std::string& text = {}) {
    result.exit_code = code;
    if (opt.json_mode) {
      json j = report.is_null() ? json::object() : report;
      j["error"] = message;
      j["exit_code"] = code;
      result.output = j.dump(2) + "\n";
    } else {
      result.output = text;
    }
    result.error = message + "\n";
  };

  try {
    std::vector<std::string> rest(args.rbegin(), args.rend());
    if (!rest.empty()) rest.pop_back();
    app.parse(rest);
  } catch (const CLI::CallForHelp&) {
    result.output = app.help();
    return result;
  } catch (const CLI::CallForAllHelp&) {
    result.output = app.help("", CLI::AppFormatMode::All);
    return result;
  } catch (const CLI::ParseError& e) {
    fail(2, e.what());
    if (!opt.json_mode) result.error += "Run with --help for usage.\n";
    return result;
  }

  try {
    action();
    result.exit_code = out.exit_code;
    result.output = opt.json_mode ? out.report.dump(2) + "\n" : out.text;
  } catch (const Rejected& r) {
    fail(1, "invalid complex", r.report, r.text);
  } catch (const FileError& e) {
    fail(2, e.what());
  } catch (const BadInput& e) {
    fail(1, e.what());
  } catch (const InvalidComplex& e) {
    fail(1, e.what(), to_json(e.report()), to_text(e.report()));
  } catch (const ForestError& e) {
    fail(1, e.what());
  } catch (const ResourceCap& e) {
    fail(1, e.what());
  } catch (const std::invalid_argument& e) {
    fail(1, e.what());
  } catch (const std::domain_error& e) {
    fail(1, e.what());
  } catch (const disk::PolygonError& e) {
    fail(1, e.what());
  } catch (const std::exception& e) {
    fail(2, std::string("internal error: ") + e.what());
  }
  return result;
}

}  // namespace fillgeo::cli
