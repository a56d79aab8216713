#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <numbers>
#include <sys/wait.h>

#include <json.hpp>

#include "fillgeo/cli.hpp"
#include "fillgeo/disk_polygon.hpp"
#include "fillgeo/explore.hpp"
#include "fillgeo/gluing.hpp"
#include "fillgeo/hypgeo.hpp"
#include "support.hpp"

using namespace fillgeo;
using nlohmann::json;
using fillgeo::test::data_path;
using fillgeo::test::fixture;
using fillgeo::test::slurp;

namespace {

std::string golden(const std::string& name) {
  return slurp(std::string(FILLGEO_GOLDEN) + "/" + name);
}

std::string dumped(const json& j) { return j.dump(2) + "\n"; }

cli::CommandOutcome run(std::vector<std::string> args) {
  args.insert(args.begin(), "fillgeo");
  return cli::run(args);
}

struct Process {
  int status = -1;
  std::string out;
};

Process spawn(const std::string& args) {
  Process p;
  const std::string cmd = std::string(FILLGEO_BINARY) + " " + args + " 2>/dev/null";
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe);
  char buf[4096];
  std::size_t got;
  while ((got = fread(buf, 1, sizeof buf, pipe)) > 0) p.out.append(buf, got);
  const int raw = pclose(pipe);
  p.status = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
  return p;
}

}  // namespace

TEST_CASE("golden: validate") {
  const auto c = fixture("minimal_g3.cmplx");
  const std::string want = golden("validate_minimal_g3.json");
  CHECK(dumped(to_json(validate(c))) == want);
  const auto o = run({"--json", "validate", data_path("minimal_g3.cmplx")});
  CHECK(o.exit_code == 0);
  CHECK(o.output == want);
}

TEST_CASE("golden: analyze") {
  const auto c = fixture("g2_r2.cmplx");
  const json lib = {{"census", to_json(face_census(c))}, {"dual_graph", to_json(DualGraph(c))}};
  const std::string want = golden("analyze_g2_r2.json");
  CHECK(dumped(lib) == want);
  CHECK(run({"--json", "analyze", data_path("g2_r2.cmplx")}).output == want);
}

TEST_CASE("golden: tree") {
  const DualGraph g(fixture("separating_g2.cmplx"));
  json lib = {{"forest", to_json(spread_spanning_forest(g, EdgeLabel::Horizontal))}};
  lib["trees"] = to_json(enumerate_spread_trees(g, 5));
  const std::string want = golden("tree_separating_g2.json");
  CHECK(dumped(lib) == want);
  CHECK(run({"tree", "--json", "--enumerate", "--limit", "5", data_path("separating_g2.cmplx")})
            .output == want);
}

TEST_CASE("golden: glue and bound") {
  const auto c = fixture("separating_g2.cmplx");
  const DualGraph g(c);
  const auto r = glue(c, g, spread_spanning_forest(g, EdgeLabel::Horizontal));
  const json lib = {{"gluing", to_json(g, r)},
                    {"ledger_violations", ledger_violations(r, face_census(c))},
                    {"bound", to_json(lower_bound(c))}};
  const std::string want = golden("glue_separating_g2.json");
  CHECK(dumped(lib) == want);
  CHECK(run({"--json", "glue", data_path("separating_g2.cmplx")}).output == want);

  const std::string bound = golden("bound_minimal_g3.json");
  CHECK(dumped(to_json(lower_bound(fixture("minimal_g3.cmplx")))) == bound);
  CHECK(run({"--json", "bound", data_path("minimal_g3.cmplx")}).output == bound);
  const json b = json::parse(bound);
  CHECK(b["genus"] == 3);
  CHECK(b["r"] == 1);
  CHECK(b["alpha_route"]["n_Q"] == json::array({20}));
}

TEST_CASE("golden: enumerate") {
  EnumerateOptions o;
  o.filters.genus = 3;
  const auto entries = enumerate(5, o);
  json list = json::array();
  for (const auto& e : entries) list.push_back(to_json(e));
  const json lib = {{"n", 5}, {"count", entries.size()}, {"lemma", to_json(verify_lemma(entries))},
                    {"entries", list}};
  const std::string want = golden("enumerate_n5_g3.json");
  CHECK(dumped(lib) == want);
  CHECK(run({"--json", "enumerate", "--n", "5", "--genus", "3"}).output == want);
}

TEST_CASE("golden: counterexample search") {
  const auto o = find_counterexample({parse_profile("8,8,4x8"), 2, 50'000'000, 1});
  const std::string want = golden("search_counterexample.json");
  CHECK(dumped(to_json(o)) == want);
  const auto out = run({"--json", "search-counterexample", "--genus", "2", "--profile", "8,8,4x8",
                        "--seed", "1"});
  CHECK(out.exit_code == 0);
  CHECK(out.output == want);
}

TEST_CASE("golden: numeric reports") {
  const std::string constants = golden("constants.json");
  CHECK(dumped(to_json(hyp::constants_check())) == constants);
  CHECK(run({"--json", "constants"}).output == constants);

  const std::string bezdek = golden("bezdek_12.json");
  CHECK(dumped(to_json(disk::bezdek_spot_check(12, 4 * std::numbers::pi, 200, 3))) == bezdek);
  CHECK(run({"--json", "bezdek", "--n", "12", "--area", "4pi", "--trials", "200", "--seed", "3"})
            .output == bezdek);

  const std::string table = golden("table_5_12.csv");
  CHECK(hyp::derivative_table_csv(5, 12) == table);
  CHECK(run({"table", "--min", "5", "--max", "12"}).output == table);
}

TEST_CASE("golden: rejected complex") {
  const std::string want = golden("validate_bad.json");
  CHECK(dumped(to_json(validate(fixture("bad.cmplx")))) == want);
  const auto o = run({"--json", "validate", data_path("bad.cmplx")});
  CHECK(o.exit_code == 1);
  CHECK(o.output == want);
}

TEST_CASE("exit codes") {
  CHECK(run({"constants"}).exit_code == 0);
  CHECK(run({}).exit_code == 2);
  CHECK(run({"frobnicate"}).exit_code == 2);
  CHECK(run({"validate"}).exit_code == 2);
  CHECK(run({"validate", "--bogus", data_path("bad.cmplx")}).exit_code == 2);
  CHECK(run({"validate", data_path("missing.cmplx")}).exit_code == 2);
  CHECK(run({"table", "--min", "4"}).exit_code == 1);
  CHECK(run({"bezdek", "--area", "lots"}).exit_code == 1);
  CHECK(run({"enumerate", "--n", "11"}).exit_code == 1);
  CHECK(run({"search-counterexample", "--profile", "8,8,8,4x7"}).exit_code == 1);
  CHECK(run({"search-counterexample", "--budget", "10"}).exit_code == 1);
  CHECK(run({"--help"}).exit_code == 0);
}

TEST_CASE("invalid complex lists its failures") {
  const auto o = run({"tree", data_path("bad.cmplx")});
  CHECK(o.exit_code == 1);
  CHECK(o.output.find("FAIL beta is a single closed curve") != std::string::npos);
  CHECK(o.output.find("FAIL genus >= 2") != std::string::npos);
}

TEST_CASE("parse errors name the file and position") {
  const auto dir = std::filesystem::temp_directory_path() / "fillgeo_cli_test";
  std::filesystem::create_directories(dir);
  const auto path = (dir / "broken.cmplx").string();
  {
    std::ofstream f(path);
    f << "squares 2\nglue t0 b7\n";
  }
  const auto o = run({"validate", path});
  CHECK(o.exit_code == 1);
  CHECK(o.error.find(path + ": line 2, column 9") != std::string::npos);
  std::filesystem::remove_all(dir);
}

TEST_CASE("JSON mode always emits one object") {
  for (const auto& args : std::vector<std::vector<std::string>>{
           {"--json", "frobnicate"},
           {"--json", "validate", data_path("missing.cmplx")},
           {"--json", "tree", data_path("bad.cmplx")},
           {"--json", "table", "--min", "4"},
           {"--json", "constants"}}) {
    const auto o = run(args);
    json j;
    CHECK_NOTHROW(j = json::parse(o.output));
    CHECK(j.is_object());
    if (o.exit_code != 0) {
      CHECK(j.contains("error"));
      CHECK(j["exit_code"] == o.exit_code);
    }
  }
}

TEST_CASE("enumerate writes only inside --out") {
  const auto dir = std::filesystem::temp_directory_path() / "fillgeo_cli_out";
  std::filesystem::remove_all(dir);
  const auto o = run({"enumerate", "--n", "4", "--out", (dir / "census").string()});
  CHECK(o.exit_code == 0);
  std::vector<std::string> names;
  for (const auto& e : std::filesystem::recursive_directory_iterator(dir))
    names.push_back(e.path().lexically_relative(dir).string());
  std::sort(names.begin(), names.end());
  CHECK(names == std::vector<std::string>{"census", "census/index.csv", "census/n4_00000.cmplx",
                                          "census/n4_00001.cmplx"});
  std::filesystem::remove_all(dir);
}

TEST_CASE("job count from the environment") {
  unsetenv("FILLGEO_JOBS");
  CHECK(cli::default_jobs() == 0);
  setenv("FILLGEO_JOBS", "3", 1);
  CHECK(cli::default_jobs() == 3);
  setenv("FILLGEO_JOBS", "many", 1);
  CHECK(cli::default_jobs() == 0);
  unsetenv("FILLGEO_JOBS");
  // Results do not depend on the worker count.
  CHECK(run({"--jobs", "1", "--json", "enumerate", "--n", "5"}).output ==
        run({"--jobs", "4", "--json", "enumerate", "--n", "5"}).output);
}

TEST_CASE("the installed binary is the same adapter") {
  const auto p = spawn("--json bound " + data_path("minimal_g3.cmplx"));
  CHECK(p.status == 0);
  CHECK(p.out == golden("bound_minimal_g3.json"));

  const auto bad = spawn("tree " + data_path("bad.cmplx"));
  CHECK(bad.status == 1);
  CHECK(spawn("no-such-command").status == 2);

  const auto text = spawn("bound " + data_path("minimal_g3.cmplx"));
  CHECK(text.out.find("genus 3, r = 1") != std::string::npos);
  CHECK(text.out.find("20-gon") != std::string::npos);
}
