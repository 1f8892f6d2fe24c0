#include <doctest.h>

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "synthetic.hpp"
#include "uavloc/cli.hpp"
#include "uavloc/io.hpp"
#include "uavloc/oracles.hpp"
#include "uavloc/scenario.hpp"

namespace fs = std::filesystem;
using namespace uavloc;

namespace {

const std::string kCli = UAVLOC_CLI_PATH;
const std::string kPaperScenario = std::string(UAVLOC_SOURCE_DIR) + "/configs/paper.json";

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("uavloc_cli_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

std::vector<std::string> lines(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  for (std::string l; std::getline(in, l);) out.push_back(l);
  return out;
}

// Drops the planner wall-time column, which measures the host rather than the mission.
std::string mask_wall_time(const std::string& row) {
  const auto& cols = metrics_columns();
  const auto at = std::find(cols.begin(), cols.end(), "planner_wall_time") - cols.begin();
  std::vector<std::string> cells;
  std::istringstream in(row);
  for (std::string c; std::getline(in, c, ',');) cells.push_back(c);
  if (static_cast<std::size_t>(at) < cells.size()) cells[at] = "*";
  std::string out;
  for (std::size_t i = 0; i < cells.size(); ++i) out += (i ? "," : "") + cells[i];
  return out;
}

int shell(const std::string& args) {
  const int status = std::system((kCli + " " + args + " >/dev/null 2>&1").c_str());
  return WEXITSTATUS(status);
}

fs::path write_json(const fs::path& path, const nlohmann::json& j) {
  std::ofstream(path) << j.dump(2);
  return path;
}

fs::path quick_scenario(const fs::path& dir, nlohmann::json overrides = {}) {
  nlohmann::json j = scenario_to_json(load_scenario_file(kPaperScenario));
  j["population"] = 10;
  j["iterations"] = 10;
  for (const auto& [k, v] : overrides.items()) j[k] = v;
  return write_json(dir / "quick.json", j);
}

nlohmann::json estimates_doc(const PlanningProblem& p) {
  nlohmann::json list = nlohmann::json::array();
  for (const auto& t : p.targets) {
    list.push_back({{"person", t.person},
                    {"position", {t.position.x, t.position.y}},
                    {"velocity", {t.velocity.x, t.velocity.y}},
                    {"error_bound", t.error_bound}});
  }
  nlohmann::json starts = nlohmann::json::array();
  for (const auto& s : p.starts) starts.push_back({s.x, s.y});
  return {{"starts", starts}, {"homes", starts}, {"estimates", list}};
}

}  // namespace

TEST_CASE("cli run: full scenario writes its outputs") {
  const fs::path dir = scratch("run");
  cli::RunArgs a{kPaperScenario, "epso", 7, (dir / "first").string()};
  std::ostringstream out, err;
  REQUIRE(cli::cmd_run(a, out, err) == cli::kExitOk);
  CHECK(out.str().find("makespan") != std::string::npos);
  CHECK(out.str().find("max_error") != std::string::npos);
  for (const char* f : {"trace.jsonl", "report.json", "metrics.csv"}) {
    CHECK(fs::file_size(dir / "first" / f) > 0);
  }
  const auto rows = lines(slurp(dir / "first" / "metrics.csv"));
  REQUIRE(rows.size() == 2);
  CHECK(rows[0] == metrics_header());

  const auto report = nlohmann::json::parse(slurp(dir / "first" / "report.json"));
  REQUIRE(report.contains("persons"));
  CHECK(report["scan_paths"].size() == 4);
  CHECK(report["scan_estimates"].size() == report["persons"].size());
  for (const auto& p : report["persons"]) {
    const double absolute = p["mean_range_error"]["absolute"];
    const double signed_form = p["mean_range_error"]["signed"];
    CHECK(absolute >= 0.0);
    CHECK(signed_form == doctest::Approx(-absolute));
  }
  const auto trace = lines(slurp(dir / "first" / "trace.jsonl"));
  REQUIRE_FALSE(trace.empty());
  const auto rec = nlohmann::json::parse(trace.front());
  for (const char* key : {"slot", "entity", "x", "y", "z", "vx", "vy"}) CHECK(rec.contains(key));

  a.out = (dir / "second").string();
  std::ostringstream out2, err2;
  REQUIRE(cli::cmd_run(a, out2, err2) == cli::kExitOk);
  const auto again = lines(slurp(dir / "second" / "metrics.csv"));
  CHECK(mask_wall_time(again[1]) == mask_wall_time(rows[1]));
  CHECK(slurp(dir / "first" / "trace.jsonl") == slurp(dir / "second" / "trace.jsonl"));
}

TEST_CASE("cli run: configuration errors exit 1") {
  const fs::path dir = scratch("errors");
  CHECK(shell("run --scenario " + kPaperScenario + " --planner foo --out " + dir.string()) == 1);
  CHECK(shell("run --scenario " + (dir / "missing.json").string()) == 1);
  CHECK(shell("run --planner epso") == 1);
  CHECK(shell("frobnicate") == 1);
  nlohmann::json bad = scenario_to_json(Scenario{});
  bad["comm_range"] = 90.0;
  CHECK(shell("run --scenario " + write_json(dir / "bad.json", bad).string()) == 1);
}

TEST_CASE("cli run: unreachable accuracy exits 2") {
  const fs::path dir = scratch("infeasible");
  const fs::path sc = quick_scenario(dir, {{"e_th", 5.0}, {"person_count", 2}});
  std::ostringstream out, err;
  CHECK(cli::cmd_run({sc.string(), "epso", 0, (dir / "o").string()}, out, err) ==
        cli::kExitInfeasible);
  CHECK(err.str().find("infeasible") != std::string::npos);
}

TEST_CASE("cli sweep: one row per grid point in run order") {
  const fs::path dir = scratch("sweep");
  cli::SweepArgs a;
  a.scenario = quick_scenario(dir).string();
  a.persons = {6, 8, 10};
  a.seeds = 5;
  a.planners = {"epso", "pso", "ga"};
  a.out = (dir / "out").string();
  std::ostringstream out, err;
  REQUIRE(cli::cmd_sweep(a, out, err) == cli::kExitOk);
  const auto rows = lines(slurp(dir / "out" / "metrics.csv"));
  REQUIRE(rows.size() == 46);
  CHECK(rows[0] == metrics_header());
  CHECK(rows[0] == "seed,persons,planner,makespan,max_error,mean_error,fraction_within_e_th,"
                   "total_energy,planner_wall_time,replans");
  std::set<std::string> ids;
  std::size_t k = 1;
  for (int s : a.persons) {
    for (int seed = 0; seed < a.seeds; ++seed) {
      for (const auto& p : a.planners) {
        const std::string prefix = std::to_string(seed) + "," + std::to_string(s) + "," + p + ",";
        CHECK(rows[k].rfind(prefix, 0) == 0);
        ids.insert(prefix);
        ++k;
      }
    }
  }
  CHECK(ids.size() == 45);

  // A single row re-run on its own reproduces the sweep row.
  nlohmann::json j = nlohmann::json::parse(slurp(a.scenario));
  j["person_count"] = 8;
  const fs::path eight = write_json(dir / "eight.json", j);
  std::ostringstream o2, e2;
  REQUIRE(cli::cmd_run({eight.string(), "pso", 3, (dir / "single").string()}, o2, e2) ==
          cli::kExitOk);
  const auto single = lines(slurp(dir / "single" / "metrics.csv"));
  const std::size_t row_index = 1 + (1 * 5 + 3) * 3 + 1;
  CHECK(mask_wall_time(single[1]) == mask_wall_time(rows[row_index]));
}

TEST_CASE("cli validate: every oracle passes and kappa is written") {
  const fs::path dir = scratch("validate");
  std::ostringstream out, err;
  CHECK(cli::cmd_validate({dir.string(), ""}, out, err) == cli::kExitOk);
  const auto report = lines(out.str());
  CHECK(report.size() >= 5);
  for (const auto& l : report) CHECK(l.rfind("PASS ", 0) == 0);
  const auto kappa = nlohmann::json::parse(slurp(dir / "kappa.json"));
  CHECK(kappa["kappa"].get<double>() > 0.0);
  CHECK(kappa["kappa"].get<double>() < 10.0);
}

TEST_CASE("cli plan: trivial and desk-scale instances") {
  const fs::path dir = scratch("plan");
  const fs::path overhead = quick_scenario(dir, {{"edge_access", false},
                                                 {"population", 50},
                                                 {"iterations", 200}});
  PlanningProblem one;
  one.targets = {{0, 0, {300, 200}, {0, 0}, 5.0}};
  one.starts = {{0, 0}, {280, 0}, {560, 0}, {840, 0}};
  const fs::path one_file = write_json(dir / "one.json", estimates_doc(one));
  std::ostringstream out, err;
  REQUIRE(cli::cmd_plan({one_file.string(), overhead.string(), "epso", 0}, out, err) ==
          cli::kExitOk);
  CHECK(out.str().find(" p0") != std::string::npos);
  CHECK(out.str().find("makespan") != std::string::npos);

  const auto six = synth::random_problem(6, 2, 41);
  const fs::path six_file = write_json(dir / "six.json", estimates_doc(six));
  std::ostringstream a, b, e;
  REQUIRE(cli::cmd_plan({six_file.string(), overhead.string(), "epso", 1}, a, e) == cli::kExitOk);
  REQUIRE(cli::cmd_plan({six_file.string(), overhead.string(), "epso", 1}, b, e) == cli::kExitOk);
  CHECK(a.str() == b.str());
  const auto last = lines(a.str()).back();
  const double makespan = std::stod(last.substr(last.find(' ') + 1));
  const auto best = oracle::brute_force_mtsp(six, 25.0, 0.025);
  CHECK(makespan <= 1.02 * best.makespan + 1e-3);

  std::ofstream(dir / "broken.json") << "{\"estimates\": [{\"position\": [1]}]}";
  std::ostringstream o3, e3;
  CHECK(cli::cmd_plan({(dir / "broken.json").string(), overhead.string(), "epso", 0}, o3, e3) ==
        cli::kExitConfig);
  CHECK(shell("plan --estimates " + (dir / "nope.json").string() + " --scenario " +
              overhead.string()) == 1);
}

TEST_CASE("estimates parsing") {
  const std::vector<Vec2> corners{{0, 0}, {10, 0}};
  const auto p = parse_estimates(
      nlohmann::json::parse(R"({"estimates": [{"position": [1, 2], "error_bound": 3}]})"), corners);
  REQUIRE(p.targets.size() == 1);
  CHECK(p.targets[0].position == Vec2{1, 2});
  CHECK(p.targets[0].velocity == Vec2{0, 0});
  CHECK(p.starts == corners);
  CHECK(p.homes == corners);
  CHECK_THROWS_AS(parse_estimates(nlohmann::json::parse(R"({"estimates": 4})"), corners),
                  FormatError);
  CHECK_THROWS_AS(parse_estimates(nlohmann::json::parse(R"({"estimates": [{"position": [1, 2]}]})"),
                                  corners),
                  FormatError);
}

TEST_CASE("worker count honours the environment") {
  setenv("UAVLOC_WORKERS", "3", 1);
  CHECK(cli::worker_count() == 3);
  setenv("UAVLOC_WORKERS", "zero", 1);
  CHECK(cli::worker_count() >= 1);
  unsetenv("UAVLOC_WORKERS");
}
