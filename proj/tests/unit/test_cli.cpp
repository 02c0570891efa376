#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <sys/wait.h>

namespace fs = std::filesystem;

namespace {

struct Result {
  int code = -1;
  std::string out;
};

Result run(const std::string& args) {
  const std::string cmd = std::string("\"") + ALSTL_CLI_PATH + "\" " + args + " 2>/dev/null";
  Result r;
  FILE* p = popen(cmd.c_str(), "r");
  REQUIRE(p != nullptr);
  char buf[4096];
  std::size_t n;
  while ((n = fread(buf, 1, sizeof buf, p)) > 0) r.out.append(buf, n);
  const int status = pclose(p);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void spit(const fs::path& p, const std::string& text) { std::ofstream(p) << text; }

struct TempDir {
  fs::path path;
  TempDir() {
    std::random_device rd;
    path = fs::temp_directory_path() / ("alstl_cli_" + std::to_string(rd()) + std::to_string(rd()));
    fs::create_directories(path);
  }
  ~TempDir() {
    std::error_code ec;
    fs::remove_all(path, ec);
  }
  std::string operator/(const std::string& name) const { return (path / name).string(); }
};

std::vector<std::string> lines(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  for (std::string l; std::getline(in, l);)
    if (!l.empty()) out.push_back(l);
  return out;
}

const char* kAbcSpecs = R"({"delta": 3, "specs": [
  {"name": "a", "formula": "a > 0", "raw_min": -3, "raw_max": 3},
  {"name": "b", "formula": "b > 0", "raw_min": -3, "raw_max": 3},
  {"name": "c", "formula": "c > 0", "raw_min": -3, "raw_max": 3}]})";

}  // namespace

TEST_SUITE("evaluate") {
  TEST_CASE("three specs reproduce the worked example row") {
    TempDir t;
    spit(t / "specs.json", kAbcSpecs);
    spit(t / "trajs.jsonl", R"({"schema": ["a", "b", "c"], "samples": [[3, 0, 1]]})" "\n");
    const auto r = run("evaluate --specs " + (t / "specs.json") + " --trajectories " + (t / "trajs.jsonl") +
                       " --lambda 0.9 --csv " + (t / "out.csv") + " --dag-dir " + (t / "dags"));
    REQUIRE(r.code == 0);
    const auto rows = lines(slurp(t / "out.csv"));
    REQUIRE(rows.size() == 2);
    CHECK(rows[0] == "node_sum,edge_sum,pga,rho_a,rho_b,rho_c");
    CHECK(rows[1].rfind("4,6,-1.4,", 0) == 0);
    CHECK(fs::exists(t.path / "dags" / "traj_0.json"));
    CHECK(fs::exists(t.path / "dags" / "traj_0.dot"));
  }

  TEST_CASE("no trajectories gives a header only") {
    TempDir t;
    spit(t / "specs.json", kAbcSpecs);
    spit(t / "trajs.jsonl", "");
    const auto r = run("evaluate --specs " + (t / "specs.json") + " --trajectories " + (t / "trajs.jsonl") +
                       " --csv " + (t / "out.csv"));
    REQUIRE(r.code == 0);
    CHECK(lines(slurp(t / "out.csv")).size() == 1);
  }

  TEST_CASE("bad inputs exit with code 2") {
    TempDir t;
    spit(t / "bad.json", R"({"delta": 1, "specs": [{"name": "a", "formula": "G(a >", "raw_min": -1, "raw_max": 1}]})");
    spit(t / "trajs.jsonl", "");
    CHECK(run("evaluate --specs " + (t / "bad.json") + " --trajectories " + (t / "trajs.jsonl")).code == 2);
    CHECK(run("evaluate --specs " + (t / "missing.json") + " --trajectories " + (t / "trajs.jsonl")).code == 2);
    CHECK(run("evaluate --trajectories " + (t / "trajs.jsonl")).code == 2);
    CHECK(run("no-such-command").code == 2);
  }
}

TEST_SUITE("demo-gen") {
  TEST_CASE("same seed, same bytes") {
    TempDir t;
    REQUIRE(run("demo-gen --world 4x4 -m 5 --seed 7 -o " + (t / "a.jsonl")).code == 0);
    REQUIRE(run("demo-gen --world 4x4 -m 5 --seed 7 -o " + (t / "b.jsonl")).code == 0);
    const auto a = slurp(t / "a.jsonl");
    CHECK(lines(a).size() == 5);
    CHECK(a == slurp(t / "b.jsonl"));
  }

  TEST_CASE("invalid requests exit with code 2") {
    TempDir t;
    CHECK(run("demo-gen --world 4x4 -m 0 -o " + (t / "a.jsonl")).code == 2);
    spit(t / "walled.json",
         R"({"width": 4, "height": 4, "start": [0, 0], "goal": [3, 3], "holes": [[2, 2], [2, 3], [3, 2]], "max_steps": 20, "slip_prob": 0})");
    CHECK(run("demo-gen --world " + (t / "walled.json") + " -m 3 -o " + (t / "a.jsonl")).code == 2);
    CHECK(run("demo-gen --world nowhere -m 3 -o " + (t / "a.jsonl")).code == 2);
  }
}

TEST_SUITE("learn and rollout") {
  TEST_CASE("five seeds on the 4x4 map") {
    TempDir t;
    const auto r = run("learn --world 4x4 -m 5 --seeds 1,2,3,4,5 --max-cycles 5 -o " + (t / "run"));
    REQUIRE(r.code == 0);
    for (int s = 1; s <= 5; ++s) {
      const fs::path dir = t.path / "run" / ("seed_" + std::to_string(s));
      REQUIRE(fs::exists(dir / "metrics.csv"));
      const auto rows = lines(slurp(dir / "metrics.csv"));
      REQUIRE(rows.size() >= 2);
      CHECK(rows[0].rfind("cycle,frontier_metric,candidate_metric,success_rate,mean_pga", 0) == 0);
      std::stringstream last(rows.back());
      std::string cell;
      for (int i = 0; i < 4; ++i) std::getline(last, cell, ',');
      CHECK(std::stod(cell) == 1.0);
      CHECK(fs::exists(dir / "manifest.json"));
    }
    CHECK(lines(slurp(t.path / "run" / "summary.csv")).size() == 6);

    const auto ro = run("rollout --run " + (t / "run/seed_1") + " --episodes 20 -o " + (t / "roll.jsonl"));
    REQUIRE(ro.code == 0);
    CHECK(ro.out.find("success 20/20") != std::string::npos);
    CHECK(lines(slurp(t / "roll.jsonl")).size() == 20);
    CHECK(run("rollout --run " + (t / "run/seed_1") + " --episodes 0").code == 2);
    CHECK(run("rollout --run " + (t / "nowhere")).code == 2);

    const auto rep = run("report --run " + (t / "run"));
    CHECK(rep.code == 0);
    CHECK(rep.out.find("seed_3") != std::string::npos);
  }

  TEST_CASE("zero cycles still leaves a usable run directory") {
    TempDir t;
    REQUIRE(run("learn --world 4x4 -m 3 --seeds 4 --max-cycles 0 -o " + (t / "run")).code == 0);
    CHECK(lines(slurp(t.path / "run" / "seed_4" / "metrics.csv")).size() == 1);
    CHECK(run("rollout --run " + (t / "run/seed_4") + " --episodes 3").code == 0);
  }

  TEST_CASE("strategic merge logs a non-decreasing frontier metric") {
    TempDir t;
    REQUIRE(run("learn --world 4x4 -m 5 --include-violating --seeds 1,2,3 --strategy strategic --merge-op mean "
                "--max-cycles 6 --convergence-threshold 0 -o " + (t / "run"))
                .code == 0);
    for (int s = 1; s <= 3; ++s) {
      const auto rows = lines(slurp(t.path / "run" / ("seed_" + std::to_string(s)) / "metrics.csv"));
      REQUIRE(rows.size() == 7);
      double prev = -1e300;
      for (std::size_t i = 1; i < rows.size(); ++i) {
        std::stringstream row(rows[i]);
        std::string cell;
        std::getline(row, cell, ',');
        std::getline(row, cell, ',');
        const double f = std::stod(cell);
        CHECK(f >= prev);
        prev = f;
      }
    }
  }

  TEST_CASE("bad loop settings exit with code 2") {
    TempDir t;
    CHECK(run("learn --world 4x4 --lambda 1.5 -o " + (t / "run")).code == 2);
    CHECK(run("learn --world 4x4 --merge-op median -o " + (t / "run")).code == 2);
  }
}
