#include <doctest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

namespace fs = std::filesystem;

namespace {

const std::string kCli = INCMAX_CLI_PATH;
const std::string kGolden = INCMAX_GOLDEN_DIR;
const std::string kData = INCMAX_DATA_DIR;

int run(const std::string& args) {
  const std::string cmd = "'" + kCli + "' " + args + " 2>/dev/null";
  const int raw = std::system(cmd.c_str());
  return WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

fs::path scratch(const std::string& name) {
  auto dir = fs::temp_directory_path() / "incmax_cli_test";
  fs::create_directories(dir);
  return dir / name;
}

// Runs a command that writes its artifact to --out and compares it byte for byte with the golden copy.
void golden(const std::string& name, const std::string& args, int expected_status = 0) {
  auto out = scratch(name);
  fs::remove(out);
  CHECK(run(args + " --out '" + out.string() + "'") == expected_status);
  REQUIRE(fs::exists(out));
  CHECK(slurp(out) == slurp(fs::path(kGolden) / name));
}

}  // namespace

TEST_CASE("artifacts match the golden files") {
  golden("roots.json", "roots --rho 2");
  golden("greedy_identity.csv", "greedy --instance '" + kData + "/identity.json' --rho 2.618034 --c1 1");
  golden("greedy_geometric.csv", "greedy --instance '" + kData + "/geometric.json' --rho 2.618034 --c1 1 --horizon 1e5", 2);
  golden("check_identity.json", "check --rho 4 --sizes 1,2,4,8");
  golden("check_violated.json", "check --rho 1.5 --sizes 1,2", 2);
  golden("yao_verify.json", "yao verify --cert '" + kData + "/yao_n10.json' --class capped");
  golden("yao_search_n5.json", "yao search --N 5 --budget 500 --seed 3");
  golden("detlb_2.1.json", "detlb --rho 2.1");
  golden("exclude_2.2.json", "exclude --rho 2.2 --starts 1,1.5,2,2.5");
  golden("rand_expectation.csv", "rand expectation --to 40");
  golden("rand_bound.csv", "rand bound --k-from 3 --k-to 5 --delta-step 0.25");
  golden("rand_run.csv", "rand run --instance '" + kData + "/gap16.json' --seed 11");
  golden("reduce_matching.json", "reduce --oracle '" + kData + "/matching.json'");
  golden("discretize.json", "discretize --instance '" + kData + "/geometric.json' --n 2 --N 8");
}

TEST_CASE("identical configurations give identical bytes") {
  auto a = scratch("again_a.json"), b = scratch("again_b.json");
  REQUIRE(run("yao search --N 6 --budget 400 --seed 9 --out '" + a.string() + "'") == 0);
  REQUIRE(run("yao search --N 6 --budget 400 --seed 9 --out '" + b.string() + "'") == 0);
  CHECK(slurp(a) == slurp(b));
}

TEST_CASE("exit codes") {
  const auto sink = " --out '" + scratch("ignored").string() + "'";
  CHECK(run("") == 1);
  CHECK(run("bogus") == 1);
  CHECK(run("greedy --rho 2") == 1);
  CHECK(run("greedy --rho 2 --c1 -1") == 1);
  CHECK(run("yao search --N 20") == 1);
  CHECK(run("greedy --instance /nonexistent.json --rho 2 --c1 1" + sink) == 1);
  CHECK(run("detlb --rho 2.5" + sink) == 1);
  CHECK(run("check --rho 1.5 --sizes 1,2" + sink) == 2);
  CHECK(run("greedy --instance '" + kData + "/geometric.json' --rho 2 --c1 1000" + sink) == 2);
  CHECK(run("yao verify --cert '" + kData + "/yao_overclaim.json'" + sink) == 2);
  CHECK(run("--help") == 0);
}
