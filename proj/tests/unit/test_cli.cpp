#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <algorithm>
#include <sstream>

#include "commands.hpp"
#include "lrga/report.hpp"

using namespace lrga;
namespace fs = std::filesystem;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "lrga_cli_test" / name;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string write(const fs::path& path, const std::string& text) {
  std::ofstream(path) << text;
  return path.string();
}

std::string slurp(const fs::path& path) {
  std::ifstream in(path);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

// Manifest without the wall-clock entry.
nlohmann::json stable_manifest(const std::string& text) {
  auto j = nlohmann::json::parse(text);
  j.erase("timing");
  j.erase("outputs");
  return j;
}

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("iso verdicts on C6 and two triangles") {
  const fs::path dir = scratch("iso");
  const std::string c6 = write(dir / "c6.g6", "EhEG\n");
  const std::string tt = write(dir / "2c3.g6", "EwCW\n");

  const Run f = run({"iso", c6, tt, "--algorithm", "fwl2"});
  REQUIRE(f.code == 0);
  const auto doc = nlohmann::json::parse(f.out);
  CHECK(doc.at("verdicts")[0][1] == "distinguished");
  CHECK(doc.at("verdicts")[0][0] == "indistinguishable");
  CHECK(nlohmann::json::parse(f.err).at("command") == "iso");

  const Run w = run({"iso", c6, tt, "--algorithm", "wl1"});
  CHECK(nlohmann::json::parse(w.out).at("verdicts")[0][1] == "indistinguishable");

  const Run same = run({"iso", c6, c6});
  CHECK(nlohmann::json::parse(same.out).at("verdicts")[0][1] == "indistinguishable");

  const Run csv = run({"iso", c6, tt, "--format", "csv"});
  CHECK(csv.out.rfind("i,j,verdict,witness_round,rounds\n", 0) == 0);
}

TEST_CASE("usage errors exit with 2") {
  const fs::path dir = scratch("usage");
  const std::string bad = write(dir / "bad.g6", "E~~\x01\n");
  const std::string ok = write(dir / "ok.g6", "EhEG\n");
  CHECK(run({"iso", bad, ok}).code == 2);
  CHECK(run({"iso", ok}).code == 2);
  CHECK(run({"iso", (dir / "missing.g6").string(), ok}).code == 2);
  CHECK(run({"learn"}).code == 2);
  CHECK(run({}).code == 2);
  CHECK(run({"nonsense"}).code == 2);
  CHECK(run({"iso", ok, ok, "--algorithm", "wl7"}).code == 2);
  CHECK(run({"lrga-bench", "--n", "200,100"}).code == 2);
  CHECK(run({"--help"}).code == 0);
}

TEST_CASE("kernel-check passes by default and catches the perturbation") {
  const Run ok = run({"kernel-check", "--cases", "100", "--lemma-points", "20", "--graph-cases", "5"});
  CHECK(ok.code == 0);
  const auto rows = nlohmann::json::parse(ok.out).at("rows");
  CHECK(rows.size() >= 5);
  for (const auto& r : rows) CHECK(r.at("passed") == true);

  const Run bad = run({"kernel-check", "--cases", "100", "--lemma-points", "20", "--graph-cases", "5",
                       "--perturb"});
  CHECK(bad.code == 1);
}

TEST_CASE("factorize writes one row per (d, trial) and is reproducible") {
  const fs::path dir = scratch("factorize");
  const std::vector<std::string> args{"factorize", "--n", "20", "--d", "50,500", "--trials", "4",
                                      "--seed", "3"};
  auto a = args, b = args;
  a.insert(a.end(), {"--out", (dir / "a.csv").string()});
  b.insert(b.end(), {"--out", (dir / "b.csv").string()});
  REQUIRE(run(a).code == 0);
  REQUIRE(run(b).code == 0);
  const std::string text = slurp(dir / "a.csv");
  CHECK(text == slurp(dir / "b.csv"));
  CHECK(std::count(text.begin(), text.end(), '\n') == 1 + 2 * 4);
  CHECK(stable_manifest(slurp(dir / "a.csv.manifest.json")) ==
        stable_manifest(slurp(dir / "b.csv.manifest.json")));
}

TEST_CASE("learn with steps 0 reports initial losses") {
  const Run r = run({"learn", "--delta", "2", "--m-grid", "20,40", "--seeds", "2", "--width", "16",
                     "--steps", "0"});
  CHECK(r.code == 0);
  CHECK(r.out.rfind("m,median_initial_train_mse,median_test_mse\n", 0) == 0);
  CHECK(nlohmann::json::parse(r.err).at("summary").at("initial_loss_only") == true);
}

TEST_CASE("LRGA_OUT_DIR routes reports") {
  const fs::path dir = scratch("outdir");
  ::setenv(cli::kOutDirEnv, dir.string().c_str(), 1);
  const Run r = run({"lrga-bench", "--n", "64,128", "--kappa", "4", "--d-in", "4", "--reps", "1"});
  ::unsetenv(cli::kOutDirEnv);
  CHECK(r.code == 0);
  CHECK(r.out.empty());
  REQUIRE(fs::exists(dir / "lrga-bench.csv"));
  const auto manifest = nlohmann::json::parse(slurp(dir / "lrga-bench.csv.manifest.json"));
  CHECK(manifest.at("rng") == "mt19937_64+splitmix64");
  CHECK(manifest.at("exit_code") == 0);
  CHECK(manifest.at("timing").contains("wall_seconds"));
  const std::string csv = slurp(dir / "lrga-bench.csv");
  CHECK(csv.rfind("n,kappa,d_in,median_seconds,aux_bytes,aux_budget_bytes,dense_seconds,dense_max_rel_diff\n", 0) == 0);
}

}  // TEST_SUITE
