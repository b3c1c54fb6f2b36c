#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "cli.hpp"

namespace fs = std::filesystem;

namespace {

struct Result {
  int code = 0;
  std::string out;
  std::string err;
};

Result run(std::vector<std::string> args) {
  std::ostringstream out, err;
  Result r;
  r.code = pilgrim::cli::run(args, out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

std::vector<std::string> lines(const std::string& text) {
  std::vector<std::string> v;
  std::istringstream is(text);
  std::string line;
  while (std::getline(is, line)) v.push_back(line);
  return v;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fs::path scratch_dir() {
  const auto dir = fs::temp_directory_path() / "pilgrim_cli_test";
  fs::create_directories(dir);
  return dir;
}

}  // namespace

TEST_CASE("simulate writes a deterministic 250-row ledger") {
  const auto dir = scratch_dir();
  const auto a = dir / "run_a.csv", b = dir / "run_b.csv";
  REQUIRE(run({"simulate", "--rho", "1", "--n", "250", "--seed", "7", "--out", a.string()}).code == 0);
  REQUIRE(run({"simulate", "--rho", "1", "--n", "250", "--seed", "7", "--out", b.string()}).code == 0);
  const auto text = slurp(a);
  CHECK(text == slurp(b));
  const auto rows = lines(text);
  REQUIRE(rows.size() == 251);
  CHECK(rows.front() == "pilgrim,time,hotel_index,funds,toll_paid,tax_paid,forfeit");
  CHECK(run({"simulate", "--rho", "1", "--n", "250", "--seed", "8"}).out != text);
}

TEST_CASE("relative outputs honour the output directory override") {
  const auto dir = scratch_dir() / "override";
  fs::create_directories(dir);
  fs::remove(dir / "times.csv");
  ::setenv("PILGRIM_OUTPUT_DIR", dir.c_str(), 1);
  const auto r = run({"simulate", "--report", "times", "--n", "20", "--out", "times.csv"});
  ::unsetenv("PILGRIM_OUTPUT_DIR");
  REQUIRE(r.code == 0);
  CHECK(fs::exists(dir / "times.csv"));
  CHECK(lines(slurp(dir / "times.csv")).size() == 21);
}

TEST_CASE("predict overlays survival and Kaplan-Meier columns") {
  const auto dir = scratch_dir();
  const auto hist = dir / "t50.csv";
  REQUIRE(run({"simulate", "--report", "times", "--n", "50", "--seed", "3", "--out", hist.string()}).code == 0);
  const auto r = run({"predict", "--history", hist.string(), "--rho", "1"});
  REQUIRE(r.code == 0);
  const auto rows = lines(r.out);
  REQUIRE(rows.size() > 2);
  CHECK(rows.front() == "t,survival,kaplan_meier,taxes_only");
  // survival starts at 1 and never increases
  double prev = 2.0;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const double s = std::stod(rows[i].substr(rows[i].find(',') + 1));
    CHECK(s <= prev + 1e-15);
    prev = s;
  }
}

TEST_CASE("check suites") {
  const auto r = run({"check", "--suite", "theorem3", "--n", "6", "--rho", "1"});
  REQUIRE(r.code == 0);
  const auto rows = lines(r.out);
  REQUIRE(rows.size() >= 2);
  CHECK(rows.front() == "suite,check,value,threshold,pass");
  for (std::size_t i = 1; i < rows.size(); ++i) CHECK(rows[i].substr(rows[i].rfind(',') + 1) == "true");

  const auto all = run({"check", "--suite", "all", "--n", "5", "--format", "json"});
  REQUIRE(all.code == 0);
  CHECK(all.out.front() == '[');
}

TEST_CASE("other subcommands run") {
  for (const auto& args : std::vector<std::vector<std::string>>{
           {"blocks", "--n", "200", "--reps", "20"},
           {"blocks", "--trajectory", "--n", "500", "--reps", "2"},
           {"occupancy", "--beta", "1", "--n", "300", "--reps", "10"},
           {"partition", "--n", "3", "--beta", "1"},
           {"partition", "--partition", "1 2|3", "--ordered"},
           {"voyage", "--n", "4"},
           {"voyage", "--n", "4", "--format", "json"},
           {"cladogram", "--n", "6", "--reps", "3"},
           {"simulate", "--report", "hotels", "--n", "100"}}) {
    const auto r = run(args);
    CHECK_MESSAGE(r.code == 0, args.front() << ": " << r.err);
    CHECK(!r.out.empty());
  }
}

TEST_CASE("density of a times file") {
  const auto dir = scratch_dir();
  const auto f = dir / "d.csv";
  std::ofstream(f) << "0.5\n0.5\n1.5\n";
  const auto r = run({"density", "--times", f.string(), "--family", "pilgrim", "--rho", "1"});
  REQUIRE(r.code == 0);
  CHECK(lines(r.out).front() == "family,n,hotels,log_density,log_density_harmonic");
}

TEST_CASE("errors map to exit codes") {
  CHECK(run({"--bogus"}).code == 2);
  CHECK(run({"simulate", "--rho", "-1"}).code == 2);
  CHECK(run({"nosuchcommand"}).code == 2);
  CHECK(run({"density"}).code == 2);
  CHECK(run({"density", "--times", "/nonexistent/file.csv"}).code == 2);
  CHECK(run({"check", "--suite", "theorem4", "--beta", "0.5"}).code == 2);
  CHECK(run({"--help"}).code == 0);
}
