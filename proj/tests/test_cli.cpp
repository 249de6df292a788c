#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "cli.hpp"
#include "doctest.h"
#include "helpers.hpp"

namespace {

struct CliResult {
  int code = 0;
  std::string out;
  std::string err;
};

CliResult run(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  CliResult r;
  r.code = pdmpq::cli::run_command(args, out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream f(path);
  REQUIRE(static_cast<bool>(f));
  f << text;
}

std::string read_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  REQUIRE(static_cast<bool>(f));
  std::ostringstream buf;
  buf << f.rdbuf();
  return buf.str();
}

/// Value of the first output line starting with "<key> ".
std::string value_of(const std::string& text, const std::string& key) {
  std::istringstream is(text);
  std::string line;
  while (std::getline(is, line))
    if (line.rfind(key + " ", 0) == 0) return line.substr(key.size() + 1);
  return "";
}

}  // namespace

TEST_CASE("bad invocations exit with the configuration code") {
  testutil::TempDir dir;
  CHECK(run({}).code == 2);
  CHECK(run({"no-such-command"}).code == 2);
  CHECK(run({"evaluate", "--bogus"}).code == 2);
  CHECK(run({"mc", "--model", "no-such-model", "--jumps", "2", "--sims", "100"}).code == 2);
  CHECK(run({"evaluate", "--model", "toy-constant"}).code == 2);
  CHECK(run({"evaluate", "--model", "toy-constant", "--grid", dir.file("absent.grid")}).code == 2);
  CHECK(run({"quantize", "--model", "toy-constant", "--jumps", "1"}).code == 2);  // no --out
}

TEST_CASE("config files fill in options but command-line flags win") {
  testutil::TempDir dir;
  std::string cfg = dir.file("run.cfg");
  write_file(cfg, "model = toy-constant\n"
                  "seed = 5\n"
                  "grid-points = 12\n"
                  "samples = 4000\n"
                  "jumps = 2\n"
                  "out = " + dir.file("a.grid") + "\n");

  CliResult from_config = run({"quantize", "--config", cfg});
  CHECK(from_config.code == 0);
  CHECK(value_of(from_config.out, "seed") == "5");
  CHECK(value_of(from_config.out, "grid-points") == "12");
  CHECK(value_of(from_config.out, "steps") == "2");

  CliResult with_flag = run({"quantize", "--config", cfg, "--seed", "7",
                             "--out", dir.file("b.grid")});
  CHECK(with_flag.code == 0);
  CHECK(value_of(with_flag.out, "seed") == "7");
  CHECK(value_of(with_flag.out, "wrote") == dir.file("b.grid"));
}

TEST_CASE("config parsing rejects unknown keys and nested includes") {
  testutil::TempDir dir;
  std::string bad = dir.file("bad.cfg");
  write_file(bad, "frobnicate = 1\n");
  CliResult r = run({"show-config", "--config", bad});
  CHECK(r.code == 2);
  CHECK(r.err.find("unknown key") != std::string::npos);

  write_file(dir.file("a.cfg"), "include = b.cfg\n");
  write_file(dir.file("b.cfg"), "include = c.cfg\n");
  write_file(dir.file("c.cfg"), "seed = 1\n");
  CliResult nested = run({"show-config", "--config", dir.file("a.cfg")});
  CHECK(nested.code == 2);
  CHECK(nested.err.find("nest") != std::string::npos);

  // one include level is fine, resolved relative to the including file
  write_file(dir.file("top.cfg"), "include = base.cfg\nseed = 3\n");
  write_file(dir.file("base.cfg"), "model = toy-constant\n");
  CliResult ok = run({"estimate-n", "--config", dir.file("top.cfg"),
                      "--horizon", "2", "--sims", "50"});
  CHECK(ok.code == 0);
  CHECK(value_of(ok.out, "seed") == "3");
}

TEST_CASE("a grid trained for one model refuses to drive another") {
  testutil::TempDir dir;
  std::string grid = dir.file("toy.grid");
  CliResult q = run({"quantize", "--model", "toy-constant", "--jumps", "2",
                     "--grid-points", "8", "--samples", "3000", "--out", grid});
  REQUIRE(q.code == 0);
  CliResult e = run({"evaluate", "--model", "repair-workshop", "--grid", grid,
                     "--horizon", "3"});
  CHECK(e.code == 3);
  CHECK(e.err.find("trained for model") != std::string::npos);
}

TEST_CASE("the same seed reproduces the grid file byte for byte") {
  testutil::TempDir dir;
  std::vector<std::string> base = {"quantize", "--model", "toy-constant", "--jumps", "2",
                                   "--grid-points", "10", "--samples", "3000", "--seed", "11"};
  auto with_out = [&](const std::string& p) {
    std::vector<std::string> v = base;
    v.push_back("--out");
    v.push_back(p);
    return v;
  };
  REQUIRE(run(with_out(dir.file("one.grid"))).code == 0);
  REQUIRE(run(with_out(dir.file("two.grid"))).code == 0);
  CHECK(read_file(dir.file("one.grid")) == read_file(dir.file("two.grid")));

  std::vector<std::string> other = with_out(dir.file("three.grid"));
  other[other.size() - 3] = "12";  // the seed value
  REQUIRE(run(other).code == 0);
  CHECK(read_file(dir.file("one.grid")) != read_file(dir.file("three.grid")));
}

TEST_CASE("show-config emits a loadable config file") {
  testutil::TempDir dir;
  CliResult shown = run({"show-config", "--model", "toy-constant"});
  REQUIRE(shown.code == 0);
  CHECK(shown.out.find("model = toy-constant") != std::string::npos);
  CHECK(shown.out.find("model.lambda0 = 1") != std::string::npos);

  std::string cfg = dir.file("defaults.cfg");
  write_file(cfg, shown.out);
  CliResult reused = run({"estimate-n", "--config", cfg, "--horizon", "2.5", "--sims", "400"});
  CHECK(reused.code == 0);
  CHECK(value_of(reused.out, "model") == "toy-constant");
  CHECK(value_of(reused.out, "capped") == "no");
}

TEST_CASE("estimate-n sees deterministic jump epochs through overrides") {
  testutil::TempDir dir;
  std::string cfg = dir.file("silent.cfg");
  write_file(cfg, "model = toy-constant\nmodel.lambda0 = 0\n");
  CliResult r = run({"estimate-n", "--config", cfg, "--horizon", "2.5", "--sims", "100"});
  CHECK(r.code == 0);
  CHECK(value_of(r.out, "jumps") == "3");
  CHECK(value_of(r.out, "tail-probability") == "0");
  CHECK(value_of(r.out, "capped") == "no");
}

TEST_CASE("quantize then evaluate recovers the toy value") {
  testutil::TempDir dir;
  std::string grid = dir.file("toy.grid");
  REQUIRE(run({"quantize", "--model", "toy-constant", "--jumps", "3", "--grid-points", "16",
               "--samples", "20000", "--seed", "2", "--out", grid}).code == 0);
  CliResult e = run({"evaluate", "--model", "toy-constant", "--grid", grid, "--A", "25"});
  REQUIRE(e.code == 0);
  double v = std::atof(value_of(e.out, "value").c_str());
  // exact jump-horizon value is 3; allow quantization and smoothing bias
  CHECK(v > 2.5);
  CHECK(v < 3.5);
  CHECK(std::atof(value_of(e.out, "epsilon").c_str()) > 0.0);

  CliResult again = run({"evaluate", "--model", "toy-constant", "--grid", grid, "--A", "25"});
  CHECK(again.out == e.out);  // same grid, same answer, bit for bit

  CliResult tabled = run({"evaluate", "--model", "toy-constant", "--grid", grid, "--A", "25",
                          "--values"});
  CHECK(tabled.code == 0);
  CHECK(tabled.out.find("values 0 ") != std::string::npos);
  CHECK(tabled.out.find("values 3 ") != std::string::npos);
}
