#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include <sys/wait.h>

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

const fs::path& scratch() {
  static const fs::path dir = [] {
    fs::path d = fs::temp_directory_path() / ("sepgeo_cli_test_" + std::to_string(::getpid()));
    fs::create_directories(d);
    return d;
  }();
  return dir;
}

int run(const std::string& args) {
  const std::string cmd = std::string(SEPGEO_CLI) + " " + args + " 2>" + (scratch() / "stderr.txt").string();
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

json read_json(const fs::path& p) { return json::parse(slurp(p)); }

std::string path(const char* name) { return (scratch() / name).string(); }

}  // namespace

TEST_CASE("cli: make-state, peres and distance on Werner states") {
  REQUIRE(run("make-state werner --param 1 --out " + path("bell.json")) == 0);
  const json bell = read_json(path("bell.json"));
  CHECK(bell["dims"] == json::array({2, 2}));
  CHECK(bell["family"] == "werner");

  REQUIRE(run("peres " + path("bell.json") + " --out " + path("peres.json")) == 0);
  const json p = read_json(path("peres.json"));
  CHECK(p["format_version"] == 1);
  CHECK(p["kind"] == "peres");
  CHECK(p["pass"] == false);
  CHECK(p["min_eigenvalue"].get<double>() == doctest::Approx(-0.5).epsilon(1e-12));

  REQUIRE(run("make-state werner --param 0.5 --out " + path("w.json")) == 0);
  REQUIRE(run("distance " + path("w.json") + " --out " + path("d.json")) == 0);
  const json d = read_json(path("d.json"));
  CHECK(d["converged"] == true);
  CHECK(d["distance"].get<double>() == doctest::Approx((0.5 - 1.0 / 3.0) * std::sqrt(3.0 / 8.0)).epsilon(1e-6));
  CHECK(!d["atoms"].empty());
  CHECK(d["atoms"][0].contains("lambda"));
}

TEST_CASE("cli: standard-form and schmidt") {
  REQUIRE(run("make-state werner --param 0.5 --out " + path("w2.json")) == 0);
  REQUIRE(run("standard-form " + path("w2.json") + " --out " + path("sf.json")) == 0);
  const json sf = read_json(path("sf.json"));
  CHECK(sf["separable"] == false);
  for (int k = 0; k < 3; ++k) CHECK(std::abs(sf["d"][k].get<double>()) == doctest::Approx(0.5).epsilon(1e-8));

  REQUIRE(run("schmidt " + path("w2.json") + " --out " + path("sc.json")) == 0);
  const json sc = read_json(path("sc.json"));
  REQUIRE(sc["xi"].size() == 3);
  for (int k = 0; k < 3; ++k) CHECK(sc["xi"][k].get<double>() == doctest::Approx(1.0).epsilon(1e-8));
}

TEST_CASE("cli: map-section without the separable boundary") {
  REQUIRE(run("map-section --rays 4 --no-separable --coords fig5 --out " + path("m.csv")) == 0);
  const std::string csv = slurp(path("m.csv"));
  CHECK(csv.rfind("# format_version 1, coordinates fig5\n", 0) == 0);
  int lines = 0;
  for (char c : csv) lines += c == '\n';
  CHECK(lines == 2 + 8);
}

TEST_CASE("cli: exit codes") {
  CHECK(run("make-state nonsense") == 2);
  CHECK(run("make-state werner --param 3") == 2);
  CHECK(run("peres /nonexistent/file.json") == 2);
  CHECK(run("frobnicate") == 2);
  CHECK(run("") == 2);

  REQUIRE(run("make-state bell --param 3 --out " + path("b3.json")) == 0);
  CHECK(run("standard-form " + path("b3.json")) == 2);
  CHECK(run("peres " + path("b3.json") + " --dims 2,2") == 2);
  CHECK(run("peres " + path("b3.json") + " --dims x") == 2);

  {
    std::ofstream f(path("nh.json"));
    f << R"({"dims": [2, 1], "entries": [[0.5, 0.3], [0.1, 0.5]]})";
  }
  CHECK(run("peres " + path("nh.json")) == 2);

  REQUIRE(run("make-state werner --param 1 --out " + path("b2.json")) == 0);
  CHECK(run("distance " + path("b2.json") + " --max-iter 1 --out " + path("partial.json")) == 3);
  const json partial = read_json(path("partial.json"));
  CHECK(partial["converged"] == false);
  CHECK(partial["distance"].get<double>() > 0.0);
}
