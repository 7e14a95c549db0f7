#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <sys/wait.h>

#include "doctest.h"
#include "hcm/io.hpp"
#include "json.hpp"

namespace {

namespace fs = std::filesystem;

struct Run {
  int code;
  std::string out;
};

Run run(const std::string& args) {
  const std::string cmd = std::string(HCM_CLI) + " " + args + " 2>/dev/null";
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  std::string out;
  char buf[4096];
  while (size_t n = fread(buf, 1, sizeof buf, pipe)) out.append(buf, n);
  const int status = pclose(pipe);
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, out};
}

fs::path scratch() {
  const fs::path p = fs::temp_directory_path() / "hcm_cli_test";
  fs::create_directories(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream f(p);
  std::stringstream s;
  s << f.rdbuf();
  return s.str();
}

std::vector<std::vector<std::string>> csv(const std::string& text) {
  std::vector<std::vector<std::string>> rows;
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);) {
    std::vector<std::string> row;
    std::istringstream ls(line);
    for (std::string cell; std::getline(ls, cell, ',');) row.push_back(cell);
    if (!line.empty() && line.back() == ',') row.emplace_back();
    rows.push_back(row);
  }
  return rows;
}

}  // namespace

TEST_CASE("classify a constructed catalog operator") {
  const auto f = scratch() / "ex1.json";
  REQUIRE(run("construct ex1 --out " + f.string()).code == 0);
  const Run r = run("classify " + f.string());
  CHECK(r.code == 0);
  const auto j = nlohmann::json::parse(r.out);
  CHECK(j["in_MPhi_plus"] == true);
  CHECK(j["in_MPhi"] == false);
}

TEST_CASE("identity window is invertible") {
  const auto f = scratch() / "id.json";
  REQUIRE(run("construct I --window 3 --out " + f.string()).code == 0);
  const auto j = nlohmann::json::parse(run("classify " + f.string()).out);
  CHECK(j["invertible"] == true);
}

TEST_CASE("input errors and undecided inputs") {
  const auto bad = scratch() / "bad.json";
  std::ofstream(bad) << "{ not json";
  CHECK(run("classify " + bad.string()).code == 1);
  CHECK(run("classify /nonexistent.json").code == 1);
  CHECK(run("frobnicate").code == 1);
  CHECK(run("verify nope").code == 1);
  // A singular value inside the ambiguity band cannot be decided.
  const auto amb = scratch() / "amb.json";
  std::ofstream(amb) << R"({"signature": [1], "domain": 2, "codomain": 2, "entries": [[[[[[1, 0]]]], [[[[0, 0]]]]], [[[[[0, 0]]]], [[[[1e-8, 0]]]]]]})";
  CHECK(run("classify " + amb.string()).code == 2);
}

TEST_CASE("single suite report") {
  const auto f = scratch() / "cat.json";
  CHECK(run("verify catalog --out " + f.string()).code == 0);
  const auto j = nlohmann::json::parse(slurp(f));
  CHECK(j["suite"] == "catalog");
  CHECK(j["passed"] == true);
}

TEST_CASE("index with a window") {
  const auto f = scratch() / "L.json";
  REQUIRE(run("construct L --out " + f.string()).code == 0);
  const auto j = nlohmann::json::parse(run("index " + f.string()).out);
  CHECK(j["index"] == nlohmann::json::array({2, 1}));
  CHECK(j["windowed_index"] == j["index"]);
}

TEST_CASE("refinement studies") {
  const auto rows = csv(run("refine range17 --dmax 16").out);
  REQUIRE(rows.size() == 17);
  CHECK(rows[0] == std::vector<std::string>{"d", "margin", "angle"});
  for (int d = 1; d <= 16; ++d) CHECK(std::stod(rows[static_cast<size_t>(d)][1]) == 1.0 / d);
  const auto s = csv(run("refine sum18 --dmax 4").out);
  REQUIRE(s.size() == 5);
  for (int d = 1; d <= 4; ++d) CHECK(std::abs(std::stod(s[static_cast<size_t>(d)][2]) - std::cos(1.0 / d)) <= 1e-12);
  CHECK(run("refine nothing").code == 1);
}

TEST_CASE("radii and spectrum sweeps") {
  const auto f = scratch() / "S.json";
  REQUIRE(run("construct S --out " + f.string()).code == 0);
  const auto j = nlohmann::json::parse(run("radii " + f.string()).out);
  CHECK(j["s"].get<double>() == 1.0);
  const auto g = nlohmann::json::parse(run("radii " + f.string() + " --mode grid --grid-step 0.05").out);
  CHECK(std::abs(g["s"].get<double>() - 1.0) <= 0.05);
  const auto rows = csv(run("spectrum " + f.string() + " --grid-radius 1 --grid-step 0.5").out);
  CHECK(rows.size() == 1 + 625);
  CHECK(rows[0].back() == "min_sv");
  const auto d = scratch() / "diag.json";
  REQUIRE(run("construct I --window 2 --out " + d.string()).code == 0);
  CHECK(csv(run("spectrum " + d.string() + " --grid-step 0.5").out).size() > 1);
}

TEST_CASE("emitted operators re-ingest bit-identically") {
  for (const std::string args : {"construct ex4", "construct ex7 --window 5", "construct nilpotent --n 4 --q 3",
                                 "construct range17 --d 5", "construct sum18 --d 3", "construct ex9 --alpha 2,0.5"}) {
    const auto f = scratch() / "rt.json";
    REQUIRE(run(args + " --out " + f.string()).code == 0);
    const std::string text = slurp(f);
    const auto op = hcm::io::operator_from_json(nlohmann::json::parse(text));
    const std::string again = std::visit([](const auto& o) { return hcm::io::dump(hcm::io::to_json(o)); }, op);
    CHECK(again == text);
  }
}
