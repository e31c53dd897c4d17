#include <catch2/catch_amalgamated.hpp>

#include <cstdlib>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace {

const char* kCli = BDOMAIN_CLI_PATH;

int run(const std::string& args, std::string* out = nullptr) {
  std::string cmd = std::string(kCli) + " " + args + " > /tmp/cli_stdout.txt 2>/tmp/cli_stderr.txt";
  int rc = std::system(cmd.c_str());
  if (out) {
    std::ifstream in("/tmp/cli_stdout.txt");
    std::stringstream ss;
    ss << in.rdbuf();
    *out = ss.str();
  }
  return WEXITSTATUS(rc);
}

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("gen writes a loadable mesh", "[cli]") {
  REQUIRE(run("gen --gen sphere --mesh-out /tmp/cli_sphere.off") == 0);
  std::string text = slurp("/tmp/cli_sphere.off");
  REQUIRE(text.rfind("OFF", 0) == 0);
}

TEST_CASE("repeated runs with a fixed seed are byte identical", "[cli]") {
  REQUIRE(run("analyze --gen torus-vertical-tilted --dir 0,0,1 --seed 9 --samples 40 --rays 8 "
              "--out /tmp/cli_a") == 0);
  REQUIRE(run("analyze --gen torus-vertical-tilted --dir 0,0,1 --seed 9 --samples 40 --rays 8 "
              "--out /tmp/cli_b") == 0);
  for (const char* name : {"report.json", "wirg.json", "visibility.json", "reeb_surface.dot",
                           "reeb_solid.dot"}) {
    INFO(name);
    REQUIRE(slurp(std::string("/tmp/cli_a/") + name) == slurp(std::string("/tmp/cli_b/") + name));
  }
}

TEST_CASE("analyze equals reeb plus classify composition", "[cli]") {
  REQUIRE(run("analyze --gen torus-horizontal --dir 0,0,1 --seed 4 --samples 20 --rays 8 "
              "--out /tmp/cli_full") == 0);
  REQUIRE(run("reeb --gen torus-horizontal --dir 0,0,1 --seed 4 --out /tmp/cli_steps") == 0);
  REQUIRE(slurp("/tmp/cli_full/wirg.json") == slurp("/tmp/cli_steps/wirg.json"));

  std::string text1, text2;
  run("analyze --gen torus-horizontal --dir 0,0,1 --seed 4 --samples 20 --rays 8 --out /tmp/cli_f2",
      &text1);
  run("classify /tmp/cli_steps/wirg.json", &text2);
  // rule table fired the same way in both paths
  for (const char* rule : {"R1 fired", "R2 fired", "R6 fired"}) {
    REQUIRE(text1.find(rule) != std::string::npos);
    REQUIRE(text2.find(rule) != std::string::npos);
  }
}

TEST_CASE("classify rejects a violating graph with exit 2", "[cli]") {
  nlohmann::json bad = {
      {"nodes",
       {{{"id", "a"}, {"height", 0.0}, {"index", 0}},
        {{"id", "b"}, {"height", 1.0}, {"index", 1}},
        {{"id", "c"}, {"height", 2.0}, {"index", 2}},
        {{"id", "d"}, {"height", 2.5}, {"index", 2}}}},
      {"edges",
       {{{"id", "e0"}, {"lower", "a"}, {"upper", "b"}, {"weight", 1}},
        {{"id", "e1"}, {"lower", "b"}, {"upper", "c"}, {"weight", 1}},
        {{"id", "e2"}, {"lower", "b"}, {"upper", "d"}, {"weight", 1}}}}};
  std::ofstream("/tmp/cli_bad.json") << bad.dump();
  std::string out;
  int rc = run("classify /tmp/cli_bad.json", &out);
  REQUIRE(rc == 2);
  REQUIRE(out.find("weight-sum") != std::string::npos);
}

TEST_CASE("malformed json exits 1", "[cli]") {
  std::ofstream("/tmp/cli_garbage.json") << "{ not json";
  REQUIRE(run("classify /tmp/cli_garbage.json") == 1);
  REQUIRE(run("analyze --in /does/not/exist.off") == 1);
}

TEST_CASE("diagram normalize prints a planar word", "[cli]") {
  std::string out;
  int rc = run("diagram normalize \"cup Y1 s1 L1 cap\"", &out);
  REQUIRE(rc == 0);
  REQUIRE(out.find("planar") != std::string::npos);
  REQUIRE(out.find("s1") == std::string::npos);
}

TEST_CASE("simplify emits a replayable trace", "[cli]") {
  nlohmann::json doc = {
      {"nodes",
       {{{"id", "a"}, {"height", 0.0}, {"index", 0}, {"convexity", "convex"}},
        {{"id", "p"}, {"height", 1.0}, {"index", 0}, {"convexity", "concave"}},
        {{"id", "L"}, {"height", 2.0}, {"index", 1}},
        {{"id", "U"}, {"height", 3.0}, {"index", 1}},
        {{"id", "q"}, {"height", 4.0}, {"index", 1}},
        {{"id", "z"}, {"height", 5.0}, {"index", 2}, {"convexity", "convex"}}}},
      {"edges",
       {{{"id", "e0"}, {"lower", "a"}, {"upper", "p"}, {"weight", 0}},
        {{"id", "e1"}, {"lower", "p"}, {"upper", "L"}, {"weight", 1}},
        {{"id", "e2"}, {"lower", "L"}, {"upper", "U"}, {"weight", 2}},
        {{"id", "e3"}, {"lower", "U"}, {"upper", "q"}, {"weight", 1}},
        {{"id", "e4"}, {"lower", "q"}, {"upper", "z"}, {"weight", 0}}}}};
  std::ofstream("/tmp/cli_seg.json") << doc.dump();
  nlohmann::json anns = {
      {"e2",
       {{"lower", {{"type", 2}}}, {"upper", {{"type", 1}}}}}};  // (1)-(2): height swap
  std::ofstream("/tmp/cli_anns.json") << anns.dump();

  std::string out;
  int rc = run("simplify /tmp/cli_seg.json --annotations /tmp/cli_anns.json --explain --out /tmp/cli_simp",
               &out);
  REQUIRE(rc == 0);
  REQUIRE(out.find("height-swap") != std::string::npos);

  nlohmann::json result = nlohmann::json::parse(slurp("/tmp/cli_simp/wirg_simplified.json"));
  for (const auto& e : result["edges"]) REQUIRE(e["weight"].get<int>() <= 1);
}
