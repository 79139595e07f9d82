#include <array>
#include <cstdio>
#include <string>
#include <sys/wait.h>

#include "doctest.h"
#include "json.hpp"

namespace {

struct Result {
  int status = -1;
  std::string out;
};

Result run(const std::string& args, const char* redirect = " 2>/dev/null") {
  const std::string cmd = std::string(FORESTLAB_CLI) + " " + args + redirect;
  Result r;
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  std::array<char, 4096> buf{};
  std::size_t got;
  while ((got = fread(buf.data(), 1, buf.size(), pipe)) > 0) r.out.append(buf.data(), got);
  const int raw = pclose(pipe);
  r.status = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
  return r;
}

Result run_stderr(const std::string& args) { return run(args, " 2>&1 1>/dev/null"); }

std::string corpus(const char* file) { return std::string(FORESTLAB_CORPUS_DIR) + "/" + file; }

}  // namespace

TEST_CASE("eval csv") {
  const auto r = run("eval --system " + corpus("lin.fst") + " --class Lin --order 10 --format csv");
  CHECK(r.status == 0);
  std::string expected = "n,coefficient\n";
  for (int n = 1; n <= 10; ++n) expected += std::to_string(n) + ",1\n";
  CHECK(r.out == expected);
}

TEST_CASE("eval json and expressions") {
  const auto r = run("eval --system " + corpus("alltrees.fst") + " --expr 'T0 | T1' --order 6");
  REQUIRE(r.status == 0);
  const auto j = nlohmann::json::parse(r.out);
  CHECK(j["series"][0]["coefficients"] == nlohmann::json::parse(R"(["0","1","1","2","4","9","20"])"));
}

TEST_CASE("law converges on linear forests") {
  const auto r = run("law --system " + corpus("lin.fst") + " --class Lin --order 5000");
  REQUIRE(r.status == 0);
  const auto j = nlohmann::json::parse(r.out);
  CHECK(j["verdict"] == "CONVERGES_TO_ONE");
  CHECK(j["coherence"] == "AGREE");
  CHECK(j["ratio_test"]["ratios"][0]["exact"].get<std::string>().find('/') != std::string::npos);
}

TEST_CASE("explicit refuses sub-one systems") {
  const auto r = run("explicit --system " + corpus("alltrees.fst"));
  CHECK(r.status == 1);
  const auto e = run_stderr("explicit --system " + corpus("alltrees.fst"));
  CHECK(e.out.find("RADIUS_SUB_ONE: explicit form unavailable") != std::string::npos);
}

TEST_CASE("explicit, gfun and classify agree") {
  const auto ex = run("explicit --system " + corpus("bamboo.fst") + " --class Ta");
  REQUIRE(ex.status == 0);
  const auto g = nlohmann::json::parse(ex.out)["query"]["gexpr"].get<std::string>();
  const auto gf = run("gfun --expr '" + g + "' --order 9 --format csv");
  CHECK(gf.out == "n,coefficient\n0,0\n1,0\n2,0\n3,1\n4,0\n5,0\n6,1\n7,0\n8,0\n9,1\n");
  const auto c = run("classify --system " + corpus("bamboo.fst"));
  REQUIRE(c.status == 0);
  const auto j = nlohmann::json::parse(c.out);
  CHECK(j["classes"][1]["verdict"] == "RADIUS_ONE");
  CHECK(j["growth_crosscheck"]["disagreement"] == false);
}

TEST_CASE("enumerate and factor") {
  const auto e = run("enumerate --size 5");
  REQUIRE(e.status == 0);
  CHECK(nlohmann::json::parse(e.out)["count"] == 9);
  const auto f = run("factor '(()(()))@1.0' --format csv");
  CHECK(f.status == 0);
  CHECK(f.out == "module,size\n(()())@0,2\n(())@0,1\n");
  const auto m = run("enumerate --system " + corpus("lin.fst") + " --expr '[>=1] Lin' --size 5 --format csv");
  CHECK(m.out.substr(0, 7) == "member\n");
}

TEST_CASE("exit codes") {
  CHECK(run("").status == 2);
  CHECK(run("eval --order 5").status == 2);
  CHECK(run("eval --system " + corpus("lin.fst") + " --format xml").status == 2);
  CHECK(run("law --system " + corpus("lin.fst") + " --class Lin --order 100 --window 10..200").status == 2);
  CHECK(run("eval --system /nonexistent.fst").status == 1);
  CHECK(run("eval --system " + corpus("lin.fst") + " --class Nope").status == 1);
  CHECK(run("gfun --expr 'x/(1-x^0)'").status == 1);
  CHECK(run("eval --system " + corpus("lin.fst") + " --order 50 --max-order 10").status == 1);
  const auto capped = run("eval --system " + corpus("lin.fst") + " --order 50");
  CHECK(capped.status == 0);
  const auto err = run_stderr("eval --system " + corpus("lin.fst") + " --expr 'Lin +'");
  const auto j = nlohmann::json::parse(err.out);
  CHECK(j["error"] == "SyntaxError");
  CHECK(j["line"] == 1);
}

TEST_CASE("environment cap on order") {
  const std::string cmd = "FORESTLAB_MAX_ORDER=10 " + std::string(FORESTLAB_CLI) + " eval --system " +
                          corpus("lin.fst") + " --order 50 >/dev/null 2>&1; echo $?";
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  char buf[16] = {};
  REQUIRE(fgets(buf, sizeof buf, pipe) != nullptr);
  pclose(pipe);
  CHECK(std::string(buf) == "1\n");
}

TEST_CASE("help names the construct and output is deterministic") {
  CHECK(run("law --help").out.find("Compton's ratio test") != std::string::npos);
  CHECK(run("factor --help").out.find("module") != std::string::npos);
  CHECK(run("explicit --help").out.find("class G") != std::string::npos);
  for (const char* sub : {"eval", "classify", "explicit", "law", "enumerate", "gfun", "factor"}) {
    CHECK(run(std::string(sub) + " --help").status == 0);
  }
  const std::string cmd = "classify --system " + corpus("evenchains.fst");
  CHECK(run(cmd).out == run(cmd).out);
}
