#include <doctest.h>

#include <array>
#include <cstdio>
#include <string>
#include <sys/wait.h>

#include <json.hpp>

namespace {

struct Run {
  int status = -1;
  std::string out;
};

Run cli(const std::string& args, const std::string& input = "") {
  std::string cmd = std::string(NEEDSEM_CLI) + " " + args + " 2>/dev/null";
  cmd = "printf '%s' '" + input + "' | " + cmd;
  Run r;
  FILE* p = popen(cmd.c_str(), "r");
  REQUIRE(p != nullptr);
  std::array<char, 4096> buf{};
  std::size_t n;
  while ((n = fread(buf.data(), 1, buf.size(), p)) > 0) r.out.append(buf.data(), n);
  int st = pclose(p);
  r.status = WIFEXITED(st) ? WEXITSTATUS(st) : -1;
  return r;
}

std::string sample(const char* name) { return std::string(NEEDSEM_SAMPLES) + "/" + name; }

}  // namespace

TEST_CASE("parse normalizes and rejects empty input") {
  Run r = cli("parse --mode let", "let x = (\\y.y)   (\\y.y) in x");
  CHECK(r.status == 0);
  CHECK(r.out == "let x = (\\y.y) \\y.y in x\n");
  CHECK(cli("parse", "").status == 1);
  CHECK(cli("parse", "\\x.").status == 1);
}

TEST_CASE("reduce prints the trace") {
  Run r = cli("reduce --mode let " + sample("shared.lam"));
  CHECK(r.status == 0);
  CHECK(r.out.find("[beta_need]") != std::string::npos);
  CHECK(r.out.find("answer after 4 steps") != std::string::npos);
  Run j = cli("reduce --mode let --format json " + sample("shared.lam"));
  auto doc = nlohmann::json::parse(j.out);
  CHECK(doc["steps"].size() == 4);
  CHECK(doc["steps"][3]["rule"] == "deref");
}

TEST_CASE("eval engines") {
  Run r = cli("eval --engine need-nat --mode letrec " + sample("chain.lam"));
  CHECK(r.status == 0);
  CHECK(r.out.find("value: #") != std::string::npos);
  CHECK(cli("eval --engine stuck " + sample("cycle.lam")).status == 2);
  Run v = cli("eval --engine value --mode value " + sample("byvalue.lam"));
  CHECK(v.out.find("value: #") != std::string::npos);
  Run n = cli("eval --engine name --mode value " + sample("byvalue.lam"));
  CHECK(n.out.find("value: \\") != std::string::npos);
  CHECK(cli("eval --engine nonsense " + sample("cycle.lam")).status == 1);
  CHECK(cli("eval", "\\y.x").status == 1);
  CHECK(cli("parse", "\\y.x").out == "\\y.x\n");
}

TEST_CASE("output is deterministic and the seed can come from the environment") {
  Run a = cli("gen --count 5 --mode letrec --seed 3");
  Run b = cli("gen --count 5 --mode letrec --seed 3");
  CHECK(a.status == 0);
  CHECK(a.out == b.out);
  Run c = cli("gen --count 5 --mode letrec --seed 99");
  CHECK(c.out != a.out);
  Run e = cli("gen --count 5 --mode letrec --seed 99", "");
  Run env = Run{};
  {
    std::string cmd = std::string("NEEDSEM_SEED=3 ") + NEEDSEM_CLI + " gen --count 5 --mode letrec --seed 99";
    FILE* p = popen(cmd.c_str(), "r");
    std::array<char, 4096> buf{};
    std::size_t n;
    while ((n = fread(buf.data(), 1, buf.size(), p)) > 0) env.out.append(buf.data(), n);
    pclose(p);
  }
  CHECK(e.out == c.out);
  CHECK(env.out == a.out);
}

TEST_CASE("check streams verdicts") {
  Run r = cli("check --mode letrec --count 20 --format json");
  CHECK(r.status == 0);
  std::size_t lines = 0;
  for (std::size_t p = 0; (p = r.out.find('\n', p)) != std::string::npos; ++p) ++lines;
  CHECK(lines >= 20);
  auto first = nlohmann::json::parse(r.out.substr(0, r.out.find('\n')));
  CHECK(first.contains("status"));
  CHECK(cli("check --mode let " + sample("shared.lam")).status == 0);
}
