#include <catch2/catch_amalgamated.hpp>

#include <array>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <string>

namespace {

struct RunResult {
  int exit_code;
  std::string out;
};

RunResult run_cli(const std::string& args) {
  std::string cmd = std::string(THETA_CLI_PATH) + " " + args + " 2>&1";
  std::array<char, 512> buf;
  std::string out;
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  while (fgets(buf.data(), (int)buf.size(), pipe)) out += buf.data();
  int status = pclose(pipe);
  int code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return {code, out};
}

std::string example(const std::string& name) { return std::string(THETA_EXAMPLES_DIR) + "/" + name; }

std::string write_temp(const std::string& body) {
  std::string path = std::string(std::getenv("TMPDIR") ? std::getenv("TMPDIR") : "/tmp") + "/cli_case.cat";
  std::ofstream f(path);
  f << body;
  return path;
}

}  // namespace

TEST_CASE("precompletion level of the walking isomorphism") {
  auto r = run_cli("complete --cat " + example("walking_iso.cat") + " --k 1 --level \"[0]\" --p 1");
  CHECK(r.exit_code == 0);
  CHECK(r.out == "4\n");
}

TEST_CASE("completeness check refuses a non-gaunt top dimension") {
  auto r = run_cli("check complete --ncat \"susp(susp(isochain(1)@1))\" --k 3");
  CHECK(r.exit_code == 1);
  CHECK(r.out.find("incomplete") != std::string::npos);
  auto r2 = run_cli("check complete --ncat \"susp(susp(isochain(1)@1))\" --k 2");
  CHECK(r2.exit_code == 0);
  CHECK(r2.out.find("incomplete") == std::string::npos);
  CHECK(r2.out.find("complete") != std::string::npos);
}

TEST_CASE("intertwining of the empty presheaf has two elements everywhere") {
  auto r = run_cli("eval --presheaf \"V1(empty)\" --level \"[2]([0],[0])\" --p 0");
  CHECK(r.exit_code == 0);
  CHECK(r.out == "2\n");
  auto r2 = run_cli("eval --presheaf \"V1(empty)\" --level \"[1]([3])\" --p 2");
  CHECK(r2.exit_code == 0);
  CHECK(r2.out == "2\n");
}

TEST_CASE("nerve levels from files and expressions") {
  auto r = run_cli("nerve --cat " + example("arrow.cat") + " --level \"[1]\" --p 0");
  CHECK(r.exit_code == 0);
  CHECK(r.out == "3\n");
  auto r2 = run_cli("nerve --ncat \"ord(3)\" --level \"[1]\"");
  CHECK(r2.exit_code == 0);
  CHECK(r2.out == "10\n");
  auto r3 = run_cli("nerve --cat " + example("square.cat") + " --level \"[2]\"");
  CHECK(r3.exit_code == 0);
  CHECK(r3.out == "16\n");
}

TEST_CASE("segal check passes on nerves") {
  auto r = run_cli("check segal --cat " + example("walking_iso.cat"));
  CHECK(r.exit_code == 0);
  CHECK(r.out.find("segal") != std::string::npos);
  auto r2 = run_cli("check segal --ncat \"susp(ord(1))\"");
  CHECK(r2.exit_code == 0);
}

TEST_CASE("homotopy category and equivalence verbs") {
  auto r = run_cli("ho --cat " + example("walking_iso.cat"));
  CHECK(r.exit_code == 0);
  CHECK(r.out == "objects 2 morphisms 4\n");
  auto r2 = run_cli("dk --cat " + example("arrow.cat") + " --k 1");
  CHECK(r2.exit_code == 0);
  CHECK(r2.out.find("dk-equivalence") != std::string::npos);
}

TEST_CASE("total precompletion carries caveats in dimension two") {
  auto r = run_cli("total --ncat \"susp(isochain(1)@1)\" --level \"[0]\" --p 0");
  CHECK(r.exit_code == 0);
  CHECK(r.out.find("2\n") == 0);
  CHECK(r.out.find("caveat") != std::string::npos);
  auto rs = run_cli("total --ncat \"susp(isochain(1)@1)\" --level \"[0]\" --p 0 --strict");
  CHECK(rs.exit_code == 2);
}

TEST_CASE("json output is byte-stable and versioned") {
  std::string cmd = "complete --cat " + example("walking_iso.cat") + " --k 1 --level \"[1]\" --p 1 --json --seed 7";
  auto r1 = run_cli(cmd);
  auto r2 = run_cli(cmd);
  CHECK(r1.exit_code == 0);
  CHECK(r1.out == r2.out);
  CHECK(r1.out.find("\"schema\": 1") != std::string::npos);
  CHECK(r1.out.find("\"cardinality\": 16") != std::string::npos);
  CHECK(r1.out.find("\"provenance\": \"grid\"") != std::string::npos);
  CHECK(r1.out.find("\"seed\": 7") != std::string::npos);
}

TEST_CASE("parse errors exit with code 64 and a location") {
  auto r = run_cli("eval --presheaf \"V1(empty\" --level \"[0]\"");
  CHECK(r.exit_code == 64);
  auto r2 = run_cli("nerve --ncat \"frob(3)\"");
  CHECK(r2.exit_code == 64);
  CHECK(r2.out.find("frob") != std::string::npos);
  auto bad = write_temp(
      "objects: a b\n"
      "morphisms:\n"
      "  ida a a\n"
      "  f a b\n"
      "compose:\n"
      "  f f = ida\n");
  auto r3 = run_cli("nerve --cat " + bad + " --level \"[0]\"");
  CHECK(r3.exit_code == 64);
  CHECK(r3.out.find(":6") != std::string::npos);
}

TEST_CASE("size guards refuse with exit 2 and can be widened") {
  auto r = run_cli("complete --ncat \"ord(1)\" --k 1 --level \"[1]\" --p 5");
  CHECK(r.exit_code == 2);
  CHECK(r.out.find("refused") != std::string::npos);
  auto r2 = run_cli("complete --ncat \"ord(1)\" --k 1 --level \"[1]\" --p 5 --window 2,6,6");
  CHECK(r2.exit_code == 0);
  CHECK(r2.out == "3\n");
}

TEST_CASE("malformed category files report the offending row") {
  auto bad = write_temp(
      "objects: a\n"
      "morphisms:\n"
      "  ida a a\n"
      "compose:\n"
      "  ida ida ida extra\n");
  auto r = run_cli("nerve --cat " + bad);
  CHECK(r.exit_code == 64);
  CHECK(r.out.find(":5") != std::string::npos);
}
