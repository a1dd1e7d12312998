#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

#ifndef PTW_CLI_BIN
#define PTW_CLI_BIN "./ptw"
#endif

namespace {

struct RunResult {
  int code = -1;
  std::string out;
};

RunResult run(const std::string& args) {
  const std::string out_path = "/tmp/ptw_cli_out.txt";
  const std::string cmd = std::string(PTW_CLI_BIN) + " " + args + " >" + out_path + " 2>&1";
  const int status = std::system(cmd.c_str());
  RunResult r;
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  std::ifstream in(out_path);
  std::stringstream ss;
  ss << in.rdbuf();
  r.out = ss.str();
  std::remove(out_path.c_str());
  return r;
}

void write_file(const std::string& path, const std::string& body) {
  std::ofstream out(path);
  out << body;
}

}  // namespace

TEST_CASE("kernel eval emits the case and total") {
  const RunResult r = run("kernel eval --m 4 --n 3 --t 1.0 --x big:1.5 --y small:0.5");
  CHECK(r.code == 0);
  CHECK(r.out.find("\"case\": \"MN\"") != std::string::npos);
  CHECK(r.out.find("total") != std::string::npos);
}

TEST_CASE("verify on a single-atom instance reports ratio one half") {
  write_file("/tmp/ptw_cli_single.json",
             R"({"sigma":[{"end":"big","s":1.0625,"w":2.0}],)"
             R"("mu":[{"end":"big","s":1.0625,"t":0.5,"w":3.0}]})");
  const RunResult r = run("verify --measures /tmp/ptw_cli_single.json");
  CHECK(r.code == 0);
  const auto pos = r.out.find("\"ratio\": ");
  REQUIRE(pos != std::string::npos);
  CHECK(std::strtod(r.out.c_str() + pos + 9, nullptr) == doctest::Approx(0.5).epsilon(1e-12));
  std::remove("/tmp/ptw_cli_single.json");
}

TEST_CASE("malformed measure files exit with code 2 and name the atom") {
  write_file("/tmp/ptw_cli_bad.json",
             R"({"sigma":[{"end":"big","s":1.0,"w":1.0},{"end":"big","s":2.0,"w":-3.0}],"mu":[]})");
  const RunResult r = run("verify --measures /tmp/ptw_cli_bad.json");
  CHECK(r.code == 2);
  CHECK(r.out.find("sigma[1]") != std::string::npos);
  std::remove("/tmp/ptw_cli_bad.json");
}

TEST_CASE("usage errors exit with code 2") {
  CHECK(run("no-such-subcommand").code == 2);
  CHECK(run("verify").code == 2);  // --measures is required
  CHECK(run("norm --measures /tmp/does_not_exist_ptw.json").code == 2);
}

TEST_CASE("an untestable instance fails the ratio ceiling with exit 1") {
  // the lone mu atom sits above every box and every hatted triple, so both
  // testing constants vanish while the norm stays positive
  write_file("/tmp/ptw_cli_unreachable.json",
             R"({"sigma":[{"end":"big","s":1.0625,"w":1.0}],)"
             R"("mu":[{"end":"big","s":1.0625,"t":100.0,"w":1.0}]})");
  const RunResult r = run("verify --measures /tmp/ptw_cli_unreachable.json");
  CHECK(r.code == 1);
  std::remove("/tmp/ptw_cli_unreachable.json");
}

TEST_CASE("help exits cleanly") { CHECK(run("--help").code == 0); }
