// Exit-status and file-output contract of the command-line tool.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sys/wait.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>

namespace fs = std::filesystem;

namespace {

int run(const std::string &args) {
  const std::string cmd = std::string(VIRODYN_CLI_PATH) + " " + args + " > /dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  REQUIRE(status != -1);
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string scenario(const char *name) {
  return std::string(VIRODYN_SCENARIO_DIR) + "/" + name;
}

struct TempDir {
  fs::path path;
  TempDir() : path(fs::temp_directory_path() / "virodyn_cli_test") {
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  std::string str() const { return path.string(); }
};

} // namespace

TEST_CASE("equilibria: success, report file, regimes") {
  TempDir dir;
  CHECK(run("equilibria " + scenario("example1_beta0003.cfg") + " --out " + dir.str()) == 0);
  const fs::path report = dir.path / "example1_beta0003.json";
  REQUIRE(fs::exists(report));
  std::ifstream in(report);
  std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  CHECK(text.find("\"regime\": \"infection_free\"") != std::string::npos);
  CHECK(text.find("\"e1\": null") != std::string::npos);
}

TEST_CASE("equilibria: malformed config exits 2") {
  TempDir dir;
  const fs::path bad = dir.path / "bad.cfg";
  std::ofstream(bad) << "[nosuch]\nx = 1\n";
  CHECK(run("equilibria " + bad.string()) == 2);
  CHECK(run("equilibria " + (dir.path / "missing.cfg").string()) == 2);
}

TEST_CASE("simulate: outputs and input validation") {
  TempDir dir;
  CHECK(run("simulate " + scenario("example1_beta0003.cfg") + " --t-end 60 --h 0.1 --out " +
            dir.str()) == 0);
  CHECK(fs::exists(dir.path / "example1_beta0003.csv"));
  CHECK(fs::exists(dir.path / "example1_beta0003.svg"));

  std::ifstream svg(dir.path / "example1_beta0003.svg");
  std::string text((std::istreambuf_iterator<char>(svg)), std::istreambuf_iterator<char>());
  CHECK(text.find("<svg") != std::string::npos);
  CHECK(text.find("polyline") != std::string::npos);

  CHECK(run("simulate " + scenario("example1_beta0003.cfg") + " --t-end 0") == 2);
  CHECK(run("simulate " + scenario("example1_beta0003.cfg") + " --h -0.5") == 2);
  CHECK(run("simulate") == 2);       // missing scenario argument
  CHECK(run("nosuchcommand x") == 2);
}

TEST_CASE("verify: pass, audit failure, and absent targets") {
  CHECK(run("verify " + scenario("example1_beta0003.cfg") +
            " --target e0 --t-end 150 --h 0.1") == 0);
  // the beta = 1 trajectory heads to E2, so the E0 audit fails with exit 1
  CHECK(run("verify " + scenario("example2_beta1.cfg") + " --target e0 --t-end 60") == 1);
  // E2 does not exist below the CTL threshold
  CHECK(run("verify " + scenario("example1_beta0003.cfg") +
            " --target e2 --t-end 100 --h 0.1") == 2);
  CHECK(run("verify " + scenario("example1_beta0003.cfg") + " --t-end 100") == 2); // no target
}

TEST_CASE("simulate: an explicit unstable step aborts with exit 1") {
  // the stiff scenario breaches positivity at this step; no silent refinement
  CHECK(run("simulate " + scenario("example2_beta1.cfg") + " --t-end 50 --h 0.1") == 1);
}

TEST_CASE("sweep: table, workers, usage errors") {
  TempDir dir;
  CHECK(run("sweep " + scenario("example1_beta0003.cfg") + " --workers 3 --out " + dir.str()) ==
        0);
  const fs::path csv = dir.path / "sweep.csv";
  REQUIRE(fs::exists(csv));
  std::ifstream in(csv);
  std::string header, row1, row2, row3;
  std::getline(in, header);
  std::getline(in, row1);
  std::getline(in, row2);
  std::getline(in, row3);
  CHECK(header == "value,r0,r1,regime");
  CHECK(row1.find("infection_free") != std::string::npos);
  CHECK(row2.find("ctl_inactivated") != std::string::npos);
  CHECK(row3.find("ctl_activated") != std::string::npos);

  // no [sweep] section
  CHECK(run("sweep " + scenario("example3_beta01.cfg")) == 2);
}
