#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>

namespace fs = std::filesystem;

namespace
{
int run(const std::string &args)
{
  const std::string cmd = std::string(CTS_CLI_PATH) + " " + args + " >/dev/null 2>&1";
  const int st = std::system(cmd.c_str());
  return WIFEXITED(st) ? WEXITSTATUS(st) : -1;
}

std::string slurp(const fs::path &p)
{
  std::ifstream is(p);
  std::stringstream ss;
  ss << is.rdbuf();
  return ss.str();
}
} // namespace

TEST_CASE("cli spectrum and exit codes")
{
  const auto dir = fs::temp_directory_path() / "cts_cli_test";
  fs::create_directories(dir);
  const auto out = dir / "s.json";
  CHECK(run("spectrum --gamma 1 --z 0.5 --verify --json " + out.string()) == 0);
  CHECK(slurp(out).find("E2CS2") != std::string::npos);
  CHECK(slurp(out.string() + ".json").find("\"command\"") != std::string::npos);
  CHECK(run("spectrum --gamma 2 --z -0.5") == 2);
  CHECK(run("spectrum --gamma 2 --z -0.5 --allow-boundary") == 0);
  CHECK(run("spectrum --gamma 1 --z 0") == 2);
  CHECK(run("spectrum --gamma 1 --z 0.5 --json /nonexistent-dir/x.json") == 4);
  CHECK(run("scan --grid /nonexistent-dir/g.json") == 4);
  CHECK(run("nonsense") == 2);
  CHECK(run("--help") == 0);
  fs::remove_all(dir);
}

TEST_CASE("cli scan writes image, table and sidecars")
{
  const auto dir = fs::temp_directory_path() / "cts_cli_scan";
  fs::create_directories(dir);
  const auto grid = dir / "g.json";
  std::ofstream(grid) << R"({"gamma_axis": {"mode": "linear", "min": 0, "max": 2, "n": 8},
                             "z_axis": {"min": -1, "max": 1, "n": 6}, "mass_mode": "gamma"})";
  CHECK(run("--threads 2 scan --grid " + grid.string() + " --ppm " + (dir / "m.ppm").string() + " --csv " +
            (dir / "m.csv").string()) == 0);
  CHECK(fs::exists(dir / "m.ppm"));
  CHECK(fs::exists(dir / "m.ppm.json"));
  CHECK(fs::exists(dir / "m.csv.json"));
  const auto csv = slurp(dir / "m.csv");
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 49);
  fs::remove_all(dir);
}

TEST_CASE("cli integrate and validate")
{
  const auto dir = fs::temp_directory_path() / "cts_cli_int";
  fs::create_directories(dir);
  CHECK(run("integrate --gamma 1 --z 0.5 --periods 1 --csv " + (dir / "t.csv").string()) == 0);
  CHECK(fs::file_size(dir / "t.csv") > 0);
  CHECK(run("integrate --tol 1e-3") == 2);
  CHECK(run("validate --suite dynamics --json " + (dir / "v.json").string()) == 0);
  CHECK(slurp(dir / "v.json").find("dynamics_period") != std::string::npos);
  CHECK(run("bifurcate --seed 0,-0.3702483631504248 --kind HH --json " + (dir / "b.json").string()) == 0);
  CHECK(slurp(dir / "b.json").find("branches") != std::string::npos);
  CHECK(run("bifurcate") == 2);
  fs::remove_all(dir);
}
