#include <doctest.h>

#include <sys/wait.h>
#include <unistd.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace fs = std::filesystem;

namespace {

const std::string kCli = REION_CLI;
const std::string kConfigDir = REION_CONFIG_DIR;
const std::string kDefault = kConfigDir + "/default.cfg";

fs::path scratch() {
  static const fs::path dir = [] {
    fs::path d = fs::temp_directory_path() / ("reion_cli_test_" + std::to_string(::getpid()));
    fs::create_directories(d);
    return d;
  }();
  return dir;
}

int run(const std::string& args, const std::string& stdout_file = "/dev/null") {
  const std::string cmd = kCli + " " + args + " > " + stdout_file + " 2> " + (scratch() / "stderr.txt").string();
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

fs::path write_config(const std::string& name, const std::string& body) {
  const fs::path p = scratch() / name;
  std::ofstream(p) << "[ion]\nspec = " << kConfigDir << "/../data/ndgao3.ion\n" << body;
  return p;
}

std::vector<std::vector<std::string>> data_rows(const std::string& text) {
  std::vector<std::vector<std::string>> rows;
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);) {
    if (line.empty() || line[0] == '#' || line.rfind("field_T", 0) == 0) continue;
    std::vector<std::string> cells;
    std::istringstream ls(line);
    for (std::string c; std::getline(ls, c, ',');) cells.push_back(c);
    rows.push_back(cells);
  }
  return rows;
}

}  // namespace

TEST_CASE("validate on the shipped defaults passes") {
  const fs::path out = scratch() / "validate.txt";
  CHECK(run("--config " + kDefault + " validate", out.string()) == 0);
  const std::string text = slurp(out);
  CHECK(text.find("all checks passed") != std::string::npos);
  CHECK(text.find("FAIL") == std::string::npos);
}

TEST_CASE("sweep output is byte-identical between runs") {
  const fs::path a = scratch() / "a.csv", b = scratch() / "b.csv";
  CHECK(run("--config " + kDefault + " --out " + a.string() + " sweep") == 0);
  CHECK(run("--config " + kDefault + " --out " + b.string() + " sweep") == 0);
  const std::string ta = slurp(a);
  CHECK(ta.size() > 1000);
  CHECK(ta == slurp(b));
  // Unmodeled rows fill the intermediate phase.
  std::size_t unmodeled = 0;
  for (const auto& r : data_rows(ta))
    if (r.size() > 3 && r[3] == "unmodeled") ++unmodeled;
  CHECK(unmodeled == 120);
}

TEST_CASE("lines at zero field: pi at 0 below sigma") {
  const fs::path cfg = write_config("zero.cfg", "[sweep]\nfields = 0 T\n");
  const fs::path out = scratch() / "zero.csv";
  REQUIRE(run("--config " + cfg.string() + " lines", out.string()) == 0);
  double pi = 1e9, sigma = 1e9;
  for (const auto& r : data_rows(slurp(out))) {
    CHECK(r[3] != "two_nd");
    if (r[3] != "main" || r[6] != "true") continue;
    (r[2] == "pi" ? pi : sigma) = std::stod(r[1]);
  }
  CHECK(std::abs(pi) < 1e-6);
  CHECK(sigma > pi);
}

TEST_CASE("pair_lines holds only two-ion rows") {
  const fs::path cfg = write_config("pair.cfg", "[sweep]\nfields = 0 T, 0.5 T\n");
  const fs::path out = scratch() / "pair.csv";
  REQUIRE(run("--config " + cfg.string() + " pair_lines", out.string()) == 0);
  const auto rows = data_rows(slurp(out));
  CHECK_FALSE(rows.empty());
  for (const auto& r : rows) CHECK(r[3] == "two_nd");
}

TEST_CASE("overrides") {
  const fs::path cfg = write_config("small.cfg", "[sweep]\nfields = 0.5 T, 2 T\n");
  const fs::path out = scratch() / "pi.json";
  REQUIRE(run("--config " + cfg.string() + " --polarisation pi --format json --field-axis b --out " + out.string() +
              " sweep") == 0);
  const auto j = nlohmann::json::parse(slurp(out));
  REQUIRE(j["rows"].size() > 0);
  for (const auto& r : j["rows"]) CHECK(r["polarisation"] == "pi");
  bool axis_b = false;
  for (const auto& line : j["config"])
    if (line == "axis = b") axis_b = true;
  CHECK(axis_b);

  const fs::path lv = scratch() / "levels.csv";
  CHECK(run("--config " + cfg.string() + " levels", lv.string()) == 0);
  CHECK(slurp(lv).find("field_T,phase,sublattice,level,energy_GHz") != std::string::npos);
  const fs::path rd = scratch() / "render.csv";
  CHECK(run("--config " + cfg.string() + " render", rd.string()) == 0);
  CHECK(slurp(rd).find("field_T,-150,") != std::string::npos);
}

TEST_CASE("exit codes") {
  CHECK(run("--config " + kDefault) == 2);                                   // no subcommand
  CHECK(run("--config /no/such/file.cfg sweep") == 2);                       // missing config
  CHECK(run("--config " + kDefault + " --field-axis a sweep") == 2);         // bad override
  CHECK(run("--config " + kDefault + " frobnicate") == 2);                   // unknown subcommand
  const fs::path bad = write_config("bad.cfg", "[exchange]\nJ_perpp = -0.65 K\n");
  CHECK(run("--config " + bad.string() + " sweep") == 2);
  CHECK(slurp(scratch() / "stderr.txt").find("J_perpp") != std::string::npos);
  CHECK(run("--config " + kDefault + " --out /no/such/dir/out.csv sweep") == 5);
}
