#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string cli_path() {
  const char* p = std::getenv("CNODAL_CLI");
  REQUIRE_MESSAGE(p != nullptr, "CNODAL_CLI must point at the binary");
  return p;
}

int run(const std::string& args, const std::string& log = "/dev/null") {
  const std::string cmd = cli_path() + " " + args + " >" + log + " 2>&1";
  const int status = std::system(cmd.c_str());
  REQUIRE(status != -1);
  return WEXITSTATUS(status);
}

std::string slurp(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  REQUIRE_MESSAGE(f.good(), "missing file: " << p.string());
  std::ostringstream os;
  os << f.rdbuf();
  return os.str();
}

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() /
           ("cnodal_cli_test_" + std::to_string(::getpid()) + "_" +
            std::to_string(counter()++));
    fs::create_directories(path);
  }
  ~TempDir() {
    std::error_code ec;
    fs::remove_all(path, ec);
  }
  static int& counter() {
    static int c = 0;
    return c;
  }
  std::string sub(const std::string& name) const { return (path / name).string(); }
};

}  // namespace

TEST_CASE("version and dry runs exit cleanly") {
  CHECK(run("--version") == 0);
  TempDir t;
  const std::string log = t.sub("dry.txt");
  CHECK(run("sweep --mode single --n 1 --lambda 100,316,1000 --dry-run", log) == 0);
  const json resolved = json::parse(slurp(log));
  CHECK(resolved.at("command") == "sweep");
  CHECK(resolved.at("mode") == "single");
  CHECK(resolved.at("lambda").size() == 3);
  CHECK(run("barcode --field \"{\\\"kind\\\":\\\"named\\\",\\\"name\\\":\\\"sin\\\"}\" --dry-run", log) == 0);
  CHECK(run("mdp --field \"{\\\"kind\\\":\\\"named\\\",\\\"name\\\":\\\"sin\\\"}\" --dry-run", log) == 0);
}

TEST_CASE("bad inputs exit with code 2") {
  TempDir t;
  CHECK(run("barcode --field not-json --out " + t.sub("x")) == 2);
  CHECK(run("barcode --out " + t.sub("x")) == 2);  // missing --field
  CHECK(run("barcode --field \"{\\\"kind\\\":\\\"grid\\\",\\\"dims\\\":[4],\\\"spacing\\\":[1.0],\\\"samples\\\":[1,2,3]}\" --out " + t.sub("x")) == 2);
  CHECK(run("mdp --field \"{\\\"kind\\\":\\\"named\\\",\\\"name\\\":\\\"sin\\\",\\\"j\\\":2,\\\"n\\\":2}\" --k 1 --p 2 --out " + t.sub("x")) == 2);
  CHECK(run("nosuchcommand") == 2);
}

TEST_CASE("resolution, configuration, and depth failures use distinct codes") {
  TempDir t;
  CHECK(run("sweep --mode wiggly --delta 1e-31,1e-30,1e-29 --out " + t.sub("a")) == 3);
  CHECK(run("sweep --mode single --n 1 --lambda 100,200 --out " + t.sub("b")) == 4);
  CHECK(run("mdp --field \"{\\\"kind\\\":\\\"named\\\",\\\"name\\\":\\\"sin\\\",\\\"j\\\":40}\" --k 2 --p 2 --delta 0.05 --max-level 1 --out " + t.sub("c")) == 5);
}

TEST_CASE("the barcode command writes the six-well structure of -|sin 3x|") {
  TempDir t;
  const std::string out = t.sub("b");
  CHECK(run("barcode --field \"{\\\"kind\\\":\\\"named\\\",\\\"name\\\":\\\"sin\\\",\\\"j\\\":3,\\\"n\\\":1}\" --abs --negate --delta 0.5,0.9 --out " + out) == 0);

  const json doc = json::parse(slurp(fs::path(out) / "barcode.json"));
  CHECK(doc.at("library_version").is_string());
  CHECK(doc.at("config_hash").get<std::string>().size() == 16);
  const json& bars = doc.at("barcode");
  REQUIRE(bars.is_array());
  int deg0_deep = 0;
  for (const auto& b : bars)
    if (b.at("degree") == 0) deg0_deep += b.at("multiplicity").get<int>();
  CHECK(deg0_deep == 6);

  const std::string counts = slurp(fs::path(out) / "counts.csv");
  CHECK(counts.find("# library_version:") != std::string::npos);
  CHECK(counts.find("degree,delta,count") != std::string::npos);
  CHECK(counts.find("0,0.9,6") != std::string::npos);
}

TEST_CASE("repeat invocations are byte-identical") {
  TempDir t;
  const std::string args =
      "sweep --mode single --n 1 --lambda 100,316,1000 --delta 0.5 --trials 2 --out ";
  CHECK(run(args + t.sub("r1")) == 0);
  CHECK(run(args + t.sub("r2")) == 0);
  for (const char* name : {"sweep.csv", "summary.json"}) {
    CHECK(slurp(fs::path(t.sub("r1")) / name) == slurp(fs::path(t.sub("r2")) / name));
  }
  const json summary = json::parse(slurp(fs::path(t.sub("r1")) / "summary.json"));
  CHECK(summary.contains("exponent"));
  CHECK(summary.contains("ci"));
  CHECK(summary.contains("C1"));
  CHECK(summary.contains("C2"));
  CHECK(summary.at("ensemble").is_string());
}

TEST_CASE("config files feed flags and flags win") {
  TempDir t;
  const std::string cfg = t.sub("cfg.json");
  {
    std::ofstream f(cfg);
    f << R"({"mode": "single", "n": 1, "lambda": [100, 316, 1000], "trials": 2, "delta": 0.5})";
  }
  const std::string log = t.sub("dry.txt");
  CHECK(run("sweep --config " + cfg + " --dry-run", log) == 0);
  json resolved = json::parse(slurp(log));
  CHECK(resolved.at("trials") == 2);
  CHECK(run("sweep --config " + cfg + " --trials 5 --dry-run", log) == 0);
  resolved = json::parse(slurp(log));
  CHECK(resolved.at("trials") == 5);
  CHECK(resolved.at("lambda").size() == 3);
}

TEST_CASE("the mdp command certifies sin 40x at depth 0.1") {
  TempDir t;
  const std::string out = t.sub("m");
  CHECK(run("mdp --field \"{\\\"kind\\\":\\\"named\\\",\\\"name\\\":\\\"sin\\\",\\\"j\\\":40}\" --k 2 --p 2 --delta 0.1 --out " + out) == 0);
  const json doc = json::parse(slurp(fs::path(out) / "mdp.json"));
  CHECK(doc.at("mdp").at("root").at("level") == 0);
  CHECK(doc.at("mdp").at("leaf_count").get<int>() > 8);

  const std::string report = slurp(fs::path(out) / "report.csv");
  CHECK(report.find("delta,K_size,n_actual,bound,ratio") != std::string::npos);
  std::istringstream is(report);
  std::string line, last;
  while (std::getline(is, line))
    if (!line.empty() && line[0] != '#') last = line;
  CHECK(last.substr(0, 4) == "0.1,");
}

TEST_CASE("json row format mirrors the csv rows") {
  TempDir t;
  const std::string out = t.sub("j");
  CHECK(run("sweep --mode single --n 1 --lambda 100,316,1000 --trials 2 "
            "--format json --out " + out) == 0);
  const json rows = json::parse(slurp(fs::path(out) / "sweep.json"));
  CHECK(rows.at("rows").size() == 6);
  CHECK(rows.at("rows")[0].contains("lambda"));
  CHECK(rows.at("rows")[0].contains("count"));
  CHECK(!fs::exists(fs::path(out) / "sweep.csv"));
}
