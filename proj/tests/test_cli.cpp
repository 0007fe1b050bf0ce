#include <doctest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>

namespace fs = std::filesystem;

namespace {

int run(const std::string& args) {
  const std::string cmd = std::string(CBCFOG_CLI) + " " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

struct TempDir {
  fs::path path = fs::temp_directory_path() / "cbcfog_cli_test";
  TempDir() {
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  std::string operator/(const std::string& name) const { return (path / name).string(); }
};

}  // namespace

TEST_CASE("successful subcommands exit with 0") {
  TempDir dir;
  const auto topo = dir / "t.txt";
  CHECK(run("topology generate --kind geometric --nodes 60 --seed 3 -o " + topo) == 0);
  REQUIRE(fs::exists(topo));
  CHECK(run("topology validate " + topo + " --origin header") == 0);
  CHECK(run("centrality -t " + topo + " --kind cbc_replication -o " + (dir / "s.csv")) == 0);
  CHECK(run("centrality -t " + topo + " --kind betweenness -o " + (dir / "b.csv")) == 0);
  CHECK(run("place -t " + topo + " --scheme degree -o " + (dir / "p.csv")) == 0);
  CHECK(run("simulate -t " + topo + " --scheme cbc --interests 200 --export-workload " +
            (dir / "w.csv") + " -o " + (dir / "m.csv")) == 0);
  CHECK(run("simulate -t " + topo + " --scheme lru_social_unaware --workload " + (dir / "w.csv")) ==
        0);
  CHECK(run("experiment --topologies " + topo +
            " --schemes cbc,no_fog --repetitions 2 --interests 100 --no-gnuplot --output-dir " +
            (dir / "out")) == 0);
  CHECK(fs::exists(dir / "out/results.csv"));
  CHECK(run("sweep-alpha --topologies " + topo + " --repetitions 1 --interests 100 --output-dir " +
            (dir / "sweep")) == 0);
  CHECK(fs::exists(dir / "sweep/cbc_hit_rate_vs_alpha.dat"));
}

TEST_CASE("configuration errors exit with 1") {
  TempDir dir;
  CHECK(run("experiment --config " + (dir / "missing.json")) == 1);
  std::ofstream(dir / "bad.json") << R"({"repetitions": 0, "topologies": ["x.txt"]})";
  CHECK(run("experiment --config " + (dir / "bad.json")) == 1);
  CHECK(run("experiment --topologies x.txt --schemes rainbow") == 1);
  CHECK(run("frobnicate") == 1);
  CHECK(run("simulate") == 1);
  CHECK(run("simulate -t x.txt --origin north") == 1);
}

TEST_CASE("runtime errors exit with 2") {
  TempDir dir;
  CHECK(run("topology validate " + (dir / "absent.txt")) == 2);
  std::ofstream(dir / "loop.txt") << "0 0\n";
  CHECK(run("topology validate " + (dir / "loop.txt")) == 2);
  CHECK(run("experiment --topologies " + (dir / "absent.txt") + " --repetitions 1") == 2);
}
