#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <string>

#include <sys/wait.h>
#include <unistd.h>

namespace fs = std::filesystem;

namespace {

struct Sandbox {
  fs::path dir = fs::temp_directory_path() / ("mhf_cli_" + std::to_string(::getpid()));
  Sandbox() { fs::create_directories(dir); }
  ~Sandbox() { fs::remove_all(dir); }

  int run(const std::string& args) const {
    const std::string line =
        "cd '" + dir.string() + "' && '" + MHF_CLI_PATH + "' " + args + " >/dev/null 2>&1";
    const int status = std::system(line.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  }
};

}  // namespace

TEST_CASE("exit codes") {
  Sandbox sb;
  REQUIRE(sb.run("gen --family line --n 10 --out l.dag") == 0);
  REQUIRE(sb.run("gen --family egsample --n 40 --out e.dag") == 0);
  CHECK(sb.run("verify --in l.dag --prop dr --params e=1,d=4") == 0);
  CHECK(sb.run("verify --in l.dag --prop dr --params e=2,d=5") == 2);
  CHECK(sb.run("verify --in e.dag --prop dr --params e=60,d=3 --work-cap 100") == 3);
  CHECK(sb.run("verify --in l.dag --prop dr --params e=1") == 1);
  CHECK(sb.run("verify --in l.dag --prop dr --params e=1,d=2,x=3") == 1);
  CHECK(sb.run("verify --in l.dag --prop nope --params e=1") == 1);
  CHECK(sb.run("gen --family nope --n 10 --out x.dag") == 1);
  CHECK(sb.run("dynamize --in missing.dag --chal 3 --out s.json") != 0);
  CHECK(sb.run("--format xml gen --family line --n 4 --out x.dag") != 0);
  CHECK(sb.run("") != 0);
}

TEST_CASE("hash and extract round trip through files") {
  Sandbox sb;
  REQUIRE(sb.run("gen --family drsample --n 40 --seed 2 --out d.dag") == 0);
  REQUIRE(sb.run("dynamize --in d.dag --chal 12 --out s.json") == 0);
  REQUIRE(sb.run("hash --spec s.json --input abcd --trace t.json --graph-out g.dag") == 0);
  CHECK(sb.run("extract --trace t.json --graph g.dag --report p.json") == 0);
  // The static graph is not the ex-post-facto graph.
  REQUIRE(sb.run("gen --family line --n 52 --out wrong.dag") == 0);
  CHECK(sb.run("extract --trace t.json --graph wrong.dag") == 1);
  CHECK(sb.run("hash --spec s.json --input zz") == 1);
  CHECK(sb.run("hash --spec s.json --input ab --strategy minimal --trace m.json") == 0);
  CHECK(sb.run("hash --spec s.json --input ab --retention low") == 0);
}
