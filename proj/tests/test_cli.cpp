#include <doctest.h>

#include <sys/wait.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "draht/codec.hpp"
#include "draht/color.hpp"
#include "draht/ply.hpp"

using namespace draht;
namespace fs = std::filesystem;

namespace {

const fs::path& workDir()
{
  static const fs::path dir = [] {
    auto d = fs::temp_directory_path() / "draht-cli-tests";
    fs::remove_all(d);
    fs::create_directories(d);
    return d;
  }();
  return dir;
}

struct Run {
  int status;
  std::string out;
  std::string err;
};

std::string
slurp(const fs::path& p)
{
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Run
cli(const std::string& args)
{
  const auto out = workDir() / "stdout.txt";
  const auto err = workDir() / "stderr.txt";
  const std::string cmd = std::string("\"") + DRAHT_CLI + "\" " + args + " >\"" + out.string()
                          + "\" 2>\"" + err.string() + "\"";
  const int raw = std::system(cmd.c_str());
  return {WIFEXITED(raw) ? WEXITSTATUS(raw) : -1, slurp(out), slurp(err)};
}

std::string
path(const std::string& name)
{
  return (workDir() / name).string();
}

std::string
psnrLine(const std::string& text)
{
  const auto pos = text.find("psnr ");
  REQUIRE(pos != std::string::npos);
  return text.substr(pos, text.find('\n', pos) - pos);
}

std::vector<std::vector<std::string>>
csvRows(const std::string& text)
{
  std::vector<std::vector<std::string>> rows;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    std::vector<std::string> cells;
    std::istringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ','))
      cells.push_back(cell);
    rows.push_back(cells);
  }
  return rows;
}

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("gen is deterministic")
{
  REQUIRE(cli("gen --out " + path("g1.ply") + " --seed 4 --texture noise").status == 0);
  REQUIRE(cli("gen --out " + path("g2.ply") + " --seed 4 --texture noise").status == 0);
  CHECK(slurp(path("g1.ply")) == slurp(path("g2.ply")));
  REQUIRE(cli("gen --out " + path("g3.ply") + " --seed 5 --texture noise").status == 0);
  CHECK(slurp(path("g1.ply")) != slurp(path("g3.ply")));
}

TEST_CASE("encode, decode and eval agree")
{
  REQUIRE(cli("gen --out " + path("sphere.ply") + " --texture smooth").status == 0);
  const auto enc = cli("encode -i " + path("sphere.ply") + " -o " + path("sphere.bin") + " --qs 12");
  REQUIRE(enc.status == 0);
  REQUIRE(cli("decode -i " + path("sphere.bin") + " -g " + path("sphere.ply") + " -o "
              + path("sphere.dec.ply")).status == 0);
  const auto ev = cli("eval --original " + path("sphere.ply") + " --reconstructed "
                      + path("sphere.dec.ply") + " --bitstream " + path("sphere.bin"));
  REQUIRE(ev.status == 0);
  CHECK(psnrLine(enc.out) == psnrLine(ev.out));

  // the library gives the same bytes
  const auto cloud = rgbToYuv(loadPly(path("sphere.ply")));
  EncoderConfig cfg;
  cfg.qs = {12};
  const auto bytes = encode(cloud, cfg).bytes;
  const auto file = slurp(path("sphere.bin"));
  CHECK(std::string(bytes.begin(), bytes.end()) == file);
}

TEST_CASE("no-prediction flag is vanilla coding")
{
  REQUIRE(cli("gen --out " + path("grad.ply")).status == 0);
  REQUIRE(cli("encode -i " + path("grad.ply") + " -o " + path("grad.van") + " --no-prediction")
            .status == 0);
  const auto cloud = rgbToYuv(loadPly(path("grad.ply")));
  const auto bytes = encodeVanilla(cloud, {8}).bytes;
  CHECK(std::string(bytes.begin(), bytes.end()) == slurp(path("grad.van")));
}

TEST_CASE("threads option and environment give identical output")
{
  REQUIRE(cli("gen --out " + path("t.ply") + " --texture checker").status == 0);
  REQUIRE(cli("--threads 1 encode -i " + path("t.ply") + " -o " + path("t1.bin")).status == 0);
  REQUIRE(cli("--threads 8 encode -i " + path("t.ply") + " -o " + path("t8.bin") + " --block-size 9000").status == 0);
  REQUIRE(cli("encode -i " + path("t.ply") + " -o " + path("t8b.bin") + " --block-size 9000").status == 0);
  CHECK(slurp(path("t8.bin")) == slurp(path("t8b.bin")));
  CHECK(slurp(path("t1.bin")) != slurp(path("t8.bin")));
  setenv("DRAHT_THREADS", "4", 1);
  REQUIRE(cli("encode -i " + path("t.ply") + " -o " + path("t4.bin")).status == 0);
  unsetenv("DRAHT_THREADS");
  CHECK(slurp(path("t1.bin")) == slurp(path("t4.bin")));
}

TEST_CASE("sweep rows are monotone in rate")
{
  REQUIRE(cli("gen --out " + path("sw.ply")).status == 0);
  const auto r = cli("sweep -i " + path("sw.ply") + " --csv " + path("sw.csv"));
  REQUIRE(r.status == 0);
  const auto rows = csvRows(slurp(path("sw.csv")));
  REQUIRE(rows.size() == 21);
  CHECK(rows[0].size() == 10);
  CHECK(rows[0][0] == "cloud");
  for (size_t block = 0; block < 2; block++) {
    double last = INFINITY;
    for (size_t i = 1 + 10 * block; i < 11 + 10 * block; i++) {
      const double bpp = std::stod(rows[i][3]);
      CHECK(bpp < last);
      last = bpp;
    }
  }
  CHECK(rows[1][1] == "vanilla");
  CHECK(rows[11][1] == "predictive");
  CHECK(r.out.find("bd-rate predictive vs vanilla") != std::string::npos);
}

TEST_CASE("eval of identical clouds reports inf")
{
  REQUIRE(cli("gen --out " + path("id.ply") + " --texture checker").status == 0);
  const auto r = cli("eval --original " + path("id.ply") + " --reconstructed " + path("id.ply")
                     + " --csv " + path("id.csv") + " --name id");
  REQUIRE(r.status == 0);
  const auto rows = csvRows(slurp(path("id.csv")));
  REQUIRE(rows.size() == 2);
  CHECK(rows[1][0] == "id");
  CHECK(rows[1][7] == "inf");
}

TEST_CASE("refiner weights through the command line")
{
  REQUIRE(cli("gen --out " + path("rf.ply") + " --texture smooth").status == 0);
  REQUIRE(cli("refiner-init -o " + path("zero.drwt") + " --hidden 16").status == 0);
  REQUIRE(cli("encode -i " + path("rf.ply") + " -o " + path("rf.bin") + " --refiner " + path("zero.drwt")).status == 0);
  REQUIRE(cli("encode -i " + path("rf.ply") + " -o " + path("rf.idw")).status == 0);
  CHECK(slurp(path("rf.bin")) == slurp(path("rf.idw")));
  REQUIRE(cli("decode -i " + path("rf.bin") + " -g " + path("rf.ply") + " -o " + path("rf.dec.ply") + " --refiner " + path("zero.drwt")).status == 0);
}

TEST_CASE("exit codes")
{
  auto r = cli("encode -i " + path("missing.ply") + " -o " + path("x.bin"));
  CHECK(r.status == 2);
  CHECK(r.err.find("missing.ply") != std::string::npos);

  CHECK(cli("encode").status == 2);
  CHECK(cli("frobnicate").status == 2);
  CHECK(cli("--help").status == 0);
  CHECK(cli("encode -i " + path("grad.ply") + " -o " + path("x.bin") + " --qs -3").status == 1);
  CHECK(cli("sweep -i " + path("grad.ply") + " --qs 16 8").status == 2);

  REQUIRE(cli("gen --out " + path("c.ply")).status == 0);
  REQUIRE(cli("encode -i " + path("c.ply") + " -o " + path("c.bin")).status == 0);
  auto bytes = slurp(path("c.bin"));
  bytes[bytes.size() / 2] ^= 1;
  std::ofstream(path("c.bad"), std::ios::binary) << bytes;
  r = cli("decode -i " + path("c.bad") + " -g " + path("c.ply") + " -o " + path("c.dec.ply"));
  CHECK(r.status == 1);
  CHECK(!r.err.empty());
}

TEST_CASE("config file supplies options")
{
  REQUIRE(cli("gen --out " + path("cfg.ply")).status == 0);
  std::ofstream(path("opts.ini")) << "threads=2\n[encode]\nqs=24\n";
  REQUIRE(cli("--config " + path("opts.ini") + " encode -i " + path("cfg.ply") + " -o " + path("cfg.bin")).status == 0);
  REQUIRE(cli("encode -i " + path("cfg.ply") + " -o " + path("cfg24.bin") + " --qs 24").status == 0);
  CHECK(slurp(path("cfg.bin")) == slurp(path("cfg24.bin")));
}

}
