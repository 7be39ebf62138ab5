#include <sys/wait.h>

#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>

#include "doctest.h"
#include "json.hpp"

using nlohmann::json;

namespace {

struct Result {
  int code = -1;
  std::string out;
};

// Runs the binary through the shell; stderr is appended when `withErr`.
Result tfa(const std::string& args, bool withErr = false) {
  const std::string cmd = std::string(TFA_BIN) + " " + args + (withErr ? " 2>&1" : " 2>/dev/null");
  Result r;
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  char buf[4096];
  std::size_t n = 0;
  while ((n = fread(buf, 1, sizeof buf, pipe)) > 0) r.out.append(buf, n);
  const int status = pclose(pipe);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

}  // namespace

TEST_CASE("cf example: all-ones quotients and Fibonacci denominators") {
  const Result r = tfa("cf --value golden --depth 10 --format json");
  REQUIRE(r.code == 0);
  const json j = json::parse(r.out);
  const std::vector<std::string> fib = {"1", "1", "2", "3", "5", "8", "13", "21", "34", "55"};
  CHECK(j["result"]["q"].get<std::vector<std::string>>() == fib);
  for (const auto& a : j["result"]["quotients"]) CHECK(a == "1");
  CHECK(j["allPass"] == true);
}

TEST_CASE("zeros example: cube roots of unity") {
  const Result r = tfa("zeros --c0 1+0i --c1 1+0i --c2 1+0i");
  REQUIRE(r.code == 0);
  const json zeros = json::parse(r.out)["result"]["zeros"];
  REQUIRE(zeros.size() == 2);
  const auto g1 = std::stod(zeros[0]["gamma1"]["value"].get<std::string>());
  const auto g2 = std::stod(zeros[0]["gamma2"]["value"].get<std::string>());
  CHECK(std::min(g1, g2) == doctest::Approx(1.0 / 3));
  CHECK(g1 + g2 == doctest::Approx(1.0));
  for (const auto& z : zeros) CHECK(z["t"]["value"] == "-0.5");
}

TEST_CASE("nk example: non-empty certificate list for the spiky ratio") {
  const Result r =
      tfa("nk --alpha 'cf:[0;1,50,1,50,...]' --beta rat:1/1 --s 1/2 --depth 40 --c 1");
  REQUIRE(r.code == 0);
  const json j = json::parse(r.out);
  CHECK(!j["result"]["certificates"].empty());
}

TEST_CASE("exit codes") {
  CHECK(tfa("--help").code == 0);
  CHECK(tfa("cf --help").code == 0);
  CHECK(tfa("").code == 2);
  CHECK(tfa("frobnicate").code == 2);
  CHECK(tfa("cf --value golden --bogus 1").code == 2);
  CHECK(tfa("cf --value golden --format xml").code == 2);
  CHECK(tfa("cf --value rat:1/0").code == 2);
  // A verdict failure: no index survives a huge quotient filter.
  CHECK(tfa("nk --alpha golden --beta rat:1/1 --depth 30 --c 100").code == 1);
}

TEST_CASE("usage errors print the subcommand help") {
  const Result r = tfa("cf", true);
  CHECK(r.code == 2);
  CHECK(r.out.find("missing --value") != std::string::npos);
  CHECK(r.out.find("--depth") != std::string::npos);
}

TEST_CASE("precision errors suggest a digit count") {
  const Result r = tfa(
      "keyth --alpha 'cf:[0;1,50,1,50,...]' --beta rat:1/1 --c0 1 --c1 1 --c2 1 --depth 40 "
      "--digits 40",
      true);
  CHECK(r.code == 2);
  CHECK(r.out.find("--digits 80") != std::string::npos);
}

TEST_CASE("csv format and --out") {
  const Result csv = tfa("cf --value golden --depth 4 --format csv");
  REQUIRE(csv.code == 0);
  CHECK(csv.out == "k,a,p,q\n0,1,1,1\n1,1,2,1\n2,1,3,2\n3,1,5,3\n");

  CHECK(tfa("gap --value golden --n 6 --ks 0,1 --format csv").code == 2);

  const std::string path = "test_cli_orbit.csv";
  std::remove(path.c_str());
  const Result orbit = tfa(
      "orbit --alpha sqrt:2 --beta rat:1/1 --c0 3 --c1 1 --c2 1 --x rat:1/3 -M 2 --digits 40 "
      "--format csv --out " + path);
  REQUIRE(orbit.code == 0);
  CHECK(orbit.out.empty());
  std::ifstream in(path);
  std::string header;
  std::getline(in, header);
  CHECK(header == "n,logMagnitude,phase");
  int rows = 0;
  for (std::string line; std::getline(in, line);) ++rows;
  CHECK(rows == 5);
}

TEST_CASE("seeded runs are byte-identical") {
  const std::string cmd =
      "outside-sums --value golden --count 50 --delta 1/10 --samples 200 --seed 4";
  const Result a = tfa(cmd);
  const Result b = tfa(cmd);
  REQUIRE(a.code == 0);
  CHECK(a.out == b.out);
  CHECK(tfa(cmd + " --threads 1").out == a.out);
}

TEST_CASE("normalize reads a configuration file") {
  const std::string path = "test_cli_config.csv";
  {
    std::ofstream out(path);
    out << "0,1\n0,0\nsqrt:2,0\n1,0\n";
  }
  const Result r = tfa("normalize --config " + path);
  REQUIRE(r.code == 0);
  const json j = json::parse(r.out);
  CHECK(j["command"] == "normalize");
  CHECK(tfa("normalize --config does-not-exist.csv").code == 2);
}
