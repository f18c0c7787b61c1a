#include <doctest.h>

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>

#include <json.hpp>

#ifndef HYPERLEV_CLI_PATH
#error "HYPERLEV_CLI_PATH must point at the command-line binary"
#endif

namespace {

struct RunResult {
  int status = -1;
  std::string out;
  std::string err;
};

RunResult run(const std::string& args) {
  const auto err_path = std::filesystem::temp_directory_path() / "hyperlev_cli_stderr.txt";
  const std::string cmd = std::string(HYPERLEV_CLI_PATH) + " " + args + " 2>" + err_path.string();
  RunResult r;
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  std::array<char, 4096> buf{};
  std::size_t n;
  while ((n = fread(buf.data(), 1, buf.size(), pipe)) > 0) r.out.append(buf.data(), n);
  const int st = pclose(pipe);
  r.status = WIFEXITED(st) ? WEXITSTATUS(st) : -1;
  std::ifstream in(err_path);
  std::stringstream ss;
  ss << in.rdbuf();
  r.err = ss.str();
  std::filesystem::remove(err_path);
  return r;
}

std::vector<std::string> lines(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  std::string l;
  while (std::getline(ss, l)) out.push_back(l);
  return out;
}

}  // namespace

TEST_SUITE("cli") {
  TEST_CASE("price output is deterministic") {
    const std::string args = "price --set 1 --S0 95 --K 90 --T 0.1,0.5 --precision full";
    const auto a = run(args), b = run(args);
    CHECK(a.status == 0);
    CHECK(a.out == b.out);
    CHECK(lines(a.out).size() == 3);
  }

  TEST_CASE("empty maturity list is a configuration error") {
    const auto out = std::filesystem::temp_directory_path() / "hyperlev_cli_empty.csv";
    std::filesystem::remove(out);
    const auto r = run("price --set 1 --S0 95 --K 90 --T \"\" -o " + out.string());
    CHECK(r.status == 2);
    CHECK(!std::filesystem::exists(out));
    const auto rec = nlohmann::json::parse(lines(r.err).front());
    CHECK(rec["error"] == "ConfigError");
    CHECK(rec.contains("message"));
  }

  TEST_CASE("reproduce a price table") {
    const auto r = run("--reproduce table2");
    REQUIRE(r.status == 0);
    const auto ls = lines(r.out);
    CHECK(ls.size() == 9);
    CHECK(ls.front().rfind("truncation,T=0.01", 0) == 0);
    CHECK(ls[6].rfind("(15,15,15,15,15,30,30,60),5.099745", 0) == 0);
  }

  TEST_CASE("json output parses") {
    const auto r = run("--format json price --set 2 --S0 300 --K 300 --T 0.1");
    REQUIRE(r.status == 0);
    const auto arr = nlohmann::json::parse(r.out);
    REQUIRE(arr.size() == 1);
    CHECK(std::abs(arr[0]["price"].get<double>() - 5.25121) < 1e-5);
  }

  TEST_CASE("roots columns") {
    const auto r = run("roots --set 1 --u 80:81");
    REQUIRE(r.status == 0);
    const auto ls = lines(r.out);
    CHECK(ls.front() == "u,side,index,re,im,residual,deriv_error,tracked_distance");
    CHECK(ls.size() > 2);
  }

  TEST_CASE("bad option values exit nonzero") {
    CHECK(run("price --set 3 --S0 1 --K 1 --T 0.1").status != 0);
    CHECK(run("price --set 1 --S0 -1 --K 1 --T 0.1").status != 0);
  }
}
