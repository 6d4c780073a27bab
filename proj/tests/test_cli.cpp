#include <doctest.h>

#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#ifndef BUSYQ_CLI_PATH
#error "BUSYQ_CLI_PATH must point at the CLI binary"
#endif

namespace {

struct CmdResult {
  int exit_code = -1;
  std::string output;  // stdout and stderr interleaved
};

CmdResult run_cli(const std::string& args) {
  const std::string cmd = std::string(BUSYQ_CLI_PATH) + " " + args + " 2>&1";
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  CmdResult res;
  char buf[4096];
  size_t got;
  while ((got = fread(buf, 1, sizeof buf, pipe)) > 0) res.output.append(buf, got);
  const int status = pclose(pipe);
  res.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return res;
}

std::vector<std::string> lines_of(const std::string& text) {
  std::vector<std::string> lines;
  std::stringstream ss(text);
  std::string line;
  while (std::getline(ss, line))
    if (!line.empty()) lines.push_back(line);
  return lines;
}

}  // namespace

TEST_CASE("dist csv emits the exact distribution") {
  auto res = run_cli("dist --n 3 --lambda 1 --mu 1 --method recursion --format csv");
  REQUIRE(res.exit_code == 0);
  auto lines = lines_of(res.output);
  REQUIRE(lines.size() == 4);
  CHECK(lines[0] == "i,exact,decimal");
  CHECK(lines[1].rfind("1,1/3,", 0) == 0);
  CHECK(lines[2].rfind("2,1/6,", 0) == 0);
  CHECK(lines[3].rfind("3,1/2,", 0) == 0);
}

TEST_CASE("dist json is a valid document with the pinned fields") {
  auto res = run_cli("dist --n 4 --lambda 1/2 --mu 3 --method explicit --format json");
  REQUIRE(res.exit_code == 0);
  auto doc = nlohmann::json::parse(res.output);
  CHECK(doc.at("n") == 4);
  CHECK(doc.at("method") == "explicit");
  CHECK(doc.at("sum_check") == "1/1");
  REQUIRE(doc.at("s").size() == 4);
  CHECK(doc.at("s")[0].at("i") == 1);
  CHECK(doc.at("s")[0].at("exact").is_string());
  CHECK(doc.at("s")[0].at("decimal").is_string());
}

TEST_CASE("dist --method all reports every route, point mass at N = 1") {
  auto res = run_cli("dist --n 1 --lambda 1 --mu 1 --method all --format json");
  REQUIRE(res.exit_code == 0);
  auto doc = nlohmann::json::parse(res.output);
  REQUIRE(doc.at("methods").size() == 5);
  for (const auto& block : doc.at("methods")) {
    REQUIRE(block.at("s").size() == 1);
    CHECK(block.at("s")[0].at("exact") == "1/1");
    CHECK(block.at("sum_check") == "1/1");
  }
}

TEST_CASE("all methods agree through the CLI") {
  auto res = run_cli("dist --n 7 --lambda 2 --mu 3 --method all --format json");
  REQUIRE(res.exit_code == 0);
  auto doc = nlohmann::json::parse(res.output);
  auto reference = doc.at("methods")[0].at("s");
  for (const auto& block : doc.at("methods"))
    for (size_t i = 0; i < reference.size(); ++i)
      CHECK(block.at("s")[i].at("exact") == reference[i].at("exact"));
}

TEST_CASE("float mode emits decimals only") {
  auto res = run_cli("dist --n 5 --lambda 1 --mu 1 --method explicit --mode float --format json");
  REQUIRE(res.exit_code == 0);
  auto doc = nlohmann::json::parse(res.output);
  CHECK(doc.at("mode") == "float");
  CHECK_FALSE(doc.at("s")[0].contains("exact"));
  CHECK(doc.at("s")[0].at("decimal").is_string());
}

TEST_CASE("invalid model input exits 2 with a named violation") {
  auto res = run_cli("dist --lambda-seq 3,3,0 --mu 1");
  CHECK(res.exit_code == 2);
  CHECK(res.output.find("strictly decreasing") != std::string::npos);

  CHECK(run_cli("dist").exit_code == 2);
  CHECK(run_cli("dist --n 3 --lambda 1 --mu 1 --lambda-seq 1,0").exit_code == 2);
  CHECK(run_cli("dist --n 3 --lambda 1 --mu 0").exit_code == 2);
  CHECK(run_cli("dist --n 3 --lambda 1 --mu 1 --method nonsense").exit_code == 2);
  CHECK(run_cli("nonsense").exit_code == 2);
}

TEST_CASE("oracle cap exits 3") {
  auto res = run_cli("dist --n 20 --lambda 1 --mu 1 --method oracle");
  CHECK(res.exit_code == 3);
}

TEST_CASE("validate passes on a healthy model and fails when corrupted") {
  auto ok = run_cli("validate --n 8 --lambda 1 --mu 1");
  CHECK(ok.exit_code == 0);
  CHECK(ok.output.find("OK") != std::string::npos);

  auto bad = run_cli("validate --n 8 --lambda 1 --mu 1 --corrupt explicit");
  CHECK(bad.exit_code == 1);
  CHECK(bad.output.find("MISMATCH at entry 1") != std::string::npos);
  CHECK(bad.output.find("explicit") != std::string::npos);
}

TEST_CASE("validate handles explicit sequences") {
  CHECK(run_cli("validate --lambda-seq 5/2,1,1/3,0 --mu 2").exit_code == 0);
}

TEST_CASE("paths subcommand enumerates and weighs") {
  auto res = run_cli("paths --order 4 --feasible-only --format csv");
  REQUIRE(res.exit_code == 0);
  auto lines = lines_of(res.output);
  CHECK(lines.size() == 9);  // header + 2^3 rows
  CHECK(lines[0] == "u,feasible,weight,first_return");

  auto weighted = run_cli("paths --order 2 --n 2 --lambda 1 --mu 1 --format csv");
  REQUIRE(weighted.exit_code == 0);
  auto wl = lines_of(weighted.output);
  REQUIRE(wl.size() == 3);
  CHECK(wl[1] == "\"0,2\",1,1/2,2");
  CHECK(wl[2] == "\"1,1\",1,1/2,1");

  auto js = run_cli("paths --order 4 --format json");
  REQUIRE(js.exit_code == 0);
  auto doc = nlohmann::json::parse(js.output);
  CHECK(doc.at("count") == 14);

  CHECK(run_cli("paths --order 3 --n 2 --lambda 1 --mu 1").exit_code == 2);
}

TEST_CASE("inverse subcommand prints the exact inverse diagonal") {
  auto res = run_cli("inverse --n 3 --lambda 1 --mu 1 --format csv");
  REQUIRE(res.exit_code == 0);
  auto lines = lines_of(res.output);
  CHECK(lines[0] == "matrix,i,j,value");
  bool d1 = false, d2 = false, d3 = false;
  for (const auto& line : lines) {
    if (line == "Ainv,1,1,1/3") d1 = true;
    if (line == "Ainv,2,2,1/4") d2 = true;
    if (line == "Ainv,3,3,1/1") d3 = true;
  }
  CHECK(d1);
  CHECK(d2);
  CHECK(d3);

  auto js = run_cli("inverse --n 3 --lambda 1 --mu 1 --format json");
  auto doc = nlohmann::json::parse(js.output);
  CHECK(doc.at("A")[1][0] == "4/1");
  CHECK(doc.at("A_inv")[1][0] == "-1/3");
}

TEST_CASE("simulate is byte-identical across runs and worker counts") {
  const std::string args = "simulate --n 3 --lambda 1 --mu 1 --reps 1000 --seed 7";
  auto a = run_cli(args);
  auto b = run_cli(args);
  REQUIRE(a.exit_code == 0);
  CHECK(a.output == b.output);
  auto c = run_cli(args + " --workers 1");
  auto d = run_cli(args + " --workers 2");
  CHECK(c.output == d.output);

  auto joint = run_cli("simulate --n 4 --lambda 1 --mu 1 --reps 2000 --seed 3 --joint --format json");
  REQUIRE(joint.exit_code == 0);
  auto doc = nlohmann::json::parse(joint.output);
  CHECK(doc.at("algorithm") == "splitmix64");
  CHECK(doc.at("joint").size() > 0);
  std::uint64_t total = 0;
  for (const auto& e : doc.at("joint")) total += e.at("count").get<std::uint64_t>();
  CHECK(total == 2000);
}

TEST_CASE("config file input matches inline flags") {
  const char* path = "/tmp/busyq_test_config.json";
  {
    std::ofstream f(path);
    f << R"({"n": 3, "lambda": "1", "mu": "1"})";
  }
  auto from_config = run_cli(std::string("dist --config ") + path + " --format csv");
  auto from_flags = run_cli("dist --n 3 --lambda 1 --mu 1 --format csv");
  REQUIRE(from_config.exit_code == 0);
  CHECK(from_config.output == from_flags.output);
  std::remove(path);

  const char* seq_path = "/tmp/busyq_test_config_seq.json";
  {
    std::ofstream f(seq_path);
    f << R"({"lambda_seq": ["2", "1", "0"], "mu": 1})";
  }
  auto seq = run_cli(std::string("dist --config ") + seq_path + " --format csv");
  CHECK(seq.output == from_flags.output);
  std::remove(seq_path);

  CHECK(run_cli("dist --config /tmp/does_not_exist_busyq.json").exit_code == 2);
}

TEST_CASE("output lands in --out file") {
  const char* path = "/tmp/busyq_test_out.csv";
  auto res = run_cli(std::string("dist --n 2 --lambda 1 --mu 1 --format csv --out ") + path);
  REQUIRE(res.exit_code == 0);
  std::ifstream f(path);
  std::stringstream buf;
  buf << f.rdbuf();
  CHECK(buf.str().find("1,1/2,") != std::string::npos);
  std::remove(path);
}
