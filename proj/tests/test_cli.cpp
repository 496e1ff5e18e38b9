#include <sys/wait.h>

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "doctest.h"
#include "json.hpp"

using nlohmann::json;

namespace {

struct Run {
  int code;
  std::string out;
};

Run run(const std::string& args) {
  const std::string cmd = std::string(ROADQ_CLI_PATH) + " " + args + " 2>/dev/null";
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  std::string out;
  std::array<char, 4096> buf{};
  std::size_t n = 0;
  while ((n = std::fread(buf.data(), 1, buf.size(), pipe)) > 0) out.append(buf.data(), n);
  const int status = pclose(pipe);
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, out};
}

std::string cfg(const char* name) { return std::string(ROADQ_CONFIG_DIR) + "/" + name; }

std::vector<std::string> lines(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);) out.push_back(line);
  return out;
}

}  // namespace

TEST_SUITE("cli") {
  TEST_CASE("solve-section emits measures as JSON") {
    const auto r = run("solve-section --config " + cfg("reference_pair.json") + " --lambda 0.5");
    REQUIRE(r.code == 0);
    const auto j = json::parse(r.out);
    for (const char* key : {"blocking", "throughput", "throughput_departure", "expected_count", "travel_time",
                            "distribution", "lambda", "convention", "model"}) {
      CHECK(j.contains(key));
    }
    CHECK(j["distribution"].size() == 19);
    CHECK(j["travel_time"].get<double>() == doctest::Approx(3.59).epsilon(0.01));
  }

  TEST_CASE("solve-tandem with root scan") {
    const auto r = run("solve-tandem --config " + cfg("reference_pair.json") + " --lambda 1.0 --scan-roots");
    REQUIRE(r.code == 0);
    const auto j = json::parse(r.out);
    CHECK(j["theta"].get<double>() == doctest::Approx(0.45836934818846903).epsilon(1e-8));
    CHECK(j["roots"].size() >= 1);
    CHECK(j["tv_vs_exact_2d"].get<double>() == doctest::Approx(0.1902798443339318).epsilon(1e-6));
  }

  TEST_CASE("sweep CSV layouts") {
    const auto r = run("sweep --config " + cfg("reference_pair.json") + " --steps 5");
    REQUIRE(r.code == 0);
    auto ls = lines(r.out);
    REQUIRE(ls.size() == 6);
    CHECK(ls[0] == "lambda,blocking,throughput,expected_count,travel_time");
    CHECK(ls[1].rfind("0.1,", 0) == 0);
    CHECK(ls[5].rfind("2,", 0) == 0);

    const auto t = run("sweep --config " + cfg("reference_pair.json") + " --tandem --lambda-from 0.2 --lambda-to 1 --steps 3");
    REQUIRE(t.code == 0);
    ls = lines(t.out);
    REQUIRE(ls.size() == 4);
    CHECK(ls[0] == "lambda,theta,blocking,expected_count,travel_time,tv_vs_exact_2d");
  }

  TEST_CASE("distributions CSV") {
    const auto r = run("distributions --config " + cfg("reference_pair.json") +
                       " --model linear --kind speed --mode paper-grid --lambda 0.8");
    REQUIRE(r.code == 0);
    const auto ls = lines(r.out);
    CHECK(ls[0] == "value,probability");
    CHECK(ls.size() == 29);
    double total = 0.0;
    for (std::size_t i = 1; i < ls.size(); ++i) total += std::stod(ls[i].substr(ls[i].find(',') + 1));
    CHECK(total == doctest::Approx(1.0).epsilon(1e-9));
  }

  TEST_CASE("simulate and compare report the generator") {
    const auto s = run("simulate --config " + cfg("reference_section1.json") + " --lambda 0.5 --events 20000 --seed 3");
    REQUIRE(s.code == 0);
    const auto j = json::parse(s.out);
    CHECK(j["seed"] == 3);
    CHECK(j["events"] == 20000);
    CHECK(j["rng"] == "mt19937_64/u53-inverse-cdf");
    const auto again = run("simulate --config " + cfg("reference_section1.json") + " --lambda 0.5 --events 20000 --seed 3");
    CHECK(again.out == s.out);

    const auto c = run("compare --config " + cfg("reference_section1.json") + " --lambda 0.5 --events 20000");
    REQUIRE(c.code == 0);
    const auto k = json::parse(c.out);
    CHECK(k["tv_analytical_exact"].get<double>() < 1e-12);
  }

  TEST_CASE("fit-exponential") {
    const auto r = run("fit-exponential --v-f 60 --fit-a 20 --fit-va 48 --fit-b 140 --fit-vb 20");
    REQUIRE(r.code == 0);
    const auto j = json::parse(r.out);
    CHECK(j["beta"].get<double>() == doctest::Approx(123.60100691476767).epsilon(1e-10));
    CHECK(j["gamma"].get<double>() == doctest::Approx(0.8009848325532724).epsilon(1e-10));
  }

  TEST_CASE("figure data") {
    const auto r = run("figure --config " + cfg("reference_pair.json") + " --figure fig4 --steps 3");
    REQUIRE(r.code == 0);
    const auto ls = lines(r.out);
    CHECK(ls[0] == "lambda,n,ours,jain_smith");
    CHECK(ls.size() == 1 + 3 * 19);
    const auto f6 = run("figure --config " + cfg("reference_pair.json") + " --figure fig6 --steps 4");
    REQUIRE(f6.code == 0);
    CHECK(lines(f6.out)[0] == "lambda,ours,jain_smith");
    CHECK(lines(f6.out).size() == 5);
  }

  TEST_CASE("output file") {
    const auto path = std::filesystem::temp_directory_path() / "roadq_cli_test_out.json";
    const auto r = run("solve-section --config " + cfg("reference_pair.json") + " --lambda 0.5 --output " + path.string());
    REQUIRE(r.code == 0);
    CHECK(r.out.empty());
    std::ifstream in(path);
    CHECK(json::parse(in).contains("blocking"));
    std::filesystem::remove(path);
  }

  TEST_CASE("exit codes") {
    CHECK(run("").code == 2);
    CHECK(run("solve-section --config " + cfg("reference_pair.json") + " --lambda -1").code == 2);
    CHECK(run("solve-section --config /nonexistent/x.json --lambda 1").code == 4);
    CHECK(run("solve-section --config " + cfg("reference_pair.json") + " --lambda 0.5 --convention exact").code == 3);
    CHECK(run("solve-tandem --config " + cfg("reference_pair.json") + " --lambda 1 --tol 1e-15 --max-iter 2").code == 3);
    CHECK(run("solve-tandem --config " + cfg("reference_section1.json") + " --lambda 1").code == 2);
    CHECK(run("solve-section --config " + cfg("reference_pair.json") + " --lambda 0.5 --output /nonexistent/dir/o.json").code ==
          4);
    CHECK(run("fit-exponential --v-f 60 --fit-a 0.5 --fit-va 48 --fit-b 140 --fit-vb 20").code == 2);
  }

  TEST_CASE("config from stdin and a bad document") {
    const auto r = run("solve-section --config - --lambda 0.3 < " + cfg("reference_section1.json"));
    CHECK(r.code == 0);
    const auto bad = std::filesystem::temp_directory_path() / "roadq_cli_bad.json";
    std::ofstream(bad) << R"({"L": 100, "v_f": 28, "w": 14, "rho_j": 0.18, "oops": 1})";
    CHECK(run("solve-section --config " + bad.string() + " --lambda 0.3").code == 2);
    std::filesystem::remove(bad);
  }
}
