#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <array>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#ifndef NOPT_CLI_PATH
#define NOPT_CLI_PATH "./tools/nopt"
#endif

namespace {

struct RunResult {
  int status;
  std::string out;
};

RunResult run(const std::string& args) {
  std::string cmd = std::string(NOPT_CLI_PATH) + " " + args + " 2>/dev/null";
  std::array<char, 4096> buf;
  std::string out;
  FILE* p = popen(cmd.c_str(), "r");
  REQUIRE(p != nullptr);
  size_t n;
  while ((n = fread(buf.data(), 1, buf.size(), p)) > 0) out.append(buf.data(), n);
  int rc = pclose(p);
  return {WEXITSTATUS(rc), out};
}

nlohmann::json result_of(const RunResult& r) {
  return nlohmann::json::parse(r.out)["result"];
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream f(path);
  f << content;
}

}  // namespace

TEST_CASE("certify subcommand") {
  write_file("/tmp/nopt_s1.json", R"(["0+0*w", "1+0*w", "1+1*w"])");
  auto r = run("certify --field \"Q(i)\" --set /tmp/nopt_s1.json");
  CHECK(r.status == 0);
  auto j = result_of(r);
  CHECK(j["optimal"] == true);
  CHECK(j["via_volume"] == true);
  CHECK(j["routes_agree"] == true);

  write_file("/tmp/nopt_s2.json", R"(["0", "1", "3"])");
  auto bad = run("certify --field Q --set /tmp/nopt_s2.json");
  CHECK(bad.status == 0);
  auto jb = result_of(bad);
  CHECK(jb["optimal"] == false);
  CHECK(jb["witness"]["p"] == "3");
}

TEST_CASE("count subcommand matches the worked example") {
  auto r = run("count --field \"Q(sqrt:2)\" --a \"0+1*w\" --X 2");
  CHECK(r.status == 0);
  CHECK(result_of(r)["count"] == 6);
}

TEST_CASE("energy-min writes a snapshot and a trace") {
  auto r = run(
      "energy-min --field \"Q(i)\" --res 64 --grid-out /tmp/nopt_min.grid "
      "--trace-out /tmp/nopt_min_trace.csv");
  CHECK(r.status == 0);
  auto j = result_of(r);
  CHECK(j["converged"] == true);
  CHECK(std::fabs(j["I"].get<double>() + 2.337877) < 0.05);
  std::ifstream trace("/tmp/nopt_min_trace.csv");
  REQUIRE(trace.good());
  std::string hdr;
  std::getline(trace, hdr);
  CHECK(hdr == "round,step,I,mass,accepted");
  auto e = run("energy --field \"Q(i)\" --grid /tmp/nopt_min.grid --T 1,4,16");
  CHECK(e.status == 0);
  CHECK(result_of(e)["I_T"].size() == 3);
}

TEST_CASE("exit codes: parse errors give 2, caps give 3") {
  CHECK(run("field-info --field \"Q(sqrt:12)\"").status == 2);  // not squarefree
  CHECK(run("count --field \"Q(i)\" --a nonsense --X 2").status == 2);
  CHECK(run("certify --field Q --set /does/not/exist.json").status == 2);
  // a tiny node cap leaves the search incomplete: cap exit code
  CHECK(run("search --field \"Q(i)\" --n 2 --box 4 --node-cap 10").status == 3);
}

TEST_CASE("outputs are byte-identical modulo the timestamp") {
  auto a = run("constants --field \"Q(sqrt:-3)\" --seed 7");
  auto b = run("constants --field \"Q(sqrt:-3)\" --seed 7");
  CHECK(a.status == 0);
  auto strip = [](std::string s) {
    std::istringstream in(s);
    std::string line, out;
    while (std::getline(in, line))
      if (line.find("\"timestamp\"") == std::string::npos) out += line + "\n";
    return out;
  };
  CHECK(strip(a.out) == strip(b.out));
  // metadata carries the convention tag and version
  CHECK(a.out.find("complex_leb=2x_planar") != std::string::npos);
  CHECK(a.out.find("\"version\"") != std::string::npos);
}

TEST_CASE("config file feeds defaults") {
  write_file("/tmp/nopt_cfg.txt", "seed = 99\nthreads = 2\n# comment\nenum_cap = 123456\n");
  auto r = run("field-info --field Q --config /tmp/nopt_cfg.txt");
  CHECK(r.status == 0);
  auto j = nlohmann::json::parse(r.out);
  CHECK(j["meta"]["seed"] == 99);
  CHECK(j["meta"]["config"]["enum_cap"] == "123456");
}

TEST_CASE("search output contains the expected set") {
  auto r = run("search --field \"Q(i)\" --n 2 --box 4");
  CHECK(r.status == 0);
  auto j = result_of(r);
  CHECK(j["complete"] == true);
  bool found = false;
  for (auto& S : j["sets"]) {
    std::vector<std::string> v = S.get<std::vector<std::string>>();
    if (v == std::vector<std::string>{"0+0*w", "1+0*w", "1+1*w"}) found = true;
  }
  CHECK(found);
}

TEST_CASE("discrepancy and quantize round-trip through region files") {
  write_file("/tmp/nopt_disk.json", R"({"kind": "disk", "cx": 0, "cy": 0, "r": 1.0})");
  auto d = run("discrepancy --field \"Q(i)\" --region /tmp/nopt_disk.json --t 1 --v 0,0");
  CHECK(d.status == 0);
  auto jd = result_of(d);
  CHECK(jd["N"] == 5);
  CHECK(std::fabs(jd["D"].get<double>() - (5 - M_PI)) < 1e-9);

  auto q = run("quantize --field \"Q(i)\" --disk 0.1,0.07,0.39894228 --n 100");
  CHECK(q.status == 0);
  long count = result_of(q)["count"].get<long>();
  CHECK(count > 70);
  CHECK(count < 130);
}

TEST_CASE("unit-eq verb") {
  auto r = run("unit-eq --field \"Q(sqrt:5)\" --a1 1 --a2 1 --a3 1 --bound 20");
  CHECK(r.status == 0);
  auto j = result_of(r);
  CHECK(j["nu"] == 6);
  CHECK(j["complete"] == true);

  auto avg = run("unit-eq --field \"Q(sqrt:2)\" --a3 \"0+1*w\" --average-X 2");
  CHECK(avg.status == 0);
  CHECK(result_of(avg)["sum_nu"] == 6);
  CHECK(result_of(avg)["identity_holds"] == true);
}

TEST_CASE("csv output mode") {
  auto r = run("ideal-sum --field \"Q(i)\" --X 100 --r 0 --format csv");
  CHECK(r.status == 0);
  CHECK(r.out.find("X,r,sum,terms,main_term,ratio") != std::string::npos);
  CHECK(r.out.find("100.000000,0,79.000000,79") != std::string::npos);
}
