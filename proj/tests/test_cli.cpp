#include <cstdio>
#include <fstream>
#include <sstream>

#include "cli.hpp"
#include "csv.hpp"
#include "doctest.h"
#include "json.hpp"

using namespace uplink::cli;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result run_cli(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int code = run(args, out, err);
  return {code, out.str(), err.str()};
}

std::vector<std::string> lines(const std::string& s) {
  std::vector<std::string> v;
  std::istringstream in(s);
  for (std::string line; std::getline(in, line);) v.push_back(line);
  return v;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string temp_path(const std::string& name) { return "cli_test_" + name; }

}  // namespace

TEST_CASE("number formatting") {
  CHECK(format_number(0.1) == "0.1");
  CHECK(format_number(1.0 / 3.0) == "0.333333333");
  CHECK(format_number(-2.5e-12) == "-2.5e-12");
  CHECK(format_number(std::numeric_limits<double>::infinity()) == "inf");
  std::ostringstream os;
  CsvWriter w(os, {"a", "b", "c"});
  w.row({1.5, 2L, std::string("x")});
  CHECK(os.str() == "a,b,c\n1.5,2,x\n");
  CHECK_THROWS(w.row({1.0}));
}

TEST_CASE("coverage command") {
  const auto r = run_cli({"coverage", "--k", "25", "--l", "1", "--epsilon", "0.75", "--alpha", "2.5",
                          "--lambda", "0.24", "--t-min", "-10", "--t-max", "20", "--t-step", "2"});
  REQUIRE(r.code == 0);
  const auto rows = lines(r.out);
  REQUIRE(rows.size() == 17);
  CHECK(rows[0] == "threshold_db,l,k,epsilon,alpha,lambda,p,sigma2,coverage");
  CHECK(rows[1].rfind("-10,1,25,0.75,2.5,0.24,0.04,0,", 0) == 0);
  CHECK(rows[16].rfind("20,1,25,", 0) == 0);

  const auto edge = run_cli({"coverage", "--k", "25", "--l", "25", "--epsilon", "0.75", "--t-step", "10"});
  REQUIRE(edge.code == 0);
  CHECK(lines(edge.out)[0] == rows[0]);
  CHECK(lines(edge.out).size() == 5);
}

TEST_CASE("usage and validation errors") {
  auto r = run_cli({"coverage", "--k", "25"});
  CHECK(r.code == 2);
  CHECK(r.err.find("--l") != std::string::npos);
  CHECK(r.err.find("Usage") != std::string::npos);
  CHECK(run_cli({}).code == 2);
  CHECK(run_cli({"coverage", "--k", "x", "--l", "1"}).code == 2);
  CHECK(run_cli({"coverage", "--bogus"}).code == 2);
  CHECK(run_cli({"simulate", "--k", "4", "--l", "1", "--model", "hex"}).code == 2);
  r = run_cli({"coverage", "--k", "10", "--l", "1", "--alpha", "1.5"});
  CHECK(r.code == 2);
  CHECK(r.err.find("alpha") != std::string::npos);
  CHECK(run_cli({"coverage", "--k", "10", "--l", "11"}).code == 2);
  CHECK(run_cli({"pdf", "--figure", "fig6"}).code == 2);
  CHECK(run_cli({"--help"}).code == 0);
}

TEST_CASE("numerical and simulation configuration exit codes") {
  CHECK(run_cli({"coverage", "--k", "25", "--l", "1", "--epsilon", "0.75", "--max-subdivisions", "1",
                 "--abs-tol", "1e-15", "--rel-tol", "1e-14"})
            .code == 3);
  CHECK(run_cli({"simulate", "--k", "25", "--l", "1", "--window-radius", "1"}).code == 4);
}

TEST_CASE("simulate is deterministic and flags degenerate intervals") {
  const std::vector<std::string> args{"simulate", "--k", "5", "--l", "2", "--realizations", "500",
                                      "--seed", "3", "--t-step", "5"};
  const auto a = run_cli(args);
  const auto b = run_cli(args);
  REQUIRE(a.code == 0);
  CHECK(a.out == b.out);
  CHECK(lines(a.out)[0] == "threshold_db,l,k,model,coverage,ci_low,ci_high,realizations,seed");
  CHECK(lines(a.out).size() == 8);

  const std::string report = temp_path("degenerate.json");
  const auto one = run_cli({"simulate", "--k", "5", "--l", "1", "--realizations", "1", "--report", report});
  REQUIRE(one.code == 0);
  const auto j = nlohmann::json::parse(slurp(report));
  REQUIRE(j["warnings"].size() == 1);
  CHECK(j["warnings"][0].get<std::string>().find("degenerate") != std::string::npos);
  std::remove(report.c_str());
}

TEST_CASE("voronoi diagnostics: one interferer per other cell") {
  const std::string dump = temp_path("sinr.csv");
  const auto r = run_cli({"simulate", "--model", "voronoi", "--k", "25", "--l", "25", "--realizations",
                          "30", "--diagnostics", "--dump-sinr", dump, "--t-step", "10"});
  REQUIRE(r.code == 0);
  const auto header = lines(r.out)[0];
  CHECK(header.find("mean_interferers,mean_bs_count") != std::string::npos);
  const auto rows = lines(slurp(dump));
  REQUIRE(rows.size() == 31);
  CHECK(rows[0] == "realization,k,l,sinr,interferers,bs_count");
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const auto bs = std::stol(rows[i].substr(rows[i].rfind(',') + 1));
    const auto cut = rows[i].substr(0, rows[i].rfind(','));
    const auto interferers = std::stol(cut.substr(cut.rfind(',') + 1));
    CHECK(interferers == bs - 1);
  }
  std::remove(dump.c_str());
}

TEST_CASE("config echo round-trips and flags override the file") {
  const std::string report = temp_path("echo.json");
  const std::string cfg = temp_path("echo.cfg");
  const auto first = run_cli({"simulate", "--k", "6", "--l", "3", "--epsilon", "0.4", "--realizations",
                              "300", "--seed", "12", "--t-step", "6", "--report", report});
  REQUIRE(first.code == 0);
  const auto j = nlohmann::json::parse(slurp(report));
  {
    std::ofstream out(cfg);
    out << j["config"].get<std::string>();
  }
  const auto again = run_cli({"simulate", "--config", cfg});
  REQUIRE(again.code == 0);
  CHECK(again.out == first.out);
  const auto changed = run_cli({"simulate", "--config", cfg, "--seed", "13"});
  REQUIRE(changed.code == 0);
  CHECK(changed.out != first.out);
  CHECK(lines(changed.out)[1].find(",13") != std::string::npos);
  std::remove(report.c_str());
  std::remove(cfg.c_str());
}

TEST_CASE("compare joins analytic and both simulators") {
  const std::string report = temp_path("compare.json");
  const auto r = run_cli({"compare", "--k", "4", "--epsilon", "1", "--realizations", "400", "--t-step",
                          "10", "--report", report});
  REQUIRE(r.code == 0);
  const auto rows = lines(r.out);
  CHECK(rows[0] ==
        "threshold_db,l,k,epsilon,analytic,thinning,thinning_ci_low,thinning_ci_high,voronoi,"
        "voronoi_ci_low,voronoi_ci_high");
  CHECK(rows.size() == 1 + 2 * 4);
  const auto j = nlohmann::json::parse(slurp(report));
  const auto& summary = j["results"]["summary"];
  REQUIRE(summary.size() == 2);
  CHECK(summary[0].contains("max_abs_gap_thinning"));
  CHECK(summary[0].contains("analytic_within_thinning_ci"));
  CHECK(r.err.find("summary k=4 l=1") != std::string::npos);
  std::remove(report.c_str());
}

TEST_CASE("pdf command") {
  auto r = run_cli({"pdf", "--figure", "fig3"});
  REQUIRE(r.code == 0);
  auto rows = lines(r.out);
  CHECK(rows[0] == "r_l,r_k,l,k,pdf");
  CHECK(rows.size() == 1 + 100 * 100);

  r = run_cli({"pdf", "--family", "joint", "--l", "2", "--k", "4", "--lambda", "0.24", "--points", "7"});
  REQUIRE(r.code == 0);
  CHECK(lines(r.out).size() == 50);

  r = run_cli({"pdf", "--family", "kth", "--k", "11", "--l", "11", "--points", "5"});
  REQUIRE(r.code == 0);
  CHECK(lines(r.out)[0] == "r,l,k,pdf");

  r = run_cli({"pdf", "--family", "rx", "--empirical", "--model", "thinning", "--realizations", "200",
               "--points", "8"});
  REQUIRE(r.code == 0);
  rows = lines(r.out);
  CHECK(rows[0] == "r,k,pdf,empirical");
  CHECK(rows.size() == 9);

  r = run_cli({"pdf", "--family", "conditional", "--k", "4", "--l", "2", "--r-l", "1", "--points", "4"});
  REQUIRE(r.code == 0);
  CHECK(lines(r.out)[1].rfind("1,1,2,4,", 0) == 0);

  CHECK(run_cli({"pdf", "--family", "joint", "--k", "4", "--l", "4"}).code == 2);
}

TEST_CASE("figure presets yield their configurations") {
  const auto r = run_cli({"coverage", "--figure", "fig7", "--t-min", "0", "--t-max", "0"});
  CHECK(r.code == 2);  // fig7 belongs to compare
  const auto f9 = run_cli({"pdf", "--figure", "fig9", "--model", "thinning", "--realizations", "100",
                           "--points", "3"});
  REQUIRE(f9.code == 0);
  const auto rows = lines(f9.out);
  REQUIRE(rows.size() == 7);
  CHECK(rows[1].find(",1,11,") != std::string::npos);
  CHECK(rows[4].find(",11,11,") != std::string::npos);
}
