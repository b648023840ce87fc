#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "helpers.hpp"
#include "timekernel/cli_app.hpp"

using namespace timekernel;
namespace fs = std::filesystem;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

fs::path scratch() {
  static const fs::path dir = [] {
    fs::path d = fs::temp_directory_path() / ("timekernel_cli_" + std::to_string(::getpid()));
    fs::create_directories(d);
    return d;
  }();
  return dir;
}

std::string write_config(const std::string& text) {
  static int counter = 0;
  const fs::path p = scratch() / ("config" + std::to_string(counter++) + ".json");
  std::ofstream(p) << text;
  return p.string();
}

Result run_cli(const std::string& command, const std::string& config, std::vector<std::string> extra = {}) {
  std::vector<std::string> args{command, "--config", write_config(config)};
  args.insert(args.end(), extra.begin(), extra.end());
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

Json parse_out(const Result& r) { return parse_json_text(r.out); }

const char* kShift = R"({"boundary":{"shift":{"N":1,"beta":"1"}}})";

}  // namespace

TEST_CASE("solve-tke on the free particle") {
  const auto r = run_cli("solve-tke", R"({"potential":[]})");
  CHECK(r.code == 0);
  CHECK(r.out == "[[1,0,0,{\"re\":\"1/4\",\"im\":\"0/1\",\"mu\":0,\"hbar\":0}]]\n");
}

TEST_CASE("check on the first shift") {
  const auto r = run_cli("check", kShift);
  CHECK(r.code == 0);
  CHECK(r.out == "{\"conjugate\":true,\"hermitian\":true,\"time_reversal\":false}\n");
}

TEST_CASE("check reports a commutant boundary as not conjugate") {
  const auto r = run_cli("check", R"({"boundary":{"slope":"0","g":[[1,{"re":"1","im":"0","mu":0,"hbar":0}]]}})");
  CHECK(r.code == 0);
  CHECK(parse_out(r)["conjugate"] == false);
}

TEST_CASE("identity-check on the seeded cubic") {
  const auto r = run_cli("identity-check", R"({"potential":{"random_cubic":{"seed":42}},"k_max":5})");
  CHECK(r.code == 0);
  CHECK(r.out == "{\"identity\":\"holds\"}\n");
}

TEST_CASE("weyl on the first shift") {
  const auto r = run_cli("weyl", kShift);
  REQUIRE(r.code == 0);
  const auto s = phase_space_from_json(parse_out(r), "");
  PhaseSpaceSeries want;
  want.add_regular(1, 1, th::re(-1, 1, 1, 0));
  want.add_regular(0, 2, th::re(2, 1, 1, 1));
  CHECK(s == want);
}

TEST_CASE("classical-toa and inverse-h emit phase-space series") {
  auto r = run_cli("classical-toa", R"({"potential":[],"k_max":3})");
  REQUIRE(r.code == 0);
  PhaseSpaceSeries free;
  free.add_regular(1, 1, th::re(-1, 1, 1, 0));
  CHECK(phase_space_from_json(parse_out(r), "") == free);
  r = run_cli("inverse-h", R"({"potential":[],"N":2,"j_max":3})");
  REQUIRE(r.code == 0);
  PhaseSpaceSeries inv;
  inv.add_regular(0, 4, th::re(4, 1, 2, 0));
  CHECK(phase_space_from_json(parse_out(r), "") == inv);
}

TEST_CASE("mtke reports kernel, image, classification and jump") {
  const auto r = run_cli("mtke", R"({"boundary":{"g":[[1,"sgn",{"re":"-1","im":"0","mu":1,"hbar":-1}]]}})");
  REQUIRE(r.code == 0);
  const Json j = parse_out(r);
  CHECK(j["delta_jump_ok"] == true);
  CHECK(j["classification"] == Json::parse(R"({"hermitian":true,"time_reversal":false,"both":false})"));
  PhaseSpaceSeries want;
  want.add_regular(1, 1, th::re(-1, 1, 1, 0));
  want.add_regular(0, 2, th::re(2, 1, 1, 1));
  CHECK(phase_space_from_json(j["weyl"], "weyl") == want);
  const auto k = dist_kernel_from_json(j["kernel"], "kernel");
  CHECK(k.g_part.size() == 1);
}

TEST_CASE("mtke rejects anharmonic potentials and bad weights") {
  CHECK(run_cli("mtke", R"({"potential":[[4,{"re":"1","im":"0","mu":0,"hbar":0}]]})").code == 2);
  CHECK(run_cli("mtke", R"({"boundary":{"alpha":{"re":"1","im":"0","mu":0,"hbar":0}}})").code == 2);
}

TEST_CASE("c-table with a shift boundary adds the leading table") {
  const auto r = run_cli("c-table",
                         R"({"potential":{"random_cubic":{"seed":7}},"boundary":{"shift":{"N":2,"beta":"1/3"}},)"
                         R"("j_max":4,"m_max":12})");
  REQUIRE(r.code == 0);
  const Json j = parse_out(r);
  CHECK(j["ww_check"] == true);
  CHECK(j.contains("leading_shift"));
  CHECK(j["c_table"].size() > 0);
  CHECK(run_cli("c-table", R"({"boundary":{"shift":{"N":1,"beta":"1"}},"potential":{"random_cubic":{"seed":7}},"j_max":4,"m_max":11})").code == 2);
}

TEST_CASE("plot-data examples") {
  const char* one_point = R"("sample":{"q_min":"1","q_max":"1","nq":1,"p_min":"2","p_max":"2","np":1})";
  auto r = run_cli("plot-data", std::string(R"({"potential":[],)") + one_point + "}", {"--format", "csv"});
  REQUIRE(r.code == 0);
  CHECK(r.out == "q,p,re,im\n1,2,-0.5,0\n");
  r = run_cli("plot-data", R"({"boundary":{"shift":{"N":1,"beta":"1"}},"sample":{"q_min":"1","q_max":"1","nq":1,"p_min":"1","p_max":"1","np":1}})",
              {"--format", "csv"});
  REQUIRE(r.code == 0);
  CHECK(r.out == "q,p,re,im\n1,1,1,0\n");
  r = run_cli("plot-data", R"({"series":[]})", {"--format", "csv"});
  CHECK(r.code == 0);
  CHECK(r.out == "q,p,re,im\n");
  r = run_cli("plot-data", R"({"sample":{"p_min":"-1","p_max":"1"}})");
  CHECK(r.code == 2);
  r = run_cli("plot-data", R"({"sample":{"p_min":"1/20","p_max":"1"}})");
  CHECK(r.code == 2);
  r = run_cli("plot-data", R"({"sample":{"p_min":"-2","p_max":"-1/5"}})");
  CHECK(r.code == 0);
}

TEST_CASE("malformed JSON names the line") {
  const auto r = run_cli("solve-tke", "{\n  \"order\": 4,\n  \"mu\": \n}");
  CHECK(r.code == 2);
  CHECK(r.err.find("line 4") != std::string::npos);
}

TEST_CASE("unknown and invalid fields name their path") {
  auto r = run_cli("solve-tke", R"({"ordr":4})");
  CHECK(r.code == 2);
  CHECK(r.err.find("ordr") != std::string::npos);
  r = run_cli("solve-tke", R"({"boundary":{"slope":"1/4","bogus":1}})");
  CHECK(r.code == 2);
  CHECK(r.err.find("boundary.bogus") != std::string::npos);
  r = run_cli("solve-tke", R"({"boundary":{"slope":"1/3"}})");
  CHECK(r.code == 2);
  r = run_cli("solve-tke", R"({"mu":"0"})");
  CHECK(r.code == 2);
  CHECK(r.err.find("mu") != std::string::npos);
  r = run_cli("picard", R"({"tol":-1})");
  CHECK(r.code == 2);
  r = run_cli("weyl", R"({"command":"check"})");
  CHECK(r.code == 2);
  r = run_cli("nonsense", "{}");
  CHECK(r.code == 2);
  r = run_cli("solve-tke", R"({"series":[[1,-1,0,{"re":"1","im":"0","mu":0,"hbar":0}]]})");
  CHECK(r.code == 2);
}

TEST_CASE("missing config or bad options exit 2") {
  std::ostringstream out, err;
  CHECK(cli::run({"solve-tke"}, out, err) == 2);
  CHECK(cli::run({"solve-tke", "--config", (scratch() / "absent.json").string()}, out, err) == 2);
  CHECK(run_cli("solve-tke", "{}", {"--format", "xml"}).code == 2);
  CHECK(run_cli("solve-tke", "{}", {"--order", "0"}).code == 2);
  CHECK(run_cli("picard", "{}", {"--grid", "21by21"}).code == 2);
  CHECK(run_cli("picard", "{}", {"--grid", "20x21"}).code == 2);
  CHECK(run_cli("picard", "{}", {"--tol", "0"}).code == 2);
}

TEST_CASE("picard exits 3 when it runs out of iterations") {
  const auto r = run_cli("picard", R"({"potential":{"harmonic":{"omega":"3"}},"max_iter":1,"grid":[21,21]})");
  CHECK(r.code == 3);
  CHECK(r.err.find("final delta") != std::string::npos);
}

TEST_CASE("picard summary and overrides") {
  auto r = run_cli("picard", R"({"potential":{"harmonic":{"omega":"1"}},"reference":"closed_form"})",
                   {"--grid", "41x21", "--tol", "1e-10"});
  REQUIRE(r.code == 0);
  Json j = parse_out(r);
  CHECK(j["nu"] == 41);
  CHECK(j["nv"] == 21);
  CHECK(j["final_delta"].get<double>() <= 1e-10);
  CHECK(j["max_abs_error"].get<double>() < 1e-5);
  r = run_cli("picard", R"({"potential":{"harmonic":{"omega":"1"}},"boundary":{"shift":{"N":1,"beta":"1"}},"reference":"closed_form"})");
  CHECK(r.code == 2);
  r = run_cli("picard", R"({"potential":[[4,{"re":"1/10","im":"0","mu":0,"hbar":0}]],"reference":"series","order":24})");
  REQUIRE(r.code == 0);
  CHECK(parse_out(r)["max_abs_error"].get<double>() < 1e-8);
  r = run_cli("picard", R"({"boundary":{"g":[[1,"sgn",{"re":"1","im":"0","mu":0,"hbar":0}]]},"grid":[11,11]})",
              {"--format", "csv"});
  REQUIRE(r.code == 0);
  CHECK(r.out.rfind("u,v,re,im\n", 0) == 0);
}

TEST_CASE("--order overrides the config") {
  const auto r = run_cli("solve-tke", R"({"potential":{"harmonic":{"omega":"1"}},"order":20})", {"--order", "6"});
  REQUIRE(r.code == 0);
  const auto T = series_from_json(parse_out(r), "");
  CHECK(T.size() == 2);
  CHECK_FALSE(T.coefficient(3, 2).is_zero());
  CHECK_FALSE(T.coefficient(1, 0).is_zero());
}

TEST_CASE("--out writes the result to a file") {
  const std::string path = (scratch() / "result.json").string();
  const auto r = run_cli("solve-tke", "{}", {"--out", path});
  CHECK(r.code == 0);
  CHECK(r.out.empty());
  std::ifstream in(path);
  std::stringstream text;
  text << in.rdbuf();
  CHECK(text.str() == "[[1,0,0,{\"re\":\"1/4\",\"im\":\"0/1\",\"mu\":0,\"hbar\":0}]]\n");
}

TEST_CASE("TIMEKERNEL_THREADS must be a positive integer") {
  ::setenv("TIMEKERNEL_THREADS", "two", 1);
  CHECK(run_cli("solve-tke", "{}").code == 2);
  ::setenv("TIMEKERNEL_THREADS", "0", 1);
  CHECK(run_cli("solve-tke", "{}").code == 2);
  ::setenv("TIMEKERNEL_THREADS", "2", 1);
  CHECK(run_cli("solve-tke", "{}").code == 0);
  ::unsetenv("TIMEKERNEL_THREADS");
}

TEST_CASE("CSV headers") {
  CHECK(run_cli("solve-tke", "{}", {"--format", "csv"}).out == "m,n,hbar,mu,re,im\n1,0,0,0,1/4,0/1\n");
  CHECK(run_cli("weyl", "{}", {"--format", "csv"}).out.rfind("m,j_or_d,kind,hbar,mu,re,im\n", 0) == 0);
  CHECK(run_cli("c-table", R"({"j_max":2,"m_max":4})", {"--format", "csv"}).out.rfind("m,j,re,im,mu,hbar\n", 0) == 0);
  CHECK(run_cli("check", "{}", {"--format", "csv"}).out.rfind("check,value\n", 0) == 0);
  CHECK(run_cli("mtke", R"({"boundary":{"alpha":{"re":"1","im":"0","mu":0,"hbar":0},"beta":{"re":"0","im":"0","mu":0,"hbar":0}}})",
                {"--format", "csv"})
            .out.find("delta_one") != std::string::npos);
}

TEST_CASE("configs round-trip byte for byte") {
  const std::vector<std::pair<std::string, std::string>> configs{
      {"solve-tke", "{}"},
      {"check", kShift},
      {"weyl", R"({"potential":[[1,{"re":"-2/3","im":"1/2","mu":0,"hbar":0}],[3,{"re":"5","im":"0","mu":1,"hbar":0}]],"order":9})"},
      {"mtke", R"({"boundary":{"alpha":{"re":"1/2","im":"1/3","mu":0,"hbar":0},"beta":{"re":"1/2","im":"-1/3","mu":0,"hbar":0},"f":[[2,"hplus",{"re":"1","im":"0","mu":0,"hbar":0}]],"stationary_particle":false}})"},
      {"picard", R"({"potential":{"harmonic":{"omega":"3/2"}},"tol":1.5e-11,"grid":[41,21],"domain":{"u":["-2","1"],"v":["-1/2","1/2"]},"reference":"closed_form"})"},
      {"plot-data", R"({"series":[[1,0,0,{"re":"1/4","im":"0","mu":0,"hbar":0}]],"sample":{"q_min":"-3/2","nq":7},"format":"csv"})"},
      {"c-table", R"({"potential":{"random_cubic":{"seed":18446744073709551615}},"boundary":{"shift":{"N":3,"beta":"-7/2"}}})"},
      {"picard", R"({"boundary":{"g":[[2,"sgn",{"re":"0","im":"1","mu":0,"hbar":0}]]}})"},
      {"identity-check", R"({"boundary":{"slope":"0","c":{"re":"1","im":"0","mu":0,"hbar":0},"g":[[3,{"re":"1","im":"2","mu":-1,"hbar":1}]]}})"}};
  for (const auto& [cmd, text] : configs) {
    const auto first = cli::config_to_json(cli::config_from_json(parse_json_text(text), cmd)).dump();
    const auto second = cli::config_to_json(cli::config_from_json(parse_json_text(first), cmd)).dump();
    CHECK(first == second);
    const auto third = cli::config_to_json(cli::config_from_json(parse_json_text(first), "")).dump();
    CHECK(first == third);
  }
}

TEST_CASE("results round-trip byte for byte") {
  auto r = run_cli("solve-tke", R"({"potential":{"random_cubic":{"seed":3}},"boundary":{"shift":{"N":2,"beta":"2/7"}},"order":12})");
  CHECK(series_to_json(series_from_json(parse_out(r), "")).dump() + "\n" == r.out);
  r = run_cli("weyl", R"({"potential":{"random_cubic":{"seed":3}},"order":12})");
  CHECK(phase_space_to_json(phase_space_from_json(parse_out(r), "")).dump() + "\n" == r.out);
  r = run_cli("mtke", R"({"potential":{"harmonic":{"omega":"2"}},"j_max":3,"boundary":{"f":[[1,"sgn",{"re":"1","im":"0","mu":0,"hbar":0}]]}})");
  const Json j = parse_out(r);
  CHECK(dist_kernel_to_json(dist_kernel_from_json(j["kernel"], "")).dump() == j["kernel"].dump());
  CHECK(phase_space_to_json(phase_space_from_json(j["weyl"], "")).dump() == j["weyl"].dump());
  for (const auto& cmd : cli::subcommands()) {
    std::string config = "{}";
    if (cmd == "picard") config = R"({"grid":[21,21]})";
    const auto out = run_cli(cmd, config);
    REQUIRE(out.code == 0);
    CHECK(parse_out(out).dump() + "\n" == out.out);
  }
}
