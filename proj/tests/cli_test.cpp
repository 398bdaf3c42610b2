#include <gtest/gtest.h>

#include <array>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>

#include <json.hpp>

namespace {

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

struct Run {
  int code = -1;
  std::string out;
};

// stdout only; stderr goes to a side file
Run run(std::string const& args, std::string* err = nullptr) {
  fs::path ef = fs::temp_directory_path() / "picardjump_cli_test.err";
  std::string cmd = std::string("PICARDJUMP_CORPUS='") + PICARDJUMP_CORPUS_DIR + "' '" +
                    PICARDJUMP_CLI + "' " + args + " 2>'" + ef.string() + "'";
  Run r;
  FILE* p = popen(cmd.c_str(), "r");
  if (!p) return r;
  std::array<char, 4096> buf;
  std::size_t n;
  while ((n = fread(buf.data(), 1, buf.size(), p)) > 0) r.out.append(buf.data(), n);
  int st = pclose(p);
  r.code = WIFEXITED(st) ? WEXITSTATUS(st) : -1;
  if (err) {
    std::ifstream in(ef);
    err->assign(std::istreambuf_iterator<char>(in), {});
  }
  return r;
}

fs::path write_temp(std::string const& name, std::string const& body) {
  fs::path p = fs::temp_directory_path() / name;
  std::ofstream(p) << body;
  return p;
}

}  // namespace

TEST(Cli, JumpThenVerifyRoundTrip) {
  auto j = run("jump --family kummer_i --center 0.3+1.4i --radius 0.05");
  ASSERT_EQ(j.code, 0) << j.out;
  json c = json::parse(j.out);
  EXPECT_EQ(c["schema"], "1");
  EXPECT_EQ(c["winding"], 1);
  EXPECT_LT(c["residual"].get<double>(), 1e-9);
  auto p = write_temp("picardjump_cert.json", j.out);
  auto v = run("verify '" + p.string() + "' --family kummer_i");
  ASSERT_EQ(v.code, 0) << v.out;
  EXPECT_TRUE(json::parse(v.out)["ok"].get<bool>());
}

TEST(Cli, TamperedCertificateRejected) {
  auto j = run("jump --family kummer_i --center 0.3+1.4i --radius 0.05");
  ASSERT_EQ(j.code, 0);
  json c = json::parse(j.out);
  c["v"][0] = c["v"][0].get<long>() + 1;
  auto p = write_temp("picardjump_bad_cert.json", c.dump());
  auto v = run("verify '" + p.string() + "' --family kummer_i");
  EXPECT_EQ(v.code, 3);
  EXPECT_FALSE(json::parse(v.out)["ok"].get<bool>());
}

TEST(Cli, ClassifyCsv) {
  auto r = run("--format csv surface classify quintic_rational");
  ASSERT_EQ(r.code, 0);
  EXPECT_EQ(r.out, "place,type,m,e,count\ns^10+4/27=0,I1,1,1,10\ns=inf,II,1,2,1\n");
}

TEST(Cli, ClassifyJsonAndRank) {
  auto r = run("--format json surface classify quintic_k3_u0");
  ASSERT_EQ(r.code, 0);
  json o = json::parse(r.out);
  EXPECT_EQ(o["table"]["euler_total"], 24);
  EXPECT_EQ(o["fibers"], "2xII* + IV");
  EXPECT_EQ(o["euler_check"], "ok");
  auto k = run("surface rank quintic_rational --rho 10");
  ASSERT_EQ(k.code, 0);
  EXPECT_EQ(json::parse(k.out)["r"], 8);
}

TEST(Cli, SeedAndSchemaEchoed) {
  auto r = run("--seed 17 kummer rank --z 1+1i");
  ASSERT_EQ(r.code, 0);
  json o = json::parse(r.out);
  EXPECT_EQ(o["schema"], "1");
  EXPECT_EQ(o["seed"], 17);
  EXPECT_EQ(o["rho"], 20);
  EXPECT_EQ(o["status"], "exact");
}

TEST(Cli, InputErrorsExitTwo) {
  std::string err;
  auto p = write_temp("picardjump_malformed.json", "{oops");
  auto r = run("surface classify '" + p.string() + "'", &err);
  EXPECT_EQ(r.code, 2);
  json e = json::parse(err);
  EXPECT_EQ(e["kind"], "input");
  EXPECT_EQ(run("lattice signature /no/such/file.json").code, 2);
  EXPECT_NE(run("no-such-subcommand").code, 0);
}

TEST(Cli, ComputationErrorsExitThree) {
  std::string err;
  auto r = run("jump --family degenerate_line --center 0.1+1i --radius 0.1", &err);
  EXPECT_EQ(r.code, 3);
  json e = json::parse(err);
  EXPECT_EQ(e["kind"], "computation");
  EXPECT_EQ(e["error"], "map constant along all tested hyperplanes");
  // well-formed input, argument outside the domain
  EXPECT_EQ(run("kummer rank --z 1-1i").code, 3);
}

TEST(Cli, LatticeCommands) {
  auto p = write_temp("picardjump_lat.json",
                      R"({"gram": [[2,1],[1,2]], "sublattice": [[1,1]]})");
  auto s = run("lattice signature '" + p.string() + "'");
  ASSERT_EQ(s.code, 0) << s.out;
  EXPECT_EQ(json::parse(s.out)["signature"], json::parse("[2,0,0]"));
  auto b = run("lattice picard-bound --order 11 --b2 22");
  ASSERT_EQ(b.code, 0) << b.out;
  EXPECT_EQ(json::parse(b.out)["max_rho"], 12);
}

TEST(Cli, CorpusCheckPasses) {
  auto r = run("corpus check");
  EXPECT_EQ(r.code, 0) << r.out;
  auto l = run("corpus list");
  ASSERT_EQ(l.code, 0);
  EXPECT_NE(l.out.find("kummer_i"), std::string::npos);
}
