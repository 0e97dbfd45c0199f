#include <gtest/gtest.h>

#include <filesystem>
#include <sstream>

#include "pingcert/cli.hpp"
#include "pingcert/errors.hpp"
#include "pingcert/io.hpp"

using namespace pingcert;

namespace {

const std::string kData = PINGCERT_SOURCE_DIR "/data/";
const std::string kGolden = PINGCERT_SOURCE_DIR "/tests/golden/";

std::string tmp(const std::string& name) {
  return (std::filesystem::temp_directory_path() / ("pingcert_test_" + name)).string();
}

struct Run {
  int code;
  std::string out, err;
};

Run run(JobSpec spec) {
  std::ostringstream out, err;
  int code = run_job(spec, out, err);
  return {code, out.str(), err.str()};
}

Run cli(std::vector<std::string> args) {
  args.insert(args.begin(), "pingcert");
  std::vector<char*> argv;
  for (auto& a : args) argv.push_back(a.data());
  std::ostringstream out, err;
  int code = cli_main(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

JobSpec job(const std::string& command, const std::string& input, const std::string& out = "") {
  JobSpec s;
  s.command = command;
  s.input = input;
  s.out = out;
  return s;
}

// Replaces the first occurrence of `from` after `anchor`.
std::string replace_after(std::string text, const std::string& anchor, const std::string& from, const std::string& to) {
  auto a = text.find(anchor);
  EXPECT_NE(a, std::string::npos) << anchor;
  auto p = text.find(from, a);
  EXPECT_NE(p, std::string::npos) << from;
  return text.replace(p, from.size(), to);
}

}  // namespace

TEST(GeneratorFiles, ParseAndValidate) {
  auto s = parse_generators(read_file(kData + "sanov.json"));
  EXPECT_EQ(s->size(), 5u);
  EXPECT_TRUE(s->symmetric());
  EXPECT_EQ(parse_generators(generators_json(*s))->matrices(), s->matrices());
  EXPECT_THROW(parse_generators("{"), InvalidInput);
  EXPECT_THROW(parse_generators(R"({"dim": 2, "generators": [[["1","x"],["0","1"]]]})"), InvalidInput);
  EXPECT_THROW(parse_generators(R"({"dim": 2, "generators": [[["1","2"],["2","4"]]]})"), InvalidInput);
  EXPECT_THROW(parse_generators(R"({"dim": 2, "generators": [[["1","0","0"],["0","1","0"]]]})"), InvalidInput);
  EXPECT_THROW(parse_generators(R"({"dim": 2, "generators": []})"), InvalidInput);
  EXPECT_THROW(parse_generators(R"({"dim": 2, "generators": [[["1","1"],["0","1"]]], "flags": {"symmetric": true}})"),
               InvalidInput);
  EXPECT_THROW(parse_generators(R"({"generators": [[["1"]]]})"), InvalidInput);
}

TEST(CertificateFiles, RoundTripIsByteExact) {
  for (const char* cmd : {"certify-free", "certify-semigroup"}) {
    std::string path = tmp(std::string(cmd) + ".json");
    auto r = run(job(cmd, kData + "sanov.json", path));
    ASSERT_EQ(r.code, 0) << r.err;
    std::string text = read_file(path);
    AnyCertificate c = parse_certificate(text);
    EXPECT_EQ(certificate_json(c), text);
    EXPECT_FALSE(std::visit([](const auto& x) { return check_certificate(x); }, c));
    EXPECT_EQ(run(job("verify", path)).code, 0);
  }
}

TEST(CertificateFiles, TamperIsNamed) {
  std::string path = tmp("tamper_src.json");
  ASSERT_EQ(run(job("certify-free", kData + "sanov.json", path)).code, 0);
  std::string text = read_file(path);
  std::string bad = tmp("tamper.json");

  write_file(bad, replace_after(text, "\"d(v_a,H_b)\"", "\"", "\"3/4\", \"x\": \""));
  EXPECT_EQ(run(job("verify", bad)).code, 2);  // malformed: extra key breaks the object

  auto t = std::get<FreeGroupCertificate>(parse_certificate(text));
  t.cross_separations[0] = Rational(9, 10);
  write_file(bad, certificate_json(t));
  auto r = run(job("verify", bad));
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.err.find("stored"), std::string::npos) << r.err;

  t = std::get<FreeGroupCertificate>(parse_certificate(text));
  t.witness_a.forward.frame_error = 0;
  write_file(bad, certificate_json(t));
  r = run(job("verify", bad));
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.err.find("witness_a.forward"), std::string::npos) << r.err;

  t = std::get<FreeGroupCertificate>(parse_certificate(text));
  t.found_in_power = 3;
  write_file(bad, certificate_json(t));
  r = run(job("verify", bad));
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.err.find("found_in_power"), std::string::npos) << r.err;

  write_file(bad, replace_after(text, "\"version\"", "1", "7"));
  EXPECT_EQ(run(job("verify", bad)).code, 2);
}

TEST(Cli, ExitCodes) {
  EXPECT_EQ(run(job("certify-free", kData + "trivial.json", tmp("t.json"))).code, 1);
  EXPECT_EQ(run(job("certify-semigroup", kData + "unipotent.json", tmp("t.json"))).code, 1);
  EXPECT_EQ(run(job("certify-free", kData + "missing.json")).code, 2);
  EXPECT_EQ(run(job("nonsense", kData + "sanov.json")).code, 2);
  JobSpec neg = job("certify-free", kData + "sanov.json");
  neg.budget.max_power = 0;
  EXPECT_EQ(run(neg).code, 2);
  EXPECT_EQ(cli({"certify-free"}).code, 2);
  EXPECT_EQ(cli({"certify-free", kData + "sanov.json", "--epsilon", "abc"}).code, 2);
  EXPECT_EQ(cli({"--help"}).code, 0);
  auto e = cli({"certify-semigroup", kData + "sanov.json", "--epsilon", "1/2", "--out", tmp("e.json")});
  EXPECT_EQ(e.code, 1);
  EXPECT_NE(e.err.find("epsilon <= 1/3"), std::string::npos) << e.err;
}

TEST(Cli, GrowthAndBounds) {
  JobSpec g = job("growth", kData + "trivial.json", tmp("growth.json"));
  auto r = run(g);
  ASSERT_EQ(r.code, 0) << r.err;
  std::string report = read_file(tmp("growth.json"));
  EXPECT_NE(report.find("\"ball_sizes\": [\n    1,\n    1,\n    1,\n    1,\n    1,\n    1,\n    1\n  ]"),
            std::string::npos)
      << report;
  auto b = cli({"bounds", "--found-in-power", "4", "--out", tmp("bounds.json")});
  ASSERT_EQ(b.code, 0) << b.err;
  EXPECT_NE(b.out.find("h_lower = ["), std::string::npos);
  EXPECT_NE(b.out.find("(~0.00209"), std::string::npos) << b.out;
  EXPECT_EQ(cli({"bounds"}).code, 2);
  EXPECT_EQ(cli({"bounds", "--found-in-power", "4", "--kappa-f2", "-1,1"}).code, 2);
  std::string cert = tmp("bounds_cert.json");
  ASSERT_EQ(run(job("certify-semigroup", kData + "sanov.json", cert)).code, 0);
  auto bc = cli({"bounds", cert});
  EXPECT_EQ(bc.code, 0);
  EXPECT_NE(bc.out.find("d_free = 0, d_pi = 9"), std::string::npos) << bc.out;
}

TEST(Cli, DeterministicOutputs) {
  for (const char* cmd : {"certify-free", "certify-semigroup"}) {
    std::string p1 = tmp("det1.json"), p2 = tmp("det2.json"), t1 = tmp("det1.trace"), t2 = tmp("det2.trace");
    auto a = cli({cmd, kData + "sanov.json", "--out", p1, "--trace", t1});
    auto b = cli({cmd, kData + "sanov.json", "--out", p2, "--trace", t2});
    ASSERT_EQ(a.code, 0);
    EXPECT_EQ(read_file(p1), read_file(p2));
    EXPECT_EQ(read_file(t1), read_file(t2));
  }
}

TEST(Cli, GoldenTraces) {
  for (const char* mode : {"free", "semigroup"}) {
    std::string t = tmp(std::string("golden_") + mode);
    auto r = cli({std::string("certify-") + mode, kData + "sanov.json", "--out", tmp("golden.json"), "--trace", t});
    ASSERT_EQ(r.code, 0);
    EXPECT_EQ(read_file(t), read_file(kGolden + "sanov_" + mode + ".trace"));
  }
}
