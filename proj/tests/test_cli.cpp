#include <gtest/gtest.h>

#include <cstdio>
#include <fstream>
#include <sstream>

#include "wieferich/cli.hpp"

using wieferich::Json;

namespace {

struct Result {
  int code;
  std::string out, err;
};

Result run(std::vector<std::string> args) {
  args.insert(args.begin(), "wieferich_cli");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  int code = wieferich::cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::vector<Json> json_lines(const std::string& text) {
  std::vector<Json> out;
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);)
    if (!line.empty()) out.push_back(Json::parse(line));
  return out;
}

}  // namespace

TEST(Cli, Field) {
  Result r = run({"field", "-d", "3"});
  ASSERT_EQ(r.code, 0);
  Json j = Json::parse(r.out);
  EXPECT_EQ(j["discriminant"], -3);
  EXPECT_EQ(j["basis"], "half");
  EXPECT_EQ(run({"field", "-d", "4"}).code, 1);
}

TEST(Cli, UsageErrors) {
  EXPECT_EQ(run({}).code, 1);
  EXPECT_EQ(run({"bogus"}).code, 1);
  EXPECT_EQ(run({"census", "-d", "1"}).code, 1);  // missing base
  EXPECT_EQ(run({"census", "-d", "1", "-a", "2,1", "--format", "xml"}).code, 1);
  EXPECT_EQ(run({"census", "-d", "1", "-a", "0,1"}).code, 1);  // root of unity
  EXPECT_EQ(run({"--help"}).code, 0);
}

TEST(Cli, ClassifyScan) {
  Result r = run({"classify", "-d", "0", "-a", "2", "--p-max", "5000"});
  ASSERT_EQ(r.code, 0);
  Json j = Json::parse(r.out);
  auto w = j["scan"]["wieferich_places"];
  ASSERT_EQ(w.size(), 2u);
  EXPECT_EQ(w[0]["p"], "1093");
  EXPECT_EQ(w[1]["p"], "3511");
}

TEST(Cli, ClassifyPlaces) {
  Result r = run({"classify", "-d", "1", "-a", "2,1", "-p", "5"});
  ASSERT_EQ(r.code, 0);
  Json j = Json::parse(r.out);
  EXPECT_EQ(j["class"], "eligible");
  ASSERT_EQ(j["places"].size(), 2u);
  EXPECT_EQ(j["places"][0]["order"], "2");
  EXPECT_EQ(j["places"][0]["wieferich"], false);
}

TEST(Cli, DecomposeRoundTrip) {
  Result r = run({"decompose", "-d", "1", "-a", "2,1", "-n", "12"});
  ASSERT_EQ(r.code, 0);
  Json j = Json::parse(r.out);
  auto C = wieferich::factored_ideal_from_json(j["C"]);
  auto D = wieferich::factored_ideal_from_json(j["D"]);
  wieferich::QuadInt a(wieferich::FieldSpec::imaginary_quadratic(1), 2, 1);
  EXPECT_EQ(C.norm() * D.norm(), wieferich::abs_norm(wieferich::power(a, 12) - 1));
  EXPECT_EQ(wieferich::to_json(C), j["C"]);
}

TEST(Cli, DecomposeBudgetExhausted) {
  Result r = run({"decompose", "-d", "1", "-a", "2,1", "-n", "60", "--trial-limit", "50", "--rho-iterations", "5"});
  EXPECT_EQ(r.code, 3);
  EXPECT_EQ(Json::parse(r.out)["complete"], false);
}

TEST(Cli, CensusJsonLinesAndCsv) {
  Result r = run({"census", "-d", "1", "-a", "2,1", "-k", "3", "--n-max", "20"});
  ASSERT_EQ(r.code, 0);
  auto lines = json_lines(r.out);
  ASSERT_GE(lines.size(), 2u);
  const Json& summary = lines.back()["summary"];
  EXPECT_EQ(summary["k"], 3);
  EXPECT_EQ(summary["records"], lines.size() - 1);
  for (std::size_t i = 0; i + 1 < lines.size(); ++i) {
    EXPECT_EQ(lines[i]["residue_class"], "1");
    EXPECT_EQ(lines[i]["level"].get<std::uint64_t>() % 3, 0u);
  }

  Result csv = run({"census", "-d", "1", "-a", "2,1", "-k", "3", "--n-max", "20", "--format", "csv"});
  ASSERT_EQ(csv.code, 0);
  std::istringstream in(csv.out);
  std::string header;
  std::getline(in, header);
  EXPECT_EQ(header, "p,kind,t,norm,level,residue_class");
  std::size_t rows = 0;
  for (std::string line; std::getline(in, line);) ++rows;
  EXPECT_EQ(rows, lines.size() - 1);

  // identical output on a second run
  EXPECT_EQ(run({"census", "-d", "1", "-a", "2,1", "-k", "3", "--n-max", "20"}).out, r.out);
}

TEST(Cli, CensusToFile) {
  std::string path = testing::TempDir() + "census_test.jsonl";
  Result r = run({"census", "-d", "0", "-a", "2", "--n-max", "12", "-o", path});
  ASSERT_EQ(r.code, 0);
  EXPECT_TRUE(r.out.empty());
  std::ifstream f(path);
  std::stringstream buf;
  buf << f.rdbuf();
  EXPECT_FALSE(json_lines(buf.str()).empty());
  std::remove(path.c_str());
}

TEST(Cli, VerifyPasses) {
  Result r = run({"verify", "-d", "1", "-a", "2,1", "--n-max", "30", "-b", "2", "-b", "7/3"});
  ASSERT_EQ(r.code, 0) << r.err;
  Json j = Json::parse(r.out);
  EXPECT_EQ(j["pass"], true);
  for (const auto& rep : j["reports"]) EXPECT_TRUE(rep["violations"].empty()) << rep["check"];
}

TEST(Cli, VerifySmallBaseSkipsLowerBound) {
  Result r = run({"verify", "-d", "1", "-a", "1,1", "--n-max", "10"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_FALSE(Json::parse(r.out)["notes"].empty());
}

TEST(Cli, VerifyRequireCompleteWithTinyBudget) {
  Result r = run({"verify", "-d", "1", "-a", "2,1", "--n-max", "60", "--require-complete", "--trial-limit", "50",
                  "--rho-iterations", "5"});
  EXPECT_EQ(r.code, 3);
}

TEST(Cli, Exceptions) {
  Result r = run({"exceptions", "--d-max", "12"});
  ASSERT_EQ(r.code, 0);
  Json j = Json::parse(r.out);
  EXPECT_EQ(j["fields"][0]["d"], 1);
  EXPECT_EQ(j["fields"][0]["count"], 9);
}

TEST(Cli, Quality) {
  Result r = run({"quality", "-d", "0", "--alpha", "8", "--beta", "-9"});
  ASSERT_EQ(r.code, 0);
  EXPECT_NEAR(Json::parse(r.out)["quality"].get<double>(), 1.2262943855, 1e-9);
  EXPECT_EQ(run({"quality", "-d", "1", "--alpha", "1,0", "--beta", "-1,0"}).code, 1);
}
