#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "morse/cli.hpp"
#include "morse/io.hpp"
#include "test_support.hpp"

using namespace morse;
using nlohmann::json;

namespace {

class TempDir {
 public:
  TempDir() {
    path_ = std::filesystem::temp_directory_path() /
            ("morse_cli_test_" + std::to_string(::testing::UnitTest::GetInstance()->random_seed()) +
             "_" + ::testing::UnitTest::GetInstance()->current_test_info()->name());
    std::filesystem::create_directories(path_);
  }
  ~TempDir() { std::filesystem::remove_all(path_); }

  std::string write(const std::string& name, const std::string& text) const {
    const auto p = path_ / name;
    std::ofstream(p) << text;
    return p.string();
  }

 private:
  std::filesystem::path path_;
};

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

const char* kSurface = R"({"dimension": 2, "oriented": false, "counts": [1, 1, 2],
                           "manifold": {"class": [["K", 1]]}})";
const char* kSphere = R"({"dimension": 2, "oriented": false, "counts": [1, 0, 1],
                          "manifold": {"class": [["S2", 1]], "betti": [1, 0, 1]}})";
const char* kCircle = R"({"dimension": 1, "oriented": false, "counts": [1, 1],
                          "manifold": {"class": [["S1", 1]]}})";

}  // namespace

TEST(DescriptorJson, ParsesAndCanonicalizes) {
  const auto d = io::descriptor_from_json(json::parse(
      R"({"dimension": 2, "oriented": false, "counts": [1, 2, 1],
          "manifold": {"class": [["T", 1], ["A", 3], ["T", 1]], "betti": [1, 2, 1]}})"));
  EXPECT_EQ(d.counts.counts, (std::vector<Count>{1, 2, 1}));
  EXPECT_EQ(d.manifold.token.coefficient("A"), 1);
  EXPECT_EQ(d.manifold.token.coefficient("T"), 0);
  const json out = io::descriptor_to_json(d);
  EXPECT_EQ(out["manifold"]["class"], json::parse(R"([["A", 1]])"));
  EXPECT_EQ(out["manifold"]["betti"], json::parse("[1, 2, 1]"));
}

TEST(DescriptorJson, RejectsMalformed) {
  EXPECT_THROW(io::descriptor_from_json(json::parse("[]")), io::FormatError);
  EXPECT_THROW(io::descriptor_from_json(json::parse(
                   R"({"dimension": 1, "oriented": 1, "counts": [1, 1], "manifold": {"class": []}})")),
               io::FormatError);
  EXPECT_THROW(io::descriptor_from_json(json::parse(
                   R"({"dimension": 1, "oriented": true, "counts": [1, 1.5], "manifold": {"class": []}})")),
               io::FormatError);
  EXPECT_THROW(io::descriptor_from_json(json::parse(
                   R"({"dimension": 1, "oriented": true, "counts": [1, 1], "manifold": {"class": [["A"]]}})")),
               io::FormatError);
  EXPECT_THROW(io::descriptor_from_json(json::parse(R"({"dimension": 1, "oriented": true})")),
               io::FormatError);
}

TEST(DescriptorJson, RoundTripProperty) {
  morse::testing::DescriptorGenerator gen(morse::testing::test_seed());
  for (int i = 0; i < 300; ++i) {
    const auto d = gen.any_valid(gen.uniform(0, 6), gen.coin());
    const auto text = io::descriptor_to_json(d).dump();
    const auto back = io::descriptor_from_json(json::parse(text));
    EXPECT_EQ(back, d);
    EXPECT_EQ(io::descriptor_to_json(back).dump(), text);
  }
}

TEST(Cli, InvariantText) {
  TempDir dir;
  const auto f = dir.write("f.json", kSphere);
  const auto r = run({"invariant", f});
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("phis: [0]"), std::string::npos);
  EXPECT_NE(r.out.find("token: S2:1"), std::string::npos);
}

TEST(Cli, InvariantJsonAndMissingSigma) {
  TempDir dir;
  const auto f = dir.write("c.json", R"({"dimension": 1, "oriented": true, "counts": [1, 1],
                                          "manifold": {"class": [["S1", 1]], "betti": [1, 1]}})");
  const auto r = run({"invariant", f, "--format", "json"});
  ASSERT_EQ(r.code, 0);
  EXPECT_EQ(json::parse(r.out)["z2"], 1);

  const auto g = dir.write("g.json", R"({"dimension": 1, "oriented": true, "counts": [1, 1],
                                          "manifold": {"class": [["S1", 1]]}})");
  const auto bad = run({"invariant", g});
  EXPECT_EQ(bad.code, 2);
  EXPECT_NE(bad.err.find("sigma(M)"), std::string::npos);
}

TEST(Cli, ObstructCsv) {
  TempDir dir;
  const auto f = dir.write("f.json", kSurface);
  const auto fp = dir.write("fp.json", kCircle);
  const auto r = run({"obstruct", f, fp, "--K", "5", "--format", "csv"});
  ASSERT_EQ(r.code, 0) << r.err;
  std::istringstream lines(r.out);
  std::string line;
  std::getline(lines, line);
  EXPECT_EQ(line.rfind("k,family_invariant,product_phi_top", 0), 0u);
  std::vector<Count> column;
  while (std::getline(lines, line)) {
    // k,"family",phi_top,...
    const auto close = line.find("\",");
    const auto start = close + 2;
    column.push_back(std::stoll(line.substr(start, line.find(',', start) - start)));
  }
  EXPECT_EQ(column, (std::vector<Count>{1, 3, 4, 5, 6, 7}));

  const auto again = run({"obstruct", f, fp, "--K", "5", "--format", "csv"});
  EXPECT_EQ(again.out, r.out);
}

TEST(Cli, ObstructJsonMirrorsRows) {
  TempDir dir;
  const auto f = dir.write("f.json", kSurface);
  const auto fp = dir.write("fp.json", kCircle);
  const auto r = run({"obstruct", f, fp, "--K", "2", "--format", "json"});
  ASSERT_EQ(r.code, 0);
  const json doc = json::parse(r.out);
  ASSERT_EQ(doc["rows"].size(), 3u);
  EXPECT_EQ(doc["rows"][2]["product_phi_top"], 4);
  EXPECT_EQ(doc["rows"][2]["product_invariant"]["phis"], json::parse("[4]"));
  EXPECT_TRUE(doc["passed"].get<bool>());
}

TEST(Cli, ValidateReportsViolations) {
  TempDir dir;
  const auto bad = dir.write("bad.json", R"({"dimension": 1, "oriented": false, "counts": [2, 3],
                                             "manifold": {"class": []}})");
  const auto r = run({"validate", bad});
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.out.find("Euler characteristic"), std::string::npos);
  EXPECT_EQ(run({"validate", dir.write("ok.json", kSurface)}).code, 0);
}

TEST(Cli, ErrorsAreDistinct) {
  TempDir dir;
  const auto f = dir.write("f.json", kSurface);
  const auto c = dir.write("c.json", kCircle);
  const auto garbage = dir.write("x.json", "{not json");

  auto malformed = run({"invariant", garbage});
  EXPECT_EQ(malformed.code, 2);
  EXPECT_NE(malformed.err.find("malformed input"), std::string::npos);

  auto mismatch = run({"cobordant", f, c});
  EXPECT_EQ(mismatch.code, 2);
  EXPECT_NE(mismatch.err.find("dimension mismatch"), std::string::npos);

  EXPECT_EQ(run({"invariant", dir.write("none.json", "")}).code, 2);
  EXPECT_EQ(run({"invariant", (std::filesystem::path(f).parent_path() / "missing.json").string()})
                .code,
            2);
  EXPECT_EQ(run({"frobnicate"}).code, 2);
  EXPECT_EQ(run({"invariant", f, "--format", "csv"}).code, 2);
}

TEST(Cli, AlgebraSubcommands) {
  TempDir dir;
  const auto f = dir.write("f.json", kSurface);
  const auto c = dir.write("c.json", kCircle);
  const auto s = dir.write("s.json", kSphere);

  EXPECT_NE(run({"phi", f, "--j", "2"}).out.find("phi_2 = 1"), std::string::npos);
  EXPECT_EQ(run({"phi", f, "--j", "5"}).code, 2);

  const auto prod = run({"product", c, f, "--format", "json"});
  ASSERT_EQ(prod.code, 0);
  EXPECT_EQ(json::parse(prod.out)["counts"], json::parse("[1, 2, 3, 2]"));
  EXPECT_EQ(json::parse(prod.out)["manifold"]["class"], json::parse(R"([["K*S1", 1]])"));

  const auto t3 = run({"theorem3", c, f, "--j", "0"});
  EXPECT_NE(t3.out.find("phi_3 = 1"), std::string::npos);
  EXPECT_EQ(run({"theorem3", f, c, "--j", "0"}).code, 2);

  const auto st = run({"stabilize", c, "--k", "2", "--format", "json"});
  EXPECT_EQ(json::parse(st.out)["counts"], json::parse("[4, 4]"));
  const auto st_off = run({"stabilize", c, "--k", "2", "--extra-middle-pair", "off", "--format",
                           "json"});
  EXPECT_EQ(json::parse(st_off.out)["counts"], json::parse("[3, 3]"));

  EXPECT_EQ(run({"cobordant", s, s}).code, 0);
  EXPECT_EQ(run({"cobordant", s, f}).code, 1);
}

TEST(Cli, VerifyLemma1) {
  TempDir dir;
  const auto report = dir.write("report.json", "");
  const auto r = run({"verify-lemma1", "--f1", "circle_cos:2", "--f2", "circle_cos:1",
                      "--weights", "0.7071,0.7071", "--report", report});
  EXPECT_EQ(r.code, 0) << r.out;
  EXPECT_NE(r.out.find("verdict: pass"), std::string::npos);
  std::ifstream in(report);
  const json doc = json::parse(in);
  EXPECT_EQ(doc["verdict"], "pass");
  EXPECT_EQ(doc["histograms"]["product"], json::parse("[2, 4, 2]"));
  EXPECT_EQ(doc["matches"].size(), 8u);

  EXPECT_EQ(run({"verify-lemma1", "--f1", "circle_cos:1", "--f2", "circle_cos:1", "--weights",
                 "1,-1"})
                .code,
            2);
  EXPECT_EQ(run({"verify-lemma1", "--f1", "banana", "--f2", "circle_cos:1"}).code, 2);
}
