#include <gtest/gtest.h>

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>

#include "json.hpp"

namespace {

struct Run {
  int code = -1;
  std::string out;
};

Run run(const std::string& args) {
  const std::string cmd = std::string(SELGAME_CLI_PATH) + " " + args + " 2>/dev/null";
  Run r;
  FILE* p = popen(cmd.c_str(), "r");
  std::array<char, 4096> buf{};
  while (auto n = fread(buf.data(), 1, buf.size(), p))
    r.out.append(buf.data(), n);
  int status = pclose(p);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::string sample(const std::string& name) { return std::string(SAMPLES_DIR) + "/" + name; }

std::filesystem::path scratch(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / "selgame_cli_test";
  std::filesystem::create_directories(dir);
  return dir / name;
}

} // namespace

TEST(Cli, SolveExitCodes) {
  EXPECT_EQ(run("solve " + sample("fix_a.json") + " --relation II_markov").code, 0);
  auto fb1 = scratch("fix_b1.json");
  auto gen = run("gen --space " + sample("discrete2.json") + " --game rothberger --horizon 1");
  ASSERT_EQ(gen.code, 0);
  std::ofstream(fb1) << gen.out;
  EXPECT_EQ(run("solve " + fb1.string() + " --relation II_full").code, 1);
}

TEST(Cli, MalformedJsonExitsTwo) {
  auto bad = scratch("bad.json");
  std::ofstream(bad) << "{ \"universe\": [";
  EXPECT_EQ(run("solve " + bad.string() + " --relation I_full").code, 2);
  EXPECT_EQ(run("solve " + sample("fix_a.json") + " --relation nope").code, 2);
}

TEST(Cli, BudgetExitsTwo) {
  EXPECT_EQ(run("--budget 1 solve " + sample("fix_b.json") + " --relation II_full").code, 2);
}

TEST(Cli, SolveReportJson) {
  auto r = run("solve " + sample("fix_a.json") + " --relation II_markov");
  auto j = nlohmann::json::parse(r.out);
  EXPECT_EQ(j["relation"], "II_markov");
  EXPECT_EQ(j["holds"], true);
  EXPECT_EQ(j["witness"]["table"]["0,0"], "1");
}

TEST(Cli, VerifyDuality) {
  EXPECT_EQ(run("verify-duality " + sample("fix_a.json") + " --reflection " + sample("fix_a_reflection.json")).code, 0);
  EXPECT_EQ(run("verify-duality " + sample("fix_b.json") + " --reflection " + sample("discrete2_P_X.json")).code, 0);
  auto cmd = std::string(SELGAME_CLI_PATH) + " verify-duality " + sample("fix_a.json") + " --reflection " +
             sample("fix_a_not_reflection.json") + " 2>&1 >/dev/null";
  FILE* p = popen(cmd.c_str(), "r");
  std::array<char, 4096> buf{};
  std::string err(buf.data(), fread(buf.data(), 1, buf.size(), p));
  int status = pclose(p);
  EXPECT_EQ(WEXITSTATUS(status), 2);
  EXPECT_NE(err.find("subset condition failed, witness range {2}"), std::string::npos) << err;
}

TEST(Cli, ReflectAndChainCheck) {
  EXPECT_EQ(run("reflect --instance " + sample("fix_a.json") + " --reflection " + sample("fix_a_reflection.json")).code, 0);
  auto r = run("reflect --instance " + sample("fix_a.json") + " --reflection " + sample("fix_a_not_reflection.json"));
  EXPECT_EQ(r.code, 1);
  EXPECT_EQ(nlohmann::json::parse(r.out)["failed_condition"], "subset");
  EXPECT_EQ(run("chain-check " + sample("fix_a.json")).code, 0);
}

TEST(Cli, DualizeAndTranslate) {
  auto d = run("dualize " + sample("fix_a.json") + " --reflection " + sample("fix_a_reflection.json"));
  ASSERT_EQ(d.code, 0);
  auto j = nlohmann::json::parse(d.out);
  EXPECT_EQ(j["payoff"]["negated"], true);
  auto t = run("translate --theorem t1 --direction backward --context " + sample("fix_a_context.json") +
               " --strategy " + sample("fix_a_dual_markov.json"));
  ASSERT_EQ(t.code, 0);
  auto tj = nlohmann::json::parse(t.out);
  EXPECT_EQ(tj["strategy"]["table"].dump(), "[0]");
  EXPECT_FALSE(tj["provenance"].empty());
}

TEST(Cli, CorpusEmptyAndDeterministic) {
  auto empty = run("corpus --count 0");
  EXPECT_EQ(empty.code, 0);
  EXPECT_EQ(nlohmann::json::parse(empty.out)["accepted"], 0);
  auto a = run("--seed 9 corpus --count 20");
  auto b = run("--seed 9 corpus --count 20");
  EXPECT_EQ(a.out, b.out);
  auto m = nlohmann::json::parse(a.out)["manifest"];
  EXPECT_EQ(m["seed"], 9);
  EXPECT_EQ(m["version"], "0.1.0");
}

TEST(Cli, OutDirWritesManifestWithDigests) {
  auto dir = scratch("out");
  std::filesystem::remove_all(dir);
  ASSERT_EQ(run("--out " + dir.string() + " chain-check " + sample("fix_a.json")).code, 0);
  std::ifstream in(dir / "manifest.json");
  auto m = nlohmann::json::parse(in);
  EXPECT_EQ(m["command"], "chain-check");
  EXPECT_EQ(m["inputs"][sample("fix_a.json")].get<std::string>().size(), 16u);
}
