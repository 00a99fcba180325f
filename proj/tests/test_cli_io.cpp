#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <gtest/gtest.h>
#include <json.hpp>

#include "opshape/analysis.hpp"
#include "opshape/error.hpp"
#include "opshape/landmarks_csv.hpp"
#include "opshape/report_json.hpp"
#include "opshape/synth.hpp"

namespace fs = std::filesystem;

namespace opshape {
namespace {

constexpr const char* kTwoScenes =
    "scene,landmark,x,y\n"
    "a,1,0,0\n"
    "a,2,1,0\n"
    "a,3,1,1\n"
    "a,4,0,1\n"
    "a,5,0.4,0.3\n"
    "b,5,0.5,0.2\n"
    "b,4,0.1,1.1\n"
    "b,3,1.2,0.9\n"
    "b,2,1,0.1\n"
    "b,1,0.05,0\n";

class TempDir {
 public:
  TempDir() {
    static int counter = 0;
    path_ = fs::temp_directory_path() /
            ("opshape_test_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
    fs::remove_all(path_);
    fs::create_directories(path_);
  }
  ~TempDir() { fs::remove_all(path_); }
  const fs::path& path() const { return path_; }

 private:
  fs::path path_;
};

void write(const fs::path& p, const std::string& text) {
  std::ofstream out(p, std::ios::binary);
  out << text;
}

std::string slurp(const fs::path& p) { return read_file(p); }

std::vector<LandmarkScene> parse(const std::string& text) {
  std::istringstream in(text);
  return parse_landmarks(in);
}

std::string synth_csv(int n, double delta, std::uint64_t seed) {
  std::ostringstream out;
  write_landmarks(out, synth_study(5, n, delta, seed).images);
  return out.str();
}

ErrorKind parse_failure(const std::string& text, std::string* message = nullptr) {
  try {
    parse(text);
  } catch (const Error& e) {
    if (message) *message = e.what();
    return e.kind();
  }
  ADD_FAILURE() << "parsed";
  return ErrorKind::Io;
}

TEST(ParseLandmarks, TwoScenes) {
  const auto scenes = parse(kTwoScenes);
  ASSERT_EQ(scenes.size(), 2u);
  EXPECT_EQ(scenes[0].scene_id, "a");
  EXPECT_EQ(scenes[1].scene_id, "b");
  for (const auto& s : scenes) EXPECT_EQ(s.size(), 5);
  EXPECT_EQ(scenes[1].point(1), Eigen::Vector2d(0.05, 0));
  EXPECT_EQ(scenes[1].point(5), Eigen::Vector2d(0.5, 0.2));
}

TEST(ParseLandmarks, DuplicateRowNamesLine) {
  std::string message;
  const std::string text = std::string(kTwoScenes) + "b,2,3,3\n";
  EXPECT_EQ(parse_failure(text, &message), ErrorKind::ParseError);
  EXPECT_NE(message.find("line 12"), std::string::npos) << message;
  EXPECT_NE(message.find("line 10"), std::string::npos) << message;
}

TEST(ParseLandmarks, InconsistentLabelSets) {
  EXPECT_EQ(parse_failure(std::string(kTwoScenes) + "b,6,1,1\n"), ErrorKind::SchemaError);
  EXPECT_EQ(parse_failure("scene,landmark,x,y\na,1,0,0\na,3,1,1\n"), ErrorKind::SchemaError);
  std::string message;
  EXPECT_EQ(parse_failure("scene,landmark,x,y\na,1,0,0\na,2,1,1\nb,1,0,0\n", &message),
            ErrorKind::ParseError);
  EXPECT_NE(message.find("missing landmark 2"), std::string::npos) << message;
}

TEST(ParseLandmarks, MalformedRows) {
  EXPECT_EQ(parse_failure(""), ErrorKind::ParseError);
  EXPECT_EQ(parse_failure("scene,label,x,y\n"), ErrorKind::ParseError);
  EXPECT_EQ(parse_failure("scene,landmark,x,y\n"), ErrorKind::ParseError);
  EXPECT_EQ(parse_failure("scene,landmark,x,y\na,1,0\n"), ErrorKind::ParseError);
  EXPECT_EQ(parse_failure("scene,landmark,x,y\na,1,0,0,0\n"), ErrorKind::ParseError);
  EXPECT_EQ(parse_failure("scene,landmark,x,y\na,0,0,0\n"), ErrorKind::ParseError);
  EXPECT_EQ(parse_failure("scene,landmark,x,y\na,1,zero,0\n"), ErrorKind::ParseError);
  EXPECT_EQ(parse_failure("scene,landmark,x,y\na,1,inf,0\n"), ErrorKind::ParseError);
  EXPECT_EQ(parse_failure("scene,landmark,x,y\n,1,0,0\n"), ErrorKind::ParseError);
}

TEST(ParseLandmarks, ToleratesBomCrlfAndBlankLines) {
  const auto scenes = parse("\xEF\xBB\xBFscene,landmark,x,y\r\na,1,0,0\r\n\r\na,2,1.5,-2\r\n");
  ASSERT_EQ(scenes.size(), 1u);
  EXPECT_EQ(scenes[0].point(2), Eigen::Vector2d(1.5, -2));
}

TEST(WriteLandmarks, RoundTripsExactly) {
  const auto images = synth_study(6, 5, 0.3, 2, 0.01).images;
  std::ostringstream out;
  write_landmarks(out, images);
  const auto back = parse(out.str());
  ASSERT_EQ(back.size(), images.size());
  for (std::size_t i = 0; i < back.size(); ++i) {
    EXPECT_EQ(back[i].scene_id, images[i].scene_id);
    EXPECT_EQ(back[i].points, images[i].points);
  }
}

TEST(Hashing, KnownDigest) {
  EXPECT_EQ(sha256_hex("abc"), "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
  EXPECT_EQ(format_double(0.1), "0.10000000000000001");
}

TEST(Analysis, TwoScenesGiveDegenerateTest) {
  const auto report = analyze_scenes(parse(kTwoScenes), StudyConfig{}, "h");
  EXPECT_EQ(report.full.n, 2);
  EXPECT_EQ(report.full.se, 0.0);
  EXPECT_TRUE(report.full.degenerate_test);
  EXPECT_TRUE(report.loo.empty());
  EXPECT_FALSE(report.reduction);
  EXPECT_EQ(report.reduced, report.full);
}

TEST(Analysis, CoplanarSyntheticRun) {
  const auto report = analyze_scenes(parse(synth_csv(30, 0.0, 4)), StudyConfig{}, "h");
  EXPECT_LT(report.full.ts, 1e-9);
  EXPECT_FALSE(report.full.reject_ci);
  ASSERT_TRUE(report.reduction);
  EXPECT_TRUE(report.reduction->steps.empty());
  EXPECT_EQ(report.reduced.n, report.full.n);

  TempDir dir;
  emit_outputs(report, dir.path());
  for (const char* name : {"angles_full.csv", "angles_reduced.csv"}) {
    std::istringstream in(slurp(dir.path() / name));
    std::string line;
    std::getline(in, line);
    EXPECT_EQ(line, "scene,theta_radians");
    int rows = 0;
    while (std::getline(in, line)) {
      EXPECT_LT(std::stod(line.substr(line.find(',') + 1)), 1e-4) << line;
      ++rows;
    }
    EXPECT_EQ(rows, 30);
  }
}

TEST(Analysis, ReducedSizeMatchesTrace) {
  const auto report = analyze_scenes(parse(synth_csv(40, 0.05, 11)), StudyConfig{}, "h");
  ASSERT_TRUE(report.reduction);
  EXPECT_EQ(report.reduced.n, report.full.n - static_cast<Eigen::Index>(report.reduction->steps.size()));
  EXPECT_EQ(report.loo.size(), 40u);
  EXPECT_EQ(report.vw_full.size(), 1u);
}

TEST(Analysis, DegenerateSceneAbortsUnlessSkipped) {
  std::string text = synth_csv(10, 0.1, 3);
  // Make scene 4's first three frame points collinear.
  auto scenes = parse(text);
  scenes[3].points[1] = 0.5 * (scenes[3].points[0] + scenes[3].points[3]);
  try {
    analyze_scenes(scenes, StudyConfig{}, "h");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::DegenerateFrame);
    EXPECT_NE(std::string(e.what()).find("scene 4"), std::string::npos) << e.what();
  }
  StudyConfig config;
  config.skip_degenerate = true;
  const auto report = analyze_scenes(scenes, config, "h");
  EXPECT_EQ(report.full.n, 9);
  ASSERT_EQ(report.provenance.skipped_scenes.size(), 1u);
  EXPECT_EQ(report.provenance.skipped_scenes[0].scene_id, "4");
}

TEST(Analysis, ConfigValidation) {
  StudyConfig config;
  config.alpha = 1.0;
  EXPECT_THROW(analyze_scenes(parse(kTwoScenes), config, "h"), Error);
  config = {};
  config.remaining_labels = {6};
  EXPECT_THROW(analyze_scenes(parse(kTwoScenes), config, "h"), Error);
}

TEST(Report, JsonRoundTripIsExact) {
  StudyConfig config;
  config.df = 3;
  config.max_removals = 4;
  config.reduction_rule = ReductionRule::min_lower;
  config.input_path = "in.csv";
  const auto report = analyze_scenes(parse(synth_csv(25, 0.1, 8)), config, "abc");
  const auto back = report_from_json(nlohmann::json::parse(dump_report(report)));
  EXPECT_EQ(back, report);
  EXPECT_EQ(dump_report(back), dump_report(report));
}

TEST(Report, RejectsMalformed) {
  EXPECT_THROW(report_from_json(nlohmann::json::parse("{}")), Error);
  EXPECT_THROW(report_from_json(nlohmann::json::parse(R"({"schema":"other"})")), Error);
}

TEST(Report, DeterministicBytesAndInputHash) {
  TempDir dir;
  write(dir.path() / "a.csv", synth_csv(20, 0.1, 5));
  StudyConfig config;
  config.input_path = (dir.path() / "a.csv").string();
  config.output_dir = (dir.path() / "out1").string();
  const auto first = run_analysis(config);
  emit_outputs(first, dir.path() / "out1");
  config.output_dir = (dir.path() / "out2").string();
  emit_outputs(run_analysis(config), dir.path() / "out2");
  for (const char* name : {"report.json", "sphere_points.csv", "mean_direction.csv",
                           "angles_full.csv", "angles_reduced.csv", "loo_table.csv"}) {
    EXPECT_EQ(slurp(dir.path() / "out1" / name), slurp(dir.path() / "out2" / name)) << name;
  }
  EXPECT_EQ(first.provenance.input_sha256, sha256_hex(slurp(dir.path() / "a.csv")));

  write(dir.path() / "a.csv", synth_csv(20, 0.1, 6));
  EXPECT_NE(run_analysis(config).provenance.input_sha256, first.provenance.input_sha256);
}

TEST(Report, SpherePointsMarkRemovedScenes) {
  const auto report = analyze_scenes(parse(synth_csv(40, 0.05, 11)), StudyConfig{}, "h");
  TempDir dir;
  emit_outputs(report, dir.path());
  std::istringstream in(slurp(dir.path() / "sphere_points.csv"));
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, "scene,x,y,z,removed");
  int rows = 0, removed = 0;
  while (std::getline(in, line)) {
    ++rows;
    removed += line.back() == '1';
  }
  EXPECT_EQ(rows, 40);
  EXPECT_EQ(removed, static_cast<int>(report.reduction->steps.size()));
}

// End-to-end exit codes of the command-line tool.
class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    const char* cli = std::getenv("OPSHAPE_CLI");
    if (cli == nullptr) GTEST_SKIP() << "OPSHAPE_CLI not set";
    cli_ = cli;
  }
  int run(const std::string& args) {
    const std::string cmd = "\"" + cli_ + "\" " + args + " >" + (dir_.path() / "stdout").string() +
                            " 2>" + (dir_.path() / "stderr").string();
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  }
  std::string file(const std::string& name, const std::string& text) {
    write(dir_.path() / name, text);
    return (dir_.path() / name).string();
  }
  std::string out(const std::string& name) { return (dir_.path() / name).string(); }

  std::string cli_;
  TempDir dir_;
};

TEST_F(Cli, AnalyzeWritesEverything) {
  const auto input = file("in.csv", synth_csv(20, 0.1, 1));
  ASSERT_EQ(run("analyze " + input + " --out " + out("res")), 0) << slurp(out("stderr"));
  for (const char* name : {"report.json", "sphere_points.csv", "mean_direction.csv",
                           "angles_full.csv", "angles_reduced.csv", "loo_table.csv"}) {
    EXPECT_TRUE(fs::exists(fs::path(out("res")) / name)) << name;
  }
}

TEST_F(Cli, ExitCodes) {
  const auto good = file("good.csv", synth_csv(12, 0.1, 1));
  EXPECT_EQ(run("analyze " + file("dup.csv", std::string(kTwoScenes) + "a,1,0,0\n") + " --out " + out("x")), 2);
  EXPECT_EQ(run("analyze " + good + " --out " + out("x") + " --frame 1,2,3"), 2);
  EXPECT_EQ(run("analyze " + good + " --out " + out("x") + " --alpha 1.5"), 2);
  EXPECT_EQ(run("analyze " + good + " --bogus"), 2);
  EXPECT_EQ(run("analyze " + good + " --out " + out("x") + " --reduction-rule argmax"), 2);
  EXPECT_EQ(run("analyze " + good + " --out " + out("x") + " --reduction-rule min_lower"), 0);
  EXPECT_EQ(run(""), 2);

  auto scenes = parse(synth_csv(12, 0.1, 1));
  scenes[2].points[1] = scenes[2].points[0];
  std::ostringstream degenerate;
  write_landmarks(degenerate, scenes);
  const auto bad = file("bad.csv", degenerate.str());
  EXPECT_EQ(run("analyze " + bad + " --out " + out("x")), 3);
  EXPECT_EQ(run("analyze " + bad + " --out " + out("x") + " --skip-degenerate"), 0);

  const auto two = file("two.csv", kTwoScenes);
  EXPECT_EQ(run("analyze " + two + " --out " + out("x")), 0);
  EXPECT_EQ(run("analyze " + two + " --out " + out("x") + " --strict"), 4);
  EXPECT_EQ(run("analyze " + out("missing.csv") + " --out " + out("x")), 1);
}

TEST_F(Cli, OtherSubcommands) {
  const auto input = file("in.csv", synth_csv(15, 0.1, 2));
  ASSERT_EQ(run("reduce " + input + " --alpha-ref 0.1 --max-removals 2"), 0);
  const auto reduce = nlohmann::json::parse(slurp(out("stdout")));
  EXPECT_LE(reduce.at("reduction").at("steps").size(), 2u);
  EXPECT_EQ(reduce.at("reduction").at("alpha_ref"), 0.1);

  ASSERT_EQ(run("vw " + input + " --out " + out("vw.json")), 0);
  EXPECT_TRUE(nlohmann::json::parse(slurp(out("vw.json"))).contains("vw_full"));

  ASSERT_EQ(run("synth --seed 3 --n 4 --k 6"), 0);
  EXPECT_EQ(parse(slurp(out("stdout"))).size(), 4u);

  ASSERT_EQ(run("mc --replications 20 --n 50 --reference-draws 2000 --bootstrap 50"), 0);
  const auto mc = nlohmann::json::parse(slurp(out("stdout")));
  EXPECT_GE(mc.at("coverage").get<double>(), 0.0);
  EXPECT_TRUE(mc.contains("check_sample"));
}

TEST_F(Cli, SynthIsDeterministic) {
  ASSERT_EQ(run("synth --seed 7 --out " + out("a.csv")), 0);
  ASSERT_EQ(run("synth --seed 7 --out " + out("b.csv")), 0);
  EXPECT_EQ(slurp(out("a.csv")), slurp(out("b.csv")));
}

}  // namespace
}  // namespace opshape
