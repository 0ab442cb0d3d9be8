// Copyright 2026 The frc-kit Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <gtest/gtest.h>

#include <cstdlib>
#include <fstream>
#include <sstream>

#include "frckit/cli/commands.hpp"
#include "frckit/cli/csv.hpp"
#include "frckit/corrupt.hpp"
#include "frckit/imagekit.hpp"
#include "frckit/model.hpp"
#include "frckit/random.hpp"
#include "test_util.hpp"

using namespace frckit;
namespace fs = std::filesystem;

namespace {

struct Result {
  int code = 0;
  std::string out;
  std::string err;
};

Result run_cli(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), {}};
}

/// Passes an image through the float raster format, as the CLI output does.
Image stored(const Image& img, const fs::path& dir) {
  save_image(img, dir / "expected.fimg");
  return load_image(dir / "expected.fimg");
}

void write_text(const fs::path& p, const std::string& text) { std::ofstream(p) << text; }

} // namespace

TEST(Cli, UsageAndUnknownCommand) {
  EXPECT_EQ(run_cli({}).code, cli::kExitUsage);
  EXPECT_EQ(run_cli({"--help"}).code, cli::kExitOk);
  const Result r = run_cli({"bogus"});
  EXPECT_EQ(r.code, cli::kExitUsage);
  EXPECT_NE(r.err.find("bogus"), std::string::npos);
  EXPECT_EQ(run_cli({"frc", "--help"}).code, cli::kExitOk);
  EXPECT_EQ(run_cli({"synth", "--no-such-flag"}).code, cli::kExitUsage);
}

TEST(Cli, FrcOfIdenticalImagesIsOne) {
  const auto dir = test::scratch_dir("cli-frc");
  save_image(generate_synthetic({32, 1.0, 1}), dir / "a.pgm");
  const Result r = run_cli({"frc", (dir / "a.pgm").string(), (dir / "a.pgm").string(), "-o",
                            (dir / "out.csv").string()});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto table = cli::read_csv(dir / "out.csv");
  for (double v : cli::numeric_column(table, "frc", "out.csv")) {
    EXPECT_NEAR(v, 1.0, 1e-12);
  }
  EXPECT_TRUE(fs::exists(dir / "run.json-lines"));
}

TEST(Cli, FrcDirectoriesAverage) {
  const auto dir = test::scratch_dir("cli-frc-dir");
  fs::create_directories(dir / "a");
  fs::create_directories(dir / "b");
  std::vector<std::vector<double>> per;
  for (int i = 0; i < 3; ++i) {
    const std::string name = "img" + std::to_string(i) + ".fimg";
    const Image x = generate_synthetic({16, 1.0, static_cast<std::uint64_t>(i)});
    const Image y = corrupt(x, {CorruptionKind::gaussian, 0.3, static_cast<std::uint64_t>(i + 10)});
    save_image(x, dir / "a" / name);
    save_image(y, dir / "b" / name);
    ASSERT_EQ(run_cli({"frc", (dir / "a" / name).string(), (dir / "b" / name).string(), "--out-dir",
                       dir.string(), "-o", name + ".csv"})
                  .code,
              0);
    per.push_back(cli::numeric_column(cli::read_csv(dir / (name + ".csv")), "frc", name));
  }
  const Result r = run_cli({"frc", (dir / "a").string(), (dir / "b").string(), "--out-dir",
                            dir.string()});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto mean = cli::numeric_column(cli::read_csv(dir / "frc.csv"), "frc", "frc.csv");
  ASSERT_EQ(mean.size(), per[0].size());
  for (std::size_t k = 0; k < mean.size(); ++k) {
    EXPECT_NEAR(mean[k], (per[0][k] + per[1][k] + per[2][k]) / 3.0, 1e-12);
  }
}

TEST(Cli, MismatchedSizesNameBothFiles) {
  const auto dir = test::scratch_dir("cli-mismatch");
  save_image(Image(16, 16, 0.1), dir / "small.fimg");
  save_image(Image(32, 32, 0.1), dir / "large.fimg");
  const Result r = run_cli({"frc", (dir / "small.fimg").string(), (dir / "large.fimg").string(),
                            "--out-dir", dir.string()});
  EXPECT_EQ(r.code, cli::kExitUsage);
  EXPECT_NE(r.err.find("small.fimg"), std::string::npos) << r.err;
  EXPECT_NE(r.err.find("large.fimg"), std::string::npos) << r.err;
  EXPECT_EQ(r.err.find('\n'), r.err.size() - 1);
}

TEST(Cli, MissingInputIsUsageError) {
  const auto dir = test::scratch_dir("cli-missing");
  EXPECT_EQ(run_cli({"frc", (dir / "nope.pgm").string(), (dir / "nope.pgm").string()}).code,
            cli::kExitUsage);
}

TEST(Cli, MetricsIdenticalPair) {
  const auto dir = test::scratch_dir("cli-metrics");
  save_image(generate_synthetic({32, 1.0, 2}), dir / "a.fimg");
  ASSERT_EQ(run_cli({"metrics", (dir / "a.fimg").string(), (dir / "a.fimg").string(), "--out-dir",
                     dir.string()})
                .code,
            0);
  const auto table = cli::read_csv(dir / "metrics.csv");
  EXPECT_EQ(table.header, (std::vector<std::string>{"image", "mse", "psnr", "ssim", "frc_scalar"}));
  ASSERT_EQ(table.rows.size(), 1u);
  EXPECT_EQ(table.rows[0][0], "a.fimg");
  EXPECT_EQ(std::stod(table.rows[0][1]), 0.0);
  EXPECT_EQ(table.rows[0][2], "inf");
  EXPECT_NEAR(std::stod(table.rows[0][3]), 1.0, 1e-12);
  EXPECT_NEAR(std::stod(table.rows[0][4]), 1.0, 1e-12);
}

TEST(Cli, PearsonAndMissingColumn) {
  const auto dir = test::scratch_dir("cli-pearson");
  write_text(dir / "scores.csv", "metric_value,score,other\n1,1,3\n2,2,1\n3,3,2\n5,5,0\n");
  Result r = run_cli({"metrics", "--pearson", (dir / "scores.csv").string(), "--out-dir",
                      dir.string()});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto table = cli::read_csv(dir / "pearson.csv");
  EXPECT_NEAR(cli::numeric_column(table, "pearson", "pearson.csv")[0], 1.0, 1e-15);
  r = run_cli({"metrics", "--pearson", (dir / "scores.csv").string(), "--y", "missing",
               "--out-dir", dir.string()});
  EXPECT_EQ(r.code, cli::kExitUsage);
  EXPECT_NE(r.err.find("missing"), std::string::npos);
}

TEST(Cli, ConfigFileKeysAndPrecedence) {
  const auto dir = test::scratch_dir("cli-config");
  write_text(dir / "bad.cfg", "size=16\ncolour=red\n");
  Result r = run_cli({"synth", "--config", (dir / "bad.cfg").string(), "--out-dir", dir.string()});
  EXPECT_EQ(r.code, cli::kExitUsage);
  EXPECT_NE(r.err.find("colour"), std::string::npos) << r.err;

  write_text(dir / "good.cfg", "# synthetic settings\nsize=16\nseed=4\n");
  r = run_cli({"synth", "--config", (dir / "good.cfg").string(), "--size", "24", "--out-dir",
               dir.string(), "-o", "flag.fimg"});
  ASSERT_EQ(r.code, 0) << r.err;
  const Image flag = load_image(dir / "flag.fimg");
  EXPECT_EQ(flag.rows(), 24);
  EXPECT_EQ(flag, stored(generate_synthetic({24, 1.0, 4}), dir));
}

TEST(Cli, SeedFromEnvironment) {
  const auto dir = test::scratch_dir("cli-env");
  ::setenv("FRCKIT_SEED", "9", 1);
  Result r = run_cli({"synth", "--size", "16", "--out-dir", dir.string(), "-o", "env.fimg"});
  r = run_cli({"synth", "--size", "16", "--seed", "3", "--out-dir", dir.string(), "-o",
               "flag.fimg"});
  ::unsetenv("FRCKIT_SEED");
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(load_image(dir / "env.fimg"), stored(generate_synthetic({16, 1.0, 9}), dir));
  EXPECT_EQ(load_image(dir / "flag.fimg"), stored(generate_synthetic({16, 1.0, 3}), dir));
}

TEST(Cli, SynthTwiceIsIdentical) {
  const auto dir = test::scratch_dir("cli-synth");
  for (const char* name : {"one", "two"}) {
    ASSERT_EQ(run_cli({"synth", "--size", "128", "--exponent", "1", "--seed", "1", "--out-dir",
                       (dir / name).string()})
                  .code,
              0);
  }
  EXPECT_EQ(slurp(dir / "one" / "synthetic.pgm"), slurp(dir / "two" / "synthetic.pgm"));
  EXPECT_EQ(slurp(dir / "one" / "power.csv"), slurp(dir / "two" / "power.csv"));
}

TEST(Cli, CorruptValidatesLevel) {
  const auto dir = test::scratch_dir("cli-corrupt");
  save_image(generate_synthetic({16, 1.0, 2}), dir / "a.fimg");
  const Result r = run_cli({"corrupt", (dir / "a.fimg").string(), "--kind", "impulse", "--level",
                            "2", "--out-dir", dir.string()});
  EXPECT_EQ(r.code, cli::kExitUsage);
  EXPECT_NE(r.err.find("impulse"), std::string::npos);
  ASSERT_EQ(run_cli({"corrupt", (dir / "a.fimg").string(), "--kind", "gaussian", "--level", "0.1",
                     "--seed", "3", "--out-dir", dir.string()})
                .code,
            0);
  EXPECT_EQ(load_image(dir / "corrupted.fimg"),
            stored(corrupt(load_image(dir / "a.fimg"), {CorruptionKind::gaussian, 0.1, 3}), dir));
}

TEST(Cli, TrainZeroStepsWritesInitialization) {
  const auto dir = test::scratch_dir("cli-train");
  const Result r = run_cli({"train", "--steps", "0", "--synthetic", "1", "--held-out", "1",
                            "--size", "32", "--crop-size", "16", "--hidden", "4", "--seed", "7",
                            "--out-dir", dir.string()});
  ASSERT_EQ(r.code, 0) << r.err;
  save_model(DenoiserModel::make_default(derive_seed(7, 0), 4), dir / "fresh.fdnm");
  EXPECT_EQ(slurp(dir / "model.fdnm"), slurp(dir / "fresh.fdnm"));
}

TEST(Cli, GradcheckPasses) {
  const auto dir = test::scratch_dir("cli-gradcheck");
  const Result r = run_cli({"gradcheck", "--size", "16", "--seed", "3", "--out-dir", dir.string()});
  EXPECT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("max relative error"), std::string::npos);
  EXPECT_EQ(cli::read_csv(dir / "gradcheck.csv").rows.size(), 256u);
}

TEST(Cli, ReplayReproducesOutputs) {
  const auto dir = test::scratch_dir("cli-replay");
  ASSERT_EQ(run_cli({"synth", "--size", "32", "--seed", "2", "--out-dir", (dir / "a").string()}).code, 0);
  ASSERT_EQ(run_cli({"sweep", "--synthetic", "2", "--size", "16", "--out-dir", (dir / "a").string()}).code,
            0);
  const Result r = run_cli({"replay", (dir / "a" / "run.json-lines").string(), "--out-dir",
                            (dir / "b").string()});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(slurp(dir / "a" / "synthetic.pgm"), slurp(dir / "b" / "synthetic.pgm"));
  EXPECT_EQ(slurp(dir / "a" / "sweep.csv"), slurp(dir / "b" / "sweep.csv"));
  EXPECT_EQ(run_cli({"replay", (dir / "a" / "run.json-lines").string(), "--line", "9"}).code,
            cli::kExitUsage);
}

TEST(Csv, FormatNumber) {
  EXPECT_EQ(cli::format_number(0.5), "0.5");
  EXPECT_EQ(cli::format_number(std::numeric_limits<double>::infinity()), "inf");
  EXPECT_EQ(cli::format_number(-std::numeric_limits<double>::infinity()), "-inf");
  EXPECT_EQ(std::stod(cli::format_number(0.1 + 0.2)), 0.1 + 0.2);
}
