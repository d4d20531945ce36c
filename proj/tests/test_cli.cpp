// Copyright 2026 The ctdecomp Authors
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

#include <fstream>
#include <sstream>

#include "ctdecomp/cli.hpp"
#include "test_util.hpp"

namespace ctdecomp {
namespace {

namespace fs = std::filesystem;

struct Outcome {
  int code;
  std::string out;
  std::string err;
};

Outcome run_cli(std::vector<std::string> args) {
  args.insert(args.begin(), "ctdecomp");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

fs::path make_input(const std::string& name, Eigen::Index rows, Eigen::Index cols) {
  const fs::path p = testing::temp_path(name);
  ImageGrid img = add_gaussian_noise(testing::phantom(std::max(rows, cols)), {20.0, 7});
  save_image(img.topLeftCorner(rows, cols), p);
  return p;
}

TEST(Cli, PsnrOfIdenticalImages) {
  const fs::path a = make_input("psnr.pgm", 16, 16);
  const Outcome o = run_cli({"psnr", a.string(), a.string()});
  EXPECT_EQ(o.code, 0);
  EXPECT_EQ(o.out, "inf\n");
}

TEST(Cli, AddNoiseZeroSigmaIsBitIdentical) {
  const fs::path in = make_input("noise_in.pgm", 20, 24);
  const fs::path out = testing::temp_path("noise_out.pgm");
  EXPECT_EQ(run_cli({"add-noise", "--input", in.string(), "--sigma", "0", "--seed", "5", "--output", out.string()}).code, 0);
  EXPECT_EQ(slurp(in), slurp(out));
  const fs::path o1 = testing::temp_path("n1.pgm"), o2 = testing::temp_path("n2.pgm");
  run_cli({"add-noise", "--input", in.string(), "--sigma", "20", "--seed", "9", "--output", o1.string()});
  run_cli({"add-noise", "--input", in.string(), "--sigma", "20", "--seed", "9", "--output", o2.string()});
  EXPECT_EQ(slurp(o1), slurp(o2));
  EXPECT_NE(slurp(o1), slurp(in));
}

TEST(Cli, CheckTransform) {
  const fs::path dump = testing::temp_path("c.ctc");
  const Outcome o = run_cli({"check-transform", "--size", "128", "--levels", "3,3,4", "--seed", "1", "--dump", dump.string()});
  EXPECT_EQ(o.code, 0) << o.err;
  double pr = 1.0;
  std::istringstream lines(o.out);
  std::string key;
  while (lines >> key) {
    if (key == "pr_error") lines >> pr;
  }
  EXPECT_LE(pr, 1e-9);
  EXPECT_NE(o.out.find("parseval_ratio"), std::string::npos);
  EXPECT_EQ(slurp(dump).substr(0, 4), "CTC1");
}

TEST(Cli, DecomposeWritesComponentsDeterministically) {
  const fs::path in = make_input("dec_in.pgm", 64, 64);
  const std::string p1 = testing::temp_path("run1").string();
  const std::string p2 = testing::temp_path("run2").string();
  const std::string p3 = testing::temp_path("run3").string();
  const auto args = [&](const std::string& prefix) {
    return std::vector<std::string>{"decompose", "--input", in.string(), "--out-prefix", prefix,
                                    "--max-iter", "4", "--trace", prefix + ".csv"};
  };
  ASSERT_EQ(run_cli(args(p1)).code, 0);
  ASSERT_EQ(run_cli(args(p2)).code, 0);
  auto threaded = args(p3);
  threaded.insert(threaded.begin(), {"--threads", "3"});
  ASSERT_EQ(run_cli(threaded).code, 0);
  for (const char* part : {"_u.pgm", "_v.pgm", "_w.pgm", "_residual.pgm", ".csv"}) {
    ASSERT_TRUE(fs::exists(p1 + part)) << part;
    EXPECT_EQ(slurp(p1 + part), slurp(p2 + part)) << part;
    EXPECT_EQ(slurp(p1 + part), slurp(p3 + part)) << part;
  }
  EXPECT_EQ(slurp(p1 + ".csv").substr(0, 30), "iteration,dU,dV,dW,inner_flags");
  // v is stored around mid-grey.
  const ImageGrid v = load_image(p1 + "_v.pgm");
  EXPECT_NEAR(v.mean(), 128.0, 5.0);
}

TEST(Cli, DecomposePadsAndCrops) {
  const fs::path in = make_input("odd.pgm", 50, 70);
  const std::string prefix = testing::temp_path("odd").string();
  const Outcome o = run_cli({"decompose", "--input", in.string(), "--out-prefix", prefix, "--max-iter", "2",
                             "--noise-model", "wavelet", "--format", "png"});
  ASSERT_EQ(o.code, 0) << o.err;
  const ImageGrid u = load_image(prefix + "_u.png");
  EXPECT_EQ(u.rows(), 50);
  EXPECT_EQ(u.cols(), 70);
}

TEST(Cli, UsageErrorsWriteNothing) {
  const fs::path in = make_input("usage.pgm", 32, 32);
  const std::string prefix = testing::temp_path("never").string();
  EXPECT_EQ(run_cli({}).code, 1);
  EXPECT_EQ(run_cli({"frobnicate"}).code, 1);
  EXPECT_EQ(run_cli({"decompose", "--input", in.string()}).code, 1);
  EXPECT_EQ(run_cli({"decompose", "--input", in.string(), "--out-prefix", prefix, "--lambda", "-3"}).code, 1);
  EXPECT_EQ(run_cli({"decompose", "--input", in.string(), "--out-prefix", prefix, "--levels", "9"}).code, 1);
  EXPECT_EQ(run_cli({"decompose", "--input", in.string(), "--out-prefix", prefix, "--noise-model", "fourier"}).code, 1);
  EXPECT_EQ(run_cli({"check-transform", "--size", "24", "--levels", "3,3,4"}).code, 1);
  EXPECT_EQ(run_cli({"add-noise", "--input", in.string(), "--sigma", "-1", "--output", prefix + ".pgm"}).code, 1);
  for (const char* part : {"_u.pgm", "_v.pgm", "_w.pgm", "_residual.pgm", ".pgm"}) {
    EXPECT_FALSE(fs::exists(prefix + part)) << part;
  }
  EXPECT_EQ(run_cli({"--help"}).code, 0);
}

TEST(Cli, IoErrors) {
  const std::string missing = testing::temp_path("does_not_exist.pgm").string();
  EXPECT_EQ(run_cli({"psnr", missing, missing}).code, 2);
  const Outcome o = run_cli({"decompose", "--input", missing, "--out-prefix", testing::temp_path("x").string()});
  EXPECT_EQ(o.code, 2);
  EXPECT_FALSE(o.err.empty());
  const fs::path in = make_input("io.pgm", 16, 16);
  EXPECT_EQ(run_cli({"add-noise", "--input", in.string(), "--sigma", "1", "--output", "/nonexistent_dir/x.pgm"}).code, 2);
}

}  // namespace
}  // namespace ctdecomp
