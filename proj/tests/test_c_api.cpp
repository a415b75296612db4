// Copyright 2026 The levelset Authors. All Rights Reserved.
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
// =============================================================================

// Exercises the C surface only; this binary links nothing but the shared
// library.

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "levelset/levelset.h"

namespace {

std::string data_path(const char* name) { return std::string(LEVELSET_TEST_DATA) + "/" + name; }

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// 1 x 3 grid on [0, 2] with unit length scale.
ls_gp* make_line() {
  const double lower[] = {0.0};
  const double upper[] = {2.0};
  const size_t res[] = {3};
  ls_gp* gp = nullptr;
  EXPECT_EQ(ls_gp_create_grid(lower, upper, res, 1, 0.0, 1.0, 1.0, 1.0, &gp), LS_OK);
  return gp;
}

TEST(CApi, VersionAndNames) {
  EXPECT_STREQ(ls_version(), "0.1.0");
  EXPECT_STREQ(ls_status_name(LS_OK), "ok");
  EXPECT_STREQ(ls_status_name(LS_ERR_CONFIG), "config error");
}

TEST(CApi, CreateQueryObserve) {
  ls_gp* gp = make_line();
  ASSERT_NE(gp, nullptr);
  size_t m = 0;
  ASSERT_EQ(ls_gp_size(gp, &m), LS_OK);
  EXPECT_EQ(m, 3u);
  double v = 0.0;
  ASSERT_EQ(ls_gp_covariance(gp, 0, 1, &v), LS_OK);
  EXPECT_NEAR(v, std::exp(-0.5), 1e-15);

  ASSERT_EQ(ls_gp_observe(gp, 0, 2.0), LS_OK);
  ASSERT_EQ(ls_gp_mean(gp, 0, &v), LS_OK);
  EXPECT_DOUBLE_EQ(v, 1.0);
  ASSERT_EQ(ls_gp_variance(gp, 0, &v), LS_OK);
  EXPECT_DOUBLE_EQ(v, 0.5);
  ls_gp_destroy(gp);
}

TEST(CApi, CloneIsIndependent) {
  ls_gp* gp = make_line();
  ls_gp* copy = nullptr;
  ASSERT_EQ(ls_gp_clone(gp, &copy), LS_OK);
  ASSERT_EQ(ls_gp_observe(copy, 1, 5.0), LS_OK);
  double a = 0.0, b = 0.0;
  ls_gp_mean(gp, 1, &a);
  ls_gp_mean(copy, 1, &b);
  EXPECT_EQ(a, 0.0);
  EXPECT_GT(b, 0.0);
  ls_gp_destroy(copy);
  ls_gp_destroy(gp);
  ls_gp_destroy(nullptr);
}

TEST(CApi, ExplicitPriorAndPdGate) {
  const double mean[] = {0.0, 0.0};
  const double good[] = {1.0, 0.5, 0.5, 1.0};
  const double bad[] = {1.0, 2.0, 2.0, 1.0};
  ls_gp* gp = nullptr;
  ASSERT_EQ(ls_gp_create(mean, good, 2, 1.0, &gp), LS_OK);
  ls_gp_destroy(gp);
  gp = nullptr;
  EXPECT_EQ(ls_gp_create(mean, bad, 2, 1.0, &gp), LS_ERR_PRIOR_NOT_PD);
  EXPECT_EQ(gp, nullptr);
  EXPECT_STRNE(ls_last_error(), "");
}

TEST(CApi, ErrorCodes) {
  ls_gp* gp = make_line();
  double v = 0.0;
  EXPECT_EQ(ls_gp_mean(gp, 3, &v), LS_ERR_INDEX_OUT_OF_RANGE);
  EXPECT_NE(std::string(ls_last_error()).find("3"), std::string::npos);
  EXPECT_EQ(ls_gp_observe(gp, 7, 0.0), LS_ERR_INDEX_OUT_OF_RANGE);
  EXPECT_EQ(ls_gp_mean(nullptr, 0, &v), LS_ERR_INVALID_ARGUMENT);
  EXPECT_EQ(ls_classify(gp, 0.0, 1.5, 0.0, nullptr, nullptr), LS_ERR_INVALID_DELTA);

  const double lower[] = {0.0}, upper[] = {1.0};
  const size_t res[] = {2};
  ls_gp* other = nullptr;
  EXPECT_EQ(ls_gp_create_grid(lower, upper, res, 1, 0.0, -1.0, 1.0, 1.0, &other),
            LS_ERR_INVALID_HYPERPARAMETER);
  ls_gp_destroy(gp);
}

TEST(CApi, FailedObserveLeavesStateIntact) {
  ls_gp* gp = make_line();
  ASSERT_EQ(ls_gp_observe(gp, 9, 1.0), LS_ERR_INDEX_OUT_OF_RANGE);
  double v = 0.0;
  ls_gp_variance(gp, 0, &v);
  EXPECT_EQ(v, 1.0);
  ls_gp_destroy(gp);
}

TEST(CApi, ClassifyAndExpectedSetSize) {
  const double mean[] = {10.0};
  const double cov[] = {1.0};
  ls_gp* gp = nullptr;
  ASSERT_EQ(ls_gp_create(mean, cov, 1, 1.0, &gp), LS_OK);
  unsigned char flags[1] = {0};
  size_t count = 0;
  ASSERT_EQ(ls_classify(gp, 0.0, 0.975, 0.0, flags, &count), LS_OK);
  EXPECT_EQ(flags[0], 1);
  EXPECT_EQ(count, 1u);
  double e = 0.0;
  ASSERT_EQ(ls_expected_set_size(gp, 0, 0.0, 0.975, &e), LS_OK);
  EXPECT_NEAR(e, 1.0, 1e-12);
  ls_gp_destroy(gp);
}

TEST(CApi, ScoresAndSelection) {
  ls_gp* gp = make_line();
  ls_acq_spec spec = ls_acq_spec_default(LS_ACQ_STRADDLE, 0.0);
  std::vector<double> scores(3);
  ASSERT_EQ(ls_acq_scores(gp, &spec, scores.data()), LS_OK);
  EXPECT_NEAR(scores[0], 1.96, 1e-15);
  size_t index = 99;
  double score = 0.0;
  ASSERT_EQ(ls_select_point(gp, &spec, nullptr, &index, &score), LS_OK);
  EXPECT_EQ(index, 0u);  // all tied

  spec = ls_acq_spec_default(LS_ACQ_RMILE, 0.0);
  EXPECT_EQ(spec.epsilon, 1e-12);
  EXPECT_EQ(spec.gamma, 1e-10);
  EXPECT_EQ(spec.delta, 0.975);
  ASSERT_EQ(ls_acq_scores(gp, &spec, scores.data()), LS_OK);
  for (const double s : scores) EXPECT_GE(s, 1e-10);

  const double thresholds[] = {0.0, 0.0};
  spec = ls_acq_spec_default(LS_ACQ_MULTI, 0.0);
  spec.thresholds = thresholds;
  spec.n_thresholds = 2;
  EXPECT_EQ(ls_acq_scores(gp, &spec, scores.data()), LS_OK);

  spec = ls_acq_spec_default(LS_ACQ_RMILE, 0.0);
  spec.gamma = 0.0;
  EXPECT_EQ(ls_acq_scores(gp, &spec, scores.data()), LS_ERR_INVALID_HYPERPARAMETER);
  ls_gp_destroy(gp);
}

TEST(CApi, SafeSelection) {
  const double mean[] = {-5.0, 5.0, -5.0};
  const double cov[] = {1.0, 0.0, 0.0, 0.0, 1.0, 0.0, 0.0, 0.0, 1.0};
  ls_gp* gp = nullptr;
  ASSERT_EQ(ls_gp_create(mean, cov, 3, 1.0, &gp), LS_OK);
  const ls_acq_spec spec = ls_acq_spec_default(LS_ACQ_VARRED, 0.0);
  const ls_safe_spec safe{0.0, 1.96};
  size_t index = 99;
  ASSERT_EQ(ls_select_point(gp, &spec, &safe, &index, nullptr), LS_OK);
  EXPECT_EQ(index, 1u);
  const ls_safe_spec impossible{10.0, 1.96};
  EXPECT_EQ(ls_select_point(gp, &spec, &impossible, &index, nullptr), LS_ERR_EMPTY_SAFE_SET);
  ls_gp_destroy(gp);
}

TEST(CApi, RunAndCompareFiles) {
  const auto dir = std::filesystem::temp_directory_path() / "levelset_c_api";
  std::filesystem::create_directories(dir);
  const std::string run_a = (dir / "a.csv").string();
  const std::string run_b = (dir / "b.csv").string();
  ASSERT_EQ(ls_run_file(data_path("minimal.json").c_str(), run_a.c_str(), 1), LS_OK) << ls_last_error();
  ASSERT_EQ(ls_run_file(data_path("minimal.json").c_str(), run_b.c_str(), 2), LS_OK);
  EXPECT_EQ(slurp(run_a), slurp(run_b));

  const std::string cmp = (dir / "cmp.csv").string();
  ASSERT_EQ(ls_compare_file(data_path("minimal.json").c_str(), "rmile,straddle", cmp.c_str(), 1), LS_OK);
  EXPECT_EQ(slurp(cmp).rfind("acq,step,f1_mean", 0), 0u);

  EXPECT_EQ(ls_run_file(data_path("missing_budget.json").c_str(), run_a.c_str(), 1), LS_ERR_CONFIG);
  EXPECT_NE(std::string(ls_last_error()).find("budget"), std::string::npos);
  EXPECT_EQ(ls_run_file(data_path("malformed.json").c_str(), run_a.c_str(), 1), LS_ERR_CONFIG);
  EXPECT_EQ(ls_compare_file(data_path("minimal.json").c_str(), "bogus", cmp.c_str(), 1), LS_ERR_CONFIG);
}

TEST(CApi, VerifyQuick) {
  int passed = 0;
  char* report = nullptr;
  ASSERT_EQ(ls_verify(0, 0, &passed, &report), LS_OK);
  ASSERT_NE(report, nullptr);
  EXPECT_EQ(passed, 1) << report;
  EXPECT_NE(std::string(report).find("PASS"), std::string::npos);
  ls_string_free(report);
}

}  // namespace
