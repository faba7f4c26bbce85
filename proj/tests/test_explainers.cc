#include <gtest/gtest.h>

#include <cmath>
#include <fstream>
#include <set>

#include "oracles.h"
#include "spex/explainers/attribution.h"
#include "spex/explainers/lime.h"
#include "spex/explainers/shapley.h"
#include "spex/explainers/surrogate.h"
#include "spex/models/regressor.h"
#include "spex/spectra/standardize.h"
#include "support.h"

namespace spex::explainers {
namespace {

using models::FunctionModel;

FunctionModel linear_model(const Eigen::VectorXd& w, double b) {
  return FunctionModel([w, b](const Eigen::VectorXd& x) { return w.dot(x) + b; }, w.size());
}

double nonlinear(const Eigen::VectorXd& x) {
  double s = x(0) * x(1) + std::sin(x(2));
  for (Eigen::Index j = 3; j < x.size(); ++j) s += 0.3 * static_cast<double>(j) * x(j) * x(j % 3);
  return s;
}

TEST(Background, FullRequestReturnsEveryRow) {
  const auto x = test::random_matrix(12, 3, 1);
  const auto f = linear_model(Eigen::Vector3d(1, 0, 0), 0);
  const auto idx = stratified_background(x, f, 12, 3);
  ASSERT_EQ(idx.size(), 12u);
  for (std::size_t i = 0; i < 12; ++i) EXPECT_EQ(idx[i], i);
}

TEST(Background, ConstantModelStillSamplesDistinctRows) {
  const auto x = test::random_matrix(30, 2, 2);
  const FunctionModel f([](const Eigen::VectorXd&) { return 1.0; }, 2);
  const auto idx = stratified_background(x, f, 7, 4);
  EXPECT_EQ(idx.size(), 7u);
  EXPECT_TRUE(std::is_sorted(idx.begin(), idx.end()));
  EXPECT_EQ(std::set<std::size_t>(idx.begin(), idx.end()).size(), 7u);
}

TEST(Background, MinorityModeIsRepresented) {
  Eigen::MatrixXd x(100, 1);
  for (Eigen::Index i = 0; i < 100; ++i) x(i, 0) = i < 95 ? 0.0 : 1.0;
  const auto f = linear_model(Eigen::VectorXd::Ones(1), 0);
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const auto idx = stratified_background(x, f, 5, seed, 5);
    EXPECT_TRUE(std::any_of(idx.begin(), idx.end(), [](std::size_t i) { return i >= 95; })) << seed;
  }
}

TEST(Shapley, ExactMatchesBruteForce) {
  const auto bg = test::random_matrix(4, 6, 3);
  const Eigen::VectorXd x = test::random_vector(6, 4);
  const FunctionModel f(nonlinear, 6);
  ShapConfig cfg;
  cfg.background = bg;
  const auto a = shapley_local(f, x, cfg);
  const auto ref = oracle::shapley_brute_force(nonlinear, x, bg);
  EXPECT_TRUE(a.values.isApprox(ref, 1e-10));
  double mean_bg = 0.0;
  for (Eigen::Index r = 0; r < bg.rows(); ++r) mean_bg += nonlinear(bg.row(r).transpose());
  mean_bg /= static_cast<double>(bg.rows());
  EXPECT_NEAR(a.base_value, mean_bg, 1e-12);
  EXPECT_NEAR(a.values.sum() + a.base_value, nonlinear(x), 1e-10);
}

TEST(Shapley, LinearModelValues) {
  const Eigen::VectorXd w = (Eigen::VectorXd(6) << 1, -2, 0, 3, 0.5, -1).finished();
  const auto bg = test::random_matrix(5, 6, 5);
  const Eigen::VectorXd x = test::random_vector(6, 6);
  ShapConfig cfg;
  cfg.background = bg;
  const auto a = shapley_local(linear_model(w, 2.0), x, cfg);
  const Eigen::VectorXd expected = w.cwiseProduct(x - bg.colwise().mean().transpose());
  EXPECT_TRUE(a.values.isApprox(expected, 1e-12));
}

TEST(Shapley, ConstantModelGivesZeros) {
  ShapConfig cfg;
  cfg.background = test::random_matrix(3, 4, 7);
  const FunctionModel f([](const Eigen::VectorXd&) { return -3.0; }, 4);
  const auto a = shapley_local(f, test::random_vector(4, 8), cfg);
  EXPECT_TRUE(a.values.isZero(1e-15));
  EXPECT_EQ(a.base_value, -3.0);
}

TEST(Shapley, SymmetricFeaturesShareCredit) {
  const FunctionModel f([](const Eigen::VectorXd& v) { return v(0) * v(1) + v(2); }, 3);
  Eigen::MatrixXd bg(2, 3);
  bg << 0, 0, 1, 1, 1, 0;
  ShapConfig cfg;
  cfg.background = bg;
  const auto a = shapley_local(f, Eigen::Vector3d(2, 2, 0), cfg);
  EXPECT_NEAR(a.values(0), a.values(1), 1e-14);
}

TEST(Shapley, SampledModeConverges) {
  const auto bg = test::random_matrix(3, 8, 9);
  const Eigen::VectorXd x = test::random_vector(8, 10);
  const FunctionModel f(nonlinear, 8);
  ShapConfig cfg;
  cfg.background = bg;
  cfg.mode = ShapConfig::Mode::kSampled;
  cfg.n_permutations = 2000;
  const auto a = shapley_local(f, x, cfg);
  const auto ref = oracle::shapley_brute_force(nonlinear, x, bg);
  const double range = ref.maxCoeff() - ref.minCoeff();
  EXPECT_LE((a.values - ref).cwiseAbs().maxCoeff(), 0.05 * range);
  EXPECT_NEAR(a.values.sum() + a.base_value, nonlinear(x), 1e-9);
}

TEST(Shapley, BatchIndependentOfThreads) {
  ShapConfig cfg;
  cfg.background = test::random_matrix(3, 16, 11);
  cfg.n_permutations = 20;
  cfg.seed = 4;
  const auto xs = test::random_matrix(5, 16, 12);
  const FunctionModel f(nonlinear, 16);
  const auto a = shapley_batch(f, xs, cfg);
  cfg.threads = 3;
  const auto b = shapley_batch(f, xs, cfg);
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_EQ(a[i].values, b[i].values);
    EXPECT_EQ(a[i].instance_id, i);
  }
}

TEST(ShapRank, MeanAbsoluteValues) {
  Attribution a, b;
  a.values = Eigen::Vector2d(1, -3);
  b.values = Eigen::Vector2d(-1, 1);
  const auto r = shap_rank(std::vector<Attribution>{a, b});
  EXPECT_EQ(r.scores, Eigen::Vector2d(1, 2));
  EXPECT_EQ(r.order, (std::vector<std::size_t>{1, 0}));
}

LimeConfig lime_config(const Eigen::MatrixXd& train) {
  LimeConfig cfg;
  cfg.train_stats = spectra::standardize_fit(train);
  cfg.n_perturbations = 500;
  cfg.seed = 7;
  return cfg;
}

TEST(Lime, RecoversLinearCoefficients) {
  const auto train = test::random_matrix(50, 5, 13, 2.0);
  const Eigen::VectorXd w = (Eigen::VectorXd(5) << 1, -2, 0, 0.5, 4).finished();
  auto cfg = lime_config(train);
  cfg.ridge_penalty = 1e-9;
  const auto a = lime_local(linear_model(w, 1.0), train.row(0).transpose(), cfg);
  const Eigen::VectorXd expected = w.cwiseProduct(cfg.train_stats.stds);
  EXPECT_TRUE(a.values.isApprox(expected, 1e-6));
  EXPECT_NEAR(a.local_r2, 1.0, 1e-9);
}

TEST(Lime, ConstantModelGivesZeros) {
  const auto train = test::random_matrix(20, 3, 14);
  const FunctionModel f([](const Eigen::VectorXd&) { return 5.0; }, 3);
  const auto a = lime_local(f, train.row(1).transpose(), lime_config(train));
  EXPECT_TRUE(a.values.isZero(1e-12));
  EXPECT_NEAR(a.base_value, 5.0, 1e-12);
}

TEST(Lime, DeterministicAndThreadIndependent) {
  const auto train = test::random_matrix(20, 6, 15);
  const FunctionModel f(nonlinear, 6);
  auto cfg = lime_config(train);
  const auto a = lime_batch(f, train.topRows(4), cfg);
  cfg.threads = 3;
  const auto b = lime_batch(f, train.topRows(4), cfg);
  for (std::size_t i = 0; i < a.size(); ++i) EXPECT_EQ(a[i].values, b[i].values);
  EXPECT_NE(a[0].values, a[1].values);
}

TEST(LimeRank, SingleInstanceVotes) {
  Attribution a;
  a.values = Eigen::Vector4d(0.1, 5, -2, 0.3);
  const auto r = lime_rank(std::vector<Attribution>{a}, 2);
  EXPECT_EQ(r.frequency, Eigen::Vector4d(0, 1, 1, 0));
  EXPECT_EQ(r.ranking.order, (std::vector<std::size_t>{1, 2, 3, 0}));
}

TEST(LimeRank, DominantFeatureWinsEveryVote) {
  std::vector<Attribution> attrs(10);
  for (std::size_t i = 0; i < attrs.size(); ++i) {
    attrs[i].values = test::random_vector(8, 100 + i, 0.1);
    attrs[i].values(5) = 10.0;
  }
  const auto r = lime_rank(attrs, 1);
  EXPECT_EQ(r.frequency(5), 1.0);
  EXPECT_EQ(r.ranking.order.front(), 5u);
}

TEST(Surrogate, LinearModelIsFaithful) {
  const auto x = test::random_matrix(40, 4, 16, 3.0);
  const Eigen::VectorXd w = Eigen::Vector4d(2, 0, -1, 0.5);
  const auto s = surrogate_fit(linear_model(w, 1.0), x);
  EXPECT_GT(s.fidelity, 0.999999);
  const spectra::StandardizationParams p = spectra::standardize_fit(x);
  EXPECT_TRUE(s.linear.weights().isApprox(w.cwiseProduct(p.stds), 1e-5));
  EXPECT_EQ(surrogate_rank(s).order, (std::vector<std::size_t>{0, 2, 3, 1}));
}

TEST(Surrogate, UnrelatedOutputsHaveLowFidelity) {
  const auto x = test::random_matrix(300, 3, 17);
  const FunctionModel f([](const Eigen::VectorXd& v) { return std::sin(1000.0 * v(0) * v(1)); }, 3);
  EXPECT_LT(surrogate_fit(f, x).fidelity, 0.1);
}

TEST(SurrogateProperty, PermutationEquivariance) {
  const auto x = test::random_matrix(30, 5, 18);
  const FunctionModel f(nonlinear, 5);
  const std::vector<Eigen::Index> perm{4, 2, 0, 3, 1};
  Eigen::MatrixXd xp(30, 5);
  for (Eigen::Index j = 0; j < 5; ++j) xp.col(j) = x.col(perm[static_cast<std::size_t>(j)]);
  const FunctionModel fp(
      [&](const Eigen::VectorXd& v) {
        Eigen::VectorXd u(5);
        for (Eigen::Index j = 0; j < 5; ++j) u(perm[static_cast<std::size_t>(j)]) = v(j);
        return nonlinear(u);
      },
      5);
  const auto a = surrogate_rank(surrogate_fit(f, x)), b = surrogate_rank(surrogate_fit(fp, xp));
  for (Eigen::Index j = 0; j < 5; ++j) EXPECT_NEAR(b.scores(j), a.scores(perm[static_cast<std::size_t>(j)]), 1e-9);
}

TEST(RSquared, Examples) {
  const Eigen::Vector3d y(1, 2, 3);
  EXPECT_EQ(r_squared(y, y), 1.0);
  EXPECT_NEAR(r_squared(y, Eigen::Vector3d::Constant(2.0)), 0.0, 1e-15);
  EXPECT_EQ(r_squared(Eigen::Vector3d::Constant(4), Eigen::Vector3d::Constant(4)), 1.0);
  EXPECT_EQ(r_squared(Eigen::Vector3d::Constant(4), Eigen::Vector3d(4, 4, 5)), 0.0);
}

TEST(Attributions, LongFormatTable) {
  Attribution a;
  a.instance_id = 3;
  a.values = Eigen::Vector2d(0.5, -1.0);
  test::TempDir dir("attr");
  write_attributions(dir / "a.csv", {a}, spectra::linear_axis(100, 110, 2, 7.1));
  std::ifstream in(dir / "a.csv");
  std::string header, row;
  std::getline(in, header);
  std::getline(in, row);
  EXPECT_EQ(header, "instance_id,wavenumber,value");
  EXPECT_EQ(row.substr(0, 6), "3,100,");
}

}  // namespace
}  // namespace spex::explainers
