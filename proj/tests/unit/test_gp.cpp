#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "codesign/errors.hpp"
#include "codesign/gp.hpp"
#include "codesign/optim.hpp"

using namespace codesign;

namespace {

Eigen::MatrixXd random_x(int n, int d, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    Eigen::MatrixXd x(n, d);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < d; ++j) x(i, j) = u(rng);
    return x;
}

Eigen::VectorXd branin_like(const Eigen::MatrixXd& x) {
    Eigen::VectorXd y(x.rows());
    for (Eigen::Index i = 0; i < x.rows(); ++i) y[i] = std::sin(6 * x(i, 0)) + 0.5 * x(i, 1) * x(i, 1) - x(i, 0) * x(i, 1);
    return y;
}

GpOptions noise_free() {
    GpOptions o;
    o.log_noise_min = o.log_noise_max = std::log(1e-6);
    return o;
}

}  // namespace

TEST(Gp, InterpolatesNoiseFree) {
    const auto x = random_x(25, 2, 1);
    const auto y = branin_like(x);
    const auto gp = GpModel::fit(x, y, noise_free(), 1);
    Eigen::VectorXd mean, var;
    gp.predict(x, mean, var);
    for (Eigen::Index i = 0; i < x.rows(); ++i) EXPECT_NEAR(mean[i], y[i], 1e-6);
}

TEST(Gp, VarianceNonNegativeAndSmallAtData) {
    const auto x = random_x(30, 3, 2);
    const auto y = branin_like(x);
    const auto gp = GpModel::fit(x, y, GpOptions{}, 2);
    Eigen::VectorXd mean, var;
    gp.predict(random_x(1000, 3, 3), mean, var);
    EXPECT_GE(var.minCoeff(), 0.0);
    gp.predict(x, mean, var);
    Eigen::VectorXd far_mean, far_var;
    gp.predict(Eigen::MatrixXd::Constant(1, 3, 50.0), far_mean, far_var);
    EXPECT_LT(var.maxCoeff(), far_var[0]);
}

TEST(Gp, FitIsDeterministicAndImprovesLikelihood) {
    const auto x = random_x(20, 2, 4);
    const auto y = branin_like(x);
    const auto a = GpModel::fit(x, y, GpOptions{}, 9);
    const auto b = GpModel::fit(x, y, GpOptions{}, 9);
    EXPECT_EQ(a.hyper().log_lengthscales, b.hyper().log_lengthscales);
    EXPECT_EQ(a.log_marginal_likelihood(), b.log_marginal_likelihood());
    GpHyper start;
    start.log_lengthscales = {std::log(0.5), std::log(0.5)};
    start.log_noise = std::log(1e-3);
    EXPECT_GE(a.log_marginal_likelihood(), GpModel::condition(x, y, start).log_marginal_likelihood() - 1e-9);
    const GpOptions o;
    for (double l : a.hyper().log_lengthscales) {
        EXPECT_GE(l, o.log_lengthscale_min);
        EXPECT_LE(l, o.log_lengthscale_max);
    }
}

TEST(Gp, ConstantTargetsFallBack) {
    const auto x = random_x(10, 2, 5);
    const Eigen::VectorXd y = Eigen::VectorXd::Constant(10, 3.5);
    const auto gp = GpModel::fit(x, y, GpOptions{}, 1);
    EXPECT_TRUE(gp.degenerate());
    const auto p = gp.predict(Eigen::VectorXd::Constant(2, 0.3));
    EXPECT_DOUBLE_EQ(p.mean, 3.5);
    EXPECT_DOUBLE_EQ(p.variance, 0.0);
}

TEST(Gp, ExtendMatchesCondition) {
    const auto x = random_x(40, 3, 6);
    const auto y = branin_like(x);
    const auto fitted = GpModel::fit(x.topRows(20), y.head(20), GpOptions{}, 3);
    GpModel grown = fitted;
    CandidatePosterior post(random_x(200, 3, 7));
    Eigen::VectorXd m0, v0;
    post.predict(grown, m0, v0);
    for (int n = 21; n <= 40; ++n) ASSERT_TRUE(grown.extend(x.row(n - 1), y.head(n)));
    const auto direct = GpModel::condition(x, y, fitted.hyper());
    Eigen::VectorXd m1, v1, m2, v2;
    post.predict(grown, m1, v1);
    direct.predict(random_x(200, 3, 7), m2, v2);
    EXPECT_LT((m1 - m2).cwiseAbs().maxCoeff(), 1e-8);
    EXPECT_LT((v1 - v2).cwiseAbs().maxCoeff(), 1e-8);
    EXPECT_NEAR(grown.log_marginal_likelihood(), direct.log_marginal_likelihood(), 1e-6);
}

TEST(Gp, RejectsBadInput) {
    EXPECT_THROW(GpModel::fit(Eigen::MatrixXd(1, 2), Eigen::VectorXd(1), GpOptions{}, 1), ModelError);
    EXPECT_THROW(GpModel::fit(Eigen::MatrixXd(3, 2), Eigen::VectorXd(2), GpOptions{}, 1), ModelError);
}

TEST(Optim, NelderMeadFindsQuadraticMinimum) {
    const auto r = nelder_mead(
        [](const std::vector<double>& v) { return (v[0] - 1) * (v[0] - 1) + 10 * (v[1] + 2) * (v[1] + 2); }, {0, 0},
        0.5, 2000, 1e-14);
    EXPECT_NEAR(r.x[0], 1.0, 1e-4);
    EXPECT_NEAR(r.x[1], -2.0, 1e-4);
    EXPECT_LE(r.evaluations, 2000u);
}

TEST(Optim, NormalQuantile) {
    EXPECT_NEAR(normal_quantile(0.5), 0.0, 1e-12);
    EXPECT_NEAR(normal_quantile(0.975), 1.959963984540054, 1e-9);
    EXPECT_NEAR(normal_quantile(0.025), -1.959963984540054, 1e-9);
    EXPECT_NEAR(normal_quantile(1e-6), -4.753424308822899, 1e-7);
}
