#include <gtest/gtest.h>

#include <cmath>

#include "fixtures.hpp"
#include "oracles.hpp"
#include "rdts/error.hpp"
#include "rdts/model.hpp"

using namespace rdts;
using fixtures::make;

TEST(Model, LinearMeanIsHalfInnerProduct) {
    auto inst = make({{1, 0}}, {{0.6, 0.8}});
    EXPECT_DOUBLE_EQ(mean_reward(inst, 0, 0), 0.3);
}

TEST(Model, LogisticMeans) {
    auto flat = make({{1, 0}}, {{0, 1}}, OutcomeModel::logistic(7.0));
    EXPECT_DOUBLE_EQ(mean_reward(flat, 0, 0), 0.5);
    auto steep = make({{1, 0}}, {{0.5, 0}}, OutcomeModel::logistic(10.0));
    EXPECT_NEAR(mean_reward(steep, 0, 0), std::exp(5.0) / (1.0 + std::exp(5.0)), 1e-15);
    EXPECT_NEAR(mean_reward(steep, 0, 0), 0.993307, 1e-6);
}

TEST(Model, BestActionAndTieBreak) {
    auto inst = make({{1, 0}, {0, 1}}, {{1, 0}});
    EXPECT_EQ(best_action(inst, 0), 0u);
    auto tied = make({{1, 0}, {1, 0}}, {{0.3, -0.2}, {-1, 0}});
    EXPECT_EQ(best_action(tied, 0), 0u);
    EXPECT_EQ(best_action(tied, 1), 0u);
}

TEST(Model, BestActionMatchesScan) {
    auto rng = make_stream(11);
    for (int rep = 0; rep < 50; ++rep) {
        auto inst = sample_instance(rng, 3, 10, 5, OutcomeModel::logistic(2.0));
        for (std::size_t i = 0; i < inst.num_params(); ++i) EXPECT_EQ(best_action(inst, i), oracle::best(inst, i));
    }
}

TEST(Model, IndexChecks) {
    auto inst = make({{1, 0}}, {{0, 1}});
    EXPECT_THROW(mean_reward(inst, 1, 0), Error);
    EXPECT_THROW(best_action(inst, 3), Error);
    try {
        outcome_distribution(inst, 0, 9);
        FAIL();
    } catch (const Error & e) {
        EXPECT_EQ(e.code(), ErrorCode::IndexOutOfRange);
    }
}

TEST(Model, RejectsVectorsOutsideBall) {
    EXPECT_THROW(make({{1.0, 0.1}}, {{0, 1}}), Error);
    EXPECT_NO_THROW(make({{1.0 + 5e-13, 0}}, {{0, 1}}));
    EXPECT_THROW(make({{1, 0}}, {{0, 1, 0}}), Error);
}

TEST(Model, OutcomeDistributions) {
    auto lin = make({{1, 0}}, {{0, 1}});
    auto pmf = outcome_distribution(lin, 0, 0);
    ASSERT_EQ(pmf.values.size(), 2u);
    EXPECT_DOUBLE_EQ(pmf.values[0], -0.5);
    EXPECT_DOUBLE_EQ(pmf.probs[0], 0.5);
    EXPECT_DOUBLE_EQ(pmf.probs[1], 0.5);

    auto logi = make({{1, 0}}, {{1, 0}}, OutcomeModel::logistic(1.0));
    pmf = outcome_distribution(logi, 0, 0);
    EXPECT_NEAR(pmf.probs[1], 0.731059, 1e-6);
    EXPECT_NEAR(pmf.probs[0], 0.268941, 1e-6);

    // Choose theta so that phi(a'theta) = 0.4 exactly under the logistic link.
    const double x = std::log(0.4 / 0.6);
    auto glm = make({{1}}, {{x}}, OutcomeModel::glm(Link{LinkKind::Logistic, 1.0}, 0.1));
    pmf = outcome_distribution(glm, 0, 0);
    EXPECT_NEAR(pmf.values[0], 0.3, 1e-12);
    EXPECT_NEAR(pmf.values[1], 0.5, 1e-12);
    EXPECT_DOUBLE_EQ(pmf.probs[0], 0.5);
}

TEST(Model, GlmRewardRangeChecked) {
    EXPECT_THROW(make({{1}}, {{1}, {-1}}, OutcomeModel::glm(Link{LinkKind::Logistic, 50.0}, 0.2)), Error);
}

TEST(Model, LinkInverseRoundTrips) {
    for (auto kind : {LinkKind::Logistic, LinkKind::Probit}) {
        Link link{kind, 2.5};
        for (double x : {-0.9, -0.1, 0.0, 0.3, 0.8}) EXPECT_NEAR(link.inverse(link(x)), x, 1e-10);
    }
    EXPECT_THROW(Link{}.inverse(1.0), Error);
}

TEST(Model, SharedAlphabetAndLikelihoods) {
    auto inst = make({{1, 0}}, {{0.2, 0}, {-0.4, 0}});
    ASSERT_EQ(inst.num_outcomes(0), 2u);
    EXPECT_DOUBLE_EQ(inst.likelihood_row(0, 0)[1], 0.6);
    EXPECT_DOUBLE_EQ(inst.likelihood_row(0, 1)[1], 0.3);
    EXPECT_EQ(inst.outcome_index(0, 0.5), 1u);
    EXPECT_FALSE(inst.outcome_index(0, 0.25).has_value());
}

TEST(Model, SampleInstanceInvariants) {
    auto rng = make_stream(5);
    auto inst = sample_instance(rng, 2, 1, 1, OutcomeModel::linear_binary());
    EXPECT_LE(norm(inst.actions()[0]), 1.0);
    EXPECT_LE(norm(inst.params()[0]), 1.0);

    auto r1 = make_stream(99), r2 = make_stream(99);
    auto a = sample_instance(r1, 4, 7, 9, OutcomeModel::logistic(3.0));
    auto b = sample_instance(r2, 4, 7, 9, OutcomeModel::logistic(3.0));
    EXPECT_EQ(a.actions().data(), b.actions().data());
    EXPECT_EQ(a.params().data(), b.params().data());
}

TEST(Model, UnitBallSamplerMatchesRejectionSampler) {
    const std::size_t d = 20;
    auto rng = make_stream(2024);
    auto big = sample_instance(rng, d, 100, 100, OutcomeModel::linear_binary());
    for (std::size_t i = 0; i < 100; ++i) {
        EXPECT_LE(norm(big.actions()[i]), 1.0);
        EXPECT_LE(norm(big.params()[i]), 1.0);
    }
    // Rejection from the cube is hopeless in d = 20, so compare norms in d = 4
    // where both samplers are cheap.
    std::vector<double> ours, ref;
    std::mt19937_64 ref_rng(7);
    for (int k = 0; k < 10000; ++k) {
        ours.push_back(norm(sample_unit_ball(rng, 4)));
        auto v = oracle::rejection_ball(ref_rng, 4);
        ref.push_back(norm(v));
    }
    EXPECT_LT(oracle::ks_statistic(ours, ref), 0.1);
}

TEST(Model, MarginSampler) {
    auto rng = make_stream(3);
    auto inst = sample_instance_with_margin(rng, 2, 6, 10, OutcomeModel::logistic(1.0), 0.3);
    EXPECT_GE(inst.margin(), 0.3);
    EXPECT_THROW(sample_instance_with_margin(rng, 2, 3, 2, OutcomeModel::logistic(1.0), 1.5, 50), Error);
}

TEST(Model, SupDerivative) {
    auto logi = OutcomeModel::logistic(2.0);
    EXPECT_DOUBLE_EQ(sup_mean_derivative(logi, -0.3, 0.4), 0.5);
    EXPECT_NEAR(sup_mean_derivative(logi, 0.5, 1.0), 2 * std::exp(1.0) / std::pow(1 + std::exp(1.0), 2), 1e-15);
    EXPECT_DOUBLE_EQ(sup_mean_derivative(OutcomeModel::linear_binary(), -1, 1), 0.5);
}
