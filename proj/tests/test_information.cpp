#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "fixtures.hpp"
#include "oracles.hpp"
#include "rdts/compression.hpp"
#include "rdts/error.hpp"
#include "rdts/information.hpp"

using namespace rdts;
using fixtures::make;

TEST(Entropy, ClosedForms) {
    std::vector<double> half{0.5, 0.5}, point{0.0, 1.0}, skew{0.25, 0.75};
    EXPECT_NEAR(entropy(half), std::numbers::ln2, 1e-15);
    EXPECT_EQ(entropy(point), 0.0);
    EXPECT_NEAR(entropy(skew), 0.5623351446188083, 1e-15);
    std::vector<double> bad{0.5, 0.6};
    EXPECT_THROW(entropy(bad), Error);
}

TEST(Entropy, KlDivergence) {
    std::vector<double> p{0.5, 0.5}, q{0.9, 0.1}, zero{1.0, 0.0};
    EXPECT_NEAR(kl_divergence(p, q), 0.5 * std::log(0.5 / 0.9) + 0.5 * std::log(0.5 / 0.1), 1e-15);
    EXPECT_EQ(kl_divergence(p, p), 0.0);
    EXPECT_TRUE(std::isinf(kl_divergence(p, zero)));
}

TEST(MutualInformation, SmallJoints) {
    JointTable indep(2, 3);
    const double pu[2] = {0.3, 0.7}, pv[3] = {0.2, 0.5, 0.3};
    for (int u = 0; u < 2; ++u)
        for (int v = 0; v < 3; ++v) indep.at(u, v) = pu[u] * pv[v];
    EXPECT_NEAR(mutual_information(indep), 0.0, 1e-15);

    JointTable copy(2, 2);
    copy.at(0, 0) = copy.at(1, 1) = 0.5;
    EXPECT_NEAR(mutual_information(copy), std::numbers::ln2, 1e-15);

    JointTable coin(2, 2);
    coin.at(0, 0) = 0.5 * 0.8;
    coin.at(0, 1) = 0.5 * 0.2;
    coin.at(1, 0) = 0.5 * 0.2;
    coin.at(1, 1) = 0.5 * 0.8;
    EXPECT_NEAR(mutual_information(coin), 0.19274475702175742, 1e-12);
}

TEST(MutualInformation, MatchesEntropyIdentity) {
    auto rng = make_stream(31);
    std::exponential_distribution<double> ex(1.0);
    for (int rep = 0; rep < 100; ++rep) {
        JointTable j(3, 4);
        double s = 0;
        for (auto & x : j.p) s += (x = ex(rng));
        for (auto & x : j.p) x /= s;
        EXPECT_NEAR(mutual_information(j), oracle::mutual_information(j.p, 3, 4), 1e-9);
    }
}

TEST(InfoRatio, PointMassIsDegenerate) {
    auto inst = make({{1, 0}, {0, 1}}, {{1, 0}, {0, 1}});
    auto r = ts_info_ratio(inst, BeliefState::point_mass(2, 1));
    EXPECT_EQ(r.numerator, 0.0);
    EXPECT_EQ(r.denominator, 0.0);
    EXPECT_EQ(r.ratio, 0.0);
    EXPECT_TRUE(r.degenerate);
}

TEST(InfoRatio, DegenerateInformationIsAnError) {
    EXPECT_THROW(make_ratio_report(1e-3, 0.0), Error);
    EXPECT_NO_THROW(make_ratio_report(1e-10, 1e-13));
}

TEST(InfoRatio, HandBuiltTwoByTwo) {
    auto inst = make({{1, 0}, {0, 1}}, {{0.8, 0.1}, {-0.2, 0.9}});
    auto b = BeliefState({0.35, 0.65});
    auto ours = ts_info_ratio(inst, b);
    auto ref = oracle::ts_ratio(inst, fixtures::probs(b));
    EXPECT_NEAR(ours.numerator, ref.gap * ref.gap, 1e-12);
    EXPECT_NEAR(ours.denominator, ref.info, 1e-12);
    EXPECT_NEAR(ours.ratio, ref.gap * ref.gap / ref.info, 1e-9);
}

TEST(InfoRatio, DecompositionAgreesWithFullJoint) {
    auto rng = make_stream(77);
    for (int rep = 0; rep < 40; ++rep) {
        auto inst = sample_instance(rng, 2, 3, 4, OutcomeModel::logistic(5.0));
        auto b = BeliefState::dirichlet(4, rng);
        auto ref = oracle::ts_ratio(inst, fixtures::probs(b));
        EXPECT_NEAR(ts_information(inst, b), ref.info, 1e-12);
        EXPECT_NEAR(ts_regret_gap(inst, b), ref.gap, 1e-12);
        const auto q = optimal_action_distribution(b, inst);
        double decomposed = 0;
        for (std::size_t a = 0; a < 3; ++a) decomposed += q[a] * information_about_parameter(inst, b, a);
        EXPECT_NEAR(decomposed, ref.info, 1e-12);
    }
}

TEST(InfoRatio, LinearCeiling) {
    auto rng = make_stream(5);
    for (int rep = 0; rep < 200; ++rep) {
        const std::size_t d = 1 + rep % 5;
        auto inst = sample_instance(rng, d, 8, 8, OutcomeModel::linear_binary());
        auto b = BeliefState::dirichlet(8, rng);
        EXPECT_LE(ts_info_ratio(inst, b).ratio, d / 2.0 + 1e-9);
    }
}

TEST(CompressedRatio, SingletonCellsReduceToVanilla) {
    auto rng = make_stream(9);
    for (int rep = 0; rep < 20; ++rep) {
        auto inst = sample_instance(rng, 3, 5, 6, OutcomeModel::logistic(2.0));
        auto b = BeliefState::dirichlet(6, rng);
        auto rep_ = build_representation(inst, b, Partition::singletons(6));
        auto c = compressed_info_ratio(inst, b, rep_);
        auto v = ts_info_ratio(inst, b);
        EXPECT_NEAR(c.numerator, v.numerator, 1e-12);
        EXPECT_NEAR(c.denominator, v.denominator, 1e-12);
        EXPECT_NEAR(c.ratio, v.ratio, 1e-9);
    }
}

TEST(CompressedRatio, MatchesFullEnumerationOnTinyInstance) {
    auto inst = make({{1, 0}, {0, 1}, {-0.6, 0.8}}, {{0.9, 0.1}, {0.7, 0.3}, {-0.5, 0.7}});
    BeliefState b({0.2, 0.5, 0.3});
    Partition p({0, 0, 1}, 0.3);
    auto rep = build_representation(inst, b, p);
    auto ours = compressed_info_ratio(inst, b, rep);
    auto ref = oracle::compressed_ratio(inst, fixtures::probs(b), rep);
    EXPECT_NEAR(ours.numerator, ref.gap * ref.gap, 1e-12);
    EXPECT_NEAR(ours.denominator, ref.info, 1e-12);
}

TEST(CompressedRatio, RejectsInconsistentRepresentation) {
    auto inst = make({{1, 0}, {0, 1}}, {{1, 0}, {0, 1}});
    BeliefState b({0.5, 0.5});
    auto rep = build_representation(inst, b, Partition::singletons(2));
    rep.cell_mass = {0.9, 0.1};
    EXPECT_THROW(compressed_info_ratio(inst, b, rep), Error);
    rep = build_representation(inst, b, Partition::singletons(2));
    rep.cells[0].idx1 = 1;
    EXPECT_THROW(compressed_info_ratio(inst, b, rep), Error);
}

TEST(StatisticInfo, SingleCellAndIdentity) {
    auto inst = make({{1, 0}}, {{1, 0}, {-1, 0}});  // outcome reveals theta exactly
    BeliefState b({0.3, 0.7});
    EXPECT_EQ(info_gain_about_statistic(inst, b, Partition::single_cell(2, 1.0), 0), 0.0);
    std::vector<double> bp = fixtures::probs(b);
    EXPECT_NEAR(info_gain_about_statistic(inst, b, Partition::singletons(2), 0), entropy(bp), 1e-15);
}

TEST(StatisticInfo, MatchesExplicitJoint) {
    auto rng = make_stream(12);
    for (int rep = 0; rep < 30; ++rep) {
        auto inst = sample_instance(rng, 2, 3, 6, OutcomeModel::logistic(3.0));
        auto b = BeliefState::dirichlet(6, rng);
        Partition p({0, 1, 0, 2, 1, 2}, 1.0);
        for (std::size_t a = 0; a < 3; ++a) {
            std::vector<double> joint(3 * 2, 0.0);
            for (std::size_t i = 0; i < 6; ++i) {
                std::size_t y = 0;
                for (const auto & [value, prob] : oracle::outcomes(inst, a, i))
                    joint[p.cell_of(i) * 2 + y++] += b[i] * prob;
            }
            EXPECT_NEAR(info_gain_about_statistic(inst, b, p, a), oracle::mutual_information(joint, 3, 2), 1e-12);
        }
    }
}
