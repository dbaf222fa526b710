// tests/laws_test.cpp
#include "elmsim/laws.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>

using namespace elmsim;

namespace {

// Frozen values computed offline with 40-digit arithmetic (mpmath).
constexpr double kGammaS6Beta1 = 4.957504353332716846e-6;   // 0.002 e^-6
constexpr double kGammaS3Beta3 = 7.357588823428846432e-4;   // 0.002 e^-1
constexpr double kTauS2 = 1.735758882342884643;             // 1 + 2 e^-1
constexpr double kPow998_1000 = 0.1350645224466836052;      // 0.998^1000
constexpr double kPow998_200 = 0.6700516137378227304;       // 0.998^200
constexpr double kEffortS1Pr2 = 2.213061319425266847;       // 1 + 2 e^-1/2
constexpr double kEffortS1Pr1 = 2.228096129616972788;       // 1 + 1.5 e^-1/5

const ForgettingLaw kPr1Forget{0.002, 1.0, DecayMode::PerStep, 0.001};
const EffortLaw kPr1Effort{1.0, 1.5, 5.0};
const EffortLaw kPr2Effort{1.0, 2.0, 2.0};

}  // namespace

TEST(ForgettingLawTest, GammaValues) {
    EXPECT_DOUBLE_EQ(gamma_of(0, kPr1Forget), 0.002);
    EXPECT_NEAR(gamma_of(6, kPr1Forget), kGammaS6Beta1, 1e-12 * kGammaS6Beta1);
    ForgettingLaw beta3{0.002, 3.0, DecayMode::PerStep, 0.005};
    EXPECT_NEAR(gamma_of(3, beta3), kGammaS3Beta3, 1e-12 * kGammaS3Beta3);
}

TEST(ForgettingLawTest, StrictlyDecreasingTowardZero) {
    for (double beta : {1.0, 1.5, 3.0}) {
        ForgettingLaw law{0.002, beta, DecayMode::PerStep, 0.005};
        for (std::uint32_t s = 0; s < 200; ++s) {
            EXPECT_LT(gamma_of(s + 1, law), gamma_of(s, law));
            EXPECT_GT(gamma_of(s, law), 0.0);
        }
        EXPECT_LT(gamma_of(2000, law), 1e-200);
    }
}

TEST(ForgettingLawTest, ValidateRejectsOutOfRange) {
    EXPECT_THROW((ForgettingLaw{0.0, 1.0, DecayMode::PerStep, 1.0}.validate()), ConfigError);
    EXPECT_THROW((ForgettingLaw{1.0, 1.0, DecayMode::PerStep, 1.0}.validate()), ConfigError);
    EXPECT_THROW((ForgettingLaw{0.1, 0.0, DecayMode::PerStep, 1.0}.validate()), ConfigError);
    EXPECT_THROW((ForgettingLaw{0.1, 1.0, DecayMode::PerStep, -1.0}.validate()), ConfigError);
    EXPECT_NO_THROW(kPr1Forget.validate());
}

TEST(EffortLawTest, TauValues) {
    EXPECT_DOUBLE_EQ(tau_of(0, kPr1Effort), 2.5);
    EXPECT_NEAR(tau_of(2, kPr2Effort), kTauS2, 1e-12 * kTauS2);
    EXPECT_NEAR(tau_of(400, kPr1Effort), 1.0, 1e-15);
}

TEST(EffortLawTest, StrictlyDecreasing) {
    for (std::uint32_t s = 0; s < 100; ++s) {
        EXPECT_LT(tau_of(s + 1, kPr1Effort), tau_of(s, kPr1Effort));
        EXPECT_GT(tau_of(s, kPr1Effort), kPr1Effort.tau_inf);
    }
    EXPECT_THROW((EffortLaw{0.0, 1.0, 1.0}.validate()), ConfigError);
    EXPECT_THROW((EffortLaw{1.0, -1.0, 1.0}.validate()), ConfigError);
    EXPECT_THROW((EffortLaw{1.0, 1.0, 0.0}.validate()), ConfigError);
}

TEST(DecayStepTest, PerStepIgnoresDtMagnitude) {
    ElementState st{0, 1.0};
    EXPECT_DOUBLE_EQ(decay_step(st, kPr1Forget, 0.001).z, 0.998);
    EXPECT_DOUBLE_EQ(decay_step(st, kPr1Forget, 5.0).z, 0.998);
    EXPECT_EQ(decay_step(st, kPr1Forget, 0.001).s, 0u);
}

TEST(DecayStepTest, PerStepThousandStepsMatchesOracle) {
    ElementState st{0, 1.0};
    for (int i = 0; i < 1000; ++i) st = decay_step(st, kPr1Forget, 0.001);
    EXPECT_NEAR(st.z, kPow998_1000, 1e-12);
}

TEST(DecayStepTest, ContinuousRate) {
    ForgettingLaw law{0.002, 3.0, DecayMode::ContinuousRate, 0.005};
    EXPECT_DOUBLE_EQ(rate_of(0, law), 0.4);
    EXPECT_NEAR(decay_step({0, 1.0}, law, 0.005).z, 0.998, 1e-15);
    EXPECT_NEAR(decay_step({0, 1.0}, law, 0.0025).z, 0.999, 1e-15);
}

TEST(DecayStepTest, RejectsBadStep) {
    EXPECT_THROW(decay_step({0, 1.0}, kPr1Forget, 0.0), ConfigError);
    EXPECT_THROW(decay_step({0, 1.0}, kPr1Forget, -1.0), ConfigError);
    ForgettingLaw law{0.002, 3.0, DecayMode::ContinuousRate, 0.005};
    EXPECT_THROW(decay_step({0, 1.0}, law, 2.5), ConfigError);  // lambda*dt = 1
    EXPECT_NO_THROW(decay_step({0, 1.0}, law, 2.4));
}

TEST(DecayStepTest, NeverIncreasesNorGoesNegative) {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> z(0.0, 1.0);
    std::uniform_real_distribution<double> g(1e-9, 0.999);
    for (int i = 0; i < 10000; ++i) {
        ForgettingLaw law{g(rng), 1.0 + (rng() % 5), DecayMode::PerStep, 0.01};
        ElementState st{static_cast<std::uint32_t>(rng() % 30), z(rng)};
        const auto next = decay_step(st, law, 0.01);
        EXPECT_LE(next.z, st.z);
        EXPECT_GE(next.z, 0.0);
    }
}

TEST(ClosedFormDecayTest, Examples) {
    EXPECT_DOUBLE_EQ(closed_form_decay(1.0, 0.002, 0), 1.0);
    EXPECT_NEAR(closed_form_decay(1.0, 0.002, 200), kPow998_200, 1e-13);
    EXPECT_DOUBLE_EQ(closed_form_decay(0.5, 0.5, 1), 0.25);
}

TEST(ClosedFormDecayTest, AgreesWithRepeatedStepping) {
    for (double gamma : {0.002, 0.002 * std::exp(-2.0), 0.002 * std::exp(-10.0 / 3.0), 0.3}) {
        ForgettingLaw law{gamma, 1.0, DecayMode::PerStep, 1.0};  // s stays 0, so gamma_of == gamma0
        ElementState st{0, 0.8};
        std::uint64_t n = 0;
        for (std::uint64_t target : {1ull, 10ull, 1000ull, 100000ull}) {
            for (; n < target; ++n) st = decay_step(st, law, 1.0);
            const double expect = closed_form_decay(0.8, gamma, n);
            if (expect > 1e-300) EXPECT_NEAR(st.z / expect, 1.0, 1e-12) << "gamma=" << gamma << " n=" << n;
        }
    }
}

TEST(AccessTest, Examples) {
    auto [a, effort_a] = access({0, 0.3}, kPr2Effort);
    EXPECT_EQ(a, (ElementState{1, 1.0}));
    EXPECT_NEAR(effort_a, kEffortS1Pr2, 1e-14);

    auto [b, effort_b] = access({5, 1.0}, kPr2Effort);
    EXPECT_EQ(b, (ElementState{6, 1.0}));
    EXPECT_NEAR(effort_b, tau_of(6, kPr2Effort), 0.0);

    auto [c, effort_c] = access({0, 0.0}, kPr1Effort);
    EXPECT_EQ(c, (ElementState{1, 1.0}));
    EXPECT_NEAR(effort_c, kEffortS1Pr1, 1e-14);
}

TEST(AccessTest, EffortUsesIncrementedCount) {
    for (std::uint32_t s = 0; s < 50; ++s) {
        auto [next, effort] = access({s, 0.5}, kPr2Effort);
        EXPECT_EQ(next.s, s + 1);
        EXPECT_EQ(next.z, 1.0);
        EXPECT_EQ(effort, tau_of(s + 1, kPr2Effort));
    }
}

TEST(DecayModeTest, ParsesNames) {
    EXPECT_EQ(decay_mode_from_string("perstep"), DecayMode::PerStep);
    EXPECT_EQ(decay_mode_from_string("continuous"), DecayMode::ContinuousRate);
    EXPECT_THROW(decay_mode_from_string("euler"), ConfigError);
    EXPECT_EQ(to_string(DecayMode::ContinuousRate), "continuous");
}
