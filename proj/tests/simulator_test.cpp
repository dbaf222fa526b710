// tests/simulator_test.cpp
#include "elmsim/simulator.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <set>

#include "elmsim/experiments.hpp"

using namespace elmsim;

namespace {

SimulationConfig small_config(BusyPolicy busy) {
    SimulationConfig c;
    c.n = 3;
    c.dt = 0.01;
    c.t_start = 0.0;
    c.t_end = 20.0;
    c.forgetting = {0.002, 3.0, DecayMode::PerStep, 0.01};
    c.effort = {1.0, 2.0, 2.0};
    c.schedule.windows = {{0.0, 20.0}};
    c.policy = FixedTimes{};
    c.busy = busy;
    c.initial_z = 1.0;
    return c;
}

}  // namespace

TEST(EngineTest, SkipTimeJumpsWithoutDecay) {
    Engine e(small_config(BusyPolicy::SkipTime));
    e.begin_step();
    const double before = e.time();
    e.fire(2);
    const double tau = tau_of(1, e.config().effort);
    EXPECT_NEAR(e.time(), before + tau, 1e-12);
    EXPECT_EQ(e.states()[1].z, 1.0);
    EXPECT_EQ(e.states()[0].z, 1.0);  // jump itself applies no decay
    EXPECT_FALSE(e.busy());
    e.end_step();
    EXPECT_EQ(e.states()[0].z, 1.0 - 0.002);
}

TEST(EngineTest, FreezeActiveExemptsActiveElement) {
    Engine e(small_config(BusyPolicy::FreezeActive));
    e.begin_step();
    e.fire(3);
    ASSERT_TRUE(e.busy());
    EXPECT_EQ(e.active(), 3u);
    const double g_other = gamma_of(0, e.config().forgetting);
    for (int k = 0; k < 50; ++k) {
        e.end_step();
        e.begin_step();
    }
    e.end_step();
    EXPECT_EQ(e.states()[2].z, 1.0);
    EXPECT_NEAR(e.states()[0].z, std::pow(1.0 - g_other, 51), 1e-14);
}

TEST(EngineTest, DecayAllIncludesActiveElement) {
    Engine e(small_config(BusyPolicy::DecayAll));
    e.begin_step();
    e.fire(1);
    e.end_step();
    EXPECT_EQ(e.states()[0].z, 1.0 - gamma_of(1, e.config().forgetting));
    EXPECT_EQ(e.states()[1].z, 1.0 - gamma_of(0, e.config().forgetting));
}

TEST(EngineTest, BusyUntilAndRelease) {
    Engine e(small_config(BusyPolicy::FreezeActive));
    e.begin_step();
    const double t0 = e.time();
    e.fire(1);
    const double until = *e.busy_until();
    EXPECT_NEAR(until, t0 + tau_of(1, e.config().effort), 1e-12);
    EXPECT_THROW(e.fire(2), ConfigError);
    while (e.time() < until) {
        e.end_step();
        e.begin_step();
    }
    EXPECT_FALSE(e.busy());
    EXPECT_EQ(e.active(), 0u);
    EXPECT_TRUE(e.can_access());
}

TEST(RunTest, Pr1SixthAccessThenSlowForgetting) {
    const auto cfg = preset_pr1();
    const auto result = run(cfg);
    ASSERT_EQ(result.accesses.size(), 6u);
    const double t6 = result.accesses.back().t;
    const auto& after = metrics_at(result.trajectory, t6 + result.accesses.back().effort);
    EXPECT_NEAR(after.mean_gamma, 4.957504353332717e-6, 1e-15);
    for (const auto& s : result.trajectory) {
        if (s.t > t6 && s.t <= t6 + 5.0) ASSERT_GT(s.z_total, 0.97);
    }
}

TEST(RunTest, EmptyScheduleIsPureDecay) {
    SimulationConfig c = preset_pr2(4);
    c.schedule.windows.clear();
    c.initial_z = 0.9;
    c.t_end = 100;
    const auto r = run(c);
    EXPECT_TRUE(r.accesses.empty());
    for (std::size_t i = 1; i < r.trajectory.size(); ++i) {
        ASSERT_LE(r.trajectory[i].z_total, r.trajectory[i - 1].z_total);
    }
    const auto steps = r.trajectory.size() - 1;
    EXPECT_NEAR(r.trajectory.back().z_total, 4 * closed_form_decay(0.9, 0.002, steps), 1e-12);
}

TEST(RunTest, Pr3LessonsRaiseBreaksLower) {
    const auto r = run(preset_pr3(1));
    const auto& windows = preset_pr3().schedule.windows;
    double prev_end = 0.0;
    for (std::size_t i = 0; i < windows.size(); ++i) {
        const double z_start = metrics_at(r.trajectory, windows[i].start).z_total;
        const double z_end = metrics_at(r.trajectory, windows[i].end).z_total;
        EXPECT_GT(z_end, z_start) << "lesson " << i;
        if (i > 0) EXPECT_LT(z_start, prev_end) << "break before lesson " << i;
        prev_end = z_end;
    }
}

TEST(RunTest, DeterministicGivenSeed) {
    const auto a = run(preset_pr2(7, 11));
    const auto b = run(preset_pr2(7, 11));
    ASSERT_EQ(a.trajectory.size(), b.trajectory.size());
    for (std::size_t i = 0; i < a.trajectory.size(); ++i) {
        ASSERT_EQ(a.trajectory[i].t, b.trajectory[i].t);
        ASSERT_EQ(a.trajectory[i].z_total, b.trajectory[i].z_total);
        ASSERT_EQ(a.trajectory[i].active, b.trajectory[i].active);
    }
    const auto c = run(preset_pr2(7, 12));
    EXPECT_NE(a.trajectory.back().z_total, c.trajectory.back().z_total);
}

TEST(RunTest, ElementsDecayBetweenAccessesAndResetToOne) {
    SimulationConfig c = preset_pr2(5, 3);
    c.t_end = 120;
    c.record_per_element = true;
    const auto r = run(c);
    std::set<double> access_times;
    for (const auto& a : r.accesses) access_times.insert(a.t);
    for (std::size_t k = 1; k < r.trajectory.size(); ++k) {
        const auto& prev = r.trajectory[k - 1];
        const auto& cur = r.trajectory[k];
        for (std::size_t i = 0; i < cur.per_element_z.size(); ++i) {
            if (cur.per_element_z[i] > prev.per_element_z[i]) {
                // only an access at this step may raise Z, and only under freeze it stays exactly 1
                ASSERT_TRUE(access_times.count(cur.t)) << "t=" << cur.t;
                ASSERT_EQ(cur.per_element_z[i], 1.0);
            }
        }
    }
}

TEST(RunTest, SkipTimeSingleElementMatchesClosedForm) {
    const auto cfg = preset_pr1();
    const auto r = run(cfg);
    // Between access k and k+1 the element decays once per recorded step.
    for (std::size_t k = 0; k + 1 < r.accesses.size(); ++k) {
        const double t_after = r.accesses[k].t + r.accesses[k].effort;
        std::size_t first = 0;
        while (r.trajectory[first].t < t_after - 1e-9) ++first;
        const double gamma = gamma_of(static_cast<std::uint32_t>(k + 1), cfg.forgetting);
        for (std::size_t j = first; j < r.trajectory.size() && r.trajectory[j].t < r.accesses[k + 1].t - 1e-9; ++j) {
            ASSERT_NEAR(r.trajectory[j].z_total / closed_form_decay(1.0, gamma, j - first + 1), 1.0, 1e-12);
        }
    }
}

TEST(RunTest, MeanGammaNonIncreasingAndBounds) {
    const auto cfg = preset_pr2(10, 5);
    const auto r = run(cfg);
    for (std::size_t i = 1; i < r.trajectory.size(); ++i) {
        const auto& s = r.trajectory[i];
        ASSERT_LE(s.mean_gamma, r.trajectory[i - 1].mean_gamma);
        ASSERT_GE(s.z_total, 0.0);
        ASSERT_LE(s.z_total, cfg.n);
        ASSERT_GT(s.mean_tau, cfg.effort.tau_inf);
        ASSERT_LE(s.mean_tau, cfg.effort.tau_inf + cfg.effort.a);
        ASSERT_GT(s.mean_gamma, 0.0);
        ASSERT_LE(s.mean_gamma, cfg.forgetting.gamma0);
    }
}

TEST(RunTest, NearZeroForgettingConservesAccessedElements) {
    SimulationConfig c = preset_pr2(20, 8);
    c.forgetting.gamma0 = 1e-15;
    c.schedule.windows = {{50.0, 80.0}};
    c.t_end = 120;
    const auto r = run(c);
    std::set<std::uint32_t> distinct;
    for (const auto& a : r.accesses) distinct.insert(a.element);
    ASSERT_GT(distinct.size(), 5u);
    EXPECT_NEAR(metrics_at(r.trajectory, 100).z_total, static_cast<double>(distinct.size()), 1e-6);
}

TEST(RunTest, ContinuousModeConvergesInDt) {
    SimulationConfig c = preset_pr2(1);
    c.schedule.windows.clear();
    c.initial_z = 1.0;
    c.t_start = 0;
    c.t_end = 1000;
    c.forgetting = {0.002, 3.0, DecayMode::ContinuousRate, 0.1};  // lambda = 0.02 per UEV
    c.dt = 0.5;  // lambda*dt = 1e-2
    c.sample_every = 1000000;
    const double coarse = run(c).final_states[0].z;
    c.dt = 0.25;
    const double fine = run(c).final_states[0].z;
    EXPECT_LE(std::abs(coarse - fine), 5 * 0.02 * 0.5);
    EXPECT_NEAR(fine, std::exp(-0.02 * 1000), 1e-3);
}

TEST(RunTest, RejectsInvalidConfig) {
    SimulationConfig c = preset_pr1();
    c.policy = FixedTimes{{{3.0, 2}}};
    EXPECT_THROW(run(c), ConfigError);
    c = preset_pr1();
    c.dt = 0;
    EXPECT_THROW(run(c), ConfigError);
    c = preset_pr1();
    c.t_end = c.t_start;
    EXPECT_THROW(run(c), ConfigError);
    c = preset_pr1();
    c.sample_every = 0;
    EXPECT_THROW(run(c), ConfigError);
    c = preset_pr2(3);
    c.n = 0;
    EXPECT_THROW(run(c), ConfigError);
    c = preset_pr2(3);
    c.forgetting.mode = DecayMode::ContinuousRate;
    c.forgetting.dt_ref = 0.00001;  // lambda*dt = 1
    EXPECT_THROW(run(c), ConfigError);
}

TEST(RunTest, PresetSampleBudget) {
    for (const auto& cfg : {preset_pr1(), preset_pr2(10), preset_pr3()}) {
        EXPECT_LE(cfg.step_count() / cfg.sample_every, 200000u);
    }
}

TEST(MetricsAtTest, FloorSemantics) {
    Trajectory tr(3);
    tr[0].t = 0.0, tr[0].z_total = 1;
    tr[1].t = 1.0, tr[1].z_total = 2;
    tr[2].t = 2.0, tr[2].z_total = 3;
    EXPECT_EQ(metrics_at(tr, 1.0).z_total, 2);
    EXPECT_EQ(metrics_at(tr, 1.7).z_total, 2);
    EXPECT_EQ(metrics_at(tr, 99).z_total, 3);
    EXPECT_THROW(metrics_at(tr, -0.1), std::out_of_range);
}

TEST(MetricsAtTest, SweepMeasurementSample) {
    const auto r = run(sweep_config(12));
    const auto& s = metrics_at(r.trajectory, 700.0);
    EXPECT_LE(s.t, 700.0);
    EXPECT_GT(s.t, 700.0 - 0.005);
}
