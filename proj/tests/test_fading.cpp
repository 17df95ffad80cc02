#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "statage/error.hpp"
#include "statage/fading.hpp"

using namespace statage;
using namespace statage::fading;

namespace {

const FadingConfig& table2() {
    static const FadingConfig cfg{FadingParams{}};
    return cfg;
}

double grid_sum(const FadingConfig& cfg, const std::vector<double>& values) {
    double s = 0.0;
    for (std::size_t i = 0; i < values.size(); ++i) s += cfg.grid().weights()[i] * values[i];
    return s;
}

double power_sum(const FadingConfig& cfg, const std::vector<double>& rates) {
    double s = 0.0;
    for (std::size_t i = 0; i < rates.size(); ++i) s += cfg.grid().weights()[i] * rates[i] / cfg.grid().gains()[i];
    return s;
}

}  // namespace

TEST(Grid, RayleighMasses) {
    const auto& g = table2().grid();
    ASSERT_EQ(g.size(), 2000u);
    double total = 0.0;
    for (double w : g.weights()) {
        EXPECT_GT(w, 0.0);
        total += w;
    }
    EXPECT_NEAR(total, 1.0, 1e-12);
    EXPECT_EQ(g.gains().front(), 1e-3);
    EXPECT_EQ(g.gains().back(), 20.0);
    EXPECT_TRUE(std::is_sorted(g.gains().begin(), g.gains().end()));
    // mpmath, exact cell masses with geometric-midpoint edges
    EXPECT_NEAR(g.mean_inverse_gain(), 6.337881587598096, 1e-11);
}

TEST(Grid, RejectsBadPoints) {
    EXPECT_THROW(ChannelGrid::from_points({1.0, 0.5}, {0.5, 0.5}), DomainError);
    EXPECT_THROW(ChannelGrid::from_points({1.0, 2.0}, {0.5, 0.4}), DomainError);
    EXPECT_THROW(ChannelGrid::from_points({0.0, 2.0}, {0.5, 0.5}), DomainError);
}

TEST(Config, DerivedQuantities) {
    // mpmath: 0.1 / (1e-3 (2^0.1 - 1))
    EXPECT_NEAR(table2().power_budget(), 1393.2726172912966, 1e-9);
    EXPECT_NEAR(table2().normalized_rate(), 0.1 * std::log(2.0), 1e-15);
}

TEST(Config, Validation) {
    FadingParams p;
    p.tx_time_s = 0.2;
    EXPECT_THROW(FadingConfig{p}, ConfigError);
    p = {};
    p.p_bar_w = -1.0;
    EXPECT_THROW(FadingConfig{p}, ConfigError);
    p = {};
    p.p_bar_w = 1e-6;  // even lambda = 1/T everywhere violates the budget
    const FadingConfig starved{p};
    EXPECT_THROW(dinkelbach(10.0, starved), FeasibilityError);
    EXPECT_THROW(solve_inner_given_beta(10.0, -0.1, starved), FeasibilityError);
    EXPECT_THROW(avg_paoi_policy(starved), FeasibilityError);
    EXPECT_THROW(max_paoi_policy(starved), FeasibilityError);
}

TEST(Power, ChannelInversion) {
    // mpmath: 2^0.1 - 1 and twice that
    EXPECT_NEAR(power_for_gain(1.0, table2()), 0.07177346253629317, 1e-15);
    EXPECT_NEAR(power_for_gain(0.5, table2()), 0.14354692507258634, 1e-15);
    FadingParams p;
    p.packet_bits = 0.0;
    EXPECT_EQ(power_for_gain(0.3, FadingConfig{p}), 0.0);
    EXPECT_TRUE(std::isinf(FadingConfig{p}.power_budget()));
    EXPECT_THROW(power_for_gain(0.0, table2()), DomainError);
    // Shannon rate at that power is exactly D / tau
    const double gamma = 0.7;
    const double rate = 1e6 * std::log2(1.0 + power_for_gain(gamma, table2()) * gamma);
    EXPECT_NEAR(rate, 100.0 / 1e-3, 1e-6);
}

TEST(Policy, ThresholdContinuity) {
    const auto& cfg = table2();
    for (double theta : {5.0, 100.0, 600.0}) {
        const double log_beta = -0.5 - theta * 1e-3;
        const auto law = make_policy(theta, log_beta, 0.8, cfg);
        ASSERT_LE(law.gamma1_th, law.gamma2_th);
        if (law.gamma1_th > 0.0 && std::isfinite(law.gamma1_th)) {
            EXPECT_NEAR(policy_rate(law, law.gamma1_th, cfg), cfg.rate_min(), 1e-9 * cfg.rate_min());
        }
        if (std::isfinite(law.gamma2_th)) {
            EXPECT_NEAR(policy_rate(law, law.gamma2_th, cfg), cfg.rate_max(), 1e-9 * cfg.rate_max());
        }
        double prev = 0.0;
        for (int i = 0; i < 400; ++i) {
            const double g = std::pow(10.0, -4.0 + 6.0 * i / 399.0);
            const double r = policy_rate(law, g, cfg);
            EXPECT_GE(r, cfg.rate_min() * (1 - 1e-12));
            EXPECT_LE(r, cfg.rate_max() * (1 + 1e-12));
            EXPECT_GE(r, prev * (1 - 1e-12));
            prev = r;
        }
    }
}

TEST(Policy, LowBranchIsMinimumRate) {
    const auto law = make_policy(100.0, -0.6, 0.8, table2());
    if (law.gamma1_th > 2e-4) EXPECT_EQ(policy_rate(law, law.gamma1_th / 2, table2()), 10.0);
}

TEST(Policy, MiddleBranchIsGainIndependentAtZeroMultiplier) {
    const auto& cfg = table2();
    const auto law = make_policy(300.0, -0.7, 0.0, cfg);
    const double a = policy_rate(law, 0.01, cfg);
    for (double g : {0.1, 1.0, 10.0}) EXPECT_NEAR(policy_rate(law, g, cfg), a, 1e-12 * a);
}

TEST(Inner, PowerActiveAndKkt) {
    const auto& cfg = table2();
    const auto p = solve_inner_given_beta(100.0, -0.3, cfg);
    ASSERT_TRUE(p.law);
    EXPECT_GT(p.law->eta, 0.0);
    EXPECT_LE(std::abs(power_sum(cfg, p.rates) - cfg.power_budget()), 1e-9 * cfg.power_budget());
}

TEST(Inner, InactiveConstraintGivesZeroMultiplier) {
    FadingParams params;
    params.p_bar_w = 100.0;  // 1/tau everywhere fits
    const FadingConfig cfg{params};
    const auto p = solve_inner_given_beta(100.0, -0.3, cfg);
    EXPECT_EQ(p.law->eta, 0.0);
    EXPECT_LE(power_sum(cfg, p.rates), cfg.power_budget());
}

TEST(Inner, DegenerateBoxPinsRate) {
    FadingParams params;
    params.coherence_time_s = params.tx_time_s;
    params.p_bar_w = 100.0;
    const FadingConfig cfg{params};
    const double theta = 50.0;
    const auto p = dinkelbach(theta, cfg);
    for (double r : p.rates) EXPECT_EQ(r, 1000.0);
    EXPECT_NEAR(p.law->log_beta, -theta * cfg.tau(), 1e-12);
}

TEST(Dinkelbach, FixedPointAndOptimality) {
    const auto& cfg = table2();
    for (double theta : {10.0, 100.0, 621.5, 3000.0}) {
        const auto p = dinkelbach(theta, cfg);
        ASSERT_TRUE(p.law);
        EXPECT_LE(p.iterations, 50);
        // beta = E[lambda] / E[lambda e^{theta/lambda}]
        std::vector<double> tilted(p.rates.size());
        for (std::size_t i = 0; i < p.rates.size(); ++i) tilted[i] = p.rates[i] * std::exp(theta / p.rates[i]);
        const double beta = grid_sum(cfg, p.rates) / grid_sum(cfg, tilted);
        EXPECT_NEAR(p.law->log_beta, std::log(beta), 1e-10);
        // E[lambda (beta e^{theta/lambda} - 1)] = 0
        double g = 0.0, scale = 0.0;
        for (std::size_t i = 0; i < p.rates.size(); ++i) {
            const double term = p.rates[i] * (std::exp(p.law->log_beta + theta / p.rates[i]) - 1.0);
            g += cfg.grid().weights()[i] * term;
            scale += cfg.grid().weights()[i] * p.rates[i];
        }
        EXPECT_LE(std::abs(g), 1e-9 * scale);
        EXPECT_LE(std::abs(power_sum(cfg, p.rates) - cfg.power_budget()), 1e-9 * cfg.power_budget());
        // stationarity on the middle branch
        for (std::size_t i = 0; i < p.rates.size(); ++i) {
            const double gamma = cfg.grid().gains()[i];
            if (gamma > p.law->gamma1_th && gamma < p.law->gamma2_th) {
                EXPECT_LE(std::abs(stationarity_residual(*p.law, gamma, p.rates[i])), 1e-6);
            }
        }
    }
}

TEST(Dinkelbach, StartPointDoesNotMatter) {
    const auto a = dinkelbach(400.0, table2());
    const auto b = dinkelbach(400.0, table2(), {1e-12, 200, DinkelbachStart::min_rate});
    EXPECT_NEAR(a.law->log_beta, b.law->log_beta, 1e-10);
}

TEST(Dinkelbach, LogRatioIsBestAmongRandomFeasiblePolicies) {
    // The converged policy minimizes E[lambda e^{theta/lambda}]/E[lambda] over the feasible set.
    const auto& cfg = table2();
    const double theta = 200.0;
    const double best = log_ratio(theta, dinkelbach(theta, cfg).rates, cfg);
    std::mt19937_64 rng(21);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    const auto base = max_paoi_policy(cfg).rates;
    for (int trial = 0; trial < 50; ++trial) {
        std::vector<double> r(base.size());
        for (std::size_t i = 0; i < r.size(); ++i) r[i] = 10.0 + (1000.0 - 10.0) * u(rng);
        // scale into the power budget, staying in the box
        const double used = power_sum(cfg, r);
        if (used > cfg.power_budget()) {
            const double k = (cfg.power_budget() - power_sum(cfg, std::vector<double>(r.size(), 10.0))) /
                             (used - power_sum(cfg, std::vector<double>(r.size(), 10.0)));
            for (double& x : r) x = 10.0 + k * (x - 10.0);
        }
        EXPECT_GE(log_ratio(theta, r, cfg), best - 1e-12);
    }
}

TEST(Objective, ConstantPolicyIsPointMass) {
    const auto& cfg = table2();
    std::vector<double> r(cfg.grid().size(), 100.0);
    const double theta = 50.0;
    EXPECT_NEAR(objective_f(theta, r, cfg, RiskLevel(0.2)), 0.01 + 0.001 + std::log(5.0) / theta, 1e-12);
}

TEST(Objective, JensenAtRhoOne) {
    const auto& cfg = table2();
    std::mt19937_64 rng(4);
    std::uniform_real_distribution<double> u(10.0, 1000.0);
    for (int trial = 0; trial < 20; ++trial) {
        std::vector<double> r(cfg.grid().size());
        for (double& x : r) x = u(rng);
        const double mean_peak = 1.0 / grid_sum(cfg, r) + cfg.tau();
        EXPECT_GE(objective_f(30.0, r, cfg, RiskLevel(1.0)), mean_peak - 1e-12);
    }
}

TEST(Baselines, MaxPolicyIsConstant) {
    const auto& cfg = table2();
    const auto p = max_paoi_policy(cfg);
    // mpmath: P_tau / E[1/gamma]
    EXPECT_NEAR(p.rates.front(), 219.8325415258055, 1e-9);
    for (double r : p.rates) EXPECT_EQ(r, p.rates.front());
    EXPECT_LE(std::abs(power_sum(cfg, p.rates) - cfg.power_budget()), 1e-12 * cfg.power_budget());
    const auto d = peak_age_distribution(p.rates, cfg);
    ASSERT_EQ(d.atoms().size(), 1u);
    EXPECT_NEAR(d.atoms()[0].value, 0.005548917066869342, 1e-15);
}

TEST(Baselines, AvgPolicyIsStep) {
    const auto& cfg = table2();
    const auto p = avg_paoi_policy(cfg);
    int fractional = 0;
    for (double r : p.rates) {
        if (r != 10.0 && r != 1000.0) ++fractional;
    }
    EXPECT_LE(fractional, 1);
    EXPECT_TRUE(std::is_sorted(p.rates.begin(), p.rates.end()));
    EXPECT_LE(std::abs(power_sum(cfg, p.rates) - cfg.power_budget()), 1e-9 * cfg.power_budget());
    // mpmath greedy fill: 1/E[lambda] + tau
    EXPECT_NEAR(peak_age_distribution(p.rates, cfg).mean(), 0.0021857086462222906, 1e-13);
}

TEST(Baselines, BoxLimits) {
    FadingParams rich;
    rich.p_bar_w = 100.0;
    for (double r : avg_paoi_policy(FadingConfig{rich}).rates) EXPECT_EQ(r, 1000.0);
    for (double r : max_paoi_policy(FadingConfig{rich}).rates) EXPECT_EQ(r, 1000.0);

    // budget exactly E[(1/T)/gamma]
    FadingParams tight;
    const FadingConfig probe{tight};
    tight.p_bar_w = probe.params().p_bar_w * (10.0 * probe.grid().mean_inverse_gain()) / probe.power_budget();
    const FadingConfig cfg{tight};
    for (double r : avg_paoi_policy(cfg).rates) EXPECT_NEAR(r, 10.0, 1e-9);
    for (double r : max_paoi_policy(cfg).rates) EXPECT_NEAR(r, 10.0, 1e-9);
}

TEST(PeakAge, Distribution) {
    const auto& cfg = table2();
    const auto d = peak_age_distribution(std::vector<double>(cfg.grid().size(), 100.0), cfg);
    ASSERT_EQ(d.atoms().size(), 1u);
    EXPECT_NEAR(d.atoms()[0].value, 0.011, 1e-15);

    FadingParams p;
    const FadingConfig two{p, ChannelGrid::from_points({0.5, 2.0}, {0.5, 0.5})};
    const auto t = peak_age_distribution(std::vector<double>{10.0, 1000.0}, two);
    ASSERT_EQ(t.atoms().size(), 2u);
    EXPECT_NEAR(t.atoms()[0].value, 0.002, 1e-15);
    EXPECT_NEAR(t.atoms()[0].probability, 1000.0 / 1010.0, 1e-15);
    EXPECT_NEAR(t.atoms()[1].value, 0.101, 1e-15);
    EXPECT_NEAR(t.atoms()[1].probability, 10.0 / 1010.0, 1e-15);
    EXPECT_NEAR(t.mean(), 1.0 / 505.0 + 0.001, 1e-15);
}

TEST(LimitShapes, StepAndConstant) {
    const auto& cfg = table2();
    const auto low = dinkelbach(1e-3, cfg);
    EXPECT_LT(middle_mass(*low.law, cfg), 0.01);
    const auto high = dinkelbach(1e6, cfg);
    const auto [lo, hi] = std::minmax_element(high.rates.begin(), high.rates.end());
    double mean = 0.0;
    for (double r : high.rates) mean += r;
    mean /= high.rates.size();
    EXPECT_LT((*hi - *lo) / mean, 0.01);
}

TEST(Optimize, RhoOneIsAverageBaseline) {
    const auto& cfg = table2();
    const auto r = optimize(cfg, RiskLevel(1.0));
    EXPECT_NEAR(r.risk.delta, 0.0021857086462222906, 1e-6 * 0.0021857);
    EXPECT_EQ(r.risk.limit, ThetaLimit::zero);
}

TEST(Optimize, ObjectiveIsUnimodal) {
    const auto& cfg = table2();
    const RiskLevel rho(0.5);
    std::vector<double> g;
    for (int i = 0; i < 40; ++i) {
        const double theta = std::pow(10.0, -3.0 + 7.0 * i / 39.0);
        g.push_back(objective_f(theta, dinkelbach(theta, cfg).rates, cfg, rho));
    }
    const auto m = std::min_element(g.begin(), g.end()) - g.begin();
    for (long i = 1; i <= m; ++i) EXPECT_LE(g[i], g[i - 1] * (1 + 1e-12));
    for (std::size_t i = m + 1; i < g.size(); ++i) EXPECT_GE(g[i], g[i - 1] * (1 - 1e-12));
}

TEST(Optimize, DominatesBaselinesAndSearchModesAgree) {
    const auto& cfg = table2();
    const RiskLevel rho(0.5);
    const auto r = optimize(cfg, rho);
    EXPECT_EQ(r.risk.boundary, numerics::BoundaryHit::none);
    const double avg = entropic_value_at_risk(peak_age_distribution(avg_paoi_policy(cfg).rates, cfg), rho).delta;
    const double mx = entropic_value_at_risk(peak_age_distribution(max_paoi_policy(cfg).rates, cfg), rho).delta;
    EXPECT_LE(r.risk.delta, avg + 1e-9);
    EXPECT_LE(r.risk.delta, mx + 1e-9);
    // reported delta is a valid Chernoff bound for the returned policy
    const auto d = peak_age_distribution(r.policy.rates, cfg);
    EXPECT_GE(r.risk.delta, entropic_value_at_risk(d, rho).delta - 1e-12);
    EXPECT_LE(d.prob_at_least(r.risk.delta), 0.5);

    OptimizeOptions opt;
    opt.search = OuterSearch::derivative_bisection;
    const auto b = optimize(cfg, rho, opt);
    EXPECT_NEAR(b.risk.delta, r.risk.delta, 1e-9 * r.risk.delta);
}

TEST(Optimize, MonotoneInRhoAndSmallRhoLimit) {
    const auto& cfg = table2();
    const double d9 = optimize(cfg, RiskLevel(0.9)).risk.delta;
    const double d1 = optimize(cfg, RiskLevel(0.1)).risk.delta;
    EXPECT_GE(d1, d9);
    const auto tiny = optimize(cfg, RiskLevel(1e-6));
    const double top = peak_age_distribution(tiny.policy.rates, cfg).ess_sup();
    EXPECT_LE(std::abs(tiny.risk.delta - top), 0.01 * top);
}
