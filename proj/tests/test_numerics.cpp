#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "statage/error.hpp"
#include "statage/numerics.hpp"

using namespace statage;
using namespace statage::numerics;

TEST(LambertW0, SpecialValues) {
    EXPECT_EQ(lambert_w0(0.0), 0.0);
    EXPECT_NEAR(lambert_w0(-std::exp(-1.0)), -1.0, 1e-7);
    // mpmath lambertw(1)
    EXPECT_NEAR(lambert_w0(1.0), 0.56714329040978387, 1e-15);
    EXPECT_NEAR(lambert_w0(std::numbers::e), 1.0, 1e-15);
}

TEST(LambertW0, ResidualOverLogGrid) {
    const double branch = -std::exp(-1.0);
    const int n = 10000;
    for (int i = 0; i < n; ++i) {
        // half the points approach the branch point, half sweep (0, 1e8]
        double x;
        if (i < n / 2) {
            const double off = std::pow(10.0, -12.0 + 12.0 * i / (n / 2 - 1));
            x = branch + off;
        } else {
            x = std::pow(10.0, -8.0 + 16.0 * (i - n / 2) / (n / 2 - 1));
        }
        const double w = lambert_w0(x);
        ASSERT_GE(w, -1.0) << x;
        ASSERT_LE(std::abs(w * std::exp(w) - x), 1e-12 * std::max(1.0, std::abs(x))) << x;
    }
}

TEST(LambertW0, InvertsVExpV) {
    for (double v = -1.0; v <= 50.0; v += 0.0137) {
        const double x = v * std::exp(v);
        EXPECT_NEAR(lambert_w0(x), v, 1e-7 * std::max(1.0, std::abs(v)) + (v < -0.99 ? 1e-6 : 0.0)) << v;
    }
}

TEST(LambertW0, RejectsBelowBranchPoint) {
    EXPECT_THROW(lambert_w0(-0.4), DomainError);
    EXPECT_NO_THROW(lambert_w0(-std::exp(-1.0) - 1e-14));
}

TEST(LambertW0, ExpFormMatchesDirect) {
    for (double lx = -20.0; lx <= 30.0; lx += 0.5) {
        EXPECT_NEAR(lambert_w0_exp(lx), lambert_w0(std::exp(lx)), 1e-12 * std::max(1.0, std::abs(lx)));
    }
    // W(e^L) ~ L - log L for huge L
    const double w = lambert_w0_exp(1e4);
    EXPECT_NEAR(w + std::log(w), 1e4, 1e-9);
}

TEST(LambertW0, OffsetFormNearBranchPoint) {
    for (double p : {1e-14, 1e-10, 1e-6, 1e-3, 0.1, 0.5, 1.0, 2.0}) {
        const double y = lambert_w0_offset(p);  // y = 1 + W((p-1)/e)
        // w e^w = (p - 1)/e  <=>  p = 1 + (y - 1) e^y
        const double p_back = 1.0 + (y - 1.0) * std::exp(y);
        EXPECT_NEAR(p_back, p, 1e-12 * std::max(1.0, p) + 1e-15) << p;
        EXPECT_GE(y, 0.0);
    }
    // branch series 1 + W = s - s^2/3 + 11 s^3/72, s = sqrt(2p)
    const double s = std::sqrt(2e-12);
    EXPECT_NEAR(lambert_w0_offset(1e-12), s - s * s / 3.0 + 11.0 * s * s * s / 72.0, 1e-20);
}

TEST(LambertGap, MatchesDirectFormula) {
    for (double u : {-3.0, -0.5, -1e-3, 1e-3, 0.5, 3.0}) {
        EXPECT_NEAR(lambert_gap(u), 1.0 - (1.0 - u) * std::exp(u), 1e-13 * std::max(1.0, std::exp(u)));
    }
    // 1 - (1-u)e^u = u^2/2 + u^3/3 + ...
    EXPECT_NEAR(lambert_gap(1e-8), 0.5e-16, 1e-24);
}

TEST(FindRoot, Examples) {
    EXPECT_NEAR(find_root_monotone([](double x) { return x * x - 2.0; }, {0.0, 2.0}, 1e-12), std::sqrt(2.0), 1e-11);
    EXPECT_NEAR(find_root_monotone([](double x) { return x; }, {-1.0, 1.0}, 1e-12), 0.0, 1e-12);
    // mpmath log(3)
    EXPECT_NEAR(find_root_monotone([](double x) { return std::exp(x) - 3.0; }, {0.0, 2.0}, 1e-13),
                1.0986122886681097, 1e-12);
}

TEST(FindRoot, DecreasingFunction) {
    EXPECT_NEAR(find_root_monotone([](double x) { return 1.0 - x; }, {0.0, 3.0}, 1e-13), 1.0, 1e-12);
}

TEST(FindRoot, BracketErrorCarriesEndpoints) {
    try {
        find_root_monotone([](double x) { return x * x + 1.0; }, {0.0, 2.0}, 1e-12);
        FAIL();
    } catch (const BracketError& e) {
        EXPECT_EQ(e.lo(), 0.0);
        EXPECT_EQ(e.hi(), 2.0);
        EXPECT_EQ(e.f_lo(), 1.0);
        EXPECT_EQ(e.f_hi(), 5.0);
    }
}

TEST(FindRoot, InvalidBracket) {
    EXPECT_THROW(find_root_monotone([](double x) { return x; }, {1.0, -1.0}, 1e-12), DomainError);
    EXPECT_THROW(find_root_monotone([](double x) { return x; }, {-INFINITY, 1.0}, 1e-12), DomainError);
}

TEST(Minimize, Examples) {
    const auto a = minimize_unimodal([](double x) { return (x - 2.0) * (x - 2.0); }, {0.0, 5.0}, 1e-10);
    EXPECT_NEAR(a.x, 2.0, 1e-8);
    EXPECT_NEAR(a.fx, 0.0, 1e-15);
    EXPECT_EQ(a.boundary, BoundaryHit::none);

    const auto b = minimize_unimodal([](double x) { return x; }, {1.0, 3.0}, 1e-10);
    EXPECT_EQ(b.x, 1.0);
    EXPECT_EQ(b.fx, 1.0);
    EXPECT_EQ(b.boundary, BoundaryHit::lower);

    const auto c = minimize_unimodal([](double x) { return -x; }, {1.0, 3.0}, 1e-10);
    EXPECT_EQ(c.boundary, BoundaryHit::upper);
}

TEST(Minimize, AgreesWithDenseGrid) {
    const auto f = [](double x) { return x + 4.0 / x; };
    double best_x = 0.1, best = f(0.1);
    for (int i = 0; i <= 100000; ++i) {
        const double x = 0.1 + 9.9 * i / 100000.0;
        if (f(x) < best) best = f(x), best_x = x;
    }
    const auto r = minimize_unimodal(f, {0.1, 10.0}, 1e-10);
    EXPECT_NEAR(r.x, 2.0, 1e-5);
    EXPECT_NEAR(r.x, best_x, 1e-4);
    EXPECT_NEAR(r.fx, 4.0, 1e-12);
    EXPECT_LE(r.fx, best + 1e-15);
}

TEST(CentralDifference, Polynomial) {
    EXPECT_NEAR(central_difference([](double x) { return x * x * x; }, 2.0, 1e-4), 12.0, 1e-7);
}

TEST(LogSumExp, HugeExponents) {
    const double e[] = {1000.0, 1000.0};
    const double w[] = {0.5, 0.5};
    EXPECT_NEAR(log_sum_exp(e, w), 1000.0, 1e-12);
    const double e2[] = {0.0, std::log(3.0)};
    const double w2[] = {1.0, 1.0};
    EXPECT_NEAR(log_sum_exp(e2, w2), std::log(4.0), 1e-15);
}
