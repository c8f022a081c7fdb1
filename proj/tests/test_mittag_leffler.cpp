#include "fro/mittag_leffler.hpp"
#include "ml_oracle.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

namespace ml = fro::ml;
using fro::ml::mittag_leffler;
using fro::testing::ml_oracle;

TEST(Gamma, ClassicalValues) {
    EXPECT_DOUBLE_EQ(ml::gamma(1.0), 1.0);
    EXPECT_NEAR(ml::gamma(0.5), 1.772453850905516, 1e-15);
    EXPECT_DOUBLE_EQ(ml::gamma(5.0), 24.0);
    EXPECT_NEAR(ml::gamma(-0.5), -2.0 * std::sqrt(std::numbers::pi), 1e-14);
}

TEST(Gamma, PolesThrow) {
    EXPECT_THROW(ml::gamma(0.0), fro::ml::PoleError);
    EXPECT_THROW(ml::gamma(-3.0), fro::ml::PoleError);
    EXPECT_EQ(fro::ml::rgamma(-2.0), 0.0);
    EXPECT_EQ(fro::ml::rgamma(0.0), 0.0);
}

TEST(MittagLeffler, PointValues) {
    EXPECT_NEAR(mittag_leffler(1, 1, -1), 0.36787944117144233, 1e-12);
    EXPECT_NEAR(mittag_leffler(2, 1, -1), 0.5403023058681398, 1e-12);
    EXPECT_NEAR(mittag_leffler(0.5, 1, -1), 0.4275835761558070, 1e-10);
    EXPECT_DOUBLE_EQ(mittag_leffler(0.7, 1.3, 0), 1.0 / std::tgamma(1.3));
}

TEST(MittagLeffler, ErfcIdentityForHalfOrder) {
    // E_{1/2,1}(-x) = exp(x^2) erfc(x); erfc loses relative accuracy for
    // large x, so the comparison stays where the product is well conditioned.
    for (double x = 0.0; x <= 5.0; x += 0.125) {
        EXPECT_NEAR(mittag_leffler(0.5, 1.0, -x), std::exp(x * x) * std::erfc(x), 1e-12) << x;
    }
}

TEST(MittagLeffler, DomainErrors) {
    EXPECT_THROW(mittag_leffler(0.0, 1.0, -1.0), std::domain_error);
    EXPECT_THROW(mittag_leffler(-0.5, 1.0, -1.0), std::domain_error);
    EXPECT_THROW(mittag_leffler(0.5, 1.0, 0.5), std::domain_error);
    EXPECT_THROW(mittag_leffler(0.5, 1.0, std::nan("")), std::domain_error);
}

TEST(Oracle, MatchesClosedForms) {
    EXPECT_NEAR(ml_oracle(0.5, 1.0, -1.0), std::exp(1.0) * std::erfc(1.0), 1e-15);
    EXPECT_NEAR(ml_oracle(2.0, 1.0, -9.0), std::cos(3.0), 1e-14);
    EXPECT_NEAR(ml_oracle(1.0, 1.0, -30.0), std::exp(-30.0), 1e-20);
    // E_{1/2,1/2}(-1) = 1/sqrt(pi) - e*erfc(1).
    EXPECT_NEAR(ml_oracle(0.5, 0.5, -1.0), 1.0 / std::sqrt(std::numbers::pi) - std::exp(1.0) * std::erfc(1.0), 1e-15);
}

TEST(MittagLeffler, AgreesWithOracleOnSupportedBox) {
    std::mt19937 rng(2024);
    std::uniform_real_distribution<double> adist(0.1, 2.0);
    std::uniform_real_distribution<double> zdist(-100.0, 0.0);
    std::uniform_int_distribution<int> bpick(0, 2);
    double worst = 0.0;
    for (int i = 0; i < 400; ++i) {
        const double a = adist(rng);
        const double betas[] = {1.0, 2.0, a};
        const double b = betas[bpick(rng)];
        const double z = zdist(rng);
        const double err = std::fabs(mittag_leffler(a, b, z) - ml_oracle(a, b, z));
        worst = std::max(worst, err);
        EXPECT_LE(err, 1e-10) << "alpha=" << a << " beta=" << b << " z=" << z;
    }
    RecordProperty("worst_abs_error", std::to_string(worst));
}

TEST(MittagLeffler, AgreesWithOracleAtBoundaries) {
    for (double a : {0.1, 0.5, 0.999, 1.0, 1.001, 1.5, 1.999, 2.0}) {
        for (double b : {1.0, 2.0, a}) {
            for (double z : {-1e-3, -0.5, -1.0, -9.99, -10.0, -10.01, -50.0, -100.0}) {
                EXPECT_NEAR(mittag_leffler(a, b, z), ml_oracle(a, b, z), 1e-10)
                    << "alpha=" << a << " beta=" << b << " z=" << z;
            }
        }
    }
}

TEST(Properties, ValueAtZeroIsReciprocalGamma) {
    for (double a : {0.1, 0.5, 1.0, 1.5, 2.0}) {
        for (double b : {0.3, 1.0, 1.3, 2.0, 3.5}) {
            EXPECT_DOUBLE_EQ(mittag_leffler(a, b, 0.0), 1.0 / std::tgamma(b));
        }
    }
}

TEST(Properties, Recurrence) {
    std::mt19937 rng(99);
    std::uniform_real_distribution<double> adist(0.1, 2.0);
    std::uniform_real_distribution<double> bdist(0.5, 2.0);
    std::uniform_real_distribution<double> zdist(-50.0, 0.0);
    for (int i = 0; i < 1000; ++i) {
        const double a = adist(rng);
        const double b = bdist(rng);
        const double z = zdist(rng);
        const double lhs = mittag_leffler(a, b, z);
        const double rhs = z * mittag_leffler(a, a + b, z) + 1.0 / std::tgamma(b);
        ASSERT_NEAR(lhs, rhs, 1e-9) << "alpha=" << a << " beta=" << b << " z=" << z;
    }
}

TEST(Properties, CompleteMonotonicityProxy) {
    for (double a : {0.1, 0.25, 0.5, 0.75, 0.9, 0.99, 1.0}) {
        double prev = 1.0;
        for (int i = 0; i <= 10000; ++i) {
            const double t = 0.01 * i;
            const double v = mittag_leffler(a, 1.0, -t);
            ASSERT_GT(v, 0.0) << "alpha=" << a << " t=" << t;
            ASSERT_LE(v, prev) << "alpha=" << a << " t=" << t;
            prev = v;
        }
    }
}

TEST(Properties, CosineIdentity) {
    for (int i = 0; i <= 2000; ++i) {
        const double t = 0.01 * i;
        ASSERT_NEAR(mittag_leffler(2.0, 1.0, -t * t), std::cos(t), 1e-10) << t;
    }
}

TEST(Properties, SineIdentity) {
    for (int i = 1; i <= 200; ++i) {
        const double t = 0.1 * i;
        ASSERT_NEAR(t * mittag_leffler(2.0, 2.0, -t * t), std::sin(t), 1e-10) << t;
    }
}
