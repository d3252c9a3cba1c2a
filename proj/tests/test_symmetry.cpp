#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "condsym/scans.hpp"
#include "condsym/symmetry.hpp"
#include "oracles.hpp"

using namespace condsym;

namespace {

double dist(const Point& a, const Point& b) {
    double d = std::abs(a.t - b.t);
    for (std::size_t i = 0; i < a.x.size(); ++i) d = std::max(d, std::abs(a.x[i] - b.x[i]));
    return d;
}

std::vector<GroupElement> sample_elements(double scale) {
    return {Xn{2, 0.02 * scale, 1.0},
            Xn{-2, -0.015 * scale, 1.0},
            Xn{1, 0.01 * scale, 0.5},
            Xn{-1, 0.3 * scale, 1.0},
            Xn{0, 0.2 * scale, 1.0},
            Xn{3, -0.01 * scale, 1.0},
            Yk{1, {0.5 * scale, -0.2 * scale}},
            Yk{-1, {0.1 * scale, 0.3 * scale}},
            Yphi{{ProfileFunction::parse("sin:1,1,0"), ProfileFunction::parse("exp:1,0.5")}, {0.4 * scale, -0.3 * scale}},
            Rot{0, 1, 0.7 * scale}};
}

/// Scale the parameter of a one-parameter element.
GroupElement with_parameter(const GroupElement& g, double s) {
    return std::visit(
        [s](auto h) -> GroupElement {
            using H = std::decay_t<decltype(h)>;
            if constexpr (std::is_same_v<H, Xn>) {
                h.eps *= s;
            } else if constexpr (std::is_same_v<H, Yk>) {
                for (auto& v : h.v) v *= s;
            } else if constexpr (std::is_same_v<H, Yphi>) {
                for (auto& v : h.e) v *= s;
            } else {
                h.angle *= s;
            }
            return h;
        },
        g);
}

/// Closed forms as printed in the literature, without the A^{-z} on the obstruction terms.
double printed_time_law(const Jet2& j, const Point& p, double a, double z, int n, double eps) {
    const double kappa = n * (n + 1.0) * eps * std::pow(p.t, n - 1);
    return std::pow(a, 1.0 - z) * j.grad(0) + (j.value() - p.x[0] * j.grad(1)) * kappa * std::pow(a, 1.0 + z * n / (n + 1.0));
}

}  // namespace

TEST(GroupAction, HandValues) {
    const ModelParams p{2, 2.0};
    // s = 1 - z n eps t^n = 0.8
    auto [q, f] = transform_point(Xn{1, 0.1, 1.0}, p, {1.0, {1.0, -2.0}});
    EXPECT_DOUBLE_EQ(q.t, 1.25);
    EXPECT_DOUBLE_EQ(f.A, 1.25);
    EXPECT_DOUBLE_EQ(q.x[1], -2.5);
    EXPECT_DOUBLE_EQ(f.obstruction_coeff, 0.2);

    std::tie(q, f) = transform_point(Xn{-1, 0.3, 1.0}, p, {1.0, {1.0, -2.0}});
    EXPECT_DOUBLE_EQ(q.t, 1.6);
    EXPECT_EQ(f.obstruction_coeff, 0.0);

    std::tie(q, f) = transform_point(Xn{0, 0.1, 1.0}, p, {1.0, {1.0, -2.0}});
    EXPECT_DOUBLE_EQ(q.t, std::exp(0.2));
    EXPECT_DOUBLE_EQ(q.x[0], std::exp(0.1));
    EXPECT_DOUBLE_EQ(f.u_factor, std::exp(0.1));

    std::tie(q, f) = transform_point(Rot{0, 1, std::numbers::pi / 2}, p, {1.0, {1.0, 0.0}});
    EXPECT_NEAR(q.x[0], 0.0, 1e-16);
    EXPECT_NEAR(q.x[1], 1.0, 1e-16);

    std::tie(q, f) = transform_point(Yk{2, {1.0, -1.0}}, p, {3.0, {0.0, 0.0}});
    EXPECT_DOUBLE_EQ(q.x[0], 9.0);
    EXPECT_DOUBLE_EQ(q.x[1], -9.0);
}

TEST(GroupAction, ZeroExponentUsesExponentialForm) {
    const ModelParams p{1, 0.0};
    for (int n : {-1, 0, 2}) {
        const auto [q, f] = transform_point(Xn{n, 0.1, 1.0}, p, {2.0, {1.5}});
        EXPECT_EQ(q.t, 2.0);
        EXPECT_NEAR(q.x[0], 1.5 * std::exp(0.1 * std::pow(2.0, n)), 1e-15);
        EXPECT_NEAR(f.u_factor, std::exp(0.1 * std::pow(2.0, n)), 1e-15);
    }
}

TEST(GroupAction, BranchError) {
    EXPECT_THROW(transform_point(Xn{1, 0.5, 1.0}, {1, 2.0}, {1.0, {0.0}}), BranchError);
    EXPECT_THROW(transform_point(Yk{1, {1.0}}, {2, 2.0}, {1.0, {0.0, 0.0}}), DimensionMismatch);
    EXPECT_THROW(transform_point(Rot{0, 2, 0.1}, {2, 2.0}, {1.0, {0.0, 0.0}}), DimensionMismatch);
}

TEST(GroupAction, InverseRoundTrip) {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> dt(0.5, 1.5), dx(-1.0, 1.0);
    for (double z : {0.0, 0.5, 1.0, 2.0, 3.0}) {
        const ModelParams params{2, z};
        for (const auto& g : sample_elements(1.0)) {
            for (int i = 0; i < 20; ++i) {
                const Point p{dt(rng), {dx(rng), dx(rng)}};
                const auto [q, f] = transform_point(g, params, p);
                const auto [back, fi] = transform_point(inverse(g), params, q);
                EXPECT_LT(dist(back, p), 1e-12) << to_string(g);
                EXPECT_NEAR(f.u_factor * fi.u_factor, 1.0, 1e-12) << to_string(g);
            }
        }
    }
}

TEST(GroupAction, OneParameterComposition) {
    std::mt19937_64 rng(8);
    std::uniform_real_distribution<double> dt(0.5, 1.5), dx(-1.0, 1.0);
    for (double z : {0.0, 1.0, 2.0}) {
        const ModelParams params{2, z};
        for (const auto& g : sample_elements(1.0)) {
            const auto g1 = with_parameter(g, 0.4), g2 = with_parameter(g, 0.6);
            for (int i = 0; i < 10; ++i) {
                const Point p{dt(rng), {dx(rng), dx(rng)}};
                const auto [q2, f2] = transform_point(g2, params, p);
                const auto [q12, f1] = transform_point(g1, params, q2);
                const auto [q, f] = transform_point(g, params, p);
                EXPECT_LT(dist(q12, q), 1e-12) << to_string(g);
                EXPECT_NEAR(f1.u_factor * f2.u_factor, f.u_factor, 1e-12) << to_string(g);
            }
        }
    }
}

TEST(GroupAction, ElementText) {
    EXPECT_EQ(to_string(Xn{1, 0.01, 1.0}), "Xn:n=1,eps=0.01");
    EXPECT_EQ(to_string(Yk{1, {0.5, 0.0}}), "Yk:k=1,v=0.5,0");
    EXPECT_EQ(to_string(Rot{0, 1, 0.3}), "rot:a=1,b=2,angle=0.3");
    EXPECT_EQ(to_string(inverse(Xn{2, 0.25, 1.0})), "Xn:n=2,eps=-0.25");
}

TEST(Pushforward, JetMatchesFiniteDifferencesOfPlainTransform) {
    const ModelParams params{2, 2.0};
    const auto u = make_random_polynomial(6, params, 3, 1.0);
    for (const auto& g : sample_elements(1.0)) {
        const auto pushed = pushforward_field(g, u);
        oracle::Fn plain = [&](const std::vector<double>& y) {
            const Point q{y[0], {y[1], y[2]}};
            const auto [p, fi] = transform_point(inverse(g), params, q);
            // factor(p) = 1 / factor of the inverse at q
            return u.evaluate(params, p).value() / fi.u_factor;
        };
        const std::vector<double> y = {1.1, 0.3, -0.4};
        const Jet2 j = pushed.evaluate(params, {y[0], {y[1], y[2]}});
        EXPECT_NEAR(j.value(), plain(y), 1e-13) << to_string(g);
        for (std::size_t i = 0; i < 3; ++i) {
            EXPECT_NEAR(j.grad(i), oracle::partial(plain, y, i), 1e-8) << to_string(g);
            for (std::size_t k = 0; k < 3; ++k) {
                EXPECT_NEAR(j.hess(i, k), oracle::second_partial(plain, y, i, k), 1e-7) << to_string(g);
            }
        }
    }
}

TEST(DerivativeLaws, HoldForRandomFields) {
    std::mt19937_64 rng(21);
    std::uniform_real_distribution<double> dt(0.5, 1.5), dx(-1.0, 1.0), de(-0.02, 0.02);
    for (int spatial = 1; spatial <= 2; ++spatial) {
        for (double z : {0.5, 1.0, 2.0, 3.0}) {
            const ModelParams params{spatial, z};
            const auto u = make_random_polynomial(static_cast<std::uint64_t>(spatial * 10 + z), params, 3, 1.0);
            for (int n = -2; n <= 3; ++n) {
                for (int i = 0; i < 5; ++i) {
                    Point p{dt(rng), {}};
                    for (int a = 0; a < spatial; ++a) p.x.push_back(dx(rng));
                    const auto gaps = derivative_law_gaps(Xn{n, de(rng), 1.0}, params, u, p);
                    EXPECT_LT(gaps.max(), 1e-11) << "n=" << n << " z=" << z;
                }
            }
        }
    }
}

TEST(DerivativeLaws, PrintedFormIsOffAtSecondOrder) {
    // negative control: without A^{-z} on the kappa-term the time law misses by O(eps^2)
    const ModelParams params{1, 2.0};
    const ScalarField u("t x^2 + x + 1", [](const ModelParams&, const Point& p) {
        const auto c = coordinate_jets(p);
        return c[0] * c[1] * c[1] + c[1] + 1.0;
    });
    const Point p{1.0, {0.5}};
    const int n = 2;
    const double eps = 0.02;
    const GroupElement g = Xn{n, eps, 1.0};
    const auto [q, f] = transform_point(g, params, p);
    const Jet2 jp = pushforward_field(g, u).evaluate(params, q);
    const Jet2 j = u.evaluate(params, p);
    EXPECT_LT(derivative_law_gaps(g, params, u, p).time, 1e-13);
    EXPECT_GT(std::abs(jp.grad(0) - printed_time_law(j, p, f.A, params.z, n, eps)), 1e-3);
}

TEST(DerivativeLaws, RejectZeroExponentAndOtherElements) {
    const auto u = make_random_polynomial(1, {1, 0.0}, 2, 1.0);
    EXPECT_THROW(derivative_law_gap(Xn{1, 0.01, 1.0}, {1, 0.0}, u, {1.0, {0.2}}), ZeroDynamicalExponent);
    EXPECT_THROW(pushforward_identity_gap(Xn{1, 0.01, 1.0}, {1, 0.0}, u, {1.0, {0.2}}), ZeroDynamicalExponent);
    EXPECT_THROW(derivative_law_gap(Yk{1, {0.1}}, {1, 1.0}, u, {1.0, {0.2}}), std::invalid_argument);
}

TEST(Identity, ObstructionVanishesOnlyForTranslationAndDilatation) {
    const ModelParams params{2, 2.0};
    const auto u = make_random_polynomial(4, params, 3, 1.0);
    const Point p{1.2, {0.4, -0.5}};
    for (int n = -2; n <= 3; ++n) {
        const auto c = pushforward_identity(Xn{n, 0.015, 1.0}, params, u, p);
        EXPECT_LT(c.gap, 1e-11);
        if (n == -1 || n == 0) {
            EXPECT_EQ(c.obstruction, 0.0);
        } else if (std::abs(c.monge_ampere) > 0.1) {
            EXPECT_GT(std::abs(c.obstruction), 1e-3 * 0.015);
        }
    }
}

TEST(Identity, MongeAmpereFieldsAreConditionallyInvariant) {
    // Hessian of (x1 + 2 x2)^2 has rank one
    const ModelParams params{2, 2.0};
    const ScalarField u("ma", [](const ModelParams&, const Point& p) {
        const auto c = coordinate_jets(p);
        return c[0] * pow(c[1] + 2.0 * c[2], 2) + c[1] + 3.0;
    });
    for (int n = -2; n <= 3; ++n) {
        const auto c = pushforward_identity(Xn{n, 0.01, 1.0}, params, u, {0.9, {0.2, 0.1}});
        EXPECT_NEAR(c.obstruction, 0.0, 1e-13);
        EXPECT_LT(c.gap, 1e-12);
    }
}

TEST(Identity, DilatationScalesGeneralResidual) {
    // residual of the dilated field at the image point = e^{(1-z-N) eps} times the original
    std::mt19937_64 rng(2);
    std::uniform_real_distribution<double> dx(0.2, 1.0);
    for (double z : {0.5, 2.0}) {
        const ModelParams params{2, z};
        const auto u = make_random_polynomial(5, params, 2, 1.0);
        const ScalarField shifted("u+10", [u](const ModelParams& prm, const Point& p) { return u.evaluate(prm, p) + 10.0; });
        const double eps = 0.3;
        const GroupElement g = Xn{0, eps, 1.0};
        const auto pushed = pushforward_field(g, shifted);
        for (int i = 0; i < 10; ++i) {
            const Point p{1.0 + dx(rng), {dx(rng), dx(rng)}};
            const auto [q, f] = transform_point(g, params, p);
            const double before = general_residual(shifted.evaluate(params, p), params, diffusion_g(params)).value;
            const double after = general_residual(pushed.evaluate(params, q), params, diffusion_g(params)).value;
            EXPECT_NEAR(after, std::exp((1.0 - z - 2.0) * eps) * before, 1e-12 * std::max(1.0, std::abs(before)));
        }
    }
}

TEST(Generators, ActionOnSimpleFunctions) {
    const ModelParams params{2, 2.0};
    const TestFunction u_only = [](std::span<const Jet2> v) { return v[3]; };
    const TestFunction x1 = [](std::span<const Jet2> v) { return v[1]; };
    const ExtendedPoint p{1.5, {0.3, -0.2}, 0.7};
    // X_n u = lambda (n+1) t^n u
    EXPECT_DOUBLE_EQ(apply_generator(GenX{2, 1.0}, params, u_only)(p).value, 3.0 * 1.5 * 1.5 * 0.7);
    // Y_k^(1) x_1 = t^k
    EXPECT_DOUBLE_EQ(apply_generator(GenY{3, 0}, params, x1)(p).value, std::pow(1.5, 3));
    // J_12 x_1 = -x_2, J_12 x_2 = x_1
    EXPECT_DOUBLE_EQ(apply_generator(GenJ{0, 1}, params, x1)(p).value, 0.2);
}

TEST(Commutators, ExpectedTable) {
    const ModelParams params{3, 2.0};
    auto single = [&](const AlgebraGenerator& a, const AlgebraGenerator& b) {
        const auto c = expected_commutator(a, b, params);
        EXPECT_EQ(c.size(), 1u);
        return c.empty() ? std::pair<double, std::string>{0.0, ""}
                         : std::pair<double, std::string>{c[0].first, to_string(c[0].second)};
    };
    EXPECT_EQ(single(GenX{1, 1.0}, GenX{-1, 1.0}), (std::pair<double, std::string>{-4.0, "X0"}));
    // z k - 1 - n with k = 1, n = 1, z = 2
    EXPECT_EQ(single(GenX{1, 1.0}, GenY{1, 0}), (std::pair<double, std::string>{0.0, "Y2^1"}));
    EXPECT_EQ(single(GenY{1, 0}, GenX{-1, 1.0}), (std::pair<double, std::string>{-2.0, "Y0^1"}));
    EXPECT_EQ(single(GenY{0, 0}, GenJ{0, 2}), (std::pair<double, std::string>{1.0, "Y0^3"}));
    EXPECT_EQ(single(GenJ{0, 1}, GenJ{1, 2}), (std::pair<double, std::string>{1.0, "J13"}));
    EXPECT_TRUE(expected_commutator(GenY{1, 0}, GenY{-1, 1}, params).empty());
    EXPECT_TRUE(expected_commutator(GenX{2, 1.0}, GenJ{0, 1}, params).empty());
}

TEST(Commutators, ScanPassesAndYYIsExact) {
    for (int spatial : {2, 3}) {
        for (double z : {1.0, 2.0}) {
            const ModelParams params{spatial, z};
            const auto rows = commutator_scan(params, generator_window(spatial, -2, 2, -1, 2), 3, 7, 1e-9);
            for (const auto& r : rows) {
                EXPECT_TRUE(r.pass) << to_string(r.first) << "," << to_string(r.second) << " gap " << r.max_gap;
                if (std::holds_alternative<GenY>(r.first) && std::holds_alternative<GenY>(r.second)) {
                    EXPECT_EQ(r.max_gap, 0.0);
                }
            }
        }
    }
}

TEST(Commutators, WrongCoefficientIsDetected) {
    const ModelParams params{2, 2.0};
    const auto fs = standard_test_functions();
    const ExtendedPoint p{1.2, {0.3, -0.4}, 0.6};
    const LinearCombination wrong{{1.0, GenX{0, 1.0}}};
    EXPECT_GT(commutator_gap(GenX{1, 1.0}, GenX{-1, 1.0}, wrong, params, fs[0], p), 1e-3);
}
