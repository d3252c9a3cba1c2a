#include <gtest/gtest.h>

#include <cmath>
#include <set>

#include "condsym/fields.hpp"
#include "oracles.hpp"

using namespace condsym;

TEST(Profile, ParseAndPrintRoundTrip) {
    for (const char* s : {"poly:1,0,2", "exp:1,0.5", "sin:1,2,0", "const:-3", "poly:0.1"}) {
        EXPECT_EQ(ProfileFunction::parse(s).to_string(), s);
    }
    EXPECT_THROW(ProfileFunction::parse("sin:1,2"), ParseError);
    EXPECT_THROW(ProfileFunction::parse("cosh:1"), ParseError);
    EXPECT_THROW(ProfileFunction::parse("poly:1,x"), ParseError);
    EXPECT_THROW(ProfileFunction::parse("poly"), ParseError);
}

TEST(Profile, DerivativesAgainstFiniteDifferences) {
    for (const char* s : {"poly:1,-2,0.5,0.25", "exp:1.5,-0.7", "sin:0.8,2,0.3", "const:4"}) {
        const auto f = ProfileFunction::parse(s);
        oracle::Fn g = [&](const std::vector<double>& t) { return f(t[0]).value; };
        for (double t : {-0.9, 0.2, 1.7}) {
            const auto v = f(t);
            EXPECT_NEAR(v.d1, oracle::partial(g, {t}, 0), 1e-8) << s;
            EXPECT_NEAR(v.d2, oracle::second_partial(g, {t}, 0, 0), 1e-7) << s;
            const Jet2 j = f(Jet2::seed(1, 0, t));
            EXPECT_EQ(j.value(), v.value);
            EXPECT_EQ(j.grad(0), v.d1);
            EXPECT_EQ(j.hess(0, 0), v.d2);
        }
    }
}

TEST(Profile, PolynomialHorner) {
    const auto v = ProfileFunction::parse("poly:1,0,2")(3.0);  // 1 + 2 t^2
    EXPECT_DOUBLE_EQ(v.value, 19.0);
    EXPECT_DOUBLE_EQ(v.d1, 12.0);
    EXPECT_DOUBLE_EQ(v.d2, 4.0);
}

TEST(MultiPolynomial, ParseEvaluate) {
    const auto p = MultiPolynomial::parse("mpoly:2@1.0|-1@0.2|0.5@1.1");  // 2a - b^2 + a b / 2
    EXPECT_EQ(p.num_vars(), 2u);
    EXPECT_EQ(p.total_degree(), 2);
    EXPECT_EQ(MultiPolynomial::parse(p.to_string()).to_string(), p.to_string());
    const Jet2 vars[2] = {Jet2::seed(2, 0, 3.0), Jet2::seed(2, 1, -1.0)};
    const Jet2 v = p(vars);
    EXPECT_DOUBLE_EQ(v.value(), 6.0 - 1.0 - 1.5);
    EXPECT_DOUBLE_EQ(v.grad(0), 2.0 - 0.5);
    EXPECT_DOUBLE_EQ(v.grad(1), 2.0 + 1.5);
    EXPECT_DOUBLE_EQ(v.hess(1, 1), -2.0);
    EXPECT_DOUBLE_EQ(v.hess(0, 1), 0.5);
    EXPECT_THROW(MultiPolynomial::parse("mpoly:1@1.0|2@1"), ParseError);
    EXPECT_THROW(MultiPolynomial::parse("mpoly:1@-1"), ParseError);
    EXPECT_THROW(MultiPolynomial::parse("poly:1@0"), ParseError);
}

TEST(MultiPolynomial, MonomialCount) {
    // C(n + d, d)
    EXPECT_EQ(monomials_up_to(3, 3).size(), 20u);
    EXPECT_EQ(monomials_up_to(2, 3).size(), 10u);
    const auto m = monomials_up_to(2, 2);
    EXPECT_EQ(std::set<std::vector<int>>(m.begin(), m.end()).size(), m.size());
}

TEST(RandomPolynomial, DeterministicInSeed) {
    const ModelParams params{2, 1.0};
    const auto a = random_polynomial(3, params, 3, 1.0);
    const auto b = random_polynomial(3, params, 3, 1.0);
    const auto c = random_polynomial(4, params, 3, 1.0);
    ASSERT_EQ(a.poly.terms().size(), 20u);
    bool differs = false;
    for (std::size_t i = 0; i < a.poly.terms().size(); ++i) {
        EXPECT_EQ(a.poly.terms()[i].coeff, b.poly.terms()[i].coeff);
        EXPECT_LE(std::abs(a.poly.terms()[i].coeff), 1.0);
        differs = differs || a.poly.terms()[i].coeff != c.poly.terms()[i].coeff;
    }
    EXPECT_TRUE(differs);
    EXPECT_EQ(make_random_polynomial(3, params, 3, 1.0).id(), "random:deg=3,seed=3,bound=1");
}

TEST(ScalarField, ChecksDimensions) {
    const ModelParams params{2, 1.0};
    const auto u = make_random_polynomial(1, params, 2, 1.0);
    EXPECT_EQ(u.evaluate(params, {0.5, {0.1, 0.2}}).dim(), 3u);
    EXPECT_THROW(u.evaluate(params, {0.5, {0.1}}), DimensionMismatch);
    const ScalarField wrong("wrong", [](const ModelParams&, const Point&) { return Jet2::constant(2, 0.0); });
    EXPECT_THROW(wrong.evaluate(params, {0.5, {0.1, 0.2}}), DimensionMismatch);
    EXPECT_THROW(ModelParams(0, 1.0), std::invalid_argument);
}

TEST(FormatNumber, ShortestRoundTrip) {
    EXPECT_EQ(detail::format_number(0.3), "0.3");
    EXPECT_EQ(detail::format_number(-2.0), "-2");
    EXPECT_EQ(detail::parse_double(detail::format_number(1.0 / 3.0)), 1.0 / 3.0);
}
