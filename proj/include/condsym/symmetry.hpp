#pragma once

/**
 * @file symmetry.hpp
 * @brief Finite transformations of the massless realization of A_N(z) and
 *        their action on fields.
 *
 * Group elements act on (t, x, u) as
 *   X_n   : t' = t (1 - z n eps t^n)^{-1/n},  x' = A x,  u' = A^lambda u,
 *           A = (1 - z n eps t^n)^{-(n+1)/(z n)}
 *           (n = -1: time shift by z eps; n = 0: dilatation; z = 0: x' = x e^{eps t^n})
 *   Y_k   : x'_a = x_a + v_a t^k              (k = m + 1/z)
 *   Yphi  : x'_a = x_a + e_a phi_a(t)
 *   Rot   : rotation in the (x_a, x_b) plane, generated by J_ab = x_a d_b - x_b d_a.
 *
 * A field u is pushed forward to u'(g p) = factor(p) u(p). All coordinate maps are
 * written once as templates over the scalar type, so the same code yields plain
 * points (double) and exact second-order jets of the map (Jet2).
 */

#include <cmath>
#include <cstddef>
#include <functional>
#include <span>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "condsym/errors.hpp"
#include "condsym/fields.hpp"
#include "condsym/jet2.hpp"
#include "condsym/operators.hpp"

namespace condsym {

struct Xn {
    int n = 0;
    double eps = 0.0;
    double lambda = 1.0;
};

struct Yk {
    int k = 0;
    std::vector<double> v;
};

struct Yphi {
    std::vector<ProfileFunction> profiles;
    std::vector<double> e;
};

/// Rotation by `angle` in the (x_a, x_b) plane; indices are 0-based.
struct Rot {
    std::size_t a = 0;
    std::size_t b = 1;
    double angle = 0.0;
};

using GroupElement = std::variant<Xn, Yk, Yphi, Rot>;

/// One-parameter groups: the inverse negates the parameter.
inline GroupElement inverse(const GroupElement& g) {
    return std::visit(
        [](auto h) -> GroupElement {
            using H = std::decay_t<decltype(h)>;
            if constexpr (std::is_same_v<H, Xn>) {
                h.eps = -h.eps;
            } else if constexpr (std::is_same_v<H, Yk>) {
                for (auto& c : h.v) c = -c;
            } else if constexpr (std::is_same_v<H, Yphi>) {
                for (auto& c : h.e) c = -c;
            } else {
                h.angle = -h.angle;
            }
            return h;
        },
        g);
}

inline std::string to_string(const GroupElement& g) {
    using detail::format_number;
    using detail::join_numbers;
    return std::visit(
        [](const auto& h) -> std::string {
            using H = std::decay_t<decltype(h)>;
            if constexpr (std::is_same_v<H, Xn>) {
                std::string s = "Xn:n=" + std::to_string(h.n) + ",eps=" + format_number(h.eps);
                if (h.lambda != 1.0) s += ",lambda=" + format_number(h.lambda);
                return s;
            } else if constexpr (std::is_same_v<H, Yk>) {
                return "Yk:k=" + std::to_string(h.k) + ",v=" + join_numbers(h.v);
            } else if constexpr (std::is_same_v<H, Yphi>) {
                std::string s = "Yphi:e=" + join_numbers(h.e) + ";profiles=";
                for (std::size_t i = 0; i < h.profiles.size(); ++i) {
                    if (i) s += '|';
                    s += h.profiles[i].to_string();
                }
                return s;
            } else {
                return "rot:a=" + std::to_string(h.a + 1) + ",b=" + std::to_string(h.b + 1) +
                       ",angle=" + format_number(h.angle);
            }
        },
        g);
}

template <class S>
struct MappedPoint {
    S t;
    std::vector<S> x;
    S u_factor;
};

namespace detail {

inline double value_of(double v) { return v; }
inline double value_of(const Jet2& j) { return j.value(); }

inline double int_power(double b, int k) {
    if (k < 0 && below_threshold(b)) throw DivisionByZero("negative power of t = 0");
    return ipow(b, k);
}
inline Jet2 int_power(const Jet2& b, int k) { return pow(b, k); }

inline double real_power(double b, double p) { return std::pow(b, p); }
inline Jet2 real_power(const Jet2& b, double p) { return pow(b, p); }

inline double exponential(double v) { return std::exp(v); }
inline Jet2 exponential(const Jet2& v) { return exp(v); }

inline double profile_at(const ProfileFunction& f, double t) { return f(t).value; }
inline Jet2 profile_at(const ProfileFunction& f, const Jet2& t) { return f(t); }

template <class S>
S constant_like(const S& like, double c) {
    if constexpr (std::is_same_v<S, double>) {
        return c;
    } else {
        return Jet2::constant(like.dim(), c);
    }
}

inline void check_sizes(const GroupElement& g, std::size_t n) {
    auto fail = [&](const std::string& what) {
        throw DimensionMismatch(what + " does not match N=" + std::to_string(n));
    };
    if (const auto* y = std::get_if<Yk>(&g); y && y->v.size() != n) fail("Yk velocity length");
    if (const auto* y = std::get_if<Yphi>(&g); y && (y->e.size() != n || y->profiles.size() != n)) {
        fail("Yphi parameter length");
    }
    if (const auto* r = std::get_if<Rot>(&g); r && (r->a >= n || r->b >= n || r->a == r->b)) fail("rotation plane");
}

}  // namespace detail

/// Apply g to (t, x); returns the image and the factor multiplying u.
template <class S>
MappedPoint<S> map_point(const GroupElement& g, const ModelParams& params, const S& t, std::vector<S> x) {
    using namespace detail;
    check_sizes(g, x.size());
    const S one = constant_like(t, 1.0);
    if (const auto* h = std::get_if<Xn>(&g)) {
        const double z = params.z;
        const int n = h->n;
        if (z == 0.0) {
            const S tn = int_power(t, n);
            const S f = exponential(h->eps * tn);
            for (auto& xa : x) xa = xa * f;
            return {t, std::move(x), exponential(h->lambda * h->eps * tn)};
        }
        if (n == -1) return {t + z * h->eps, std::move(x), one};
        if (n == 0) {
            const double f = std::exp(h->eps);
            for (auto& xa : x) xa = xa * f;
            return {t * std::exp(z * h->eps), std::move(x), one * std::exp(h->lambda * h->eps)};
        }
        const S s = 1.0 - z * n * h->eps * int_power(t, n);
        if (!(value_of(s) > 0.0)) {
            throw BranchError("1 - z n eps t^n = " + std::to_string(value_of(s)) + " <= 0 for n=" +
                              std::to_string(n));
        }
        const S a = real_power(s, -(n + 1.0) / (z * n));
        for (auto& xa : x) xa = xa * a;
        return {t * real_power(s, -1.0 / n), std::move(x), real_power(s, -h->lambda * (n + 1.0) / (z * n))};
    }
    if (const auto* h = std::get_if<Yk>(&g)) {
        const S tk = int_power(t, h->k);
        for (std::size_t a = 0; a < x.size(); ++a) x[a] = x[a] + h->v[a] * tk;
        return {t, std::move(x), one};
    }
    if (const auto* h = std::get_if<Yphi>(&g)) {
        for (std::size_t a = 0; a < x.size(); ++a) x[a] = x[a] + h->e[a] * profile_at(h->profiles[a], t);
        return {t, std::move(x), one};
    }
    const auto& r = std::get<Rot>(g);
    const double c = std::cos(r.angle), s = std::sin(r.angle);
    const S xa = x[r.a], xb = x[r.b];
    x[r.a] = c * xa - s * xb;
    x[r.b] = s * xa + c * xb;
    return {t, std::move(x), one};
}

struct TransformFactors {
    double A = 1.0;                  // factor on x (and on u when lambda = 1)
    double u_factor = 1.0;           // A^lambda
    double t_prime = 0.0;
    double obstruction_coeff = 0.0;  // n(n+1) eps t^{n-1} for X_n, 0 otherwise
};

inline std::pair<Point, TransformFactors> transform_point(const GroupElement& g, const ModelParams& params,
                                                          const Point& p) {
    check_point(params, p);
    auto m = map_point<double>(g, params, p.t, p.x);
    TransformFactors f;
    f.t_prime = m.t;
    f.u_factor = m.u_factor;
    if (const auto* h = std::get_if<Xn>(&g)) {
        f.A = map_point<double>(Xn{h->n, h->eps, 1.0}, params, p.t, {1.0}).x[0];
        if (h->n != -1 && h->n != 0) {
            f.obstruction_coeff = h->n * (h->n + 1.0) * h->eps * detail::int_power(p.t, h->n - 1);
        }
    }
    return {Point{m.t, std::move(m.x)}, f};
}

/// u'(q) = factor(g^{-1} q) u(g^{-1} q), with the full second-order chain rule through g^{-1}.
inline ScalarField pushforward_field(const GroupElement& g, ScalarField u) {
    std::string id = "push[" + to_string(g) + "](" + u.id() + ")";
    return ScalarField(std::move(id), [g, inv = inverse(g), u = std::move(u)](const ModelParams& prm, const Point& q) {
        const auto coords = coordinate_jets(q);
        const std::vector<Jet2> qx(coords.begin() + 1, coords.end());
        const auto back = map_point<Jet2>(inv, prm, coords[0], qx);
        const auto fwd = map_point<Jet2>(g, prm, back.t, back.x);

        Point p{back.t.value(), {}};
        std::vector<Jet2> inner{back.t};
        for (const auto& xa : back.x) {
            p.x.push_back(xa.value());
            inner.push_back(xa);
        }
        return fwd.u_factor * chain(u.evaluate(prm, p), inner);
    });
}

namespace detail {

inline const Xn& require_xn(const GroupElement& g, const ModelParams& params) {
    const auto* h = std::get_if<Xn>(&g);
    if (h == nullptr) throw std::invalid_argument("closed-form laws apply to X_n elements only");
    if (params.z == 0.0) throw ZeroDynamicalExponent("closed-form derivative laws need z != 0");
    if (h->lambda != 1.0) throw std::invalid_argument("closed-form derivative laws assume lambda = 1");
    return *h;
}

/// A^{zn/(n+1)} = 1 / (1 - z n eps t^n); unused (multiplied by zero) for n = -1.
inline double obstruction_power(const Xn& h, const ModelParams& params, double a) {
    if (h.n == -1) return 0.0;
    return std::pow(a, params.z * h.n / (h.n + 1.0));
}

}  // namespace detail

/// Per-line differences between the jet of the pushforward and the closed-form laws.
struct DerivativeLawGaps {
    double value = 0.0;     // u' = A u
    double spatial = 0.0;   // u'_a' = u_a
    double hessian = 0.0;   // u'_a'b' = u_ab / A
    double time = 0.0;      // u'_t'
    double mixed = 0.0;     // u'_t'b'
    double max() const { return std::max({value, spatial, hessian, time, mixed}); }
};

/// Closed-form transformed derivatives under X_n. The kappa-terms carry the same
/// A^{-z} as the leading terms (dt/dt' = A^{-z}):
///   u'_t'  = A^{1-z} [u_t + (u - x.grad u) kappa rho]
///   u'_t'b = A^{-z}  [u_tb - (Hess u x)_b kappa rho],   kappa = n(n+1) eps t^{n-1}, rho = A^{zn/(n+1)}.
inline DerivativeLawGaps derivative_law_gaps(const GroupElement& g, const ModelParams& params, const ScalarField& u,
                                             const Point& p) {
    const Xn& h = detail::require_xn(g, params);
    const auto [q, f] = transform_point(g, params, p);
    const Jet2 j = u.evaluate(params, p);
    const Jet2 jp = pushforward_field(g, u).evaluate(params, q);
    const std::size_t n = static_cast<std::size_t>(params.spatial_dim);
    const double a = f.A;
    const double z = params.z;
    const double kr = f.obstruction_coeff * detail::obstruction_power(h, params, a);

    DerivativeLawGaps gaps;
    gaps.value = std::abs(jp.value() - a * j.value());
    double x_grad = 0.0;
    for (std::size_t i = 0; i < n; ++i) x_grad += p.x[i] * j.grad(i + 1);
    gaps.time = std::abs(jp.grad(0) - std::pow(a, 1.0 - z) * (j.grad(0) + (j.value() - x_grad) * kr));
    for (std::size_t b = 0; b < n; ++b) {
        gaps.spatial = std::max(gaps.spatial, std::abs(jp.grad(b + 1) - j.grad(b + 1)));
        double hx = 0.0;
        for (std::size_t i = 0; i < n; ++i) hx += p.x[i] * j.hess(i + 1, b + 1);
        gaps.mixed = std::max(gaps.mixed, std::abs(jp.hess(0, b + 1) - std::pow(a, -z) * (j.hess(0, b + 1) - hx * kr)));
        for (std::size_t c = 0; c < n; ++c) {
            gaps.hessian = std::max(gaps.hessian, std::abs(jp.hess(b + 1, c + 1) - j.hess(b + 1, c + 1) / a));
        }
    }
    return gaps;
}

inline double derivative_law_gap(const GroupElement& g, const ModelParams& params, const ScalarField& u,
                                 const Point& p) {
    return derivative_law_gaps(g, params, u, p).max();
}

struct IdentityCheck {
    double transformed_w1 = 0.0;  // W^I of the pushforward at g p
    double predicted_w1 = 0.0;    // A^{1-z-N} W^I + obstruction
    double obstruction = 0.0;     // A^{1-z-N} kappa rho u W_N^II
    double monge_ampere = 0.0;    // W_N^II of u at p
    double gap = 0.0;
};

/// W'^I = A^{1-z-N} (W^I + kappa rho u W_N^II) for the pushforward under X_n.
/// The second term vanishes for n in {-1, 0} or when the Monge-Ampere condition holds.
inline IdentityCheck pushforward_identity(const GroupElement& g, const ModelParams& params, const ScalarField& u,
                                          const Point& p) {
    const Xn& h = detail::require_xn(g, params);
    const auto [q, f] = transform_point(g, params, p);
    const Jet2 j = u.evaluate(params, p);
    const Jet2 jp = pushforward_field(g, u).evaluate(params, q);
    const double base = std::pow(f.A, 1.0 - params.z - params.spatial_dim);

    IdentityCheck c;
    c.monge_ampere = monge_ampere(j, params);
    c.obstruction =
        base * f.obstruction_coeff * detail::obstruction_power(h, params, f.A) * j.value() * c.monge_ampere;
    c.predicted_w1 = base * w1(j, params) + c.obstruction;
    c.transformed_w1 = w1(jp, params);
    c.gap = std::abs(c.transformed_w1 - c.predicted_w1);
    return c;
}

inline double pushforward_identity_gap(const GroupElement& g, const ModelParams& params, const ScalarField& u,
                                       const Point& p) {
    return pushforward_identity(g, params, u, p).gap;
}

// ---------------------------------------------------------------------------
// Infinitesimal generators acting on test functions F(t, x, u)

struct GenX {
    int n = 0;
    double lambda = 1.0;
};

/// Y_m^{(a)} = t^k d_a with k = m + 1/z; `a` is 0-based.
struct GenY {
    int k = 0;
    std::size_t a = 0;
};

/// J_ab = x_a d_b - x_b d_a; indices 0-based.
struct GenJ {
    std::size_t a = 0;
    std::size_t b = 1;
};

using AlgebraGenerator = std::variant<GenX, GenY, GenJ>;

inline std::string to_string(const AlgebraGenerator& g) {
    return std::visit(
        [](const auto& h) -> std::string {
            using H = std::decay_t<decltype(h)>;
            if constexpr (std::is_same_v<H, GenX>) return "X" + std::to_string(h.n);
            if constexpr (std::is_same_v<H, GenY>) return "Y" + std::to_string(h.k) + "^" + std::to_string(h.a + 1);
            if constexpr (std::is_same_v<H, GenJ>) return "J" + std::to_string(h.a + 1) + std::to_string(h.b + 1);
        },
        g);
}

/// Point in (t, x_1..x_N, u).
struct ExtendedPoint {
    double t = 0.0;
    std::vector<double> x;
    double u = 0.0;
};

/// F evaluated on seeded jets of (t, x_1..x_N, u).
using TestFunction = std::function<Jet2(std::span<const Jet2> vars)>;

inline std::vector<Jet2> extended_jets(const ExtendedPoint& p) {
    const std::size_t d = p.x.size() + 2;
    std::vector<Jet2> v;
    v.push_back(Jet2::seed(d, 0, p.t));
    for (std::size_t a = 0; a < p.x.size(); ++a) v.push_back(Jet2::seed(d, a + 1, p.x[a]));
    v.push_back(Jet2::seed(d, d - 1, p.u));
    return v;
}

/// Coefficients (xi^t, xi^1..xi^N, eta) of a generator, as jets over (t, x, u).
inline std::vector<Jet2> generator_coefficients(const AlgebraGenerator& gen, const ModelParams& params,
                                                std::span<const Jet2> vars) {
    const std::size_t d = vars.size();
    const std::size_t n = d - 2;
    std::vector<Jet2> xi(d, Jet2::constant(d, 0.0));
    const Jet2& t = vars[0];
    if (const auto* g = std::get_if<GenX>(&gen)) {
        const Jet2 tn = pow(t, g->n);
        xi[0] = params.z * pow(t, g->n + 1);
        for (std::size_t a = 0; a < n; ++a) xi[a + 1] = (g->n + 1.0) * tn * vars[a + 1];
        xi[d - 1] = g->lambda * (g->n + 1.0) * tn * vars[d - 1];
    } else if (const auto* g = std::get_if<GenY>(&gen)) {
        if (g->a >= n) throw DimensionMismatch("Y generator index out of range");
        xi[g->a + 1] = pow(t, g->k);
    } else {
        const auto& j = std::get<GenJ>(gen);
        if (j.a >= n || j.b >= n || j.a == j.b) throw DimensionMismatch("J generator indices out of range");
        xi[j.b + 1] = vars[j.a + 1];
        xi[j.a + 1] = -vars[j.b + 1];
    }
    return xi;
}

/// Value and gradient over (t, x, u) of a first-order quantity.
struct FirstJet {
    double value = 0.0;
    std::vector<double> grad;
};

/// (gen F) as a function of (t, x, u). Its gradient, and one further generator
/// application, are exact from the second-order jet of F.
class GeneratedFunction {
public:
    GeneratedFunction(AlgebraGenerator gen, ModelParams params, TestFunction f)
        : gen_(std::move(gen)), params_(params), f_(std::move(f)) {}

    FirstJet operator()(const ExtendedPoint& p) const {
        const auto vars = extended_jets(p);
        const Jet2 f = f_(vars);
        const auto xi = generator_coefficients(gen_, params_, vars);
        const std::size_t d = vars.size();
        FirstJet r{0.0, std::vector<double>(d, 0.0)};
        for (std::size_t i = 0; i < d; ++i) r.value += xi[i].value() * f.grad(i);
        for (std::size_t j = 0; j < d; ++j) {
            double s = 0.0;
            for (std::size_t i = 0; i < d; ++i) s += xi[i].grad(j) * f.grad(i) + xi[i].value() * f.hess(i, j);
            r.grad[j] = s;
        }
        return r;
    }

    /// outer(gen F) at p. Second-order terms are formed as (xi_outer^j xi^i) F_ij so that
    /// the two orderings of a commuting pair produce bitwise-identical products.
    double applied(const AlgebraGenerator& outer, const ExtendedPoint& p) const {
        const auto vars = extended_jets(p);
        const Jet2 f = f_(vars);
        const auto xi = generator_coefficients(gen_, params_, vars);
        const auto xo = generator_coefficients(outer, params_, vars);
        const std::size_t d = vars.size();
        double first = 0.0, second = 0.0;
        for (std::size_t j = 0; j < d; ++j) {
            for (std::size_t i = 0; i < d; ++i) {
                first += xo[j].value() * xi[i].grad(j) * f.grad(i);
                second += (xo[j].value() * xi[i].value()) * f.hess(i, j);
            }
        }
        return first + second;
    }

    const AlgebraGenerator& generator() const noexcept { return gen_; }

private:
    AlgebraGenerator gen_;
    ModelParams params_;
    TestFunction f_;
};

inline GeneratedFunction apply_generator(const AlgebraGenerator& gen, const ModelParams& params, TestFunction f) {
    return GeneratedFunction(gen, params, std::move(f));
}

using LinearCombination = std::vector<std::pair<double, AlgebraGenerator>>;

/// Right-hand side of [g1, g2] from the commutator table of the massless realization,
/// extended by [X_n, J] = 0, [Y, Y] = 0 and the so(N) relations among the J_ab.
inline LinearCombination expected_commutator(const AlgebraGenerator& g1, const AlgebraGenerator& g2,
                                             const ModelParams& params) {
    const double z = params.z;
    auto negate = [](LinearCombination c) {
        for (auto& [coef, g] : c) coef = -coef;
        return c;
    };
    if (const auto* x1 = std::get_if<GenX>(&g1)) {
        if (const auto* x2 = std::get_if<GenX>(&g2)) {
            if (x1->lambda != x2->lambda) throw std::invalid_argument("X generators with different lambda");
            return {{z * (x2->n - x1->n), GenX{x1->n + x2->n, x1->lambda}}};
        }
        if (const auto* y = std::get_if<GenY>(&g2)) {
            // (z m - n) with m = k - 1/z
            return {{z * y->k - 1.0 - x1->n, GenY{y->k + x1->n, y->a}}};
        }
        return {};
    }
    if (const auto* y1 = std::get_if<GenY>(&g1)) {
        if (std::holds_alternative<GenX>(g2)) return negate(expected_commutator(g2, g1, params));
        if (std::holds_alternative<GenY>(g2)) return {};
        const auto& j = std::get<GenJ>(g2);
        LinearCombination c;
        if (y1->a == j.a) c.push_back({1.0, GenY{y1->k, j.b}});
        if (y1->a == j.b) c.push_back({-1.0, GenY{y1->k, j.a}});
        return c;
    }
    const auto& j1 = std::get<GenJ>(g1);
    if (!std::holds_alternative<GenJ>(g2)) {
        if (std::holds_alternative<GenX>(g2)) return {};
        return negate(expected_commutator(g2, g1, params));
    }
    const auto& j2 = std::get<GenJ>(g2);
    const std::size_t a = j1.a, b = j1.b, c = j2.a, d = j2.b;
    LinearCombination out;
    auto add = [&](bool delta, double sign, std::size_t p, std::size_t q) {
        if (delta && p != q) out.push_back({sign, GenJ{p, q}});
    };
    add(b == c, 1.0, a, d);
    add(a == d, 1.0, b, c);
    add(b == d, -1.0, a, c);
    add(a == c, -1.0, b, d);
    return out;
}

/// |g1(g2 F) - g2(g1 F) - expected F| at p.
inline double commutator_gap(const AlgebraGenerator& g1, const AlgebraGenerator& g2, const LinearCombination& expected,
                             const ModelParams& params, const TestFunction& f, const ExtendedPoint& p) {
    const double lhs = apply_generator(g2, params, f).applied(g1, p) - apply_generator(g1, params, f).applied(g2, p);
    double rhs = 0.0;
    for (const auto& [coef, g] : expected) rhs += coef * apply_generator(g, params, f)(p).value;
    return std::abs(lhs - rhs);
}

/// Three polynomial test functions of (t, x_1..x_N, u), mixing all variables.
inline std::vector<TestFunction> standard_test_functions() {
    std::vector<TestFunction> fs;
    fs.push_back([](std::span<const Jet2> v) {
        const std::size_t n = v.size() - 2;
        Jet2 s = v[0] * v[1] * v[n + 1];
        for (std::size_t a = 1; a <= n; ++a) s += v[a] * v[a];
        return s;
    });
    fs.push_back([](std::span<const Jet2> v) {
        const std::size_t n = v.size() - 2;
        const Jet2& t = v[0];
        const Jet2& u = v[n + 1];
        return t * t * u * u + pow(v[1], 3) - t * v[n] * u + u;
    });
    fs.push_back([](std::span<const Jet2> v) {
        const std::size_t n = v.size() - 2;
        const Jet2& u = v[n + 1];
        Jet2 lin = Jet2::constant(v.size(), 0.0);
        for (std::size_t a = 1; a <= n; ++a) lin += static_cast<double>(a) * v[a];
        return (1.0 + v[0] + u) * lin + v[1] * v[n] * u * u;
    });
    return fs;
}

}  // namespace condsym
