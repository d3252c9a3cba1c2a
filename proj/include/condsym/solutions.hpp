#pragma once

/**
 * @file solutions.hpp
 * @brief Exact solutions of the generalized diffusion equation (jointly with the
 *        Monge-Ampere condition) as evaluatable fields.
 *
 * Every family declares the (z, N) it lives at, a domain predicate (evaluation
 * outside raises DomainError) and the residuals it must annihilate.
 */

#include <cmath>
#include <memory>
#include <set>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "condsym/errors.hpp"
#include "condsym/fields.hpp"
#include "condsym/jet2.hpp"
#include "condsym/operators.hpp"

namespace condsym {

/// u = c x e^{-t} + q(t) (z = 0, N = 1).
struct OneDimZ0 {
    double c = 1.0;
    ProfileFunction q;
};

/// u = c x + q(t) (z = 1, N = 1).
struct OneDimZ1 {
    double c = 1.0;
    ProfileFunction q;
};

/// u = q(t) (z not in {0, 1}, N = 1).
struct OneDimGeneric {
    double z = 2.0;
    ProfileFunction q;
};

/// u = c sqrt((x1 + e1 t^{n+1})^2 + (x2 + e2 t^{n+1})^2) (z = 1, N = 2).
struct RadialZ1 {
    double c = 1.0;
    double e1 = 0.0;
    double e2 = 0.0;
    int n = 0;
};

/// u = 2c r cos[(1-z) theta]^{1/(1-z)} with X_a = x_a + e_a t^{(n+1)/z} in polar form.
struct GeneralZ {
    double c = 1.0;
    double e1 = 0.0;
    double e2 = 0.0;
    int n = 0;
    double z = 2.0;
};

/// u = sqrt(psi(x1/x2) x1^2 - 2t (x1^2 + x2^2)) (z = 0, N = 2).
struct Z0Sqrt {
    ProfileFunction psi;
};

/// u = x1 psi1(t) + x2 psi2(t) (z = 0, N = 2).
struct Z0Linear {
    ProfileFunction psi1;
    ProfileFunction psi2;
};

/// GeneralZ with X_a = x_a + e_a phi_a(t).
struct GeneralYphi {
    double c = 1.0;
    double e1 = 0.0;
    double e2 = 0.0;
    double z = 2.0;
    ProfileFunction phi1;
    ProfileFunction phi2;
};

/// u = x1 phi(x1/x2, ..., x1/x_N); solves the Monge-Ampere equation only.
struct MAOnly {
    int N = 3;
    MultiPolynomial phi;
};

struct SolutionFamily;

/// A family with x_a replaced by x_a + e_a phi_a(t).
struct Shifted {
    std::shared_ptr<const SolutionFamily> base;
    std::vector<ProfileFunction> profiles;
    std::vector<double> e;
};

struct SolutionFamily {
    using Kind = std::variant<OneDimZ0, OneDimZ1, OneDimGeneric, RadialZ1, GeneralZ, Z0Sqrt, Z0Linear, GeneralYphi,
                              MAOnly, Shifted>;
    Kind kind;
};

namespace detail {

inline constexpr double kDomainMargin = 1e-6;
inline constexpr double kRadicandFloor = 1e-10;

/// t^p as a jet; fractional p requires t > 0.
inline Jet2 time_power(const Jet2& t, double p) {
    if (is_integer(p)) {
        if (p < 0 && below_threshold(t.value())) throw DivisionByZero("negative power of t = 0");
        return pow(t, static_cast<int>(p));
    }
    if (!(t.value() > 0.0)) throw DomainError("fractional power of t <= 0");
    return pow(t, p);
}

/// 2c r cos[(1-z) theta]^{1/(1-z)} of the shifted coordinates (X, Y).
inline Jet2 polar_profile(double c, double z, const Jet2& X, const Jet2& Y) {
    const Jet2 r2 = X * X + Y * Y;
    if (r2.value() <= kDomainMargin * kDomainMargin) throw DomainError("r too close to 0");
    const Jet2 co = cos((1.0 - z) * atan2(Y, X));
    if (co.value() <= kDomainMargin) throw DomainError("cos[(1-z) theta] <= 0 outside the admissible sector");
    return 2.0 * c * sqrt(r2) * pow(co, 1.0 / (1.0 - z));
}

inline void require_nonzero(double v, const char* what) {
    if (std::abs(v) <= kDomainMargin) throw DomainError(std::string(what) + " too close to 0");
}

}  // namespace detail

/// Natural (N, z) of a family. MAOnly has no z; it reports z = 1.
inline ModelParams default_params(const SolutionFamily& fam) {
    return std::visit(
        [](const auto& f) -> ModelParams {
            using F = std::decay_t<decltype(f)>;
            if constexpr (std::is_same_v<F, OneDimZ0>) return {1, 0.0};
            if constexpr (std::is_same_v<F, OneDimZ1>) return {1, 1.0};
            if constexpr (std::is_same_v<F, OneDimGeneric>) return {1, f.z};
            if constexpr (std::is_same_v<F, RadialZ1>) return {2, 1.0};
            if constexpr (std::is_same_v<F, GeneralZ>) return {2, f.z};
            if constexpr (std::is_same_v<F, Z0Sqrt> || std::is_same_v<F, Z0Linear>) return {2, 0.0};
            if constexpr (std::is_same_v<F, GeneralYphi>) return {2, f.z};
            if constexpr (std::is_same_v<F, MAOnly>) return {f.N, 1.0};
            if constexpr (std::is_same_v<F, Shifted>) return default_params(*f.base);
        },
        fam.kind);
}

inline int spatial_dim_of(const SolutionFamily& fam) { return default_params(fam).spatial_dim; }

inline bool admissible(const SolutionFamily& fam, const ModelParams& params) {
    const auto d = default_params(fam);
    if (d.spatial_dim != params.spatial_dim) return false;
    if (const auto* s = std::get_if<Shifted>(&fam.kind)) return admissible(*s->base, params);
    return std::holds_alternative<MAOnly>(fam.kind) || d.z == params.z;
}

namespace detail {

inline void validate(const SolutionFamily& fam) {
    std::visit(
        [](const auto& f) {
            using F = std::decay_t<decltype(f)>;
            if constexpr (std::is_same_v<F, OneDimGeneric>) {
                if (f.z == 0.0 || f.z == 1.0) throw std::invalid_argument("onedim family needs z not in {0, 1}");
            } else if constexpr (std::is_same_v<F, RadialZ1>) {
                if (!(f.c > 0.0)) throw std::invalid_argument("radial-z1 needs c > 0");
            } else if constexpr (std::is_same_v<F, GeneralZ> || std::is_same_v<F, GeneralYphi>) {
                if (!(f.c > 0.0)) throw std::invalid_argument("general family needs c > 0");
                if (f.z == 0.0 || f.z == 1.0) throw std::invalid_argument("general family needs z not in {0, 1}");
            } else if constexpr (std::is_same_v<F, MAOnly>) {
                if (f.N < 2) throw std::invalid_argument("ma-only needs N >= 2");
                if (f.phi.num_vars() != static_cast<std::size_t>(f.N - 1)) {
                    throw DimensionMismatch("ma-only phi must take N-1 arguments");
                }
            } else if constexpr (std::is_same_v<F, Shifted>) {
                if (!f.base) throw std::invalid_argument("shifted family without base");
                const auto n = static_cast<std::size_t>(spatial_dim_of(*f.base));
                if (f.e.size() != n || f.profiles.size() != n) throw DimensionMismatch("shift length != N");
            }
        },
        fam.kind);
}

/// Evaluate on coordinate jets (t, x_1..x_N) of any jet dimension.
inline Jet2 evaluate_on(const SolutionFamily& fam, const Jet2& t, std::span<const Jet2> x) {
    return std::visit(
        [&](const auto& f) -> Jet2 {
            using F = std::decay_t<decltype(f)>;
            if constexpr (std::is_same_v<F, OneDimZ0>) {
                return f.c * x[0] * exp(-t) + f.q(t);
            } else if constexpr (std::is_same_v<F, OneDimZ1>) {
                return f.c * x[0] + f.q(t);
            } else if constexpr (std::is_same_v<F, OneDimGeneric>) {
                const Jet2 u = f.q(t);
                require_nonzero(u.value(), "u");
                return u;
            } else if constexpr (std::is_same_v<F, RadialZ1>) {
                const Jet2 s = time_power(t, f.n + 1.0);
                const Jet2 X = x[0] + f.e1 * s;
                const Jet2 Y = x[1] + f.e2 * s;
                const Jet2 r2 = X * X + Y * Y;
                if (r2.value() <= kDomainMargin * kDomainMargin) throw DomainError("r too close to 0");
                return f.c * sqrt(r2);
            } else if constexpr (std::is_same_v<F, GeneralZ>) {
                const Jet2 s = time_power(t, (f.n + 1.0) / f.z);
                return polar_profile(f.c, f.z, x[0] + f.e1 * s, x[1] + f.e2 * s);
            } else if constexpr (std::is_same_v<F, Z0Sqrt>) {
                require_nonzero(x[1].value(), "x2");
                const Jet2 x1sq = x[0] * x[0];
                const Jet2 radicand = f.psi(x[0] / x[1]) * x1sq - 2.0 * t * (x1sq + x[1] * x[1]);
                if (radicand.value() < kRadicandFloor) throw DomainError("negative radicand");
                return sqrt(radicand);
            } else if constexpr (std::is_same_v<F, Z0Linear>) {
                return x[0] * f.psi1(t) + x[1] * f.psi2(t);
            } else if constexpr (std::is_same_v<F, GeneralYphi>) {
                return polar_profile(f.c, f.z, x[0] + f.e1 * f.phi1(t), x[1] + f.e2 * f.phi2(t));
            } else if constexpr (std::is_same_v<F, MAOnly>) {
                std::vector<Jet2> ratios;
                for (std::size_t a = 1; a < x.size(); ++a) {
                    require_nonzero(x[a].value(), "x_a");
                    ratios.push_back(x[0] / x[a]);
                }
                return x[0] * f.phi(ratios);
            } else {
                std::vector<Jet2> shifted(x.begin(), x.end());
                for (std::size_t a = 0; a < shifted.size(); ++a) shifted[a] = shifted[a] + f.e[a] * f.profiles[a](t);
                return evaluate_on(*f.base, t, shifted);
            }
        },
        fam.kind);
}

}  // namespace detail

inline Jet2 evaluate_solution(const SolutionFamily& fam, const ModelParams& params, const Point& p) {
    detail::validate(fam);
    if (!admissible(fam, params)) {
        throw DimensionMismatch("family is not defined at N=" + std::to_string(params.spatial_dim) +
                                ", z=" + detail::format_number(params.z));
    }
    check_point(params, p);
    const auto coords = coordinate_jets(p);
    return detail::evaluate_on(fam, coords[0], std::span<const Jet2>(coords).subspan(1));
}

inline std::string to_string(const SolutionFamily& fam) {
    using detail::format_number;
    return std::visit(
        [](const auto& f) -> std::string {
            using F = std::decay_t<decltype(f)>;
            if constexpr (std::is_same_v<F, OneDimZ0>) {
                return "onedim-z0:c=" + format_number(f.c) + ",q=" + f.q.to_string();
            } else if constexpr (std::is_same_v<F, OneDimZ1>) {
                return "onedim-z1:c=" + format_number(f.c) + ",q=" + f.q.to_string();
            } else if constexpr (std::is_same_v<F, OneDimGeneric>) {
                return "onedim:z=" + format_number(f.z) + ",q=" + f.q.to_string();
            } else if constexpr (std::is_same_v<F, RadialZ1>) {
                return "radial-z1:c=" + format_number(f.c) + ",e1=" + format_number(f.e1) + ",e2=" +
                       format_number(f.e2) + ",n=" + std::to_string(f.n);
            } else if constexpr (std::is_same_v<F, GeneralZ>) {
                return "general-z:c=" + format_number(f.c) + ",e1=" + format_number(f.e1) + ",e2=" +
                       format_number(f.e2) + ",n=" + std::to_string(f.n) + ",z=" + format_number(f.z);
            } else if constexpr (std::is_same_v<F, Z0Sqrt>) {
                return "z0-sqrt:psi=" + f.psi.to_string();
            } else if constexpr (std::is_same_v<F, Z0Linear>) {
                return "z0-linear:psi1=" + f.psi1.to_string() + ",psi2=" + f.psi2.to_string();
            } else if constexpr (std::is_same_v<F, GeneralYphi>) {
                return "general-yphi:c=" + format_number(f.c) + ",e1=" + format_number(f.e1) + ",e2=" +
                       format_number(f.e2) + ",z=" + format_number(f.z) + ",phi1=" + f.phi1.to_string() +
                       ",phi2=" + f.phi2.to_string();
            } else if constexpr (std::is_same_v<F, MAOnly>) {
                return "ma-only:N=" + std::to_string(f.N) + ",phi=" + f.phi.to_string();
            } else {
                std::string s = "shifted[" + to_string(*f.base) + "](e=" + detail::join_numbers(f.e) + ";profiles=";
                for (std::size_t i = 0; i < f.profiles.size(); ++i) {
                    if (i) s += '|';
                    s += f.profiles[i].to_string();
                }
                return s + ")";
            }
        },
        fam.kind);
}

inline std::vector<ResidualKind> designated_residuals(const SolutionFamily& fam) {
    return std::visit(
        [](const auto& f) -> std::vector<ResidualKind> {
            using F = std::decay_t<decltype(f)>;
            if constexpr (std::is_same_v<F, OneDimZ0> || std::is_same_v<F, OneDimZ1> ||
                          std::is_same_v<F, OneDimGeneric>) {
                return {ResidualKind::Diffusion};
            } else if constexpr (std::is_same_v<F, MAOnly>) {
                return {ResidualKind::MongeAmpere};
            } else if constexpr (std::is_same_v<F, Shifted>) {
                return designated_residuals(*f.base);
            } else {
                return {ResidualKind::Diffusion, ResidualKind::MongeAmpere};
            }
        },
        fam.kind);
}

/// u(t, x) -> u(t, x + e phi(t)).
inline SolutionFamily shift_by_yphi(const SolutionFamily& fam, std::vector<ProfileFunction> profiles,
                                    std::vector<double> e) {
    SolutionFamily out{Shifted{std::make_shared<const SolutionFamily>(fam), std::move(profiles), std::move(e)}};
    detail::validate(out);
    return out;
}

inline ScalarField as_field(const SolutionFamily& fam) {
    detail::validate(fam);
    return ScalarField(to_string(fam),
                       [fam](const ModelParams& params, const Point& p) { return evaluate_solution(fam, params, p); });
}

/// phi(w1, w2) = t^{-(n+1)/z} u(t, w t^{(n+1)/z}) at fixed t (N = 2, z != 0).
inline ReducedField reduce_by_ansatz(const ScalarField& field, const ModelParams& params, int n, double t) {
    if (params.spatial_dim != 2) throw DimensionMismatch("similarity ansatz is two-dimensional");
    if (params.z == 0.0) throw ZeroDynamicalExponent("similarity ansatz needs z != 0");
    const double p = (n + 1.0) / params.z;
    const double tau = detail::is_integer(p) ? detail::ipow(t, static_cast<int>(p)) : std::pow(t, p);
    if (!std::isfinite(tau) || detail::below_threshold(tau)) throw DomainError("t^{(n+1)/z} not usable at this t");
    return ReducedField("ansatz[" + field.id() + "](n=" + std::to_string(n) + ",t=" + detail::format_number(t) + ")",
                        [field, params, tau, t](double w1, double w2) {
                            const Jet2 x1 = tau * Jet2::seed(2, 0, w1);
                            const Jet2 x2 = tau * Jet2::seed(2, 1, w2);
                            const Jet2 u = field.evaluate(params, Point{t, {x1.value(), x2.value()}});
                            const Jet2 inner[3] = {Jet2::constant(2, t), x1, x2};
                            return chain(u, inner) / tau;
                        });
}

/// The two equations the z = 0 problem splits into under u = x1 phi(w, t), w = x1/x2:
///   first:  w^2 phi phi_t + 1 + w^2
///   second: w phi_ww + 2 phi_w
struct Z0Decomposition {
    Residual first;
    Residual second;
};

inline Z0Decomposition z0_decomposed(const ScalarField& field, const ModelParams& params, const Point& p) {
    if (params.spatial_dim != 2 || params.z != 0.0) throw DimensionMismatch("decomposition needs z = 0, N = 2");
    check_point(params, p);
    detail::require_nonzero(p.x[0], "x1");
    detail::require_nonzero(p.x[1], "x2");
    // parametrize the ray through p by (t, w) with x2 held fixed
    const double x2v = p.x[1];
    const Jet2 t = Jet2::seed(2, 0, p.t);
    const Jet2 w = Jet2::seed(2, 1, p.x[0] / x2v);
    const Jet2 x1 = w * x2v;
    const Jet2 inner[3] = {t, x1, Jet2::constant(2, x2v)};
    const Jet2 phi = chain(field.evaluate(params, p), inner) / x1;

    const double wv = w.value();
    const double a = wv * wv * phi.value() * phi.grad(0);
    const double b = wv * phi.hess(1, 1);
    const double c = 2.0 * phi.grad(1);
    return {{a + 1.0 + wv * wv, 1.0 + std::abs(a) + 1.0 + wv * wv}, {b + c, 1.0 + std::abs(b) + std::abs(c)}};
}

}  // namespace condsym
