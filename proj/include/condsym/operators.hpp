#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "condsym/errors.hpp"
#include "condsym/fields.hpp"
#include "condsym/jet2.hpp"
#include "condsym/linalg.hpp"

namespace condsym {

enum class ResidualKind { Diffusion, GeneralInvariant, MongeAmpere, ReducedFirst, ReducedSecond, Z0Diffusion };

inline std::string_view to_string(ResidualKind k) {
    switch (k) {
        case ResidualKind::Diffusion: return "diffusion";
        case ResidualKind::GeneralInvariant: return "general-invariant";
        case ResidualKind::MongeAmpere: return "monge-ampere";
        case ResidualKind::ReducedFirst: return "reduced-first";
        case ResidualKind::ReducedSecond: return "reduced-second";
        case ResidualKind::Z0Diffusion: return "z0-diffusion";
    }
    return "unknown";
}

inline ResidualKind parse_residual_kind(std::string_view s) {
    for (auto k : {ResidualKind::Diffusion, ResidualKind::GeneralInvariant, ResidualKind::MongeAmpere,
                   ResidualKind::ReducedFirst, ResidualKind::ReducedSecond, ResidualKind::Z0Diffusion}) {
        if (to_string(k) == s) return k;
    }
    throw ParseError("unknown residual kind '" + std::string(s) + "'");
}

/// Raw residual together with the magnitude it should be judged against.
struct Residual {
    double value = 0.0;
    double scale = 1.0;
    double normalized() const { return value / scale; }
};

namespace detail {

inline void check_jet(const Jet2& jet, const ModelParams& params) {
    if (jet.dim() != params.jet_dim()) {
        throw DimensionMismatch("jet dim " + std::to_string(jet.dim()) + " != N+1 = " +
                                std::to_string(params.jet_dim()));
    }
}

/// u^p for real p: integer exponents keep the sign of u, fractional ones need u > 0.
inline double real_pow(double u, double p) {
    if (is_integer(p)) {
        if (p < 0 && below_threshold(u)) throw DivisionByZero("negative power of (near) zero u");
        return ipow(u, static_cast<int>(p));
    }
    if (u <= 0.0 || below_threshold(u)) {
        throw DomainError("fractional power " + std::to_string(p) + " of non-positive u");
    }
    return std::pow(u, p);
}

inline double determinant_scale(const SquareMatrix& m) {
    return std::pow(1.0 + m.max_abs_entry(), static_cast<double>(m.size()));
}

}  // namespace detail

/// Row 0: (u_t, u_1..u_N); row a: (u_ta, u_a1..u_aN).
inline SquareMatrix w1_matrix(const Jet2& jet, const ModelParams& params) {
    detail::check_jet(jet, params);
    const std::size_t d = params.jet_dim();
    SquareMatrix m(d);
    for (std::size_t j = 0; j < d; ++j) m(0, j) = jet.grad(j);
    for (std::size_t a = 1; a < d; ++a) {
        for (std::size_t j = 0; j < d; ++j) m(a, j) = jet.hess(a, j);
    }
    return m;
}

/// Full space-time Hessian in (t, x) order.
inline SquareMatrix w2_matrix(const Jet2& jet, const ModelParams& params) {
    detail::check_jet(jet, params);
    const std::size_t d = params.jet_dim();
    SquareMatrix m(d);
    for (std::size_t i = 0; i < d; ++i) {
        for (std::size_t j = 0; j < d; ++j) m(i, j) = jet.hess(i, j);
    }
    return m;
}

inline SquareMatrix spatial_hessian(const Jet2& jet, const ModelParams& params) {
    detail::check_jet(jet, params);
    const std::size_t n = static_cast<std::size_t>(params.spatial_dim);
    SquareMatrix m(n);
    for (std::size_t a = 0; a < n; ++a) {
        for (std::size_t b = 0; b < n; ++b) m(a, b) = jet.hess(a + 1, b + 1);
    }
    return m;
}

inline double w1(const Jet2& jet, const ModelParams& params) { return determinant(w1_matrix(jet, params)); }
inline double w2(const Jet2& jet, const ModelParams& params) { return determinant(w2_matrix(jet, params)); }

/// W_N^II: determinant of the spatial Hessian.
inline double monge_ampere(const Jet2& jet, const ModelParams& params) {
    return determinant(spatial_hessian(jet, params));
}

inline Residual monge_ampere_residual(const Jet2& jet, const ModelParams& params) {
    const auto m = spatial_hessian(jet, params);
    return {determinant(m), detail::determinant_scale(m)};
}

/// W^I - sum_a d_a(u^{2-z-N} u_a), with the divergence expanded analytically.
inline Residual diffusion_residual(const Jet2& jet, const ModelParams& params) {
    const auto m = w1_matrix(jet, params);
    const int n = params.spatial_dim;
    const double gamma = 2.0 - params.z - n;
    const double u = jet.value();
    double lap = 0.0, grad2 = 0.0;
    for (int a = 1; a <= n; ++a) {
        lap += jet.hess(a, a);
        grad2 += jet.grad(a) * jet.grad(a);
    }
    const double laplacian_term = detail::real_pow(u, gamma) * lap;
    const double gradient_term = gamma == 0.0 ? 0.0 : gamma * detail::real_pow(u, gamma - 1.0) * grad2;
    return {determinant(m) - (laplacian_term + gradient_term),
            detail::determinant_scale(m) + std::abs(laplacian_term) + std::abs(gradient_term)};
}

/// W^I - Laplacian(u): the z = 0, N = 2 equation, evaluated for any N.
inline Residual z0_diffusion_residual(const Jet2& jet, const ModelParams& params) {
    const auto m = w1_matrix(jet, params);
    double lap = 0.0, lap_abs = 0.0;
    for (int a = 1; a <= params.spatial_dim; ++a) {
        lap += jet.hess(a, a);
        lap_abs += std::abs(jet.hess(a, a));
    }
    return {determinant(m) - lap, detail::determinant_scale(m) + lap_abs};
}

/// g(u_1..u_N, u*u_ab for a <= b), the N(N+3)/2 invariants of the B_N(z)-invariant class.
/// The second span is the packed upper triangle in row-major order.
using GCallback = std::function<double(std::span<const double> grad, std::span<const double> u_hess)>;

inline std::size_t upper_index(std::size_t n, std::size_t a, std::size_t b) {
    if (a > b) std::swap(a, b);
    return a * n - a * (a - 1) / 2 + (b - a);
}

/// W^I - u^{1-z-N} g(grad u, u * Hess u).
inline Residual general_residual(const Jet2& jet, const ModelParams& params, const GCallback& g) {
    const auto m = w1_matrix(jet, params);
    const std::size_t n = static_cast<std::size_t>(params.spatial_dim);
    const double u = jet.value();
    std::vector<double> grad(n), uhess;
    uhess.reserve(n * (n + 1) / 2);
    for (std::size_t a = 0; a < n; ++a) {
        grad[a] = jet.grad(a + 1);
        for (std::size_t b = a; b < n; ++b) uhess.push_back(u * jet.hess(a + 1, b + 1));
    }
    const double rhs = detail::real_pow(u, 1.0 - params.z - static_cast<double>(n)) * g(grad, uhess);
    return {determinant(m) - rhs, detail::determinant_scale(m) + std::abs(rhs)};
}

/// The g that turns general_residual into diffusion_residual.
inline GCallback diffusion_g(const ModelParams& params) {
    const std::size_t n = static_cast<std::size_t>(params.spatial_dim);
    const double gamma = 2.0 - params.z - static_cast<double>(n);
    return [n, gamma](std::span<const double> grad, std::span<const double> uhess) {
        double s = 0.0;
        for (std::size_t a = 0; a < n; ++a) s += uhess[upper_index(n, a, a)] + gamma * grad[a] * grad[a];
        return s;
    };
}

struct ReducedResiduals {
    double first;   // phi * Lap(phi) - z |grad phi|^2
    double second;  // phi_11 phi_22 - phi_12^2
    double scale;
};

/// Residuals of the two-dimensional system for phi(w1, w2).
inline ReducedResiduals reduced_residuals(const Jet2& phi, double z) {
    if (phi.dim() != 2) throw DimensionMismatch("reduced system needs a jet over (w1, w2)");
    const double p = phi.value();
    const double p1 = phi.grad(0), p2 = phi.grad(1);
    const double p11 = phi.hess(0, 0), p12 = phi.hess(0, 1), p22 = phi.hess(1, 1);
    double m = std::abs(p);
    for (double v : {p1, p2, p11, p12, p22}) m = std::max(m, std::abs(v));
    return {p * (p11 + p22) - z * (p1 * p1 + p2 * p2), p11 * p22 - p12 * p12, (1.0 + m) * (1.0 + m)};
}

/// A function of the two similarity variables (w1, w2).
class ReducedField {
public:
    using Evaluator = std::function<Jet2(double, double)>;

    ReducedField() = default;
    ReducedField(std::string id, Evaluator fn) : id_(std::move(id)), fn_(std::move(fn)) {}

    const std::string& id() const noexcept { return id_; }
    Jet2 evaluate(double w1, double w2) const { return fn_(w1, w2); }

private:
    std::string id_;
    Evaluator fn_;
};

/// Holomorphic f(w) with real Taylor data: `poly:c0,c1,..` or `exp:alpha` (e^{alpha w}).
class HolomorphicProfile {
public:
    struct Polynomial {
        std::vector<double> coeffs;
    };
    struct Exponential {
        double alpha;
    };
    using Kind = std::variant<Polynomial, Exponential>;

    struct Values {
        std::complex<double> f, df, d2f;
    };

    explicit HolomorphicProfile(Kind k) : kind_(std::move(k)) {}

    static HolomorphicProfile parse(std::string_view text) {
        const auto colon = text.find(':');
        if (colon == text.npos) throw ParseError("holomorphic profile needs 'kind:args'");
        const auto kind = text.substr(0, colon);
        const auto args = detail::parse_number_list(text.substr(colon + 1));
        if (kind == "poly") return HolomorphicProfile(Polynomial{args});
        if (kind == "exp" && args.size() == 1) return HolomorphicProfile(Exponential{args[0]});
        throw ParseError("unknown holomorphic profile '" + std::string(text) + "'");
    }

    std::string to_string() const {
        if (const auto* p = std::get_if<Polynomial>(&kind_)) return "poly:" + detail::join_numbers(p->coeffs);
        return "exp:" + detail::format_number(std::get<Exponential>(kind_).alpha);
    }

    Values operator()(std::complex<double> w) const {
        if (const auto* p = std::get_if<Polynomial>(&kind_)) {
            std::complex<double> f = 0.0, df = 0.0, d2f = 0.0;
            for (auto it = p->coeffs.rbegin(); it != p->coeffs.rend(); ++it) {
                d2f = d2f * w + 2.0 * df;
                df = df * w + f;
                f = f * w + *it;
            }
            return {f, df, d2f};
        }
        const double a = std::get<Exponential>(kind_).alpha;
        const auto e = std::exp(a * w);
        return {e, a * e, a * a * e};
    }

private:
    Kind kind_;
};

/// phi = exp(phi~) for z = 1, phi~^{1/(1-z)} otherwise, with the harmonic phi~ = 2 Re f(w1 + i w2).
/// The first reduced equation holds identically; the second one does not in general.
inline ReducedField build_phi_from_harmonic(const HolomorphicProfile& f, double z) {
    return ReducedField("harmonic:" + f.to_string() + ",z=" + detail::format_number(z), [f, z](double w1, double w2) {
        const auto v = f({w1, w2});
        // d/dw2 of Re f(w1 + i w2) = Re(i f') = -Im f'
        const double grad[2] = {2.0 * v.df.real(), -2.0 * v.df.imag()};
        const double hess[4] = {2.0 * v.d2f.real(), -2.0 * v.d2f.imag(), -2.0 * v.d2f.imag(), -2.0 * v.d2f.real()};
        const Jet2 harmonic = Jet2::from_parts(2.0 * v.f.real(), grad, hess);
        if (z == 1.0) return exp(harmonic);
        return pow(harmonic, 1.0 / (1.0 - z));
    });
}

}  // namespace condsym
