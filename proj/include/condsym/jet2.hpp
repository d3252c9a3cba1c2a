#pragma once

/**
 * @file jet2.hpp
 * @brief Second-order forward-mode automatic differentiation.
 *
 * A Jet2 carries the value, gradient and Hessian of a scalar quantity with
 * respect to D coordinates. Arithmetic and elementary functions propagate all
 * three exactly (up to rounding), so determinants built from u_t, u_a, u_ab,
 * u_ta need no finite differences.
 *
 * @code
 * auto t = Jet2::seed(2, 0, 2.0);
 * auto x = Jet2::seed(2, 1, 3.0);
 * auto u = t * x;          // value 6, grad (3, 2), hess(0, 1) == 1
 * @endcode
 */

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>

#include "condsym/errors.hpp"

namespace condsym {

namespace detail {

/// Singularity guard shared by division, log, sqrt and fractional powers.
inline bool below_threshold(double v) {
    return std::abs(v) < 1e-12 * std::max(1.0, std::abs(v));
}

inline bool is_integer(double p) {
    return std::abs(p) < 2147483647.0 && p == std::round(p);
}

inline double ipow(double base, int k) {
    double result = 1.0;
    double b = k < 0 ? 1.0 / base : base;
    unsigned e = k < 0 ? static_cast<unsigned>(-static_cast<long>(k)) : static_cast<unsigned>(k);
    while (e != 0) {
        if (e & 1u) result *= b;
        b *= b;
        e >>= 1u;
    }
    return result;
}

}  // namespace detail

class Jet2 {
public:
    static constexpr std::size_t kMaxDim = 8;

    /// Zero jet over `dim` coordinates.
    explicit Jet2(std::size_t dim = 1) : dim_(dim) {
        if (dim == 0 || dim > kMaxDim) {
            throw DimensionMismatch("Jet2 dimension must be in [1, " + std::to_string(kMaxDim) + "], got " +
                                    std::to_string(dim));
        }
    }

    static Jet2 constant(std::size_t dim, double value) {
        Jet2 j(dim);
        j.value_ = value;
        return j;
    }

    /// Jet of the coordinate function x_index evaluated at `value`.
    static Jet2 seed(std::size_t dim, std::size_t index, double value) {
        if (index >= dim) {
            throw DimensionMismatch("seed index " + std::to_string(index) + " out of range for dim " +
                                    std::to_string(dim));
        }
        Jet2 j = constant(dim, value);
        j.grad_[index] = 1.0;
        return j;
    }

    /// Build from explicit parts. `hess` is row-major dim x dim and must be symmetric.
    static Jet2 from_parts(double value, std::span<const double> grad, std::span<const double> hess) {
        const std::size_t d = grad.size();
        if (hess.size() != d * d) throw DimensionMismatch("Jet2::from_parts: Hessian size != dim^2");
        Jet2 j = constant(d, value);
        for (std::size_t i = 0; i < d; ++i) {
            j.grad_[i] = grad[i];
            for (std::size_t k = 0; k < d; ++k) {
                if (hess[i * d + k] != hess[k * d + i]) {
                    throw std::invalid_argument("Jet2::from_parts: Hessian is not symmetric");
                }
                j.hess_[i * kMaxDim + k] = hess[i * d + k];
            }
        }
        return j;
    }

    std::size_t dim() const noexcept { return dim_; }
    double value() const noexcept { return value_; }
    double grad(std::size_t i) const { return grad_[i]; }
    double hess(std::size_t i, std::size_t j) const { return hess_[i * kMaxDim + j]; }
    std::span<const double> gradient() const noexcept { return {grad_.data(), dim_}; }

    friend Jet2 operator-(const Jet2& a) {
        Jet2 r(a.dim_);
        r.value_ = -a.value_;
        for (std::size_t i = 0; i < a.dim_; ++i) {
            r.grad_[i] = -a.grad_[i];
            for (std::size_t k = 0; k < a.dim_; ++k) r.set_hess(i, k, -a.hess(i, k));
        }
        return r;
    }

    friend Jet2 operator+(const Jet2& a, const Jet2& b) {
        check_dims(a, b);
        Jet2 r(a.dim_);
        r.value_ = a.value_ + b.value_;
        for (std::size_t i = 0; i < a.dim_; ++i) {
            r.grad_[i] = a.grad_[i] + b.grad_[i];
            for (std::size_t k = i; k < a.dim_; ++k) r.set_sym(i, k, a.hess(i, k) + b.hess(i, k));
        }
        return r;
    }

    friend Jet2 operator-(const Jet2& a, const Jet2& b) {
        check_dims(a, b);
        Jet2 r(a.dim_);
        r.value_ = a.value_ - b.value_;
        for (std::size_t i = 0; i < a.dim_; ++i) {
            r.grad_[i] = a.grad_[i] - b.grad_[i];
            for (std::size_t k = i; k < a.dim_; ++k) r.set_sym(i, k, a.hess(i, k) - b.hess(i, k));
        }
        return r;
    }

    friend Jet2 operator*(const Jet2& a, const Jet2& b) {
        check_dims(a, b);
        Jet2 r(a.dim_);
        r.value_ = a.value_ * b.value_;
        for (std::size_t i = 0; i < a.dim_; ++i) {
            r.grad_[i] = a.value_ * b.grad_[i] + b.value_ * a.grad_[i];
            for (std::size_t k = i; k < a.dim_; ++k) {
                r.set_sym(i, k,
                          a.value_ * b.hess(i, k) + b.value_ * a.hess(i, k) + a.grad_[i] * b.grad_[k] +
                              b.grad_[i] * a.grad_[k]);
            }
        }
        return r;
    }

    friend Jet2 operator/(const Jet2& a, const Jet2& b) {
        check_dims(a, b);
        if (detail::below_threshold(b.value_)) throw DivisionByZero("Jet2 division by (near) zero");
        return a * reciprocal(b);
    }

    friend Jet2 operator+(const Jet2& a, double c) {
        Jet2 r = a;
        r.value_ += c;
        return r;
    }
    friend Jet2 operator+(double c, const Jet2& a) { return a + c; }
    friend Jet2 operator-(const Jet2& a, double c) { return a + (-c); }
    friend Jet2 operator-(double c, const Jet2& a) { return (-a) + c; }

    friend Jet2 operator*(const Jet2& a, double c) {
        Jet2 r(a.dim_);
        r.value_ = a.value_ * c;
        for (std::size_t i = 0; i < a.dim_; ++i) {
            r.grad_[i] = a.grad_[i] * c;
            for (std::size_t k = i; k < a.dim_; ++k) r.set_sym(i, k, a.hess(i, k) * c);
        }
        return r;
    }
    friend Jet2 operator*(double c, const Jet2& a) { return a * c; }

    friend Jet2 operator/(const Jet2& a, double c) {
        if (detail::below_threshold(c)) throw DivisionByZero("Jet2 division by (near) zero constant");
        return a * (1.0 / c);
    }
    friend Jet2 operator/(double c, const Jet2& a) { return reciprocal(a) * c; }

    Jet2& operator+=(const Jet2& o) { return *this = *this + o; }
    Jet2& operator-=(const Jet2& o) { return *this = *this - o; }
    Jet2& operator*=(const Jet2& o) { return *this = *this * o; }

    /// Chain rule through a scalar function with value f0 and derivatives f1, f2 at value().
    friend Jet2 univariate(const Jet2& a, double f0, double f1, double f2) {
        Jet2 r(a.dim_);
        r.value_ = f0;
        for (std::size_t i = 0; i < a.dim_; ++i) {
            r.grad_[i] = f1 * a.grad_[i];
            for (std::size_t k = i; k < a.dim_; ++k) {
                r.set_sym(i, k, f1 * a.hess(i, k) + f2 * a.grad_[i] * a.grad_[k]);
            }
        }
        return r;
    }

    /// Chain rule through f(a, b) given its partials up to second order.
    friend Jet2 bivariate(const Jet2& a, const Jet2& b, double f0, double fa, double fb, double faa, double fab,
                          double fbb) {
        check_dims(a, b);
        Jet2 r(a.dim_);
        r.value_ = f0;
        for (std::size_t i = 0; i < a.dim_; ++i) {
            r.grad_[i] = fa * a.grad_[i] + fb * b.grad_[i];
            for (std::size_t k = i; k < a.dim_; ++k) {
                r.set_sym(i, k,
                          fa * a.hess(i, k) + fb * b.hess(i, k) + faa * a.grad_[i] * a.grad_[k] +
                              fab * (a.grad_[i] * b.grad_[k] + b.grad_[i] * a.grad_[k]) +
                              fbb * b.grad_[i] * b.grad_[k]);
            }
        }
        return r;
    }

    /// Compose: `outer` is a jet over M coordinates y, `inner[m]` gives y_m as a jet over D
    /// coordinates. Returns the jet of outer(y(q)) over the D coordinates.
    friend Jet2 chain(const Jet2& outer, std::span<const Jet2> inner) {
        if (inner.size() != outer.dim_) throw DimensionMismatch("chain: inner map size != outer dim");
        const std::size_t d = inner.front().dim_;
        Jet2 r(d);
        r.value_ = outer.value_;
        for (const auto& y : inner) {
            if (y.dim_ != d) throw DimensionMismatch("chain: inner jets disagree in dim");
        }
        for (std::size_t i = 0; i < d; ++i) {
            double g = 0.0;
            for (std::size_t m = 0; m < outer.dim_; ++m) g += outer.grad_[m] * inner[m].grad_[i];
            r.grad_[i] = g;
            for (std::size_t k = i; k < d; ++k) {
                double h = 0.0;
                for (std::size_t m = 0; m < outer.dim_; ++m) {
                    h += outer.grad_[m] * inner[m].hess(i, k);
                    for (std::size_t l = 0; l < outer.dim_; ++l) {
                        h += outer.hess(m, l) * inner[m].grad_[i] * inner[l].grad_[k];
                    }
                }
                r.set_sym(i, k, h);
            }
        }
        return r;
    }

private:
    static void check_dims(const Jet2& a, const Jet2& b) {
        if (a.dim_ != b.dim_) {
            throw DimensionMismatch("Jet2 operands differ in dim: " + std::to_string(a.dim_) + " vs " +
                                    std::to_string(b.dim_));
        }
    }

    static Jet2 reciprocal(const Jet2& b) {
        if (detail::below_threshold(b.value_)) throw DivisionByZero("Jet2 division by (near) zero");
        const double inv = 1.0 / b.value_;
        return univariate(b, inv, -inv * inv, 2.0 * inv * inv * inv);
    }

    void set_sym(std::size_t i, std::size_t k, double v) {
        hess_[i * kMaxDim + k] = v;
        hess_[k * kMaxDim + i] = v;
    }
    void set_hess(std::size_t i, std::size_t k, double v) { hess_[i * kMaxDim + k] = v; }

    std::size_t dim_;
    double value_ = 0.0;
    std::array<double, kMaxDim> grad_{};
    std::array<double, kMaxDim * kMaxDim> hess_{};
};

inline Jet2 exp(const Jet2& a) {
    const double e = std::exp(a.value());
    return univariate(a, e, e, e);
}

inline Jet2 log(const Jet2& a) {
    const double v = a.value();
    if (v <= 0.0 || detail::below_threshold(v)) throw DomainError("log of non-positive value");
    return univariate(a, std::log(v), 1.0 / v, -1.0 / (v * v));
}

inline Jet2 sqrt(const Jet2& a) {
    const double v = a.value();
    if (v <= 0.0 || detail::below_threshold(v)) throw DomainError("sqrt of non-positive value");
    const double s = std::sqrt(v);
    return univariate(a, s, 0.5 / s, -0.25 / (s * v));
}

inline Jet2 sin(const Jet2& a) {
    const double s = std::sin(a.value());
    return univariate(a, s, std::cos(a.value()), -s);
}

inline Jet2 cos(const Jet2& a) {
    const double c = std::cos(a.value());
    return univariate(a, c, -std::sin(a.value()), -c);
}

inline Jet2 atan(const Jet2& a) {
    const double v = a.value();
    const double d = 1.0 / (1.0 + v * v);
    return univariate(a, std::atan(v), d, -2.0 * v * d * d);
}

/// Integer power with exact sign tracking for negative bases.
inline Jet2 pow(const Jet2& a, int k) {
    if (k == 0) return Jet2::constant(a.dim(), 1.0);
    if (k == 1) return a;
    const double v = a.value();
    if (k < 0 && detail::below_threshold(v)) throw DivisionByZero("negative power of (near) zero");
    const double f0 = detail::ipow(v, k);
    const double f1 = k * detail::ipow(v, k - 1);
    const double f2 = static_cast<double>(k) * (k - 1) * detail::ipow(v, k - 2);
    return univariate(a, f0, f1, f2);
}

/// Real power. Non-integer exponents require a positive base.
inline Jet2 pow(const Jet2& a, double p) {
    if (detail::is_integer(p)) return pow(a, static_cast<int>(p));
    const double v = a.value();
    if (v <= 0.0 || detail::below_threshold(v)) {
        throw DomainError("non-integer power " + std::to_string(p) + " of non-positive base");
    }
    const double f0 = std::pow(v, p);
    return univariate(a, f0, p * f0 / v, p * (p - 1.0) * f0 / (v * v));
}

/// Principal argument of x + i y in (-pi, pi].
inline Jet2 atan2(const Jet2& y, const Jet2& x) {
    const double xv = x.value();
    const double yv = y.value();
    const double r2 = xv * xv + yv * yv;
    if (detail::below_threshold(std::sqrt(r2))) throw DomainError("atan2 at the origin");
    const double r4 = r2 * r2;
    // partials of atan2(y, x) with a = y, b = x
    return bivariate(y, x, std::atan2(yv, xv), xv / r2, -yv / r2, -2.0 * xv * yv / r4, (yv * yv - xv * xv) / r4,
                     2.0 * xv * yv / r4);
}

}  // namespace condsym
