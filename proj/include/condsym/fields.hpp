#pragma once

#include <charconv>
#include <cmath>
#include <algorithm>
#include <cstdint>
#include <functional>
#include <random>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "condsym/errors.hpp"
#include "condsym/jet2.hpp"

namespace condsym {

/// Number of spatial dimensions N and dynamical exponent z.
struct ModelParams {
    int spatial_dim = 2;
    double z = 1.0;

    ModelParams() = default;
    ModelParams(int n, double z_) : spatial_dim(n), z(z_) {
        if (n < 1) throw std::invalid_argument("spatial dimension must be >= 1");
    }

    /// Jet dimension for fields over (t, x_1..x_N).
    std::size_t jet_dim() const { return static_cast<std::size_t>(spatial_dim) + 1; }
};

/// Space-time point (t, x_1..x_N).
struct Point {
    double t = 0.0;
    std::vector<double> x;
};

inline void check_point(const ModelParams& params, const Point& p) {
    if (p.x.size() != static_cast<std::size_t>(params.spatial_dim)) {
        throw DimensionMismatch("point has " + std::to_string(p.x.size()) + " spatial coordinates, model has N=" +
                                std::to_string(params.spatial_dim));
    }
}

/// Seed jets of the coordinates (t, x_1..x_N) at p.
inline std::vector<Jet2> coordinate_jets(const Point& p) {
    const std::size_t d = p.x.size() + 1;
    std::vector<Jet2> c;
    c.reserve(d);
    c.push_back(Jet2::seed(d, 0, p.t));
    for (std::size_t a = 0; a < p.x.size(); ++a) c.push_back(Jet2::seed(d, a + 1, p.x[a]));
    return c;
}

/// A field u(t, x) that reports its value, gradient and Hessian in (t, x_1..x_N) order.
class ScalarField {
public:
    using Evaluator = std::function<Jet2(const ModelParams&, const Point&)>;

    ScalarField() = default;
    ScalarField(std::string id, Evaluator fn) : id_(std::move(id)), fn_(std::move(fn)) {}

    const std::string& id() const noexcept { return id_; }

    Jet2 evaluate(const ModelParams& params, const Point& p) const {
        check_point(params, p);
        Jet2 j = fn_(params, p);
        if (j.dim() != params.jet_dim()) {
            throw DimensionMismatch("field " + id_ + " returned jet of dim " + std::to_string(j.dim()));
        }
        return j;
    }

private:
    std::string id_;
    Evaluator fn_;
};

inline Jet2 evaluate(const ScalarField& field, const ModelParams& params, const Point& p) {
    return field.evaluate(params, p);
}

namespace detail {

inline double parse_double(std::string_view s) {
    std::string str(s);
    std::size_t used = 0;
    double v = 0.0;
    try {
        v = std::stod(str, &used);
    } catch (const std::exception&) {
        throw ParseError("not a number: '" + str + "'");
    }
    if (used != str.size()) throw ParseError("not a number: '" + str + "'");
    return v;
}

inline std::vector<double> parse_number_list(std::string_view s, char sep = ',') {
    std::vector<double> out;
    std::size_t start = 0;
    while (true) {
        const std::size_t pos = s.find(sep, start);
        out.push_back(parse_double(s.substr(start, pos == std::string_view::npos ? s.npos : pos - start)));
        if (pos == std::string_view::npos) break;
        start = pos + 1;
    }
    return out;
}

/// Shortest text that reads back to the same double.
inline std::string format_number(double v) {
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

inline std::string join_numbers(const std::vector<double>& v, char sep = ',') {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) s += sep;
        s += format_number(v[i]);
    }
    return s;
}

}  // namespace detail

/// Value and first two derivatives of a univariate profile.
struct ProfileValue {
    double value;
    double d1;
    double d2;
};

/// Catalog of smooth univariate functions standing in for the arbitrary
/// q(t), psi, psi_1, psi_2, phi_a(t). Text form: `poly:c0,c1,..`,
/// `exp:a,b` (a e^{bt}), `sin:a,b,c` (a sin(bt + c)), `const:c`.
class ProfileFunction {
public:
    struct Polynomial {
        std::vector<double> coeffs;  // low to high
    };
    struct Exponential {
        double a, b;
    };
    struct Sine {
        double a, b, c;
    };
    struct Constant {
        double c;
    };
    using Kind = std::variant<Polynomial, Exponential, Sine, Constant>;

    ProfileFunction() : kind_(Constant{0.0}) {}
    explicit ProfileFunction(Kind k) : kind_(std::move(k)) {}

    static ProfileFunction polynomial(std::vector<double> c) { return ProfileFunction(Polynomial{std::move(c)}); }
    static ProfileFunction exponential(double a, double b) { return ProfileFunction(Exponential{a, b}); }
    static ProfileFunction sine(double a, double b, double c) { return ProfileFunction(Sine{a, b, c}); }
    static ProfileFunction constant(double c) { return ProfileFunction(Constant{c}); }

    static ProfileFunction parse(std::string_view text) {
        const auto colon = text.find(':');
        if (colon == std::string_view::npos) throw ParseError("profile needs 'kind:args': " + std::string(text));
        const auto kind = text.substr(0, colon);
        const auto args = detail::parse_number_list(text.substr(colon + 1));
        auto need = [&](std::size_t n) {
            if (args.size() != n) {
                throw ParseError("profile '" + std::string(kind) + "' takes " + std::to_string(n) + " arguments");
            }
        };
        if (kind == "poly") return polynomial(args);
        if (kind == "exp") {
            need(2);
            return exponential(args[0], args[1]);
        }
        if (kind == "sin") {
            need(3);
            return sine(args[0], args[1], args[2]);
        }
        if (kind == "const") {
            need(1);
            return constant(args[0]);
        }
        throw ParseError("unknown profile kind '" + std::string(kind) + "'");
    }

    std::string to_string() const {
        return std::visit(
            [](const auto& k) -> std::string {
                using K = std::decay_t<decltype(k)>;
                if constexpr (std::is_same_v<K, Polynomial>) return "poly:" + detail::join_numbers(k.coeffs);
                if constexpr (std::is_same_v<K, Exponential>) return "exp:" + detail::join_numbers({k.a, k.b});
                if constexpr (std::is_same_v<K, Sine>) return "sin:" + detail::join_numbers({k.a, k.b, k.c});
                if constexpr (std::is_same_v<K, Constant>) return "const:" + detail::format_number(k.c);
            },
            kind_);
    }

    ProfileValue operator()(double t) const {
        return std::visit(
            [t](const auto& k) -> ProfileValue {
                using K = std::decay_t<decltype(k)>;
                if constexpr (std::is_same_v<K, Polynomial>) {
                    // Horner for p, p', p''
                    double p = 0.0, dp = 0.0, d2p = 0.0;
                    for (auto it = k.coeffs.rbegin(); it != k.coeffs.rend(); ++it) {
                        d2p = d2p * t + 2.0 * dp;
                        dp = dp * t + p;
                        p = p * t + *it;
                    }
                    return {p, dp, d2p};
                } else if constexpr (std::is_same_v<K, Exponential>) {
                    const double e = k.a * std::exp(k.b * t);
                    return {e, k.b * e, k.b * k.b * e};
                } else if constexpr (std::is_same_v<K, Sine>) {
                    const double arg = k.b * t + k.c;
                    return {k.a * std::sin(arg), k.a * k.b * std::cos(arg), -k.a * k.b * k.b * std::sin(arg)};
                } else {
                    return {k.c, 0.0, 0.0};
                }
            },
            kind_);
    }

    Jet2 operator()(const Jet2& arg) const {
        const auto v = (*this)(arg.value());
        return univariate(arg, v.value, v.d1, v.d2);
    }

    const Kind& kind() const noexcept { return kind_; }

private:
    Kind kind_;
};

/// Sum of c * prod_i y_i^{e_i} with non-negative integer exponents.
class MultiPolynomial {
public:
    struct Term {
        double coeff;
        std::vector<int> exponents;
    };

    MultiPolynomial() = default;
    MultiPolynomial(std::size_t num_vars, std::vector<Term> terms) : num_vars_(num_vars), terms_(std::move(terms)) {
        for (const auto& term : terms_) {
            if (term.exponents.size() != num_vars_) throw DimensionMismatch("monomial arity != variable count");
            for (int e : term.exponents) {
                if (e < 0) throw std::invalid_argument("negative exponent in polynomial");
            }
        }
    }

    /// Text form `mpoly:c@e1.e2|c@e1.e2`, e.g. `mpoly:1@0.0|0.5@1.0|0.25@1.1`.
    static MultiPolynomial parse(std::string_view text) {
        constexpr std::string_view prefix = "mpoly:";
        if (text.substr(0, prefix.size()) != prefix) throw ParseError("expected 'mpoly:' prefix");
        text.remove_prefix(prefix.size());
        std::vector<Term> terms;
        std::size_t arity = 0;
        std::size_t start = 0;
        while (start <= text.size()) {
            const auto bar = text.find('|', start);
            const auto term = text.substr(start, bar == text.npos ? text.npos : bar - start);
            const auto at = term.find('@');
            if (at == term.npos) throw ParseError("mpoly term needs 'coeff@exponents': " + std::string(term));
            Term t{detail::parse_double(term.substr(0, at)), {}};
            for (double e : detail::parse_number_list(term.substr(at + 1), '.')) {
                if (!detail::is_integer(e) || e < 0) throw ParseError("mpoly exponents must be integers >= 0");
                t.exponents.push_back(static_cast<int>(e));
            }
            if (terms.empty()) arity = t.exponents.size();
            if (t.exponents.size() != arity) throw ParseError("mpoly terms disagree in arity");
            terms.push_back(std::move(t));
            if (bar == text.npos) break;
            start = bar + 1;
        }
        return MultiPolynomial(arity, std::move(terms));
    }

    std::string to_string() const {
        std::string s = "mpoly:";
        for (std::size_t i = 0; i < terms_.size(); ++i) {
            if (i) s += '|';
            s += detail::format_number(terms_[i].coeff) + '@';
            for (std::size_t k = 0; k < terms_[i].exponents.size(); ++k) {
                if (k) s += '.';
                s += std::to_string(terms_[i].exponents[k]);
            }
        }
        return s;
    }

    std::size_t num_vars() const noexcept { return num_vars_; }
    const std::vector<Term>& terms() const noexcept { return terms_; }

    int total_degree() const {
        int d = 0;
        for (const auto& t : terms_) {
            int s = 0;
            for (int e : t.exponents) s += e;
            d = std::max(d, s);
        }
        return d;
    }

    Jet2 operator()(std::span<const Jet2> vars) const {
        if (vars.size() != num_vars_) throw DimensionMismatch("polynomial evaluated with wrong variable count");
        Jet2 sum = Jet2::constant(vars.front().dim(), 0.0);
        for (const auto& term : terms_) {
            Jet2 mono = Jet2::constant(vars.front().dim(), term.coeff);
            for (std::size_t i = 0; i < num_vars_; ++i) {
                if (term.exponents[i] != 0) mono *= pow(vars[i], term.exponents[i]);
            }
            sum += mono;
        }
        return sum;
    }

private:
    std::size_t num_vars_ = 0;
    std::vector<Term> terms_;
};

/// All exponent vectors over `num_vars` variables with total degree <= degree,
/// in lexicographic order of the exponent vector.
inline std::vector<std::vector<int>> monomials_up_to(std::size_t num_vars, int degree) {
    std::vector<std::vector<int>> out;
    std::vector<int> e(num_vars, 0);
    std::function<void(std::size_t, int)> rec = [&](std::size_t i, int left) {
        if (i == num_vars) {
            out.push_back(e);
            return;
        }
        for (int k = 0; k <= left; ++k) {
            e[i] = k;
            rec(i + 1, left - k);
        }
        e[i] = 0;
    };
    rec(0, degree);
    return out;
}

/// Polynomial in (t, x_1..x_N) with coefficients uniform in [-bound, bound],
/// reproducible from the seed.
struct RandomPolynomial {
    std::uint64_t seed;
    int degree;
    double coeff_bound;
    MultiPolynomial poly;
};

inline RandomPolynomial random_polynomial(std::uint64_t seed, const ModelParams& params, int degree,
                                          double coeff_bound) {
    if (degree < 1) throw std::invalid_argument("random polynomial degree must be >= 1");
    if (!(coeff_bound > 0.0)) throw std::invalid_argument("coefficient bound must be positive");
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> dist(-coeff_bound, coeff_bound);
    std::vector<MultiPolynomial::Term> terms;
    for (auto& e : monomials_up_to(params.jet_dim(), degree)) terms.push_back({dist(rng), std::move(e)});
    return {seed, degree, coeff_bound, MultiPolynomial(params.jet_dim(), std::move(terms))};
}

inline ScalarField polynomial_field(std::string id, MultiPolynomial poly) {
    return ScalarField(std::move(id), [poly = std::move(poly)](const ModelParams&, const Point& p) {
        const auto coords = coordinate_jets(p);
        return poly(coords);
    });
}

inline ScalarField make_random_polynomial(std::uint64_t seed, const ModelParams& params, int degree,
                                          double coeff_bound) {
    auto rp = random_polynomial(seed, params, degree, coeff_bound);
    return polynomial_field("random:deg=" + std::to_string(degree) + ",seed=" + std::to_string(seed) +
                                ",bound=" + detail::format_number(coeff_bound),
                            std::move(rp.poly));
}

}  // namespace condsym
