#pragma once

/**
 * @file grammar.hpp
 * @brief Text forms of families, group elements, fields, grids and index ranges.
 *
 *   family   name:key=value,key=value          radial-z1:c=1,e1=0,e2=0,n=0
 *   element  Xn:n=1,eps=0.01                   Yk:k=1,v=0.5,0.0
 *            Yphi:e=1,0;profiles=sin:1,1,0|const:0
 *            rot:a=1,b=2,angle=0.3             (1-based axes)
 *   field    random:deg=3,seed=7[,bound=1]     mpoly:1@1.0.2|...   or any family
 *   grid     t=0.5:2:10,x=-1:1:10[,x2=...]
 *   range    A..B or A
 *
 * Pairs are separated by ',' or ';' only where the next token is `ident=`, so
 * values may themselves contain commas (vectors, profile arguments).
 */

#include <cctype>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "condsym/errors.hpp"
#include "condsym/fields.hpp"
#include "condsym/solutions.hpp"
#include "condsym/symmetry.hpp"
#include "condsym/verify.hpp"

namespace condsym {

/// Ordered key/value pairs; every key must be consumed exactly once.
class KeyValues {
public:
    static KeyValues parse(std::string_view text) {
        KeyValues kv;
        if (text.empty()) return kv;
        std::size_t start = 0;
        for (std::size_t i = 0; i <= text.size(); ++i) {
            if (i < text.size() && !((text[i] == ',' || text[i] == ';') && starts_pair(text.substr(i + 1)))) continue;
            const auto item = text.substr(start, i - start);
            const auto eq = item.find('=');
            if (eq == item.npos || eq == 0) throw ParseError("expected key=value, got '" + std::string(item) + "'");
            std::string key(item.substr(0, eq));
            if (kv.values_.count(key)) throw ParseError("duplicate key '" + key + "'");
            kv.order_.push_back(key);
            kv.values_.emplace(std::move(key), std::string(item.substr(eq + 1)));
            start = i + 1;
        }
        return kv;
    }

    std::optional<std::string> take(const std::string& key) {
        auto it = values_.find(key);
        if (it == values_.end()) return std::nullopt;
        auto v = std::move(it->second);
        values_.erase(it);
        return v;
    }

    std::string require(const std::string& key) {
        auto v = take(key);
        if (!v) throw ParseError("missing key '" + key + "'");
        return *v;
    }

    double number(const std::string& key, std::optional<double> fallback = std::nullopt) {
        if (auto v = take(key)) return detail::parse_double(*v);
        if (fallback) return *fallback;
        throw ParseError("missing key '" + key + "'");
    }

    int integer(const std::string& key, std::optional<int> fallback = std::nullopt) {
        const double v = number(key, fallback ? std::optional<double>(*fallback) : std::nullopt);
        if (!detail::is_integer(v)) throw ParseError("key '" + key + "' must be an integer");
        return static_cast<int>(v);
    }

    /// Throws if any key was not consumed.
    void finish(std::string_view context) const {
        for (const auto& k : order_) {
            if (values_.count(k)) throw ParseError("unknown key '" + k + "' in " + std::string(context));
        }
    }

private:
    static bool starts_pair(std::string_view rest) {
        std::size_t i = 0;
        while (i < rest.size() && (std::isalnum(static_cast<unsigned char>(rest[i])) || rest[i] == '_')) ++i;
        return i > 0 && std::isalpha(static_cast<unsigned char>(rest[0])) && i < rest.size() && rest[i] == '=';
    }

    std::vector<std::string> order_;
    std::map<std::string, std::string> values_;
};

namespace detail {

inline std::pair<std::string_view, std::string_view> split_head(std::string_view text) {
    const auto colon = text.find(':');
    if (colon == text.npos) return {text, {}};
    return {text.substr(0, colon), text.substr(colon + 1)};
}

}  // namespace detail

inline SolutionFamily parse_family(std::string_view text) {
    const auto [name, rest] = detail::split_head(text);
    auto kv = KeyValues::parse(rest);
    auto profile = [&kv](const std::string& key, const char* fallback) {
        auto v = kv.take(key);
        return ProfileFunction::parse(v ? *v : fallback);
    };
    SolutionFamily fam;
    if (name == "onedim-z0") {
        fam.kind = OneDimZ0{kv.number("c", 1.0), profile("q", "const:0")};
    } else if (name == "onedim-z1") {
        fam.kind = OneDimZ1{kv.number("c", 1.0), profile("q", "const:0")};
    } else if (name == "onedim") {
        fam.kind = OneDimGeneric{kv.number("z", 2.0), profile("q", "const:1")};
    } else if (name == "radial-z1") {
        fam.kind = RadialZ1{kv.number("c", 1.0), kv.number("e1", 0.0), kv.number("e2", 0.0), kv.integer("n", 0)};
    } else if (name == "general-z") {
        fam.kind = GeneralZ{kv.number("c", 1.0), kv.number("e1", 0.0), kv.number("e2", 0.0), kv.integer("n", 0),
                            kv.number("z", 2.0)};
    } else if (name == "z0-sqrt") {
        fam.kind = Z0Sqrt{profile("psi", "const:1")};
    } else if (name == "z0-linear") {
        fam.kind = Z0Linear{profile("psi1", "const:1"), profile("psi2", "const:0")};
    } else if (name == "general-yphi") {
        GeneralYphi g{kv.number("c", 1.0), kv.number("e1", 0.0), kv.number("e2", 0.0), kv.number("z", 2.0), {}, {}};
        g.phi1 = profile("phi1", "const:0");
        g.phi2 = profile("phi2", "const:0");
        fam.kind = std::move(g);
    } else if (name == "ma-only") {
        const int n = kv.integer("N", 3);
        fam.kind = MAOnly{n, MultiPolynomial::parse(kv.require("phi"))};
    } else {
        throw ParseError("unknown family '" + std::string(name) + "'");
    }
    kv.finish(name);
    detail::validate(fam);
    return fam;
}

inline GroupElement parse_element(std::string_view text) {
    const auto [name, rest] = detail::split_head(text);
    auto kv = KeyValues::parse(rest);
    GroupElement g;
    if (name == "Xn") {
        g = Xn{kv.integer("n"), kv.number("eps"), kv.number("lambda", 1.0)};
    } else if (name == "Yk") {
        g = Yk{kv.integer("k"), detail::parse_number_list(kv.require("v"))};
    } else if (name == "Yphi") {
        Yphi y{{}, detail::parse_number_list(kv.require("e"))};
        const std::string profiles = kv.require("profiles");
        std::size_t start = 0;
        while (true) {
            const auto bar = profiles.find('|', start);
            y.profiles.push_back(ProfileFunction::parse(std::string_view(profiles).substr(start, bar - start)));
            if (bar == std::string::npos) break;
            start = bar + 1;
        }
        if (y.profiles.size() != y.e.size()) throw ParseError("Yphi needs one profile per component of e");
        g = std::move(y);
    } else if (name == "rot") {
        const int a = kv.integer("a", 1), b = kv.integer("b", 2);
        if (a < 1 || b < 1 || a == b) throw ParseError("rot needs distinct 1-based axes");
        g = Rot{static_cast<std::size_t>(a - 1), static_cast<std::size_t>(b - 1), kv.number("angle")};
    } else {
        throw ParseError("unknown group element '" + std::string(name) + "'");
    }
    kv.finish(name);
    return g;
}

/// A random polynomial, an explicit `mpoly:` over (t, x), or any solution family.
/// Random fields need a seed, from the text or from `seed`.
inline ScalarField parse_field(std::string_view text, const ModelParams& params,
                               std::optional<std::uint64_t> seed = std::nullopt) {
    const auto [name, rest] = detail::split_head(text);
    if (name == "random") {
        auto kv = KeyValues::parse(rest);
        const int degree = kv.integer("deg", 3);
        const double bound = kv.number("bound", 1.0);
        if (auto s = kv.take("seed")) {
            const double v = detail::parse_double(*s);
            if (!detail::is_integer(v) || v < 0) throw ParseError("seed must be a non-negative integer");
            seed = static_cast<std::uint64_t>(v);
        }
        kv.finish("random");
        if (!seed) throw ParseError("random fields need a seed (seed=S or --seed)");
        return make_random_polynomial(*seed, params, degree, bound);
    }
    if (name == "mpoly") {
        auto poly = MultiPolynomial::parse(text);
        if (poly.num_vars() != params.jet_dim()) throw DimensionMismatch("mpoly field needs N+1 variables (t, x)");
        return polynomial_field(std::string(text), std::move(poly));
    }
    return as_field(parse_family(text));
}

inline Axis parse_axis(std::string_view text) {
    const auto parts = detail::parse_number_list(text, ':');
    if (parts.size() != 3 || !detail::is_integer(parts[2]) || parts[2] < 0) {
        throw ParseError("axis must be lo:hi:count, got '" + std::string(text) + "'");
    }
    Axis a{parts[0], parts[1], static_cast<std::size_t>(parts[2])};
    a.validate();
    return a;
}

/// `t=lo:hi:n,x=lo:hi:n` with optional per-axis overrides `x1=..`, `x2=..`.
inline GridSpec parse_grid(std::string_view text, int spatial_dim) {
    auto kv = KeyValues::parse(text);
    GridSpec g = default_grid(spatial_dim);
    if (auto t = kv.take("t")) g.t = parse_axis(*t);
    if (auto x = kv.take("x")) std::fill(g.x.begin(), g.x.end(), parse_axis(*x));
    for (int a = 1; a <= spatial_dim; ++a) {
        if (auto x = kv.take("x" + std::to_string(a))) g.x[static_cast<std::size_t>(a - 1)] = parse_axis(*x);
    }
    kv.finish("grid");
    return g;
}

struct IntRange {
    int lo = 0;
    int hi = 0;
};

inline IntRange parse_range(std::string_view text) {
    const auto dots = text.find("..");
    auto integer = [&](std::string_view s) {
        const double v = detail::parse_double(s);
        if (!detail::is_integer(v)) throw ParseError("range bounds must be integers: '" + std::string(text) + "'");
        return static_cast<int>(v);
    };
    if (dots == text.npos) {
        const int v = integer(text);
        return {v, v};
    }
    IntRange r{integer(text.substr(0, dots)), integer(text.substr(dots + 2))};
    if (r.lo > r.hi) throw ParseError("empty range '" + std::string(text) + "'");
    return r;
}

}  // namespace condsym
