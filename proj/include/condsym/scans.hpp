#pragma once

/**
 * @file scans.hpp
 * @brief Randomized sweeps of the pushforward identity and of the commutator table.
 */

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "condsym/fields.hpp"
#include "condsym/symmetry.hpp"

namespace condsym {

struct IdentityScan {
    int n = 0;
    ModelParams params;
    std::string field;
    std::size_t points = 0;
    double max_gap = 0.0;           // pushforward identity
    double max_law_gap = 0.0;       // transformed derivatives
    double max_obstruction = 0.0;
    bool witness_required = false;  // n not in {-1, 0} and |W_N^II| > 0.1 somewhere
    bool witness_found = false;     // ... and there |obstruction| > 1e-3 |eps|
    double tolerance = 0.0;
    bool pass = false;
};

/// `count` samples t in [0.5, 1.5], x in [-1, 1]^N, |eps| <= eps_max, redrawn while
/// |eps z n t^n| >= 1/2 so that the X_n action stays on its branch.
inline IdentityScan identity_scan(const ScalarField& u, const ModelParams& params, int n, double eps_max,
                                  std::size_t count, std::uint64_t seed, double tol) {
    if (!(eps_max > 0.0)) throw std::invalid_argument("eps must be positive");
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> dt(0.5, 1.5), dx(-1.0, 1.0), de(-eps_max, eps_max);
    IdentityScan s;
    s.n = n;
    s.params = params;
    s.field = u.id();
    s.tolerance = tol;
    while (s.points < count) {
        Point p{dt(rng), {}};
        for (int a = 0; a < params.spatial_dim; ++a) p.x.push_back(dx(rng));
        const double eps = de(rng);
        if (std::abs(eps * params.z * n * detail::ipow(p.t, n)) >= 0.5) continue;
        const GroupElement g = Xn{n, eps, 1.0};
        const auto c = pushforward_identity(g, params, u, p);
        s.max_gap = std::max(s.max_gap, c.gap);
        s.max_law_gap = std::max(s.max_law_gap, derivative_law_gap(g, params, u, p));
        s.max_obstruction = std::max(s.max_obstruction, std::abs(c.obstruction));
        if (n != -1 && n != 0 && std::abs(c.monge_ampere) > 0.1) {
            s.witness_required = true;
            if (std::abs(c.obstruction) > 1e-3 * std::abs(eps)) s.witness_found = true;
        }
        ++s.points;
    }
    s.pass = s.max_gap <= tol && s.max_law_gap <= tol && (!s.witness_required || s.witness_found);
    return s;
}

struct CommutatorRow {
    AlgebraGenerator first;
    AlgebraGenerator second;
    LinearCombination expected;
    double max_gap = 0.0;
    double tolerance = 0.0;
    bool pass = false;
};

inline std::string to_string(const LinearCombination& c) {
    if (c.empty()) return "0";
    std::string s;
    for (const auto& [coef, g] : c) {
        if (!s.empty()) s += " + ";
        s += detail::format_number(coef) + " " + to_string(g);
    }
    return s;
}

/// X_n for n in [n_lo, n_hi], Y_k^(a) for k in [k_lo, k_hi], and every J_ab.
inline std::vector<AlgebraGenerator> generator_window(int spatial_dim, int n_lo, int n_hi, int k_lo, int k_hi) {
    std::vector<AlgebraGenerator> g;
    for (int n = n_lo; n <= n_hi; ++n) g.push_back(GenX{n, 1.0});
    for (int k = k_lo; k <= k_hi; ++k) {
        for (int a = 0; a < spatial_dim; ++a) g.push_back(GenY{k, static_cast<std::size_t>(a)});
    }
    for (int a = 0; a < spatial_dim; ++a) {
        for (int b = a + 1; b < spatial_dim; ++b) g.push_back(GenJ{static_cast<std::size_t>(a), static_cast<std::size_t>(b)});
    }
    return g;
}

/// Every ordered pair of the window, on the standard test functions at `samples`
/// points with t in [0.5, 1.5] and x, u in [-1, 1].
inline std::vector<CommutatorRow> commutator_scan(const ModelParams& params, const std::vector<AlgebraGenerator>& gens,
                                                  std::size_t samples, std::uint64_t seed, double tol) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> dt(0.5, 1.5), dx(-1.0, 1.0);
    std::vector<ExtendedPoint> points;
    for (std::size_t i = 0; i < samples; ++i) {
        ExtendedPoint p{dt(rng), {}, 0.0};
        for (int a = 0; a < params.spatial_dim; ++a) p.x.push_back(dx(rng));
        p.u = dx(rng);
        points.push_back(std::move(p));
    }
    const auto fs = standard_test_functions();
    std::vector<CommutatorRow> rows;
    for (const auto& g1 : gens) {
        for (const auto& g2 : gens) {
            CommutatorRow r{g1, g2, expected_commutator(g1, g2, params), 0.0, tol, false};
            for (const auto& f : fs) {
                for (const auto& p : points) r.max_gap = std::max(r.max_gap, commutator_gap(g1, g2, r.expected, params, f, p));
            }
            r.pass = r.max_gap <= tol;
            rows.push_back(std::move(r));
        }
    }
    return rows;
}

}  // namespace condsym
