#pragma once

/**
 * @file verify.hpp
 * @brief Residual sweeps over tensor grids and finite-difference validation of jets.
 */

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "condsym/errors.hpp"
#include "condsym/fields.hpp"
#include "condsym/operators.hpp"

namespace condsym {

/// `count` equispaced nodes on [lo, hi], endpoints included.
struct Axis {
    double lo = 0.0;
    double hi = 1.0;
    std::size_t count = 2;

    double node(std::size_t i) const {
        if (i + 1 == count) return hi;
        return lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(count - 1);
    }
    void validate() const {
        if (count < 2) throw std::invalid_argument("grid axis needs at least 2 nodes");
        if (!(lo < hi)) throw std::invalid_argument("grid axis needs lo < hi");
    }
};

struct GridSpec {
    Axis t;
    std::vector<Axis> x;
    /// Points for which this returns true are excluded before evaluation.
    std::function<bool(const Point&)> exclude;

    std::size_t total_points() const {
        std::size_t n = t.count;
        for (const auto& a : x) n *= a.count;
        return n;
    }

    void validate(const ModelParams& params) const {
        t.validate();
        for (const auto& a : x) a.validate();
        if (x.size() != static_cast<std::size_t>(params.spatial_dim)) {
            throw DimensionMismatch("grid has " + std::to_string(x.size()) + " spatial axes, N=" +
                                    std::to_string(params.spatial_dim));
        }
    }

    /// Visits points with t slowest and x_N fastest.
    template <class F>
    void for_each(F&& f) const {
        std::size_t per_t = 1;
        for (const auto& a : x) per_t *= a.count;
        Point p{0.0, std::vector<double>(x.size())};
        for (std::size_t it = 0; it < t.count; ++it) {
            p.t = t.node(it);
            for (std::size_t k = 0; k < per_t; ++k) {
                std::size_t rest = k;
                for (std::size_t a = x.size(); a-- > 0;) {
                    p.x[a] = x[a].node(rest % x[a].count);
                    rest /= x[a].count;
                }
                f(p);
            }
        }
    }
};

/// [0.5, 2] x [-1, 1]^N.
inline GridSpec default_grid(int spatial_dim, std::size_t t_count = 10, std::size_t x_count = 10) {
    return {{0.5, 2.0, t_count}, std::vector<Axis>(static_cast<std::size_t>(spatial_dim), Axis{-1.0, 1.0, x_count}),
            {}};
}

struct ResidualSpec {
    ResidualKind kind = ResidualKind::Diffusion;
    GCallback g;  // GeneralInvariant only
};

/// Evaluate one residual kind on a jet of the field (reduced kinds are not field residuals).
inline Residual field_residual(const ResidualSpec& spec, const Jet2& jet, const ModelParams& params) {
    switch (spec.kind) {
        case ResidualKind::Diffusion: return diffusion_residual(jet, params);
        case ResidualKind::MongeAmpere: return monge_ampere_residual(jet, params);
        case ResidualKind::Z0Diffusion: return z0_diffusion_residual(jet, params);
        case ResidualKind::GeneralInvariant:
            if (!spec.g) throw std::invalid_argument("general-invariant residual needs g");
            return general_residual(jet, params, spec.g);
        case ResidualKind::ReducedFirst:
        case ResidualKind::ReducedSecond: break;
    }
    throw std::invalid_argument("reduced residuals apply to fields of (w1, w2), use run_reduced_suite");
}

struct ResidualReport {
    ResidualKind equation = ResidualKind::Diffusion;
    std::string field;
    std::size_t points_evaluated = 0;
    std::size_t points_excluded = 0;
    double max_abs = 0.0;             // raw
    double max_abs_normalized = 0.0;  // compared with the tolerance
    double rms = 0.0;                 // raw
    Point worst_point;                // location of max_abs_normalized
    double tolerance = 0.0;
    bool pass = false;
};

namespace detail {

struct Accumulator {
    ResidualReport report;
    double sum_sq = 0.0;

    void add(const Residual& r, const Point& p) {
        ++report.points_evaluated;
        double raw = std::abs(r.value);
        double nrm = std::abs(r.normalized());
        if (!std::isfinite(raw) || !std::isfinite(nrm)) {
            raw = nrm = std::numeric_limits<double>::infinity();
        }
        sum_sq += raw * raw;
        report.max_abs = std::max(report.max_abs, raw);
        if (nrm > report.max_abs_normalized || report.points_evaluated == 1) {
            report.max_abs_normalized = nrm;
            report.worst_point = p;
        }
    }

    ResidualReport finish(std::size_t total) {
        auto& r = report;
        if (r.points_evaluated > 0) r.rms = std::sqrt(sum_sq / static_cast<double>(r.points_evaluated));
        r.pass = r.points_evaluated > 0 && r.max_abs_normalized <= r.tolerance && 2 * r.points_excluded <= total;
        return r;
    }
};

}  // namespace detail

/// One report per spec, in the order given. Domain errors at a point count as exclusions.
inline std::vector<ResidualReport> run_residual_suite(const ScalarField& field, const std::vector<ResidualSpec>& specs,
                                                      const ModelParams& params, const GridSpec& grid, double tol) {
    grid.validate(params);
    std::vector<detail::Accumulator> acc(specs.size());
    for (std::size_t i = 0; i < specs.size(); ++i) {
        acc[i].report.equation = specs[i].kind;
        acc[i].report.field = field.id();
        acc[i].report.tolerance = tol;
    }
    grid.for_each([&](const Point& p) {
        auto exclude_all = [&] {
            for (auto& a : acc) ++a.report.points_excluded;
        };
        if (grid.exclude && grid.exclude(p)) return exclude_all();
        std::optional<Jet2> jet;
        try {
            jet = field.evaluate(params, p);
        } catch (const DomainError&) {
            return exclude_all();
        }
        for (std::size_t i = 0; i < specs.size(); ++i) {
            try {
                acc[i].add(field_residual(specs[i], *jet, params), p);
            } catch (const DomainError&) {
                ++acc[i].report.points_excluded;
            }
        }
    });
    std::vector<ResidualReport> out;
    for (auto& a : acc) out.push_back(a.finish(grid.total_points()));
    return out;
}

inline std::vector<ResidualReport> run_residual_suite(const ScalarField& field, const std::vector<ResidualKind>& kinds,
                                                      const ModelParams& params, const GridSpec& grid, double tol) {
    std::vector<ResidualSpec> specs;
    for (auto k : kinds) specs.push_back({k, {}});
    return run_residual_suite(field, specs, params, grid, tol);
}

/// Both reduced residuals over a (w1, w2) grid. worst_point carries t = 0 and x = (w1, w2).
inline std::vector<ResidualReport> run_reduced_suite(const ReducedField& phi, double z, const Axis& w1,
                                                     const Axis& w2, double tol) {
    w1.validate();
    w2.validate();
    detail::Accumulator first, second;
    for (auto* a : {&first, &second}) {
        a->report.field = phi.id();
        a->report.tolerance = tol;
    }
    first.report.equation = ResidualKind::ReducedFirst;
    second.report.equation = ResidualKind::ReducedSecond;
    for (std::size_t i = 0; i < w1.count; ++i) {
        for (std::size_t j = 0; j < w2.count; ++j) {
            const Point p{0.0, {w1.node(i), w2.node(j)}};
            try {
                const auto r = reduced_residuals(phi.evaluate(p.x[0], p.x[1]), z);
                first.add({r.first, r.scale}, p);
                second.add({r.second, r.scale}, p);
            } catch (const DomainError&) {
                ++first.report.points_excluded;
                ++second.report.points_excluded;
            }
        }
    }
    const std::size_t total = w1.count * w2.count;
    return {first.finish(total), second.finish(total)};
}

struct FdResult {
    double max_rel_error = 0.0;
    Point worst_point;
    std::size_t points = 0;
};

/// Largest |jet - central difference| / max(1, |jet|) over value-stencils of step h.
/// Throws DomainError when a stencil point leaves the field's domain.
inline FdResult fd_crosscheck(const ScalarField& field, const ModelParams& params, const std::vector<Point>& points,
                              double h) {
    if (!(h > 0.0)) throw std::invalid_argument("fd step must be positive");
    const std::size_t d = params.jet_dim();
    auto shifted = [&](Point p, std::size_t i, double di, std::size_t j, double dj) {
        auto bump = [&p](std::size_t k, double dk) {
            if (k == 0) {
                p.t += dk;
            } else {
                p.x[k - 1] += dk;
            }
        };
        bump(i, di);
        if (dj != 0.0) bump(j, dj);
        return field.evaluate(params, p).value();
    };
    FdResult res;
    for (const auto& p : points) {
        const Jet2 jet = field.evaluate(params, p);
        const double f0 = jet.value();
        double worst = 0.0;
        auto compare = [&worst](double exact, double approx) {
            worst = std::max(worst, std::abs(exact - approx) / std::max(1.0, std::abs(exact)));
        };
        for (std::size_t i = 0; i < d; ++i) {
            const double fp = shifted(p, i, h, i, 0.0);
            const double fm = shifted(p, i, -h, i, 0.0);
            compare(jet.grad(i), (fp - fm) / (2.0 * h));
            compare(jet.hess(i, i), (fp - 2.0 * f0 + fm) / (h * h));
            for (std::size_t j = i + 1; j < d; ++j) {
                const double fpp = shifted(p, i, h, j, h);
                const double fpm = shifted(p, i, h, j, -h);
                const double fmp = shifted(p, i, -h, j, h);
                const double fmm = shifted(p, i, -h, j, -h);
                compare(jet.hess(i, j), (fpp - fpm - fmp + fmm) / (4.0 * h * h));
            }
        }
        ++res.points;
        if (worst > res.max_rel_error || res.points == 1) {
            res.max_rel_error = worst;
            res.worst_point = p;
        }
    }
    return res;
}

/// Uniform random points in the grid's bounding box at which the field and its whole
/// 2h-stencil evaluate without domain errors. Deterministic in the seed.
inline std::vector<Point> sample_interior_points(const ScalarField& field, const ModelParams& params,
                                                 const GridSpec& box, std::size_t count, std::uint64_t seed, double h,
                                                 std::size_t max_attempts = 100000) {
    box.validate(params);
    std::mt19937_64 rng(seed);
    auto draw = [&rng](const Axis& a) { return std::uniform_real_distribution<double>(a.lo, a.hi)(rng); };
    std::vector<Point> out;
    for (std::size_t attempt = 0; attempt < max_attempts && out.size() < count; ++attempt) {
        Point p{draw(box.t), {}};
        for (const auto& a : box.x) p.x.push_back(draw(a));
        if (box.exclude && box.exclude(p)) continue;
        try {
            (void)fd_crosscheck(field, params, {p}, 2.0 * h);
        } catch (const DomainError&) {
            continue;
        }
        out.push_back(std::move(p));
    }
    if (out.size() < count) {
        throw DomainError("only " + std::to_string(out.size()) + " of " + std::to_string(count) +
                          " interior points found");
    }
    return out;
}

}  // namespace condsym
