#pragma once

/**
 * @file catalog.hpp
 * @brief Representative instances of every solution family with the grids they
 *        are verified on, plus the holomorphic profiles used for the reduced system.
 */

#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "condsym/grammar.hpp"
#include "condsym/operators.hpp"
#include "condsym/solutions.hpp"
#include "condsym/verify.hpp"

namespace condsym {

struct CatalogEntry {
    std::string spec;  // family text form
    SolutionFamily family;
    ModelParams params;
    GridSpec grid;
    /// Box for finite-difference sampling, kept away from the singular edges of the domain.
    GridSpec fd_box;
};

namespace detail {

inline CatalogEntry catalog_entry(const std::string& spec, GridSpec grid, std::optional<GridSpec> fd_box = {}) {
    auto fam = parse_family(spec);
    const auto params = default_params(fam);
    GridSpec box = fd_box ? std::move(*fd_box) : grid;
    return {spec, std::move(fam), params, std::move(grid), std::move(box)};
}

/// 10 x 20 x 20 over [0.5, 2] x [-1, 1]^2; the even x-count keeps the nodes off the axes.
inline GridSpec planar_grid() { return default_grid(2, 10, 20); }

}  // namespace detail

/// Grid used when none is given: 10 x 100 for N = 1, 10 x 20^2 for N = 2, coarser above.
inline GridSpec default_check_grid(int spatial_dim) {
    if (spatial_dim == 1) return default_grid(1, 10, 100);
    if (spatial_dim == 2) return detail::planar_grid();
    if (spatial_dim == 3) return default_grid(3, 4, 8);
    return default_grid(spatial_dim, 3, 4);
}

inline std::vector<CatalogEntry> solution_catalog() {
    using detail::catalog_entry;
    const GridSpec line{{0.5, 2.0, 10}, {{-1.0, 1.0, 100}}, {}};
    const GridSpec plane = detail::planar_grid();
    // cos(-2 theta) > 0 confines z = 3 to |theta| < pi/4 around the shifted x1-axis
    const GridSpec sector{{0.5, 2.0, 10}, {{0.05, 1.5, 20}, {-0.8, 0.8, 20}}, {}};
    const GridSpec cube{{0.5, 2.0, 4}, {{-1.0, 1.0, 8}, {-1.0, 1.0, 8}, {-1.0, 1.0, 8}}, {}};
    const GridSpec right_half{{0.5, 2.0, 2}, {{0.0, 1.0, 2}, {-0.5, 0.5, 2}}, {}};

    std::vector<CatalogEntry> out;
    out.push_back(catalog_entry("onedim-z0:c=1.5,q=sin:1,2,0", line));
    out.push_back(catalog_entry("onedim-z1:c=0.7,q=poly:1,0,2", line));
    out.push_back(catalog_entry("onedim:z=2,q=exp:1,0.5", line));
    // the cone vertex sits at x = -e t^2, inside x1 < 0, x2 > 0
    out.push_back(catalog_entry("radial-z1:c=1,e1=0.5,e2=-0.3,n=1", plane,
                                GridSpec{{0.5, 2.0, 2}, {{0.0, 1.0, 2}, {-1.0, 0.0, 2}}, {}}));
    out.push_back(catalog_entry("general-z:c=0.5,e1=0.5,e2=0,n=1,z=2", plane, right_half));
    out.push_back(catalog_entry("general-z:c=1,e1=0.3,e2=0.2,n=0,z=0.5", plane));
    out.push_back(catalog_entry("general-z:c=1,e1=0.5,e2=0,n=2,z=3", sector,
                                GridSpec{{0.5, 2.0, 2}, {{0.5, 1.5, 2}, {-0.3, 0.3, 2}}, {}}));
    out.push_back(catalog_entry("z0-sqrt:psi=poly:20,0,1", plane,
                                GridSpec{{0.5, 2.0, 2}, {{0.5, 1.0, 2}, {0.3, 0.8, 2}}, {}}));
    out.push_back(catalog_entry("z0-linear:psi1=sin:1,1,0,psi2=poly:0,1", plane));
    out.push_back(catalog_entry("general-yphi:c=0.5,e1=1,e2=0.5,z=2,phi1=sin:1,1,0,phi2=poly:0,0,1", plane,
                                GridSpec{{0.5, 1.2, 2}, {{0.0, 1.0, 2}, {-1.0, 0.0, 2}}, {}}));
    out.push_back(catalog_entry("ma-only:N=3,phi=mpoly:1@0.0|0.5@1.0|-0.25@0.1|0.2@1.1|0.1@2.0", cube,
                                GridSpec{{0.5, 2.0, 2}, {{0.3, 1.0, 2}, {0.3, 1.0, 2}, {0.3, 1.0, 2}}, {}}));
    return out;
}

/// Holomorphic f for phi~ = 2 Re f(w1 + i w2), with a (w1, w2) window where phi~ > 0.
struct HolomorphicChoice {
    std::string spec;
    Axis w1;
    Axis w2;
};

inline std::vector<HolomorphicChoice> holomorphic_catalog() {
    return {{"poly:0,1", {0.2, 1.5, 20}, {-1.0, 1.0, 20}},
            {"poly:1,0,1", {0.2, 1.5, 20}, {-0.5, 0.5, 20}},
            {"exp:1", {-1.0, 1.0, 20}, {-1.2, 1.2, 20}}};
}

/// Profile kinds accepted wherever a function of t is expected.
inline std::vector<std::string> profile_kinds() {
    return {"poly:c0,c1,...   c0 + c1 t + ...", "exp:a,b          a e^{b t}", "sin:a,b,c        a sin(b t + c)",
            "const:c          c"};
}

}  // namespace condsym
