// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any fails.

#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "condsym/condsym.hpp"
#include "run_cli.hpp"

using namespace condsym;

namespace {

struct Outcome {
    bool pass = true;
    std::string detail;
};

std::string sci(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2e", v);
    return buf;
}

// 1
Outcome catalog_residuals() {
    Outcome o;
    double worst = 0.0;
    std::size_t fewest = SIZE_MAX, families = 0;
    for (const auto& e : solution_catalog()) {
        ++families;
        for (const auto& r :
             run_residual_suite(as_field(e.family), designated_residuals(e.family), e.params, e.grid, 1e-8)) {
            worst = std::max(worst, r.max_abs_normalized);
            fewest = std::min(fewest, r.points_evaluated);
            if (!r.pass || r.points_evaluated < 1000) {
                o.pass = false;
                o.detail += " failed: " + e.spec + " " + std::string(to_string(r.equation)) + ";";
            }
        }
    }
    o.detail = std::to_string(families) + " families, worst normalized residual " + sci(worst) +
               ", fewest points " + std::to_string(fewest) + o.detail;
    return o;
}

template <class F>
void for_each_identity_scan(F&& f) {
    for (int spatial = 1; spatial <= 2; ++spatial) {
        for (double z : {0.5, 1.0, 2.0, 3.0}) {
            const ModelParams params{spatial, z};
            for (std::uint64_t seed = 1; seed <= 5; ++seed) {
                const auto u = make_random_polynomial(seed, params, 3, 1.0);
                for (int n = -2; n <= 3; ++n) f(identity_scan(u, params, n, 0.02, 50, seed, 1e-8));
            }
        }
    }
}

// 2 and 3
std::pair<Outcome, Outcome> identity_and_laws() {
    Outcome id, laws;
    double gap = 0.0, law = 0.0;
    std::size_t scans = 0, witnesses = 0, required = 0;
    for_each_identity_scan([&](const IdentityScan& s) {
        ++scans;
        gap = std::max(gap, s.max_gap);
        law = std::max(law, s.max_law_gap);
        required += s.witness_required;
        witnesses += s.witness_found;
        const std::string where =
            " n=" + std::to_string(s.n) + " z=" + detail::format_number(s.params.z) + " " + s.field + ";";
        if (s.max_gap >= 1e-8 || (s.witness_required && !s.witness_found)) {
            id.pass = false;
            id.detail += where;
        }
        if (s.max_law_gap >= 1e-8) {
            laws.pass = false;
            laws.detail += where;
        }
    });
    id.detail = std::to_string(scans) + " scans, max gap " + sci(gap) + ", obstruction witnessed " +
                std::to_string(witnesses) + "/" + std::to_string(required) + id.detail;
    laws.detail = std::to_string(scans) + " scans, max derivative-law gap " + sci(law) + laws.detail;
    return {id, laws};
}

// 4
Outcome commutator_table() {
    Outcome o;
    double worst = 0.0, yy = 0.0;
    std::size_t pairs = 0;
    for (int spatial : {2, 3}) {
        for (double z : {1.0, 2.0}) {
            const ModelParams params{spatial, z};
            for (const auto& r : commutator_scan(params, generator_window(spatial, -2, 2, -1, 2), 3, 1, 1e-9)) {
                ++pairs;
                worst = std::max(worst, r.max_gap);
                if (std::holds_alternative<GenY>(r.first) && std::holds_alternative<GenY>(r.second)) {
                    yy = std::max(yy, r.max_gap);
                }
                if (!r.pass) {
                    o.pass = false;
                    o.detail += " [" + to_string(r.first) + "," + to_string(r.second) + "];";
                }
            }
        }
    }
    if (yy != 0.0) o.pass = false;
    o.detail = std::to_string(pairs) + " pairs, max gap " + sci(worst) + ", [Y,Y] max gap " + sci(yy) + o.detail;
    return o;
}

// 5
Outcome reduction_chain() {
    Outcome o;
    double ansatz = 0.0, harmonic = 0.0;
    const Axis w1{0.2, 1.5, 10}, w2{-0.15, 0.15, 10};
    for (double z : {0.5, 2.0, 3.0}) {
        for (int n : {0, 1, 2}) {
            const SolutionFamily f{GeneralZ{0.7, 0.2, -0.1, n, z}};
            const auto phi = reduce_by_ansatz(as_field(f), {2, z}, n, 1.3);
            for (const auto& r : run_reduced_suite(phi, z, w1, w2, 1e-8)) {
                ansatz = std::max(ansatz, r.max_abs_normalized);
                if (!r.pass) {
                    o.pass = false;
                    o.detail += " ansatz z=" + detail::format_number(z) + " n=" + std::to_string(n) + ";";
                }
            }
        }
    }
    for (const auto& h : holomorphic_catalog()) {
        for (double z : {1.0, 2.0}) {
            const auto r =
                run_reduced_suite(build_phi_from_harmonic(HolomorphicProfile::parse(h.spec), z), z, h.w1, h.w2, 1e-8);
            harmonic = std::max(harmonic, r[0].max_abs_normalized);
            if (!r[0].pass) {
                o.pass = false;
                o.detail += " harmonic " + h.spec + " z=" + detail::format_number(z) + ";";
            }
        }
    }
    o.detail = "ansatz residual " + sci(ansatz) + ", harmonic first-equation residual " + sci(harmonic) + o.detail;
    return o;
}

// 6
Outcome finite_differences() {
    Outcome o;
    double worst = 0.0;
    std::size_t fields = 0;
    auto check = [&](const ScalarField& u, const ModelParams& params, const GridSpec& box) {
        ++fields;
        const auto pts = sample_interior_points(u, params, box, 100, 17, 1e-4);
        const auto r = fd_crosscheck(u, params, pts, 1e-4);
        worst = std::max(worst, r.max_rel_error);
        if (r.max_rel_error >= 1e-4) {
            o.pass = false;
            o.detail += " " + u.id() + ";";
        }
    };
    for (const auto& e : solution_catalog()) check(as_field(e.family), e.params, e.fd_box);
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
        const ModelParams params{static_cast<int>(seed % 3) + 1, 2.0};
        check(make_random_polynomial(seed, params, 3, 1.0), params, default_grid(params.spatial_dim));
    }
    o.detail = std::to_string(fields) + " fields x 100 points, max relative error " + sci(worst) + o.detail;
    return o;
}

// 7
Outcome radial_limit() {
    Outcome o;
    const SolutionFamily general{GeneralZ{0.5, 0.5, -0.3, 1, 1.0 + 1e-6}};
    const SolutionFamily radial{RadialZ1{1.0, 0.5, -0.3, 1}};
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> dt(0.5, 2.0), dx(-1.0, 1.0);
    double worst = 0.0;
    std::size_t points = 0;
    while (points < 100) {
        const Point p{dt(rng), {dx(rng), dx(rng)}};
        double g = 0.0, r = 0.0;
        try {
            g = evaluate_solution(general, default_params(general), p).value();
            r = evaluate_solution(radial, default_params(radial), p).value();
        } catch (const DomainError&) {
            continue;
        }
        ++points;
        worst = std::max(worst, std::abs(g - r) / std::abs(r));
    }
    o.pass = worst < 1e-4;
    o.detail = "100 points, max relative difference " + sci(worst);
    return o;
}

// 8
Outcome group_laws() {
    Outcome o;
    const std::vector<ProfileFunction> profiles = {ProfileFunction::parse("sin:1,1,0"),
                                                   ProfileFunction::parse("exp:1,0.5"),
                                                   ProfileFunction::parse("poly:0,1,-1")};
    auto elements = [&](int spatial) {
        std::vector<GroupElement> g;
        for (int n = -2; n <= 3; ++n) g.push_back(Xn{n, 0.02, 1.0});
        g.push_back(Xn{2, -0.015, 0.5});
        g.push_back(Xn{-1, 0.4, 1.0});
        g.push_back(Xn{0, -0.3, 2.0});
        const std::vector<double> v(static_cast<std::size_t>(spatial), 0.3);
        for (int k = -1; k <= 2; ++k) g.push_back(Yk{k, v});
        g.push_back(Yphi{std::vector<ProfileFunction>(profiles.begin(), profiles.begin() + spatial), v});
        for (int a = 0; a < spatial; ++a) {
            for (int b = a + 1; b < spatial; ++b) g.push_back(Rot{static_cast<std::size_t>(a), static_cast<std::size_t>(b), 0.7});
        }
        return g;
    };
    auto scaled = [](GroupElement g, double s) {
        std::visit(
            [s](auto& h) {
                using H = std::decay_t<decltype(h)>;
                if constexpr (std::is_same_v<H, Xn>) h.eps *= s;
                if constexpr (std::is_same_v<H, Yk>) for (auto& c : h.v) c *= s;
                if constexpr (std::is_same_v<H, Yphi>) for (auto& c : h.e) c *= s;
                if constexpr (std::is_same_v<H, Rot>) h.angle *= s;
            },
            g);
        return g;
    };
    auto dist = [](const Point& a, const Point& b) {
        double d = std::abs(a.t - b.t);
        for (std::size_t i = 0; i < a.x.size(); ++i) d = std::max(d, std::abs(a.x[i] - b.x[i]));
        return d;
    };
    std::mt19937_64 rng(8);
    std::uniform_real_distribution<double> dt(0.5, 1.5), dx(-1.0, 1.0);
    double worst = 0.0;
    std::size_t checks = 0;
    for (int spatial = 1; spatial <= 3; ++spatial) {
        for (double z : {0.0, 0.5, 1.0, 2.0, 3.0}) {
            const ModelParams params{spatial, z};
            const auto u = make_random_polynomial(3, params, 3, 1.0);
            for (const auto& g : elements(spatial)) {
                for (int i = 0; i < 20; ++i) {
                    Point p{dt(rng), {}};
                    for (int a = 0; a < spatial; ++a) p.x.push_back(dx(rng));
                    // inverse round trip
                    const auto [q, f] = transform_point(g, params, p);
                    const auto [back, fi] = transform_point(inverse(g), params, q);
                    // g(a) g(b) = g(a + b)
                    const auto [q2, f2] = transform_point(scaled(g, 0.6), params, p);
                    const auto [q12, f1] = transform_point(scaled(g, 0.4), params, q2);
                    // pushing forward by g and then by g^{-1} returns the field
                    const auto round = pushforward_field(inverse(g), pushforward_field(g, u));
                    const Jet2 a = round.evaluate(params, p), b = u.evaluate(params, p);
                    double jet_gap = std::abs(a.value() - b.value());
                    for (std::size_t k = 0; k < params.jet_dim(); ++k) {
                        jet_gap = std::max(jet_gap, std::abs(a.grad(k) - b.grad(k)));
                        for (std::size_t l = 0; l < params.jet_dim(); ++l) {
                            jet_gap = std::max(jet_gap, std::abs(a.hess(k, l) - b.hess(k, l)));
                        }
                    }
                    const double gap = std::max({dist(back, p), std::abs(f.u_factor * fi.u_factor - 1.0),
                                                 dist(q12, q), std::abs(f1.u_factor * f2.u_factor - f.u_factor),
                                                 jet_gap});
                    ++checks;
                    worst = std::max(worst, gap);
                    if (gap >= 1e-10) {
                        o.pass = false;
                        o.detail += " " + to_string(g) + " z=" + detail::format_number(z) + ";";
                    }
                }
            }
        }
    }
    o.detail = std::to_string(checks) + " samples over all element kinds, max deviation " + sci(worst) + o.detail;
    return o;
}

// 9
Outcome cli_contract() {
    Outcome o;
    const std::vector<std::vector<std::string>> invocations = {
        {"check", "--family", "general-z:c=0.5,e1=0.5,e2=0,n=1,z=2"},
        {"transform", "--family", "radial-z1:c=1,e1=0.5,e2=-0.3,n=1", "--element", "Yk:k=1,v=0.5,0", "--format", "csv"},
        {"identity", "--seed", "3", "--points", "20"},
        {"commutators", "--N", "3", "--z", "1"},
        {"fd-check", "--field", "random:deg=3", "--seed", "5", "--points", "50"},
        {"catalog"},
    };
    const auto& run = cli::run;
    std::size_t identical = 0;
    for (const auto& args : invocations) {
        const auto a = run(args), b = run(args);
        if (a.out == b.out && !a.out.empty() && a.code == b.code) {
            ++identical;
        } else {
            o.pass = false;
            o.detail += " nondeterministic: " + args[0] + ";";
        }
    }
    const int pass_code = run({"check", "--family", "radial-z1:c=1,e1=0.5,e2=-0.3,n=1"}).code;
    const int fail_code = run({"check", "--field", "mpoly:1@0.2.0|1@0.0.2", "--kinds", "monge-ampere"}).code;
    const int usage_code = run({"check", "--no-such-flag"}).code;
    if (pass_code != 0 || fail_code != 1 || usage_code != 2) o.pass = false;
    o.detail = std::to_string(identical) + "/" + std::to_string(invocations.size()) +
               " subcommands byte-identical, exit codes pass/fail/usage = " + std::to_string(pass_code) + "/" +
               std::to_string(fail_code) + "/" + std::to_string(usage_code) + o.detail;
    return o;
}

}  // namespace

int main() {
    const auto [identity, laws] = identity_and_laws();
    const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
        {"1 solution catalog", catalog_residuals},
        {"2 pushforward identity", [&] { return identity; }},
        {"3 derivative laws", [&] { return laws; }},
        {"4 commutator table", commutator_table},
        {"5 reduction chain", reduction_chain},
        {"6 jets vs finite differences", finite_differences},
        {"7 radial limit", radial_limit},
        {"8 group laws", group_laws},
        {"9 cli determinism and exit codes", cli_contract},
    };
    int failures = 0;
    for (const auto& [name, run] : criteria) {
        Outcome o;
        try {
            o = run();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        failures += !o.pass;
        std::printf("%s criterion %s: %s\n", o.pass ? "PASS" : "FAIL", name.c_str(), o.detail.c_str());
    }
    return failures == 0 ? 0 : 1;
}
