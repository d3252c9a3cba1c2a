/**
 * @file condsym.cpp
 * @brief Command-line front end for the conditional-symmetry verification suites.
 *
 * Subcommands: check, transform, identity, commutators, fd-check, catalog.
 * Reports go to stdout (JSON, or CSV with --format csv), a one-line summary to stderr.
 * Exit status: 0 all pass, 1 some check failed, 2 usage or domain error.
 */

#include <cstdint>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "condsym/condsym.hpp"
#include "condsym/report.hpp"

namespace {

using nlohmann::ordered_json;
using namespace condsym;

constexpr int kPass = 0;
constexpr int kFail = 1;
constexpr int kUsage = 2;

struct Options {
    std::string family;
    std::string field;
    std::string element;
    std::string grid;
    std::string kinds;
    std::string n_range;
    std::string k_range;
    std::optional<double> z;
    std::optional<int> N;
    double eps = 0.02;
    std::optional<double> tol;
    std::string format = "json";
    std::optional<std::uint64_t> seed;
    double h = 1e-4;
    std::size_t points = 0;
};

/// One table emitted either as a JSON array of objects or as CSV with a header row.
void emit(const std::vector<ordered_json>& rows, const std::string& format) {
    if (format == "json") {
        std::cout << ordered_json(rows).dump(2) << '\n';
        return;
    }
    if (rows.empty()) return;
    auto cell = [](const ordered_json& v) -> std::string {
        if (v.is_string()) return detail::csv_cell(v.get<std::string>());
        if (v.is_number_float()) return detail::format_number(v.get<double>());
        if (v.is_object() || v.is_array()) return detail::csv_cell(v.dump());
        return v.dump();
    };
    std::string header;
    for (auto it = rows.front().begin(); it != rows.front().end(); ++it) {
        header += (header.empty() ? "" : ",") + it.key();
    }
    std::cout << header << '\n';
    for (const auto& r : rows) {
        std::string line;
        bool first = true;
        for (auto it = r.begin(); it != r.end(); ++it) {
            line += (first ? "" : ",") + cell(it.value());
            first = false;
        }
        std::cout << line << '\n';
    }
}

std::vector<ordered_json> report_rows(const std::vector<ResidualReport>& reports) {
    std::vector<ordered_json> rows;
    for (const auto& r : reports) rows.push_back(to_json(r));
    return rows;
}

int summarize(const std::string& command, std::size_t passed, std::size_t total) {
    std::cerr << command << ": " << passed << "/" << total << " passed\n";
    return passed == total ? kPass : kFail;
}

int summarize_reports(const std::string& command, const std::vector<ResidualReport>& reports) {
    std::size_t passed = 0;
    for (const auto& r : reports) passed += r.pass;
    return summarize(command, passed, reports.size());
}

/// Family params, overridden by --z/--N; the result must be admissible for the family.
ModelParams family_params(const SolutionFamily& fam, const Options& o) {
    ModelParams p = default_params(fam);
    if (o.z) p.z = *o.z;
    if (o.N) p.spatial_dim = *o.N;
    if (!admissible(fam, p)) {
        throw std::invalid_argument("family " + to_string(fam) + " is not defined at N=" +
                                    std::to_string(p.spatial_dim) + ", z=" + detail::format_number(p.z));
    }
    return p;
}

std::vector<ResidualKind> parse_kinds(const std::string& text) {
    std::vector<ResidualKind> out;
    std::stringstream ss(text);
    for (std::string item; std::getline(ss, item, ',');) out.push_back(parse_residual_kind(item));
    return out;
}

GridSpec grid_for(const Options& o, int spatial_dim) {
    return o.grid.empty() ? default_check_grid(spatial_dim) : parse_grid(o.grid, spatial_dim);
}

/// Catalog families sample their own box, away from singular edges.
GridSpec fd_box_for(const Options& o, int spatial_dim) {
    if (o.grid.empty() && !o.family.empty()) {
        for (const auto& e : solution_catalog()) {
            if (e.spec == o.family && e.params.spatial_dim == spatial_dim) return e.fd_box;
        }
    }
    return grid_for(o, spatial_dim);
}

int run_check(const Options& o) {
    if (o.family.empty() == o.field.empty()) throw std::invalid_argument("check needs exactly one of --family, --field");
    ScalarField field;
    ModelParams params;
    std::vector<ResidualKind> kinds;
    if (!o.family.empty()) {
        const auto fam = parse_family(o.family);
        params = family_params(fam, o);
        field = as_field(fam);
        kinds = designated_residuals(fam);
    } else {
        params = {o.N.value_or(2), o.z.value_or(1.0)};
        field = parse_field(o.field, params, o.seed);
        kinds = {ResidualKind::Diffusion, ResidualKind::MongeAmpere};
    }
    if (!o.kinds.empty()) kinds = parse_kinds(o.kinds);
    const auto reports = run_residual_suite(field, kinds, params, grid_for(o, params.spatial_dim), o.tol.value_or(1e-8));
    emit(report_rows(reports), o.format);
    return summarize_reports("check", reports);
}

int run_transform(const Options& o) {
    if (o.family.empty() || o.element.empty()) throw std::invalid_argument("transform needs --family and --element");
    const auto fam = parse_family(o.family);
    const auto params = family_params(fam, o);
    const auto g = parse_element(o.element);
    const auto field = pushforward_field(g, as_field(fam));
    auto kinds = designated_residuals(fam);
    if (!o.kinds.empty()) kinds = parse_kinds(o.kinds);
    const auto reports = run_residual_suite(field, kinds, params, grid_for(o, params.spatial_dim), o.tol.value_or(1e-8));
    emit(report_rows(reports), o.format);
    return summarize_reports("transform", reports);
}

int run_identity(const Options& o) {
    if (!o.seed) throw std::invalid_argument("identity samples random points and needs --seed");
    const ModelParams params{o.N.value_or(2), o.z.value_or(2.0)};
    const auto field = parse_field(o.field.empty() ? "random:deg=3" : o.field, params, o.seed);
    const auto range = parse_range(o.n_range.empty() ? "-2..3" : o.n_range);
    const double tol = o.tol.value_or(1e-8);
    std::vector<ordered_json> rows;
    std::size_t passed = 0, total = 0;
    for (int n = range.lo; n <= range.hi; ++n) {
        const auto s = identity_scan(field, params, n, o.eps, o.points ? o.points : 50, *o.seed, tol);
        ordered_json j;
        j["n"] = s.n;
        j["z"] = params.z;
        j["N"] = params.spatial_dim;
        j["field"] = s.field;
        j["points"] = s.points;
        j["eps"] = o.eps;
        j["max_gap"] = s.max_gap;
        j["max_law_gap"] = s.max_law_gap;
        j["max_obstruction"] = s.max_obstruction;
        j["witness_required"] = s.witness_required;
        j["witness_found"] = s.witness_found;
        j["tolerance"] = s.tolerance;
        j["pass"] = s.pass;
        rows.push_back(std::move(j));
        passed += s.pass;
        ++total;
    }
    emit(rows, o.format);
    return summarize("identity", passed, total);
}

int run_commutators(const Options& o) {
    const ModelParams params{o.N.value_or(2), o.z.value_or(2.0)};
    if (params.spatial_dim < 1) throw std::invalid_argument("--N must be >= 1");
    const auto n = parse_range(o.n_range.empty() ? "-2..2" : o.n_range);
    const auto k = parse_range(o.k_range.empty() ? "-1..2" : o.k_range);
    const auto rows =
        commutator_scan(params, generator_window(params.spatial_dim, n.lo, n.hi, k.lo, k.hi), o.points ? o.points : 3,
                        o.seed.value_or(1), o.tol.value_or(1e-9));
    std::vector<ordered_json> out;
    std::size_t passed = 0;
    for (const auto& r : rows) {
        ordered_json j;
        j["first"] = to_string(r.first);
        j["second"] = to_string(r.second);
        j["expected"] = to_string(r.expected);
        j["max_gap"] = r.max_gap;
        j["tolerance"] = r.tolerance;
        j["pass"] = r.pass;
        out.push_back(std::move(j));
        passed += r.pass;
    }
    emit(out, o.format);
    return summarize("commutators", passed, rows.size());
}

int run_fd_check(const Options& o) {
    if (!o.seed) throw std::invalid_argument("fd-check samples random points and needs --seed");
    if (o.family.empty() == o.field.empty()) {
        throw std::invalid_argument("fd-check needs exactly one of --family, --field");
    }
    ScalarField field;
    ModelParams params;
    if (!o.family.empty()) {
        const auto fam = parse_family(o.family);
        params = family_params(fam, o);
        field = as_field(fam);
    } else {
        params = {o.N.value_or(2), o.z.value_or(1.0)};
        field = parse_field(o.field, params, o.seed);
    }
    const double tol = o.tol.value_or(1e-4);
    const auto pts = sample_interior_points(field, params, fd_box_for(o, params.spatial_dim), o.points ? o.points : 100,
                                            *o.seed, o.h);
    const auto r = fd_crosscheck(field, params, pts, o.h);
    ordered_json j;
    j["field"] = field.id();
    j["points"] = r.points;
    j["h"] = o.h;
    j["max_rel_error"] = r.max_rel_error;
    j["worst_point"] = to_json(r.worst_point);
    j["tolerance"] = tol;
    j["pass"] = r.max_rel_error <= tol;
    emit({j}, o.format);
    return summarize("fd-check", r.max_rel_error <= tol, 1);
}

int run_catalog(const Options& o) {
    std::vector<ordered_json> rows;
    for (const auto& e : solution_catalog()) {
        ordered_json j;
        j["kind"] = "family";
        j["spec"] = e.spec;
        j["N"] = e.params.spatial_dim;
        j["z"] = e.params.z;
        std::string kinds;
        for (auto k : designated_residuals(e.family)) kinds += (kinds.empty() ? "" : " ") + std::string(to_string(k));
        j["residuals"] = kinds;
        j["grid_points"] = e.grid.total_points();
        rows.push_back(std::move(j));
    }
    for (const auto& p : profile_kinds()) rows.push_back({{"kind", "profile"}, {"spec", p}});
    for (const char* g : {"Xn:n=1,eps=0.01[,lambda=1]", "Yk:k=1,v=0.5,0.0", "Yphi:e=1,0;profiles=sin:1,1,0|const:0",
                          "rot:a=1,b=2,angle=0.3"}) {
        rows.push_back({{"kind", "element"}, {"spec", g}});
    }
    for (const char* f : {"random:deg=3,seed=7[,bound=1]", "mpoly:c@e_t.e_1..e_N|...", "<any family spec>"}) {
        rows.push_back({{"kind", "field"}, {"spec", f}});
    }
    rows.push_back({{"kind", "grid"}, {"spec", "t=0.5:2:10,x=-1:1:20[,x1=lo:hi:n,...]"}});
    for (auto& r : rows) {
        for (const char* key : {"N", "z", "residuals", "grid_points"}) {
            if (!r.contains(key)) r[key] = nullptr;
        }
        r["tolerance"] = o.tol.value_or(1e-8);
    }
    emit(rows, o.format);
    std::cerr << "catalog: " << rows.size() << " entries\n";
    return kPass;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Numerical verification of conditional symmetries of determinant-form diffusion equations"};
    app.require_subcommand(1);
    Options o;

    auto common = [&o](CLI::App* sub) {
        sub->add_option("--tol", o.tol, "Pass tolerance");
        sub->add_option("--format", o.format, "Output format")->check(CLI::IsMember({"json", "csv"}));
        sub->add_option("--seed", o.seed, "Seed for random fields and sampling");
    };
    auto model = [&o](CLI::App* sub) {
        sub->add_option("--z", o.z, "Dynamical exponent z");
        sub->add_option("--N", o.N, "Spatial dimension N")->check(CLI::Range(1, 7));
    };

    auto* check = app.add_subcommand("check", "Residuals of a family or field on a grid");
    check->add_option("--family", o.family, "Solution family, e.g. radial-z1:c=1,e1=0,e2=0,n=0");
    check->add_option("--field", o.field, "Field, e.g. random:deg=3,seed=7");
    check->add_option("--grid", o.grid, "Grid, e.g. t=0.5:2:10,x=-1:1:10");
    check->add_option("--kinds", o.kinds, "Residual kinds, comma separated");
    common(check);
    model(check);

    auto* transform = app.add_subcommand("transform", "Re-check a family after a group transformation");
    transform->add_option("--family", o.family, "Solution family")->required();
    transform->add_option("--element", o.element, "Group element, e.g. Xn:n=1,eps=0.01")->required();
    transform->add_option("--grid", o.grid, "Grid");
    transform->add_option("--kinds", o.kinds, "Residual kinds, comma separated");
    common(transform);
    model(transform);

    auto* identity = app.add_subcommand("identity", "Transformed W^I against the closed form under X_n");
    identity->add_option("--field", o.field, "Field (default random:deg=3)");
    identity->add_option("--n", o.n_range, "Range A..B of n (default -2..3)");
    identity->add_option("--eps", o.eps, "Largest |eps|")->check(CLI::PositiveNumber);
    identity->add_option("--points", o.points, "Samples per n (default 50)");
    common(identity);
    model(identity);

    auto* commutators = app.add_subcommand("commutators", "Commutator table on test functions");
    commutators->add_option("--n", o.n_range, "Range A..B of n (default -2..2)");
    commutators->add_option("--k", o.k_range, "Range A..B of k = m + 1/z (default -1..2)");
    commutators->add_option("--points", o.points, "Sample points (default 3)");
    common(commutators);
    model(commutators);

    auto* fd = app.add_subcommand("fd-check", "Jets against central differences");
    fd->add_option("--family", o.family, "Solution family");
    fd->add_option("--field", o.field, "Field");
    fd->add_option("--grid", o.grid, "Sampling box");
    fd->add_option("--step", o.h, "Finite-difference step h")->check(CLI::PositiveNumber);
    fd->add_option("--points", o.points, "Sample points (default 100)");
    common(fd);
    model(fd);

    auto* catalog = app.add_subcommand("catalog", "List families, profiles, elements and grammar");
    common(catalog);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kUsage;
    }

    try {
        if (*check) return run_check(o);
        if (*transform) return run_transform(o);
        if (*identity) return run_identity(o);
        if (*commutators) return run_commutators(o);
        if (*fd) return run_fd_check(o);
        return run_catalog(o);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kUsage;
    }
}
