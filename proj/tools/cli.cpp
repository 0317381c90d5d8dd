#include "cli.hpp"

#include <chrono>
#include <cmath>
#include <fstream>
#include <map>
#include <optional>
#include <random>
#include <sstream>

#include <CLI11.hpp>

#include "contactlab/bounds.hpp"
#include "contactlab/catalog.hpp"
#include "contactlab/contact.hpp"
#include "contactlab/errors.hpp"
#include "contactlab/foliation.hpp"
#include "contactlab/levi.hpp"
#include "contactlab/report.hpp"

namespace contactlab {

namespace {

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Options {
    std::string spec_path;
    std::string catalog;
    std::vector<std::string> constants;
    std::string point;
    std::string region;
    std::string grid;
    double fd_step = 1e-4;
    double ode_step = 1e-3;
    double tol = 1e-4;
    std::uint64_t seed = 1;
    std::string out;
    std::string svg;
    std::string csv;
    std::string method;
    bool assert_complete = false;
    bool assert_closed = false;
    std::vector<std::string> given;
    bool timing = false;
    int threads = 0;
    std::string center;
    double radius = 0.0;
    std::string range;
    int steps = 12;
    std::string sphere_grid = "16x32";
    int seeds = 24;
    int samples = 50;
    int levi_samples = 20;
    std::string name;  // catalog export
    std::chrono::steady_clock::time_point start;
};

void add_source(CLI::App* c, Options& o) {
    auto* s = c->add_option("--spec", o.spec_path, "Spec document (JSON)");
    auto* k = c->add_option("--catalog", o.catalog, "Built-in catalog entry");
    s->excludes(k);
    c->add_option("--const", o.constants, "Override a catalog constant, NAME=VALUE");
    c->add_option("--region", o.region, "Sampling box x0:x1,y0:y1,z0:z1");
    c->add_option("--grid", o.grid, "Sampling grid N or NxNxN");
    c->add_option("--fd-step", o.fd_step, "Finite-difference step")->check(CLI::PositiveNumber);
    c->add_option("--tol", o.tol, "Comparison tolerance")->check(CLI::PositiveNumber);
    c->add_option("--seed", o.seed, "Random seed");
    c->add_option("--out", o.out, "Write the JSON report to a file");
    c->add_flag("--timing", o.timing, "Include wall time in the report");
    c->add_option("--threads", o.threads, "Cap on worker threads")->check(CLI::NonNegativeNumber);
}

void add_ode(CLI::App* c, Options& o) {
    c->add_option("--ode-step", o.ode_step, "Geodesic integration step")->check(CLI::PositiveNumber);
}

struct Source {
    std::shared_ptr<EvalContext> ctx;
    std::optional<CatalogEntry> entry;
    std::string source;
    Region region;
    Grid grid;
    bool have_region = false;
};

std::pair<std::string, double> split_assignment(const std::string& s, const char* flag) {
    const auto eq = s.find('=');
    if (eq == std::string::npos || eq == 0) throw UsageError(std::string(flag) + " expects NAME=VALUE, got '" + s + "'");
    const std::string name = s.substr(0, eq);
    const std::string val = s.substr(eq + 1);
    if (val == "infinity" || val == "inf") return {name, kInf};
    std::size_t used = 0;
    double v = 0;
    try {
        v = std::stod(val, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (used == 0 || used != val.size()) throw UsageError(std::string(flag) + ": '" + val + "' is not a number");
    return {name, v};
}

std::string read_file(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw UsageError("cannot read '" + path + "'");
    std::ostringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

Source load_source(const Options& o, bool needs_region) {
    Source s;
    if (o.spec_path.empty() && o.catalog.empty()) throw UsageError("one of --spec or --catalog is required");
    if (!o.catalog.empty()) {
        std::map<std::string, double> consts;
        for (const auto& c : o.constants) consts.insert(split_assignment(c, "--const"));
        s.entry = catalog_get(o.catalog, consts);
        s.ctx = std::make_shared<EvalContext>(s.entry->spec);
        s.source = "catalog";
        s.region = s.entry->region;
        s.grid = s.entry->grid;
        s.have_region = true;
    } else {
        if (!o.constants.empty()) throw UsageError("--const applies to --catalog entries; edit the spec document instead");
        s.ctx = std::make_shared<EvalContext>(load_spec(read_file(o.spec_path)));
        s.source = o.spec_path;
        s.grid = Grid{{8, 8, 8}};
    }
    if (!o.region.empty()) {
        s.region = parse_region(o.region);
        s.have_region = true;
    }
    if (!o.grid.empty()) s.grid = parse_grid(o.grid);
    if (needs_region && !s.have_region) throw UsageError("--region is required for spec files");
    return s;
}

FDConfig fd_of(const Options& o) {
    FDConfig fd;
    fd.h = o.fd_step;
    return fd;
}

ODEConfig ode_of(const Options& o) { return ODEConfig{o.ode_step}; }

RunReport start_report(const std::string& command, const Source& s, const Options& o) {
    RunReport r;
    r.command = command;
    r.spec_name = s.ctx->spec().name;
    r.spec_hash = spec_hash(s.ctx->spec());
    r.spec_source = s.source;
    Json& p = r.parameters;
    if (!s.ctx->spec().constants.empty()) {
        Json c = Json::object();
        for (const auto& [k, v] : s.ctx->spec().constants) c[k] = v;
        p["constants"] = c;
    }
    if (s.have_region) {
        p["region"] = to_json(s.region);
        p["grid"] = to_json(s.grid);
    }
    p["fd_step"] = o.fd_step;
    p["tol"] = o.tol;
    p["seed"] = o.seed;
    return r;
}

void emit(RunReport r, const Options& o, std::ostream& out) {
    if (o.timing) r.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - o.start).count();
    const std::string text = to_json(r).dump(2) + "\n";
    if (o.out.empty()) {
        out << text;
        return;
    }
    std::ofstream f(o.out, std::ios::binary);
    if (!f) throw UsageError("cannot write '" + o.out + "'");
    f << text;
}

void write_text(const std::string& path, const std::string& text) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw UsageError("cannot write '" + path + "'");
    f << text;
}

Vec3 random_point(std::mt19937_64& rng, const Region& r) {
    Vec3 p;
    for (int i = 0; i < 3; ++i) p[i] = r.lo[i] + (r.hi[i] - r.lo[i]) * unit_uniform(rng());
    return p;
}

std::pair<int, int> parse_sphere_grid(const std::string& s) {
    const auto x = s.find('x');
    if (x == std::string::npos) throw UsageError("--sphere-grid expects NPHIxNPSI");
    try {
        return {std::stoi(s.substr(0, x)), std::stoi(s.substr(x + 1))};
    } catch (const std::exception&) {
        throw UsageError("--sphere-grid expects NPHIxNPSI");
    }
}

std::pair<double, double> parse_range(const std::string& s) {
    const auto c = s.find(':');
    if (c == std::string::npos) throw UsageError("--range expects RMIN:RMAX");
    try {
        return {std::stod(s.substr(0, c)), std::stod(s.substr(c + 1))};
    } catch (const std::exception&) {
        throw UsageError("--range expects RMIN:RMAX");
    }
}

Vec3 require_center(const Options& o) {
    if (!o.center.empty()) return parse_point(o.center);
    if (!o.point.empty()) return parse_point(o.point);
    throw UsageError("--center is required");
}

InputRequest input_request(const Source& s, const Options& o) {
    InputRequest req;
    req.region = s.region;
    req.grid = s.grid;
    req.fd = fd_of(o);
    req.tol = o.tol;
    for (const auto& g : o.given) {
        auto [name, v] = split_assignment(g, "--given");
        const auto& names = input_names();
        if (std::find(names.begin(), names.end(), name) == names.end())
            throw UsageError("--given: unknown input '" + name + "'");
        req.given[name] = v;
    }
    if (s.entry) {
        req.catalog_extra = s.entry->inputs;
        req.known_provenance = Provenance::Catalog;
    }
    req.assert_complete = o.assert_complete;
    req.assert_closed = o.assert_closed;
    return req;
}

// Commands ------------------------------------------------------------------

void cmd_check(const Options& o, std::ostream& out) {
    Source s = load_source(o, true);
    RunReport r = start_report("check", s, o);
    const CompatClass c = classify_compatibility(*s.ctx, s.region, s.grid, o.tol, fd_of(o));
    r.results["compatibility"] = to_json(c);
    if (!o.point.empty()) r.results["point"] = to_json(contact_point(*s.ctx, parse_point(o.point), fd_of(o)));
    emit(r, o, out);
}

Json point_invariants(const EvalContext& ctx, const Vec3& p, const FDConfig& fd) {
    Json j;
    j["point"] = to_json(p);
    const ContactPointData d = contact_point(ctx, p, fd);
    j["contact"] = to_json(d);
    j["mean_curvature"] = measured(mean_curvature(ctx, p, fd));
    bool heur = false;
    const Vec3 nn = nabla_n_n(ctx, p, fd, &heur);
    j["nabla_n_n"] = Json{{"vector", to_json(nn)}, {"norm", measured(norm(ctx.metric(p), nn))}, {"heuristic", heur}};
    j["h"] = to_json(h_endomorphism(ctx, p, fd));
    const MgPoint m = m_g_point(ctx, p, fd);
    j["m_g_local"] = Json{{"formula1", measured(m.formula1)}, {"formula2", measured(m.formula2)},
                          {"heuristic", m.heuristic}};
    const Riemann rm = riemann(ctx, p, fd);
    const Mat3 g = ctx.metric(p);
    const SecRange sr = sectional_range(rm, g);
    j["sectional_min"] = measured(sr.min);
    j["sectional_max"] = measured(sr.max);
    j["ricci_reeb"] = measured(ricci_dir(rm, g, d.R_alpha));
    return j;
}

void cmd_invariants(const Options& o, std::ostream& out) {
    const bool pointwise = !o.point.empty();
    Source s = load_source(o, !pointwise);
    RunReport r = start_report("invariants", s, o);
    const FDConfig fd = fd_of(o);
    if (pointwise) {
        r.parameters["point"] = to_json(parse_point(o.point));
        r.results = point_invariants(*s.ctx, parse_point(o.point), fd);
    } else {
        const CompatClass c = classify_compatibility(*s.ctx, s.region, s.grid, o.tol, fd);
        r.results["compatibility"] = to_json(c);
        const MgEstimate m = m_g_estimate(*s.ctx, s.region, s.grid, fd);
        r.results["m_g"] = to_json(m);
        if (m.heuristic) r.warnings.push_back("m_g: normal taken as the dual of alpha at some grid points");
        const CurvatureData cd = sample_curvature(*s.ctx, s.region, s.grid, fd);
        Json cj;
        if (cd.K_upper) cj["sec_max"] = to_json(*cd.K_upper);
        if (cd.sec_abs_max) cj["sec_abs_max"] = to_json(*cd.sec_abs_max);
        if (cd.ric_reeb_min) cj["ric_reeb_min"] = to_json(*cd.ric_reeb_min);
        r.results["curvature"] = cj;
    }
    emit(r, o, out);
}

BoundMethod method_or(const Options& o, BoundMethod def, std::initializer_list<BoundMethod> allowed) {
    if (o.method.empty()) return def;
    BoundMethod m;
    try {
        m = parse_bound_method(o.method);
    } catch (const Error&) {
        throw UsageError("unknown --method '" + o.method + "'");
    }
    for (BoundMethod a : allowed)
        if (a == m) return m;
    throw UsageError("--method '" + o.method + "' is not valid for this command");
}

void bound_like(const std::string& command, BoundMethod method, const Options& o, std::ostream& out,
                std::ostream& err) {
    Source s = load_source(o, true);
    const InputRequest req = input_request(s, o);
    RunReport r = start_report(command, s, o);
    r.parameters["method"] = bound_method_name(method);
    r.parameters["assert_complete"] = o.assert_complete;
    r.parameters["assert_closed"] = o.assert_closed;
    if (!o.given.empty()) r.parameters["given"] = o.given;
    const BoundInputs in = collect_inputs(*s.ctx, req, method);
    const BoundReport b = run_bound(in, method, o.tol);
    r.results = to_json(b);
    r.warnings = b.warnings;
    emit(r, o, out);
    if (b.verdict != Verdict::None) err << verdict_name(b.verdict) << "\n";
}

void cmd_foliation(const Options& o, std::ostream& out) {
    Source s = load_source(o, false);
    RunReport r = start_report("foliation", s, o);
    const Vec3 c = require_center(o);
    if (!(o.radius > 0)) throw UsageError("--radius must be positive");
    const auto [n_phi, n_psi] = parse_sphere_grid(o.sphere_grid);
    r.parameters["center"] = to_json(c);
    r.parameters["radius"] = o.radius;
    r.parameters["sphere_grid"] = o.sphere_grid;
    r.parameters["ode_step"] = o.ode_step;
    r.parameters["seeds"] = o.seeds;
    FoliationConfig cfg;
    cfg.closure_tol = o.tol;
    auto chart = std::make_shared<const SphereChart>(
        sphere_chart(*s.ctx, c, o.radius, n_phi, n_psi, fd_of(o), ode_of(o)));
    const FoliationTrace t = trace_foliation(*s.ctx, chart, meridian_seeds(o.seeds, cfg), cfg);
    const auto closed = detect_closed_leaves(*s.ctx, t);
    r.results["trace"] = trace_summary(t);
    Json cl = Json::array();
    for (const auto& x : closed) cl.push_back(to_json(x));
    r.results["closed_leaves"] = cl;
    r.results["classification"] = to_json(classify_sphere(t, closed));
    if (!t.diagnostic.empty()) r.warnings.push_back(t.diagnostic);
    if (!o.svg.empty()) write_text(o.svg, trace_svg(t, closed));
    if (!o.csv.empty()) write_text(o.csv, trace_csv(t));
    emit(r, o, out);
}

void cmd_tau_scan(const Options& o, std::ostream& out) {
    Source s = load_source(o, false);
    RunReport r = start_report("tau-scan", s, o);
    const Vec3 c = require_center(o);
    if (o.range.empty()) throw UsageError("--range is required");
    const auto [r0, r1] = parse_range(o.range);
    const auto [n_phi, n_psi] = parse_sphere_grid(o.sphere_grid);
    r.parameters["center"] = to_json(c);
    r.parameters["range"] = o.range;
    r.parameters["steps"] = o.steps;
    r.parameters["sphere_grid"] = o.sphere_grid;
    r.parameters["ode_step"] = o.ode_step;
    FoliationConfig cfg;
    cfg.closure_tol = o.tol;
    const TauScanResult t = tau_scan(*s.ctx, c, r0, r1, o.steps, n_phi, n_psi, cfg, fd_of(o), ode_of(o));
    r.results = to_json(t);
    Region local = s.region;
    if (!s.have_region) {
        for (int i = 0; i < 3; ++i) {
            local.lo[i] = c[i] - r1;
            local.hi[i] = c[i] + r1;
        }
    }
    const CompatClass cc = classify_compatibility(*s.ctx, local, Grid{{5, 5, 5}}, o.tol, fd_of(o));
    const bool heuristic = cc.level < CompatClass::Compatible;
    r.results["heuristic"] = heuristic;
    if (heuristic) r.warnings.push_back("metric is not compatible near the center; closed leaves are a heuristic signal");
    if (!t.note.empty()) r.warnings.push_back(t.note);
    emit(r, o, out);
}

struct Battery {
    std::string name;
    double threshold;
    double max = 0.0;
    std::size_t n = 0;
    bool applicable = true;
    std::string reason;
};

void cmd_verify(const Options& o, std::ostream& out, std::ostream& err) {
    Source s = load_source(o, true);
    RunReport r = start_report("verify-identities", s, o);
    r.parameters["samples"] = o.samples;
    r.parameters["levi_samples"] = o.levi_samples;
    const FDConfig fd = fd_of(o);
    const EvalContext& ctx = *s.ctx;
    const CompatClass cc = classify_compatibility(ctx, s.region, s.grid, o.tol, fd);
    const bool weak = cc.level >= CompatClass::WeaklyCompatible;
    const bool compat = cc.level >= CompatClass::Compatible;
    r.results["compatibility"] = compat_name(cc.level);

    std::vector<Battery> bats = {{"hodge_eigenform", 1e-6, 0.0, 0, true, ""}, {"mean_curvature_trace", 1e-3, 0.0, 0, true, ""},
                                 {"nabla_n_n", 1e-3, 0.0, 0, true, ""}, {"m_g_two_formulas", 1e-3, 0.0, 0, true, ""},
                                 {"ricci_reeb", 1e-2, 0.0, 0, true, ""}, {"levi_form", 1e-3, 0.0, 0, true, ""}};
    using Fn = double (*)(const EvalContext&, const Vec3&, const FDConfig&);
    const Fn fns[5] = {residual_hodge, residual_mean_curvature, residual_nabla_n_n, residual_m_g, residual_ricci_xi};
    for (int b = 0; b < 5; ++b) {
        if (!weak) {
            bats[b].applicable = false;
            bats[b].reason = "metric is not weakly compatible on the region";
        }
    }
    if (!compat) {
        bats[4].applicable = false;
        if (bats[4].reason.empty()) bats[4].reason = "metric is not compatible on the region";
    }
    std::mt19937_64 rng(o.seed);
    std::vector<Vec3> pts(std::size_t(std::max(o.samples, 0)));
    for (auto& p : pts) p = random_point(rng, s.region);
    for (int b = 0; b < 5; ++b) {
        if (!bats[b].applicable) continue;
        std::vector<double> res(pts.size());
        parallel_for(pts.size(), [&](std::size_t i) { res[i] = fns[b](ctx, pts[i], fd); });
        for (double v : res) bats[b].max = std::max(bats[b].max, v);
        bats[b].n = res.size();
    }
    // Levi identity on level sets of a squared distance from a point outside the region.
    Vec3 c0;
    for (int i = 0; i < 3; ++i) c0[i] = s.region.lo[i] - 0.5 * (s.region.hi[i] - s.region.lo[i]) - 0.5;
    const ScalarField f = [c0](const Vec3& x) { return 0.5 * (x - c0).squaredNorm(); };
    Battery& lb = bats[5];
    {
        std::vector<Vec3> lp(std::size_t(std::max(o.levi_samples, 0)));
        for (auto& p : lp) p = random_point(rng, s.region);
        std::vector<double> res(lp.size());
        parallel_for(lp.size(), [&](std::size_t i) {
            const SymplectizationPoint x{1.0, lp[i]};
            const Vec4 v = complex_tangency_sample(ctx, f, x, o.seed + i, fd);
            res[i] = levi_identity_residual(ctx, f, x, v, fd);
        });
        for (double v : res) lb.max = std::max(lb.max, v);
        lb.n = res.size();
        if (!weak) r.warnings.push_back("levi_form: normal taken as the dual of alpha (heuristic)");
    }
    bool ok = true;
    Json arr = Json::array();
    for (const auto& b : bats) {
        Json j;
        j["identity"] = b.name;
        if (!b.applicable) {
            j["status"] = "inapplicable";
            j["reason"] = b.reason;
        } else {
            const bool pass = b.max < b.threshold;
            ok = ok && pass;
            j["status"] = pass ? "pass" : "fail";
            j["max_residual"] = measured(b.max);
            j["threshold"] = b.threshold;
            j["samples"] = b.n;
        }
        arr.push_back(j);
    }
    r.results["identities"] = arr;
    r.results["verdict"] = ok ? "holds" : "fails";
    emit(r, o, out);
    err << (ok ? "holds" : "fails") << "\n";
}

void cmd_catalog_list(std::ostream& out) {
    Json j = Json::array();
    for (const auto& n : catalog_list()) {
        const CatalogEntry e = catalog_get(n);
        Json ref = Json::object();
        for (const auto& [k, v] : e.reference) ref[k] = to_json(v);
        j.push_back(Json{{"name", n}, {"description", e.description}, {"reference", ref},
                         {"region", to_json(e.region)}, {"grid", to_json(e.grid)}});
    }
    Json top{{"schema", kSchema}, {"tool_version", kToolVersion}, {"entries", j}};
    out << top.dump(2) << "\n";
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Contact-metric invariants, tightness-radius bounds and characteristic foliations", "contactlab"};
    app.require_subcommand(1);
    app.set_version_flag("--version", kToolVersion);
    Options o;

    auto* check = app.add_subcommand("check", "Classify metric/contact-form compatibility on a region");
    add_source(check, o);
    check->add_option("--point", o.point, "Also report contact data at x,y,z");

    auto* inv = app.add_subcommand("invariants", "Invariants at a point, or sampled over a region");
    add_source(inv, o);
    inv->add_option("--point", o.point, "Evaluation point x,y,z");

    auto add_bound_flags = [&](CLI::App* c) {
        add_source(c, o);
        c->add_option("--method", o.method, "Theorem to apply");
        c->add_option("--given", o.given, "Pin an input, NAME=VALUE (repeatable)");
        c->add_flag("--assert-complete", o.assert_complete, "Assert that the manifold is complete");
        c->add_flag("--assert-closed", o.assert_closed, "Assert that the manifold is closed");
    };
    auto* bound = app.add_subcommand("bound", "Lower bound on the tightness radius");
    add_bound_flags(bound);
    auto* crit = app.add_subcommand("criteria", "Tightness criteria (hyperbolic, quasi-geodesic)");
    add_bound_flags(crit);

    auto* fol = app.add_subcommand("foliation", "Trace the characteristic foliation of a geodesic sphere");
    add_source(fol, o);
    add_ode(fol, o);
    fol->add_option("--center", o.center, "Sphere center x,y,z");
    fol->add_option("--point", o.point, "Alias of --center");
    fol->add_option("--radius", o.radius, "Sphere radius")->required();
    fol->add_option("--sphere-grid", o.sphere_grid, "Sphere parameter grid NPHIxNPSI");
    fol->add_option("--seeds", o.seeds, "Number of traced leaves")->check(CLI::PositiveNumber);
    fol->add_option("--svg", o.svg, "Write an SVG plot of the leaves");
    fol->add_option("--csv", o.csv, "Write leaf polylines as CSV");

    auto* tau = app.add_subcommand("tau-scan", "Scan sphere radii for the first closed leaf");
    add_source(tau, o);
    add_ode(tau, o);
    tau->add_option("--center", o.center, "Sphere center x,y,z");
    tau->add_option("--range", o.range, "Radius range RMIN:RMAX");
    tau->add_option("--steps", o.steps, "Number of radii in the coarse scan")->check(CLI::Range(2, 100000));
    tau->add_option("--sphere-grid", o.sphere_grid, "Sphere parameter grid NPHIxNPSI");

    auto* ver = app.add_subcommand("verify-identities", "Check the internal identities at random points");
    add_source(ver, o);
    ver->add_option("--samples", o.samples, "Random points per identity")->check(CLI::NonNegativeNumber);
    ver->add_option("--levi-samples", o.levi_samples, "Random points for the Levi identity")
        ->check(CLI::NonNegativeNumber);

    auto* cat = app.add_subcommand("catalog", "Built-in examples");
    cat->require_subcommand(1);
    cat->add_subcommand("list", "List catalog entries with reference values");
    auto* exp = cat->add_subcommand("export", "Print the spec document of an entry");
    exp->add_option("name", o.name, "Entry name")->required();
    exp->add_option("--const", o.constants, "Override a constant, NAME=VALUE");

    std::vector<std::string> argv_s{"contactlab"};
    argv_s.insert(argv_s.end(), args.begin(), args.end());
    std::vector<const char*> argv;
    for (const auto& a : argv_s) argv.push_back(a.c_str());
    try {
        app.parse(int(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? 0 : 2;
    }

    try {
        if (o.threads > 0) set_max_threads(o.threads);
        o.start = std::chrono::steady_clock::now();
        std::ostringstream buf;
        if (check->parsed()) cmd_check(o, buf);
        else if (inv->parsed()) cmd_invariants(o, buf);
        else if (bound->parsed())
            bound_like("bound", method_or(o, BoundMethod::Main, {BoundMethod::Main, BoundMethod::Weak,
                                                                 BoundMethod::Geometric, BoundMethod::Tube}),
                       o, buf, err);
        else if (crit->parsed())
            bound_like("criteria",
                       method_or(o, BoundMethod::Hyperbolic, {BoundMethod::Hyperbolic, BoundMethod::QuasiGeodesic}), o,
                       buf, err);
        else if (fol->parsed()) cmd_foliation(o, buf);
        else if (tau->parsed()) cmd_tau_scan(o, buf);
        else if (ver->parsed()) cmd_verify(o, buf, err);
        else if (cat->parsed()) {
            if (exp->parsed()) {
                std::map<std::string, double> consts;
                for (const auto& c : o.constants) consts.insert(split_assignment(c, "--const"));
                buf << catalog_export(o.name, consts) << "\n";
            } else {
                cmd_catalog_list(buf);
            }
        }
        const std::string text = buf.str();
        out << text;
        return 0;
    } catch (const UsageError& e) {
        err << "usage error: " << e.what() << "\n";
        return 2;
    } catch (const ArgumentError& e) {
        err << "usage error: " << e.code() << ": " << e.what() << "\n";
        return 2;
    } catch (const Error& e) {
        err << "error: " << e.code() << ": " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        err << "error: internal: " << e.what() << "\n";
        return 1;
    }
}

}  // namespace contactlab
