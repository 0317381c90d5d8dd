// Acceptance run: one PASS/FAIL line per criterion, followed by the measured
// values behind it. Exit status is non-zero when any criterion fails.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <numbers>
#include <random>
#include <sstream>

#include <json.hpp>

#include "cli.hpp"
#include "contactlab/bessel.hpp"
#include "contactlab/bounds.hpp"
#include "contactlab/catalog.hpp"
#include "contactlab/contact.hpp"
#include "contactlab/geodesic.hpp"

using namespace contactlab;
using nlohmann::json;

namespace {

constexpr double kPi = std::numbers::pi;

struct Check {
    std::string what;
    bool ok;
    std::string detail;
};

struct Recorded {
    std::vector<std::string> args;
    std::string out;
};

std::vector<Recorded> g_commands;

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.10g", v);
    return buf;
}

struct Cli {
    int code;
    json j;
    std::string err;
};

Cli run(const std::vector<std::string>& args) {
    std::ostringstream out, err;
    const int code = run_cli(args, out, err);
    g_commands.push_back({args, out.str()});
    Cli c{code, json(), err.str()};
    if (code == 0 && !out.str().empty()) c.j = json::parse(out.str());
    return c;
}

std::string joined(const std::vector<std::string>& args) {
    std::string s = "contactlab";
    for (const auto& a : args) s += " " + a;
    return s;
}

// Runs a bound-like command and returns its value, or NaN with the error text.
double run_value(const std::vector<std::string>& args, std::string& note) {
    const Cli c = run(args);
    if (c.code != 0) {
        note = "exit " + std::to_string(c.code) + ": " + c.err;
        if (!note.empty() && note.back() == '\n') note.pop_back();
        return std::nan("");
    }
    const json& v = c.j["results"]["value"];
    if (v.is_string()) return v == "infinity" ? kInf : std::nan("");
    return v.get<double>();
}

Check near(const std::string& what, double got, double want, double tol) {
    const bool ok = std::isfinite(got) && std::fabs(got - want) <= tol;
    return {what, ok, "got " + fmt(got) + ", want " + fmt(want) + " ± " + fmt(tol)};
}

Check below(const std::string& what, double got, double limit) {
    return {what, got < limit, "max " + fmt(got) + " < " + fmt(limit)};
}

Vec3 in_box(std::mt19937_64& rng, const Region& r) {
    Vec3 p;
    for (int i = 0; i < 3; ++i) p[i] = r.lo[i] + (r.hi[i] - r.lo[i]) * unit_uniform(rng());
    return p;
}

Vec3 rand_vec(std::mt19937_64& rng) {
    return Vec3(2 * unit_uniform(rng()) - 1, 2 * unit_uniform(rng()) - 1, 2 * unit_uniform(rng()) - 1);
}

// ---------------------------------------------------------------------------

std::vector<Check> torus_suite() {
    std::vector<Check> out;
    const CatalogEntry e = catalog_get("t3-flat");
    const EvalContext ctx(e.spec);
    const double k = 2.0;
    std::mt19937_64 rng(101);
    double rho_err = 0, th_err = 0, hodge_err = 0;
    for (int s = 0; s < 100; ++s) {
        const Vec3 p = in_box(rng, e.region);
        const ContactPointData d = contact_point(ctx, p);
        rho_err = std::max(rho_err, std::fabs(d.rho - 1));
        th_err = std::max(th_err, std::fabs(d.theta_prime - k));
        const Vec3 star = hodge_star_2form(ctx, dalpha(ctx, p), p);
        hodge_err = std::max(hodge_err, norm(ctx.metric(p), star - k * ctx.alpha(p)));
    }
    out.push_back({"rho = 1 at 100 random points", rho_err <= 1e-8, "max |rho - 1| = " + fmt(rho_err)});
    out.push_back({"theta' = k at 100 random points", th_err <= 1e-6, "max |theta' - 2| = " + fmt(th_err)});
    out.push_back(below("|*d alpha_k - k alpha_k|", hodge_err, 1e-6));

    const Cli inv = run({"invariants", "--catalog", "t3-flat"});
    const double mg = inv.code == 0 ? inv.j["results"]["m_g"]["m_g"]["value"].get<double>() : std::nan("");
    out.push_back(below("m_g", mg, 1e-5));
    const std::string cls = inv.code == 0 ? inv.j["results"]["compatibility"]["class"].get<std::string>() : "error";
    out.push_back({"classification", cls == "Compatible", cls});

    std::string note;
    const double b = run_value({"bound", "--catalog", "t3-flat", "--method", "geometric", "--given", "A=0", "--given",
                                "B=2"},
                               note);
    out.push_back({"geometric bound from A=0, B=2", b == 0.5, "got " + fmt(b) + ", want 0.5 exactly " + note});
    const double bs = run_value({"bound", "--catalog", "t3-flat", "--method", "geometric"}, note);
    out.push_back(near("geometric bound with sampled A, B", bs, 0.5, 1e-6));
    return out;
}

std::vector<Check> hyperbolic_suite() {
    std::vector<Check> out;
    const CatalogEntry e = catalog_get("h3-upper-half");
    const EvalContext ctx(e.spec);
    std::mt19937_64 rng(202);
    double rz = 0, tz = 0, sec = 0;
    for (int s = 0; s < 100; ++s) {
        const Vec3 p = in_box(rng, e.region);
        const ContactPointData d = contact_point(ctx, p);
        rz = std::max(rz, std::fabs(d.rho * p.z() - 1));
        tz = std::max(tz, std::fabs(d.theta_prime / p.z() - 1));
        if (s < 50) sec = std::max(sec, std::fabs(sectional(ctx, p, rand_vec(rng), rand_vec(rng)) + 1));
    }
    out.push_back({"rho z = 1, z in [0.5, 4]", rz <= 1e-5, "max |rho z - 1| = " + fmt(rz)});
    out.push_back({"theta'/(kz) = 1", tz <= 1e-4, "max |theta'/(kz) - 1| = " + fmt(tz)});
    const Cli inv = run({"invariants", "--catalog", "h3-upper-half", "--grid", "20x20x20"});
    const double mg = inv.code == 0 ? inv.j["results"]["m_g"]["m_g"]["value"].get<double>() : std::nan("");
    out.push_back(near("m_g over a 20^3 grid", mg, 1.0, 1e-3));
    out.push_back({"sectional curvature of 50 random planes", sec <= 1e-3, "max |sec + 1| = " + fmt(sec)});
    const Cli c = run({"criteria", "--catalog", "h3-upper-half", "--method", "hyperbolic", "--assert-complete"});
    out.push_back({"criterion_hyperbolic", c.code == 0 && c.err == "holds\n", "verdict " + c.err.substr(0, c.err.size() - 1)});
    return out;
}

std::vector<Check> product_suite() {
    std::vector<Check> out;
    const CatalogEntry e = catalog_get("r-x-h2");
    const EvalContext ctx(e.spec);
    std::mt19937_64 rng(303);
    double th = 0, ry = 0;
    for (int s = 0; s < 100; ++s) {
        const Vec3 p = in_box(rng, e.region);
        const ContactPointData d = contact_point(ctx, p);
        th = std::max(th, std::fabs(d.theta_prime - 0.5));
        ry = std::max(ry, std::fabs(d.rho * std::sqrt(2 * p.z()) - 1));
    }
    out.push_back({"theta' = 1/2", th <= 1e-5, "max |theta' - 0.5| = " + fmt(th)});
    out.push_back({"rho (2y)^(1/2) = 1", ry <= 1e-4, "max deviation " + fmt(ry)});
    const Cli inv = run({"invariants", "--catalog", "r-x-h2"});
    const double mg = inv.code == 0 ? inv.j["results"]["m_g"]["m_g"]["value"].get<double>() : std::nan("");
    out.push_back(near("m_g", mg, 0.5, 1e-3));
    std::string note;
    out.push_back(near("bound_weak", run_value({"bound", "--catalog", "r-x-h2", "--method", "weak"}, note), 2.0, 1e-3));
    const Cli c = run({"criteria", "--catalog", "r-x-h2", "--method", "hyperbolic"});
    out.push_back({"criterion_hyperbolic", c.code == 0 && c.err == "fails\n", "verdict " + c.err.substr(0, c.err.size() - 1)});
    return out;
}

std::vector<Check> bessel_suite() {
    std::vector<Check> out;
    const CatalogEntry e = catalog_get("r3-bessel-ot");
    const EvalContext ctx(e.spec);
    std::mt19937_64 rng(404);
    double defect = 0, delta = 0;
    for (int s = 0; s < 200; ++s) {
        const double r = 0.05 + 9.95 * unit_uniform(rng());
        const double a = 2 * kPi * unit_uniform(rng());
        const Vec3 p(r * std::cos(a), r * std::sin(a), 2 * unit_uniform(rng()) - 1);
        const ContactPointData d = contact_point(ctx, p);
        defect = std::max(defect, d.defect);
        const double oracle = std::pow(std::cyl_bessel_j(0.0, r), 2) + std::pow(std::cyl_bessel_j(1.0, r), 2);
        delta = std::max(delta, std::fabs(1 / (d.rho * d.rho) - oracle));
    }
    out.push_back(below("weak-compatibility defect on r in [0.05, 10]", defect, 1e-6));
    out.push_back({"delta(r) - (J0^2 + J1^2)(r)", delta <= 1e-6, "max " + fmt(delta)});
    std::string note;
    out.push_back(near("bound_weak", run_value({"bound", "--catalog", "r3-bessel-ot", "--method", "weak"}, note), 0.15,
                       0.02));
    const Cli t = run({"tau-scan", "--catalog", "r3-bessel-ot", "--center", "0,0,0", "--range", "0.5:5"});
    const json& fr = t.j["results"]["first_closed_leaf_radius"];
    const double r1 = t.code == 0 && fr.is_object() ? fr["value"].get<double>() : std::nan("");
    out.push_back(near("tau_scan first closed leaf (root of r J1)", r1, 3.8317059702, 0.02));
    const Cli f = run({"foliation", "--catalog", "r3-bessel-ot", "--center", "0,0,0", "--radius", "2"});
    const std::size_t n = f.code == 0 ? f.j["results"]["closed_leaves"].size() : 999;
    out.push_back({"closed leaves on the r = 2 sphere", n == 0, std::to_string(n) + " closed leaves"});
    return out;
}

std::vector<Check> sphere_suite() {
    std::vector<Check> out;
    std::string note;
    for (const char* chart : {"s3-round", "s3-round-b"}) {
        const std::string c = chart;
        out.push_back(near(c + " bound_main given K=1, inj=pi",
                           run_value({"bound", "--catalog", c, "--method", "main"}, note), kPi / 2, 1e-9));
        out.push_back(near(c + " bound_geometric given A=0, B=1",
                           run_value({"bound", "--catalog", c, "--method", "geometric", "--given", "A=0", "--given",
                                      "B=1"},
                                     note),
                           1.0, 1e-6));
        const CatalogEntry e = catalog_get(c);
        const EvalContext ctx(e.spec);
        std::mt19937_64 rng(505);
        double h = 0;
        for (int s = 0; s < 50; ++s) h = std::max(h, h_endomorphism(ctx, in_box(rng, e.region)).norm);
        out.push_back(below(c + " |h| sampled", h, 1e-3));
    }
    return out;
}

std::vector<Check> sasakian_suite() {
    std::vector<Check> out;
    std::mt19937_64 rng(606);
    struct Want {
        const char* name;
        double reeb_plane;
        double xi_plane;
    };
    for (const Want& w : {Want{"r3-sasakian", 1.0, -3.0}, Want{"r3-flat-darboux", 0.0, 0.0}}) {
        const CatalogEntry e = catalog_get(w.name);
        const EvalContext ctx(e.spec);
        double dr = 0, dx = 0;
        for (int s = 0; s < 20; ++s) {
            const Vec3 p = in_box(rng, e.region);
            const FrameXi f = xi_frame(ctx, p);
            const Vec3 R = reeb_field(ctx, p);
            const double a = 2 * kPi * unit_uniform(rng());
            const Vec3 u = std::cos(a) * f.u + std::sin(a) * f.v;
            dr = std::max(dr, std::fabs(sectional(ctx, p, R, u) - w.reeb_plane));
            dx = std::max(dx, std::fabs(sectional(ctx, p, f.u, f.v) - w.xi_plane));
        }
        const std::string n = w.name;
        out.push_back({n + " sec(plane containing R) = " + fmt(w.reeb_plane), dr <= 1e-3, "max deviation " + fmt(dr)});
        out.push_back({n + " sec(contact plane) = " + fmt(w.xi_plane), dx <= 1e-3, "max deviation " + fmt(dx)});
        std::string note;
        out.push_back(near(n + " bound_geometric", run_value({"bound", "--catalog", n, "--method", "geometric"}, note),
                           0.5, 1e-6));
    }
    return out;
}

std::vector<Check> identity_battery() {
    std::vector<Check> out;
    for (const auto& name : catalog_list()) {
        const Cli c = run({"verify-identities", "--catalog", name, "--samples", "50", "--levi-samples", "20"});
        if (c.code != 0) {
            out.push_back({name, false, "exit " + std::to_string(c.code) + ": " + c.err});
            continue;
        }
        const std::string cls = c.j["results"]["compatibility"];
        const bool compatible = cls == "Compatible" || cls == "StronglyCompatible";
        for (const auto& b : c.j["results"]["identities"]) {
            const std::string id = b["identity"];
            const std::string status = b["status"];
            if (id == "hodge_eigenform") continue;  // covered by the suites above
            const bool required = id != "ricci_reeb" || compatible;
            if (!required) continue;
            const bool ok = status == "pass";
            std::string d = status;
            if (b.contains("max_residual"))
                d += ", max residual " + fmt(b["max_residual"]["value"].get<double>()) + " < " +
                     fmt(b["threshold"].get<double>()) + " over " + std::to_string(b["samples"].get<int>());
            out.push_back({name + " " + id, ok, d});
        }
    }
    return out;
}

// Random smooth vector fields for the tensor checks.
VectorField field(std::mt19937_64& rng) {
    Mat3 A;
    for (int i = 0; i < 3; ++i) A.row(i) = rand_vec(rng);
    const Vec3 b = rand_vec(rng);
    return [A, b](const Vec3& x) { return Vec3(b + A * x + 0.1 * Vec3(std::sin(x[1]), x[2] * x[0], std::cos(x[0]))); };
}

std::vector<Check> numerics_battery() {
    std::vector<Check> out;
    double compat = 0, torsion = 0, bianchi = 0, dd = 0, hodge = 0, gl2 = 0, jac = 0;
    std::mt19937_64 rng(707);
    for (const auto& name : catalog_list()) {
        const CatalogEntry e = catalog_get(name);
        const EvalContext ctx(e.spec);
        for (int s = 0; s < 5; ++s) {
            const Vec3 p = in_box(rng, e.region);
            const VectorField X = field(rng), Y = field(rng), Z = field(rng);
            const ScalarField gyz = [&](const Vec3& q) { return inner(ctx.metric(q), Y(q), Z(q)); };
            const Mat3 g = ctx.metric(p);
            const double lhs = fd_directional(gyz, p, X(p), FDConfig{});
            const double rhs = inner(g, cov_deriv(ctx, X, Y, p), Z(p)) + inner(g, Y(p), cov_deriv(ctx, X, Z, p));
            compat = std::max(compat, std::fabs(lhs - rhs));
            torsion = std::max(torsion,
                               norm(g, cov_deriv(ctx, X, Y, p) - cov_deriv(ctx, Y, X, p) - lie_bracket(X, Y, p)));
            const Riemann rm = riemann(ctx, p);
            for (int i = 0; i < 3; ++i)
                for (int j = 0; j < 3; ++j)
                    for (int k = 0; k < 3; ++k)
                        for (int l = 0; l < 3; ++l)
                            bianchi = std::max(bianchi, std::fabs(rm(i, j, k, l) + rm(i, k, l, j) + rm(i, l, j, k)));
            const ScalarField f = [](const Vec3& q) { return std::sin(q[0]) * q[1] + q[2] * q[2] * std::cos(q[1]); };
            const VectorField df = [&](const Vec3& q) { return differential(f, q); };
            dd = std::max(dd, d_oneform(df, p).cwiseAbs().maxCoeff());
            const Vec3 w = rand_vec(rng);
            hodge = std::max(hodge, (hodge_star_2form(ctx, hodge_star_1form(ctx, w, p), p) - w).norm());
            const Mat3 F = hodge_star_1form(ctx, rand_vec(rng), p);
            hodge = std::max(hodge, (hodge_star_1form(ctx, hodge_star_2form(ctx, F, p), p) - F).norm());
            const Vec3 a = rand_vec(rng), b = rand_vec(rng);
            gl2 = std::max(gl2, std::fabs(sectional(rm, g, a, b) - sectional(rm, g, 2 * a - b, 0.5 * a + 3 * b)));

            // Jacobi field with J(0)=0, J'(0)=w against d/ds exp_p(T(v + s w)).
            const Vec3 v = rand_vec(rng).normalized();
            const Vec3 vu = v / norm(g, v);
            const double T = 0.3;
            const Vec3 J = jacobi_field(ctx, p, vu, Vec3::Zero(), w, T);
            const double ds = 1e-4;
            const Vec3 fd = (exp_map(ctx, p, T * (vu + ds * w)) - exp_map(ctx, p, T * (vu - ds * w))) / (2 * ds);
            jac = std::max(jac, (J - fd).norm() / std::max(1.0, fd.norm()));
        }
    }
    out.push_back(below("metric compatibility X g(Y,Z) - g(DY,Z) - g(Y,DZ)", compat, 1e-5));
    out.push_back(below("torsion-free", torsion, 1e-5));
    out.push_back(below("first Bianchi identity", bianchi, 1e-4));
    out.push_back(below("d(df) = 0", dd, 1e-6));
    out.push_back(below("Hodge involution", hodge, 1e-8));
    out.push_back(below("sectional curvature under change of plane basis", gl2, 1e-6));
    out.push_back(below("Jacobi field vs finite difference of exp", jac, 1e-3));

    struct Case {
        const char* name;
        Vec3 p;
        double r;
        double K;
    };
    for (const Case& c : {Case{"t3-flat", Vec3(3, 3, 1.5), 2.0, 0.0}, Case{"h3-upper-half", Vec3(0, 0, 1), 1.0, -1.0},
                          Case{"s3-round", Vec3(0, 0, 0), kPi / 4, 1.0}}) {
        const CatalogEntry e = catalog_get(c.name);
        const HessianCheck h = hessian_lower_check(EvalContext(e.spec), e.distance, c.p, c.r, c.K, 8, 808);
        out.push_back({std::string(c.name) + " Hessian comparison slack", h.max_abs_slack <= 1e-3,
                       "max |slack| " + fmt(h.max_abs_slack) + " (ct = " + fmt(h.ct) + ")"});
    }
    return out;
}

std::vector<Check> determinism() {
    std::vector<Check> out;
    const std::vector<Recorded> first = g_commands;
    std::size_t same = 0;
    for (const Recorded& r : first) {
        std::ostringstream o, e;
        run_cli(r.args, o, e);
        if (o.str() == r.out) ++same;
        else out.push_back({joined(r.args), false, "output differs on rerun"});
    }
    out.push_back({"byte-identical reruns", same == first.size(),
                   std::to_string(same) + "/" + std::to_string(first.size()) + " commands"});
    return out;
}

}  // namespace

int main() {
    struct Criterion {
        int id;
        const char* title;
        std::function<std::vector<Check>()> body;
    };
    const std::vector<Criterion> criteria = {
        {1, "flat torus suite", torus_suite},
        {2, "hyperbolic space suite", hyperbolic_suite},
        {3, "R x H2 suite", product_suite},
        {4, "Bessel overtwisted suite", bessel_suite},
        {5, "round 3-sphere suite", sphere_suite},
        {6, "Sasakian and flat Darboux suites", sasakian_suite},
        {7, "identity battery", identity_battery},
        {8, "numerical-methods battery", numerics_battery},
        {9, "determinism", determinism},
    };
    int failed = 0;
    for (const auto& c : criteria) {
        const auto t0 = std::chrono::steady_clock::now();
        std::vector<Check> checks;
        try {
            checks = c.body();
        } catch (const std::exception& e) {
            checks.push_back({"unexpected exception", false, e.what()});
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        std::size_t ok = 0;
        for (const auto& k : checks) ok += k.ok;
        const bool pass = ok == checks.size();
        failed += !pass;
        std::printf("%s %d %s (%zu/%zu checks, %.1fs)\n", pass ? "PASS" : "FAIL", c.id, c.title, ok, checks.size(),
                    secs);
        for (const auto& k : checks)
            std::printf("    %s %s: %s\n", k.ok ? "ok  " : "FAIL", k.what.c_str(), k.detail.c_str());
        std::fflush(stdout);
    }
    std::printf("%d of %zu criteria failed\n", failed, criteria.size());
    return failed == 0 ? 0 : 1;
}
