#include <doctest.h>

#include <cmath>
#include <random>

#include "contactlab/bessel.hpp"
#include "contactlab/bounds.hpp"
#include "contactlab/catalog.hpp"
#include "contactlab/contact.hpp"
#include "contactlab/errors.hpp"

using namespace contactlab;

namespace {

EvalContext entry(const char* name, std::map<std::string, double> c = {}) {
    return EvalContext(catalog_get(name, c).spec);
}

Vec3 in_box(std::mt19937_64& rng, const Region& r) {
    Vec3 p;
    for (int i = 0; i < 3; ++i) p[i] = r.lo[i] + (r.hi[i] - r.lo[i]) * unit_uniform(rng());
    return p;
}

}  // namespace

TEST_CASE("flat torus forms") {
    for (double k : {1.0, 2.0, 3.0}) {
        const EvalContext ctx = entry("t3-flat", {{"k", k}});
        std::mt19937_64 rng(3);
        for (int s = 0; s < 20; ++s) {
            const Vec3 p = in_box(rng, catalog_get("t3-flat").region);
            const ContactPointData d = contact_point(ctx, p);
            CHECK(d.rho == doctest::Approx(1).epsilon(1e-10));
            CHECK(d.theta_prime == doctest::Approx(k).epsilon(1e-8));
            CHECK(d.defect < 1e-10);
            CHECK_FALSE(d.heuristic);
            CHECK(residual_hodge(ctx, p) < 1e-8);
            CHECK(m_g_point(ctx, p).formula1 < 1e-8);
            CHECK(std::fabs(mean_curvature(ctx, p)) < 1e-8);
            CHECK(h_endomorphism(ctx, p).norm == doctest::Approx(k / 2).epsilon(1e-6));
        }
    }
}

TEST_CASE("hyperbolic space") {
    const EvalContext ctx = entry("h3-upper-half");
    std::mt19937_64 rng(5);
    for (int s = 0; s < 20; ++s) {
        Vec3 p = in_box(rng, catalog_get("h3-upper-half").region);
        const ContactPointData d = contact_point(ctx, p);
        CHECK(d.rho * p.z() == doctest::Approx(1).epsilon(1e-8));
        CHECK(d.theta_prime / p.z() == doctest::Approx(1).epsilon(1e-8));
        const MgPoint m = m_g_point(ctx, p);
        CHECK(m.formula1 == doctest::Approx(1).epsilon(1e-7));
        CHECK(m.formula2 == doctest::Approx(1).epsilon(1e-6));
    }
    const EvalContext curl = entry("h3-curl", {{"k", 2.5}});
    CHECK(theta_prime(curl, Vec3(0.1, 0.2, 1.7)) == doctest::Approx(2.5).epsilon(1e-8));
}

TEST_CASE("R x H2") {
    const EvalContext ctx = entry("r-x-h2");
    for (double y : {0.5, 1.0, 1.7}) {
        const Vec3 p(0.2, -0.3, y);
        const ContactPointData d = contact_point(ctx, p);
        CHECK(d.theta_prime == doctest::Approx(0.5).epsilon(1e-9));
        CHECK(d.rho * std::sqrt(2 * y) == doctest::Approx(1).epsilon(1e-9));
        CHECK(m_g_point(ctx, p).formula1 == doctest::Approx(0.5).epsilon(1e-7));
    }
}

TEST_CASE("Bessel form: weakly compatible with rho^-2 = J0^2 + J1^2") {
    const EvalContext ctx = entry("r3-bessel-ot");
    for (double r = 0.05; r <= 10.0; r += 0.35) {
        const double a = 0.7 * r;
        const Vec3 p(r * std::cos(a), r * std::sin(a), 0.3);
        const ContactPointData d = contact_point(ctx, p);
        const double delta = std::pow(bessel_j0(r), 2) + std::pow(bessel_j1(r), 2);
        CHECK(d.defect < 1e-8);
        CHECK(std::fabs(1 / (d.rho * d.rho) - delta) < 1e-8);
        CHECK(d.theta_prime == doctest::Approx(1).epsilon(1e-8));
    }
}

TEST_CASE("frames on the contact plane") {
    const EvalContext ctx = entry("r3-sasakian");
    const Vec3 p(0.3, -0.6, 0.2);
    const FrameXi f = xi_frame(ctx, p);
    const Mat3 g = ctx.metric(p);
    CHECK(inner(g, f.u, f.u) == doctest::Approx(1));
    CHECK(inner(g, f.v, f.v) == doctest::Approx(1));
    CHECK(std::fabs(inner(g, f.u, f.v)) < 1e-12);
    CHECK(std::fabs(ctx.alpha(p).dot(f.u)) < 1e-12);
    CHECK(std::fabs(ctx.alpha(p).dot(f.v)) < 1e-12);
    Mat3 M;
    M << f.u, f.v, f.n;
    CHECK(M.determinant() > 0);
    CHECK((phi(ctx, p, f.u) - f.v).norm() < 1e-12);
    CHECK((phi(ctx, p, f.v) + f.u).norm() < 1e-12);
    CHECK(phi(ctx, p, f.n).norm() < 1e-12);
    CHECK_THROWS_AS(second_fundamental_form(ctx, p, f.n, f.u), NotInXi);
}

TEST_CASE("second fundamental form and mean curvature") {
    const EvalContext ctx = entry("r-x-h2");
    const Vec3 p(0.1, 0.4, 1.3);
    const FrameXi f = xi_frame(ctx, p);
    for (Extension ext : {Extension::ProjectedCoordinate, Extension::FrozenProjection}) {
        const double uv = second_fundamental_form(ctx, p, f.u, f.v, {}, ext);
        const double vu = second_fundamental_form(ctx, p, f.v, f.u, {}, ext);
        CHECK(uv == doctest::Approx(vu).epsilon(1e-7));
    }
    CHECK(mean_curvature(ctx, p) == doctest::Approx(mean_curvature_div(ctx, p)).epsilon(1e-7));
    CHECK(residual_mean_curvature(ctx, p) < 1e-7);
    CHECK(residual_nabla_n_n(ctx, p) < 1e-7);
    CHECK(residual_m_g(ctx, p) < 1e-7);
}

TEST_CASE("h endomorphism is symmetric and trace-free") {
    for (const char* name : {"r3-sasakian", "s3-round", "t3-flat", "h3-curl"}) {
        const EvalContext ctx = entry(name);
        const Vec3 p = name == std::string("h3-curl") ? Vec3(0.1, 0.2, 1.5) : Vec3(0.2, -0.1, 0.3);
        const HEndomorphism h = h_endomorphism(ctx, p);
        CHECK_MESSAGE(std::fabs(h.m.trace()) < 1e-6, name);
        CHECK_MESSAGE(std::fabs(h.m(0, 1) - h.m(1, 0)) < 1e-6, name);
    }
    CHECK(h_endomorphism(entry("s3-round"), Vec3(0.1, 0.2, -0.3)).norm < 1e-6);
    CHECK(h_endomorphism(entry("r3-sasakian"), Vec3(0.1, 0.2, -0.3)).norm < 1e-6);
}

TEST_CASE("Ricci of the Reeb field") {
    for (const char* name : {"s3-round", "r3-sasakian", "r3-flat-darboux", "t3-flat"}) {
        const EvalContext ctx = entry(name);
        const Vec3 p(0.2, 0.3, 0.1);
        CHECK_MESSAGE(residual_ricci_xi(ctx, p) < 1e-6, name);
    }
}

TEST_CASE("classification") {
    auto cls = [](const char* name, std::map<std::string, double> c = {}) {
        const CatalogEntry e = catalog_get(name, c);
        return classify_compatibility(EvalContext(e.spec), e.region, Grid{{3, 3, 3}}, 1e-4).level;
    };
    CHECK(cls("t3-flat") == CompatClass::Compatible);
    CHECK(cls("t3-flat", {{"k", 1}}) == CompatClass::StronglyCompatible);
    CHECK(cls("h3-upper-half") == CompatClass::WeaklyCompatible);
    CHECK(cls("r3-bessel-ot") == CompatClass::WeaklyCompatible);
    CHECK(cls("s3-round") == CompatClass::Compatible);

    const EvalContext tilted(load_spec(R"~({"name": "tilted", "coords": ["x","y","z"],
        "metric": [["1", "0.5", "0"], ["", "1", "0"], ["", "", "1"]], "alpha": ["0", "x", "1"]})~"));
    const CompatClass c = classify_compatibility(tilted, Region{{-1, -1, -1}, {1, 1, 1}}, Grid{{3, 3, 3}}, 1e-4);
    CHECK(c.level == CompatClass::ContactOnly);
    CHECK(contact_point(tilted, Vec3(0.1, 0.2, 0.3)).heuristic);

    const EvalContext dead(load_spec(R"~({"name": "dead", "coords": ["x","y","z"],
        "metric": [["1", "0", "0"], ["", "1", "0"], ["", "", "1"]], "alpha": ["0", "0", "1"]})~", false));
    CHECK_THROWS_AS(reeb_field(dead, Vec3(0, 0, 0)), NotContactPoint);
    CHECK(classify_compatibility(dead, Region{{-1, -1, -1}, {1, 1, 1}}, Grid{{2, 2, 2}}, 1e-4).level ==
          CompatClass::NotContact);
}

TEST_CASE("m_g estimate over a grid") {
    const CatalogEntry e = catalog_get("r-x-h2");
    const MgEstimate m = m_g_estimate(EvalContext(e.spec), e.region, Grid{{3, 3, 4}});
    CHECK(m.m_g == doctest::Approx(0.5).epsilon(1e-6));
    CHECK(m.max_discrepancy < 1e-6);
    CHECK_FALSE(m.heuristic);
}
