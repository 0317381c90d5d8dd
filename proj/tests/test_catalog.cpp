#include <doctest.h>

#include <cmath>
#include <numbers>

#include "contactlab/catalog.hpp"
#include "contactlab/errors.hpp"
#include "contactlab/tensor.hpp"

using namespace contactlab;

TEST_CASE("catalog listing") {
    const auto names = catalog_list();
    CHECK(names.size() == 9);
    for (const auto& n : names) {
        const CatalogEntry e = catalog_get(n);
        CHECK(e.name == n);
        CHECK(e.spec.name == n);
        CHECK_FALSE(e.reference.empty());
        CHECK(e.grid.size() > 0);
        for (const auto& [k, v] : e.reference)
            CHECK((v.provenance == "exact" || v.provenance == "derived" || v.provenance == "reported"));
    }
    CHECK_THROWS_AS(catalog_get("nope"), UnknownEntry);
}

TEST_CASE("reference values") {
    CHECK(catalog_get("t3-flat").reference.at("theta_prime").value == 2);
    CHECK(catalog_get("t3-flat", {{"k", 3}}).reference.at("theta_prime").value == 3);
    const RefValue w = catalog_get("r3-bessel-ot").reference.at("weak_bound");
    CHECK(w.value == 0.15);
    CHECK(w.provenance == "reported");
    CHECK(catalog_get("s3-round").reference.at("bound_main").value == doctest::Approx(std::numbers::pi / 2));
    CHECK(catalog_get("h3-upper-half").reference.at("criterion_hyperbolic").text == "holds");
}

TEST_CASE("export round trip") {
    for (const auto& n : catalog_list()) {
        const std::string doc = catalog_export(n);
        const ManifoldSpec s = load_spec(doc);
        CHECK(spec_hash(s) == spec_hash(catalog_get(n).spec));
        CHECK(dump_spec(s) == dump_spec(catalog_get(n).spec));
    }
    CHECK_THROWS_AS(catalog_export("nope"), UnknownEntry);
}

TEST_CASE("default regions lie in the domain") {
    for (const auto& n : catalog_list()) {
        const CatalogEntry e = catalog_get(n);
        const EvalContext ctx(e.spec);
        for (const Vec3& p : grid_points(e.region, e.grid)) CHECK_MESSAGE(ctx.in_domain(p), n);
    }
}

TEST_CASE("S3 charts embed in the unit sphere") {
    for (const char* n : {"s3-round", "s3-round-b"}) {
        const CatalogEntry e = catalog_get(n);
        REQUIRE(e.ambient);
        for (const Vec3& p : {Vec3(0, 0, 0), Vec3(0.3, -0.2, 0.4), Vec3(2, 1, -1)})
            CHECK(e.ambient(p).norm() == doctest::Approx(1));
        // the chart metric is the pullback of the round metric
        const Vec3 p(0.3, -0.2, 0.4);
        const Mat3 g = EvalContext(e.spec).metric(p);
        for (int i = 0; i < 3; ++i) {
            const double h = 1e-6;
            const Vec4 d = (e.ambient(p + h * Vec3::Unit(i)) - e.ambient(p - h * Vec3::Unit(i))) / (2 * h);
            CHECK(d.squaredNorm() == doctest::Approx(g(i, i)).epsilon(1e-8));
        }
        CHECK(e.distance(Vec3(0, 0, 0), Vec3(0, 0, 0)) == 0.0);
    }
}
