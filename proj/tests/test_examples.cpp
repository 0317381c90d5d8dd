#include <doctest.h>

#include <cmath>

#include "contactlab/bessel.hpp"
#include "contactlab/catalog.hpp"
#include "contactlab/contact.hpp"
#include "contactlab/errors.hpp"

using namespace contactlab;

namespace {

EvalContext entry(const char* name, std::map<std::string, double> c = {}) {
    return EvalContext(catalog_get(name, c).spec);
}

EvalContext euclidean(const char* alpha_x, const char* alpha_y, const char* alpha_z, bool validate = true) {
    const std::string doc = std::string(R"~({"name": "e", "coords": ["x","y","z"],
        "metric": [["1","0","0"],["","1","0"],["","","1"]], "alpha": [")~") +
                            alpha_x + "\", \"" + alpha_y + "\", \"" + alpha_z + "\"]}";
    return EvalContext(load_spec(doc, validate));
}

}  // namespace

TEST_CASE("metric and Christoffel values") {
    const EvalContext h3 = entry("h3-upper-half");
    CHECK((metric_at(h3, Vec3(0, 0, 2)) - 0.25 * Mat3::Identity()).norm() < 1e-14);
    const Christoffel G = christoffel(h3, Vec3(0, 0, 2));
    CHECK(G[2](0, 0) == doctest::Approx(0.5).epsilon(1e-5));
    const Christoffel F = christoffel(entry("t3-flat"), Vec3(0.3, 0.1, 2));
    for (int k = 0; k < 3; ++k) CHECK(F[k].cwiseAbs().maxCoeff() < 1e-8);
}

TEST_CASE("exterior derivative and Hodge star values") {
    const EvalContext d = euclidean("-y", "0", "1");
    const Mat3 da = dalpha(d, Vec3(0.4, -0.2, 0.9));
    CHECK(da(0, 1) == doctest::Approx(1.0).epsilon(1e-8));
    CHECK(da(1, 0) == doctest::Approx(-1.0).epsilon(1e-8));

    Mat3 dxdy = Mat3::Zero();
    dxdy(0, 1) = 1;
    dxdy(1, 0) = -1;
    CHECK((hodge_star_2form(d, dxdy, Vec3::Zero()) - Vec3(0, 0, 1)).norm() < 1e-14);

    const EvalContext h3 = entry("h3-upper-half", {{"k", 1}});
    const Vec3 p(0, 0, 2);
    const Vec3 star = hodge_star_2form(h3, dalpha(h3, p), p);
    CHECK((star - 2 * h3.alpha(p)).norm() < 1e-4);
    CHECK(theta_prime(h3, p) == doctest::Approx(2).epsilon(1e-4));
}

TEST_CASE("brackets and Hessians of distance functions") {
    const VectorField X = [](const Vec3& x) { return Vec3(x[1], 0, 0); };
    const VectorField Y = [](const Vec3&) { return Vec3(0, 1, 0); };
    CHECK((lie_bracket(X, Y, Vec3(0.3, 0.7, -1)) - Vec3(-1, 0, 0)).norm() < 1e-8);
    const VectorField Dx = [](const Vec3&) { return Vec3(1, 0, 0); };
    const EvalContext flat = entry("t3-flat");
    CHECK(cov_deriv(flat, Dx, X, Vec3(0.3, 0.7, -1)).norm() < 1e-8);

    const ScalarField r = [](const Vec3& x) { return x.norm(); };
    const Vec3 p(2, 0, 0);
    CHECK(hessian(flat, r, p, Vec3(0, 1, 0), Vec3(0, 1, 0)) == doctest::Approx(0.5).epsilon(1e-5));
    CHECK(std::fabs(hessian(flat, r, p, Vec3(1, 0, 0), Vec3(1, 0, 0))) < 1e-5);

    const CatalogEntry h3 = catalog_get("h3-upper-half");
    const EvalContext ctx(h3.spec);
    const Vec3 o(0, 0, 1);
    const ScalarField dist = [&](const Vec3& x) { return h3.distance(o, x); };
    const Vec3 q(0, 0, std::exp(1.0));
    const Vec3 v(std::exp(1.0), 0, 0);  // unit and orthogonal to the radial direction
    CHECK(hessian(ctx, dist, q, v, v) == doctest::Approx(1 / std::tanh(1.0)).epsilon(1e-3));
}

TEST_CASE("Reeb fields") {
    const EvalContext t3 = entry("t3-flat");
    for (double z : {0.0, 0.4, 2.5}) {
        const double k = 2;
        CHECK((reeb_field(t3, Vec3(0, 0, z)) - Vec3(std::cos(k * z), -std::sin(k * z), 0)).norm() < 1e-6);
    }
    CHECK((reeb_field(euclidean("-y", "0", "1"), Vec3(0.5, 0.3, 0.2)) - Vec3(0, 0, 1)).norm() < 1e-8);

    const EvalContext bessel = entry("r3-bessel-ot");
    const double delta = std::pow(bessel_j0(1), 2) + std::pow(bessel_j1(1), 2);
    CHECK(delta == doctest::Approx(0.779173).epsilon(1e-5));
    // At (1,0,0) the angular direction is the y axis.
    const Vec3 R = reeb_field(bessel, Vec3(1, 0, 0));
    CHECK((R - Vec3(0, bessel_j1(1), bessel_j0(1)) / delta).norm() < 1e-6);
    CHECK(1 / std::pow(rho(bessel, Vec3(1, 0, 0)), 2) == doctest::Approx(0.779173).epsilon(1e-5));
}

TEST_CASE("weak-compatibility defect") {
    CHECK(weak_compat_defect(entry("t3-flat"), Vec3(0.1, 0.2, 0.3)) < 1e-8);
    CHECK(weak_compat_defect(entry("r3-bessel-ot"), Vec3(1.3, -0.4, 0.2)) < 1e-6);
    const double d = weak_compat_defect(euclidean("-y", "0", "1"), Vec3(0, 1, 0));
    CHECK(d == doctest::Approx(1 / std::sqrt(2.0)).epsilon(1e-4));
    const CompatClass c =
        classify_compatibility(euclidean("-y", "0", "1"), Region{{-1, 0.5, -1}, {1, 1.5, 1}}, Grid{{3, 3, 3}}, 1e-4);
    CHECK(c.level == CompatClass::ContactOnly);
}

TEST_CASE("mean curvature and nabla_n n values") {
    const EvalContext h3 = entry("h3-upper-half", {{"k", 1}});
    const Vec3 p(0, 0, 2);
    CHECK(std::fabs(mean_curvature(h3, p)) < 1e-4);
    const Vec3 nn = nabla_n_n(h3, p);
    CHECK(norm(metric_at(h3, p), nn) == doctest::Approx(1).epsilon(1e-3));
    CHECK(std::fabs(nn.x()) + std::fabs(nn.y()) < 1e-3);

    const EvalContext t3 = entry("t3-flat");
    CHECK(std::fabs(mean_curvature(t3, Vec3(0.2, 0.1, 0.7))) < 1e-6);
    CHECK(nabla_n_n(t3, Vec3(0.2, 0.1, 0.7)).norm() < 1e-6);

    const EvalContext rh = entry("r-x-h2");
    const Vec3 q(0, 0, 1);
    CHECK(norm(metric_at(rh, q), nabla_n_n(rh, q)) == doctest::Approx(0.5).epsilon(1e-3));
}
