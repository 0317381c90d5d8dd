#include <doctest.h>

#include <cmath>

#include "contactlab/catalog.hpp"
#include "contactlab/errors.hpp"
#include "contactlab/levi.hpp"

using namespace contactlab;

namespace {

const ScalarField kBall = [](const Vec3& x) { return 0.5 * (x - Vec3(-2, -2, -2)).squaredNorm(); };

}  // namespace

TEST_CASE("almost complex structure squares to -1") {
    for (const char* name : {"t3-flat", "r3-sasakian", "h3-upper-half", "r3-bessel-ot"}) {
        const EvalContext ctx(catalog_get(name).spec);
        const Vec3 p(0.3, 0.2, 1.1);
        const Mat4 J = almost_complex_structure(ctx, p);
        CHECK_MESSAGE((J * J + Mat4::Identity()).norm() < 1e-10, name);
        const Vec3 n = unit_normal(ctx, p, {}, normal_mode(ctx, p));
        CHECK((J.col(0).tail<3>() - n).norm() < 1e-10);
        CHECK(J.col(0)[0] == 0.0);
    }
}

TEST_CASE("complex tangencies lie in the kernel of df and df o J") {
    const EvalContext ctx(catalog_get("r-x-h2").spec);
    const SymplectizationPoint x{1.0, Vec3(0.1, 0.3, 1.2)};
    const Vec4 v = complex_tangency_sample(ctx, kBall, x, 9);
    const Vec4 df(0, differential(kBall, x.base)[0], differential(kBall, x.base)[1], differential(kBall, x.base)[2]);
    CHECK(std::fabs(df.dot(v)) < 1e-10);
    CHECK(std::fabs(df_circ_j(ctx, kBall, x.base).dot(v)) < 1e-10);
    const double len = std::sqrt(v[0] * v[0] + inner(ctx.metric(x.base), v.tail<3>(), v.tail<3>()));
    CHECK(len == doctest::Approx(1));
    CHECK_FALSE((complex_tangency_sample(ctx, kBall, x, 10) - v).norm() == 0.0);

    const ScalarField flat = [](const Vec3&) { return 1.0; };
    CHECK_THROWS_AS(complex_tangency_sample(ctx, flat, x, 1), DegenerateKernel);
}

TEST_CASE("Levi identity") {
    for (const char* name : {"t3-flat", "h3-upper-half", "r-x-h2", "r3-bessel-ot", "s3-round", "r3-sasakian"}) {
        const EvalContext ctx(catalog_get(name).spec);
        const Vec3 p(0.3, 0.2, 1.1);
        for (std::uint64_t seed = 0; seed < 3; ++seed) {
            const SymplectizationPoint x{1.0, name == std::string("s3-round") ? Vec3(0.1, 0.2, 0.3) : p};
            const Vec4 v = complex_tangency_sample(ctx, kBall, x, seed);
            const LeviTerms t = levi_identity(ctx, kBall, x, v);
            CHECK_MESSAGE(t.residual < 1e-4, name);
            CHECK_FALSE(t.heuristic);
        }
    }
}

TEST_CASE("Euclidean balls are strictly pseudoconvex for the standard structure") {
    // For the compatible flat metric the correction vanishes and L is a sum of Hessians.
    const EvalContext ctx(catalog_get("t3-flat").spec);
    const SymplectizationPoint x{1.0, Vec3(0.5, 0.1, 0.7)};
    const Vec4 v = complex_tangency_sample(ctx, kBall, x, 4);
    const LeviTerms t = levi_identity(ctx, kBall, x, v);
    CHECK(std::fabs(t.correction) < 1e-8);
    CHECK(t.levi > 0);
    CHECK(levi_identity_residual(ctx, kBall, x, v) == doctest::Approx(t.residual));
}
