#include "contactlab/levi.hpp"

#include <cmath>
#include <numbers>
#include <random>

#include "contactlab/bounds.hpp"
#include "contactlab/errors.hpp"

namespace contactlab {

namespace {

Mat4 j_unchecked(const EvalContext& ctx, const Vec3& q, const FDConfig& fd, NormalMode mode) {
    const Mat3 g = ctx.metric(q);
    const Vec3 a = ctx.alpha(q);
    const Vec3 n = unit_normal(ctx, q, fd, mode);
    const Vec3 nd = dual_normal(ctx, q);
    Mat4 J = Mat4::Zero();
    J.block<3, 1>(1, 0) = n;
    const double an = a.dot(n);
    for (int i = 0; i < 3; ++i) {
        const Vec3 e = Vec3::Unit(i);
        const double c = a[i] / an;
        const Vec3 exi = e - c * n;
        J(0, i + 1) = -c;
        J.block<3, 1>(1, i + 1) = cross(g, nd, exi);
    }
    return J;
}

Vec4 beta_unchecked(const EvalContext& ctx, const ScalarField& f, const Vec3& q, const FDConfig& fd,
                    NormalMode mode) {
    Vec4 df = Vec4::Zero();
    df.tail<3>() = differential(f, q, fd);
    return j_unchecked(ctx, q, fd, mode).transpose() * df;
}

}  // namespace

Mat4 almost_complex_structure(const EvalContext& ctx, const Vec3& p, const FDConfig& fd) {
    ctx.check_fd(p, fd);
    metric_at(ctx, p);
    return j_unchecked(ctx, p, fd, normal_mode(ctx, p, fd));
}

Vec4 df_circ_j(const EvalContext& ctx, const ScalarField& f, const Vec3& p, const FDConfig& fd) {
    ctx.check_fd(p, fd);
    metric_at(ctx, p);
    return beta_unchecked(ctx, f, p, fd, normal_mode(ctx, p, fd));
}

Vec4 complex_tangency_sample(const EvalContext& ctx, const ScalarField& f, const SymplectizationPoint& x,
                             std::uint64_t seed, const FDConfig& fd) {
    ctx.check_fd(x.base, fd);
    const Mat3 g = metric_at(ctx, x.base);
    Eigen::Matrix<double, 2, 4> A;
    A.row(0).setZero();
    A.block<1, 3>(0, 1) = differential(f, x.base, fd).transpose();
    A.row(1) = beta_unchecked(ctx, f, x.base, fd, normal_mode(ctx, x.base, fd)).transpose();
    Eigen::JacobiSVD<Eigen::Matrix<double, 2, 4>> svd(A, Eigen::ComputeFullV);
    const auto s = svd.singularValues();
    if (!(s[0] > 0.0) || s[1] < 1e-10 * s[0])
        throw DegenerateKernel("df and df o J are linearly dependent at the sample point");
    const Vec4 k1 = svd.matrixV().col(2), k2 = svd.matrixV().col(3);
    std::mt19937_64 rng(seed);
    const double th = 2.0 * std::numbers::pi * unit_uniform(rng());
    Vec4 v = std::cos(th) * k1 + std::sin(th) * k2;
    const Vec3 vm = v.tail<3>();
    v /= std::sqrt(v[0] * v[0] + inner(g, vm, vm));
    return v;
}

double levi_form(const EvalContext& ctx, const ScalarField& f, const SymplectizationPoint& x, const Vec4& v,
                 const FDConfig& fd) {
    ctx.check_fd(x.base, fd);
    metric_at(ctx, x.base);
    const NormalMode mode = normal_mode(ctx, x.base, fd);
    // dβ_ab = ∂_a β_b − ∂_b β_a; β does not depend on t
    Mat4 D = Mat4::Zero();  // D(a, b) = ∂_a β_b
    for (int i = 0; i < 3; ++i)
        D.row(i + 1) = fd_partial([&](const Vec3& q) { return beta_unchecked(ctx, f, q, fd, mode); }, x.base, i, fd)
                           .transpose();
    const Mat4 dbeta = D - D.transpose();
    const Vec4 Jv = j_unchecked(ctx, x.base, fd, mode) * v;
    return -v.dot(dbeta * Jv);
}

LeviTerms levi_identity(const EvalContext& ctx, const ScalarField& f, const SymplectizationPoint& x, const Vec4& v,
                        const FDConfig& fd) {
    LeviTerms t;
    t.levi = levi_form(ctx, f, x, v, fd);
    const Vec3& p = x.base;
    const Mat3 g = ctx.metric(p);
    const NormalMode mode = normal_mode(ctx, p, fd);
    t.heuristic = mode == NormalMode::Dual;
    const Vec4 Jv = j_unchecked(ctx, p, fd, mode) * v;
    const Vec3 vm = v.tail<3>(), jm = Jv.tail<3>();
    t.hessians = hessian(ctx, f, p, vm, vm, fd) + hessian(ctx, f, p, jm, jm, fd);
    const Vec3 gf = gradient(ctx, f, p, fd);
    const double gn = norm(g, gf);
    const Vec3 n = unit_normal(ctx, p, fd, mode);
    const Vec3 b = grad_ln_theta(ctx, p, fd);
    const Vec3 X = grad_ln_rho(ctx, p, fd) - inner(g, b, n) * n;
    const double vv = v[0] * v[0] + inner(g, vm, vm);
    t.correction = gn > 0 ? inner(g, gf, X) * vv : 0.0;
    t.residual = std::fabs(t.levi - (t.hessians - t.correction));
    return t;
}

double levi_identity_residual(const EvalContext& ctx, const ScalarField& f, const SymplectizationPoint& x,
                              const Vec4& v, const FDConfig& fd) {
    return levi_identity(ctx, f, x, v, fd).residual;
}

}  // namespace contactlab
