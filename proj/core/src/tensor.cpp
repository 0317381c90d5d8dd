#include "contactlab/tensor.hpp"

#include <cmath>

#include "contactlab/errors.hpp"

namespace contactlab {

Christoffel Christoffel::operator+(const Christoffel& o) const {
    Christoffel r;
    for (int k = 0; k < 3; ++k) r.G[k] = G[k] + o.G[k];
    return r;
}

Christoffel Christoffel::operator-(const Christoffel& o) const {
    Christoffel r;
    for (int k = 0; k < 3; ++k) r.G[k] = G[k] - o.G[k];
    return r;
}

Christoffel Christoffel::operator*(double s) const {
    Christoffel r;
    for (int k = 0; k < 3; ++k) r.G[k] = G[k] * s;
    return r;
}

double Riemann::eval(const Vec3& a, const Vec3& b, const Vec3& c, const Vec3& d) const {
    double s = 0.0;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            for (int k = 0; k < 3; ++k)
                for (int l = 0; l < 3; ++l) s += a[i] * b[j] * c[k] * d[l] * (*this)(i, j, k, l);
    return s;
}

Mat3 metric_at(const EvalContext& ctx, const Vec3& p) {
    ctx.require_domain(p);
    const Mat3 g = ctx.metric(p);
    Eigen::LLT<Mat3> llt(g);
    if (llt.info() != Eigen::Success || !(llt.matrixL().toDenseMatrix().diagonal().array() > 0).all())
        throw NotSPD("metric is not positive definite at (" + std::to_string(p[0]) + ", " +
                     std::to_string(p[1]) + ", " + std::to_string(p[2]) + ")");
    return g;
}

Mat3 inverse_metric_at(const EvalContext& ctx, const Vec3& p) { return metric_at(ctx, p).inverse(); }

double inner(const Mat3& g, const Vec3& u, const Vec3& v) { return u.dot(g * v); }

double norm(const Mat3& g, const Vec3& u) { return std::sqrt(std::max(0.0, u.dot(g * u))); }

Vec3 cross(const Mat3& g, const Vec3& a, const Vec3& b) {
    return std::sqrt(g.determinant()) * g.inverse() * a.cross(b);
}

Mat3 orthonormal_frame(const Mat3& g) {
    Eigen::LLT<Mat3> llt(g);
    const Mat3 L = llt.matrixL();
    return L.transpose().inverse();
}

namespace {

Christoffel christoffel_raw(const EvalContext& ctx, const Vec3& p, const FDConfig& fd) {
    Christoffel c;
    if (ctx.constant_metric()) return c;
    const Mat3 gi = ctx.metric(p).inverse();
    std::array<Mat3, 3> dg;
    for (int m = 0; m < 3; ++m) dg[m] = fd_partial([&](const Vec3& q) { return ctx.metric(q); }, p, m, fd);
    for (int k = 0; k < 3; ++k) {
        for (int i = 0; i < 3; ++i) {
            for (int j = i; j < 3; ++j) {
                double s = 0.0;
                for (int l = 0; l < 3; ++l) s += gi(k, l) * (dg[i](l, j) + dg[j](l, i) - dg[l](i, j));
                c.G[k](i, j) = c.G[k](j, i) = 0.5 * s;
            }
        }
    }
    return c;
}

std::array<Christoffel, 3> christoffel_derivative_raw(const EvalContext& ctx, const Vec3& p, const FDConfig& fd) {
    std::array<Christoffel, 3> d;
    if (ctx.constant_metric()) return d;
    for (int m = 0; m < 3; ++m)
        d[m] = fd_partial([&](const Vec3& q) { return christoffel_raw(ctx, q, fd); }, p, m, fd);
    return d;
}

}  // namespace

Christoffel christoffel_unchecked(const EvalContext& ctx, const Vec3& p, const FDConfig& fd) {
    return christoffel_raw(ctx, p, fd);
}

std::array<Christoffel, 3> christoffel_derivative_unchecked(const EvalContext& ctx, const Vec3& p,
                                                            const FDConfig& fd) {
    return christoffel_derivative_raw(ctx, p, fd);
}

Christoffel christoffel(const EvalContext& ctx, const Vec3& p, const FDConfig& fd) {
    ctx.check_fd(p, fd);
    return christoffel_raw(ctx, p, fd);
}

std::array<Christoffel, 3> christoffel_derivative(const EvalContext& ctx, const Vec3& p, const FDConfig& fd) {
    ctx.check_fd(p, fd);
    return christoffel_derivative_raw(ctx, p, fd);
}

Riemann riemann(const EvalContext& ctx, const Vec3& p, const FDConfig& fd) {
    ctx.check_fd(p, fd);
    Riemann rm;
    if (ctx.constant_metric()) return rm;
    const Mat3 g = ctx.metric(p);
    const Christoffel G = christoffel_raw(ctx, p, fd);
    const auto dG = christoffel_derivative_raw(ctx, p, fd);
    // up(l,i,j,k) = R^l_ijk
    double up[3][3][3][3];
    for (int l = 0; l < 3; ++l)
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j)
                for (int k = 0; k < 3; ++k) {
                    double v = dG[i][l](j, k) - dG[j][l](i, k);
                    for (int m = 0; m < 3; ++m) v += G[l](i, m) * G[m](j, k) - G[l](j, m) * G[m](i, k);
                    up[l][i][j][k] = v;
                }
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            for (int k = 0; k < 3; ++k)
                for (int d = 0; d < 3; ++d) {
                    double v = 0.0;
                    for (int l = 0; l < 3; ++l) v += g(d, l) * up[l][i][j][k];
                    rm(i, j, k, d) = v;
                }
    return rm;
}

double sectional(const Riemann& rm, const Mat3& g, const Vec3& u, const Vec3& v) {
    const double uu = inner(g, u, u), vv = inner(g, v, v), uv = inner(g, u, v);
    const double area2 = uu * vv - uv * uv;
    if (!(area2 > 0) || std::sqrt(area2) < 1e-10 * std::sqrt(uu * vv) || std::sqrt(area2) < 1e-300)
        throw DegeneratePlane("vectors span a degenerate plane");
    return rm.eval(u, v, v, u) / area2;
}

double sectional(const EvalContext& ctx, const Vec3& p, const Vec3& u, const Vec3& v, const FDConfig& fd) {
    const Mat3 g = metric_at(ctx, p);
    return sectional(riemann(ctx, p, fd), g, u, v);
}

namespace {

// Two unit vectors completing w/|w| to a g-orthonormal positive frame.
std::pair<Vec3, Vec3> completion(const Mat3& g, const Vec3& w) {
    const Vec3 n = w / norm(g, w);
    int best = 0;
    double best_c = kInf;
    for (int k = 0; k < 3; ++k) {
        const Vec3 e = Vec3::Unit(k);
        const double c = std::fabs(inner(g, e, n)) / norm(g, e);
        if (c < best_c) {
            best_c = c;
            best = k;
        }
    }
    Vec3 e1 = Vec3::Unit(best) - inner(g, Vec3::Unit(best), n) * n;
    e1 /= norm(g, e1);
    const Vec3 e2 = cross(g, n, e1);
    return {e1, e2};
}

}  // namespace

double ricci_dir(const Riemann& rm, const Mat3& g, const Vec3& w) {
    auto [e1, e2] = completion(g, w);
    return sectional(rm, g, w, e1) + sectional(rm, g, w, e2);
}

double ricci_dir(const EvalContext& ctx, const Vec3& p, const Vec3& w, const FDConfig& fd) {
    const Mat3 g = metric_at(ctx, p);
    return ricci_dir(riemann(ctx, p, fd), g, w);
}

double ricci_quadratic(const Riemann& rm, const Mat3& g, const Vec3& w) {
    const Mat3 gi = g.inverse();
    double s = 0.0;
    for (int i = 0; i < 3; ++i)
        for (int d = 0; d < 3; ++d)
            for (int j = 0; j < 3; ++j)
                for (int k = 0; k < 3; ++k) s += gi(i, d) * rm(i, j, k, d) * w[j] * w[k];
    return s / inner(g, w, w);
}

SecRange sectional_range(const Riemann& rm, const Mat3& g) {
    const Mat3 E = orthonormal_frame(g);
    const Vec3 X[3] = {E.col(1), E.col(2), E.col(0)};
    const Vec3 Y[3] = {E.col(2), E.col(0), E.col(1)};
    Mat3 Q;
    for (int a = 0; a < 3; ++a)
        for (int b = 0; b < 3; ++b) Q(a, b) = rm.eval(X[a], Y[a], Y[b], X[b]);
    Q = 0.5 * (Q + Q.transpose());
    Eigen::SelfAdjointEigenSolver<Mat3> es(Q, Eigen::EigenvaluesOnly);
    return {es.eigenvalues()(0), es.eigenvalues()(2)};
}

Mat3 d_oneform(const VectorField& alpha, const Vec3& p, const FDConfig& fd) {
    Mat3 da;
    for (int i = 0; i < 3; ++i) da.col(i) = fd_partial(alpha, p, i, fd);
    return da.transpose() - da;
}

Vec3 hodge_star_2form(const EvalContext& ctx, const Mat3& F, const Vec3& p) {
    const Mat3 g = metric_at(ctx, p);
    const Vec3 w(0.5 * (F(1, 2) - F(2, 1)), 0.5 * (F(2, 0) - F(0, 2)), 0.5 * (F(0, 1) - F(1, 0)));
    return g * w / std::sqrt(g.determinant());
}

Mat3 hodge_star_1form(const EvalContext& ctx, const Vec3& w, const Vec3& p) {
    const Mat3 g = metric_at(ctx, p);
    const Vec3 u = std::sqrt(g.determinant()) * g.inverse() * w;
    Mat3 F;
    F << 0.0, u[2], -u[1], -u[2], 0.0, u[0], u[1], -u[0], 0.0;
    return F;
}

Vec3 directional(const VectorField& Y, const Vec3& p, const Vec3& dir, const FDConfig& fd) {
    return fd_directional(Y, p, dir, fd);
}

Vec3 cov_deriv(const EvalContext& ctx, const Vec3& x, const VectorField& Y, const Vec3& p, const FDConfig& fd) {
    const Christoffel G = ctx.constant_metric() ? Christoffel{} : christoffel_raw(ctx, p, fd);
    return directional(Y, p, x, fd) + G.contract(x, Y(p));
}

Vec3 cov_deriv(const EvalContext& ctx, const VectorField& X, const VectorField& Y, const Vec3& p,
               const FDConfig& fd) {
    return cov_deriv(ctx, X(p), Y, p, fd);
}

Vec3 lie_bracket(const VectorField& X, const VectorField& Y, const Vec3& p, const FDConfig& fd) {
    return directional(Y, p, X(p), fd) - directional(X, p, Y(p), fd);
}

Vec3 differential(const ScalarField& f, const Vec3& p, const FDConfig& fd) {
    return Vec3(fd_partial(f, p, 0, fd), fd_partial(f, p, 1, fd), fd_partial(f, p, 2, fd));
}

Vec3 gradient(const EvalContext& ctx, const ScalarField& f, const Vec3& p, const FDConfig& fd) {
    return ctx.metric(p).inverse() * differential(f, p, fd);
}

double hessian(const EvalContext& ctx, const ScalarField& f, const Vec3& p, const Vec3& u, const Vec3& v,
               const FDConfig& fd) {
    auto dv = [&](const Vec3& q) { return fd_directional(f, q, v, fd); };
    const double second = fd_directional(dv, p, u, fd);
    const Christoffel G = ctx.constant_metric() ? Christoffel{} : christoffel_raw(ctx, p, fd);
    return second - G.contract(u, v).dot(differential(f, p, fd));
}

}  // namespace contactlab
