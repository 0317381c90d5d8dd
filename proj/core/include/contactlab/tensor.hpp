#pragma once

#include <array>

#include "contactlab/context.hpp"

namespace contactlab {

// Gamma[k](i, j) = Γ^k_ij
struct Christoffel {
    std::array<Mat3, 3> G{Mat3::Zero(), Mat3::Zero(), Mat3::Zero()};

    Mat3& operator[](int k) { return G[k]; }
    const Mat3& operator[](int k) const { return G[k]; }
    // Γ(u, v)^k
    Vec3 contract(const Vec3& u, const Vec3& v) const {
        return Vec3(u.dot(G[0] * v), u.dot(G[1] * v), u.dot(G[2] * v));
    }
    Christoffel operator+(const Christoffel& o) const;
    Christoffel operator-(const Christoffel& o) const;
    Christoffel operator*(double s) const;
    Christoffel operator/(double s) const { return *this * (1.0 / s); }
};
inline Christoffel operator*(double s, const Christoffel& c) { return c * s; }

// Fully covariant curvature Rm(a,b,c,d) = g(R(e_a,e_b)e_c, e_d) with
// R(X,Y)Z = ∇_X∇_Y Z − ∇_Y∇_X Z − ∇_[X,Y] Z, so that sec(u,v) = Rm(u,v,v,u)/|u∧v|².
struct Riemann {
    std::array<double, 81> r{};
    double& operator()(int a, int b, int c, int d) { return r[((a * 3 + b) * 3 + c) * 3 + d]; }
    double operator()(int a, int b, int c, int d) const { return r[((a * 3 + b) * 3 + c) * 3 + d]; }
    double eval(const Vec3& a, const Vec3& b, const Vec3& c, const Vec3& d) const;
};

struct SecRange {
    double min = 0.0;
    double max = 0.0;
};

// Metric operations
Mat3 metric_at(const EvalContext& ctx, const Vec3& p);  // domain + SPD checked
Mat3 inverse_metric_at(const EvalContext& ctx, const Vec3& p);
double inner(const Mat3& g, const Vec3& u, const Vec3& v);
double norm(const Mat3& g, const Vec3& u);
// g-cross product: the vector c with g(c, w) = vol_g(a, b, w).
Vec3 cross(const Mat3& g, const Vec3& a, const Vec3& b);
// Columns form a g-orthonormal, positively oriented basis.
Mat3 orthonormal_frame(const Mat3& g);

Christoffel christoffel(const EvalContext& ctx, const Vec3& p, const FDConfig& fd = {});
// dG[m] = ∂_m Γ
std::array<Christoffel, 3> christoffel_derivative(const EvalContext& ctx, const Vec3& p, const FDConfig& fd = {});
// No domain or step checks; for inner loops that validated p already.
Christoffel christoffel_unchecked(const EvalContext& ctx, const Vec3& p, const FDConfig& fd = {});
std::array<Christoffel, 3> christoffel_derivative_unchecked(const EvalContext& ctx, const Vec3& p,
                                                            const FDConfig& fd = {});

Riemann riemann(const EvalContext& ctx, const Vec3& p, const FDConfig& fd = {});
double sectional(const Riemann& rm, const Mat3& g, const Vec3& u, const Vec3& v);
double sectional(const EvalContext& ctx, const Vec3& p, const Vec3& u, const Vec3& v, const FDConfig& fd = {});
// Σ sec(w, e_i) over an orthonormal completion of w/|w|.
double ricci_dir(const Riemann& rm, const Mat3& g, const Vec3& w);
double ricci_dir(const EvalContext& ctx, const Vec3& p, const Vec3& w, const FDConfig& fd = {});
// Ric_jk w^j w^k / |w|², computed by contraction instead of sectional sums.
double ricci_quadratic(const Riemann& rm, const Mat3& g, const Vec3& w);
// Extremes of the sectional curvature over all planes at p (eigenvalues of the
// curvature operator on bivectors).
SecRange sectional_range(const Riemann& rm, const Mat3& g);

// Exterior calculus. Covector fields are VectorField closures holding components.
Mat3 d_oneform(const VectorField& alpha, const Vec3& p, const FDConfig& fd = {});
Vec3 hodge_star_2form(const EvalContext& ctx, const Mat3& F, const Vec3& p);
Mat3 hodge_star_1form(const EvalContext& ctx, const Vec3& w, const Vec3& p);

// Covariant calculus on vector fields (components in chart coordinates).
Vec3 directional(const VectorField& Y, const Vec3& p, const Vec3& dir, const FDConfig& fd = {});
Vec3 cov_deriv(const EvalContext& ctx, const VectorField& X, const VectorField& Y, const Vec3& p,
               const FDConfig& fd = {});
Vec3 cov_deriv(const EvalContext& ctx, const Vec3& x, const VectorField& Y, const Vec3& p, const FDConfig& fd = {});
Vec3 lie_bracket(const VectorField& X, const VectorField& Y, const Vec3& p, const FDConfig& fd = {});

Vec3 differential(const ScalarField& f, const Vec3& p, const FDConfig& fd = {});
Vec3 gradient(const EvalContext& ctx, const ScalarField& f, const Vec3& p, const FDConfig& fd = {});
// ∇²f(u,v) = u·(v·f) − (∇_u v)·f with v extended by constant components.
double hessian(const EvalContext& ctx, const ScalarField& f, const Vec3& p, const Vec3& u, const Vec3& v,
               const FDConfig& fd = {});

}  // namespace contactlab
