#pragma once

#include <cstdint>

#include "contactlab/contact.hpp"

namespace contactlab {

// Point (t, p) of the symplectization ℝ₊ × M. Vectors are in the basis
// (∂_t, ∂_1, ∂_2, ∂_3).
struct SymplectizationPoint {
    double t = 1.0;
    Vec3 base = Vec3::Zero();
};

// J with J∂_t = n, J n = −∂_t and J|_ξ the rotation by +π/2. Columns are the
// images of the basis vectors.
Mat4 almost_complex_structure(const EvalContext& ctx, const Vec3& p, const FDConfig& fd = {});

// The covector df∘J for t-independent f.
Vec4 df_circ_j(const EvalContext& ctx, const ScalarField& f, const Vec3& p, const FDConfig& fd = {});

// v with df(v) = 0 and df(Jv) = 0, a seeded combination of the kernel
// basis, normalised in dt² + g.
Vec4 complex_tangency_sample(const EvalContext& ctx, const ScalarField& f, const SymplectizationPoint& x,
                             std::uint64_t seed, const FDConfig& fd = {});

// L(v, v) = −d(df∘J)(v, Jv).
double levi_form(const EvalContext& ctx, const ScalarField& f, const SymplectizationPoint& x, const Vec4& v,
                 const FDConfig& fd = {});

struct LeviTerms {
    double levi = 0.0;        // L(v, v)
    double hessians = 0.0;    // ∇²f(v, v) + ∇²f(Jv, Jv)
    double correction = 0.0;  // ‖∇f‖ ⟨n_S, ∇ln ρ − (∇ln θ')^⊥⟩ ‖v‖²
    double residual = 0.0;    // |L − (hessians − correction)|
    bool heuristic = false;
};

LeviTerms levi_identity(const EvalContext& ctx, const ScalarField& f, const SymplectizationPoint& x, const Vec4& v,
                        const FDConfig& fd = {});
double levi_identity_residual(const EvalContext& ctx, const ScalarField& f, const SymplectizationPoint& x,
                              const Vec4& v, const FDConfig& fd = {});

}  // namespace contactlab
