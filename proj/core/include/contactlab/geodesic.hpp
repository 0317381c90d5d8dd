#pragma once

#include <functional>
#include <utility>
#include <vector>

#include "contactlab/tensor.hpp"

namespace contactlab {

struct ODEConfig {
    double h = 1e-3;  // arclength step
};

struct GeodesicState {
    Vec3 position = Vec3::Zero();
    Vec3 velocity = Vec3::Zero();
    double t = 0.0;
    double speed_drift = 0.0;  // max |‖γ'‖_g − 1| seen at step ends
};

// Fixed-step RK4 for γ'' + Γ(γ', γ') = 0 with step T/ceil(T/h). v must be
// g-unit. Throws LeftDomain when a step leaves the domain (or gets closer
// to its boundary than the FD stencil allows).
GeodesicState shoot(const EvalContext& ctx, const Vec3& p, const Vec3& v, double T, const FDConfig& fd = {},
                    const ODEConfig& ode = {});
std::vector<GeodesicState> shoot_path(const EvalContext& ctx, const Vec3& p, const Vec3& v, double T,
                                      const FDConfig& fd = {}, const ODEConfig& ode = {});
Vec3 exp_map(const EvalContext& ctx, const Vec3& p, const Vec3& w, const FDConfig& fd = {},
             const ODEConfig& ode = {});

// Initial value and covariant derivative of one Jacobi field.
struct JacobiInit {
    Vec3 value = Vec3::Zero();
    Vec3 derivative = Vec3::Zero();
};

struct JacobiRun {
    GeodesicState end;
    std::vector<Vec3> J;   // J(T)
    std::vector<Vec3> DJ;  // covariant derivative at T
};

// Called after every step with the current state and Jacobi values.
using JacobiObserver = std::function<void(const GeodesicState&, const std::vector<Vec3>&)>;

// Geodesic plus any number of Jacobi fields, integrated together through the
// coordinate form of the variational equation.
JacobiRun jacobi_fields(const EvalContext& ctx, const Vec3& p, const Vec3& v, const std::vector<JacobiInit>& init,
                        double T, const FDConfig& fd = {}, const ODEConfig& ode = {},
                        const JacobiObserver& observer = {});
Vec3 jacobi_field(const EvalContext& ctx, const Vec3& p, const Vec3& v, const Vec3& w0, const Vec3& w0p, double T,
                  const FDConfig& fd = {}, const ODEConfig& ode = {});

// Geodesic sphere S_p(r) parametrised by unit vectors u of R³ through
// v = E u, E a g_p-orthonormal basis with E e_3 = n(p). Nodes sit on the
// grid φ_i = iπ/n_phi (i = 0..n_phi), ψ_j = 2πj/n_psi.
struct SphereNode {
    Vec3 X = Vec3::Zero();      // exp_p(r E u)
    Vec3 n_S = Vec3::Zero();    // outward unit normal γ'(r)
    Vec3 J_phi = Vec3::Zero();  // D exp image of E e_φ (scaled by r)
    Vec3 J_psi = Vec3::Zero();  // D exp image of E e_ψ (unit ψ direction)
};

struct SphereChart {
    Vec3 center = Vec3::Zero();
    double r = 0.0;
    int n_phi = 0;
    int n_psi = 0;
    Mat3 E = Mat3::Identity();
    bool exact = false;  // constant metric: closed form, no interpolation
    std::vector<SphereNode> nodes;

    const SphereNode& node(int i, int j) const { return nodes[std::size_t(i) * n_psi + j]; }
    // Catmull-Rom interpolation between nodes (closed form when exact).
    SphereNode at(const Vec3& u) const;
    SphereNode at(double phi, double psi) const;
    // Node lookup with the pole reflections X(−φ, ψ) = X(φ, ψ + π).
    SphereNode extended_node(int i, int j) const;
};

SphereChart sphere_chart(const EvalContext& ctx, const Vec3& p, double r, int n_phi, int n_psi,
                         const FDConfig& fd = {}, const ODEConfig& ode = {});

struct SphereFrame {
    Vec3 e1 = Vec3::Zero();
    Vec3 e2 = Vec3::Zero();
    Vec3 n_S = Vec3::Zero();
};
SphereFrame sphere_tangent_frame(const EvalContext& ctx, const SphereChart& chart, int i, int j);
SphereFrame sphere_tangent_frame(const EvalContext& ctx, const SphereNode& node);

// Unit-sphere helpers for the (φ, ψ) parametrisation.
Vec3 sphere_point(double phi, double psi);
Vec3 sphere_e_phi(double phi, double psi);
Vec3 sphere_e_psi(double psi);
std::pair<double, double> sphere_angles(const Vec3& u);

// Tube of radius r about the Reeb geodesic through p, for arclength s in
// [s0, s1]: disks are the geodesics leaving ζ(s) orthogonally; their unit
// normal e is carried by a Jacobi field.
struct TubeSpec {
    Vec3 base = Vec3::Zero();
    double s0 = 0.0;
    double s1 = 1.0;
    double r = 0.0;
};

struct MarginResult {
    double margin = 1.0;
    Vec3 argmin = Vec3::Zero();
    std::size_t samples = 0;
};

// min over the sampled tube of 1 − |⟨R_α, e⟩(γ(t)) − ⟨R_α, e⟩(γ(0))|.
MarginResult transversality_margin(const EvalContext& ctx, const TubeSpec& tube, int n_s, int n_theta,
                                   const FDConfig& fd = {}, const ODEConfig& ode = {});

}  // namespace contactlab
