#pragma once

#include <string>

#include "contactlab/tensor.hpp"

namespace contactlab {

struct ContactPointData {
    Vec3 R_alpha = Vec3::Zero();
    double rho = 0.0;  // ‖R_α‖
    Vec3 n = Vec3::Zero();
    double theta_prime = 0.0;
    double rho_alpha = 0.0;  // ‖α‖
    double defect = 0.0;
    bool heuristic = false;  // n taken as the unit dual of α
};

// Which unit normal field the contact operations use: ρ⁻¹R_α when the point is
// weakly compatible, the unit metric dual of α otherwise.
enum class NormalMode { Reeb, Dual };

struct FrameXi {
    Vec3 u = Vec3::Zero();
    Vec3 v = Vec3::Zero();
    Vec3 n = Vec3::Zero();
};

// Default threshold on the weak-compatibility defect below which n = ρ⁻¹R_α.
inline constexpr double kWeakTol = 1e-6;

Mat3 dalpha(const EvalContext& ctx, const Vec3& p, const FDConfig& fd = {});
// Coefficient of α∧dα against dx∧dy∧dz.
double contact_coefficient(const EvalContext& ctx, const Vec3& p, const FDConfig& fd = {});
Vec3 reeb_field(const EvalContext& ctx, const Vec3& p, const FDConfig& fd = {});
double theta_prime(const EvalContext& ctx, const Vec3& p, const FDConfig& fd = {});
double weak_compat_defect(const EvalContext& ctx, const Vec3& p, const FDConfig& fd = {});
ContactPointData contact_point(const EvalContext& ctx, const Vec3& p, const FDConfig& fd = {},
                               double weak_tol = kWeakTol);
NormalMode normal_mode(const EvalContext& ctx, const Vec3& p, const FDConfig& fd = {}, double weak_tol = kWeakTol);

Vec3 dual_normal(const EvalContext& ctx, const Vec3& q);
Vec3 unit_normal(const EvalContext& ctx, const Vec3& q, const FDConfig& fd, NormalMode mode);
double rho(const EvalContext& ctx, const Vec3& q, const FDConfig& fd = {});

// u, v orthonormal in ξ, n the unit normal, (u, v, n) positive.
FrameXi xi_frame(const EvalContext& ctx, const Vec3& p);
// φ(v) = J(v^ξ), realised as the g-cross product with the unit normal.
Vec3 phi(const EvalContext& ctx, const Vec3& p, const Vec3& v);

enum class Extension { ProjectedCoordinate, FrozenProjection };

double second_fundamental_form(const EvalContext& ctx, const Vec3& p, const Vec3& u, const Vec3& v,
                               const FDConfig& fd = {}, Extension ext = Extension::ProjectedCoordinate);
double mean_curvature(const EvalContext& ctx, const Vec3& p, const FDConfig& fd = {});
double mean_curvature_div(const EvalContext& ctx, const Vec3& p, const FDConfig& fd = {});
double extrinsic_curvature(const EvalContext& ctx, const Vec3& p, const FDConfig& fd = {});

Vec3 nabla_n_n(const EvalContext& ctx, const Vec3& p, const FDConfig& fd = {}, bool* heuristic = nullptr);

struct HEndomorphism {
    Eigen::Matrix2d m = Eigen::Matrix2d::Zero();  // m(a,b) = g(h(f_b), f_a) in the frame (u, v)
    double norm = 0.0;                             // Frobenius/√2, equal to |eigenvalue| when trace-free symmetric
    bool heuristic = false;
    FrameXi frame;
};
HEndomorphism h_endomorphism(const EvalContext& ctx, const Vec3& p, const FDConfig& fd = {});
// h applied to an arbitrary vector of ξ_p.
Vec3 h_apply(const EvalContext& ctx, const Vec3& p, const Vec3& v, const FDConfig& fd = {});

Vec3 grad_ln_rho(const EvalContext& ctx, const Vec3& p, const FDConfig& fd = {});
Vec3 grad_ln_theta(const EvalContext& ctx, const Vec3& p, const FDConfig& fd = {});

struct MgPoint {
    double formula1 = 0.0;  // ‖∇lnρ − (∇lnθ')^⊥‖
    double formula2 = 0.0;  // √(‖∇_n n‖² + 4H²)
    bool heuristic = false;
};
MgPoint m_g_point(const EvalContext& ctx, const Vec3& p, const FDConfig& fd = {});

struct MgEstimate {
    double m_g = 0.0;
    double by_formula1 = 0.0;
    double by_formula2 = 0.0;
    double max_discrepancy = 0.0;
    Vec3 argmax = Vec3::Zero();
    bool heuristic = false;
    Region region;
    Grid grid;
};
MgEstimate m_g_estimate(const EvalContext& ctx, const Region& region, const Grid& grid, const FDConfig& fd = {});

struct CompatClass {
    enum Level { NotContact, ContactOnly, WeaklyCompatible, Compatible, StronglyCompatible };
    Level level = NotContact;
    double tol = 0.0;
    double max_defect = 0.0;
    double max_rho_deviation = 0.0;
    double theta_min = 0.0;
    double theta_max = 0.0;
    double theta_spread = 0.0;
    std::size_t points = 0;
    Region region;
    Grid grid;
    std::string detail;
};
const char* compat_name(CompatClass::Level level);
CompatClass classify_compatibility(const EvalContext& ctx, const Region& region, const Grid& grid, double tol,
                                   const FDConfig& fd = {});

// Identity residuals used by the verification battery.
double residual_hodge(const EvalContext& ctx, const Vec3& p, const FDConfig& fd = {});
double residual_mean_curvature(const EvalContext& ctx, const Vec3& p, const FDConfig& fd = {});
double residual_nabla_n_n(const EvalContext& ctx, const Vec3& p, const FDConfig& fd = {});
double residual_m_g(const EvalContext& ctx, const Vec3& p, const FDConfig& fd = {});
double residual_ricci_xi(const EvalContext& ctx, const Vec3& p, const FDConfig& fd = {});

}  // namespace contactlab
