#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "contactlab/geodesic.hpp"

namespace contactlab {

struct FoliationConfig {
    double step = 0.0;         // arclength on the unit parameter sphere; 0 picks π/(4 n_phi), at most 0.02
    int max_steps = 20000;
    double sigma_tol = 1e-3;   // singular when ‖α|TS‖ < sigma_tol ‖α‖
    double closure_tol = 1e-4;
    int ball_cells = 2;        // singularity balls, in grid cells
    int return_seeds = 256;    // seeds on the meridian transversal
    double psi0 = 0.0;         // meridian used as transversal
    int min_phi = 8;           // coarser grids classify as unknown
    int min_psi = 16;
};

double foliation_step(const SphereChart& chart, const FoliationConfig& cfg);

struct LineDirection {
    bool singular = false;
    Vec3 du = Vec3::Zero();  // unit tangent of the parameter sphere at u
    double ratio = 0.0;      // ‖α|TS‖ / ‖α‖
};

// Direction of T S ∩ ξ at parameter u, oriented so that ι_V(area) = α|_S on
// the outward-oriented sphere.
LineDirection char_line_field(const EvalContext& ctx, const SphereChart& chart, const Vec3& u,
                              const FoliationConfig& cfg = {});
LineDirection char_line_field(const EvalContext& ctx, const SphereChart& chart, int i, int j,
                              const FoliationConfig& cfg = {});

struct Singularity {
    Vec3 u = Vec3::Zero();
    double phi = 0.0;
    double psi = 0.0;
    Vec3 X = Vec3::Zero();
    int sign = 0;  // sign of α(n_S)
    double ratio = 0.0;
};

std::vector<Singularity> find_singularities(const EvalContext& ctx, const SphereChart& chart,
                                            const FoliationConfig& cfg = {});

enum class LeafEnd { Singularity, Closed, LeftResolution, Stiff };
const char* leaf_end_name(LeafEnd e);

struct Leaf {
    std::vector<Vec3> u;
    std::vector<double> alpha_residual;
    LeafEnd end = LeafEnd::LeftResolution;
};

struct FoliationTrace {
    std::shared_ptr<const SphereChart> chart;
    FoliationConfig cfg;
    std::vector<Leaf> leaves;
    std::vector<Singularity> singularities;
    bool stiff = false;
    bool coarse = false;
    std::string diagnostic;
};

// Seeds spread along the meridian ψ = cfg.psi0.
std::vector<Vec3> meridian_seeds(int count, const FoliationConfig& cfg = {});

FoliationTrace trace_foliation(const EvalContext& ctx, std::shared_ptr<const SphereChart> chart,
                               const std::vector<Vec3>& seeds, const FoliationConfig& cfg = {});

struct ClosedLeafRecord {
    double phi = 0.0;  // crossing of the meridian transversal
    double psi = 0.0;
    Vec3 X = Vec3::Zero();
    double residual = 0.0;
    bool west_to_east = true;  // leaf winds with increasing ψ
    Leaf leaf;
};

// Fixed points of the first-return map on the meridian ψ = psi0.
std::vector<ClosedLeafRecord> detect_closed_leaves(const EvalContext& ctx, const FoliationTrace& trace);

enum class Tri { No, Yes, Unknown };
const char* tri_name(Tri t);

struct SphereClass {
    Tri simple = Tri::Unknown;
    Tri almost_horizontal = Tri::Unknown;
    int n_plus = 0;
    int n_minus = 0;
    std::string diagnostic;
};

SphereClass classify_sphere(const FoliationTrace& trace, const std::vector<ClosedLeafRecord>& closed);

struct TauScanResult {
    std::optional<double> tau_estimate;
    std::optional<double> first_closed_leaf_radius;
    std::vector<std::pair<double, std::size_t>> samples;  // radius, number of closed leaves
    double tolerance = 0.0;
    std::string note;
};

TauScanResult tau_scan(const EvalContext& ctx, const Vec3& center, double r_min, double r_max, int r_steps,
                       int n_phi, int n_psi, const FoliationConfig& cfg = {}, const FDConfig& fd = {},
                       const ODEConfig& ode = {});

std::string trace_csv(const FoliationTrace& trace);
std::string trace_svg(const FoliationTrace& trace, const std::vector<ClosedLeafRecord>& closed);

}  // namespace contactlab
