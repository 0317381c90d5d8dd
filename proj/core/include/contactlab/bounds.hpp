#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "contactlab/contact.hpp"
#include "contactlab/geodesic.hpp"

namespace contactlab {

enum class Provenance { User, Sampled, Catalog, Derived };
const char* provenance_name(Provenance p);

struct Quantity {
    double value = 0.0;  // may be +infinity (inj, conv)
    Provenance provenance = Provenance::User;
    std::string note;
};

struct CurvatureData {
    std::optional<Quantity> K_upper;
    std::optional<Quantity> sec_abs_max;
    std::optional<Quantity> ric_reeb_min;
    Region region;
    Grid grid;
};

// Grid-sampled max sec, max |sec| and min Ric(R_α/‖R_α‖).
CurvatureData sample_curvature(const EvalContext& ctx, const Region& region, const Grid& grid,
                               const FDConfig& fd = {});

// ct_K(r) = √K cot(√K r), 1/r, √|K| coth(√|K| r).
double ct(double K, double r);
// Inverse of ct_K; +infinity where ct_K never reaches y.
double ct_inverse(double K, double y);

struct BoundInputs {
    std::optional<Quantity> K;
    std::optional<Quantity> sec_abs_max;
    std::optional<Quantity> ric_reeb_min;
    std::optional<Quantity> theta_prime;
    std::optional<Quantity> m_g;
    std::optional<Quantity> inj;
    std::optional<Quantity> conv;
    std::optional<Quantity> inj_gamma;
    std::optional<Quantity> A;
    std::optional<Quantity> B;
    std::optional<Quantity> nabla_nn_max;

    CompatClass::Level compat = CompatClass::NotContact;
    bool compat_known = false;
    bool heuristic = false;
    bool assert_complete = false;
    bool assert_closed = false;
    std::vector<std::string> notes;  // sampling warnings carried into reports

    std::optional<Quantity>* slot(const std::string& name);
    const std::optional<Quantity>* slot(const std::string& name) const;
};

// Names accepted by BoundInputs::slot and the CLI --given flag.
const std::vector<std::string>& input_names();

enum class Verdict { None, Holds, Fails, InsufficientData, Inapplicable };
const char* verdict_name(Verdict v);

struct BoundReport {
    std::string theorem;
    std::string method;
    std::vector<std::pair<std::string, Quantity>> inputs;
    std::optional<double> value;
    Verdict verdict = Verdict::None;
    std::vector<std::string> derivation;
    std::vector<std::string> warnings;
    std::string conclusion;
    bool heuristic = false;
};

BoundReport bound_main(const BoundInputs& in);
BoundReport bound_weak(const BoundInputs& in);
BoundReport bound_geometric(const BoundInputs& in);
BoundReport bound_reeb_tube(const BoundInputs& in);
// Comparisons near the boundary K = −m_g² use tol (see README).
BoundReport criterion_hyperbolic(const BoundInputs& in, double tol);
BoundReport criterion_quasi_geodesic(const BoundInputs& in, double tol);

enum class BoundMethod { Main, Weak, Geometric, Tube, Hyperbolic, QuasiGeodesic };
BoundMethod parse_bound_method(const std::string& s);
const char* bound_method_name(BoundMethod m);

struct InputRequest {
    Region region;
    Grid grid;
    FDConfig fd;
    double tol = 1e-4;
    std::map<std::string, double> given;          // provenance User
    std::map<std::string, double> catalog_extra;  // provenance Catalog
    Provenance known_provenance = Provenance::User;
    bool assert_complete = false;
    bool assert_closed = false;
};

// Fills the inputs a method needs: user pins first, then the spec's known
// block and catalog data, then grid sampling for what is still missing.
BoundInputs collect_inputs(const EvalContext& ctx, const InputRequest& req, BoundMethod method);
BoundReport run_bound(const BoundInputs& in, BoundMethod method, double tol);

using DistanceFn = std::function<double(const Vec3&, const Vec3&)>;

struct HessianCheck {
    double r = 0.0;
    double K = 0.0;
    double ct = 0.0;
    double min_slack = 0.0;
    double max_abs_slack = 0.0;
    std::size_t samples = 0;
};

// Samples ∇²r_p(v, v) − ct_K(r) on S_p(r) for unit v ⊥ ∇r_p, with r_p
// given by a closed-form distance.
HessianCheck hessian_lower_check(const EvalContext& ctx, const DistanceFn& dist, const Vec3& p, double r, double K,
                                 int samples, std::uint64_t seed, const FDConfig& fd = {},
                                 const ODEConfig& ode = {});

// Portable uniform double in [0, 1) from a 64-bit engine draw.
double unit_uniform(std::uint64_t bits);

}  // namespace contactlab
