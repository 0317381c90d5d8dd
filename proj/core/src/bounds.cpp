#include "contactlab/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <random>

#include "contactlab/errors.hpp"

namespace contactlab {

namespace {

constexpr double kPi = std::numbers::pi;

std::string num(double v) {
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.10g", v);
    return buf;
}

std::string sampled_note(const Region& r, const Grid& g) {
    return "grid-sampled on " + format_region(r) + " with grid " + format_grid(g);
}

void add_input(BoundReport& rep, const std::string& name, const std::optional<Quantity>& q) {
    if (q) rep.inputs.emplace_back(name, *q);
}

void require_level(const BoundInputs& in, CompatClass::Level need, const std::string& what) {
    if (!in.compat_known || in.compat < need)
        throw RequiresCompatible(what + " requires a " +
                                 (need == CompatClass::Compatible ? std::string("compatible")
                                                                  : std::string("weakly compatible")) +
                                 " metric; sampled classification is " +
                                 (in.compat_known ? compat_name(in.compat) : "unknown"));
}

const Quantity& need(const std::optional<Quantity>& q, const std::string& name, const std::string& what) {
    if (!q) throw InsufficientData(what + " needs " + name + ", which is neither known nor given");
    return *q;
}

struct AB {
    double A = 0.0;
    double B = 0.0;
};

AB geometric_constants(const BoundInputs& in, BoundReport& rep, const std::string& what) {
    AB r;
    if (in.A) {
        r.A = in.A->value;
        rep.derivation.push_back("A = " + num(r.A) + " (" + provenance_name(in.A->provenance) + ")");
    } else {
        const double s = need(in.sec_abs_max, "sec_abs_max", what).value;
        r.A = 4.0 / 3.0 * s;
        rep.derivation.push_back("A = 4/3 * max|sec| = 4/3 * " + num(s) + " = " + num(r.A));
    }
    if (in.B) {
        r.B = in.B->value;
        rep.derivation.push_back("B = " + num(r.B) + " (" + provenance_name(in.B->provenance) + ")");
    } else {
        const double th = need(in.theta_prime, "theta_prime", what).value;
        const double ric = need(in.ric_reeb_min, "ric_reeb_min", what).value;
        double rad = th * th / 4.0 - 0.5 * ric;
        if (rad < 0.0) {
            if (rad < -1e-6)
                throw InconsistentInput("theta'^2/4 - Ric(R)/2 = " + num(rad) +
                                        " is negative, but it equals |h|^2 >= 0 for compatible metrics");
            rep.warnings.push_back("radicand theta'^2/4 - Ric(R)/2 = " + num(rad) + " clamped to 0");
            rad = 0.0;
        }
        r.B = th / 2.0 + std::sqrt(rad);
        rep.derivation.push_back("B = theta'/2 + sqrt(theta'^2/4 - min Ric(R)/2) = " + num(th / 2.0) + " + sqrt(" +
                                 num(rad) + ") = " + num(r.B));
    }
    if (r.A < 0.0 || r.B <= 0.0) throw InconsistentInput("A must be >= 0 and B > 0");
    return r;
}

double ab_radius(const AB& c) { return 2.0 / (std::sqrt(2.0 * c.A + c.B * c.B) + c.B); }

}  // namespace

const char* provenance_name(Provenance p) {
    switch (p) {
        case Provenance::User: return "user";
        case Provenance::Sampled: return "sampled";
        case Provenance::Catalog: return "catalog";
        case Provenance::Derived: return "derived";
    }
    return "?";
}

const char* verdict_name(Verdict v) {
    switch (v) {
        case Verdict::None: return "none";
        case Verdict::Holds: return "holds";
        case Verdict::Fails: return "fails";
        case Verdict::InsufficientData: return "insufficient-data";
        case Verdict::Inapplicable: return "inapplicable";
    }
    return "?";
}

const std::vector<std::string>& input_names() {
    static const std::vector<std::string> names{"K",   "sec_abs_max", "ric_reeb_min", "theta_prime",
                                                "m_g", "inj",         "conv",         "inj_gamma",
                                                "A",   "B",           "nabla_nn_max"};
    return names;
}

std::optional<Quantity>* BoundInputs::slot(const std::string& name) {
    return const_cast<std::optional<Quantity>*>(std::as_const(*this).slot(name));
}

const std::optional<Quantity>* BoundInputs::slot(const std::string& name) const {
    if (name == "K") return &K;
    if (name == "sec_abs_max") return &sec_abs_max;
    if (name == "ric_reeb_min") return &ric_reeb_min;
    if (name == "theta_prime") return &theta_prime;
    if (name == "m_g") return &m_g;
    if (name == "inj") return &inj;
    if (name == "conv") return &conv;
    if (name == "inj_gamma") return &inj_gamma;
    if (name == "A") return &A;
    if (name == "B") return &B;
    if (name == "nabla_nn_max") return &nabla_nn_max;
    return nullptr;
}

double ct(double K, double r) {
    if (!(r > 0.0)) throw OutOfRange("ct_K(r) needs r > 0");
    const double s = std::sqrt(std::fabs(K));
    if (std::fabs(K) * r * r < 1e-8) return 1.0 / r - K * r / 3.0;
    if (K > 0.0) {
        if (!(r < kPi / (2.0 * s)))
            throw OutOfRange("ct_K(r) with K > 0 needs r < pi/(2 sqrt K) = " + num(kPi / (2.0 * s)));
        return s / std::tan(s * r);
    }
    return s / std::tanh(s * r);
}

double ct_inverse(double K, double y) {
    if (!(y >= 0.0)) throw OutOfRange("ct_inverse needs y >= 0");
    const double s = std::sqrt(std::fabs(K));
    if (K < 0.0 && y <= s) return kInf;
    if (y == 0.0) return kInf;
    if (K == 0.0) return 1.0 / y;
    double r = K > 0.0 ? std::atan(s / y) / s : std::atanh(s / y) / s;
    // one Newton polish against the forward map; ct' = -K - ct² in r
    for (int it = 0; it < 2; ++it) {
        if (!(r > 0.0) || std::isinf(r)) break;
        if (K > 0.0 && !(r < kPi / (2.0 * s))) break;
        const double c = ct(K, r);
        const double d = -K - c * c;
        if (d == 0.0) break;
        r -= (c - y) / d;
    }
    return r;
}

CurvatureData sample_curvature(const EvalContext& ctx, const Region& region, const Grid& grid, const FDConfig& fd) {
    struct S {
        double lo = 0, hi = 0, ric = kInf;
    };
    const auto pts = grid_points(region, grid);
    std::vector<S> vals(pts.size());
    parallel_for(pts.size(), [&](std::size_t i) {
        const Mat3 g = metric_at(ctx, pts[i]);
        const Riemann rm = riemann(ctx, pts[i], fd);
        const SecRange sr = sectional_range(rm, g);
        vals[i].lo = sr.min;
        vals[i].hi = sr.max;
        try {
            vals[i].ric = ricci_dir(rm, g, reeb_field(ctx, pts[i], fd));
        } catch (const NotContactPoint&) {
        }
    });
    CurvatureData c;
    c.region = region;
    c.grid = grid;
    if (pts.empty()) return c;
    double hi = -kInf, abs_max = 0.0, ric = kInf;
    for (const auto& v : vals) {
        hi = std::max(hi, v.hi);
        abs_max = std::max({abs_max, std::fabs(v.lo), std::fabs(v.hi)});
        ric = std::min(ric, v.ric);
    }
    const std::string note = sampled_note(region, grid);
    c.K_upper = Quantity{hi, Provenance::Sampled, note};
    c.sec_abs_max = Quantity{abs_max, Provenance::Sampled, note};
    if (std::isfinite(ric)) c.ric_reeb_min = Quantity{ric, Provenance::Sampled, note};
    return c;
}

BoundReport bound_main(const BoundInputs& in) {
    BoundReport rep;
    rep.theorem = "main";
    rep.method = "main";
    rep.heuristic = in.heuristic;
    require_level(in, CompatClass::Compatible, "bound_main");
    add_input(rep, "conv", in.conv);
    add_input(rep, "inj", in.inj);
    add_input(rep, "K", in.K);
    if (in.conv) {
        rep.value = in.conv->value;
        rep.derivation.push_back("tau >= conv(g) = " + num(in.conv->value));
    } else if (in.inj && in.K) {
        const double inj = in.inj->value, K = in.K->value;
        if (K > 0.0) {
            const double cap = kPi / (2.0 * std::sqrt(K));
            rep.value = std::min(inj, cap);
            rep.derivation.push_back("tau >= min{inj, pi/(2 sqrt K)} = min{" + num(inj) + ", " + num(cap) + "}");
        } else {
            rep.value = inj;
            rep.derivation.push_back("sec <= 0: tau = inj = " + num(inj));
        }
    } else {
        throw InsufficientData("bound_main needs conv, or both inj and K");
    }
    rep.conclusion = "xi restricted to every geodesic ball of radius below the bound is tight";
    return rep;
}

BoundReport bound_weak(const BoundInputs& in) {
    BoundReport rep;
    rep.theorem = "weak-compatible";
    rep.method = "weak";
    rep.heuristic = in.heuristic;
    require_level(in, CompatClass::WeaklyCompatible, "bound_weak");
    const Quantity& m = need(in.m_g, "m_g", "bound_weak");
    const Quantity& K = need(in.K, "K", "bound_weak");
    const Quantity& conv = need(in.conv, "conv", "bound_weak");
    add_input(rep, "K", in.K);
    add_input(rep, "m_g", in.m_g);
    add_input(rep, "conv", in.conv);
    if (!std::isfinite(m.value)) throw InsufficientData("m_g is not finite");
    const double r = ct_inverse(K.value, m.value);
    rep.derivation.push_back("ct_K^-1(m_g) = ct_" + num(K.value) + "^-1(" + num(m.value) + ") = " + num(r));
    rep.value = std::min(r, conv.value);
    rep.derivation.push_back("tau >= min{" + num(r) + ", conv = " + num(conv.value) + "} = " + num(*rep.value));
    rep.conclusion = "xi restricted to every geodesic ball of radius below the bound is tight";
    return rep;
}

BoundReport bound_geometric(const BoundInputs& in) {
    BoundReport rep;
    rep.theorem = "geometric";
    rep.method = "geometric";
    rep.heuristic = in.heuristic;
    require_level(in, CompatClass::Compatible, "bound_geometric");
    const AB c = geometric_constants(in, rep, "bound_geometric");
    for (const char* n : {"inj", "K", "sec_abs_max", "ric_reeb_min", "theta_prime", "A", "B"}) add_input(rep, n, *in.slot(n));
    double v = ab_radius(c);
    rep.derivation.push_back("2/(sqrt(2A+B^2)+B) = " + num(v));
    if (in.inj) {
        v = std::min(v, 0.5 * in.inj->value);
        rep.derivation.push_back("inj/2 = " + num(0.5 * in.inj->value));
    } else {
        rep.warnings.push_back("inj(M) unknown: the inj/2 term is omitted");
    }
    if (in.K && in.K->value > 0.0) {
        const double cap = kPi / (2.0 * std::sqrt(in.K->value));
        v = std::min(v, cap);
        rep.derivation.push_back("pi/(2 sqrt K) = " + num(cap));
    } else if (!in.K) {
        rep.warnings.push_back("K unknown: the pi/(2 sqrt K) term is omitted");
    }
    rep.value = v;
    rep.derivation.push_back("tau >= " + num(v));
    rep.conclusion = "xi restricted to every geodesic ball of radius below the bound is tight";
    return rep;
}

BoundReport bound_reeb_tube(const BoundInputs& in) {
    BoundReport rep;
    rep.theorem = "reeb-tube";
    rep.method = "tube";
    rep.heuristic = in.heuristic;
    require_level(in, CompatClass::Compatible, "bound_reeb_tube");
    const Quantity& ig = need(in.inj_gamma, "inj_gamma", "bound_reeb_tube");
    const AB c = geometric_constants(in, rep, "bound_reeb_tube");
    for (const char* n : {"inj_gamma", "sec_abs_max", "ric_reeb_min", "theta_prime", "A", "B"}) add_input(rep, n, *in.slot(n));
    const double ab = ab_radius(c);
    rep.value = std::min(ab, ig.value);
    rep.derivation.push_back("min{2/(sqrt(2A+B^2)+B), inj_gamma} = min{" + num(ab) + ", " + num(ig.value) + "}");
    rep.conclusion =
        "the tube of radius r below the bound about the Reeb orbit embeds in (S^1 x D^2, ker(dphi + r^2 dtheta))";
    return rep;
}

BoundReport criterion_hyperbolic(const BoundInputs& in, double tol) {
    BoundReport rep;
    rep.theorem = "hyperbolic-criterion";
    rep.method = "hyperbolic";
    rep.heuristic = in.heuristic;
    add_input(rep, "K", in.K);
    add_input(rep, "m_g", in.m_g);
    if (!in.K || !in.m_g) {
        rep.verdict = Verdict::InsufficientData;
        rep.derivation.push_back("needs K and m_g");
        return rep;
    }
    const double K = in.K->value, m = in.m_g->value;
    const double lhs = K + m * m;
    rep.derivation.push_back("K + m_g^2 = " + num(K) + " + " + num(m * m) + " = " + num(lhs) + " (tol " + num(tol) +
                             ")");
    rep.verdict = lhs <= tol ? Verdict::Holds : Verdict::Fails;
    if (!in.assert_complete)
        rep.warnings.push_back("completeness of g not asserted (--assert-complete); the verdict assumes it");
    rep.conclusion = rep.verdict == Verdict::Holds ? "xi is universally tight (for complete g)"
                                                   : "no conclusion: K <= -m_g^2 does not hold";
    return rep;
}

BoundReport criterion_quasi_geodesic(const BoundInputs& in, double tol) {
    BoundReport rep;
    rep.theorem = "quasi-geodesic-criterion";
    rep.method = "quasi-geodesic";
    rep.heuristic = in.heuristic;
    add_input(rep, "K", in.K);
    add_input(rep, "nabla_nn_max", in.nabla_nn_max);
    if (!in.K || !in.nabla_nn_max) {
        rep.verdict = Verdict::InsufficientData;
        rep.derivation.push_back("needs K and max |nabla_N N|");
        return rep;
    }
    const double K = in.K->value;
    if (!(K < -tol)) {
        rep.verdict = Verdict::Inapplicable;
        rep.derivation.push_back("needs sec <= -K0 < 0, but K = " + num(K));
        return rep;
    }
    const double root = std::sqrt(-K), nn = in.nabla_nn_max->value;
    rep.derivation.push_back("max |nabla_N N| = " + num(nn) + " vs sqrt(K0) = " + num(root) + " (tol " + num(tol) +
                             ")");
    rep.verdict = nn < root - tol ? Verdict::Holds : Verdict::Fails;
    if (!in.assert_closed)
        rep.warnings.push_back("closedness of M not asserted (--assert-closed); the verdict assumes it");
    rep.conclusion = rep.verdict == Verdict::Holds ? "xi is universally tight (for closed M)"
                                                   : "no conclusion: |nabla_N N| < sqrt(K0) does not hold";
    return rep;
}

BoundMethod parse_bound_method(const std::string& s) {
    if (s == "main") return BoundMethod::Main;
    if (s == "weak") return BoundMethod::Weak;
    if (s == "geometric") return BoundMethod::Geometric;
    if (s == "tube") return BoundMethod::Tube;
    if (s == "hyperbolic") return BoundMethod::Hyperbolic;
    if (s == "quasi-geodesic") return BoundMethod::QuasiGeodesic;
    throw ArgumentError("unknown bound method '" + s + "'");
}

const char* bound_method_name(BoundMethod m) {
    switch (m) {
        case BoundMethod::Main: return "main";
        case BoundMethod::Weak: return "weak";
        case BoundMethod::Geometric: return "geometric";
        case BoundMethod::Tube: return "tube";
        case BoundMethod::Hyperbolic: return "hyperbolic";
        case BoundMethod::QuasiGeodesic: return "quasi-geodesic";
    }
    return "?";
}

BoundInputs collect_inputs(const EvalContext& ctx, const InputRequest& req, BoundMethod method) {
    BoundInputs in;
    in.assert_complete = req.assert_complete;
    in.assert_closed = req.assert_closed;
    for (const auto& [name, v] : req.given) {
        auto* s = in.slot(name);
        if (!s) throw ArgumentError("unknown input '" + name + "'");
        *s = Quantity{v, Provenance::User, "given"};
    }
    const KnownData& k = ctx.spec().known;
    auto fill = [&](const char* name, const std::optional<double>& v, Provenance p, const std::string& note) {
        auto* s = in.slot(name);
        if (v && !*s) *s = Quantity{*v, p, note};
    };
    fill("inj", k.inj_radius, req.known_provenance, "known");
    fill("conv", k.conv_radius, req.known_provenance, "known");
    fill("K", k.sec_upper, req.known_provenance, "known");
    fill("sec_abs_max", k.sec_abs_max, req.known_provenance, "known");
    fill("ric_reeb_min", k.ric_reeb_min, req.known_provenance, "known");
    for (const auto& [name, v] : req.catalog_extra) {
        auto* s = in.slot(name);
        if (s) fill(name.c_str(), v, Provenance::Catalog, "catalog");
    }

    const std::string note = sampled_note(req.region, req.grid);
    const CompatClass cls = classify_compatibility(ctx, req.region, req.grid, req.tol, req.fd);
    in.compat = cls.level;
    in.compat_known = true;
    in.heuristic = cls.level < CompatClass::WeaklyCompatible;

    const bool geo = method == BoundMethod::Geometric || method == BoundMethod::Tube;
    if (geo && !in.theta_prime && cls.level >= CompatClass::ContactOnly)
        in.theta_prime = Quantity{cls.theta_max, Provenance::Sampled, note};

    bool want_K = method == BoundMethod::Weak || method == BoundMethod::Hyperbolic ||
                  method == BoundMethod::QuasiGeodesic || method == BoundMethod::Geometric;
    bool want_curv = (want_K && !in.K) || (geo && !in.A && !in.sec_abs_max) || (geo && !in.B && !in.ric_reeb_min);
    if (want_curv) {
        const CurvatureData c = sample_curvature(ctx, req.region, req.grid, req.fd);
        if (want_K && !in.K) in.K = c.K_upper;
        if (geo && !in.A && !in.sec_abs_max) in.sec_abs_max = c.sec_abs_max;
        if (geo && !in.B && !in.ric_reeb_min) in.ric_reeb_min = c.ric_reeb_min;
        in.notes.push_back("curvature data " + note);
    }
    if ((method == BoundMethod::Weak || method == BoundMethod::Hyperbolic) && !in.m_g &&
        cls.level >= CompatClass::ContactOnly) {
        const MgEstimate m = m_g_estimate(ctx, req.region, req.grid, req.fd);
        in.m_g = Quantity{m.m_g, Provenance::Sampled, note};
        if (m.max_discrepancy > 1e-3)
            in.notes.push_back("m_g formulas disagree by up to " + num(m.max_discrepancy));
        in.heuristic = in.heuristic || m.heuristic;
    }
    if (method == BoundMethod::QuasiGeodesic && !in.nabla_nn_max && cls.level >= CompatClass::ContactOnly) {
        const auto pts = grid_points(req.region, req.grid);
        std::vector<double> vals(pts.size());
        parallel_for(pts.size(), [&](std::size_t i) {
            const Vec3 v = nabla_n_n(ctx, pts[i], req.fd);
            vals[i] = norm(ctx.metric(pts[i]), v);
        });
        double mx = 0.0;
        for (double v : vals) mx = std::max(mx, v);
        in.nabla_nn_max = Quantity{mx, Provenance::Sampled, note};
    }
    return in;
}

BoundReport run_bound(const BoundInputs& in, BoundMethod method, double tol) {
    BoundReport rep;
    switch (method) {
        case BoundMethod::Main: rep = bound_main(in); break;
        case BoundMethod::Weak: rep = bound_weak(in); break;
        case BoundMethod::Geometric: rep = bound_geometric(in); break;
        case BoundMethod::Tube: rep = bound_reeb_tube(in); break;
        case BoundMethod::Hyperbolic: rep = criterion_hyperbolic(in, tol); break;
        case BoundMethod::QuasiGeodesic: rep = criterion_quasi_geodesic(in, tol); break;
    }
    for (const auto& n : in.notes) rep.warnings.push_back(n);
    if (in.heuristic) rep.warnings.push_back("metric is not weakly compatible on the region; n is the unit dual of alpha");
    return rep;
}

double unit_uniform(std::uint64_t bits) { return double(bits >> 11) * 0x1.0p-53; }

HessianCheck hessian_lower_check(const EvalContext& ctx, const DistanceFn& dist, const Vec3& p, double r, double K,
                                 int samples, std::uint64_t seed, const FDConfig& fd, const ODEConfig& ode) {
    HessianCheck hc;
    hc.r = r;
    hc.K = K;
    hc.ct = ct(K, r);
    hc.min_slack = kInf;
    const Mat3 E = orthonormal_frame(metric_at(ctx, p));
    std::mt19937_64 rng(seed);
    auto uniform_dir = [&rng]() {
        for (;;) {
            Vec3 u(2 * unit_uniform(rng()) - 1, 2 * unit_uniform(rng()) - 1, 2 * unit_uniform(rng()) - 1);
            const double n = u.norm();
            if (n > 1e-3 && n <= 1.0) return Vec3(u / n);
        }
    };
    // draw all randomness up front so results do not depend on scheduling
    std::vector<std::pair<Vec3, Vec3>> draws(samples);
    for (auto& d : draws) d = {uniform_dir(), uniform_dir()};
    std::vector<double> slack(samples);
    const ScalarField f = [&](const Vec3& x) { return dist(p, x); };
    parallel_for(std::size_t(samples), [&](std::size_t i) {
        const Vec3 q = exp_map(ctx, p, r * (E * draws[i].first), fd, ode);
        const Mat3 g = metric_at(ctx, q);
        Vec3 grad = gradient(ctx, f, q, fd);
        grad /= norm(g, grad);
        Vec3 w = E * draws[i].second;
        w -= inner(g, w, grad) * grad;
        w /= norm(g, w);
        slack[i] = hessian(ctx, f, q, w, w, fd) - hc.ct;
    });
    for (double s : slack) {
        hc.min_slack = std::min(hc.min_slack, s);
        hc.max_abs_slack = std::max(hc.max_abs_slack, std::fabs(s));
    }
    hc.samples = std::size_t(samples);
    return hc;
}

}  // namespace contactlab
