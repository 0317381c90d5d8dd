#include "contactlab/contact.hpp"

#include <cmath>

#include "contactlab/errors.hpp"

namespace contactlab {

namespace {

VectorField alpha_field(const EvalContext& ctx) {
    return [&ctx](const Vec3& q) { return ctx.alpha(q); };
}

Vec3 reeb_w(const Mat3& F) { return Vec3(F(1, 2), F(2, 0), F(0, 1)); }

Vec3 raw_reeb(const EvalContext& ctx, const Vec3& q, const FDConfig& fd) {
    const Vec3 w = reeb_w(d_oneform(alpha_field(ctx), q, fd));
    const double aw = ctx.alpha(q).dot(w);
    if (std::fabs(aw) < 1e-10) throw NotContactPoint("alpha ^ d(alpha) vanishes at the evaluation point");
    return w / aw;
}

double raw_theta(const EvalContext& ctx, const Vec3& q, const FDConfig& fd) {
    const Vec3 a = ctx.alpha(q);
    const Vec3 w = reeb_w(d_oneform(alpha_field(ctx), q, fd));
    const double aw = a.dot(w);
    if (std::fabs(aw) < 1e-10) throw NotContactPoint("alpha ^ d(alpha) vanishes at the evaluation point");
    const Mat3 g = ctx.metric(q);
    return aw / (a.dot(g.inverse() * a) * std::sqrt(g.determinant()));
}

double raw_rho(const EvalContext& ctx, const Vec3& q, const FDConfig& fd) {
    return norm(ctx.metric(q), raw_reeb(ctx, q, fd));
}

double raw_defect(const EvalContext& ctx, const Vec3& q, const FDConfig& fd) {
    const Mat3 g = ctx.metric(q);
    const Vec3 R = raw_reeb(ctx, q, fd);
    const Vec3 n = dual_normal(ctx, q);
    return norm(g, R - inner(g, R, n) * n) / norm(g, R);
}

NormalMode raw_mode(const EvalContext& ctx, const Vec3& q, const FDConfig& fd, double weak_tol) {
    return raw_defect(ctx, q, fd) < weak_tol ? NormalMode::Reeb : NormalMode::Dual;
}

void require_xi(const EvalContext& ctx, const Vec3& p, const Vec3& u) {
    const Mat3 g = ctx.metric(p);
    const Vec3 a = ctx.alpha(p);
    const double an = std::sqrt(a.dot(g.inverse() * a));
    if (std::fabs(a.dot(u)) > 1e-8 * an * std::max(norm(g, u), 1e-300))
        throw NotInXi("vector is not tangent to the contact plane");
}

// ξ-tangent extension of u ∈ ξ_p as a vector field near p.
VectorField extension(const EvalContext& ctx, const Vec3& p, const Vec3& u, const FDConfig& fd, Extension ext) {
    if (ext == Extension::FrozenProjection) {
        return [&ctx, u](const Vec3& q) {
            const Mat3 g = ctx.metric(q);
            const Vec3 n = dual_normal(ctx, q);
            return Vec3(u - inner(g, u, n) * n);
        };
    }
    const Mat3 gp = ctx.metric(p);
    const Vec3 Rp = raw_reeb(ctx, p, fd);
    const Vec3 ap = ctx.alpha(p);
    // pivot: the two coordinate fields with the largest projected norms
    double nrm[3];
    for (int k = 0; k < 3; ++k) nrm[k] = norm(gp, Vec3::Unit(k) - ap[k] * Rp);
    int drop = 0;
    for (int k = 1; k < 3; ++k)
        if (nrm[k] < nrm[drop]) drop = k;
    int ia = (drop + 1) % 3, ib = (drop + 2) % 3;
    if (nrm[ib] > nrm[ia]) std::swap(ia, ib);
    auto frame = [&ctx, ia, ib, fd](const Vec3& q) {
        const Mat3 g = ctx.metric(q);
        const Vec3 R = raw_reeb(ctx, q, fd);
        const Vec3 a = ctx.alpha(q);
        Vec3 f1 = Vec3::Unit(ia) - a[ia] * R;
        f1 /= norm(g, f1);
        Vec3 f2 = Vec3::Unit(ib) - a[ib] * R;
        f2 -= inner(g, f2, f1) * f1;
        f2 /= norm(g, f2);
        return std::pair<Vec3, Vec3>{f1, f2};
    };
    auto [f1, f2] = frame(p);
    const double c1 = inner(gp, u, f1), c2 = inner(gp, u, f2);
    return [frame, c1, c2](const Vec3& q) {
        auto [e1, e2] = frame(q);
        return Vec3(c1 * e1 + c2 * e2);
    };
}

double raw_sff(const EvalContext& ctx, const Vec3& p, const Vec3& u, const Vec3& v, const FDConfig& fd,
               Extension ext) {
    const Mat3 g = ctx.metric(p);
    const Vec3 n = dual_normal(ctx, p);
    const VectorField U = extension(ctx, p, u, fd, ext);
    const VectorField V = extension(ctx, p, v, fd, ext);
    const Vec3 s = cov_deriv(ctx, u, V, p, fd) + cov_deriv(ctx, v, U, p, fd);
    return 0.5 * inner(g, s, n);
}

double raw_mean(const EvalContext& ctx, const Vec3& p, const FDConfig& fd) {
    const FrameXi f = xi_frame(ctx, p);
    return 0.5 * (raw_sff(ctx, p, f.u, f.u, fd, Extension::ProjectedCoordinate) +
                  raw_sff(ctx, p, f.v, f.v, fd, Extension::ProjectedCoordinate));
}

Vec3 raw_nabla_nn(const EvalContext& ctx, const Vec3& p, const FDConfig& fd, NormalMode mode) {
    const VectorField n = [&ctx, fd, mode](const Vec3& q) { return unit_normal(ctx, q, fd, mode); };
    return cov_deriv(ctx, n(p), n, p, fd);
}

Vec3 raw_grad_ln_rho(const EvalContext& ctx, const Vec3& p, const FDConfig& fd) {
    return gradient(ctx, [&](const Vec3& q) { return std::log(raw_rho(ctx, q, fd)); }, p, fd);
}

Vec3 raw_grad_ln_theta(const EvalContext& ctx, const Vec3& p, const FDConfig& fd) {
    return gradient(ctx, [&](const Vec3& q) { return std::log(raw_theta(ctx, q, fd)); }, p, fd);
}

Vec3 raw_h_apply(const EvalContext& ctx, const Vec3& p, const Vec3& v, const FDConfig& fd) {
    const VectorField R = [&ctx, fd](const Vec3& q) { return raw_reeb(ctx, q, fd); };
    const VectorField phiV = [&ctx, v](const Vec3& q) { return phi(ctx, q, v); };
    const Vec3 lie = lie_bracket(R, phiV, p, fd);
    const Vec3 dR = directional(R, p, v, fd);
    return 0.5 * (lie + phi(ctx, p, dR));
}

}  // namespace

Mat3 dalpha(const EvalContext& ctx, const Vec3& p, const FDConfig& fd) {
    ctx.check_fd(p, fd);
    return d_oneform(alpha_field(ctx), p, fd);
}

double contact_coefficient(const EvalContext& ctx, const Vec3& p, const FDConfig& fd) {
    return ctx.alpha(p).dot(reeb_w(dalpha(ctx, p, fd)));
}

Vec3 reeb_field(const EvalContext& ctx, const Vec3& p, const FDConfig& fd) {
    ctx.check_fd(p, fd);
    return raw_reeb(ctx, p, fd);
}

double theta_prime(const EvalContext& ctx, const Vec3& p, const FDConfig& fd) {
    ctx.check_fd(p, fd);
    metric_at(ctx, p);
    return raw_theta(ctx, p, fd);
}

double weak_compat_defect(const EvalContext& ctx, const Vec3& p, const FDConfig& fd) {
    ctx.check_fd(p, fd);
    metric_at(ctx, p);
    return raw_defect(ctx, p, fd);
}

NormalMode normal_mode(const EvalContext& ctx, const Vec3& p, const FDConfig& fd, double weak_tol) {
    ctx.check_fd(p, fd);
    return raw_mode(ctx, p, fd, weak_tol);
}

ContactPointData contact_point(const EvalContext& ctx, const Vec3& p, const FDConfig& fd, double weak_tol) {
    ctx.check_fd(p, fd);
    const Mat3 g = metric_at(ctx, p);
    ContactPointData d;
    d.R_alpha = raw_reeb(ctx, p, fd);
    d.rho = norm(g, d.R_alpha);
    d.theta_prime = raw_theta(ctx, p, fd);
    const Vec3 a = ctx.alpha(p);
    d.rho_alpha = std::sqrt(a.dot(g.inverse() * a));
    d.defect = raw_defect(ctx, p, fd);
    d.heuristic = !(d.defect < weak_tol);
    d.n = d.heuristic ? dual_normal(ctx, p) : Vec3(d.R_alpha / d.rho);
    return d;
}

Vec3 dual_normal(const EvalContext& ctx, const Vec3& q) {
    const Mat3 gi = ctx.metric(q).inverse();
    const Vec3 a = ctx.alpha(q);
    const Vec3 s = gi * a;
    return s / std::sqrt(a.dot(s));
}

Vec3 unit_normal(const EvalContext& ctx, const Vec3& q, const FDConfig& fd, NormalMode mode) {
    if (mode == NormalMode::Dual) return dual_normal(ctx, q);
    const Vec3 R = raw_reeb(ctx, q, fd);
    return R / norm(ctx.metric(q), R);
}

double rho(const EvalContext& ctx, const Vec3& q, const FDConfig& fd) {
    ctx.check_fd(q, fd);
    return raw_rho(ctx, q, fd);
}

FrameXi xi_frame(const EvalContext& ctx, const Vec3& p) {
    const Mat3 g = ctx.metric(p);
    FrameXi f;
    f.n = dual_normal(ctx, p);
    int best = 0;
    double best_r = -1.0;
    for (int k = 0; k < 3; ++k) {
        const Vec3 e = Vec3::Unit(k);
        const double r = norm(g, e - inner(g, e, f.n) * f.n) / norm(g, e);
        if (r > best_r + 1e-12) {
            best_r = r;
            best = k;
        }
    }
    const Vec3 e = Vec3::Unit(best);
    f.u = e - inner(g, e, f.n) * f.n;
    f.u /= norm(g, f.u);
    f.v = cross(g, f.n, f.u);
    return f;
}

Vec3 phi(const EvalContext& ctx, const Vec3& p, const Vec3& v) {
    return cross(ctx.metric(p), dual_normal(ctx, p), v);
}

double second_fundamental_form(const EvalContext& ctx, const Vec3& p, const Vec3& u, const Vec3& v,
                               const FDConfig& fd, Extension ext) {
    ctx.check_fd(p, fd);
    metric_at(ctx, p);
    require_xi(ctx, p, u);
    require_xi(ctx, p, v);
    return raw_sff(ctx, p, u, v, fd, ext);
}

double mean_curvature(const EvalContext& ctx, const Vec3& p, const FDConfig& fd) {
    ctx.check_fd(p, fd);
    metric_at(ctx, p);
    return raw_mean(ctx, p, fd);
}

double mean_curvature_div(const EvalContext& ctx, const Vec3& p, const FDConfig& fd) {
    ctx.check_fd(p, fd);
    const Mat3 g = metric_at(ctx, p);
    double div = 0.0;
    for (int i = 0; i < 3; ++i) {
        div += fd_partial(
            [&](const Vec3& q) { return std::sqrt(ctx.metric(q).determinant()) * dual_normal(ctx, q)[i]; }, p, i,
            fd);
    }
    return -0.5 * div / std::sqrt(g.determinant());
}

double extrinsic_curvature(const EvalContext& ctx, const Vec3& p, const FDConfig& fd) {
    ctx.check_fd(p, fd);
    metric_at(ctx, p);
    const FrameXi f = xi_frame(ctx, p);
    const double a = raw_sff(ctx, p, f.u, f.u, fd, Extension::ProjectedCoordinate);
    const double b = raw_sff(ctx, p, f.u, f.v, fd, Extension::ProjectedCoordinate);
    const double c = raw_sff(ctx, p, f.v, f.v, fd, Extension::ProjectedCoordinate);
    return a * c - b * b;
}

Vec3 nabla_n_n(const EvalContext& ctx, const Vec3& p, const FDConfig& fd, bool* heuristic) {
    ctx.check_fd(p, fd);
    metric_at(ctx, p);
    const NormalMode mode = raw_mode(ctx, p, fd, kWeakTol);
    if (heuristic) *heuristic = mode == NormalMode::Dual;
    return raw_nabla_nn(ctx, p, fd, mode);
}

Vec3 h_apply(const EvalContext& ctx, const Vec3& p, const Vec3& v, const FDConfig& fd) {
    ctx.check_fd(p, fd);
    metric_at(ctx, p);
    return raw_h_apply(ctx, p, v, fd);
}

HEndomorphism h_endomorphism(const EvalContext& ctx, const Vec3& p, const FDConfig& fd) {
    ctx.check_fd(p, fd);
    const Mat3 g = metric_at(ctx, p);
    HEndomorphism h;
    h.frame = xi_frame(ctx, p);
    h.heuristic = !(raw_defect(ctx, p, fd) < 1e-4);
    const Vec3 f[2] = {h.frame.u, h.frame.v};
    for (int b = 0; b < 2; ++b) {
        const Vec3 hv = raw_h_apply(ctx, p, f[b], fd);
        for (int a = 0; a < 2; ++a) h.m(a, b) = inner(g, hv, f[a]);
    }
    h.norm = std::sqrt(0.5 * h.m.squaredNorm());
    return h;
}

Vec3 grad_ln_rho(const EvalContext& ctx, const Vec3& p, const FDConfig& fd) {
    ctx.check_fd(p, fd);
    return raw_grad_ln_rho(ctx, p, fd);
}

Vec3 grad_ln_theta(const EvalContext& ctx, const Vec3& p, const FDConfig& fd) {
    ctx.check_fd(p, fd);
    return raw_grad_ln_theta(ctx, p, fd);
}

MgPoint m_g_point(const EvalContext& ctx, const Vec3& p, const FDConfig& fd) {
    ctx.check_fd(p, fd);
    const Mat3 g = metric_at(ctx, p);
    const NormalMode mode = raw_mode(ctx, p, fd, kWeakTol);
    const Vec3 n = unit_normal(ctx, p, fd, mode);
    const Vec3 a = raw_grad_ln_rho(ctx, p, fd);
    const Vec3 b = raw_grad_ln_theta(ctx, p, fd);
    MgPoint r;
    r.heuristic = mode == NormalMode::Dual;
    r.formula1 = norm(g, a - inner(g, b, n) * n);
    const Vec3 nn = raw_nabla_nn(ctx, p, fd, mode);
    const double H = raw_mean(ctx, p, fd);
    r.formula2 = std::sqrt(inner(g, nn, nn) + 4.0 * H * H);
    return r;
}

MgEstimate m_g_estimate(const EvalContext& ctx, const Region& region, const Grid& grid, const FDConfig& fd) {
    const auto pts = grid_points(region, grid);
    std::vector<MgPoint> vals(pts.size());
    parallel_for(pts.size(), [&](std::size_t i) { vals[i] = m_g_point(ctx, pts[i], fd); });
    MgEstimate est;
    est.region = region;
    est.grid = grid;
    est.by_formula1 = -1.0;
    for (std::size_t i = 0; i < pts.size(); ++i) {
        if (vals[i].formula1 > est.by_formula1) {
            est.by_formula1 = vals[i].formula1;
            est.argmax = pts[i];
        }
        est.by_formula2 = std::max(est.by_formula2, vals[i].formula2);
        est.max_discrepancy = std::max(est.max_discrepancy, std::fabs(vals[i].formula1 - vals[i].formula2));
        est.heuristic = est.heuristic || vals[i].heuristic;
    }
    est.m_g = est.by_formula1;
    return est;
}

const char* compat_name(CompatClass::Level level) {
    switch (level) {
        case CompatClass::NotContact: return "NotContact";
        case CompatClass::ContactOnly: return "ContactOnly";
        case CompatClass::WeaklyCompatible: return "WeaklyCompatible";
        case CompatClass::Compatible: return "Compatible";
        case CompatClass::StronglyCompatible: return "StronglyCompatible";
    }
    return "?";
}

CompatClass classify_compatibility(const EvalContext& ctx, const Region& region, const Grid& grid, double tol,
                                   const FDConfig& fd) {
    struct Sample {
        bool contact = false;
        double defect = 0, rho = 0, theta = 0;
    };
    const auto pts = grid_points(region, grid);
    std::vector<Sample> s(pts.size());
    parallel_for(pts.size(), [&](std::size_t i) {
        try {
            const ContactPointData d = contact_point(ctx, pts[i], fd);
            s[i] = {d.theta_prime > 0, d.defect, d.rho, d.theta_prime};
        } catch (const NotContactPoint&) {
            s[i].contact = false;
        }
    });
    CompatClass c;
    c.tol = tol;
    c.region = region;
    c.grid = grid;
    c.points = pts.size();
    c.theta_min = kInf;
    c.theta_max = -kInf;
    bool contact = !pts.empty();
    for (const auto& x : s) {
        if (!x.contact) {
            contact = false;
            continue;
        }
        c.max_defect = std::max(c.max_defect, x.defect);
        c.max_rho_deviation = std::max(c.max_rho_deviation, std::fabs(x.rho - 1.0));
        c.theta_min = std::min(c.theta_min, x.theta);
        c.theta_max = std::max(c.theta_max, x.theta);
    }
    if (!contact) {
        c.level = CompatClass::NotContact;
        c.detail = "alpha ^ d(alpha) is not positive at every sampled point";
        return c;
    }
    c.theta_spread = (c.theta_max - c.theta_min) / c.theta_max;
    c.level = CompatClass::ContactOnly;
    if (c.max_defect < tol) {
        c.level = CompatClass::WeaklyCompatible;
        if (c.max_rho_deviation < tol && c.theta_spread < tol) {
            c.level = CompatClass::Compatible;
            if (std::fabs(c.theta_max - 1.0) < tol && std::fabs(c.theta_min - 1.0) < tol)
                c.level = CompatClass::StronglyCompatible;
        }
    }
    return c;
}

double residual_hodge(const EvalContext& ctx, const Vec3& p, const FDConfig& fd) {
    const Mat3 F = dalpha(ctx, p, fd);
    const Vec3 s = hodge_star_2form(ctx, F, p);
    const Vec3 d = s - raw_theta(ctx, p, fd) * ctx.alpha(p);
    return std::sqrt(d.dot(ctx.metric(p).inverse() * d));
}

double residual_mean_curvature(const EvalContext& ctx, const Vec3& p, const FDConfig& fd) {
    ctx.check_fd(p, fd);
    metric_at(ctx, p);
    const NormalMode mode = raw_mode(ctx, p, fd, kWeakTol);
    const Vec3 n = unit_normal(ctx, p, fd, mode);
    const double dn = fd_directional(
        [&](const Vec3& q) { return std::log(raw_rho(ctx, q, fd) / raw_theta(ctx, q, fd)); }, p, n, fd);
    return std::fabs(raw_mean(ctx, p, fd) + 0.5 * dn);
}

double residual_nabla_n_n(const EvalContext& ctx, const Vec3& p, const FDConfig& fd) {
    ctx.check_fd(p, fd);
    const Mat3 g = metric_at(ctx, p);
    const NormalMode mode = raw_mode(ctx, p, fd, kWeakTol);
    const Vec3 n = unit_normal(ctx, p, fd, mode);
    const Vec3 x = raw_grad_ln_rho(ctx, p, fd);
    const Vec3 x_xi = x - inner(g, x, n) * n;
    return norm(g, raw_nabla_nn(ctx, p, fd, mode) + x_xi);
}

double residual_m_g(const EvalContext& ctx, const Vec3& p, const FDConfig& fd) {
    const MgPoint m = m_g_point(ctx, p, fd);
    return std::fabs(m.formula1 - m.formula2);
}

double residual_ricci_xi(const EvalContext& ctx, const Vec3& p, const FDConfig& fd) {
    ctx.check_fd(p, fd);
    const Mat3 g = metric_at(ctx, p);
    const Vec3 R = raw_reeb(ctx, p, fd);
    const double ric = ricci_dir(riemann(ctx, p, fd), g, R);
    const double th = raw_theta(ctx, p, fd);
    const HEndomorphism h = h_endomorphism(ctx, p, fd);
    return std::fabs(0.5 * ric - 0.25 * th * th + h.norm * h.norm);
}

}  // namespace contactlab
