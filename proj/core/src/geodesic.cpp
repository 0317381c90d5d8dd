#include "contactlab/geodesic.hpp"

#include <cmath>
#include <numbers>

#include "contactlab/contact.hpp"
#include "contactlab/errors.hpp"

namespace contactlab {

namespace {

constexpr double kPi = std::numbers::pi;

// State layout: [x, ẋ, J_0, J̇_0, J_1, J̇_1, ...]
using State = std::vector<Vec3>;

void guard(const EvalContext& ctx, const Vec3& x, double t, const FDConfig& fd) {
    bool ok = x.allFinite() && ctx.in_domain(x);
    if (ok && !ctx.constant_metric()) ok = ctx.boundary_distance(x) > 4.0 * fd.h;
    if (!ok) throw LeftDomain(t, "geodesic left the domain at t = " + std::to_string(t));
}

State rhs(const EvalContext& ctx, const State& y, const FDConfig& fd) {
    State d(y.size(), Vec3::Zero());
    d[0] = y[1];
    if (ctx.constant_metric()) {
        for (std::size_t k = 2; k < y.size(); k += 2) d[k] = y[k + 1];
        return d;
    }
    const Christoffel G = christoffel_unchecked(ctx, y[0], fd);
    d[1] = -G.contract(y[1], y[1]);
    if (y.size() > 2) {
        const auto dG = christoffel_derivative_unchecked(ctx, y[0], fd);
        for (std::size_t k = 2; k < y.size(); k += 2) {
            d[k] = y[k + 1];
            Vec3 acc = -2.0 * G.contract(y[1], y[k + 1]);
            for (int m = 0; m < 3; ++m) acc -= y[k][m] * dG[m].contract(y[1], y[1]);
            d[k + 1] = acc;
        }
    }
    return d;
}

State axpy(const State& y, double a, const State& k) {
    State r(y);
    for (std::size_t i = 0; i < y.size(); ++i) r[i] += a * k[i];
    return r;
}

template <class Step>
void integrate(const EvalContext& ctx, State& y, double T, const FDConfig& fd, const ODEConfig& ode,
               GeodesicState& gs, const Step& on_step) {
    if (!(ode.h > 0)) throw NotUnitSpeed("ODE step must be positive");
    const int n = std::max(1, int(std::ceil(T / ode.h - 1e-12)));
    const double h = T / n;
    gs.speed_drift = 0.0;
    for (int s = 0; s < n; ++s) {
        const double t = s * h;
        guard(ctx, y[0], t, fd);
        const State k1 = rhs(ctx, y, fd);
        const State y2 = axpy(y, 0.5 * h, k1);
        guard(ctx, y2[0], t, fd);
        const State k2 = rhs(ctx, y2, fd);
        const State y3 = axpy(y, 0.5 * h, k2);
        guard(ctx, y3[0], t, fd);
        const State k3 = rhs(ctx, y3, fd);
        const State y4 = axpy(y, h, k3);
        guard(ctx, y4[0], t, fd);
        const State k4 = rhs(ctx, y4, fd);
        for (std::size_t i = 0; i < y.size(); ++i) y[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
        guard(ctx, y[0], t + h, fd);
        gs.position = y[0];
        gs.velocity = y[1];
        gs.t = t + h;
        gs.speed_drift = std::max(gs.speed_drift, std::fabs(norm(ctx.metric(y[0]), y[1]) - 1.0));
        on_step(y, gs);
    }
}

void require_unit(const EvalContext& ctx, const Vec3& p, const Vec3& v) {
    const double s = norm(metric_at(ctx, p), v);
    if (!(std::fabs(s - 1.0) <= 1e-10))
        throw NotUnitSpeed("initial velocity has g-norm " + std::to_string(s) + ", expected 1");
}

}  // namespace

GeodesicState shoot(const EvalContext& ctx, const Vec3& p, const Vec3& v, double T, const FDConfig& fd,
                    const ODEConfig& ode) {
    require_unit(ctx, p, v);
    GeodesicState gs{p, v, 0.0, 0.0};
    if (T <= 0.0) return gs;
    State y{p, v};
    integrate(ctx, y, T, fd, ode, gs, [](const State&, const GeodesicState&) {});
    return gs;
}

std::vector<GeodesicState> shoot_path(const EvalContext& ctx, const Vec3& p, const Vec3& v, double T,
                                      const FDConfig& fd, const ODEConfig& ode) {
    require_unit(ctx, p, v);
    std::vector<GeodesicState> path{{p, v, 0.0, 0.0}};
    if (T <= 0.0) return path;
    GeodesicState gs = path.front();
    State y{p, v};
    integrate(ctx, y, T, fd, ode, gs, [&](const State&, const GeodesicState& s) { path.push_back(s); });
    return path;
}

Vec3 exp_map(const EvalContext& ctx, const Vec3& p, const Vec3& w, const FDConfig& fd, const ODEConfig& ode) {
    const double len = norm(metric_at(ctx, p), w);
    if (len == 0.0) return p;
    return shoot(ctx, p, w / len, len, fd, ode).position;
}

JacobiRun jacobi_fields(const EvalContext& ctx, const Vec3& p, const Vec3& v, const std::vector<JacobiInit>& init,
                        double T, const FDConfig& fd, const ODEConfig& ode, const JacobiObserver& observer) {
    require_unit(ctx, p, v);
    const Christoffel G0 = ctx.constant_metric() ? Christoffel{} : christoffel(ctx, p, fd);
    State y{p, v};
    for (const auto& j : init) {
        y.push_back(j.value);
        y.push_back(j.derivative - G0.contract(v, j.value));
    }
    JacobiRun run;
    run.end = {p, v, 0.0, 0.0};
    std::vector<Vec3> J(init.size());
    if (T > 0.0) {
        integrate(ctx, y, T, fd, ode, run.end, [&](const State& s, const GeodesicState& gs) {
            if (!observer) return;
            for (std::size_t k = 0; k < init.size(); ++k) J[k] = s[2 + 2 * k];
            observer(gs, J);
        });
    }
    const Christoffel G = ctx.constant_metric() ? Christoffel{} : christoffel_unchecked(ctx, y[0], fd);
    for (std::size_t k = 0; k < init.size(); ++k) {
        run.J.push_back(y[2 + 2 * k]);
        run.DJ.push_back(y[3 + 2 * k] + G.contract(y[1], y[2 + 2 * k]));
    }
    return run;
}

Vec3 jacobi_field(const EvalContext& ctx, const Vec3& p, const Vec3& v, const Vec3& w0, const Vec3& w0p, double T,
                  const FDConfig& fd, const ODEConfig& ode) {
    return jacobi_fields(ctx, p, v, {{w0, w0p}}, T, fd, ode).J.front();
}

Vec3 sphere_point(double phi, double psi) {
    return Vec3(std::sin(phi) * std::cos(psi), std::sin(phi) * std::sin(psi), std::cos(phi));
}

Vec3 sphere_e_phi(double phi, double psi) {
    return Vec3(std::cos(phi) * std::cos(psi), std::cos(phi) * std::sin(psi), -std::sin(phi));
}

Vec3 sphere_e_psi(double psi) { return Vec3(-std::sin(psi), std::cos(psi), 0.0); }

std::pair<double, double> sphere_angles(const Vec3& u) {
    const double phi = std::atan2(std::hypot(u.x(), u.y()), u.z());
    double psi = std::atan2(u.y(), u.x());
    if (psi < 0) psi += 2.0 * kPi;
    return {phi, psi};
}

namespace {

Mat3 pole_basis(const EvalContext& ctx, const Vec3& p, const FDConfig& fd) {
    const Mat3 g = metric_at(ctx, p);
    try {
        reeb_field(ctx, p, fd);  // throws away from contact points
        const FrameXi f = xi_frame(ctx, p);
        Mat3 E;
        E.col(0) = f.u;
        E.col(1) = f.v;
        E.col(2) = f.n;
        return E;
    } catch (const NotContactPoint&) {
        return orthonormal_frame(g);
    }
}

SphereNode exact_node(const SphereChart& c, double phi, double psi) {
    SphereNode n;
    const Vec3 u = sphere_point(phi, psi);
    n.X = c.center + c.r * (c.E * u);
    n.n_S = c.E * u;
    n.J_phi = c.r * (c.E * sphere_e_phi(phi, psi));
    n.J_psi = c.r * (c.E * sphere_e_psi(psi));
    return n;
}

std::array<double, 4> catmull_rom(double t) {
    const double t2 = t * t, t3 = t2 * t;
    return {0.5 * (-t3 + 2 * t2 - t), 0.5 * (3 * t3 - 5 * t2 + 2), 0.5 * (-3 * t3 + 4 * t2 + t), 0.5 * (t3 - t2)};
}

}  // namespace

SphereNode SphereChart::extended_node(int i, int j) const {
    bool flip = false;
    if (i < 0) {
        i = -i;
        j += n_psi / 2;
        flip = true;
    } else if (i > n_phi) {
        i = 2 * n_phi - i;
        j += n_psi / 2;
        flip = true;
    }
    j = ((j % n_psi) + n_psi) % n_psi;
    SphereNode n = node(i, j);
    if (flip) {
        n.J_phi = -n.J_phi;
        n.J_psi = -n.J_psi;
    }
    return n;
}

SphereNode SphereChart::at(double phi, double psi) const {
    if (exact) return exact_node(*this, phi, psi);
    const double dphi = kPi / n_phi, dpsi = 2.0 * kPi / n_psi;
    const double fi = phi / dphi, fj = psi / dpsi;
    const int i0 = std::min(int(std::floor(fi)), n_phi - 1);
    const int j0 = int(std::floor(fj));
    const auto wi = catmull_rom(fi - i0);
    const auto wj = catmull_rom(fj - j0);
    SphereNode out;
    out.X = out.n_S = out.J_phi = out.J_psi = Vec3::Zero();
    for (int a = 0; a < 4; ++a) {
        for (int b = 0; b < 4; ++b) {
            const double w = wi[a] * wj[b];
            if (w == 0.0) continue;
            const SphereNode n = extended_node(i0 - 1 + a, j0 - 1 + b);
            out.X += w * n.X;
            out.n_S += w * n.n_S;
            out.J_phi += w * n.J_phi;
            out.J_psi += w * n.J_psi;
        }
    }
    return out;
}

SphereNode SphereChart::at(const Vec3& u) const {
    const auto [phi, psi] = sphere_angles(u);
    return at(phi, psi);
}

SphereChart sphere_chart(const EvalContext& ctx, const Vec3& p, double r, int n_phi, int n_psi, const FDConfig& fd,
                         const ODEConfig& ode) {
    if (n_phi < 2 || n_psi < 4 || n_psi % 2 != 0)
        throw ArgumentError("sphere grid needs n_phi >= 2 and an even n_psi >= 4");
    if (!(r > 0)) throw ArgumentError("sphere radius must be positive");
    SphereChart c;
    c.center = p;
    c.r = r;
    c.n_phi = n_phi;
    c.n_psi = n_psi;
    c.E = pole_basis(ctx, p, fd);
    c.exact = ctx.constant_metric();
    c.nodes.resize(std::size_t(n_phi + 1) * n_psi);
    parallel_for(c.nodes.size(), [&](std::size_t idx) {
        const int i = int(idx / n_psi), j = int(idx % n_psi);
        const double phi = kPi * i / n_phi, psi = 2.0 * kPi * j / n_psi;
        if (c.exact) {
            c.nodes[idx] = exact_node(c, phi, psi);
            guard(ctx, c.nodes[idx].X, r, fd);
            return;
        }
        const Vec3 v = c.E * sphere_point(phi, psi);
        const JacobiRun run = jacobi_fields(
            ctx, p, v, {{Vec3::Zero(), c.E * sphere_e_phi(phi, psi)}, {Vec3::Zero(), c.E * sphere_e_psi(psi)}}, r,
            fd, ode);
        c.nodes[idx] = {run.end.position, run.end.velocity, run.J[0], run.J[1]};
    });
    return c;
}

SphereFrame sphere_tangent_frame(const EvalContext& ctx, const SphereNode& node) {
    const Mat3 g = ctx.metric(node.X);
    SphereFrame f;
    f.n_S = node.n_S / norm(g, node.n_S);
    // project out the normal so the frame is tangent even after interpolation
    Vec3 a = node.J_phi - inner(g, node.J_phi, f.n_S) * f.n_S;
    Vec3 b = node.J_psi - inner(g, node.J_psi, f.n_S) * f.n_S;
    f.e1 = a / norm(g, a);
    b -= inner(g, b, f.e1) * f.e1;
    f.e2 = b / norm(g, b);
    return f;
}

SphereFrame sphere_tangent_frame(const EvalContext& ctx, const SphereChart& chart, int i, int j) {
    return sphere_tangent_frame(ctx, chart.node(i, j));
}

MarginResult transversality_margin(const EvalContext& ctx, const TubeSpec& tube, int n_s, int n_theta,
                                   const FDConfig& fd, const ODEConfig& ode) {
    MarginResult res;
    res.argmin = tube.base;
    if (tube.r <= 0.0) return res;
    if (n_s < 1 || n_theta < 1) throw ArgumentError("tube grid must be non-empty");
    const Mat3 g0 = metric_at(ctx, tube.base);
    const Vec3 R0 = reeb_field(ctx, tube.base, fd);
    const Vec3 z0 = R0 / norm(g0, R0);

    struct Sample {
        double margin = 1.0;
        Vec3 where = Vec3::Zero();
        std::size_t count = 0;
    };
    std::vector<Sample> out(std::size_t(n_s) * n_theta);
    parallel_for(out.size(), [&](std::size_t idx) {
        const int i = int(idx / n_theta), j = int(idx % n_theta);
        const double s = n_s == 1 ? tube.s0 : tube.s0 + (tube.s1 - tube.s0) * i / (n_s - 1);
        GeodesicState zs{tube.base, z0, 0.0, 0.0};
        if (s > 0) zs = shoot(ctx, tube.base, z0, s, fd, ode);
        else if (s < 0) {
            zs = shoot(ctx, tube.base, -z0, -s, fd, ode);
            zs.velocity = -zs.velocity;
        }
        const Vec3 x = zs.position;
        const Mat3 g = metric_at(ctx, x);
        const Vec3 zeta = zs.velocity / norm(g, zs.velocity);
        // orthonormal pair spanning the plane normal to ζ'
        Vec3 a = Vec3::Unit(0);
        double best = -1;
        for (int k = 0; k < 3; ++k) {
            const Vec3 e = Vec3::Unit(k);
            const double q = norm(g, e - inner(g, e, zeta) * zeta) / norm(g, e);
            if (q > best + 1e-12) {
                best = q;
                a = e;
            }
        }
        a -= inner(g, a, zeta) * zeta;
        a /= norm(g, a);
        const Vec3 b = cross(g, zeta, a);
        const double th = 2.0 * kPi * j / n_theta;
        const Vec3 v = std::cos(th) * a + std::sin(th) * b;
        const Vec3 Rx = reeb_field(ctx, x, fd);
        const double ref = inner(g, Rx, Rx / norm(g, Rx));
        Sample smp;
        smp.where = x;
        jacobi_fields(ctx, x, v, {{Vec3::Zero(), cross(g, zeta, v)}}, tube.r, fd, ode,
                      [&](const GeodesicState& gs, const std::vector<Vec3>& J) {
                          const Mat3 gq = ctx.metric(gs.position);
                          Vec3 e = cross(gq, gs.velocity, J[0]);
                          e /= norm(gq, e);
                          const Vec3 R = reeb_field(ctx, gs.position, fd);
                          const double m = 1.0 - std::fabs(inner(gq, R, e) - ref);
                          ++smp.count;
                          if (m < smp.margin) {
                              smp.margin = m;
                              smp.where = gs.position;
                          }
                      });
        out[idx] = smp;
    });
    for (const auto& s : out) {
        res.samples += s.count;
        if (s.margin < res.margin) {
            res.margin = s.margin;
            res.argmin = s.where;
        }
    }
    return res;
}

}  // namespace contactlab
