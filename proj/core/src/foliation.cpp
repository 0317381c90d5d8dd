#include "contactlab/foliation.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <sstream>

#include "contactlab/errors.hpp"

namespace contactlab {

namespace {

constexpr double kPi = std::numbers::pi;

struct Local {
    SphereNode node;
    Vec3 e_phi;
    Vec3 e_psi;
    Vec3 alpha;
};

Local local_at(const EvalContext& ctx, const SphereChart& chart, const Vec3& u) {
    const auto [phi, psi] = sphere_angles(u);
    Local l;
    l.node = chart.at(phi, psi);
    l.e_phi = sphere_e_phi(phi, psi);
    l.e_psi = sphere_e_psi(psi);
    l.alpha = ctx.alpha(l.node.X);
    return l;
}

// Characteristic vector field in parameter space: with A = α(M e_φ),
// B = α(M e_ψ), V = B e_φ − A e_ψ satisfies ι_V(area) = α|_S.
Vec3 field(const Local& l) {
    const double A = l.alpha.dot(l.node.J_phi);
    const double B = l.alpha.dot(l.node.J_psi);
    return B * l.e_phi - A * l.e_psi;
}

double ratio_at(const EvalContext& ctx, const Local& l) {
    const SphereFrame f = sphere_tangent_frame(ctx, l.node);
    const Mat3 g = ctx.metric(l.node.X);
    const double an = std::sqrt(l.alpha.dot(g.inverse() * l.alpha));
    return std::hypot(l.alpha.dot(f.e1), l.alpha.dot(f.e2)) / an;
}

double residual_at(const EvalContext& ctx, const Local& l, const Vec3& d) {
    const Vec3 T = d.dot(l.e_phi) * l.node.J_phi + d.dot(l.e_psi) * l.node.J_psi;
    const Mat3 g = ctx.metric(l.node.X);
    const double tn = norm(g, T);
    if (tn == 0.0) return 0.0;
    return std::fabs(l.alpha.dot(T)) / (tn * std::sqrt(l.alpha.dot(g.inverse() * l.alpha)));
}

double angle(const Vec3& a, const Vec3& b) { return std::atan2(a.cross(b).norm(), a.dot(b)); }

double wrap_pi(double a) {
    while (a > kPi) a -= 2 * kPi;
    while (a <= -kPi) a += 2 * kPi;
    return a;
}

class Tracer {
public:
    Tracer(const EvalContext& ctx, const SphereChart& chart, const std::vector<Singularity>& sing,
           const FoliationConfig& cfg)
        : ctx_(ctx), chart_(chart), sing_(sing), cfg_(cfg) {
        h_ = foliation_step(chart, cfg);
        ball_ = cfg.ball_cells * kPi / chart.n_phi;
    }

    Vec3 dir(const Vec3& u) const {
        const Vec3 v = field(local_at(ctx_, chart_, u));
        const double n = v.norm();
        return n > 0 ? Vec3(v / n) : Vec3::Zero();
    }

    bool in_ball(const Vec3& u) const {
        for (const auto& s : sing_)
            if (angle(u, s.u) < ball_) return true;
        return false;
    }

    // One RK4 step with up to four halvings; false when still stiff.
    bool step(Vec3& u) const {
        const Vec3 d0 = dir(u);
        double h = h_;
        for (int refine = 0; refine <= 4; ++refine, h *= 0.5) {
            const Vec3 k1 = d0;
            const Vec3 k2 = dir((u + 0.5 * h * k1).normalized());
            const Vec3 k3 = dir((u + 0.5 * h * k2).normalized());
            const Vec3 k4 = dir((u + h * k3).normalized());
            const Vec3 un = (u + h / 6.0 * (k1 + 2 * k2 + 2 * k3 + k4)).normalized();
            const Vec3 d1 = dir(un);
            if (d0.dot(d1) >= 0.0) {
                u = un;
                return true;
            }
        }
        return false;
    }

    double residual(const Vec3& u) const {
        const Local l = local_at(ctx_, chart_, u);
        const Vec3 v = field(l);
        const double n = v.norm();
        return n > 0 ? residual_at(ctx_, l, v / n) : 0.0;
    }

    Leaf trace(const Vec3& seed) const {
        Leaf leaf;
        Vec3 u = seed.normalized();
        leaf.u.push_back(u);
        leaf.alpha_residual.push_back(residual(u));
        double length = 0.0;
        for (int s = 0; s < cfg_.max_steps; ++s) {
            if (in_ball(u)) {
                leaf.end = LeafEnd::Singularity;
                return leaf;
            }
            Vec3 un = u;
            if (!step(un)) {
                leaf.end = LeafEnd::Stiff;
                return leaf;
            }
            length += angle(u, un);
            leaf.u.push_back(un);
            leaf.alpha_residual.push_back(residual(un));
            if (length >= kPi && segment_distance(leaf.u.front(), u, un) < cfg_.closure_tol) {
                leaf.end = LeafEnd::Closed;
                return leaf;
            }
            u = un;
        }
        leaf.end = LeafEnd::LeftResolution;
        return leaf;
    }

    struct Return {
        bool ok = false;
        double phi = 0.0;
        int direction = 0;
        Leaf path;
    };

    Return first_return(double phi0, bool keep_path) const {
        Return r;
        const double psi0 = cfg_.psi0;
        Vec3 u = sphere_point(phi0, psi0);
        double phi_prev = phi0, psi_prev = psi0, unwrapped = psi0;
        if (keep_path) r.path.u.push_back(u);
        for (int s = 0; s < cfg_.max_steps; ++s) {
            if (in_ball(u)) return r;
            if (!step(u)) return r;
            const auto [phi, psi] = sphere_angles(u);
            const double d = wrap_pi(psi - psi_prev);
            const double next = unwrapped + d;
            if (keep_path) r.path.u.push_back(u);
            for (int sgn : {1, -1}) {
                const double target = psi0 + sgn * 2.0 * kPi;
                if ((sgn > 0 && next >= target) || (sgn < 0 && next <= target)) {
                    const double frac = d != 0.0 ? (target - unwrapped) / d : 1.0;
                    r.ok = true;
                    r.phi = phi_prev + frac * (phi - phi_prev);
                    r.direction = sgn;
                    r.path.end = LeafEnd::Closed;
                    return r;
                }
            }
            unwrapped = next;
            phi_prev = phi;
            psi_prev = psi;
        }
        return r;
    }

private:
    static double segment_distance(const Vec3& p, const Vec3& a, const Vec3& b) {
        const Vec3 ab = b - a;
        const double L = ab.squaredNorm();
        double t = L > 0 ? (p - a).dot(ab) / L : 0.0;
        t = std::clamp(t, 0.0, 1.0);
        return (a + t * ab - p).norm();
    }

    const EvalContext& ctx_;
    const SphereChart& chart_;
    const std::vector<Singularity>& sing_;
    FoliationConfig cfg_;
    double h_ = 0.01;
    double ball_ = 0.1;
};

// α|_S in a fixed tangent basis (a, b) at u, as a function of the offset.
Eigen::Vector2d restricted(const EvalContext& ctx, const SphereChart& chart, const Vec3& u0, const Vec3& a,
                           const Vec3& b, const Eigen::Vector2d& st) {
    const Vec3 u = (u0 + st[0] * a + st[1] * b).normalized();
    const Local l = local_at(ctx, chart, u);
    auto form = [&](const Vec3& d) {
        const Vec3 dt = d - d.dot(u) * u;
        const Vec3 T = dt.dot(l.e_phi) * l.node.J_phi + dt.dot(l.e_psi) * l.node.J_psi;
        return l.alpha.dot(T);
    };
    return Eigen::Vector2d(form(a), form(b));
}

}  // namespace

double foliation_step(const SphereChart& chart, const FoliationConfig& cfg) {
    if (cfg.step > 0) return cfg.step;
    return std::min(0.02, kPi / (4.0 * chart.n_phi));
}

const char* leaf_end_name(LeafEnd e) {
    switch (e) {
        case LeafEnd::Singularity: return "hit-singularity";
        case LeafEnd::Closed: return "closed";
        case LeafEnd::LeftResolution: return "left-resolution";
        case LeafEnd::Stiff: return "stiff";
    }
    return "?";
}

const char* tri_name(Tri t) {
    switch (t) {
        case Tri::No: return "false";
        case Tri::Yes: return "true";
        case Tri::Unknown: return "unknown";
    }
    return "?";
}

LineDirection char_line_field(const EvalContext& ctx, const SphereChart& chart, const Vec3& u,
                              const FoliationConfig& cfg) {
    const Local l = local_at(ctx, chart, u.normalized());
    LineDirection d;
    d.ratio = ratio_at(ctx, l);
    d.singular = d.ratio < cfg.sigma_tol;
    const Vec3 v = field(l);
    if (!d.singular && v.norm() > 0) d.du = v.normalized();
    return d;
}

LineDirection char_line_field(const EvalContext& ctx, const SphereChart& chart, int i, int j,
                              const FoliationConfig& cfg) {
    return char_line_field(ctx, chart, sphere_point(kPi * i / chart.n_phi, 2.0 * kPi * j / chart.n_psi), cfg);
}

std::vector<Singularity> find_singularities(const EvalContext& ctx, const SphereChart& chart,
                                            const FoliationConfig& cfg) {
    const int np = chart.n_phi, nq = chart.n_psi;
    std::vector<double> ratio(std::size_t(np + 1) * nq);
    parallel_for(ratio.size(), [&](std::size_t idx) {
        const int i = int(idx / nq), j = int(idx % nq);
        if ((i == 0 || i == np) && j != 0) return;  // poles are single points
        ratio[idx] = ratio_at(ctx, local_at(ctx, chart, sphere_point(kPi * i / np, 2.0 * kPi * j / nq)));
    });
    auto R = [&](int i, int j) {
        if (i <= 0) return ratio[0];
        if (i >= np) return ratio[std::size_t(np) * nq];
        return ratio[std::size_t(i) * nq + ((j % nq) + nq) % nq];
    };
    std::vector<std::pair<int, int>> cand;
    for (int i = 0; i <= np; ++i) {
        for (int j = 0; j < nq; ++j) {
            if ((i == 0 || i == np) && j != 0) continue;
            const double v = R(i, j);
            bool is_min = true;
            if (i == 0 || i == np) {
                const int ii = i == 0 ? 1 : np - 1;
                for (int jj = 0; jj < nq && is_min; ++jj) is_min = v <= R(ii, jj);
            } else {
                for (int di = -1; di <= 1 && is_min; ++di)
                    for (int dj = -1; dj <= 1 && is_min; ++dj)
                        if (di || dj) is_min = v <= R(i + di, j + dj);
            }
            if (is_min && v < 0.5) cand.emplace_back(i, j);
        }
    }
    std::vector<Singularity> out;
    for (auto [i, j] : cand) {
        Vec3 u = sphere_point(kPi * i / np, 2.0 * kPi * j / nq);
        // Newton on α|_S = 0 in a frozen tangent basis
        for (int it = 0; it < 30; ++it) {
            Vec3 a = std::fabs(u.x()) < 0.9 ? Vec3::UnitX() : Vec3::UnitY();
            a = (a - a.dot(u) * u).normalized();
            const Vec3 b = u.cross(a);
            const Eigen::Vector2d F = restricted(ctx, chart, u, a, b, Eigen::Vector2d::Zero());
            const double e = 1e-6;
            Eigen::Matrix2d Jm;
            for (int c = 0; c < 2; ++c) {
                Eigen::Vector2d st = Eigen::Vector2d::Zero();
                st[c] = e;
                const Eigen::Vector2d Fp = restricted(ctx, chart, u, a, b, st);
                st[c] = -e;
                const Eigen::Vector2d Fm = restricted(ctx, chart, u, a, b, st);
                Jm.col(c) = (Fp - Fm) / (2 * e);
            }
            if (std::fabs(Jm.determinant()) < 1e-300) break;
            Eigen::Vector2d d = -(Jm.inverse() * F);
            const double dn = d.norm(), cap = kPi / np;
            if (dn > cap) d *= cap / dn;
            u = (u + d[0] * a + d[1] * b).normalized();
            if (dn < 1e-13) break;
        }
        const Local l = local_at(ctx, chart, u);
        const double rt = ratio_at(ctx, l);
        if (!(rt < cfg.sigma_tol)) continue;
        bool dup = false;
        for (const auto& s : out) dup = dup || angle(s.u, u) < 0.5 * kPi / np;
        if (dup) continue;
        Singularity s;
        s.u = u;
        std::tie(s.phi, s.psi) = sphere_angles(u);
        s.X = l.node.X;
        s.ratio = rt;
        s.sign = l.alpha.dot(l.node.n_S) >= 0 ? 1 : -1;
        out.push_back(s);
    }
    return out;
}

std::vector<Vec3> meridian_seeds(int count, const FoliationConfig& cfg) {
    std::vector<Vec3> seeds;
    for (int i = 0; i < count; ++i) seeds.push_back(sphere_point(kPi * (i + 0.5) / count, cfg.psi0));
    return seeds;
}

FoliationTrace trace_foliation(const EvalContext& ctx, std::shared_ptr<const SphereChart> chart,
                               const std::vector<Vec3>& seeds, const FoliationConfig& cfg) {
    FoliationTrace tr;
    tr.chart = chart;
    tr.cfg = cfg;
    tr.coarse = chart->n_phi < cfg.min_phi || chart->n_psi < cfg.min_psi;
    if (tr.coarse)
        tr.diagnostic = "grid too coarse: " + std::to_string(chart->n_phi) + "x" + std::to_string(chart->n_psi) +
                        " is below " + std::to_string(cfg.min_phi) + "x" + std::to_string(cfg.min_psi);
    tr.singularities = find_singularities(ctx, *chart, cfg);
    const Tracer tracer(ctx, *chart, tr.singularities, cfg);
    std::vector<Vec3> kept;
    for (const auto& s : seeds)
        if (!tracer.in_ball(s.normalized())) kept.push_back(s);
    tr.leaves.resize(kept.size());
    parallel_for(kept.size(), [&](std::size_t i) { tr.leaves[i] = tracer.trace(kept[i]); });
    for (const auto& l : tr.leaves) tr.stiff = tr.stiff || l.end == LeafEnd::Stiff;
    if (tr.stiff && tr.diagnostic.empty()) tr.diagnostic = "direction field too stiff for the step on some leaf";
    return tr;
}

std::vector<ClosedLeafRecord> detect_closed_leaves(const EvalContext& ctx, const FoliationTrace& trace) {
    const SphereChart& chart = *trace.chart;
    const FoliationConfig& cfg = trace.cfg;
    const Tracer tracer(ctx, chart, trace.singularities, cfg);
    const int n = cfg.return_seeds;
    std::vector<double> phi(n);
    std::vector<Tracer::Return> ret(n);
    for (int i = 0; i < n; ++i) phi[i] = kPi * (i + 0.5) / n;
    parallel_for(std::size_t(n), [&](std::size_t i) {
        if (!tracer.in_ball(sphere_point(phi[i], cfg.psi0))) ret[i] = tracer.first_return(phi[i], false);
    });
    std::vector<ClosedLeafRecord> out;
    for (int i = 0; i + 1 < n; ++i) {
        const auto& a = ret[i];
        const auto& b = ret[i + 1];
        if (!a.ok || !b.ok || a.direction != b.direction) continue;
        double lo = phi[i], hi = phi[i + 1];
        double dlo = a.phi - lo, dhi = b.phi - hi;
        if (dlo * dhi > 0.0) continue;
        if (dhi == 0.0 && i + 2 < n) continue;  // counted in the next bracket
        bool broken = false;
        for (int it = 0; it < 60 && hi - lo > 1e-13; ++it) {
            const double mid = 0.5 * (lo + hi);
            const auto m = tracer.first_return(mid, false);
            if (!m.ok || m.direction != a.direction) {
                broken = true;
                break;
            }
            const double dm = m.phi - mid;
            if (dm == 0.0) {
                lo = hi = mid;
                break;
            }
            if ((dm < 0) == (dlo < 0)) {
                lo = mid;
                dlo = dm;
            } else {
                hi = mid;
                dhi = dm;
            }
        }
        if (broken) continue;
        const double root = 0.5 * (lo + hi);
        const auto fin = tracer.first_return(root, true);
        if (!fin.ok) continue;
        const double res = std::fabs(fin.phi - root);
        if (!(res < cfg.closure_tol)) continue;
        if (!out.empty() && std::fabs(out.back().phi - root) < 1e-9) continue;
        ClosedLeafRecord rec;
        rec.phi = root;
        rec.psi = cfg.psi0;
        rec.X = chart.at(root, cfg.psi0).X;
        rec.residual = res;
        rec.west_to_east = fin.direction > 0;
        rec.leaf = fin.path;
        out.push_back(std::move(rec));
    }
    return out;
}

SphereClass classify_sphere(const FoliationTrace& trace, const std::vector<ClosedLeafRecord>& closed) {
    SphereClass c;
    for (const auto& s : trace.singularities) (s.sign > 0 ? c.n_plus : c.n_minus)++;
    if (trace.coarse || trace.stiff) {
        c.diagnostic = trace.diagnostic;
        return c;
    }
    c.simple = c.n_plus == 1 && c.n_minus == 1 ? Tri::Yes : Tri::No;
    c.almost_horizontal = Tri::Yes;
    for (const auto& r : closed)
        if (!r.west_to_east) c.almost_horizontal = Tri::No;
    return c;
}

TauScanResult tau_scan(const EvalContext& ctx, const Vec3& center, double r_min, double r_max, int r_steps,
                       int n_phi, int n_psi, const FoliationConfig& cfg, const FDConfig& fd, const ODEConfig& ode) {
    if (!(r_min > 0.0) || !(r_max > r_min)) throw ArgumentError("tau_scan needs 0 < r_min < r_max");
    if (r_steps < 2) throw ArgumentError("tau_scan needs at least 2 radii");
    TauScanResult res;
    res.tolerance = 1e-3 * (r_max - r_min);
    auto closed_count = [&](double r) {
        auto chart = std::make_shared<const SphereChart>(sphere_chart(ctx, center, r, n_phi, n_psi, fd, ode));
        const FoliationTrace tr = trace_foliation(ctx, chart, {}, cfg);
        return detect_closed_leaves(ctx, tr).size();
    };
    double prev = r_min;
    for (int k = 0; k < r_steps; ++k) {
        const double r = r_min + (r_max - r_min) * k / (r_steps - 1);
        const std::size_t c = closed_count(r);
        res.samples.emplace_back(r, c);
        if (c == 0) {
            prev = r;
            continue;
        }
        if (k == 0) {
            res.first_closed_leaf_radius = r;
            res.tau_estimate = r;
            res.note = "closed leaves already at r_min";
            return res;
        }
        double lo = prev, hi = r;
        while (hi - lo > res.tolerance) {
            const double mid = 0.5 * (lo + hi);
            const std::size_t cm = closed_count(mid);
            res.samples.emplace_back(mid, cm);
            (cm > 0 ? hi : lo) = mid;
        }
        res.first_closed_leaf_radius = hi;
        res.tau_estimate = hi;
        return res;
    }
    res.note = "no closed leaf found in the scanned range";
    return res;
}

std::string trace_csv(const FoliationTrace& trace) {
    std::ostringstream os;
    os << "leaf_id,step,phi,psi,x,y,z,alpha_residual\n";
    char buf[256];
    for (std::size_t l = 0; l < trace.leaves.size(); ++l) {
        const Leaf& leaf = trace.leaves[l];
        for (std::size_t s = 0; s < leaf.u.size(); ++s) {
            const auto [phi, psi] = sphere_angles(leaf.u[s]);
            const Vec3 X = trace.chart->at(phi, psi).X;
            std::snprintf(buf, sizeof buf, "%zu,%zu,%.12g,%.12g,%.12g,%.12g,%.12g,%.6g\n", l, s, phi, psi, X.x(),
                          X.y(), X.z(), s < leaf.alpha_residual.size() ? leaf.alpha_residual[s] : 0.0);
            os << buf;
        }
    }
    return os.str();
}

std::string trace_svg(const FoliationTrace& trace, const std::vector<ClosedLeafRecord>& closed) {
    const double W = 720, H = 360;
    std::ostringstream os;
    char buf[128];
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H << "\" viewBox=\"0 0 "
       << W << " " << H << "\">\n";
    os << "<rect x=\"0\" y=\"0\" width=\"" << W << "\" height=\"" << H << "\" fill=\"white\" stroke=\"black\"/>\n";
    auto polyline = [&](const std::vector<Vec3>& pts, const char* color, double width) {
        std::string cur;
        double last_psi = -1;
        auto flush = [&]() {
            if (!cur.empty())
                os << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"" << width
                   << "\" points=\"" << cur << "\"/>\n";
            cur.clear();
        };
        for (const auto& u : pts) {
            const auto [phi, psi] = sphere_angles(u);
            if (last_psi >= 0 && std::fabs(psi - last_psi) > kPi) flush();
            std::snprintf(buf, sizeof buf, "%.2f,%.2f ", psi / (2 * kPi) * W, phi / kPi * H);
            cur += buf;
            last_psi = psi;
        }
        flush();
    };
    for (const auto& l : trace.leaves) polyline(l.u, "steelblue", 0.8);
    for (const auto& c : closed) polyline(c.leaf.u, "crimson", 2.0);
    for (const auto& s : trace.singularities) {
        std::snprintf(buf, sizeof buf, "%.2f", s.psi / (2 * kPi) * W);
        os << "<text x=\"" << buf;
        std::snprintf(buf, sizeof buf, "%.2f", s.phi / kPi * H + 5);
        os << "\" y=\"" << buf << "\" font-size=\"16\" text-anchor=\"middle\">" << (s.sign > 0 ? "+" : "&#8722;")
           << "</text>\n";
    }
    os << "</svg>\n";
    return os.str();
}

}  // namespace contactlab
