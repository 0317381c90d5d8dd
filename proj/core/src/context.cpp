#include "contactlab/context.hpp"

#include <cmath>

#include "contactlab/errors.hpp"

namespace contactlab {

namespace {
constexpr int kSym[3][3] = {{0, 1, 2}, {1, 3, 4}, {2, 4, 5}};
}

EvalContext::EvalContext(ManifoldSpec spec) : spec_(std::make_shared<const ManifoldSpec>(std::move(spec))) {
    const std::vector<std::string> vars(spec_->coords.begin(), spec_->coords.end());
    constant_metric_ = true;
    for (int r = 0; r < 3; ++r) {
        for (int c = r; c < 3; ++c) {
            Program& p = g_[kSym[r][c]];
            p = Program(spec_->metric[r][c], vars);
            if (p.is_constant()) {
                g_const_(r, c) = g_const_(c, r) = p.constant_value();
            } else {
                constant_metric_ = false;
            }
        }
    }
    for (int i = 0; i < 3; ++i) a_[i] = Program(spec_->alpha[i], vars);
    for (const auto& d : spec_->domain) dom_.emplace_back(d, vars);
}

bool EvalContext::in_domain(const Vec3& p) const {
    for (const auto& d : dom_) {
        try {
            if (!(d(p.data()) > 0.0)) return false;
        } catch (const DomainError&) {
            return false;
        }
    }
    return true;
}

void EvalContext::require_domain(const Vec3& p) const {
    for (std::size_t i = 0; i < dom_.size(); ++i) {
        bool ok = false;
        try {
            ok = dom_[i](p.data()) > 0.0;
        } catch (const DomainError&) {
        }
        if (!ok)
            throw DomainViolation("point (" + std::to_string(p[0]) + ", " + std::to_string(p[1]) + ", " +
                                  std::to_string(p[2]) + ") violates domain constraint '" +
                                  spec_->domain_src[i] + " > 0'");
    }
}

double EvalContext::boundary_distance(const Vec3& p) const {
    double best = kInf;
    for (const auto& d : dom_) {
        try {
            const double v = d(p.data());
            if (v <= 0.0) return 0.0;
            const double s = 1e-6 * std::max(1.0, p.norm());
            Vec3 grad;
            for (int i = 0; i < 3; ++i) {
                Vec3 a = p, b = p;
                a[i] += s;
                b[i] -= s;
                grad[i] = (d(a.data()) - d(b.data())) / (2 * s);
            }
            const double gn = grad.norm();
            if (gn > 0) best = std::min(best, v / gn);
        } catch (const DomainError&) {
            return 0.0;
        }
    }
    return best;
}

void EvalContext::check_fd(const Vec3& p, const FDConfig& fd) const {
    if (!(fd.h > 0)) throw FDStepError("finite-difference step must be positive");
    require_domain(p);
    const double dist = boundary_distance(p);
    if (!(fd.h < dist / 4.0))
        throw FDStepError("finite-difference step " + std::to_string(fd.h) +
                          " too large for distance " + std::to_string(dist) + " to the domain boundary");
}

Mat3 EvalContext::metric(const Vec3& p) const {
    if (constant_metric_) return g_const_;
    Mat3 g;
    for (int r = 0; r < 3; ++r)
        for (int c = r; c < 3; ++c) g(r, c) = g(c, r) = g_[kSym[r][c]](p.data());
    return g;
}

Vec3 EvalContext::alpha(const Vec3& p) const {
    return Vec3(a_[0](p.data()), a_[1](p.data()), a_[2](p.data()));
}

void probe_orientation(const ManifoldSpec& spec) {
    EvalContext ctx(spec);
    FDConfig fd;
    const double vals[] = {-1.0, -0.35, 0.3, 0.95, 1.7};
    for (double x : vals) {
        for (double y : vals) {
            for (double z : vals) {
                const Vec3 p(x, y, z);
                if (!ctx.in_domain(p) || ctx.boundary_distance(p) < 8 * fd.h) continue;
                double coef = 0.0;
                try {
                    Mat3 F;
                    Mat3 da;
                    for (int i = 0; i < 3; ++i)
                        da.col(i) = fd_partial([&](const Vec3& q) { return ctx.alpha(q); }, p, i, fd);
                    // da(j, i) = d_i alpha_j
                    F = da.transpose() - da;
                    const Vec3 w(F(1, 2), F(2, 0), F(0, 1));
                    coef = ctx.alpha(p).dot(w);
                } catch (const DomainError&) {
                    continue;
                }
                if (coef < -1e-10)
                    throw OrientationError("negative contact orientation; reorder coordinates or negate alpha");
            }
        }
    }
}

}  // namespace contactlab
