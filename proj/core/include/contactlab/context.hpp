#pragma once

#include <memory>

#include "contactlab/spec.hpp"
#include "contactlab/types.hpp"

namespace contactlab {

struct FDConfig {
    enum class Scheme { Central2, Central4 };
    double h = 1e-4;
    Scheme scheme = Scheme::Central4;
    bool richardson = false;
};

// Compiled metric/alpha/domain expressions of one spec; the gateway for all
// pointwise evaluation. Immutable and safe to share across threads.
class EvalContext {
public:
    explicit EvalContext(ManifoldSpec spec);

    const ManifoldSpec& spec() const { return *spec_; }

    bool in_domain(const Vec3& p) const;
    void require_domain(const Vec3& p) const;
    // Conservative distance estimate to the domain boundary in chart units.
    double boundary_distance(const Vec3& p) const;
    // Throws FDStepError unless fd.h is below a quarter of the boundary distance.
    void check_fd(const Vec3& p, const FDConfig& fd) const;

    // Raw evaluations without domain or SPD checks (hot path).
    Mat3 metric(const Vec3& p) const;
    Vec3 alpha(const Vec3& p) const;

    bool constant_metric() const { return constant_metric_; }

private:
    std::shared_ptr<const ManifoldSpec> spec_;
    std::array<Program, 6> g_;
    std::array<Program, 3> a_;
    std::vector<Program> dom_;
    bool constant_metric_ = false;
    Mat3 g_const_ = Mat3::Identity();
};

// Reject specs whose contact form is negatively oriented at some sampled
// point of the domain.
void probe_orientation(const ManifoldSpec& spec);

// Central finite-difference derivative of a T-valued function along dir
// (T: double or an Eigen type). The step is fd.h along dir/|dir|.
template <class F>
auto fd_directional(const F& f, const Vec3& p, const Vec3& dir, const FDConfig& fd) {
    const double len = dir.norm();
    using T = std::decay_t<decltype(f(p))>;
    if (len == 0.0) return T(f(p) * 0.0);
    const Vec3 d = dir / len;
    auto once = [&](double h) -> T {
        if (fd.scheme == FDConfig::Scheme::Central2) return T((f(p + h * d) - f(p - h * d)) / (2.0 * h));
        return T((f(p - 2.0 * h * d) - 8.0 * f(p - h * d) + 8.0 * f(p + h * d) - f(p + 2.0 * h * d)) /
                 (12.0 * h));
    };
    T r = once(fd.h);
    if (fd.richardson) {
        const double k = fd.scheme == FDConfig::Scheme::Central2 ? 4.0 : 16.0;
        T r2 = once(0.5 * fd.h);
        r = T((k * r2 - r) / (k - 1.0));
    }
    return T(r * len);
}

template <class F>
auto fd_partial(const F& f, const Vec3& p, int i, const FDConfig& fd) {
    return fd_directional(f, p, Vec3::Unit(i), fd);
}

}  // namespace contactlab
