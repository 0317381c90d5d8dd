#include "contactlab/bessel.hpp"

#include <cmath>
#include <numbers>
#include <utility>

namespace contactlab {
namespace {

// Power series; only used for |x| <= 1 where all terms are tiny after the first.
std::pair<double, double> series(double x) {
    const double q = 0.25 * x * x;
    double t0 = 1.0, s0 = 1.0;
    double t1 = 0.5 * x, s1 = t1;
    for (int m = 1; m < 30; ++m) {
        t0 *= -q / (double(m) * m);
        t1 *= -q / (double(m) * (m + 1));
        s0 += t0;
        s1 += t1;
        if (std::fabs(t0) < 1e-18 && std::fabs(t1) < 1e-18) break;
    }
    return {s0, s1};
}

// Miller's backward recurrence normalised by J0 + 2 sum J_2k = 1.
std::pair<double, double> miller(double x) {
    int n = 2 * static_cast<int>((x + 30.0 + 6.0 * std::cbrt(x)) / 2.0);
    const double inv = 2.0 / x;
    double jp = 0.0, j = 1e-30, norm = 0.0;
    double j0 = 0.0, j1 = 0.0;
    for (int k = n; k > 0; --k) {
        const double jm = k * inv * j - jp;
        jp = j;
        j = jm;
        if (std::fabs(j) > 1e250) {
            j *= 1e-250;
            jp *= 1e-250;
            norm *= 1e-250;
            j1 *= 1e-250;
        }
        // j now holds J_{k-1}
        if (k - 1 == 1) j1 = j;
        if ((k - 1) % 2 == 0 && k - 1 > 0) norm += 2.0 * j;
    }
    j0 = j;
    norm += j0;
    return {j0 / norm, j1 / norm};
}

// Hankel asymptotic expansion, accurate to machine precision for x > 60.
std::pair<double, double> asymptotic(double x) {
    auto pq = [x](double mu) {
        double p = 1.0, q = 0.0, term = 1.0;
        const double z8 = 8.0 * x;
        for (int k = 1; k < 30; ++k) {
            const double f = (mu - (2.0 * k - 1) * (2.0 * k - 1)) / (k * z8);
            term *= f;
            if (k % 2 == 1) {
                q += ((k / 2) % 2 == 0 ? 1.0 : -1.0) * term;
            } else {
                p += ((k / 2) % 2 == 0 ? 1.0 : -1.0) * term;
            }
            if (std::fabs(term) < 1e-17) break;
        }
        return std::pair{p, q};
    };
    const double amp = std::sqrt(2.0 / (std::numbers::pi * x));
    auto [p0, q0] = pq(0.0);
    auto [p1, q1] = pq(4.0);
    const double w0 = x - 0.25 * std::numbers::pi;
    const double w1 = x - 0.75 * std::numbers::pi;
    return {amp * (p0 * std::cos(w0) - q0 * std::sin(w0)),
            amp * (p1 * std::cos(w1) - q1 * std::sin(w1))};
}

std::pair<double, double> j01(double ax) {
    if (ax <= 1.0) return series(ax);
    if (ax <= 60.0) return miller(ax);
    return asymptotic(ax);
}

}  // namespace

double bessel_j0(double x) { return j01(std::fabs(x)).first; }

double bessel_j1(double x) {
    const double v = j01(std::fabs(x)).second;
    return x < 0 ? -v : v;
}

}  // namespace contactlab
