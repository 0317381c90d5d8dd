#include "contactlab/types.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <exception>
#include <mutex>
#include <sstream>
#include <thread>

#include "contactlab/errors.hpp"

namespace contactlab {

namespace {

std::atomic<int> g_threads{0};

double to_double(const std::string& s, const std::string& what) {
    double v = 0.0;
    const char* b = s.data();
    const char* e = s.data() + s.size();
    while (b < e && *b == ' ') ++b;
    if (b < e && *b == '+') ++b;
    auto r = std::from_chars(b, e, v);
    if (r.ec != std::errc() || r.ptr != e) throw ArgumentError("cannot parse " + what + " '" + s + "'");
    return v;
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : s) {
        if (c == sep) {
            out.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    out.push_back(cur);
    return out;
}

std::string num(double v) {
    std::ostringstream os;
    os.precision(17);
    os << v;
    return os.str();
}

}  // namespace

Region parse_region(const std::string& s) {
    auto parts = split(s, ',');
    if (parts.size() != 3) throw ArgumentError("region must be x0:x1,y0:y1,z0:z1");
    Region r;
    for (int i = 0; i < 3; ++i) {
        auto ab = split(parts[i], ':');
        if (ab.size() == 1) ab.push_back(ab[0]);
        if (ab.size() != 2) throw ArgumentError("region axis must be lo:hi");
        r.lo[i] = to_double(ab[0], "region bound");
        r.hi[i] = to_double(ab[1], "region bound");
        if (r.hi[i] < r.lo[i]) throw ArgumentError("region axis with hi < lo");
    }
    return r;
}

Grid parse_grid(const std::string& s) {
    auto parts = split(s, 'x');
    Grid g;
    if (parts.size() == 1) parts = {parts[0], parts[0], parts[0]};
    if (parts.size() != 3) throw ArgumentError("grid must be N or NxNxN");
    for (int i = 0; i < 3; ++i) {
        const double v = to_double(parts[i], "grid size");
        if (v < 1 || v != static_cast<int>(v)) throw ArgumentError("grid sizes must be positive integers");
        g.n[i] = static_cast<int>(v);
    }
    return g;
}

Vec3 parse_point(const std::string& s) {
    auto parts = split(s, ',');
    if (parts.size() != 3) throw ArgumentError("point must be x,y,z");
    return Vec3(to_double(parts[0], "coordinate"), to_double(parts[1], "coordinate"),
                to_double(parts[2], "coordinate"));
}

std::string format_region(const Region& r) {
    std::string out;
    for (int i = 0; i < 3; ++i) {
        if (i) out += ',';
        out += num(r.lo[i]) + ":" + num(r.hi[i]);
    }
    return out;
}

std::string format_grid(const Grid& g) {
    return std::to_string(g.n[0]) + "x" + std::to_string(g.n[1]) + "x" + std::to_string(g.n[2]);
}

std::vector<Vec3> grid_points(const Region& r, const Grid& g) {
    auto coord = [&](int axis, int i) {
        if (g.n[axis] == 1) return 0.5 * (r.lo[axis] + r.hi[axis]);
        return r.lo[axis] + (r.hi[axis] - r.lo[axis]) * i / (g.n[axis] - 1);
    };
    std::vector<Vec3> pts;
    pts.reserve(g.size());
    for (int i = 0; i < g.n[0]; ++i)
        for (int j = 0; j < g.n[1]; ++j)
            for (int k = 0; k < g.n[2]; ++k) pts.emplace_back(coord(0, i), coord(1, j), coord(2, k));
    return pts;
}

void set_max_threads(int n) { g_threads = std::max(0, n); }

int max_threads() {
    const int n = g_threads.load();
    if (n > 0) return n;
    return std::max(1u, std::thread::hardware_concurrency());
}

void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body) {
    const std::size_t workers = std::min<std::size_t>(max_threads(), n);
    if (workers <= 1) {
        for (std::size_t i = 0; i < n; ++i) body(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::mutex mu;
    std::size_t failed_at = n;
    std::exception_ptr failure;
    auto run = [&] {
        for (;;) {
            const std::size_t i = next++;
            if (i >= n) return;
            try {
                body(i);
            } catch (...) {
                std::lock_guard<std::mutex> lock(mu);
                // keep the lowest failing index so errors are reproducible
                if (i < failed_at) {
                    failed_at = i;
                    failure = std::current_exception();
                }
            }
        }
    };
    std::vector<std::thread> pool;
    for (std::size_t t = 1; t < workers; ++t) pool.emplace_back(run);
    run();
    for (auto& t : pool) t.join();
    if (failure) std::rethrow_exception(failure);
}

}  // namespace contactlab
