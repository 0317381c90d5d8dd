#pragma once

#include <Eigen/Dense>
#include <array>
#include <cstddef>
#include <functional>
#include <limits>
#include <string>
#include <vector>

namespace contactlab {

using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;
using Vec4 = Eigen::Vector4d;
using Mat4 = Eigen::Matrix4d;

using ScalarField = std::function<double(const Vec3&)>;
using VectorField = std::function<Vec3(const Vec3&)>;

inline constexpr double kInf = std::numeric_limits<double>::infinity();

// Axis-aligned box in chart coordinates.
struct Region {
    std::array<double, 3> lo{0, 0, 0};
    std::array<double, 3> hi{0, 0, 0};
};

struct Grid {
    std::array<int, 3> n{1, 1, 1};
    std::size_t size() const { return std::size_t(n[0]) * n[1] * n[2]; }
};

Region parse_region(const std::string& s);  // "x0:x1,y0:y1,z0:z1"
Grid parse_grid(const std::string& s);      // "N" or "NxNxN"
Vec3 parse_point(const std::string& s);     // "x,y,z"
std::string format_region(const Region& r);
std::string format_grid(const Grid& g);

// Points in lexicographic (i, j, k) order with inclusive endpoints;
// a single sample along an axis sits at the midpoint.
std::vector<Vec3> grid_points(const Region& r, const Grid& g);

// Worker cap for grid sweeps. Results never depend on it.
void set_max_threads(int n);
int max_threads();
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace contactlab
