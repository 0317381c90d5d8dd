#include "contactlab/catalog.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <json.hpp>

#include "contactlab/errors.hpp"

namespace contactlab {

namespace {

using ojson = nlohmann::ordered_json;
constexpr double kPi = std::numbers::pi;

ojson diag_metric(const std::string& d) {
    return ojson::array({ojson::array({d, "0", "0"}), ojson::array({"", d, "0"}), ojson::array({"", "", d})});
}

ojson doc(const std::string& name, std::vector<std::string> coords, std::vector<std::string> domain, ojson constants,
          ojson metric, std::vector<std::string> alpha, ojson known) {
    ojson j;
    j["name"] = name;
    j["coords"] = coords;
    j["domain"] = domain;
    j["constants"] = constants.is_null() ? ojson::object() : constants;
    j["metric"] = metric;
    j["alpha"] = alpha;
    j["known"] = known.is_null() ? ojson::object() : known;
    return j;
}

RefValue exact(double v) { return {v, "exact", ""}; }
RefValue derived(double v) { return {v, "derived", ""}; }
RefValue reported(double v) { return {v, "reported", ""}; }
RefValue verdict(const std::string& t) { return {0.0, "exact", t}; }

Region box(double x0, double x1, double y0, double y1, double z0, double z1) { return {{x0, y0, z0}, {x1, y1, z1}}; }

double euclid(const Vec3& a, const Vec3& b) { return (a - b).norm(); }

double hyperbolic(const Vec3& a, const Vec3& b) {
    const Vec3 d = a - b;
    return std::acosh(1.0 + d.squaredNorm() / (2.0 * a.z() * b.z()));
}

Vec4 s3_ambient_a(const Vec3& u) {
    const double s = u.squaredNorm();
    return Vec4(2 * u.x(), 2 * u.y(), 2 * u.z(), s - 1) / (1 + s);
}

Vec4 s3_ambient_b(const Vec3& u) {
    const double s = u.squaredNorm();
    return Vec4(2 * u.y(), 2 * u.x(), 2 * u.z(), 1 - s) / (1 + s);
}

std::function<double(const Vec3&, const Vec3&)> sphere_distance(Vec4 (*amb)(const Vec3&)) {
    return [amb](const Vec3& a, const Vec3& b) {
        return std::acos(std::clamp(amb(a).dot(amb(b)), -1.0, 1.0));
    };
}

double constant(const std::map<std::string, double>& over, const std::string& k, double def) {
    auto it = over.find(k);
    return it == over.end() ? def : it->second;
}

CatalogEntry build(const std::string& name, const std::map<std::string, double>& over) {
    CatalogEntry e;
    e.name = name;
    ojson j;
    if (name == "t3-flat") {
        const double k = constant(over, "k", 2.0);
        j = doc(name, {"x", "y", "z"}, {}, {{"k", k}}, diag_metric("1"), {"cos(k*z)", "-sin(k*z)", "0"},
                {{"inj_radius", kPi}, {"sec_upper", 0}, {"sec_abs_max", 0}, {"ric_reeb_min", 0}});
        e.description = "flat 3-torus of side 2pi with the rotating forms alpha_k";
        e.reference = {{"theta_prime", exact(k)},       {"rho", exact(1)},
                       {"m_g", exact(0)},               {"h_norm", derived(k / 2)},
                       {"A", exact(0)},                 {"B", exact(k)},
                       {"bound_geometric", exact(std::min(kPi / 2, 2.0 / (2 * k)))},
                       {"bound_main", exact(kPi)},      {"criterion_hyperbolic", verdict("holds")}};
        e.region = box(0, 2 * kPi, 0, 2 * kPi, 0, kPi);
        e.grid = {{6, 6, 6}};
        e.distance = euclid;
    } else if (name == "h3-upper-half") {
        const double k = constant(over, "k", 1.0);
        j = doc(name, {"x", "y", "z"}, {"z"}, {{"k", k}}, diag_metric("1/z^2"), {"cos(k*z)", "-sin(k*z)", "0"},
                {{"inj_radius", "infinity"},
                 {"conv_radius", "infinity"},
                 {"sec_upper", -1},
                 {"sec_abs_max", 1}});
        e.description = "upper half-space model of hyperbolic space with alpha_k";
        e.reference = {{"m_g", exact(1)}, {"sec", exact(-1)}, {"criterion_hyperbolic", verdict("holds")},
                       {"criterion_quasi_geodesic", verdict("fails")}};
        e.region = box(-1, 1, -1, 1, 0.5, 4);
        e.grid = {{20, 20, 20}};
        e.distance = hyperbolic;
    } else if (name == "h3-curl") {
        const double k = constant(over, "k", 1.0);
        j = doc(name, {"x", "y", "z"}, {"z"}, {{"k", k}}, diag_metric("1/z^2"),
                {"cos(k*ln(z))", "-sin(k*ln(z))", "0"},
                {{"inj_radius", "infinity"},
                 {"conv_radius", "infinity"},
                 {"sec_upper", -1},
                 {"sec_abs_max", 1}});
        e.description = "curl eigenfield on hyperbolic space with constant rotation speed k";
        e.reference = {{"theta_prime", exact(k)}, {"m_g", derived(1)}, {"sec", exact(-1)}};
        e.region = box(-1, 1, -1, 1, 0.5, 4);
        e.grid = {{10, 10, 10}};
        e.distance = hyperbolic;
    } else if (name == "r-x-h2") {
        ojson metric = ojson::array(
            {ojson::array({"1", "0", "0"}), ojson::array({"", "1/y^2", "0"}), ojson::array({"", "", "1/y^2"})});
        j = doc(name, {"t", "x", "y"}, {"y"}, nullptr, metric, {"y^0.5", "y^(-0.5)", "0"},
                {{"inj_radius", "infinity"}, {"conv_radius", "infinity"}, {"sec_upper", 0}, {"sec_abs_max", 1}});
        e.description = "product of a line with the hyperbolic plane, beta = y^(1/2) dt + y^(-1/2) dx";
        e.reference = {{"theta_prime", exact(0.5)},     {"rho_at_y1", exact(1 / std::sqrt(2.0))},
                       {"m_g", exact(0.5)},             {"bound_weak", exact(2.0)},
                       {"criterion_hyperbolic", verdict("fails")}};
        e.region = box(-1, 1, -1, 1, 0.5, 2);
        e.grid = {{6, 6, 8}};
    } else if (name == "r3-bessel-ot") {
        j = doc(name, {"x", "y", "z"}, {}, nullptr, diag_metric("1"),
                {"-y*besselJ1(sqrt(x^2+y^2+1e-300))/sqrt(x^2+y^2+1e-300)",
                 "x*besselJ1(sqrt(x^2+y^2+1e-300))/sqrt(x^2+y^2+1e-300)", "besselJ0(sqrt(x^2+y^2+1e-300))"},
                {{"inj_radius", "infinity"},
                 {"conv_radius", "infinity"},
                 {"sec_upper", 0},
                 {"sec_abs_max", 0},
                 {"ric_reeb_min", 0}});
        e.description = "Euclidean space with the overtwisted Bessel form J0 dz + (J1(r)/r)(x dy - y dx)";
        e.reference = {{"delta_at_1", derived(0.779173)},
                       {"weak_bound", reported(0.15)},
                       {"first_closed_leaf", derived(3.8317)}};
        e.region = box(-5, 5, -5, 5, -1, 1);
        e.grid = {{21, 21, 3}};
        e.distance = euclid;
    } else if (name == "s3-round" || name == "s3-round-b") {
        const bool b = name == "s3-round-b";
        const std::string s = "(1+x^2+y^2+z^2)";
        const std::string d = "4/" + s + "^2";
        std::vector<std::string> alpha =
            b ? std::vector<std::string>{"-4*(x*z-y)/" + s + "^2", "-4*(x+y*z)/" + s + "^2",
                                         "2*(x^2+y^2-z^2-1)/" + s + "^2"}
              : std::vector<std::string>{"4*(x*z-y)/" + s + "^2", "4*(x+y*z)/" + s + "^2",
                                         "-2*(x^2+y^2-z^2-1)/" + s + "^2"};
        j = doc(name, {"x", "y", "z"}, {}, nullptr, diag_metric(d), alpha,
                {{"inj_radius", kPi}, {"sec_upper", 1}, {"sec_abs_max", 1}, {"ric_reeb_min", 2}});
        e.description = b ? "round unit 3-sphere, stereographic chart from (0,0,0,-1) with the first two "
                            "coordinates swapped"
                          : "round unit 3-sphere, stereographic chart from (0,0,0,1)";
        e.reference = {{"theta_prime", exact(2)},       {"h_norm", exact(0)},
                       {"A", exact(0)},                 {"B", exact(1)},
                       {"bound_main", exact(kPi / 2)},  {"bound_geometric", exact(1)},
                       {"sec", exact(1)}};
        e.inputs = {{"A", 0.0}};  // the disks are totally geodesic
        e.region = box(-0.5, 0.5, -0.5, 0.5, -0.5, 0.5);
        e.grid = {{5, 5, 5}};
        e.ambient = b ? s3_ambient_b : s3_ambient_a;
        e.distance = sphere_distance(b ? s3_ambient_b : s3_ambient_a);
    } else if (name == "r3-sasakian") {
        ojson metric = ojson::array({ojson::array({"y^2/4+1/4", "0", "-y/4"}), ojson::array({"", "1/4", "0"}),
                                     ojson::array({"", "", "1/4"})});
        j = doc(name, {"x", "y", "z"}, {}, nullptr, metric, {"-y/2", "0", "1/2"},
                {{"sec_upper", 1}, {"sec_abs_max", 3}, {"ric_reeb_min", 2}});
        e.description = "Heisenberg Sasakian metric alpha^2 + (dx^2 + dy^2)/4 with alpha = (dz - y dx)/2";
        e.reference = {{"theta_prime", exact(2)},     {"sec_reeb_plane", exact(1)}, {"sec_xi_plane", exact(-3)},
                       {"A", exact(4)},               {"B", exact(1)},              {"bound_geometric", exact(0.5)}};
        e.region = box(-1, 1, -1, 1, -1, 1);
        e.grid = {{5, 5, 5}};
    } else if (name == "r3-flat-darboux") {
        ojson metric = ojson::array({ojson::array({"(1+y^2+z^2)/4", "z/4", "-y/4"}),
                                     ojson::array({"", "1/4", "0"}), ojson::array({"", "", "1/4"})});
        j = doc(name, {"x", "y", "z"}, {}, nullptr, metric, {"-y/2", "0", "1/2"},
                {{"inj_radius", "infinity"},
                 {"conv_radius", "infinity"},
                 {"sec_upper", 0},
                 {"sec_abs_max", 0},
                 {"ric_reeb_min", 0}});
        e.description = "flat metric in Darboux coordinates, pulled back from the flat compatible example";
        e.reference = {{"theta_prime", exact(2)},   {"sec_reeb_plane", exact(0)}, {"sec_xi_plane", exact(0)},
                       {"A", exact(0)},             {"B", exact(2)},              {"bound_geometric", exact(0.5)}};
        e.region = box(-1, 1, -1, 1, -1, 1);
        e.grid = {{5, 5, 5}};
    } else {
        throw UnknownEntry("no catalog entry named '" + name + "'");
    }
    e.document = j.dump(2);
    e.spec = load_spec(e.document);
    return e;
}

}  // namespace

std::vector<std::string> catalog_list() {
    return {"t3-flat", "h3-upper-half", "h3-curl",     "r-x-h2",         "r3-bessel-ot",
            "s3-round", "s3-round-b",   "r3-sasakian", "r3-flat-darboux"};
}

CatalogEntry catalog_get(const std::string& name, const std::map<std::string, double>& constants) {
    return build(name, constants);
}

std::string catalog_export(const std::string& name, const std::map<std::string, double>& constants) {
    return dump_spec(build(name, constants).spec);
}

}  // namespace contactlab
