#include "contactlab/spec.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <set>

#include <json.hpp>

#include "contactlab/context.hpp"
#include "contactlab/errors.hpp"

namespace contactlab {

namespace {

using nlohmann::json;
using nlohmann::ordered_json;

bool is_identifier(const std::string& s) {
    if (s.empty() || !(std::isalpha(static_cast<unsigned char>(s[0])) || s[0] == '_')) return false;
    for (char c : s)
        if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_')) return false;
    Func f;
    return !lookup_func(s, f);
}

const json& require(const json& j, const char* key) {
    auto it = j.find(key);
    if (it == j.end()) throw SchemaError(std::string("missing field '") + key + "'");
    return *it;
}

std::string as_string(const json& j, const std::string& where) {
    if (!j.is_string()) throw SchemaError(where + " must be a string");
    return j.get<std::string>();
}

double radius_value(const json& j, const char* key) {
    if (j.is_string() && j.get<std::string>() == "infinity") return kInf;
    if (!j.is_number()) throw SchemaError(std::string("known.") + key + " must be a number or \"infinity\"");
    const double v = j.get<double>();
    if (!(v > 0)) throw SchemaError(std::string("known.") + key + " must be positive");
    return v;
}

Expr parse_checked(const std::string& src, const ManifoldSpec& spec, const std::string& where) {
    Expr e = substitute(parse_expr(src), spec.constants);
    for (const auto& v : free_vars(e)) {
        if (v != spec.coords[0] && v != spec.coords[1] && v != spec.coords[2])
            throw SchemaError(where + ": unknown identifier '" + v + "'");
    }
    return e;
}

}  // namespace

ManifoldSpec load_spec(std::string_view doc, bool check_orientation) {
    json j;
    try {
        j = json::parse(doc);
    } catch (const json::parse_error& e) {
        throw SchemaError(std::string("invalid JSON: ") + e.what());
    }
    if (!j.is_object()) throw SchemaError("spec document must be a JSON object");
    static const std::set<std::string> allowed{"name", "coords", "domain", "constants",
                                               "metric", "alpha", "known"};
    for (auto it = j.begin(); it != j.end(); ++it)
        if (!allowed.count(it.key())) throw SchemaError("unknown field '" + it.key() + "'");

    ManifoldSpec s;
    s.name = as_string(require(j, "name"), "name");

    const json& coords = require(j, "coords");
    if (!coords.is_array() || coords.size() != 3) throw SchemaError("coords must list exactly 3 identifiers");
    for (int i = 0; i < 3; ++i) {
        s.coords[i] = as_string(coords[i], "coords");
        if (!is_identifier(s.coords[i])) throw SchemaError("coords: '" + s.coords[i] + "' is not an identifier");
    }
    if (s.coords[0] == s.coords[1] || s.coords[0] == s.coords[2] || s.coords[1] == s.coords[2])
        throw SchemaError("coords must be pairwise distinct");

    if (j.contains("constants")) {
        const json& c = j["constants"];
        if (!c.is_object()) throw SchemaError("constants must be an object");
        for (auto it = c.begin(); it != c.end(); ++it) {
            if (!is_identifier(it.key())) throw SchemaError("constant '" + it.key() + "' is not an identifier");
            if (it.key() == s.coords[0] || it.key() == s.coords[1] || it.key() == s.coords[2])
                throw SchemaError("constant '" + it.key() + "' shadows a coordinate");
            if (!it.value().is_number()) throw SchemaError("constant '" + it.key() + "' must be a number");
            s.constants[it.key()] = it.value().get<double>();
        }
    }

    if (j.contains("domain")) {
        const json& d = j["domain"];
        if (!d.is_array()) throw SchemaError("domain must be an array of strings");
        for (const auto& e : d) s.domain_src.push_back(as_string(e, "domain entry"));
    }
    for (const auto& src : s.domain_src) s.domain.push_back(parse_checked(src, s, "domain"));

    const json& m = require(j, "metric");
    if (!m.is_array() || m.size() != 3) throw SchemaError("metric must be a 3x3 array");
    for (int r = 0; r < 3; ++r) {
        if (!m[r].is_array() || m[r].size() != 3) throw SchemaError("metric must be a 3x3 array");
        for (int c = 0; c < 3; ++c) s.metric_src[r][c] = as_string(m[r][c], "metric entry");
    }
    for (int r = 0; r < 3; ++r) {
        for (int c = 0; c < r; ++c) {
            const std::string& lower = s.metric_src[r][c];
            if (!lower.empty() && lower != s.metric_src[c][r])
                throw SchemaError("metric is not declared symmetric at (" + std::to_string(r) + "," +
                                  std::to_string(c) + ")");
            s.metric_src[r][c] = s.metric_src[c][r];
        }
    }
    for (int r = 0; r < 3; ++r) {
        for (int c = r; c < 3; ++c) {
            if (s.metric_src[r][c].empty()) throw SchemaError("empty upper-triangle metric entry");
            s.metric[r][c] = parse_checked(s.metric_src[r][c], s, "metric");
            s.metric[c][r] = s.metric[r][c];
        }
    }

    const json& a = require(j, "alpha");
    if (!a.is_array() || a.size() != 3) throw SchemaError("alpha must list exactly 3 components");
    for (int i = 0; i < 3; ++i) {
        s.alpha_src[i] = as_string(a[i], "alpha entry");
        s.alpha[i] = parse_checked(s.alpha_src[i], s, "alpha");
    }

    if (j.contains("known")) {
        const json& k = j["known"];
        if (!k.is_object()) throw SchemaError("known must be an object");
        for (auto it = k.begin(); it != k.end(); ++it) {
            const std::string& key = it.key();
            if (key == "inj_radius") {
                s.known.inj_radius = radius_value(it.value(), "inj_radius");
            } else if (key == "conv_radius") {
                s.known.conv_radius = radius_value(it.value(), "conv_radius");
            } else if (key == "sec_upper" || key == "sec_abs_max" || key == "ric_reeb_min") {
                if (!it.value().is_number()) throw SchemaError("known." + key + " must be a number");
                const double v = it.value().get<double>();
                if (key == "sec_upper") s.known.sec_upper = v;
                if (key == "sec_abs_max") {
                    if (v < 0) throw SchemaError("known.sec_abs_max must be >= 0");
                    s.known.sec_abs_max = v;
                }
                if (key == "ric_reeb_min") s.known.ric_reeb_min = v;
            } else {
                throw SchemaError("unknown field 'known." + key + "'");
            }
        }
    }

    if (check_orientation) probe_orientation(s);
    return s;
}

std::string dump_spec(const ManifoldSpec& s) {
    ordered_json j;
    j["name"] = s.name;
    j["coords"] = {s.coords[0], s.coords[1], s.coords[2]};
    j["domain"] = s.domain_src;
    ordered_json c = ordered_json::object();
    for (const auto& [k, v] : s.constants) c[k] = v;
    j["constants"] = c;
    ordered_json m = ordered_json::array();
    for (int r = 0; r < 3; ++r) {
        ordered_json row = ordered_json::array();
        for (int col = 0; col < 3; ++col) row.push_back(col < r ? std::string() : s.metric_src[r][col]);
        m.push_back(row);
    }
    j["metric"] = m;
    j["alpha"] = {s.alpha_src[0], s.alpha_src[1], s.alpha_src[2]};
    ordered_json k = ordered_json::object();
    auto radius = [](double v) { return std::isinf(v) ? ordered_json("infinity") : ordered_json(v); };
    if (s.known.inj_radius) k["inj_radius"] = radius(*s.known.inj_radius);
    if (s.known.conv_radius) k["conv_radius"] = radius(*s.known.conv_radius);
    if (s.known.sec_upper) k["sec_upper"] = *s.known.sec_upper;
    if (s.known.sec_abs_max) k["sec_abs_max"] = *s.known.sec_abs_max;
    if (s.known.ric_reeb_min) k["ric_reeb_min"] = *s.known.ric_reeb_min;
    j["known"] = k;
    return j.dump(2) + "\n";
}

std::string spec_hash(const ManifoldSpec& s) {
    const std::string text = dump_spec(s);
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char ch : text) {
        h ^= ch;
        h *= 1099511628211ull;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

}  // namespace contactlab
