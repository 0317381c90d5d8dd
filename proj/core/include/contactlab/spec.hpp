#pragma once

#include <array>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "contactlab/expr.hpp"

namespace contactlab {

struct KnownData {
    std::optional<double> inj_radius;   // +inf allowed
    std::optional<double> conv_radius;  // +inf allowed
    std::optional<double> sec_upper;
    std::optional<double> sec_abs_max;
    std::optional<double> ric_reeb_min;
};

struct ManifoldSpec {
    std::string name;
    std::array<std::string, 3> coords;
    std::vector<std::string> domain_src;
    std::map<std::string, double> constants;
    std::array<std::array<std::string, 3>, 3> metric_src;  // upper triangle authoritative
    std::array<std::string, 3> alpha_src;
    KnownData known;

    // Parsed with constants substituted and folded.
    std::vector<Expr> domain;
    std::array<std::array<Expr, 3>, 3> metric;
    std::array<Expr, 3> alpha;
};

// Parses and validates a JSON spec document. When check_orientation is set
// the contact orientation is probed on a small sample grid.
ManifoldSpec load_spec(std::string_view doc, bool check_orientation = true);
std::string dump_spec(const ManifoldSpec& spec);
std::string spec_hash(const ManifoldSpec& spec);

}  // namespace contactlab
