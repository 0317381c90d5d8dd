#include "contactlab/report.hpp"

#include <cmath>

namespace contactlab {

Json json_number(double v) {
    if (std::isinf(v)) return v > 0 ? "infinity" : "-infinity";
    if (std::isnan(v)) return nullptr;
    return v;
}

Json measured(double v, const char* provenance) {
    return Json{{"value", json_number(v)}, {"provenance", provenance}};
}

Json to_json(const Vec3& v) { return Json::array({v.x(), v.y(), v.z()}); }

Json to_json(const Region& r) { return format_region(r); }

Json to_json(const Grid& g) { return format_grid(g); }

Json to_json(const Quantity& q) {
    Json j{{"value", json_number(q.value)}, {"provenance", provenance_name(q.provenance)}};
    if (!q.note.empty()) j["note"] = q.note;
    return j;
}

Json to_json(const BoundReport& r) {
    Json j;
    j["theorem"] = r.theorem;
    j["method"] = r.method;
    Json in = Json::object();
    for (const auto& [k, q] : r.inputs) in[k] = to_json(q);
    j["inputs"] = in;
    if (r.value) j["value"] = json_number(*r.value);
    if (r.verdict != Verdict::None) j["verdict"] = verdict_name(r.verdict);
    j["derivation"] = r.derivation;
    j["conclusion"] = r.conclusion;
    j["heuristic"] = r.heuristic;
    j["warnings"] = r.warnings;
    return j;
}

Json to_json(const CompatClass& c) {
    Json j;
    j["class"] = compat_name(c.level);
    j["tol"] = c.tol;
    j["max_defect"] = measured(c.max_defect);
    j["max_rho_deviation"] = measured(c.max_rho_deviation);
    j["theta_prime_min"] = measured(c.theta_min);
    j["theta_prime_max"] = measured(c.theta_max);
    j["theta_prime_spread"] = measured(c.theta_spread);
    j["points"] = c.points;
    j["region"] = to_json(c.region);
    j["grid"] = to_json(c.grid);
    if (!c.detail.empty()) j["detail"] = c.detail;
    return j;
}

Json to_json(const MgEstimate& m) {
    Json j;
    j["m_g"] = measured(m.m_g);
    j["by_formula1"] = measured(m.by_formula1);
    j["by_formula2"] = measured(m.by_formula2);
    j["max_discrepancy"] = measured(m.max_discrepancy);
    j["argmax"] = to_json(m.argmax);
    j["heuristic"] = m.heuristic;
    j["region"] = to_json(m.region);
    j["grid"] = to_json(m.grid);
    return j;
}

Json to_json(const ContactPointData& d) {
    Json j;
    j["R_alpha"] = to_json(d.R_alpha);
    j["rho"] = measured(d.rho);
    j["n"] = to_json(d.n);
    j["theta_prime"] = measured(d.theta_prime);
    j["rho_alpha"] = measured(d.rho_alpha);
    j["defect"] = measured(d.defect);
    j["heuristic"] = d.heuristic;
    return j;
}

Json to_json(const HEndomorphism& h) {
    Json j;
    j["matrix"] = Json::array({Json::array({h.m(0, 0), h.m(0, 1)}), Json::array({h.m(1, 0), h.m(1, 1)})});
    j["norm"] = measured(h.norm);
    j["heuristic"] = h.heuristic;
    return j;
}

Json to_json(const Singularity& s) {
    return Json{{"phi", s.phi}, {"psi", s.psi}, {"point", to_json(s.X)}, {"sign", s.sign}, {"ratio", s.ratio}};
}

Json to_json(const ClosedLeafRecord& r) {
    return Json{{"phi", r.phi},
                {"psi", r.psi},
                {"point", to_json(r.X)},
                {"residual", r.residual},
                {"orientation", r.west_to_east ? "west-to-east" : "east-to-west"}};
}

Json to_json(const SphereClass& c) {
    Json j{{"simple", tri_name(c.simple)},
           {"almost_horizontal", tri_name(c.almost_horizontal)},
           {"positive_singularities", c.n_plus},
           {"negative_singularities", c.n_minus}};
    if (!c.diagnostic.empty()) j["diagnostic"] = c.diagnostic;
    return j;
}

Json to_json(const TauScanResult& t) {
    Json j;
    j["tau_estimate"] = t.tau_estimate ? measured(*t.tau_estimate) : Json(nullptr);
    j["first_closed_leaf_radius"] = t.first_closed_leaf_radius ? measured(*t.first_closed_leaf_radius) : Json(nullptr);
    j["tolerance"] = t.tolerance;
    Json s = Json::array();
    for (const auto& [r, c] : t.samples) s.push_back(Json{{"r", r}, {"closed_leaves", c}});
    j["samples"] = s;
    if (!t.note.empty()) j["note"] = t.note;
    return j;
}

Json to_json(const HessianCheck& h) {
    return Json{{"r", h.r},
                {"K", h.K},
                {"ct_K", h.ct},
                {"min_slack", measured(h.min_slack)},
                {"max_abs_slack", measured(h.max_abs_slack)},
                {"samples", h.samples}};
}

Json to_json(const RefValue& r) {
    Json j;
    if (r.text.empty()) j["value"] = json_number(r.value);
    else j["value"] = r.text;
    j["provenance"] = r.provenance;
    return j;
}

Json trace_summary(const FoliationTrace& t) {
    Json j;
    j["center"] = to_json(t.chart->center);
    j["radius"] = t.chart->r;
    j["grid"] = std::to_string(t.chart->n_phi) + "x" + std::to_string(t.chart->n_psi);
    j["exact_chart"] = t.chart->exact;
    j["leaves"] = t.leaves.size();
    Json ends = Json::object();
    for (LeafEnd e : {LeafEnd::Singularity, LeafEnd::Closed, LeafEnd::LeftResolution, LeafEnd::Stiff}) {
        std::size_t c = 0;
        for (const auto& l : t.leaves) c += l.end == e;
        ends[leaf_end_name(e)] = c;
    }
    j["leaf_ends"] = ends;
    double worst = 0.0;
    for (const auto& l : t.leaves)
        for (double r : l.alpha_residual) worst = std::max(worst, r);
    j["max_alpha_residual"] = worst;
    Json s = Json::array();
    for (const auto& x : t.singularities) s.push_back(to_json(x));
    j["singularities"] = s;
    if (!t.diagnostic.empty()) j["diagnostic"] = t.diagnostic;
    return j;
}

Json to_json(const RunReport& r) {
    Json j;
    j["schema"] = kSchema;
    j["tool_version"] = kToolVersion;
    j["command"] = r.command;
    j["spec"] = Json{{"name", r.spec_name}, {"hash", r.spec_hash}, {"source", r.spec_source}};
    j["parameters"] = r.parameters;
    j["results"] = r.results;
    j["warnings"] = r.warnings;
    if (r.wall_time) j["wall_time_s"] = *r.wall_time;
    return j;
}

}  // namespace contactlab
