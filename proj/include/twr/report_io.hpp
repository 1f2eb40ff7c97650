#pragma once

// JSON/CSV report emission and the path-spec file format.
//
// Doubles are written with 17 significant digits so that every value reads
// back to the same bits.

#include "twr/crosscheck.hpp"
#include "twr/transport.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <sstream>
#include <string>
#include <vector>

namespace twr {

using Json = nlohmann::ordered_json;

inline constexpr int kSchemaVersion = 1;

class PathSpecError : public DomainError {
public:
    using DomainError::DomainError;
};

namespace detail {

inline void write_json(std::ostream& os, const Json& j, int indent)
{
    const std::string pad(static_cast<std::size_t>(indent + 2), ' ');
    const std::string close(static_cast<std::size_t>(indent), ' ');
    switch (j.type()) {
    case Json::value_t::object: {
        if (j.empty()) {
            os << "{}";
            return;
        }
        os << "{\n";
        bool first = true;
        for (auto it = j.begin(); it != j.end(); ++it) {
            os << (first ? "" : ",\n") << pad << Json(it.key()).dump() << ": ";
            write_json(os, it.value(), indent + 2);
            first = false;
        }
        os << "\n" << close << "}";
        return;
    }
    case Json::value_t::array: {
        if (j.empty()) {
            os << "[]";
            return;
        }
        // Arrays of scalars stay on one line.
        const bool flat = std::none_of(j.begin(), j.end(), [](const Json& e) { return e.is_structured(); });
        os << (flat ? "[" : "[\n");
        bool first = true;
        for (const auto& e : j) {
            os << (first ? "" : (flat ? ", " : ",\n")) << (flat ? "" : pad);
            write_json(os, e, indent + 2);
            first = false;
        }
        os << (flat ? "]" : "\n" + close + "]");
        return;
    }
    case Json::value_t::number_float: {
        const double x = j.get<double>();
        os << (std::isfinite(x) ? format_double(x) : "null");
        return;
    }
    default:
        os << j.dump();
    }
}

inline Json vec_json(const Vec3& v)
{
    return Json::array({v[0], v[1], v[2]});
}

inline Json angle_axis_json(const AngleAxis& a)
{
    return Json{{"angle", a.angle}, {"axis", vec_json(a.axis)}};
}

inline Json rotation_json(const Rotation3& r)
{
    Json out = Json::array();
    for (int i = 0; i < 3; ++i) {
        for (int k = 0; k < 3; ++k) {
            out.push_back(r.matrix()(i, k));
        }
    }
    return out;
}

inline Json su2_json(const SU2Element& u)
{
    Json out = Json::array();
    for (int i = 0; i < 2; ++i) {
        for (int k = 0; k < 2; ++k) {
            out.push_back(Json::array({u.matrix()(i, k).real(), u.matrix()(i, k).imag()}));
        }
    }
    return out;
}

} // namespace detail

inline std::string to_json_text(const Json& j)
{
    std::ostringstream os;
    detail::write_json(os, j, 0);
    os << "\n";
    return os.str();
}

inline Json to_json(const ComparisonReport& r)
{
    Json params;
    if (r.kind == ScenarioKind::triangle) {
        params["v1"] = detail::vec_json(r.v1);
        params["v2"] = detail::vec_json(r.v2);
    } else {
        params["speed"] = r.speed;
    }
    params["mass"] = r.mass;
    params["steps"] = r.steps;
    return Json{{"scenario_id", r.scenario_id},
                {"kind", to_string(r.kind)},
                {"parameters", params},
                {"algebraic", detail::angle_axis_json(r.algebraic)},
                {"geometric", detail::angle_axis_json(r.geometric)},
                {"angle_difference", r.angle_difference},
                {"axis_deviation", r.axis_deviation},
                {"discretization_estimate", r.discretization_estimate},
                {"tolerance", r.tolerance},
                {"noise_floor", r.noise_floor},
                {"safety_factor", kEstimateSafety},
                {"pass", r.pass}};
}

inline Json to_json(const HolonomyResult& h)
{
    return Json{{"frame", to_string(h.frame)},
                {"su2", detail::su2_json(h.su2)},
                {"so3", detail::rotation_json(h.so3)},
                {"angle", h.angle_axis.angle},
                {"axis", detail::vec_json(h.angle_axis.axis)},
                {"convergence", h.convergence}};
}

inline Json to_json(const CampaignSummary& s)
{
    return Json{{"count", s.count},
                {"passed", s.passed},
                {"failed", s.count - s.passed},
                {"max_angle_difference", s.max_angle_difference},
                {"mean_angle_difference", s.mean_angle_difference},
                {"max_axis_deviation", s.max_axis_deviation},
                {"all_pass", s.all_pass()}};
}

//---------------------------------------------------------------------------//
// CSV
//---------------------------------------------------------------------------//

inline const std::vector<std::string>& comparison_csv_columns()
{
    static const std::vector<std::string> cols = {
        "scenario_id",      "kind",          "v1_x",           "v1_y",           "v1_z",
        "v2_x",             "v2_y",          "v2_z",           "speed",          "mass",
        "steps",            "algebraic_angle", "algebraic_axis_x", "algebraic_axis_y", "algebraic_axis_z",
        "geometric_angle",  "geometric_axis_x", "geometric_axis_y", "geometric_axis_z", "angle_difference",
        "axis_deviation",   "discretization_estimate", "tolerance", "noise_floor",   "pass"};
    return cols;
}

namespace detail {

inline std::string csv_line(const std::vector<std::string>& cells)
{
    std::string out;
    for (std::size_t i = 0; i < cells.size(); ++i) {
        out += (i ? "," : "") + cells[i];
    }
    return out + "\n";
}

inline void push_vec(std::vector<std::string>& row, const Vec3& v)
{
    for (int i = 0; i < 3; ++i) {
        row.push_back(format_double(v[i]));
    }
}

} // namespace detail

inline std::string comparison_csv(const std::vector<ComparisonReport>& reports)
{
    std::string out = detail::csv_line(comparison_csv_columns());
    for (const auto& r : reports) {
        std::vector<std::string> row{r.scenario_id, to_string(r.kind)};
        detail::push_vec(row, r.v1);
        detail::push_vec(row, r.v2);
        row.push_back(format_double(r.speed));
        row.push_back(format_double(r.mass));
        row.push_back(std::to_string(r.steps));
        row.push_back(format_double(r.algebraic.angle));
        detail::push_vec(row, r.algebraic.axis);
        row.push_back(format_double(r.geometric.angle));
        detail::push_vec(row, r.geometric.axis);
        for (double x : {r.angle_difference, r.axis_deviation, r.discretization_estimate, r.tolerance, r.noise_floor}) {
            row.push_back(format_double(x));
        }
        row.push_back(r.pass ? "true" : "false");
        out += detail::csv_line(row);
    }
    return out;
}

/// frame, su2 entries row-major as re/im pairs, so3 row-major, angle, axis, convergence.
inline std::string holonomy_csv(const HolonomyResult& h)
{
    std::vector<std::string> head{"frame"};
    std::vector<std::string> row{to_string(h.frame)};
    const char* names[] = {"11", "12", "21", "22"};
    for (int k = 0; k < 4; ++k) {
        head.push_back(std::string("su2_") + names[k] + "_re");
        head.push_back(std::string("su2_") + names[k] + "_im");
        const cplx c = h.su2.matrix()(k / 2, k % 2);
        row.push_back(format_double(c.real()));
        row.push_back(format_double(c.imag()));
    }
    for (int k = 0; k < 9; ++k) {
        head.push_back("so3_" + std::to_string(k / 3 + 1) + std::to_string(k % 3 + 1));
        row.push_back(format_double(h.so3.matrix()(k / 3, k % 3)));
    }
    head.insert(head.end(), {"angle", "axis_x", "axis_y", "axis_z", "convergence"});
    row.push_back(format_double(h.angle_axis.angle));
    detail::push_vec(row, h.angle_axis.axis);
    row.push_back(format_double(h.convergence));
    return detail::csv_line(head) + detail::csv_line(row);
}

struct WignerResult {
    Vec3 v1 = Vec3::Zero();
    Vec3 v2 = Vec3::Zero();
    double mass = 1.0;
    Vec3 v12 = Vec3::Zero();
    Rotation3 rotation;
    AngleAxis angle_axis;
    SU2Element su2;
};

inline WignerResult compute_wigner(const Velocity3& v1, const Velocity3& v2, double m)
{
    detail::require_mass(m);
    WignerResult w;
    w.v1 = v1.vec();
    w.v2 = v2.vec();
    w.mass = m;
    w.v12 = velocity_add_general(v1, v2).vec();
    w.rotation = twr_of_two_boosts(v1, v2);
    w.angle_axis = rotation_to_angle_axis(w.rotation);
    w.su2 = su2_from_angle_axis(w.angle_axis);
    return w;
}

inline std::string wigner_csv(const WignerResult& w)
{
    std::vector<std::string> head{"v1_x", "v1_y", "v1_z", "v2_x", "v2_y", "v2_z", "mass", "v12_x", "v12_y", "v12_z",
                                  "angle", "axis_x", "axis_y", "axis_z"};
    std::vector<std::string> row;
    detail::push_vec(row, w.v1);
    detail::push_vec(row, w.v2);
    row.push_back(format_double(w.mass));
    detail::push_vec(row, w.v12);
    row.push_back(format_double(w.angle_axis.angle));
    detail::push_vec(row, w.angle_axis.axis);
    return detail::csv_line(head) + detail::csv_line(row);
}

//---------------------------------------------------------------------------//
// Path-spec files
//---------------------------------------------------------------------------//

namespace detail {

inline std::string line_col(const std::string& text, std::size_t byte)
{
    std::size_t line = 1, col = 1;
    for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
        if (text[i] == '\n') {
            ++line;
            col = 1;
        } else {
            ++col;
        }
    }
    return std::to_string(line) + ":" + std::to_string(col);
}

inline void reject_unknown(const Json& obj, const std::string& where, std::initializer_list<const char*> allowed)
{
    for (auto it = obj.begin(); it != obj.end(); ++it) {
        if (std::none_of(allowed.begin(), allowed.end(), [&](const char* a) { return it.key() == a; })) {
            throw PathSpecError(where + (where.empty() ? "" : ".") + it.key() + ": unknown field");
        }
    }
}

inline double number_at(const Json& obj, const std::string& key, const std::string& where)
{
    const std::string field = where.empty() ? key : where + "." + key;
    if (!obj.contains(key)) {
        throw PathSpecError(field + ": missing");
    }
    if (!obj[key].is_number()) {
        throw PathSpecError(field + ": expected a number");
    }
    const double x = obj[key].get<double>();
    if (!std::isfinite(x)) {
        throw PathSpecError(field + ": not finite");
    }
    return x;
}

inline double number_or(const Json& obj, const std::string& key, const std::string& where, double fallback)
{
    return obj.contains(key) ? number_at(obj, key, where) : fallback;
}

inline int steps_or(const Json& obj, const std::string& where, int fallback)
{
    if (!obj.contains("steps")) {
        return fallback;
    }
    const std::string field = where.empty() ? "steps" : where + ".steps";
    const Json& s = obj["steps"];
    if (!s.is_number_integer() || s.get<std::int64_t>() < 1 || s.get<std::int64_t>() > 100000000) {
        throw PathSpecError(field + ": expected a positive integer");
    }
    return static_cast<int>(s.get<std::int64_t>());
}

/// [rho, theta, phi] chart point or [p0, p1, p2, p3] four-vector.
inline FourVector point_at(const Json& j, const std::string& field, double m)
{
    if (!j.is_array() || (j.size() != 3 && j.size() != 4)) {
        throw PathSpecError(field + ": expected [rho, theta, phi] or a four-vector [p0, p1, p2, p3]");
    }
    Vec4 v = Vec4::Zero();
    for (std::size_t k = 0; k < j.size(); ++k) {
        if (!j[k].is_number() || !std::isfinite(j[k].get<double>())) {
            throw PathSpecError(field + "[" + std::to_string(k) + "]: expected a finite number");
        }
        v[static_cast<int>(k)] = j[k].get<double>();
    }
    if (j.size() == 3) {
        if (v[0] < 0.0) {
            throw PathSpecError(field + ": rho must be non-negative");
        }
        return embed(ShellPoint(v[0], v[1], v[2]), m);
    }
    const FourVector p(v);
    if (!p.on_shell(m)) {
        throw PathSpecError(field + ": four-vector is off the mass shell");
    }
    return p;
}

} // namespace detail

inline PathSpec parse_path_spec(const std::string& text)
{
    Json doc;
    try {
        doc = Json::parse(text);
    } catch (const Json::parse_error& e) {
        // e.byte is one past the offending character
        const std::size_t at = e.byte > 0 ? e.byte - 1 : 0;
        std::string msg = e.what();
        const auto pos = msg.find("syntax error");
        throw PathSpecError("parse error at " + detail::line_col(text, at) + ": "
                            + (pos == std::string::npos ? msg : msg.substr(pos)));
    }
    if (!doc.is_object()) {
        throw PathSpecError("top level must be an object");
    }
    detail::reject_unknown(doc, "", {"mass", "closed", "steps", "segments"});
    PathSpec path;
    path.mass = detail::number_or(doc, "mass", "", 1.0);
    if (!(path.mass > 0.0)) {
        throw PathSpecError("mass: must be positive");
    }
    if (doc.contains("closed")) {
        if (!doc["closed"].is_boolean()) {
            throw PathSpecError("closed: expected true or false");
        }
        path.closed = doc["closed"].get<bool>();
    }
    path.steps_per_segment = detail::steps_or(doc, "", path.steps_per_segment);
    if (!doc.contains("segments") || !doc["segments"].is_array() || doc["segments"].empty()) {
        throw PathSpecError("segments: expected a non-empty array");
    }
    const double m = path.mass;
    for (std::size_t i = 0; i < doc["segments"].size(); ++i) {
        const Json& s = doc["segments"][i];
        const std::string where = "segments[" + std::to_string(i) + "]";
        if (!s.is_object()) {
            throw PathSpecError(where + ": expected an object");
        }
        if (!s.contains("type") || !s["type"].is_string()) {
            throw PathSpecError(where + ".type: expected \"circle\", \"geodesic\" or \"sampled\"");
        }
        const std::string type = s["type"].get<std::string>();
        Segment seg;
        seg.steps = detail::steps_or(s, where, 0);
        if (type == "circle") {
            detail::reject_unknown(s, where, {"type", "rho", "theta", "phi_start", "phi_end", "steps"});
            CircleArc c;
            c.rho = detail::number_at(s, "rho", where);
            if (c.rho < 0.0) {
                throw PathSpecError(where + ".rho: must be non-negative");
            }
            c.theta = detail::number_or(s, "theta", where, c.theta);
            c.phi_start = detail::number_or(s, "phi_start", where, c.phi_start);
            c.phi_end = detail::number_or(s, "phi_end", where, c.phi_end);
            seg.shape = c;
        } else if (type == "geodesic") {
            detail::reject_unknown(s, where, {"type", "from", "to", "steps"});
            for (const char* k : {"from", "to"}) {
                if (!s.contains(k)) {
                    throw PathSpecError(where + "." + k + ": missing");
                }
            }
            seg.shape = GeodesicSegment{detail::point_at(s["from"], where + ".from", m),
                                        detail::point_at(s["to"], where + ".to", m)};
        } else if (type == "sampled") {
            detail::reject_unknown(s, where, {"type", "points", "steps"});
            if (!s.contains("points") || !s["points"].is_array() || s["points"].size() < 2) {
                throw PathSpecError(where + ".points: expected at least two points");
            }
            SampledCurve c;
            for (std::size_t k = 0; k < s["points"].size(); ++k) {
                c.points.push_back(detail::point_at(s["points"][k], where + ".points[" + std::to_string(k) + "]", m));
            }
            seg.shape = c;
        } else {
            throw PathSpecError(where + ".type: unknown segment type \"" + type + "\"");
        }
        path.segments.push_back(seg);
    }
    return path;
}

} // namespace twr
