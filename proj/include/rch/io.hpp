#pragma once

#include "rch/certify.hpp"
#include "rch/dplane.hpp"
#include "rch/t4.hpp"
#include "rch/triangular_hull.hpp"

#include "json.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>

namespace rch::io {

using nlohmann::json;

// Floats go out with 9 significant digits so repeated runs are byte-identical.
inline double fixed(double v)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.9g", v);
    return std::strtod(buf, nullptr);
}

inline json opt_float(const std::optional<double>& v)
{
    return v ? json(fixed(*v)) : json(nullptr);
}

inline Rational rational(const json& j)
{
    if (j.is_string()) return parse_rational(j.get<std::string>());
    if (j.is_number_integer()) return Rational(j.get<long>());
    if (j.is_number_float()) return from_double(j.get<double>());
    throw ParseError("expected a number or a rational string, got " + j.dump());
}

inline json str(const Rational& r)
{
    return to_string(r);
}

inline json str(const PlanarPoint& p)
{
    return json::array({str(p.x), str(p.y)});
}

inline json str(const TriPoint& p)
{
    return json::array({str(p.x), str(p.y), str(p.z)});
}

inline const json& member(const json& j, const char* key)
{
    if (!j.is_object() || !j.contains(key)) throw ParseError(std::string("missing field \"") + key + "\"");
    return j.at(key);
}

inline PlanarPoint planar_point(const json& j)
{
    if (!j.is_array() || j.size() < 2) throw ParseError("expected a point [x, y], got " + j.dump());
    return {rational(j[0]), rational(j[1])};
}

inline TriPoint tri_point(const json& j)
{
    if (!j.is_array() || j.size() != 3) throw ParseError("expected a point [x, y, z], got " + j.dump());
    return {rational(j[0]), rational(j[1]), rational(j[2])};
}

inline std::vector<TriPoint> tri_points(const json& doc)
{
    std::vector<TriPoint> out;
    const json& pts = member(doc, "points");
    if (!pts.is_array()) throw ParseError("\"points\" must be an array");
    for (const auto& p : pts) out.push_back(tri_point(p));
    return out;
}

inline std::vector<PlanarPoint> planar_points(const json& doc)
{
    std::vector<PlanarPoint> out;
    const json& pts = member(doc, "points");
    if (!pts.is_array()) throw ParseError("\"points\" must be an array");
    for (const auto& p : pts) out.push_back(planar_point(p));
    return out;
}

inline TriPoint parse_target(const std::string& text)
{
    std::vector<Rational> v;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) v.push_back(parse_rational(item));
    if (v.size() != 3) throw ParseError("target must be x,y,z");
    return {v[0], v[1], v[2]};
}

inline json read_file(const std::string& path)
{
    std::ifstream in(path);
    if (!in) throw Error("cannot read " + path);
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        throw ParseError(path + ": malformed JSON: " + e.what());
    }
}

inline void write_text(const std::string& path, const std::string& text)
{
    if (path.empty() || path == "-") {
        std::fwrite(text.data(), 1, text.size(), stdout);
        return;
    }
    std::ofstream out(path);
    if (!out) throw Error("cannot write " + path);
    out << text;
}

namespace detail {

// Arrays of scalars (and arrays of such) stay on one line.
inline bool flat(const json& j)
{
    if (!j.is_array()) return !j.is_object();
    for (const auto& e : j)
        if (e.is_object() || (e.is_array() && !std::all_of(e.begin(), e.end(), [](const json& x) { return x.is_primitive(); })))
            return false;
    return true;
}

inline void dump_to(std::string& out, const json& j, int indent)
{
    const std::string pad(static_cast<std::size_t>(indent + 2), ' ');
    if (flat(j)) {
        out += j.dump();
        return;
    }
    const bool object = j.is_object();
    out += object ? "{\n" : "[\n";
    std::size_t i = 0;
    for (auto it = j.begin(); it != j.end(); ++it, ++i) {
        out += pad;
        if (object) out += json(it.key()).dump() + ": ";
        dump_to(out, *it, indent + 2);
        out += i + 1 < j.size() ? ",\n" : "\n";
    }
    out += std::string(static_cast<std::size_t>(indent), ' ') + (object ? "}" : "]");
}

}  // namespace detail

inline std::string dump(const json& j)
{
    std::string out;
    detail::dump_to(out, j, 0);
    return out + "\n";
}

// ---- cones -------------------------------------------------------------

enum class ConeField { Rational, Sqrt3, Float };

struct ConeSpec {
    ConeField field = ConeField::Rational;
    json directions = json::array();  // as given

    Cone<Rational> rational_cone() const
    {
        std::vector<PlanarPoint> d;
        for (const auto& p : directions) d.push_back(planar_point(p));
        return Cone<Rational>(d);
    }
    Cone<QSqrt3> sqrt3_cone() const
    {
        std::vector<Point2<QSqrt3>> d;
        for (const auto& p : directions) d.push_back(sqrt3_point(p));
        return Cone<QSqrt3>(d);
    }
    Cone<double> float_cone() const
    {
        std::vector<Point2<double>> d;
        for (const auto& p : directions) d.push_back(float_point(p));
        return Cone<double>(d);
    }

    static QSqrt3 sqrt3_value(const json& j)
    {
        if (j.is_string()) return parse_qsqrt3(j.get<std::string>());
        return QSqrt3(rational(j));
    }
    static Point2<QSqrt3> sqrt3_point(const json& j)
    {
        if (!j.is_array() || j.size() < 2) throw ParseError("expected a point [x, y], got " + j.dump());
        return {sqrt3_value(j[0]), sqrt3_value(j[1])};
    }
    static double float_value(const json& j)
    {
        if (j.is_number()) return j.get<double>();
        return sqrt3_value(j).to_double();
    }
    static Point2<double> float_point(const json& j)
    {
        if (!j.is_array() || j.size() < 2) throw ParseError("expected a point [x, y], got " + j.dump());
        return {float_value(j[0]), float_value(j[1])};
    }
};

inline ConeSpec cone_spec(const json& j)
{
    ConeSpec c;
    const std::string field = j.value("field", std::string("rational"));
    if (field == "rational")
        c.field = ConeField::Rational;
    else if (field == "sqrt3")
        c.field = ConeField::Sqrt3;
    else if (field == "float")
        c.field = ConeField::Float;
    else
        throw ParseError("unknown cone field \"" + field + "\" (rational, sqrt3, float)");
    c.directions = member(j, "directions");
    if (!c.directions.is_array() || c.directions.empty()) throw ParseError("cone needs a nonempty \"directions\" array");
    return c;
}

inline ConeSpec axis_cone_spec()
{
    ConeSpec c;
    c.directions = json::array({json::array({"1", "0"}), json::array({"0", "1"})});
    return c;
}

template <class F>
json field_str(const F& v)
{
    if constexpr (std::is_same_v<F, double>)
        return fixed(v);
    else
        return FieldTraits<F>::str(v);
}

template <class F>
json field_point(const Point2<F>& p)
{
    return json::array({field_str(p.x), field_str(p.y)});
}

template <class F>
Point2<F> convert_point(const PlanarPoint& p)
{
    if constexpr (std::is_same_v<F, Rational>)
        return p;
    else if constexpr (std::is_same_v<F, QSqrt3>)
        return {QSqrt3(p.x), QSqrt3(p.y)};
    else
        return {p.x.get_d(), p.y.get_d()};
}

template <class F>
std::vector<Point2<F>> field_points(const json& doc)
{
    std::vector<Point2<F>> out;
    const json& pts = member(doc, "points");
    if (!pts.is_array()) throw ParseError("\"points\" must be an array");
    for (const auto& p : pts) {
        if constexpr (std::is_same_v<F, Rational>)
            out.push_back(planar_point(p));
        else if constexpr (std::is_same_v<F, QSqrt3>)
            out.push_back(ConeSpec::sqrt3_point(p));
        else
            out.push_back(ConeSpec::float_point(p));
    }
    return out;
}

// ---- planar cells -------------------------------------------------------

template <class F>
json cells_json(const CellSet<F>& c)
{
    json j;
    j["vertices"] = json::array();
    for (const auto& v : c.vertices) j["vertices"].push_back(field_point(v));
    j["edges"] = json::array();
    for (const auto& [a, b] : c.edges) j["edges"].push_back(json::array({field_point(a), field_point(b)}));
    j["faces"] = json::array();
    for (const auto& f : c.faces) {
        json face = json::array();
        for (const auto& v : f) face.push_back(field_point(v));
        j["faces"].push_back(face);
    }
    j["face_vertices"] = json::array();
    for (const auto& v : c.face_vertices()) j["face_vertices"].push_back(field_point(v));
    return j;
}

inline json separate_hull_json(const SeparateHull& h)
{
    json j = cells_json(h.cells());
    j["rounds"] = h.rounds;
    j["kept_per_round"] = json::array();
    for (const auto& s : h.snapshots)
        j["kept_per_round"].push_back(std::count(s.kept.begin(), s.kept.end(), true));
    return j;
}

template <class F>
json d_hull_json(const DHull<F>& h)
{
    json j = cells_json(h.cells());
    j["rounds"] = h.rounds;
    j["kept_per_round"] = h.kept_per_round;
    j["grid_vertices"] = h.grid.vertex_count();
    return j;
}

template <class F>
CellSet<F> cells_from_json(const json& j)
{
    auto pt = [](const json& p) {
        if constexpr (std::is_same_v<F, Rational>)
            return planar_point(p);
        else if constexpr (std::is_same_v<F, QSqrt3>)
            return ConeSpec::sqrt3_point(p);
        else
            return ConeSpec::float_point(p);
    };
    CellSet<F> c;
    for (const auto& v : member(j, "vertices")) c.vertices.insert(pt(v));
    for (const auto& e : member(j, "edges")) c.edges.insert(CellSet<F>::make_edge(pt(e.at(0)), pt(e.at(1))));
    for (const auto& f : member(j, "faces")) {
        typename CellSet<F>::Face face;
        for (const auto& v : f) face.push_back(pt(v));
        c.faces.insert(CellSet<F>::canonical_face(std::move(face)));
    }
    return c;
}

// ---- descriptions -------------------------------------------------------

inline json quadric_json(const Quadric& q)
{
    return {{"poly", q.str()},
            {"coefficients", json::array({str(q.alpha), str(q.beta), str(q.gamma), str(q.delta)})}};
}

inline Quadric quadric_from_json(const json& j)
{
    const json& c = member(j, "coefficients");
    if (!c.is_array() || c.size() != 4) throw ParseError("quadric needs 4 coefficients [xy, x, y, 1]");
    return {rational(c[0]), rational(c[1]), rational(c[2]), rational(c[3])};
}

inline json diagnostics_json(const HullDiagnostics& d)
{
    json j;
    j["inner_rounds"] = d.inner_rounds;
    j["inner_converged"] = d.inner_converged;
    j["oracle_run"] = d.oracle_run;
    if (d.oracle_run) {
        j["oracle_sweeps"] = d.oracle_sweeps;
        j["oracle_converged"] = d.oracle_converged;
        j["oracle_spacing"] = fixed(d.oracle_spacing);
        j["reconcile_tol"] = fixed(d.reconcile_tol);
    }
    j["unresolved"] = json::array();
    for (const auto& g : d.gaps) j["unresolved"].push_back(str(g.at));
    auto census = [](const SignCensus& s) { return json{{"positive", s.positive}, {"negative", s.negative}, {"zero", s.zero}}; };
    j["sign_census"] = {{"upper", census(d.upper_signs)}, {"lower", census(d.lower_signs)}};
    return j;
}

inline json description_json(const SemialgebraicDescription& d)
{
    json j;
    j["points"] = json::array();
    for (const auto& p : d.points) j["points"].push_back(str(p));
    j["resolved"] = d.resolved();
    j["linear_forms"] = json::array();
    for (const auto& f : d.linear_forms) j["linear_forms"].push_back(f.str());
    j["quadrics"] = json::array();
    for (const auto& q : d.quadrics()) j["quadrics"].push_back(q.str());
    j["vertices"] = json::array();
    for (const auto& v : d.vertices) {
        json jv{{"at", str(v.at)},
                {"z_lower", v.z_lower ? str(*v.z_lower) : json(nullptr)},
                {"z_upper", v.z_upper ? str(*v.z_upper) : json(nullptr)},
                {"resolved", v.resolved}};
        if (v.outer_lower || v.outer_upper) {
            jv["outer_lower"] = opt_float(v.outer_lower);
            jv["outer_upper"] = opt_float(v.outer_upper);
        }
        j["vertices"].push_back(jv);
    }
    j["edges"] = json::array();
    for (const auto& [a, b] : d.edges) j["edges"].push_back(json::array({str(a), str(b)}));
    j["rectangles"] = json::array();
    for (const auto& r : d.rectangles)
        j["rectangles"].push_back({{"bounds", json::array({str(r.x0), str(r.x1), str(r.y0), str(r.y1)})},
                                   {"q_upper", quadric_json(r.q_upper)},
                                   {"q_lower", quadric_json(r.q_lower)}});
    return j;
}

inline json hull_json(const HullResult& h)
{
    json j = description_json(h.desc);
    j["diagnostics"] = diagnostics_json(h.diagnostics);
    return j;
}

inline SemialgebraicDescription description_from_json(const json& j)
{
    SemialgebraicDescription d;
    d.points = tri_points(j);
    for (const auto& v : member(j, "vertices")) {
        VertexSpan s;
        s.at = planar_point(member(v, "at"));
        if (!member(v, "z_lower").is_null()) s.z_lower = rational(v.at("z_lower"));
        if (!member(v, "z_upper").is_null()) s.z_upper = rational(v.at("z_upper"));
        s.resolved = v.value("resolved", true);
        if (v.contains("outer_lower") && !v["outer_lower"].is_null()) s.outer_lower = v["outer_lower"].get<double>();
        if (v.contains("outer_upper") && !v["outer_upper"].is_null()) s.outer_upper = v["outer_upper"].get<double>();
        d.vertices.push_back(std::move(s));
    }
    for (const auto& e : member(j, "edges")) d.edges.push_back({planar_point(e.at(0)), planar_point(e.at(1))});
    for (const auto& r : member(j, "rectangles")) {
        const json& b = member(r, "bounds");
        if (!b.is_array() || b.size() != 4) throw ParseError("rectangle bounds must be [x0, x1, y0, y1]");
        d.rectangles.push_back({rational(b[0]), rational(b[1]), rational(b[2]), rational(b[3]),
                                quadric_from_json(member(r, "q_upper")), quadric_from_json(member(r, "q_lower"))});
    }
    std::set<LinearForm> forms;
    for (const auto& r : d.rectangles) {
        forms.insert({0, r.x0}), forms.insert({0, r.x1});
        forms.insert({1, r.y0}), forms.insert({1, r.y1});
    }
    d.linear_forms.assign(forms.begin(), forms.end());
    return d;
}

inline HullOptions hull_options(const json& j, HullOptions o = {})
{
    if (j.is_null()) return o;
    if (!j.is_object()) throw ParseError("\"options\" must be an object");
    if (j.contains("bound")) o.bound = rational(j["bound"]);
    o.inner_rounds = j.value("inner_rounds", o.inner_rounds);
    o.reconcile_tol = j.value("reconcile_tol", o.reconcile_tol);
    o.oracle_resolution = j.value("oracle_resolution", o.oracle_resolution);
    o.oracle_tol = j.value("oracle_tol", o.oracle_tol);
    o.oracle_sweeps = j.value("oracle_sweeps", o.oracle_sweeps);
    o.threads = j.value("threads", o.threads);
    if (o.inner_rounds < 1 || o.oracle_sweeps < 1 || o.threads < 1 || o.oracle_resolution < 0 ||
        (o.oracle_resolution > 0 && o.oracle_resolution < 2) || o.oracle_tol <= 0)
        throw Error("hull options out of range");
    return o;
}

// ---- mesh ---------------------------------------------------------------

/// Triangles sampling every quadric patch (upper and lower) on an n x n grid,
/// plus the vertical quadrilateral over every edge not inside a rectangle.
inline json mesh_json(const SemialgebraicDescription& d, int n = 8)
{
    json verts = json::array(), faces = json::array();
    auto add = [&](double x, double y, double z) {
        verts.push_back(json::array({fixed(x), fixed(y), fixed(z)}));
        return verts.size() - 1;
    };
    for (const auto& r : d.rectangles)
        for (const Quadric* q : {&r.q_upper, &r.q_lower}) {
            const std::size_t base = verts.size();
            for (int i = 0; i <= n; ++i)
                for (int k = 0; k <= n; ++k) {
                    const Rational x = r.x0 + (r.x1 - r.x0) * Rational(i, n);
                    const Rational y = r.y0 + (r.y1 - r.y0) * Rational(k, n);
                    add(x.get_d(), y.get_d(), q->height(x, y).get_d());
                }
            auto at = [&](int i, int k) { return base + static_cast<std::size_t>(i * (n + 1) + k); };
            for (int i = 0; i < n; ++i)
                for (int k = 0; k < n; ++k) {
                    faces.push_back(json::array({at(i, k), at(i + 1, k), at(i + 1, k + 1)}));
                    faces.push_back(json::array({at(i, k), at(i + 1, k + 1), at(i, k + 1)}));
                }
        }
    auto inside_rect = [&](const PlanarPoint& a, const PlanarPoint& b) {
        const PlanarPoint m = Rational(1, 2) * (a + b);
        for (const auto& r : d.rectangles)
            if (m.x > r.x0 && m.x < r.x1 && m.y > r.y0 && m.y < r.y1) return true;
        return false;
    };
    for (const auto& e : d.edges) {
        if (inside_rect(e.first, e.second)) continue;
        const VertexSpan* a = d.vertex(e.first);
        const VertexSpan* b = d.vertex(e.second);
        if (!a || !b || !a->z_lower || !b->z_lower) continue;
        const auto la = add(e.first.x.get_d(), e.first.y.get_d(), a->z_lower->get_d());
        const auto lb = add(e.second.x.get_d(), e.second.y.get_d(), b->z_lower->get_d());
        const auto ub = add(e.second.x.get_d(), e.second.y.get_d(), b->z_upper->get_d());
        const auto ua = add(e.first.x.get_d(), e.first.y.get_d(), a->z_upper->get_d());
        faces.push_back(json::array({la, lb, ub}));
        faces.push_back(json::array({la, ub, ua}));
    }
    return {{"vertices", verts}, {"faces", faces}};
}

// ---- laminates ----------------------------------------------------------

inline json laminate_json(const Laminate& l, const std::vector<TriPoint>& K)
{
    json j;
    j["support"] = json::array();
    for (const auto& [p, w] : l.measure()) j["support"].push_back({{"weight", str(w)}, {"point", str(p)}});
    j["order"] = l.order();
    j["splits"] = l.splits();
    j["barycenter"] = str(l.barycenter());
    Rational exact = 0;
    for (std::size_t i = 0; i < l.size(); ++i) exact += l.leaf(i).weight * squared_distance_to_set_exact(l.leaf(i).point, K);
    j["pairing_value"] = fixed(exact.get_d());
    j["pairing_exact"] = str(exact);
    j["trace"] = json::array();
    const auto& nodes = l.nodes();
    for (std::size_t s = 0; s < l.splits(); ++s) {
        const auto& a = nodes[2 * s + 1];
        const auto& parent = nodes[static_cast<std::size_t>(a.parent)];
        j["trace"].push_back({{"from", str(parent.point)},
                              {"a", str(a.point)},
                              {"b", str(nodes[2 * s + 2].point)},
                              {"lambda", str(parent.ratio)}});
    }
    return j;
}

// ---- SVG ----------------------------------------------------------------

/// Planar cells in an SVG: faces filled, edges stroked, vertices dotted,
/// input points ringed.
template <class F>
std::string cells_svg(const CellSet<F>& c, const std::vector<Point2<F>>& input, int size = 480)
{
    double x0 = 1e300, x1 = -1e300, y0 = 1e300, y1 = -1e300;
    auto grow = [&](const Point2<F>& p) {
        const double x = FieldTraits<F>::to_double(p.x), y = FieldTraits<F>::to_double(p.y);
        x0 = std::min(x0, x), x1 = std::max(x1, x), y0 = std::min(y0, y), y1 = std::max(y1, y);
    };
    for (const auto& v : c.vertices) grow(v);
    for (const auto& v : input) grow(v);
    if (x0 > x1) x0 = y0 = -1, x1 = y1 = 1;
    const double span = std::max({x1 - x0, y1 - y0, 1e-9}), pad = 24;
    const double s = (size - 2 * pad) / span;
    auto X = [&](const Point2<F>& p) { return fixed(pad + (FieldTraits<F>::to_double(p.x) - x0) * s); };
    auto Y = [&](const Point2<F>& p) { return fixed(size - pad - (FieldTraits<F>::to_double(p.y) - y0) * s); };
    std::ostringstream o;
    o << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << size << "\" height=\"" << size << "\" viewBox=\"0 0 "
      << size << ' ' << size << "\">\n";
    o << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    for (const auto& f : c.faces) {
        o << "<polygon fill=\"#9ecae1\" stroke=\"none\" points=\"";
        for (const auto& v : f) o << X(v) << ',' << Y(v) << ' ';
        o << "\"/>\n";
    }
    for (const auto& [a, b] : c.edges)
        o << "<line x1=\"" << X(a) << "\" y1=\"" << Y(a) << "\" x2=\"" << X(b) << "\" y2=\"" << Y(b)
          << "\" stroke=\"#08519c\" stroke-width=\"2\"/>\n";
    for (const auto& v : c.vertices) o << "<circle cx=\"" << X(v) << "\" cy=\"" << Y(v) << "\" r=\"2.5\" fill=\"#08519c\"/>\n";
    for (const auto& v : input)
        o << "<circle cx=\"" << X(v) << "\" cy=\"" << Y(v) << "\" r=\"5\" fill=\"none\" stroke=\"#cb181d\" stroke-width=\"2\"/>\n";
    o << "</svg>\n";
    return o.str();
}

inline CellSet<Rational> description_cells(const SemialgebraicDescription& d)
{
    CellSet<Rational> c;
    for (const auto& v : d.vertices) c.vertices.insert(v.at);
    for (const auto& [a, b] : d.edges) c.edges.insert(CellSet<Rational>::make_edge(a, b));
    for (const auto& r : d.rectangles)
        c.faces.insert(CellSet<Rational>::canonical_face({{r.x0, r.y0}, {r.x1, r.y0}, {r.x1, r.y1}, {r.x0, r.y1}}));
    return c;
}

}  // namespace rch::io
