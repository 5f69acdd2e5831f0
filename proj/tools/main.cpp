// rch: command-line front end for the hull pipelines.

#include "rch/io.hpp"

#include "CLI11.hpp"

#include <cstdio>
#include <iostream>

using namespace rch;
using io::json;

namespace {

struct Flags {
    std::string input;
    std::string output;
    std::string cone;  // path to a cone JSON, or inline JSON
    std::string svg;
    std::string mesh;
    std::string target;
    std::vector<int> grid;
    double tol = -1;
    double eps = 1e-4;
    int max_rounds = -1;
    int threads = 1;
    std::size_t max_vertices = 200000;
};

json load_cone(const Flags& f, const json& doc)
{
    if (!f.cone.empty()) {
        const auto first = f.cone.find_first_not_of(" \t");
        if (first != std::string::npos && f.cone[first] == '{') {
            try {
                return json::parse(f.cone);
            } catch (const json::parse_error& e) {
                throw ParseError(std::string("--cone: malformed JSON: ") + e.what());
            }
        }
        return io::read_file(f.cone);
    }
    if (doc.is_object() && doc.contains("cone")) return doc["cone"];
    return nullptr;
}

json input_doc(const Flags& f)
{
    if (f.input.empty()) throw Error("--input is required");
    return io::read_file(f.input);
}

void write_svg(const Flags& f, const std::string& svg)
{
    if (!f.svg.empty()) io::write_text(f.svg, svg);
}

template <class F>
int run_dhull(const Flags& f, const json& doc, const Cone<F>& cone, const char* field)
{
    const auto pts = io::field_points<F>(doc);
    const auto h = d_hull_2d(pts, cone);
    json out = io::d_hull_json(h);
    out["field"] = field;
    io::write_text(f.output, io::dump(out));
    write_svg(f, io::cells_svg(h.cells(), pts));
    return 0;
}

int hull2d(const Flags& f)
{
    const json doc = input_doc(f);
    const json cone = load_cone(f, doc);
    const io::ConeSpec spec = cone.is_null() ? io::axis_cone_spec() : io::cone_spec(cone);
    if (spec.field == io::ConeField::Rational && spec.rational_cone().is_axis()) {
        const auto pts = io::planar_points(doc);
        const auto h = separate_hull(pts);
        json out = io::separate_hull_json(h);
        out["field"] = "rational";
        io::write_text(f.output, io::dump(out));
        write_svg(f, io::cells_svg(h.cells(), pts));
        return 0;
    }
    switch (spec.field) {
        case io::ConeField::Rational: return run_dhull(f, doc, spec.rational_cone(), "rational");
        case io::ConeField::Sqrt3: return run_dhull(f, doc, spec.sqrt3_cone(), "sqrt3");
        case io::ConeField::Float: return run_dhull(f, doc, spec.float_cone(), "float");
    }
    return 1;
}

HullOptions options_from(const Flags& f, const json& doc)
{
    HullOptions o = io::hull_options(doc.is_object() && doc.contains("options") ? doc["options"] : json(nullptr));
    if (!f.grid.empty()) {
        if (f.grid.size() != 3 || f.grid[0] != f.grid[1] || f.grid[1] != f.grid[2])
            throw Error("--grid for hull-tri takes N,N,N (equal resolutions; 0,0,0 disables the oracle)");
        if (f.grid[0] != 0 && f.grid[0] < 2) throw Error("--grid resolution must be 0 or at least 2");
        o.oracle_resolution = f.grid[0];
    }
    if (f.tol >= 0) o.reconcile_tol = f.tol;
    if (f.max_rounds > 0) o.inner_rounds = f.max_rounds;
    o.threads = f.threads;
    return o;
}

int hull_tri(const Flags& f)
{
    const json doc = input_doc(f);
    const HullResult h = compute_hull(io::tri_points(doc), options_from(f, doc));
    io::write_text(f.output, io::dump(io::hull_json(h)));
    if (!f.mesh.empty()) io::write_text(f.mesh, io::dump(io::mesh_json(h.desc)));
    write_svg(f, io::cells_svg(io::description_cells(h.desc), std::vector<PlanarPoint>{}));
    try {
        h.require_resolved();
    } catch (const UnresolvedHeights& e) {
        std::fprintf(stderr, "unresolved: %s\n", e.what());
        return 2;
    }
    return 0;
}

int t4(const Flags& f)
{
    const json doc = input_doc(f);
    const json& pts = io::member(doc, "points");
    if (!pts.is_array() || pts.size() != 4) throw ParseError("t4 needs exactly 4 points");
    const bool lifted = pts[0].size() == 3;
    std::array<PlanarPoint, 4> planar;
    std::array<Rational, 4> z;
    for (int i = 0; i < 4; ++i) {
        if (pts[i].size() != pts[0].size()) throw ParseError("t4 points must all be planar or all lifted");
        planar[i] = io::planar_point(pts[i]);
        if (lifted) z[i] = io::rational(pts[i][2]);
    }
    json out;
    const auto data = detect_t4(planar);
    out["t4"] = static_cast<bool>(data);
    if (data) {
        out["K"] = json::array();
        for (const auto& k : data->K) out["K"].push_back(io::str(k));
        out["P"] = io::str(data->P);
        out["C"] = json::array();
        for (const auto& c : data->C) out["C"].push_back(io::str(c));
        out["alpha"] = json::array();
        for (const auto& a : data->alpha) out["alpha"].push_back(io::str(a));
        out["lambda"] = json::array();
        for (const auto& l : data->lambda) out["lambda"].push_back(io::str(l));
        out["square"] = json::array();
        for (const auto& s : data->square) out["square"].push_back(io::str(s));
        out["degenerate"] = data->degenerate();
        if (lifted) {
            std::array<Rational, 4> zk;
            for (int i = 0; i < 4; ++i) zk[i] = z[data->order[i]];
            const T4Lift lift = solve_heights(*data, zk);
            out["Q"] = json::array();
            for (const auto& q : lift.Q()) out["Q"].push_back(io::str(q));
            out["quadric"] = io::quadric_json(fit_quadric(lift));
        }
    }
    io::write_text(f.output, io::dump(out));
    return 0;
}

int t3(const Flags& f)
{
    const json doc = input_doc(f);
    const json cj = load_cone(f, doc);
    if (cj.is_null()) throw Error("t3 needs a cone (--cone or \"cone\" in the input)");
    const io::ConeSpec spec = io::cone_spec(cj);
    if (spec.field != io::ConeField::Rational) throw Error("t3 supports rational cones only");
    const DirectionCone cone = spec.rational_cone();
    const json& pts = io::member(doc, "points");
    if (!pts.is_array() || pts.size() != 3) throw ParseError("t3 needs exactly 3 points");
    json out;
    std::array<PlanarPoint, 3> planar;
    for (int i = 0; i < 3; ++i) planar[i] = io::planar_point(pts[i]);
    const auto data = detect_t3(planar, cone);
    out["t3"] = static_cast<bool>(data);
    if (data) {
        out["K"] = json::array();
        for (const auto& k : data->K) out["K"].push_back(io::str(k));
        out["P"] = io::str(data->P);
        out["C"] = json::array();
        for (const auto& c : data->C) out["C"].push_back(io::str(c));
        out["alpha"] = json::array();
        for (const auto& a : data->alpha) out["alpha"].push_back(io::str(a));
        out["inner"] = json::array();
        for (const auto& p : data->inner()) out["inner"].push_back(io::str(p));
        if (pts[0].size() == 3) {
            const auto h = t3_hull_3d({io::tri_point(pts[0]), io::tri_point(pts[1]), io::tri_point(pts[2])}, cone);
            out["plane"] = {{"u", io::str(h.u)}, {"v", io::str(h.v)}, {"w", io::str(h.w)}};
        }
        const auto hull = d_hull_2d(std::vector<PlanarPoint>(planar.begin(), planar.end()), cone);
        out["hull"] = io::d_hull_json(hull);
        write_svg(f, io::cells_svg(hull.cells(), std::vector<PlanarPoint>(planar.begin(), planar.end())));
    }
    io::write_text(f.output, io::dump(out));
    return 0;
}

int envelope(const Flags& f)
{
    const json doc = input_doc(f);
    const auto K = io::tri_points(doc);
    if (K.empty()) throw EmptyInput();
    std::vector<int> n = f.grid.empty() ? std::vector<int>{40, 40, 40} : f.grid;
    if (n.size() != 3 || n[0] < 2 || n[1] < 2 || n[2] < 2) throw Error("--grid takes NX,NY,NZ with each >= 2");
    const double tol = f.tol > 0 ? f.tol : 1e-9;
    const int sweeps = f.max_rounds > 0 ? f.max_rounds : 200;
    Grid3 g = init_distance_field(K, Grid3::around(K, n[0], n[1], n[2]));
    const EnvelopeResult env = rc_envelope(std::move(g), tol, sweeps, f.threads);
    std::vector<PlanarPoint> proj;
    for (const auto& k : K) proj.push_back(project(k));
    const SeparateHull planar = separate_hull(proj);
    std::vector<PlanarPoint> at;
    for (std::size_t v = 0; v < planar.grid.vertex_count(); ++v)
        if (planar.hull().kept[v]) at.push_back(planar.grid.vertex(v));
    const auto heights = outer_heights(env.field, at);
    json out;
    out["grid"] = n;
    out["sweeps"] = env.sweeps;
    out["residual"] = io::fixed(env.residual);
    out["converged"] = env.converged;
    out["spacing"] = io::fixed(env.field.spacing());
    out["threshold"] = io::fixed(default_threshold(env.field));
    out["heights"] = json::array();
    for (std::size_t i = 0; i < at.size(); ++i)
        out["heights"].push_back(
            {{"at", io::str(at[i])}, {"lower", io::opt_float(heights[i].lower)}, {"upper", io::opt_float(heights[i].upper)}});
    io::write_text(f.output, io::dump(out));
    if (!env.converged) std::fprintf(stderr, "warning: envelope not converged, residual %g\n", env.residual);
    return 0;
}

int certify_cmd(const Flags& f)
{
    const json doc = input_doc(f);
    if (f.target.empty()) throw Error("--target x,y,z is required");
    const SemialgebraicDescription desc = io::description_from_json(doc);
    const TriPoint target = io::parse_target(f.target);
    if (f.eps <= 0) throw Error("--eps must be positive");
    const std::size_t cap = f.max_rounds > 0 ? static_cast<std::size_t>(f.max_rounds) : 4096;
    const CertifyResult r = certify(desc, target, f.eps, cap);
    json out;
    out["target"] = io::str(target);
    out["eps"] = f.eps;
    out["certified"] = static_cast<bool>(r.laminate);
    out["best_value"] = io::fixed(r.value);
    out["splits"] = r.splits;
    if (r.laminate) out["laminate"] = io::laminate_json(*r.laminate, desc.points);
    io::write_text(f.output, io::dump(out));
    return 0;
}

template <class F>
json refine_json(const Flags& f, const json& doc, const Cone<F>& cone, int rounds)
{
    const auto r = refine_grid(io::field_points<F>(doc), cone, rounds, f.max_vertices);
    return {{"vertex_counts", r.vertex_counts}, {"rounds", r.rounds},          {"terminated", r.terminated},
            {"budget_exhausted", r.budget_exhausted}, {"max_rounds", rounds}, {"note", r.note}};
}

int refine(const Flags& f)
{
    const json doc = input_doc(f);
    const json cj = load_cone(f, doc);
    const io::ConeSpec spec = cj.is_null() ? io::axis_cone_spec() : io::cone_spec(cj);
    const int rounds = f.max_rounds > 0 ? f.max_rounds : 25;
    json out;
    switch (spec.field) {
        case io::ConeField::Rational: out = refine_json(f, doc, spec.rational_cone(), rounds); break;
        case io::ConeField::Sqrt3: out = refine_json(f, doc, spec.sqrt3_cone(), rounds); break;
        case io::ConeField::Float: out = refine_json(f, doc, spec.float_cone(), rounds); break;
    }
    io::write_text(f.output, io::dump(out));
    return 0;
}

int render(const Flags& f)
{
    const json doc = input_doc(f);
    const SemialgebraicDescription desc = io::description_from_json(doc);
    if (f.svg.empty() && f.mesh.empty() && f.output.empty()) throw Error("render needs --svg, --mesh or --output");
    const std::string mesh = io::dump(io::mesh_json(desc));
    if (!f.mesh.empty()) io::write_text(f.mesh, mesh);
    if (!f.output.empty()) io::write_text(f.output, mesh);
    write_svg(f, io::cells_svg(io::description_cells(desc), std::vector<PlanarPoint>{}));
    return 0;
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Rank-one convex hulls of finite sets of 2x2 triangular and diagonal matrices"};
    app.set_config("--config");
    app.require_subcommand(1);
    Flags f;

    auto common = [&](CLI::App* s) {
        s->add_option("--input,-i", f.input, "input JSON file");
        s->add_option("--output,-o", f.output, "output file (stdout when omitted)");
        s->add_option("--threads", f.threads, "worker threads")->check(CLI::Range(1, 256));
    };
    auto* c_hull2d = app.add_subcommand("hull2d", "planar hull for an axis or general direction cone");
    common(c_hull2d);
    c_hull2d->add_option("--cone", f.cone, "cone JSON file or inline JSON");
    c_hull2d->add_option("--svg", f.svg, "write an SVG of the hull");

    auto* c_tri = app.add_subcommand("hull-tri", "semialgebraic description of a triangular hull");
    common(c_tri);
    c_tri->add_option("--grid", f.grid, "oracle resolution N,N,N (0,0,0 disables)")->delimiter(',')->expected(3);
    c_tri->add_option("--tol", f.tol, "reconcile tolerance (default: two oracle grid spacings)")->check(CLI::NonNegativeNumber);
    c_tri->add_option("--max-rounds", f.max_rounds, "inner round cap")->check(CLI::PositiveNumber);
    c_tri->add_option("--mesh", f.mesh, "write a triangle mesh JSON");
    c_tri->add_option("--svg", f.svg, "write an SVG of the planar support");

    auto* c_t4 = app.add_subcommand("t4", "detect a T4 and lift it");
    common(c_t4);

    auto* c_t3 = app.add_subcommand("t3", "detect a T3 for a cone and lift it");
    common(c_t3);
    c_t3->add_option("--cone", f.cone, "cone JSON file or inline JSON");
    c_t3->add_option("--svg", f.svg, "write an SVG of the planar hull");

    auto* c_env = app.add_subcommand("envelope", "outer heights from the discretized envelope");
    common(c_env);
    c_env->add_option("--grid", f.grid, "resolution NX,NY,NZ")->delimiter(',')->expected(3);
    c_env->add_option("--tol", f.tol, "sweep residual tolerance")->check(CLI::PositiveNumber);
    c_env->add_option("--max-rounds", f.max_rounds, "sweep cap")->check(CLI::PositiveNumber);

    auto* c_cert = app.add_subcommand("certify", "laminate certificate for a point of a description");
    common(c_cert);
    c_cert->add_option("--target", f.target, "point x,y,z (rationals allowed)");
    c_cert->add_option("--eps", f.eps, "pairing tolerance")->check(CLI::PositiveNumber);
    c_cert->add_option("--max-rounds", f.max_rounds, "split budget")->check(CLI::PositiveNumber);

    auto* c_ref = app.add_subcommand("refine-grid", "grid refinement experiment");
    common(c_ref);
    c_ref->add_option("--cone", f.cone, "cone JSON file or inline JSON");
    c_ref->add_option("--max-rounds", f.max_rounds, "round cap (default 25)")->check(CLI::PositiveNumber);
    c_ref->add_option("--max-vertices", f.max_vertices, "grid vertex budget")->check(CLI::PositiveNumber);

    auto* c_render = app.add_subcommand("render", "mesh and SVG for a description JSON");
    common(c_render);
    c_render->add_option("--mesh", f.mesh, "mesh JSON output");
    c_render->add_option("--svg", f.svg, "SVG output");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }

    try {
        if (*c_hull2d) return hull2d(f);
        if (*c_tri) return hull_tri(f);
        if (*c_t4) return t4(f);
        if (*c_t3) return t3(f);
        if (*c_env) return envelope(f);
        if (*c_cert) return certify_cmd(f);
        if (*c_ref) return refine(f);
        if (*c_render) return render(f);
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 1;
}
