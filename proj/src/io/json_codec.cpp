#include "tl3d/io/json_codec.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

namespace tl3d::io {

namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

[[noreturn]] void schema(const std::string& ctx, const std::string& msg) {
    throw IoError(IoErrc::Schema, ctx + ": " + msg);
}

// Field access that remembers what was read, so leftovers can be rejected.
class Obj {
public:
    Obj(const Json& j, std::string ctx) : j_(j), ctx_(std::move(ctx)) {
        if (!j_.is_object()) schema(ctx_, "expected an object");
    }

    /// Absent and null are the same.
    const Json* opt(const std::string& key) {
        used_.insert(key);
        auto it = j_.find(key);
        return it == j_.end() || it->is_null() ? nullptr : &*it;
    }

    const Json& req(const std::string& key) {
        const Json* v = opt(key);
        if (!v) schema(ctx_, "missing field '" + key + "'");
        return *v;
    }

    std::string sub(const std::string& key) const { return ctx_ + "." + key; }
    const std::string& ctx() const { return ctx_; }

    void done() const {
        for (const auto& [k, v] : j_.items())
            if (!used_.count(k)) schema(ctx_, "unknown field '" + k + "'");
    }

private:
    const Json& j_;
    std::string ctx_;
    std::set<std::string> used_;
};

double num(const Json& j, const std::string& ctx) {
    if (!j.is_number()) schema(ctx, "expected a number");
    const double v = j.get<double>();
    if (!std::isfinite(v)) schema(ctx, "expected a finite number");
    return v;
}

std::uint64_t uint(const Json& j, const std::string& ctx) {
    if (j.is_number_unsigned()) return j.get<std::uint64_t>();
    if (j.is_number_integer()) {
        if (j.get<std::int64_t>() < 0) schema(ctx, "expected a non-negative integer");
        return static_cast<std::uint64_t>(j.get<std::int64_t>());
    }
    schema(ctx, "expected a non-negative integer");
}

std::size_t size(const Json& j, const std::string& ctx) { return static_cast<std::size_t>(uint(j, ctx)); }

std::int64_t sint(const Json& j, const std::string& ctx) {
    if (j.is_number_integer() && !j.is_number_unsigned()) return j.get<std::int64_t>();
    if (j.is_number_unsigned()) {
        if (j.get<std::uint64_t>() > static_cast<std::uint64_t>(INT64_MAX)) schema(ctx, "integer out of range");
        return static_cast<std::int64_t>(j.get<std::uint64_t>());
    }
    schema(ctx, "expected an integer");
}

bool boolean(const Json& j, const std::string& ctx) {
    if (!j.is_boolean()) schema(ctx, "expected a boolean");
    return j.get<bool>();
}

std::string str(const Json& j, const std::string& ctx) {
    if (!j.is_string()) schema(ctx, "expected a string");
    return j.get<std::string>();
}

const Json& array(const Json& j, const std::string& ctx, std::optional<std::size_t> n = std::nullopt) {
    if (!j.is_array()) schema(ctx, "expected an array");
    if (n && j.size() != *n) schema(ctx, "expected " + std::to_string(*n) + " elements");
    return j;
}

Vec3 vec3(const Json& j, const std::string& ctx) {
    array(j, ctx, 3);
    return {num(j[0], ctx), num(j[1], ctx), num(j[2], ctx)};
}

Quat quat(const Json& j, const std::string& ctx) {
    array(j, ctx, 4);
    return {num(j[0], ctx), num(j[1], ctx), num(j[2], ctx), num(j[3], ctx)};
}

double fin(double v, const char* what) {
    if (!std::isfinite(v)) throw IoError(IoErrc::NonFinite, std::string("non-finite ") + what);
    return v;
}

Json jv(const Vec3& v, const char* what = "vector") { return Json::array({fin(v.x, what), fin(v.y, what), fin(v.z, what)}); }
Json jq(const Quat& q) {
    return Json::array({fin(q.x, "quaternion"), fin(q.y, "quaternion"), fin(q.z, "quaternion"), fin(q.w, "quaternion")});
}
Json jrgb(const session::Rgb& c) { return Json::array({fin(c.r, "color"), fin(c.g, "color"), fin(c.b, "color")}); }

Json bound(double v) { return std::isfinite(v) ? Json(v) : Json(nullptr); }

// --- dataset -------------------------------------------------------------

Json shape_json(const model::Shape& s) {
    return std::visit(overloaded{
                          [](const model::Sphere& sp) {
                              Json j;
                              j["type"] = "sphere";
                              j["center"] = jv(sp.center);
                              j["radius"] = fin(sp.radius, "number");
                              return j;
                          },
                          [](const model::Mesh& m) {
                              Json j;
                              j["type"] = "mesh";
                              j["vertices"] = Json::array();
                              for (const auto& v : m.vertices) j["vertices"].push_back(jv(v));
                              j["triangles"] = Json::array();
                              for (const auto& t : m.triangles) j["triangles"].push_back(Json::array({t[0], t[1], t[2]}));
                              return j;
                          },
                      },
                      s);
}

model::Shape shape_from(const Json& j, const std::string& ctx) {
    Obj o(j, ctx);
    const std::string type = str(o.req("type"), o.sub("type"));
    if (type == "sphere") {
        model::Sphere s{vec3(o.req("center"), o.sub("center")), num(o.req("radius"), o.sub("radius"))};
        o.done();
        return s;
    }
    if (type == "mesh") {
        model::Mesh m;
        const Json& verts = array(o.req("vertices"), o.sub("vertices"));
        if (verts.size() > kMaxMeshVertices)
            throw IoError(IoErrc::MeshTooLarge, ctx + ": mesh has " + std::to_string(verts.size()) +
                                                    " vertices, more than " + std::to_string(kMaxMeshVertices));
        m.vertices.reserve(verts.size());
        for (const auto& v : verts) m.vertices.push_back(vec3(v, o.sub("vertices")));
        for (const auto& t : array(o.req("triangles"), o.sub("triangles"))) {
            array(t, o.sub("triangles"), 3);
            std::array<std::uint32_t, 3> tri{};
            for (std::size_t k = 0; k < 3; ++k) {
                const std::uint64_t idx = uint(t[k], o.sub("triangles"));
                if (idx > UINT32_MAX) schema(o.sub("triangles"), "vertex index out of range");
                tri[k] = static_cast<std::uint32_t>(idx);
            }
            m.triangles.push_back(tri);
        }
        o.done();
        return m;
    }
    schema(o.sub("type"), "unknown shape type '" + type + "'");
}

// --- design --------------------------------------------------------------

Json scale_json(const design::ScaleSpec& s) {
    Json j;
    j["kind"] = std::string(design::scale_name(s.kind));
    j["unit_length"] = fin(s.unit_length, "number");
    if (const auto* log = std::get_if<design::ChronologicalLog>(&s.kind)) j["epsilon"] = fin(log->epsilon, "number");
    if (const auto* rel = std::get_if<design::Relative>(&s.kind)) j["baselines"] = rel->baselines;
    return j;
}

design::ScaleSpec scale_from(const Json& j, const std::string& ctx) {
    Obj o(j, ctx);
    design::ScaleSpec s;
    const std::string kind = str(o.req("kind"), o.sub("kind"));
    if (const Json* u = o.opt("unit_length")) s.unit_length = num(*u, o.sub("unit_length"));
    if (kind == "chronological_linear") {
        s.kind = design::ChronologicalLinear{};
    } else if (kind == "chronological_log") {
        design::ChronologicalLog log;
        if (const Json* e = o.opt("epsilon")) log.epsilon = num(*e, o.sub("epsilon"));
        s.kind = log;
    } else if (kind == "relative") {
        design::Relative rel;
        for (const auto& b : array(o.req("baselines"), o.sub("baselines")))
            rel.baselines.push_back(size(b, o.sub("baselines")));
        s.kind = rel;
    } else if (kind == "sequential") {
        s.kind = design::Sequential{};
    } else {
        schema(o.sub("kind"), "unknown scale '" + kind + "'");
    }
    o.done();
    return s;
}

Json layout_json(const design::LayoutSpec& l) {
    Json j;
    j["faceting"] = l.faceted() ? "faceted" : "unified";
    if (const auto* f = std::get_if<design::Faceted>(&l.faceting)) j["branch_count"] = f->branch_count;
    j["segmentation"] = l.segmented() ? "segmented" : "none";
    if (const auto* s = std::get_if<design::Segmented>(&l.segmentation)) j["period"] = s->period;
    j["branch_gap"] = fin(l.branch_gap, "number");
    return j;
}

design::LayoutSpec layout_from(const Json& j, const std::string& ctx) {
    Obj o(j, ctx);
    design::LayoutSpec l;
    const std::string faceting = o.opt("faceting") ? str(o.req("faceting"), o.sub("faceting")) : "unified";
    if (faceting == "faceted") {
        design::Faceted f;
        if (const Json* n = o.opt("branch_count")) f.branch_count = size(*n, o.sub("branch_count"));
        l.faceting = f;
    } else if (faceting != "unified") {
        schema(o.sub("faceting"), "expected 'unified' or 'faceted'");
    }
    const std::string seg = o.opt("segmentation") ? str(o.req("segmentation"), o.sub("segmentation")) : "none";
    if (seg == "segmented") {
        l.segmentation = design::Segmented{size(o.req("period"), o.sub("period"))};
    } else if (seg != "none") {
        schema(o.sub("segmentation"), "expected 'none' or 'segmented'");
    }
    if (const Json* g = o.opt("branch_gap")) l.branch_gap = num(*g, o.sub("branch_gap"));
    o.done();
    return l;
}

Json representation_json(const design::RepresentationSpec& r) {
    Json j;
    j["kind"] = std::string(design::representation_name(r));
    std::visit(overloaded{
                   [&](const design::FlatLine& f) {
                       j["origin"] = jv(f.origin);
                       j["direction"] = jv(f.direction);
                   },
                   [&](const design::ConvexArc& a) {
                       j["center"] = jv(a.center);
                       j["radius"] = fin(a.radius, "number");
                   },
                   [&](const design::ConvexParabola& p) {
                       j["a"] = fin(p.a, "number");
                       j["d0"] = fin(p.d0, "number");
                   },
                   [&](const design::ConcaveParabola& p) {
                       j["a"] = fin(p.a, "number");
                       j["d0"] = fin(p.d0, "number");
                   },
                   [&](const design::Helicoid& h) {
                       j["axis_point"] = jv(h.axis_point);
                       j["radius"] = fin(h.radius, "number");
                       j["points_per_loop"] = h.points_per_loop;
                       j["pitch"] = fin(h.pitch, "number");
                   },
                   [&](const design::Spherical& s) {
                       j["center"] = jv(s.center);
                       j["radius"] = fin(s.radius, "number");
                       j["loops"] = fin(s.loops, "number");
                   },
               },
               r);
    return j;
}

design::RepresentationSpec representation_from(const Json& j, const std::string& ctx) {
    Obj o(j, ctx);
    const std::string kind = str(o.req("kind"), o.sub("kind"));
    auto opt_num = [&](const char* k, double& out) {
        if (const Json* v = o.opt(k)) out = num(*v, o.sub(k));
    };
    auto opt_vec = [&](const char* k, Vec3& out) {
        if (const Json* v = o.opt(k)) out = vec3(*v, o.sub(k));
    };
    design::RepresentationSpec r;
    if (kind == "flat_line") {
        design::FlatLine f;
        opt_vec("origin", f.origin);
        opt_vec("direction", f.direction);
        r = f;
    } else if (kind == "convex_arc") {
        design::ConvexArc a;
        opt_vec("center", a.center);
        opt_num("radius", a.radius);
        r = a;
    } else if (kind == "convex_parabola") {
        design::ConvexParabola p;
        opt_num("a", p.a);
        opt_num("d0", p.d0);
        r = p;
    } else if (kind == "concave_parabola") {
        design::ConcaveParabola p;
        opt_num("a", p.a);
        opt_num("d0", p.d0);
        r = p;
    } else if (kind == "helicoid") {
        design::Helicoid h;
        opt_vec("axis_point", h.axis_point);
        opt_num("radius", h.radius);
        if (const Json* v = o.opt("points_per_loop")) h.points_per_loop = size(*v, o.sub("points_per_loop"));
        opt_num("pitch", h.pitch);
        r = h;
    } else if (kind == "spherical") {
        design::Spherical s;
        opt_vec("center", s.center);
        opt_num("radius", s.radius);
        opt_num("loops", s.loops);
        r = s;
    } else {
        schema(o.sub("kind"), "unknown representation '" + kind + "'");
    }
    o.done();
    return r;
}

Json support_json(const design::SupportSpec& s) {
    Json j;
    j["kind"] = std::string(design::support_name(s));
    std::visit(overloaded{
                   [](const design::VerticalPlane&) {},
                   [](const design::HorizontalPlane&) {},
                   [&](const design::MultiplePlanes& m) {
                       j["count"] = m.count;
                       j["plane_gap"] = fin(m.plane_gap, "number");
                   },
                   [&](const design::Cubic& c) {
                       j["rows"] = c.rows;
                       j["cols"] = c.cols;
                   },
                   [&](const design::ConcentricCylinders& c) { j["radius_step"] = fin(c.radius_step, "number"); },
               },
               s);
    return j;
}

design::SupportSpec support_from(const Json& j, const std::string& ctx) {
    Obj o(j, ctx);
    const std::string kind = str(o.req("kind"), o.sub("kind"));
    design::SupportSpec s;
    if (kind == "vertical_plane") {
        s = design::VerticalPlane{};
    } else if (kind == "horizontal_plane") {
        s = design::HorizontalPlane{};
    } else if (kind == "multiple_planes") {
        design::MultiplePlanes m;
        if (const Json* v = o.opt("count")) m.count = size(*v, o.sub("count"));
        if (const Json* v = o.opt("plane_gap")) m.plane_gap = num(*v, o.sub("plane_gap"));
        s = m;
    } else if (kind == "cubic") {
        design::Cubic c;
        if (const Json* v = o.opt("rows")) c.rows = size(*v, o.sub("rows"));
        if (const Json* v = o.opt("cols")) c.cols = size(*v, o.sub("cols"));
        s = c;
    } else if (kind == "concentric_cylinders") {
        design::ConcentricCylinders c;
        if (const Json* v = o.opt("radius_step")) c.radius_step = num(*v, o.sub("radius_step"));
        s = c;
    } else {
        schema(o.sub("kind"), "unknown support '" + kind + "'");
    }
    o.done();
    return s;
}

layout::CollapseRange range_from(Obj& o) {
    return {size(o.req("branch"), o.sub("branch")), size(o.req("start"), o.sub("start")),
            size(o.req("end"), o.sub("end"))};
}

Json range_json(const layout::CollapseRange& r) {
    return Json{{"branch", r.branch_id}, {"start", r.start_index}, {"end", r.end_index}};
}

Json hit_json(const bench::PatternHit& h) { return Json{{"object", h.object}, {"start", h.start}}; }

bench::PatternHit hit_from(const Json& j, const std::string& ctx) {
    Obj o(j, ctx);
    bench::PatternHit h{uint(o.req("object"), o.sub("object")), size(o.req("start"), o.sub("start"))};
    o.done();
    return h;
}

bench::Pattern pattern_from(const Json& j, const std::string& ctx) {
    array(j, ctx, 3);
    return {size(j[0], ctx), size(j[1], ctx), size(j[2], ctx)};
}

}  // namespace

// --- files ---------------------------------------------------------------

Json parse_json(const std::string& text) {
    try {
        return Json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw IoError(IoErrc::Parse, e.what());
    }
}

namespace {

// Last line of defence: nlohmann would silently print NaN as null.
void require_finite(const Json& j) {
    if (j.is_number_float()) {
        fin(j.get<double>(), "number");
    } else if (j.is_structured()) {
        for (const auto& v : j) require_finite(v);
    }
}

}  // namespace

std::string dump(const Json& doc) {
    require_finite(doc);
    return doc.dump(2) + "\n";
}

Json read_json_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError(IoErrc::Io, "cannot read " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    try {
        return parse_json(ss.str());
    } catch (const IoError& e) {
        throw IoError(IoErrc::Parse, path.string() + ": " + e.what());
    }
}

void write_json_file(const std::filesystem::path& path, const Json& doc) {
    const std::string text = dump(doc);
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError(IoErrc::Io, "cannot write " + path.string());
    out << text;
    if (!out) throw IoError(IoErrc::Io, "write failed for " + path.string());
}

// --- dataset -------------------------------------------------------------

Json to_json(const model::S4DDataset& d) {
    Json j;
    j["meta"] = Json{{"name", d.meta().name}, {"units", d.meta().units}};
    j["timestamps"] = Json::array();
    for (double t : d.timestamps()) j["timestamps"].push_back(fin(t, "timestamp"));
    j["time_points"] = Json::array();
    for (const auto& tp : d.time_points()) {
        Json snaps = Json::array();
        for (const auto& s : tp.snapshots) {
            Json js;
            js["id"] = s.id;
            js["shape"] = shape_json(s.shape);
            Json ann = Json::object();
            for (const auto& [k, v] : s.annotations) {
                if (const auto* c = std::get_if<model::Categorical>(&v))
                    ann[k] = c->label;
                else
                    ann[k] = fin(std::get<double>(v), "annotation");
            }
            js["annotations"] = std::move(ann);
            snaps.push_back(std::move(js));
        }
        j["time_points"].push_back(std::move(snaps));
    }
    j["tracks"] = Json::array();
    for (const auto& e : d.tracks())
        j["tracks"].push_back(Json{{"from", e.from}, {"to", e.to}, {"kind", std::string(model::to_string(e.kind))}});
    return j;
}

model::S4DDataset dataset_from_json(const Json& j) {
    Obj o(j, "dataset");
    model::DatasetMeta meta;
    {
        Obj m(o.req("meta"), o.sub("meta"));
        meta.name = str(m.req("name"), m.sub("name"));
        if (const Json* u = m.opt("units")) meta.units = str(*u, m.sub("units"));
        m.done();
    }
    std::vector<double> timestamps;
    for (const auto& t : array(o.req("timestamps"), o.sub("timestamps"))) timestamps.push_back(num(t, o.sub("timestamps")));

    std::vector<model::TimePoint> tps;
    const Json& jtps = array(o.req("time_points"), o.sub("time_points"));
    for (std::size_t i = 0; i < jtps.size(); ++i) {
        const std::string ctx = o.sub("time_points[" + std::to_string(i) + "]");
        model::TimePoint tp;
        tp.index = i;
        for (const auto& js : array(jtps[i], ctx)) {
            Obj so(js, ctx);
            model::ObjectSnapshot s;
            s.id = uint(so.req("id"), so.sub("id"));
            s.shape = shape_from(so.req("shape"), so.sub("shape"));
            if (const Json* ann = so.opt("annotations")) {
                if (!ann->is_object()) schema(so.sub("annotations"), "expected an object");
                for (const auto& [k, v] : ann->items()) {
                    if (v.is_string())
                        s.annotations[k] = model::Categorical{v.get<std::string>()};
                    else
                        s.annotations[k] = num(v, so.sub("annotations." + k));
                }
            }
            so.done();
            tp.snapshots.push_back(std::move(s));
        }
        tps.push_back(std::move(tp));
    }

    std::vector<model::TrackEdge> tracks;
    if (const Json* jt = o.opt("tracks")) {
        for (const auto& je : array(*jt, o.sub("tracks"))) {
            Obj eo(je, o.sub("tracks"));
            model::TrackEdge e;
            e.from = uint(eo.req("from"), eo.sub("from"));
            e.to = uint(eo.req("to"), eo.sub("to"));
            const std::string kind = str(eo.req("kind"), eo.sub("kind"));
            auto k = model::track_kind_from_string(kind);
            if (!k) schema(eo.sub("kind"), "unknown track kind '" + kind + "'");
            e.kind = *k;
            eo.done();
            tracks.push_back(e);
        }
    }
    o.done();
    return model::S4DDataset::build(std::move(meta), std::move(timestamps), std::move(tps), std::move(tracks));
}

// --- design --------------------------------------------------------------

Json to_json(const design::TimelineDesign& d) {
    Json j;
    j["scale"] = scale_json(d.scale);
    j["layout"] = layout_json(d.layout);
    j["representation"] = representation_json(d.representation);
    j["support"] = support_json(d.support);
    j["snapshot_scale"] = fin(d.snapshot_scale, "number");
    j["visible_window"] = d.visible_window ? Json(*d.visible_window) : Json(nullptr);
    return j;
}

design::TimelineDesign design_from_json(const Json& j) {
    Obj o(j, "design");
    if (const Json* p = o.opt("preset")) {
        o.done();
        try {
            return design::preset(str(*p, o.sub("preset")));
        } catch (const design::DesignError& e) {
            schema(o.sub("preset"), e.what());
        }
    }
    design::TimelineDesign d;
    if (const Json* v = o.opt("scale")) d.scale = scale_from(*v, o.sub("scale"));
    if (const Json* v = o.opt("layout")) d.layout = layout_from(*v, o.sub("layout"));
    d.representation = representation_from(o.req("representation"), o.sub("representation"));
    d.support = support_from(o.req("support"), o.sub("support"));
    if (const Json* v = o.opt("snapshot_scale")) d.snapshot_scale = num(*v, o.sub("snapshot_scale"));
    if (const Json* v = o.opt("visible_window")) d.visible_window = size(*v, o.sub("visible_window"));
    o.done();
    return d;
}

Json to_json(const layout::SlotRef& s) { return Json{{"branch", s.branch}, {"index", s.index}}; }

layout::SlotRef slot_from_json(const Json& j) {
    Obj o(j, "slot");
    layout::SlotRef s{size(o.req("branch"), o.sub("branch")), size(o.req("index"), o.sub("index"))};
    o.done();
    return s;
}

Json to_json(const layout::CutawayOperator& op) {
    return std::visit(overloaded{
                          [](const layout::PlaneCut& p) {
                              return Json{{"kind", "plane"}, {"normal", jv(p.normal)}, {"offset", fin(p.offset, "number")}};
                          },
                          [](const layout::BoxCut& b) {
                              return Json{{"kind", "box"}, {"center", jv(b.center)}, {"half_extents", jv(b.half_extents)}};
                          },
                      },
                      op);
}

layout::CutawayOperator cutaway_from_json(const Json& j) {
    Obj o(j, "cutaway");
    const std::string kind = str(o.req("kind"), o.sub("kind"));
    layout::CutawayOperator op;
    if (kind == "plane") {
        layout::PlaneCut p;
        p.normal = vec3(o.req("normal"), o.sub("normal"));
        if (const Json* v = o.opt("offset")) p.offset = num(*v, o.sub("offset"));
        op = p;
    } else if (kind == "box") {
        layout::BoxCut b;
        if (const Json* v = o.opt("center")) b.center = vec3(*v, o.sub("center"));
        b.half_extents = vec3(o.req("half_extents"), o.sub("half_extents"));
        op = b;
    } else {
        schema(o.sub("kind"), "unknown cutaway '" + kind + "'");
    }
    o.done();
    return op;
}

// --- actions -------------------------------------------------------------

Json to_json(const session::Action& action) {
    Json j;
    j["type"] = std::string(session::action_name(action));
    std::visit(overloaded{
                   [&](const session::Scroll& a) { j["delta"] = a.delta; },
                   [&](const session::Jump& a) {
                       j["branch"] = a.target.branch;
                       j["index"] = a.target.index;
                   },
                   [&](const session::SelectObject& a) {
                       j["id"] = a.id;
                       j["include_lineage"] = a.include_lineage;
                   },
                   [&](const session::Deselect& a) { j["id"] = a.id; },
                   [&](const session::SetFilter& a) {
                       j["field"] = a.field;
                       j["min"] = a.min ? bound(*a.min) : Json(nullptr);
                       j["max"] = a.max ? bound(*a.max) : Json(nullptr);
                   },
                   [&](const session::Collapse& a) { j.update(range_json(a.range)); },
                   [&](const session::Extend& a) { j.update(range_json(a.range)); },
                   [&](const session::SetLod& a) { j["stride"] = a.stride; },
                   [&](const session::SetCutaway& a) { j["op"] = a.op ? to_json(*a.op) : Json(nullptr); },
                   [&](const session::SetColorField& a) { j["field"] = a.field ? Json(*a.field) : Json(nullptr); },
                   [&](const session::Rotate& a) { j["quaternion"] = jq(a.rotation); },
                   [&](const session::Scale& a) { j["factor"] = fin(a.factor, "scale factor"); },
                   [&](const session::SetDesign& a) { j["design"] = to_json(a.design); },
               },
               action);
    return j;
}

session::Action action_from_json(const Json& j) {
    Obj o(j, "action");
    const std::string type = str(o.req("type"), o.sub("type"));
    session::Action a;
    if (type == "scroll") {
        a = session::Scroll{sint(o.req("delta"), o.sub("delta"))};
    } else if (type == "jump") {
        a = session::Jump{{size(o.req("branch"), o.sub("branch")), size(o.req("index"), o.sub("index"))}};
    } else if (type == "select_object") {
        session::SelectObject s{uint(o.req("id"), o.sub("id"))};
        if (const Json* v = o.opt("include_lineage")) s.include_lineage = boolean(*v, o.sub("include_lineage"));
        a = s;
    } else if (type == "deselect") {
        a = session::Deselect{uint(o.req("id"), o.sub("id"))};
    } else if (type == "set_filter") {
        session::SetFilter f;
        f.field = str(o.req("field"), o.sub("field"));
        if (const Json* v = o.opt("min")) f.min = num(*v, o.sub("min"));
        if (const Json* v = o.opt("max")) f.max = num(*v, o.sub("max"));
        a = f;
    } else if (type == "collapse") {
        a = session::Collapse{range_from(o)};
    } else if (type == "extend") {
        a = session::Extend{range_from(o)};
    } else if (type == "set_lod") {
        a = session::SetLod{size(o.req("stride"), o.sub("stride"))};
    } else if (type == "set_cutaway") {
        session::SetCutaway c;
        if (const Json* v = o.opt("op")) c.op = cutaway_from_json(*v);
        a = c;
    } else if (type == "set_color_field") {
        session::SetColorField c;
        if (const Json* v = o.opt("field")) c.field = str(*v, o.sub("field"));
        a = c;
    } else if (type == "rotate") {
        a = session::Rotate{quat(o.req("quaternion"), o.sub("quaternion"))};
    } else if (type == "scale") {
        a = session::Scale{num(o.req("factor"), o.sub("factor"))};
    } else if (type == "set_design") {
        a = session::SetDesign{design_from_json(o.req("design"))};
    } else {
        schema(o.sub("type"), "unknown action '" + type + "'");
    }
    o.done();
    return a;
}

// --- state and scene -----------------------------------------------------

Json to_json(const session::SessionState& s) {
    Json j;
    j["dataset"] = s.dataset ? s.dataset->meta().name : "";
    j["design"] = to_json(s.design);
    j["central"] = to_json(s.central);
    j["selection"] = Json::array();
    for (const auto& obj : s.selection) j["selection"].push_back(Json{{"root_id", obj.root_id}, {"members", obj.members}});
    j["filters"] = Json::array();
    for (const auto& f : s.filters)
        j["filters"].push_back(Json{{"field", f.field}, {"min", bound(f.min)}, {"max", bound(f.max)}});
    j["collapses"] = Json::array();
    for (const auto& c : s.collapses) j["collapses"].push_back(range_json(c));
    j["lod_stride"] = s.lod_stride;
    j["cutaway"] = s.cutaway ? to_json(*s.cutaway) : Json(nullptr);
    j["color_field"] = s.color_field ? Json(*s.color_field) : Json(nullptr);
    j["global_rotation"] = jq(s.global_rotation);
    j["global_scale"] = fin(s.global_scale, "global scale");
    return j;
}

Json scene_to_json(const session::SessionState& state, const session::RenderedScene& scene) {
    Json j;
    j["design"] = to_json(state.design);
    j["central"] = to_json(scene.layout.central);
    j["lane_count"] = scene.layout.lane_count;
    j["placements"] = Json::array();
    for (std::size_t k = 0; k < scene.layout.placements.size(); ++k) {
        const auto& p = scene.layout.placements[k];
        Json jp;
        jp["branch"] = p.branch_id;
        jp["index"] = p.time_index;
        jp["lane"] = p.lane;
        jp["segment"] = p.segment;
        jp["arc_length"] = fin(p.arc_length, "arc length");
        jp["position"] = jv(p.position, "position");
        jp["quaternion"] = jq(p.orientation);
        jp["scale"] = fin(p.uniform_scale, "scale");
        jp["visibility"] = std::string(layout::to_string(p.visibility));
        jp["color"] = jrgb(scene.placement_colors[k]);
        j["placements"].push_back(std::move(jp));
    }
    j["objects"] = Json::array();
    for (const auto& o : scene.objects) {
        Json jo;
        jo["id"] = o.id;
        jo["branch"] = o.branch_id;
        jo["index"] = o.time_index;
        jo["position"] = jv(o.position, "position");
        jo["quaternion"] = jq(o.orientation);
        jo["scale"] = fin(o.scale, "scale");
        jo["visibility"] = std::string(layout::to_string(o.visibility));
        jo["clip"] = std::string(layout::to_string(o.clip));
        jo["color"] = jrgb(o.color);
        j["objects"].push_back(std::move(jo));
    }
    j["gaps"] = Json::array();
    for (const auto& g : scene.layout.gap_indicators) {
        j["gaps"].push_back(Json{{"branch", g.branch_id},
                                 {"lane", g.lane},
                                 {"start", g.start_index},
                                 {"end", g.end_index},
                                 {"position", jv(g.position, "position")},
                                 {"count", g.collapsed_count}});
    }
    return j;
}

// --- bench ---------------------------------------------------------------

Json to_json(const bench::GenConfig& c) {
    return Json{{"time_point_count", c.time_point_count},
                {"object_count", c.object_count},
                {"group_count", c.group_count},
                {"pattern", c.pattern},
                {"pattern_occurrences", c.pattern_occurrences},
                {"gaussians_per_segment_length", c.gaussians_per_segment_length},
                {"seed", c.seed}};
}

bench::GenConfig gen_config_from_json(const Json& j) {
    Obj o(j, "config");
    bench::GenConfig c;
    auto opt_size = [&](const char* k, std::size_t& out) {
        if (const Json* v = o.opt(k)) out = size(*v, o.sub(k));
    };
    opt_size("time_point_count", c.time_point_count);
    opt_size("object_count", c.object_count);
    opt_size("group_count", c.group_count);
    if (const Json* v = o.opt("pattern")) c.pattern = pattern_from(*v, o.sub("pattern"));
    opt_size("pattern_occurrences", c.pattern_occurrences);
    opt_size("gaussians_per_segment_length", c.gaussians_per_segment_length);
    if (const Json* v = o.opt("seed")) c.seed = uint(*v, o.sub("seed"));
    o.done();
    return c;
}

Json to_json(const bench::GroundTruth& t) {
    Json j;
    j["pattern"] = t.pattern;
    j["occurrences"] = Json::array();
    for (const auto& h : t.occurrences) j["occurrences"].push_back(hit_json(h));
    j["value_argmax"] = t.value_argmax;
    j["group_counts"] = t.group_counts;
    j["gaussians"] = Json::array();
    for (const auto& g : t.gaussians)
        j["gaussians"].push_back(Json{{"mean", g.mean}, {"amplitude", g.amplitude}, {"sigma", g.sigma}});
    return j;
}

bench::GroundTruth truth_from_json(const Json& j) {
    Obj o(j, "truth");
    bench::GroundTruth t;
    t.pattern = pattern_from(o.req("pattern"), o.sub("pattern"));
    for (const auto& h : array(o.req("occurrences"), o.sub("occurrences")))
        t.occurrences.push_back(hit_from(h, o.sub("occurrences")));
    t.value_argmax = size(o.req("value_argmax"), o.sub("value_argmax"));
    for (const auto& c : array(o.req("group_counts"), o.sub("group_counts")))
        t.group_counts.push_back(size(c, o.sub("group_counts")));
    if (const Json* gs = o.opt("gaussians")) {
        for (const auto& g : array(*gs, o.sub("gaussians"))) {
            Obj go(g, o.sub("gaussians"));
            t.gaussians.push_back({num(go.req("mean"), go.sub("mean")), num(go.req("amplitude"), go.sub("amplitude")),
                                   num(go.req("sigma"), go.sub("sigma"))});
            go.done();
        }
    }
    o.done();
    return t;
}

Json to_json(const bench::TaskSpec& task) {
    Json j;
    j["kind"] = std::string(bench::task_name(task.kind));
    std::visit(overloaded{
                   [&](const bench::LocateTask& t) { j["target"] = t.target; },
                   [&](const bench::CountTask& t) { j["group"] = t.group; },
                   [&](const bench::PatternTask& t) { j["pattern"] = t.pattern; },
                   [&](const bench::MaximumTask&) {},
               },
               task.kind);
    j["time_limit"] = task.time_limit ? Json(*task.time_limit) : Json(nullptr);
    return j;
}

bench::TaskSpec task_from_json(const Json& j) {
    Obj o(j, "task");
    const std::string kind = str(o.req("kind"), o.sub("kind"));
    bench::TaskKind k;
    if (kind == "locate")
        k = bench::LocateTask{size(o.req("target"), o.sub("target"))};
    else if (kind == "count")
        k = bench::CountTask{size(o.req("group"), o.sub("group"))};
    else if (kind == "pattern")
        k = bench::PatternTask{pattern_from(o.req("pattern"), o.sub("pattern"))};
    else if (kind == "maximum")
        k = bench::MaximumTask{};
    else
        schema(o.sub("kind"), "unknown task '" + kind + "'");
    bench::TaskSpec t = bench::TaskSpec::make(k);
    // Present-but-null keeps the default; an explicit number overrides it.
    if (const Json* v = o.opt("time_limit")) {
        const double lim = num(*v, o.sub("time_limit"));
        if (!(lim > 0.0)) schema(o.sub("time_limit"), "expected a positive number");
        t.time_limit = lim;
    }
    o.done();
    return t;
}

Json to_json(const bench::TaskAnswer& a) {
    Json j;
    j["value"] = a.value;
    j["occurrences"] = Json::array();
    for (const auto& h : a.occurrences) j["occurrences"].push_back(hit_json(h));
    return j;
}

bench::TaskAnswer answer_from_json(const Json& j) {
    Obj o(j, "answer");
    bench::TaskAnswer a;
    if (const Json* v = o.opt("value")) a.value = size(*v, o.sub("value"));
    if (const Json* v = o.opt("occurrences"))
        for (const auto& h : array(*v, o.sub("occurrences"))) a.occurrences.push_back(hit_from(h, o.sub("occurrences")));
    o.done();
    return a;
}

Json to_json(const bench::ExplorationTrace& trace) {
    Json j;
    j["events"] = Json::array();
    for (const auto& e : trace.events) {
        Json je{{"time", e.time}, {"kind", std::string(bench::to_string(e.kind))}};
        if (e.answer) je["answer"] = to_json(*e.answer);
        j["events"].push_back(std::move(je));
    }
    return j;
}

bench::ExplorationTrace trace_from_json(const Json& j) {
    Obj o(j, "trace");
    bench::ExplorationTrace t;
    for (const auto& je : array(o.req("events"), o.sub("events"))) {
        Obj eo(je, o.sub("events"));
        bench::TraceEvent e;
        e.time = num(eo.req("time"), eo.sub("time"));
        const std::string kind = str(eo.req("kind"), eo.sub("kind"));
        auto k = bench::trace_event_kind_from_string(kind);
        if (!k) schema(eo.sub("kind"), "unknown event '" + kind + "'");
        e.kind = *k;
        if (const Json* a = eo.opt("answer")) e.answer = answer_from_json(*a);
        eo.done();
        t.events.push_back(std::move(e));
    }
    o.done();
    return t;
}

Json result_to_json(const bench::TaskSpec& task, const bench::TaskResult& r) {
    Json j;
    j["task"] = std::string(bench::task_name(task.kind));
    j["answer"] = to_json(r.answer);
    j["timed_out"] = r.timed_out;
    j["elapsed"] = fin(r.elapsed, "number");
    Json m = Json::object();
    if (r.locate_error) m["locate_error"] = *r.locate_error;
    if (r.count_error_rate) m["count_error_rate"] = *r.count_error_rate;
    if (r.precision) m["precision"] = *r.precision;
    if (r.recall) m["recall"] = *r.recall;
    if (r.accuracy) m["accuracy"] = *r.accuracy;
    j["metrics"] = std::move(m);
    j["interactions"] = Json{{"scroll", r.scrolls}, {"jump", r.jumps}, {"select", r.selections}};
    return j;
}

}  // namespace tl3d::io
