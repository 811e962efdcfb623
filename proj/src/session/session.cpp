#include "tl3d/session/session.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <stdexcept>

#include "tl3d/simd/kernels.hpp"

namespace tl3d::session {

using layout::CollapseRange;
using layout::SlotRef;
using layout::TimelineBranch;
using layout::Visibility;
using model::SnapshotId;

namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

[[noreturn]] void reject(const std::string& msg) { throw SessionError(SessionErrc::InvalidAction, msg); }

bool overlaps(const model::Object4D& a, const model::Object4D& b) {
    auto i = a.members.begin(), j = b.members.begin();
    while (i != a.members.end() && j != b.members.end()) {
        if (*i == *j) return true;
        *i < *j ? ++i : ++j;
    }
    return false;
}

// Keeps the central time index when some branch still shows it; collapses
// refer to branch ids and are dropped when the branch set changes.
void reanchor(SessionState& s, const std::vector<TimelineBranch>& before, ChangedFlags& f) {
    const auto after = displayed_branches(s);
    if (after == before) return;
    f.branches = f.layout = f.colors = true;
    s.collapses.clear();
    const SlotRef old = s.central;
    if (after.empty()) {
        s.central = {};
    } else if (old.branch < after.size() && after[old.branch].contains(old.index)) {
        // unchanged
    } else {
        auto it = std::find_if(after.begin(), after.end(), [&](const TimelineBranch& b) { return b.contains(old.index); });
        if (it != after.end()) {
            s.central = {static_cast<std::size_t>(it - after.begin()), old.index};
        } else {
            const std::size_t b = std::min(old.branch, after.size() - 1);
            s.central = {b, std::clamp(old.index, after[b].start_index, after[b].end_index())};
        }
    }
    f.central = f.central || !(s.central == old);
}

void check_renderable(const SessionState& s) {
    const auto branches = displayed_branches(s);
    if (branches.empty()) return;
    try {
        layout::LayoutSolver(*s.dataset, branches, s.design, s.collapses, s.lod_stride).solve(s.central);
    } catch (const layout::LayoutError& e) {
        reject(e.what());
    }
}

bool field_exists(const model::S4DDataset& ds, const std::string& field) {
    for (const auto& tp : ds.time_points())
        for (const auto& snap : tp.snapshots)
            if (snap.annotations.count(field)) return true;
    return false;
}

void check_range(const SessionState& s, const CollapseRange& r, const std::vector<TimelineBranch>& branches) {
    if (r.branch_id >= branches.size()) reject("no branch " + std::to_string(r.branch_id));
    const auto& b = branches[r.branch_id];
    if (r.start_index > r.end_index || !b.contains(r.start_index) || !b.contains(r.end_index))
        reject("range [" + std::to_string(r.start_index) + ", " + std::to_string(r.end_index) +
               "] is not inside branch " + std::to_string(r.branch_id));
    (void)s;
}

void sort_collapses(std::vector<CollapseRange>& c) {
    std::sort(c.begin(), c.end(), [](const CollapseRange& a, const CollapseRange& b) {
        return a.branch_id != b.branch_id ? a.branch_id < b.branch_id : a.start_index < b.start_index;
    });
}

}  // namespace

bool SessionState::operator==(const SessionState& o) const {
    return dataset.get() == o.dataset.get() && design == o.design && central == o.central &&
           selection == o.selection && filters == o.filters && collapses == o.collapses &&
           lod_stride == o.lod_stride && cutaway == o.cutaway && color_field == o.color_field &&
           global_rotation == o.global_rotation && global_scale == o.global_scale;
}

std::string_view action_name(const Action& a) {
    static constexpr std::string_view names[] = {"scroll",   "jump",    "select_object", "deselect",  "set_filter",
                                                  "collapse", "extend",  "set_lod",       "set_cutaway",
                                                  "set_color_field", "rotate", "scale", "set_design"};
    return names[a.index()];
}

std::vector<TimelineBranch> displayed_branches(const SessionState& state) {
    const model::S4DDataset& ds = *state.dataset;
    const std::vector<model::Object4D> objects = state.selection.empty() ? model::all_objects(ds) : state.selection;
    std::vector<TimelineBranch> out;
    if (state.design.layout.faceted()) {
        for (const auto& obj : objects)
            for (const auto& b : model::lineage_branches(obj, ds)) out.push_back(TimelineBranch::from_lineage(b));
        return out;
    }
    std::map<std::size_t, std::vector<SnapshotId>> by_time;
    for (const auto& obj : objects)
        for (SnapshotId id : obj.members) by_time[ds.time_index_of(id)].push_back(id);
    if (by_time.empty()) return out;
    TimelineBranch unified;
    unified.start_index = by_time.begin()->first;
    unified.slots.resize(by_time.rbegin()->first - unified.start_index + 1);
    for (auto& [t, ids] : by_time) {
        std::sort(ids.begin(), ids.end());
        ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
        unified.slots[t - unified.start_index] = ids;
    }
    out.push_back(std::move(unified));
    return out;
}

SessionState initial_state(std::shared_ptr<const model::S4DDataset> dataset, design::TimelineDesign design) {
    if (!dataset) throw SessionError(SessionErrc::InvalidState, "session needs a dataset");
    const auto report = design::validate_design(design);
    if (!report.ok()) throw SessionError(SessionErrc::InvalidState, report.error_summary());
    SessionState s;
    s.dataset = std::move(dataset);
    s.design = std::move(design);
    const auto branches = displayed_branches(s);
    if (!branches.empty()) s.central = {0, branches[0].start_index};
    return s;
}

Transition apply(const SessionState& state, const Action& action) {
    SessionState s = state;
    ChangedFlags f;
    const model::S4DDataset& ds = *s.dataset;
    const auto branches = displayed_branches(s);

    std::visit(
        overloaded{
            [&](const Scroll& a) {
                if (branches.empty()) reject("nothing to scroll");
                const auto& b = branches[s.central.branch];
                const auto lo = static_cast<std::int64_t>(b.start_index);
                const auto hi = static_cast<std::int64_t>(b.end_index());
                const auto cur = static_cast<std::int64_t>(s.central.index);
                // Saturating: deltas near the int64 limits must not overflow.
                std::int64_t next;
                if (a.delta > 0)
                    next = a.delta > hi - cur ? hi : cur + a.delta;
                else
                    next = a.delta < lo - cur ? lo : cur + a.delta;
                s.central.index = static_cast<std::size_t>(next);
                f.central = f.layout = s.central.index != state.central.index;
            },
            [&](const Jump& a) {
                if (a.target.branch >= branches.size() || !branches[a.target.branch].contains(a.target.index))
                    reject("no slot (" + std::to_string(a.target.branch) + ", " + std::to_string(a.target.index) +
                           ")");
                s.central = a.target;
                f.central = f.layout = !(s.central == state.central);
            },
            [&](const SelectObject& a) {
                if (!ds.contains(a.id)) reject("unknown snapshot " + std::to_string(a.id));
                model::Object4D obj = model::expand_4d_object(ds, a.id, a.include_lineage);
                std::vector<model::Object4D> kept;
                std::set<SnapshotId> merged(obj.members.begin(), obj.members.end());
                bool merging = false;
                for (auto& sel : s.selection) {
                    if (overlaps(sel, obj)) {
                        merging = true;
                        merged.insert(sel.members.begin(), sel.members.end());
                    } else {
                        kept.push_back(std::move(sel));
                    }
                }
                if (merging) obj = model::make_object(ds, {merged.begin(), merged.end()});
                kept.push_back(std::move(obj));
                std::sort(kept.begin(), kept.end(),
                          [](const model::Object4D& x, const model::Object4D& y) { return x.root_id < y.root_id; });
                s.selection = std::move(kept);
                reanchor(s, branches, f);
                check_renderable(s);
            },
            [&](const Deselect& a) {
                auto it = std::find_if(s.selection.begin(), s.selection.end(), [&](const model::Object4D& o) {
                    return std::binary_search(o.members.begin(), o.members.end(), a.id);
                });
                if (it == s.selection.end()) reject("snapshot " + std::to_string(a.id) + " is not selected");
                s.selection.erase(it);
                reanchor(s, branches, f);
                check_renderable(s);
            },
            [&](const SetFilter& a) {
                if (a.field.empty()) reject("filter needs a field");
                auto it = std::find_if(s.filters.begin(), s.filters.end(),
                                       [&](const ValueFilter& v) { return v.field == a.field; });
                if (!a.min && !a.max) {
                    if (it == s.filters.end()) return;
                    s.filters.erase(it);
                } else {
                    ValueFilter v{a.field};
                    if (a.min) v.min = *a.min;
                    if (a.max) v.max = *a.max;
                    if (std::isnan(v.min) || std::isnan(v.max) || v.min > v.max) reject("filter needs min <= max");
                    if (!field_exists(ds, a.field)) reject("no annotation '" + a.field + "'");
                    if (it != s.filters.end())
                        *it = v;
                    else
                        s.filters.push_back(v);
                    std::sort(s.filters.begin(), s.filters.end(),
                              [](const ValueFilter& x, const ValueFilter& y) { return x.field < y.field; });
                }
                f.layout = f.colors = s.filters != state.filters;
            },
            [&](const Collapse& a) {
                check_range(s, a.range, branches);
                CollapseRange r = a.range;
                std::vector<CollapseRange> out;
                for (const auto& c : s.collapses) {
                    const bool touch = c.branch_id == r.branch_id && c.start_index <= r.end_index + 1 &&
                                       r.start_index <= c.end_index + 1;
                    if (touch) {
                        r.start_index = std::min(r.start_index, c.start_index);
                        r.end_index = std::max(r.end_index, c.end_index);
                    } else {
                        out.push_back(c);
                    }
                }
                out.push_back(r);
                sort_collapses(out);
                s.collapses = std::move(out);
                f.layout = s.collapses != state.collapses;
                check_renderable(s);
            },
            [&](const Extend& a) {
                check_range(s, a.range, branches);
                const CollapseRange& r = a.range;
                std::vector<CollapseRange> out;
                bool hit = false;
                for (const auto& c : s.collapses) {
                    if (c.branch_id != r.branch_id || c.end_index < r.start_index || r.end_index < c.start_index) {
                        out.push_back(c);
                        continue;
                    }
                    hit = true;
                    if (c.start_index < r.start_index) out.push_back({c.branch_id, c.start_index, r.start_index - 1});
                    if (c.end_index > r.end_index) out.push_back({c.branch_id, r.end_index + 1, c.end_index});
                }
                if (!hit) reject("no collapsed range overlaps the extension");
                sort_collapses(out);
                s.collapses = std::move(out);
                f.layout = true;
            },
            [&](const SetLod& a) {
                if (a.stride == 0) reject("lod stride must be >= 1");
                s.lod_stride = a.stride;
                f.layout = s.lod_stride != state.lod_stride;
            },
            [&](const SetCutaway& a) {
                if (a.op) {
                    try {
                        layout::validate_cutaway(*a.op);
                    } catch (const layout::LayoutError& e) {
                        reject(e.what());
                    }
                }
                s.cutaway = a.op;
                f.layout = s.cutaway != state.cutaway;
            },
            [&](const SetColorField& a) {
                if (a.field && !field_exists(ds, *a.field)) reject("no annotation '" + *a.field + "'");
                s.color_field = a.field;
                f.colors = s.color_field != state.color_field;
            },
            [&](const Rotate& a) {
                const double n = a.rotation.norm();
                if (!std::isfinite(n) || n < 1e-12) reject("rotation must be a non-zero finite quaternion");
                s.global_rotation = (a.rotation.normalized() * s.global_rotation).normalized();
                f.transform = true;
            },
            [&](const Scale& a) {
                const double next = s.global_scale * a.factor;
                if (!std::isfinite(a.factor) || !(a.factor > 0.0) || !std::isfinite(next) || !(next > 0.0))
                    reject("scale factor must be finite and positive");
                s.global_scale = next;
                f.transform = a.factor != 1.0;
            },
            [&](const SetDesign& a) {
                const auto report = design::validate_design(a.design);
                if (!report.ok()) reject(report.error_summary());
                s.design = a.design;
                f.layout = s.design != state.design;
                reanchor(s, branches, f);
                check_renderable(s);
            },
        },
        action);
    return {std::move(s), f};
}

SessionState replay(const SessionState& initial, const std::vector<Action>& actions) {
    SessionState s = initial;
    for (const Action& a : actions) s = session::apply(s, a).state;
    return s;
}

namespace {

struct Colorizer {
    const model::S4DDataset& ds;
    std::optional<std::string> field;
    bool numeric = false;
    double lo = 0.0, hi = 0.0;
    std::map<std::string, std::size_t> categories;

    Colorizer(const model::S4DDataset& d, std::optional<std::string> f) : ds(d), field(std::move(f)) {
        if (!field) return;
        std::set<std::string> labels;
        bool any_number = false;
        for (const auto& tp : ds.time_points())
            for (const auto& snap : tp.snapshots) {
                auto it = snap.annotations.find(*field);
                if (it == snap.annotations.end()) continue;
                if (const auto* c = std::get_if<model::Categorical>(&it->second))
                    labels.insert(c->label);
                else
                    any_number = true;
            }
        numeric = any_number;
        if (numeric) std::tie(lo, hi) = model::annotation_range(ds, *field);
        std::size_t k = 0;
        for (const auto& l : labels) categories[l] = k++;
    }

    Rgb operator()(const model::ObjectSnapshot& snap) const {
        if (!field) return kDefaultColor;
        auto it = snap.annotations.find(*field);
        if (it == snap.annotations.end()) return kUnannotatedColor;
        if (const double* v = std::get_if<double>(&it->second))
            return numeric ? ColorMap::viridis().map(*v, lo, hi) : kUnannotatedColor;
        if (numeric) return kUnannotatedColor;
        return categorical_color(categories.at(std::get<model::Categorical>(it->second).label));
    }
};

bool is_filtered(const model::ObjectSnapshot& snap, const std::vector<ValueFilter>& filters) {
    for (const auto& f : filters)
        if (auto v = snap.numeric(f.field); v && (*v < f.min || *v > f.max)) return true;
    return false;
}

}  // namespace

RenderedScene render_state(const SessionState& state) {
    RenderedScene scene;
    const model::S4DDataset& ds = *state.dataset;
    const auto branches = displayed_branches(state);
    if (branches.empty()) return scene;

    layout::LayoutSolver solver(ds, branches, state.design, state.collapses, state.lod_stride);
    scene.layout = solver.solve(state.central);
    const Colorizer colorize(ds, state.color_field);

    // Objects keep their offsets from the first non-empty slot of their branch.
    std::vector<Vec3> reference(branches.size());
    for (std::size_t b = 0; b < branches.size(); ++b)
        for (const auto& slot : branches[b].slots)
            if (!slot.empty()) {
                reference[b] = layout::slot_barycenter(ds, slot);
                break;
            }

    const auto& kernels = simd::kernels();
    const auto matrix_of = [](const Quat& q) { return q.to_matrix(); };
    std::vector<double> xs, ys, zs, ox, oy, oz;

    scene.placement_colors.reserve(scene.layout.placements.size());
    for (auto& p : scene.layout.placements) {
        p.orientation = (p.orientation * state.global_rotation).normalized();
        p.uniform_scale *= state.global_scale;
        const auto ids = branches[p.branch_id].slot(p.time_index);

        std::vector<layout::ClipState> clips(ids.size(), layout::ClipState::Kept);
        if (state.cutaway && !ids.empty())
            clips = layout::apply_cutaway(ds, ids, *state.cutaway, layout::slot_barycenter(ds, ids));

        xs.resize(ids.size());
        ys.resize(ids.size());
        zs.resize(ids.size());
        ox.resize(ids.size());
        oy.resize(ids.size());
        oz.resize(ids.size());
        for (std::size_t k = 0; k < ids.size(); ++k) {
            const Vec3 c = model::shape_center(ds.snapshot(ids[k]).shape);
            xs[k] = c.x;
            ys[k] = c.y;
            zs[k] = c.z;
        }
        if (!ids.empty()) {
            const auto m = matrix_of(p.orientation);
            kernels.transform({xs.data(), ys.data(), zs.data(), ids.size()}, m.data(), reference[p.branch_id],
                              p.uniform_scale, p.position, {ox.data(), oy.data(), oz.data(), ids.size()});
        }

        std::size_t shown = 0;
        Rgb sum;
        for (std::size_t k = 0; k < ids.size(); ++k) {
            const auto& snap = ds.snapshot(ids[k]);
            SceneObject o;
            o.id = ids[k];
            o.branch_id = p.branch_id;
            o.time_index = p.time_index;
            o.position = {ox[k], oy[k], oz[k]};
            o.orientation = p.orientation;
            o.scale = p.uniform_scale;
            o.filtered = is_filtered(snap, state.filters);
            o.visibility = o.filtered && p.visibility == Visibility::Visible ? Visibility::FilteredOut : p.visibility;
            o.clip = clips[k];
            o.color = colorize(snap);
            if (!o.filtered) {
                ++shown;
                sum = {sum.r + o.color.r, sum.g + o.color.g, sum.b + o.color.b};
            }
            scene.objects.push_back(o);
        }
        if (!ids.empty() && shown == 0 && p.visibility == Visibility::Visible) p.visibility = Visibility::FilteredOut;
        const double n = static_cast<double>(shown);
        scene.placement_colors.push_back(shown ? Rgb{sum.r / n, sum.g / n, sum.b / n}
                                               : (ids.empty() ? kUnannotatedColor : colorize(ds.snapshot(ids[0]))));
    }
    return scene;
}

bool argmax_invariance_check(const SessionState& state, const std::function<double(double)>& f) {
    if (!state.color_field) throw SessionError(SessionErrc::InvalidState, "no color field bound");
    const model::S4DDataset& ds = *state.dataset;
    const std::string& field = *state.color_field;

    std::vector<std::optional<double>> best(ds.time_point_count());
    std::vector<double> values;
    for (const auto& tp : ds.time_points())
        for (const auto& snap : tp.snapshots)
            if (auto v = snap.numeric(field)) {
                values.push_back(*v);
                best[tp.index] = best[tp.index] ? std::max(*best[tp.index], *v) : *v;
            }
    if (values.empty()) throw SessionError(SessionErrc::InvalidState, "'" + field + "' has no numerical values");

    std::sort(values.begin(), values.end());
    values.erase(std::unique(values.begin(), values.end()), values.end());
    for (std::size_t i = 1; i < values.size(); ++i)
        if (!(f(values[i]) > f(values[i - 1])))
            throw std::invalid_argument("transform is not strictly increasing on the field values");

    auto argmax = [&](bool transformed) {
        std::optional<std::size_t> arg;
        double top = 0.0;
        for (std::size_t t = 0; t < best.size(); ++t) {
            if (!best[t]) continue;
            const double v = transformed ? f(*best[t]) : *best[t];
            if (!arg || v > top) {
                arg = t;
                top = v;
            }
        }
        return arg;
    };
    return argmax(false) == argmax(true);
}

}  // namespace tl3d::session
