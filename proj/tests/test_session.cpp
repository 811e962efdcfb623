#include <cmath>
#include <memory>
#include <stdexcept>

#include "doctest.h"
#include "fixtures.hpp"
#include "tl3d/bench/generator.hpp"
#include "tl3d/session/session.hpp"

using namespace tl3d;
using namespace tl3d::session;
using layout::Visibility;

namespace {

std::shared_ptr<const model::S4DDataset> share(model::S4DDataset ds) {
    return std::make_shared<const model::S4DDataset>(std::move(ds));
}

SessionErrc session_error(const SessionState& s, const Action& a) {
    try {
        session::apply(s, a);
    } catch (const SessionError& e) {
        return e.code();
    }
    FAIL("expected a SessionError");
    return SessionErrc::InvalidState;
}

void check_close(const Vec3& a, const Vec3& b, double tol) {
    CHECK(std::abs(a.x - b.x) < tol);
    CHECK(std::abs(a.y - b.y) < tol);
    CHECK(std::abs(a.z - b.z) < tol);
}

void check_close(const Rgb& a, const Rgb& b, double tol = 1e-12) {
    CHECK(std::abs(a.r - b.r) < tol);
    CHECK(std::abs(a.g - b.g) < tol);
    CHECK(std::abs(a.b - b.b) < tol);
}

Vec3 mean_center(const model::S4DDataset& ds, const std::vector<model::SnapshotId>& ids) {
    Vec3 sum;
    for (auto id : ids) sum = sum + model::shape_center(ds.snapshot(id).shape);
    return sum * (1.0 / static_cast<double>(ids.size()));
}

}  // namespace

TEST_CASE("initial state") {
    const auto ds = share(fixtures::fission());
    const auto s = initial_state(ds, design::preset("curved-faceted"));
    CHECK(s.central == layout::SlotRef{0, 0});
    CHECK(s.selection.empty());
    // Faceted with nothing selected: three lineage branches of object 0, one of object 9.
    CHECK(displayed_branches(s).size() == 4);
    CHECK_THROWS_AS(initial_state(nullptr, design::preset("curved-faceted")), SessionError);
    auto bad = design::preset("helicoid-unified");
    bad.support = design::VerticalPlane{};
    bad.layout.faceting = design::Faceted{};
    CHECK_THROWS_AS(initial_state(ds, bad), SessionError);
}

TEST_CASE("scroll clamps to the central branch") {
    const auto ds = share(fixtures::chains(10, 2));
    const auto s = initial_state(ds, design::preset("curved-faceted"));
    auto t = session::apply(s, Scroll{3});
    CHECK(t.state.central.index == 3);
    CHECK(t.changed.central);
    CHECK(t.changed.layout);
    CHECK_FALSE(t.changed.colors);
    CHECK(session::apply(t.state, Scroll{100}).state.central.index == 9);
    CHECK(session::apply(t.state, Scroll{-100}).state.central.index == 0);
    CHECK(session::apply(t.state, Scroll{INT64_MAX}).state.central.index == 9);
    CHECK(session::apply(t.state, Scroll{INT64_MIN}).state.central.index == 0);
    const auto still = session::apply(s, Scroll{-1});
    CHECK(still.state == s);
    CHECK_FALSE(still.changed.any());
}

TEST_CASE("invalid actions leave the state untouched") {
    const auto ds = share(fixtures::fission());
    const auto s = initial_state(ds, design::preset("curved-faceted"));
    const SessionState copy = s;
    CHECK(session_error(s, Jump{{7, 0}}) == SessionErrc::InvalidAction);
    CHECK(session_error(s, Jump{{0, 5}}) == SessionErrc::InvalidAction);  // branch 0 is 0-1-2
    CHECK(session_error(s, SelectObject{99}) == SessionErrc::InvalidAction);
    CHECK(session_error(s, Deselect{0}) == SessionErrc::InvalidAction);
    CHECK(session_error(s, SetFilter{"nope", 1.0, {}}) == SessionErrc::InvalidAction);
    CHECK(session_error(s, SetFilter{"volume", 5.0, 1.0}) == SessionErrc::InvalidAction);
    CHECK(session_error(s, SetColorField{"nope"}) == SessionErrc::InvalidAction);
    CHECK(session_error(s, SetLod{0}) == SessionErrc::InvalidAction);
    CHECK(session_error(s, Rotate{Quat{0, 0, 0, 0}}) == SessionErrc::InvalidAction);
    CHECK(session_error(s, Scale{0.0}) == SessionErrc::InvalidAction);
    CHECK(session_error(s, Scale{-2.0}) == SessionErrc::InvalidAction);
    CHECK(session_error(s, Scale{NAN}) == SessionErrc::InvalidAction);
    CHECK(session_error(s, SetCutaway{layout::PlaneCut{{0, 0, 0}, 0.0}}) == SessionErrc::InvalidAction);
    CHECK(session_error(s, Collapse{{0, 1, 5}}) == SessionErrc::InvalidAction);
    CHECK(session_error(s, Extend{{0, 0, 1}}) == SessionErrc::InvalidAction);
    auto bad = design::preset("helicoid-unified");
    bad.support = design::VerticalPlane{};
    bad.layout.faceting = design::Faceted{};
    CHECK(session_error(s, SetDesign{bad}) == SessionErrc::InvalidAction);
    CHECK(s == copy);
}

TEST_CASE("jump moves the central slot") {
    const auto ds = share(fixtures::fission());
    const auto s = initial_state(ds, design::preset("curved-faceted"));
    const auto t = session::apply(s, Jump{{2, 4}});
    CHECK(t.state.central == layout::SlotRef{2, 4});
    CHECK(render_state(t.state).layout.central == layout::SlotRef{2, 4});
}

TEST_CASE("selecting a fission parent shows its lineage") {
    const auto ds = share(fixtures::fission());
    const auto s = initial_state(ds, design::preset("curved-faceted"));
    auto t = session::apply(s, SelectObject{0});
    REQUIRE(t.state.selection.size() == 1);
    CHECK(t.changed.branches);
    const auto branches = displayed_branches(t.state);
    REQUIRE(branches.size() == 3);
    CHECK(branches[0].start_index == 0);
    CHECK(branches[0].length() == 3);
    CHECK(branches[1].start_index == 3);
    CHECK(branches[2].start_index == 3);

    // Without lineage only the parent's own chain remains.
    CHECK(displayed_branches(session::apply(s, SelectObject{1, false}).state).size() == 1);

    auto both = session::apply(t.state, SelectObject{12}).state;
    CHECK(displayed_branches(both).size() == 4);
    auto back = session::apply(both, Deselect{13}).state;
    CHECK(back.selection == t.state.selection);
    // Removing the last selection shows everything again.
    CHECK(displayed_branches(session::apply(back, Deselect{5}).state).size() == 4);
}

TEST_CASE("selection composes") {
    const auto ds = share(fixtures::fission());
    const auto s = initial_state(ds, design::preset("curved-faceted"));
    const auto ab = replay(s, {SelectObject{9}, SelectObject{4}});
    const auto ba = replay(s, {SelectObject{4}, SelectObject{9}});
    CHECK(ab.selection == ba.selection);
    CHECK(session::apply(ab, SelectObject{10}).state.selection == ab.selection);

    // Overlapping chains merge into one object.
    const auto merged = replay(s, {SelectObject{5, false}, SelectObject{0, false}, SelectObject{2, true}});
    REQUIRE(merged.selection.size() == 1);
    CHECK(merged.selection[0].members == std::vector<model::SnapshotId>{0, 1, 2, 3, 4, 5, 6, 7, 8});
    const auto disjoint = replay(s, {SelectObject{5, false}, SelectObject{0, false}});
    CHECK(disjoint.selection.size() == 2);
}

TEST_CASE("unified layout stacks every selected object per slot") {
    const auto ds = share(fixtures::fission());
    const auto s = initial_state(ds, design::preset("helicoid-unified"));
    const auto b = displayed_branches(s);
    REQUIRE(b.size() == 1);
    CHECK(b[0].length() == 6);
    CHECK(std::vector<model::SnapshotId>(b[0].slot(3).begin(), b[0].slot(3).end()) ==
          std::vector<model::SnapshotId>{3, 4, 12});
    const auto sel = session::apply(s, SelectObject{4, false}).state;
    const auto bs = displayed_branches(sel);
    REQUIRE(bs.size() == 1);
    CHECK(bs[0].start_index == 3);
    CHECK(sel.central == layout::SlotRef{0, 3});
}

TEST_CASE("changing the branch set clears collapses and keeps the time index") {
    const auto ds = share(fixtures::fission());
    const auto s = replay(initial_state(ds, design::preset("curved-faceted")),
                          {Jump{{3, 4}}, Collapse{{3, 0, 2}}});
    CHECK(s.collapses.size() == 1);
    const auto t = session::apply(s, SelectObject{9});
    CHECK(t.state.collapses.empty());
    CHECK(t.state.central == layout::SlotRef{0, 4});
    CHECK(t.changed.central);
}

TEST_CASE("collapse and extend") {
    const auto ds = share(fixtures::chains(12, 1));
    const auto s = initial_state(ds, design::preset("curved-faceted"));
    auto c = replay(s, {Collapse{{0, 2, 4}}, Collapse{{0, 5, 7}}});
    REQUIRE(c.collapses.size() == 1);
    CHECK(c.collapses[0] == layout::CollapseRange{0, 2, 7});
    const auto scene = render_state(c);
    for (const auto& p : scene.layout.placements)
        CHECK((p.visibility == Visibility::Collapsed) == (p.time_index >= 2 && p.time_index <= 7));
    CHECK(scene.layout.gap_indicators.size() == 1);

    auto e = session::apply(c, Extend{{0, 4, 5}}).state;
    REQUIRE(e.collapses.size() == 2);
    CHECK(e.collapses[0] == layout::CollapseRange{0, 2, 3});
    CHECK(e.collapses[1] == layout::CollapseRange{0, 6, 7});
    CHECK(render_state(e).layout.gap_indicators.size() == 2);
    CHECK(replay(e, {Extend{{0, 0, 11}}}).collapses.empty());
    CHECK(session_error(e, Extend{{0, 9, 10}}) == SessionErrc::InvalidAction);
    // Separate ranges stay separate.
    CHECK(replay(s, {Collapse{{0, 1, 2}}, Collapse{{0, 5, 6}}}).collapses.size() == 2);
}

TEST_CASE("value filter hides exactly the snapshots below the threshold") {
    const auto ds = share(fixtures::fission());
    for (double tau : {0.0, 3.0, 7.5, 12.0, 20.0}) {
        const auto s = replay(initial_state(ds, design::preset("curved-faceted")), {SetFilter{"volume", tau, {}}});
        const auto scene = render_state(s);
        REQUIRE(scene.objects.size() == ds->snapshot_count());
        for (const auto& o : scene.objects) {
            const bool below = static_cast<double>(o.id) < tau;  // volume == id
            CHECK(o.filtered == below);
            CHECK((o.visibility == Visibility::FilteredOut) == below);
        }
        // One snapshot per placement in a faceted layout.
        for (std::size_t i = 0; i < scene.layout.placements.size(); ++i)
            CHECK(scene.layout.placements[i].visibility == scene.objects[i].visibility);
    }
    const auto s = replay(initial_state(ds, design::preset("curved-faceted")),
                          {SetFilter{"volume", 3.0, {}}, SetFilter{"volume", {}, {}}});
    CHECK(s.filters.empty());
}

TEST_CASE("unified slots are filtered only when all their objects are") {
    const auto ds = share(fixtures::fission());
    const auto s = replay(initial_state(ds, design::preset("helicoid-unified")), {SetFilter{"volume", {}, 11.5}});
    const auto scene = render_state(s);
    // Every slot still holds a lineage snapshot with volume <= 8.
    for (const auto& p : scene.layout.placements) CHECK(p.visibility == Visibility::Visible);
    std::size_t hidden = 0;
    for (const auto& o : scene.objects) hidden += o.visibility == Visibility::FilteredOut;
    CHECK(hidden == 3);  // 12, 13, 14
    const auto hide_all = replay(initial_state(ds, design::preset("helicoid-unified")), {SetFilter{"volume", 100.0, {}}});
    for (const auto& p : render_state(hide_all).layout.placements) CHECK(p.visibility == Visibility::FilteredOut);
}

TEST_CASE("no-timeline shows a single time point") {
    const auto ds = share(fixtures::chains(15, 3));
    auto s = initial_state(ds, design::preset("no-timeline"));
    s = session::apply(s, Jump{{0, 6}}).state;
    const auto scene = render_state(s);
    std::size_t visible = 0;
    for (const auto& p : scene.layout.placements) {
        if (p.visibility == Visibility::Visible) {
            ++visible;
            CHECK(p.time_index == 6);
        }
    }
    CHECK(visible == 1);
}

TEST_CASE("lod stride skips slots") {
    const auto ds = share(fixtures::chains(10, 1));
    const auto s = replay(initial_state(ds, design::preset("curved-faceted")), {Jump{{0, 4}}, SetLod{3}});
    for (const auto& p : render_state(s).layout.placements) {
        const bool kept = (p.time_index > 4 ? p.time_index - 4 : 4 - p.time_index) % 3 == 0;
        CHECK((p.visibility == Visibility::Visible) == kept);
    }
}

TEST_CASE("viridis table") {
    const auto& v = ColorMap::viridis();
    REQUIRE(v.points().size() == 256);
    check_close(v.lookup(0.0), {0.267004, 0.004874, 0.329415});
    check_close(v.lookup(1.0), {0.993248, 0.906157, 0.143936});
    check_close(v.lookup(-3.0), v.lookup(0.0));
    check_close(v.lookup(7.0), v.lookup(1.0));
    check_close(v.lookup(NAN), v.lookup(0.0));
    check_close(v.map(5.0, 5.0, 9.0), v.lookup(0.0));
    check_close(v.map(9.0, 5.0, 9.0), v.lookup(1.0));
    check_close(v.map(3.0, 2.0, 2.0), v.lookup(0.5));
    // Linear between entries.
    for (std::size_t i = 0; i + 1 < 256; i += 17) {
        const auto& a = v.points()[i].rgb;
        const auto& b = v.points()[i + 1].rgb;
        check_close(v.lookup((static_cast<double>(i) + 0.5) / 255.0),
                    {(a.r + b.r) / 2, (a.g + b.g) / 2, (a.b + b.b) / 2}, 1e-9);
    }
    // Viridis brightens monotonically (perceived lightness proxy).
    double prev = -1.0;
    for (int i = 0; i <= 100; ++i) {
        const auto c = v.lookup(i / 100.0);
        const double lum = 0.2126 * c.r + 0.7152 * c.g + 0.0722 * c.b;
        CHECK(lum > prev);
        prev = lum;
    }
    CHECK_THROWS_AS(ColorMap("x", {{0.0, {}}, {0.5, {}}}), std::invalid_argument);
    CHECK_THROWS_AS(ColorMap("x", {{0.0, {}}, {0.6, {}}, {0.4, {}}, {1.0, {}}}), std::invalid_argument);
    CHECK(categorical_color(0) == categorical_color(10));
    CHECK_FALSE(categorical_color(0) == categorical_color(1));
}

TEST_CASE("colors follow the bound field") {
    const auto ds = share(fixtures::chains(5, 2));
    const auto s = initial_state(ds, design::preset("curved-faceted"));
    for (const auto& o : render_state(s).objects) CHECK(o.color == kDefaultColor);

    const auto t = session::apply(s, SetColorField{"value"});
    CHECK(t.changed.colors);
    CHECK_FALSE(t.changed.layout);
    const auto scene = render_state(t.state);
    const double lo = 0.0, hi = 4.1;
    for (const auto& o : scene.objects) {
        const double v = *ds->snapshot(o.id).numeric("value");
        check_close(o.color, ColorMap::viridis().lookup((v - lo) / (hi - lo)), 1e-12);
    }

    // Constant field: degenerate domain.
    const auto one = share(fixtures::chains(1, 1));
    const auto cs = replay(initial_state(one, design::preset("curved-faceted")), {SetColorField{"value"}});
    check_close(render_state(cs).objects[0].color, ColorMap::viridis().lookup(0.5));
}

TEST_CASE("unannotated and categorical colors") {
    const auto lineage = share(bench::generate_lineage_surrogate(4, 2));
    const auto s = replay(initial_state(lineage, design::preset("curved-faceted")), {SetColorField{"lifespan"}});
    std::size_t gray = 0;
    for (const auto& o : render_state(s).objects) {
        const bool annotated = lineage->snapshot(o.id).numeric("lifespan").has_value();
        if (!annotated) {
            CHECK(o.color == kUnannotatedColor);
            ++gray;
        }
    }
    CHECK(gray == 4 * 10);

    bench::GenConfig cfg;
    cfg.time_point_count = 12;
    const auto g = share(bench::generate(cfg).dataset);
    const auto gs = replay(initial_state(g, design::preset("curved-faceted")), {SetColorField{"group"}});
    for (const auto& o : render_state(gs).objects) {
        const auto& label = std::get<model::Categorical>(g->snapshot(o.id).annotations.at("group")).label;
        CHECK(o.color == categorical_color(std::stoul(label)));  // labels "0".."4" sort numerically
    }
}

TEST_CASE("placement color is the mean of its visible objects") {
    const auto ds = share(fixtures::fission());
    const auto s = replay(initial_state(ds, design::preset("helicoid-unified")),
                          {SetColorField{"volume"}, SetFilter{"volume", {}, 12.5}});
    const auto scene = render_state(s);
    std::size_t k = 0;
    for (std::size_t i = 0; i < scene.layout.placements.size(); ++i) {
        Rgb sum;
        std::size_t n = 0;
        const std::size_t slot_size = i < 3 ? 2 : 3;
        for (std::size_t j = 0; j < slot_size; ++j, ++k) {
            const auto& o = scene.objects[k];
            if (static_cast<double>(o.id) > 12.5) continue;
            const auto c = ColorMap::viridis().lookup(static_cast<double>(o.id) / 14.0);
            sum = {sum.r + c.r, sum.g + c.g, sum.b + c.b};
            ++n;
        }
        REQUIRE(n > 0);
        check_close(scene.placement_colors[i], {sum.r / n, sum.g / n, sum.b / n}, 1e-12);
    }
}

TEST_CASE("rotation and scale transform objects about their placement") {
    const auto ds = share(fixtures::chains(6, 3));
    const auto base = replay(initial_state(ds, design::preset("helicoid-unified")), {Jump{{0, 2}}});
    const auto plain = render_state(base);
    const Quat q = Quat::from_axis_angle({0.3, 1.0, -0.2}, 0.7);
    const double sc = 1.75;
    const auto t = session::apply(base, Rotate{q});
    CHECK(t.changed.transform);
    CHECK_FALSE(t.changed.layout);
    const auto moved = replay(base, {Rotate{q}, Scale{sc}});
    const auto scene = render_state(moved);
    REQUIRE(scene.objects.size() == plain.objects.size());

    const auto branch = displayed_branches(base)[0];
    const Vec3 ref = mean_center(*ds, {branch.slots[0].begin(), branch.slots[0].end()});
    for (std::size_t i = 0; i < scene.layout.placements.size(); ++i) {
        const auto& p0 = plain.layout.placements[i];
        const auto& p1 = scene.layout.placements[i];
        check_close(p1.position, p0.position, 1e-12);
        CHECK(p1.uniform_scale == doctest::Approx(p0.uniform_scale * sc).epsilon(1e-12));
    }
    for (std::size_t k = 0; k < scene.objects.size(); ++k) {
        const auto& o = scene.objects[k];
        const auto& p0 = plain.layout.placements[o.time_index];
        const Vec3 local = model::shape_center(ds->snapshot(o.id).shape) - ref;
        const Vec3 expected = p0.position + p0.orientation.rotate(q.rotate(local)) * (p0.uniform_scale * sc);
        check_close(o.position, expected, 1e-9);
    }
    // Rotations compose by left multiplication.
    const Quat r = Quat::from_axis_angle({0, 0, 1}, 0.4);
    const auto twice = replay(base, {Rotate{q}, Rotate{r}});
    const Quat want = (r * q).normalized();
    CHECK(std::abs(std::abs(twice.global_rotation.w * want.w + twice.global_rotation.x * want.x +
                            twice.global_rotation.y * want.y + twice.global_rotation.z * want.z) -
                   1.0) < 1e-12);
    CHECK(replay(base, {Scale{2.0}, Scale{0.5}}).global_scale == 1.0);
}

TEST_CASE("argmax invariance") {
    const auto ds = share(fixtures::chains(8, 3));
    auto s = initial_state(ds, design::preset("curved-faceted"));
    CHECK_THROWS_AS(argmax_invariance_check(s, [](double x) { return x; }), SessionError);
    s = session::apply(s, SetColorField{"value"}).state;
    CHECK(argmax_invariance_check(s, [](double x) { return x; }));
    CHECK(argmax_invariance_check(s, [](double x) { return 2.0 * x + 3.0; }));
    CHECK(argmax_invariance_check(s, [](double x) { return std::exp(x); }));
    CHECK_THROWS_AS(argmax_invariance_check(s, [](double) { return 1.0; }), std::invalid_argument);
    CHECK_THROWS_AS(argmax_invariance_check(s, [](double x) { return -x; }), std::invalid_argument);
}

TEST_CASE("replay equals folding apply") {
    const auto ds = share(fixtures::fission());
    const auto s0 = initial_state(ds, design::preset("curved-faceted"));
    const std::vector<Action> actions{
        SelectObject{0}, Scroll{2},           SetColorField{"volume"},   Collapse{{1, 4, 5}},
        SetLod{2},       Rotate{Quat::from_axis_angle({0, 1, 0}, 0.3)}, Scale{1.5},
        SetCutaway{layout::PlaneCut{{1, 0, 0}, 0.0}},                   SetDesign{design::preset("helicoid-unified")},
        Jump{{0, 4}},    SetFilter{"volume", 2.0, 6.0}};
    SessionState folded = s0;
    for (const auto& a : actions) folded = session::apply(folded, a).state;
    const auto replayed = replay(s0, actions);
    CHECK(replayed == folded);
    CHECK(render_state(replayed) == render_state(folded));
    CHECK(replayed.central == layout::SlotRef{0, 4});
    CHECK(replayed.collapses.empty());
}

TEST_CASE("cutaway marks clipped objects") {
    const auto ds = share(fixtures::fission());
    const auto s = replay(initial_state(ds, design::preset("helicoid-unified")),
                          {SetCutaway{layout::PlaneCut{{1, 0, 0}, 0.0}}});
    const auto scene = render_state(s);
    std::size_t non_kept = 0;
    for (const auto& o : scene.objects) non_kept += o.clip != layout::ClipState::Kept;
    CHECK(non_kept > 0);
    CHECK(non_kept < scene.objects.size());
}

TEST_CASE("action names") {
    CHECK(action_name(Scroll{}) == "scroll");
    CHECK(action_name(SetColorField{}) == "set_color_field");
    CHECK(action_name(SetDesign{}) == "set_design");
}
