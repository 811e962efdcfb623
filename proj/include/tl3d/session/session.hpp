#pragma once
// Interaction state machine: a dataset, a design and the user's actions fold
// into an immutable SessionState, which renders to a layout plus per-object
// transforms and colors.

#include <cstdint>
#include <functional>
#include <limits>
#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "tl3d/design/design.hpp"
#include "tl3d/error.hpp"
#include "tl3d/layout/cutaway.hpp"
#include "tl3d/layout/layout.hpp"
#include "tl3d/model/dataset.hpp"
#include "tl3d/session/colormap.hpp"

namespace tl3d::session {

enum class SessionErrc { InvalidAction, InvalidState };
using SessionError = CodedError<SessionErrc>;

/// Hides snapshots whose `field` lies outside [min, max]. Snapshots without
/// the field are never hidden.
struct ValueFilter {
    std::string field;
    double min = -std::numeric_limits<double>::infinity();
    double max = std::numeric_limits<double>::infinity();

    bool operator==(const ValueFilter&) const = default;
};

struct SessionState {
    std::shared_ptr<const model::S4DDataset> dataset;
    design::TimelineDesign design;
    layout::SlotRef central;
    /// Selected objects, ordered by root id. Empty shows every object.
    std::vector<model::Object4D> selection;
    std::vector<ValueFilter> filters;  // at most one per field, ordered by field
    std::vector<layout::CollapseRange> collapses;
    std::size_t lod_stride = 1;
    std::optional<layout::CutawayOperator> cutaway;
    std::optional<std::string> color_field;
    Quat global_rotation;
    double global_scale = 1.0;

    /// Same dataset object and equal values otherwise.
    bool operator==(const SessionState& o) const;
};

// --- actions -------------------------------------------------------------

struct Scroll {
    std::int64_t delta = 0;
    bool operator==(const Scroll&) const = default;
};
struct Jump {
    layout::SlotRef target;
    bool operator==(const Jump&) const = default;
};
struct SelectObject {
    model::SnapshotId id = 0;
    bool include_lineage = true;
    bool operator==(const SelectObject&) const = default;
};
/// Removes the selected object containing `id`.
struct Deselect {
    model::SnapshotId id = 0;
    bool operator==(const Deselect&) const = default;
};
/// Unset bounds are infinite; with both unset the field's filter is removed.
struct SetFilter {
    std::string field;
    std::optional<double> min;
    std::optional<double> max;
    bool operator==(const SetFilter&) const = default;
};
struct Collapse {
    layout::CollapseRange range;
    bool operator==(const Collapse&) const = default;
};
/// Re-expands the part of existing collapses that lies inside `range`.
struct Extend {
    layout::CollapseRange range;
    bool operator==(const Extend&) const = default;
};
struct SetLod {
    std::size_t stride = 1;
    bool operator==(const SetLod&) const = default;
};
struct SetCutaway {
    std::optional<layout::CutawayOperator> op;
    bool operator==(const SetCutaway&) const = default;
};
struct SetColorField {
    std::optional<std::string> field;
    bool operator==(const SetColorField&) const = default;
};
/// Left-multiplies the global rotation.
struct Rotate {
    Quat rotation;
    bool operator==(const Rotate&) const = default;
};
struct Scale {
    double factor = 1.0;
    bool operator==(const Scale&) const = default;
};
struct SetDesign {
    design::TimelineDesign design;
    bool operator==(const SetDesign&) const = default;
};

using Action = std::variant<Scroll, Jump, SelectObject, Deselect, SetFilter, Collapse, Extend, SetLod, SetCutaway,
                            SetColorField, Rotate, Scale, SetDesign>;

std::string_view action_name(const Action& a);

struct ChangedFlags {
    bool central = false;
    bool branches = false;  // selection or faceting changed the branch set
    bool layout = false;    // placements must be recomputed
    bool colors = false;
    bool transform = false;

    bool any() const { return central || branches || layout || colors || transform; }
    bool operator==(const ChangedFlags&) const = default;
};

struct Transition {
    SessionState state;
    ChangedFlags changed;
};

/// Throws SessionError(InvalidState) for a null dataset or a design with hard
/// errors. The central slot starts at the first time point of branch 0.
SessionState initial_state(std::shared_ptr<const model::S4DDataset> dataset, design::TimelineDesign design);

/// Pure transition. Throws SessionError(InvalidAction) for invalid arguments;
/// the input state is never modified.
Transition apply(const SessionState& state, const Action& action);

/// Folds `actions` over `initial`.
SessionState replay(const SessionState& initial, const std::vector<Action>& actions);

/// Branches shown for the state's selection and faceting.
std::vector<layout::TimelineBranch> displayed_branches(const SessionState& state);

struct SceneObject {
    model::SnapshotId id = 0;
    std::size_t branch_id = 0;
    std::size_t time_index = 0;
    Vec3 position;      // world position of the object center
    Quat orientation;   // billboard composed with the global rotation
    double scale = 1.0;
    layout::Visibility visibility = layout::Visibility::Visible;
    bool filtered = false;
    layout::ClipState clip = layout::ClipState::Kept;
    Rgb color;

    bool operator==(const SceneObject&) const = default;
};

struct RenderedScene {
    /// Placements carry the global rotation and scale.
    layout::LayoutResult layout;
    /// Per placement: mean color of its unfiltered objects.
    std::vector<Rgb> placement_colors;
    /// One entry per (placement, snapshot), in placement order.
    std::vector<SceneObject> objects;

    bool operator==(const RenderedScene&) const = default;
};

/// Propagates LayoutError.
RenderedScene render_state(const SessionState& state);

/// True iff the argmax over time points of the bound color field (maximum
/// over each time point's snapshots) is unchanged by `f`. Throws
/// SessionError(InvalidState) without a numerical color field and
/// std::invalid_argument when `f` is not strictly increasing on the field's
/// values.
bool argmax_invariance_check(const SessionState& state, const std::function<double(double)>& f);

}  // namespace tl3d::session
