#pragma once
// JSON schemas for every artifact. Readers reject unknown fields; writers
// emit a canonical field order and refuse non-finite numbers.

#include <filesystem>
#include <string>

#include "json.hpp"

#include "tl3d/bench/generator.hpp"
#include "tl3d/bench/oracle.hpp"
#include "tl3d/design/design.hpp"
#include "tl3d/error.hpp"
#include "tl3d/model/dataset.hpp"
#include "tl3d/session/session.hpp"

namespace tl3d::io {

using Json = nlohmann::ordered_json;

enum class IoErrc {
    Io,           // file could not be read or written
    Parse,        // not JSON
    Schema,       // JSON of the wrong shape, unknown field, bad value
    MeshTooLarge, // mesh above kMaxMeshVertices
    NonFinite,    // refusing to serialize NaN or infinity
};
using IoError = CodedError<IoErrc>;

inline constexpr std::size_t kMaxMeshVertices = 1'000'000;

Json read_json_file(const std::filesystem::path& path);
/// Two-space indented, trailing newline.
void write_json_file(const std::filesystem::path& path, const Json& doc);
Json parse_json(const std::string& text);
std::string dump(const Json& doc);

Json to_json(const model::S4DDataset& dataset);
/// Model invariant violations surface as ModelError.
model::S4DDataset dataset_from_json(const Json& j);

Json to_json(const design::TimelineDesign& design);
/// Full design object, or {"preset": name}.
design::TimelineDesign design_from_json(const Json& j);

Json to_json(const layout::SlotRef& slot);
layout::SlotRef slot_from_json(const Json& j);

Json to_json(const layout::CutawayOperator& op);
layout::CutawayOperator cutaway_from_json(const Json& j);

Json to_json(const session::Action& action);
session::Action action_from_json(const Json& j);

Json to_json(const session::SessionState& state);

/// Scene of a rendered state: design, central slot, placements, objects and
/// gap indicators.
Json scene_to_json(const session::SessionState& state, const session::RenderedScene& scene);

Json to_json(const bench::GenConfig& config);
bench::GenConfig gen_config_from_json(const Json& j);

Json to_json(const bench::GroundTruth& truth);
bench::GroundTruth truth_from_json(const Json& j);

Json to_json(const bench::TaskSpec& task);
bench::TaskSpec task_from_json(const Json& j);

Json to_json(const bench::TaskAnswer& answer);
bench::TaskAnswer answer_from_json(const Json& j);

Json to_json(const bench::ExplorationTrace& trace);
bench::ExplorationTrace trace_from_json(const Json& j);

Json result_to_json(const bench::TaskSpec& task, const bench::TaskResult& result);

}  // namespace tl3d::io
