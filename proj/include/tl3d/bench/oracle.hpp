#pragma once
// The four evaluation tasks, their exact answers, and trace scoring.

#include <cstddef>
#include <optional>
#include <string_view>
#include <variant>
#include <vector>

#include "tl3d/bench/generator.hpp"

namespace tl3d::bench {

struct LocateTask {
    std::size_t target = 0;
    bool operator==(const LocateTask&) const = default;
};
struct CountTask {
    std::size_t group = 0;
    bool operator==(const CountTask&) const = default;
};
struct PatternTask {
    Pattern pattern{};
    bool operator==(const PatternTask&) const = default;
};
struct MaximumTask {
    bool operator==(const MaximumTask&) const = default;
};

using TaskKind = std::variant<LocateTask, CountTask, PatternTask, MaximumTask>;

inline constexpr double kTimedTaskLimit = 180.0;  // seconds, Count and Pattern

struct TaskSpec {
    TaskKind kind;
    std::optional<double> time_limit;

    /// Time limit defaults to kTimedTaskLimit for Count and Pattern.
    static TaskSpec make(TaskKind kind);

    bool operator==(const TaskSpec&) const = default;
};

std::string_view task_name(const TaskKind& kind);

/// `value` is the time index (Locate, Maximum) or the count (Count);
/// `occurrences` is used by Pattern only.
struct TaskAnswer {
    std::size_t value = 0;
    std::vector<PatternHit> occurrences;

    bool operator==(const TaskAnswer&) const = default;
};

/// Exact answer computed from the dataset annotations. Throws
/// BenchError(MissingAnnotation) when the needed field is absent and
/// (InvalidConfig) when a Locate target is out of range.
TaskAnswer oracle(const model::S4DDataset& dataset, const TaskSpec& task);

/// Answer read off the generator's ground truth; must agree with oracle().
TaskAnswer truth_answer(const GroundTruth& truth, const TaskSpec& task);

enum class TraceEventKind { Scroll, Jump, Select, Answer };

std::string_view to_string(TraceEventKind k);
std::optional<TraceEventKind> trace_event_kind_from_string(std::string_view s);

struct TraceEvent {
    double time = 0.0;  // seconds since task start
    TraceEventKind kind = TraceEventKind::Scroll;
    std::optional<TaskAnswer> answer;  // Answer events only

    bool operator==(const TraceEvent&) const = default;
};

struct ExplorationTrace {
    std::vector<TraceEvent> events;

    bool operator==(const ExplorationTrace&) const = default;
};

struct TaskResult {
    TaskAnswer answer;
    bool timed_out = false;
    double elapsed = 0.0;
    std::optional<double> locate_error;      // |selected - target|
    std::optional<double> count_error_rate;  // |answer - truth| / max(truth, 1)
    std::optional<double> precision;
    std::optional<double> recall;
    std::optional<double> accuracy;  // 1 when the answer is the argmax, else 0
    std::size_t scrolls = 0;
    std::size_t jumps = 0;
    std::size_t selections = 0;

    bool operator==(const TaskResult&) const = default;
};

/// Scores the first Answer event at or before the time limit. A trace that
/// reaches the limit unanswered scores an empty answer; one that stops
/// earlier throws BenchError(NoAnswer). Decreasing timestamps throw
/// (InvalidTrace).
TaskResult score(const ExplorationTrace& trace, const TaskSpec& task, const TaskAnswer& truth);

}  // namespace tl3d::bench
