#include "tl3d/bench/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <iterator>
#include <limits>

#include "tl3d/simd/kernels.hpp"

namespace tl3d::bench {

namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

[[noreturn]] void missing(const std::string& field) {
    throw BenchError(BenchErrc::MissingAnnotation, "dataset has no '" + field + "' annotation");
}

std::size_t count_group(const model::S4DDataset& d, std::size_t group) {
    const std::string label = std::to_string(group);
    bool any = false;
    std::size_t n = 0;
    for (const auto& tp : d.time_points())
        for (const auto& s : tp.snapshots) {
            auto it = s.annotations.find(kGroupField);
            if (it == s.annotations.end() || !std::holds_alternative<model::Categorical>(it->second)) continue;
            any = true;
            if (std::get<model::Categorical>(it->second).label == label) ++n;
        }
    if (!any) missing(kGroupField);
    return n;
}

std::size_t value_argmax(const model::S4DDataset& d) {
    std::vector<double> best(d.time_point_count(), -std::numeric_limits<double>::infinity());
    bool any = false;
    for (const auto& tp : d.time_points())
        for (const auto& s : tp.snapshots)
            if (auto v = s.numeric(kValueField)) {
                any = true;
                best[tp.index] = std::max(best[tp.index], *v);
            }
    if (!any) missing(kValueField);
    return simd::argmax(best);
}

}  // namespace

TaskSpec TaskSpec::make(TaskKind kind) {
    TaskSpec t{std::move(kind), std::nullopt};
    if (std::holds_alternative<CountTask>(t.kind) || std::holds_alternative<PatternTask>(t.kind))
        t.time_limit = kTimedTaskLimit;
    return t;
}

std::string_view task_name(const TaskKind& kind) {
    static constexpr std::string_view names[] = {"locate", "count", "pattern", "maximum"};
    return names[kind.index()];
}

TaskAnswer oracle(const model::S4DDataset& dataset, const TaskSpec& task) {
    TaskAnswer a;
    std::visit(overloaded{
                   [&](const LocateTask& t) {
                       if (t.target >= dataset.time_point_count())
                           throw BenchError(BenchErrc::InvalidConfig, "locate target out of range");
                       a.value = t.target;
                   },
                   [&](const CountTask& t) { a.value = count_group(dataset, t.group); },
                   [&](const PatternTask& t) {
                       count_group(dataset, 0);  // presence check
                       a.occurrences = find_pattern(dataset, t.pattern);
                   },
                   [&](const MaximumTask&) { a.value = value_argmax(dataset); },
               },
               task.kind);
    return a;
}

TaskAnswer truth_answer(const GroundTruth& truth, const TaskSpec& task) {
    TaskAnswer a;
    std::visit(overloaded{
                   [&](const LocateTask& t) { a.value = t.target; },
                   [&](const CountTask& t) {
                       if (t.group >= truth.group_counts.size())
                           throw BenchError(BenchErrc::MissingAnnotation, "ground truth has no such group");
                       a.value = truth.group_counts[t.group];
                   },
                   [&](const PatternTask& t) {
                       if (t.pattern != truth.pattern)
                           throw BenchError(BenchErrc::MissingAnnotation, "ground truth records another pattern");
                       a.occurrences = truth.occurrences;
                   },
                   [&](const MaximumTask&) { a.value = truth.value_argmax; },
               },
               task.kind);
    return a;
}

std::string_view to_string(TraceEventKind k) {
    switch (k) {
        case TraceEventKind::Scroll: return "scroll";
        case TraceEventKind::Jump: return "jump";
        case TraceEventKind::Select: return "select";
        case TraceEventKind::Answer: return "answer";
    }
    return "?";
}

std::optional<TraceEventKind> trace_event_kind_from_string(std::string_view s) {
    for (auto k : {TraceEventKind::Scroll, TraceEventKind::Jump, TraceEventKind::Select, TraceEventKind::Answer})
        if (to_string(k) == s) return k;
    return std::nullopt;
}

TaskResult score(const ExplorationTrace& trace, const TaskSpec& task, const TaskAnswer& truth) {
    for (std::size_t i = 1; i < trace.events.size(); ++i)
        if (!(trace.events[i].time >= trace.events[i - 1].time))
            throw BenchError(BenchErrc::InvalidTrace, "trace timestamps decrease at event " + std::to_string(i));
    for (const TraceEvent& e : trace.events) {
        if (!std::isfinite(e.time) || e.time < 0.0)
            throw BenchError(BenchErrc::InvalidTrace, "trace timestamps must be finite and non-negative");
        if (e.kind == TraceEventKind::Answer && !e.answer)
            throw BenchError(BenchErrc::InvalidTrace, "answer event without an answer");
    }

    TaskResult r;
    const TraceEvent* answer = nullptr;
    for (const TraceEvent& e : trace.events) {
        if (task.time_limit && e.time > *task.time_limit) break;
        if (e.kind == TraceEventKind::Answer) {
            answer = &e;
            break;
        }
        r.scrolls += e.kind == TraceEventKind::Scroll;
        r.jumps += e.kind == TraceEventKind::Jump;
        r.selections += e.kind == TraceEventKind::Select;
    }
    if (answer) {
        r.answer = *answer->answer;
        r.elapsed = answer->time;
    } else {
        const bool reached = task.time_limit && !trace.events.empty() && trace.events.back().time >= *task.time_limit;
        if (!reached) throw BenchError(BenchErrc::NoAnswer, "trace ends without an answer");
        r.timed_out = true;
        r.elapsed = *task.time_limit;
    }

    std::visit(overloaded{
                   [&](const LocateTask&) {
                       const double a = static_cast<double>(r.answer.value), t = static_cast<double>(truth.value);
                       r.locate_error = std::abs(a - t);
                   },
                   [&](const CountTask&) {
                       const double a = static_cast<double>(r.answer.value), n = static_cast<double>(truth.value);
                       r.count_error_rate = std::abs(a - n) / std::max(n, 1.0);
                   },
                   [&](const PatternTask&) {
                       std::vector<PatternHit> answered = r.answer.occurrences, expected = truth.occurrences;
                       std::sort(answered.begin(), answered.end());
                       answered.erase(std::unique(answered.begin(), answered.end()), answered.end());
                       std::sort(expected.begin(), expected.end());
                       expected.erase(std::unique(expected.begin(), expected.end()), expected.end());
                       std::vector<PatternHit> both;
                       std::set_intersection(answered.begin(), answered.end(), expected.begin(), expected.end(),
                                             std::back_inserter(both));
                       const double hit = static_cast<double>(both.size());
                       r.precision = answered.empty() ? (expected.empty() ? 1.0 : 0.0)
                                                      : hit / static_cast<double>(answered.size());
                       r.recall = expected.empty() ? 1.0 : hit / static_cast<double>(expected.size());
                   },
                   [&](const MaximumTask&) { r.accuracy = !r.timed_out && r.answer.value == truth.value ? 1.0 : 0.0; },
               },
               task.kind);
    return r;
}

}  // namespace tl3d::bench
