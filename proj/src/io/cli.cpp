#include "tl3d/io/cli.hpp"

#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "httplib.h"
#include "tl3d/bench/generator.hpp"
#include "tl3d/bench/oracle.hpp"
#include "tl3d/io/json_codec.hpp"
#include "tl3d/io/service.hpp"
#include "tl3d/layout/errors.hpp"

namespace tl3d::io {

namespace {

struct GenArgs {
    std::string config, out, truth;
    std::optional<std::uint64_t> seed;
    std::optional<std::size_t> time_points;
    std::optional<std::size_t> lineage;
};

struct LayoutArgs {
    std::string dataset, design, central, out, actions;
};

struct ScoreArgs {
    std::string trace, task, truth, dataset, out;
};

struct ServeArgs {
    std::string dataset, host = "127.0.0.1";
    int port = 0;
};

layout::SlotRef parse_central(const std::string& s) {
    const auto colon = s.find(':');
    try {
        if (colon == std::string::npos) throw std::invalid_argument(s);
        std::size_t used = 0;
        const auto b = std::stoull(s.substr(0, colon), &used);
        if (used != colon) throw std::invalid_argument(s);
        const std::string rest = s.substr(colon + 1);
        const auto i = std::stoull(rest, &used);
        if (used != rest.size() || s[0] == '-' || rest[0] == '-') throw std::invalid_argument(s);
        return {static_cast<std::size_t>(b), static_cast<std::size_t>(i)};
    } catch (const std::logic_error&) {
        throw IoError(IoErrc::Schema, "--central expects BRANCH:INDEX, got '" + s + "'");
    }
}

void emit(const std::string& path, const Json& doc, std::ostream& out) {
    if (path.empty() || path == "-")
        out << dump(doc);
    else
        write_json_file(path, doc);
}

int run_gen(const GenArgs& a, std::ostream& out) {
    if (a.lineage) {
        if (!a.truth.empty()) throw IoError(IoErrc::Schema, "--truth is not available for lineage surrogates");
        const auto ds = bench::generate_lineage_surrogate(a.seed.value_or(0), *a.lineage);
        write_json_file(a.out, to_json(ds));
        out << "wrote " << a.out << ": " << ds.time_point_count() << " time points, " << ds.snapshot_count()
            << " snapshots\n";
        return kExitOk;
    }
    bench::GenConfig config;
    if (!a.config.empty()) config = gen_config_from_json(read_json_file(a.config));
    if (a.seed) config.seed = *a.seed;
    if (a.time_points) config.time_point_count = *a.time_points;
    const auto gen = bench::generate(config);
    write_json_file(a.out, to_json(gen.dataset));
    if (!a.truth.empty()) write_json_file(a.truth, to_json(gen.truth));
    out << "wrote " << a.out << ": " << gen.dataset.time_point_count() << " time points, "
        << gen.dataset.snapshot_count() << " snapshots\n";
    return kExitOk;
}

int run_layout(const LayoutArgs& a, std::ostream& out) {
    auto ds = std::make_shared<const model::S4DDataset>(dataset_from_json(read_json_file(a.dataset)));
    auto design = design_from_json(read_json_file(a.design));
    std::vector<session::Action> actions;
    if (!a.actions.empty()) {
        const Json doc = read_json_file(a.actions);
        const Json& list = doc.is_object() && doc.contains("actions") ? doc["actions"] : doc;
        if (!list.is_array()) throw IoError(IoErrc::Schema, "actions: expected an array or {\"actions\": [...]}");
        for (const auto& j : list) actions.push_back(action_from_json(j));
    }
    if (!a.central.empty()) actions.insert(actions.begin(), session::Jump{parse_central(a.central)});

    auto state = session::replay(session::initial_state(ds, std::move(design)), actions);
    emit(a.out, scene_to_json(state, session::render_state(state)), out);
    return kExitOk;
}

int run_validate(const std::string& path, std::ostream& out) {
    const auto report = design::validate_design(design_from_json(read_json_file(path)));
    for (const auto& v : report.violations)
        out << design::to_string(v.severity) << " " << v.rule << ": " << v.message << "\n";
    out << (report.ok() ? "ok" : "invalid") << "\n";
    return report.ok() ? kExitOk : kExitValidation;
}

int run_score(const ScoreArgs& a, std::ostream& out) {
    const auto trace = trace_from_json(read_json_file(a.trace));
    const auto task = task_from_json(read_json_file(a.task));
    bench::TaskAnswer truth;
    if (!a.truth.empty()) {
        truth = bench::truth_answer(truth_from_json(read_json_file(a.truth)), task);
    } else if (!a.dataset.empty()) {
        truth = bench::oracle(dataset_from_json(read_json_file(a.dataset)), task);
    } else if (const auto* l = std::get_if<bench::LocateTask>(&task.kind)) {
        truth.value = l->target;
    } else {
        throw IoError(IoErrc::Schema, "score needs --truth or --dataset for this task");
    }
    emit(a.out, result_to_json(task, bench::score(trace, task, truth)), out);
    return kExitOk;
}

int run_serve(const ServeArgs& a, std::ostream& out, std::ostream& err) {
    auto ds = std::make_shared<const model::S4DDataset>(dataset_from_json(read_json_file(a.dataset)));
    Service service(ds);
    httplib::Server server;
    service.mount(server);
    const int port = a.port > 0 ? a.port : default_port();
    out << "serving " << ds->meta().name << " on http://" << a.host << ":" << port << std::endl;
    if (!server.listen(a.host, port)) {
        err << "error: cannot listen on " << a.host << ":" << port << "\n";
        return kExitIo;
    }
    return kExitOk;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"3D timelines for time-varying spatial data", "tl3d"};
    app.require_subcommand(1);

    GenArgs gen;
    auto* gen_cmd = app.add_subcommand("gen", "generate the benchmark dataset (or a lineage surrogate)");
    gen_cmd->add_option("--config", gen.config, "generator config JSON")->check(CLI::ExistingFile);
    gen_cmd->add_option("--seed", gen.seed, "random seed (overrides the config)");
    gen_cmd->add_option("--time-points", gen.time_points, "time point count (overrides the config)");
    gen_cmd->add_option("--lineage", gen.lineage, "emit a lineage surrogate with this many generations");
    gen_cmd->add_option("--out", gen.out, "dataset JSON output")->required();
    gen_cmd->add_option("--truth", gen.truth, "ground truth JSON output");

    LayoutArgs lay;
    auto* layout_cmd = app.add_subcommand("layout", "render a scene for a dataset and design");
    layout_cmd->add_option("--dataset", lay.dataset)->required()->check(CLI::ExistingFile);
    layout_cmd->add_option("--design", lay.design, "design JSON or {\"preset\": name}")->required()->check(CLI::ExistingFile);
    layout_cmd->add_option("--central", lay.central, "central slot BRANCH:INDEX");
    layout_cmd->add_option("--actions", lay.actions, "action log to replay first")->check(CLI::ExistingFile);
    layout_cmd->add_option("--out", lay.out, "scene JSON output (default stdout)");

    std::string design_path;
    auto* validate_cmd = app.add_subcommand("validate", "check a design against the design-space rules");
    validate_cmd->add_option("--design", design_path)->required()->check(CLI::ExistingFile);

    ScoreArgs sc;
    auto* score_cmd = app.add_subcommand("score", "score an exploration trace");
    score_cmd->add_option("--trace", sc.trace)->required()->check(CLI::ExistingFile);
    score_cmd->add_option("--task", sc.task)->required()->check(CLI::ExistingFile);
    score_cmd->add_option("--truth", sc.truth, "ground truth JSON from gen")->check(CLI::ExistingFile);
    score_cmd->add_option("--dataset", sc.dataset, "compute the answer from a dataset instead")->check(CLI::ExistingFile);
    score_cmd->add_option("--out", sc.out, "result JSON output (default stdout)");

    ServeArgs sv;
    auto* serve_cmd = app.add_subcommand("serve", "serve sessions over HTTP");
    serve_cmd->add_option("--dataset", sv.dataset)->required()->check(CLI::ExistingFile);
    serve_cmd->add_option("--port", sv.port, "port (default $TL3D_PORT or 8080)");
    serve_cmd->add_option("--host", sv.host, "bind address");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitIo;
    }

    try {
        if (*gen_cmd) return run_gen(gen, out);
        if (*layout_cmd) return run_layout(lay, out);
        if (*validate_cmd) return run_validate(design_path, out);
        if (*score_cmd) return run_score(sc, out);
        if (*serve_cmd) return run_serve(sv, out, err);
    } catch (const IoError& e) {
        err << "error: " << e.what() << "\n";
        return kExitIo;
    } catch (const model::ModelError& e) {
        err << "error: invalid dataset: " << e.what() << "\n";
        return kExitIo;
    } catch (const session::SessionError& e) {
        err << "error: " << e.what() << "\n";
        return kExitValidation;
    } catch (const layout::LayoutError& e) {
        err << "error: " << e.what() << "\n";
        return kExitValidation;
    } catch (const bench::BenchError& e) {
        err << "error: " << e.what() << "\n";
        return kExitValidation;
    }
    return kExitIo;
}

}  // namespace tl3d::io
