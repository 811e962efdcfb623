#include "tl3d/io/service.hpp"

#include <cstdlib>
#include <set>

#include "httplib.h"
#include "tl3d/io/json_codec.hpp"

namespace tl3d::io {

namespace {

Response json_response(int status, const Json& j) { return {status, dump(j)}; }

Response error(int status, const std::string& message) { return json_response(status, Json{{"error", message}}); }

Json changed_json(const session::ChangedFlags& f) {
    return Json{{"central", f.central},
                {"branches", f.branches},
                {"layout", f.layout},
                {"colors", f.colors},
                {"transform", f.transform}};
}

std::vector<std::string> split_path(const std::string& path) {
    std::vector<std::string> parts;
    std::string cur;
    for (char c : path) {
        if (c == '?') break;
        if (c == '/') {
            if (!cur.empty()) parts.push_back(std::move(cur));
            cur.clear();
        } else {
            cur += c;
        }
    }
    if (!cur.empty()) parts.push_back(std::move(cur));
    return parts;
}

}  // namespace

int default_port() {
    if (const char* env = std::getenv("TL3D_PORT")) {
        char* end = nullptr;
        const long p = std::strtol(env, &end, 10);
        if (end != env && *end == '\0' && p > 0 && p < 65536) return static_cast<int>(p);
    }
    return 8080;
}

Service::Service(std::shared_ptr<const model::S4DDataset> dataset) : dataset_(std::move(dataset)) {}

std::size_t Service::session_count() const {
    std::lock_guard lock(sessions_mutex_);
    return sessions_.size();
}

std::shared_ptr<Service::Entry> Service::find(const std::string& id) const {
    std::lock_guard lock(sessions_mutex_);
    auto it = sessions_.find(id);
    return it == sessions_.end() ? nullptr : it->second;
}

Response Service::create_session(const std::string& body) {
    design::TimelineDesign design = design::preset("curved-faceted");
    if (!body.empty()) {
        Json j;
        try {
            j = parse_json(body);
        } catch (const IoError& e) {
            return error(400, e.what());
        }
        try {
            if (!j.is_object()) return error(422, "session request must be an object");
            for (const auto& [k, v] : j.items())
                if (k != "design") return error(422, "unknown field '" + k + "'");
            if (j.contains("design")) design = design_from_json(j["design"]);
        } catch (const IoError& e) {
            return error(422, e.what());
        }
    }
    auto entry = std::make_shared<Entry>();
    try {
        entry->initial = session::initial_state(dataset_, design);
    } catch (const session::SessionError& e) {
        return error(422, e.what());
    }
    entry->state = entry->initial;
    std::lock_guard lock(sessions_mutex_);
    const std::string id = "s" + std::to_string(next_id_++);
    sessions_.emplace(id, std::move(entry));
    return json_response(201, Json{{"id", id}});
}

Response Service::post_action(Entry& entry, const std::string& body) {
    Json j;
    try {
        j = parse_json(body);
    } catch (const IoError& e) {
        return error(400, e.what());
    }
    session::Action action;
    try {
        action = action_from_json(j);
    } catch (const IoError& e) {
        return error(422, e.what());
    }
    std::lock_guard lock(entry.mutex);
    try {
        auto [next, changed] = session::apply(entry.state, action);
        entry.state = std::move(next);
        entry.log.push_back(std::move(action));
        return json_response(200, Json{{"changed", changed_json(changed)}});
    } catch (const session::SessionError& e) {
        return error(422, e.what());
    }
}

Response Service::handle(const std::string& method, const std::string& path, const std::string& body) {
    const auto parts = split_path(path);
    try {
        if (method == "GET" && parts == std::vector<std::string>{"dataset", "meta"}) {
            std::set<std::string> fields;
            for (const auto& tp : dataset_->time_points())
                for (const auto& s : tp.snapshots)
                    for (const auto& [k, v] : s.annotations) fields.insert(k);
            return json_response(200, Json{{"name", dataset_->meta().name},
                                           {"units", dataset_->meta().units},
                                           {"time_point_count", dataset_->time_point_count()},
                                           {"snapshot_count", dataset_->snapshot_count()},
                                           {"fields", fields}});
        }
        if (method == "GET" && parts == std::vector<std::string>{"presets"}) {
            Json list = Json::array();
            for (auto name : design::preset_names())
                list.push_back(Json{{"name", std::string(name)}, {"design", to_json(design::preset(name))}});
            return json_response(200, Json{{"presets", list}});
        }
        if (method == "POST" && parts == std::vector<std::string>{"session"}) return create_session(body);

        if (parts.size() == 3 && parts[0] == "session") {
            auto entry = find(parts[1]);
            if (!entry) return error(404, "unknown session '" + parts[1] + "'");
            if (method == "POST" && parts[2] == "action") return post_action(*entry, body);
            if (method == "GET") {
                session::SessionState state;
                std::vector<session::Action> log;
                {
                    std::lock_guard lock(entry->mutex);
                    state = entry->state;
                    log = entry->log;
                }
                if (parts[2] == "scene") return json_response(200, scene_to_json(state, session::render_state(state)));
                if (parts[2] == "state") return json_response(200, to_json(state));
                if (parts[2] == "log") {
                    Json actions = Json::array();
                    for (const auto& a : log) actions.push_back(to_json(a));
                    return json_response(200, Json{{"actions", actions}});
                }
            }
        }
        return error(404, "no route " + method + " " + path);
    } catch (const std::exception& e) {
        return error(500, e.what());
    }
}

void Service::mount(httplib::Server& server) {
    auto forward = [this](const httplib::Request& req, httplib::Response& res) {
        const Response r = handle(req.method, req.path, req.body);
        res.status = r.status;
        res.set_content(r.body, "application/json");
    };
    server.set_default_headers({{"Access-Control-Allow-Origin", "*"},
                                {"Access-Control-Allow-Methods", "GET, POST, OPTIONS"},
                                {"Access-Control-Allow-Headers", "Content-Type"}});
    server.Get(R"(/.*)", forward);
    server.Post(R"(/.*)", forward);
    server.Options(R"(/.*)", [](const httplib::Request&, httplib::Response& res) { res.status = 204; });
}

}  // namespace tl3d::io
