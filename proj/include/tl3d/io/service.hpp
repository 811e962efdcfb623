#pragma once
// Session service behind the HTTP API. handle() is transport-free so the
// routing can be tested without sockets; mount() wires it into httplib.

#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <vector>

#include "tl3d/model/dataset.hpp"
#include "tl3d/session/session.hpp"

namespace httplib {
class Server;
}

namespace tl3d::io {

struct Response {
    int status = 200;
    std::string body;  // JSON
};

class Service {
public:
    explicit Service(std::shared_ptr<const model::S4DDataset> dataset);

    /// Routes:
    ///   GET  /dataset/meta
    ///   GET  /presets
    ///   POST /session              body: {} or {"design": ...}
    ///   POST /session/{id}/action  body: action
    ///   GET  /session/{id}/scene
    ///   GET  /session/{id}/state
    ///   GET  /session/{id}/log
    /// 404 unknown route or session, 400 malformed JSON, 422 rejected input.
    Response handle(const std::string& method, const std::string& path, const std::string& body);

    /// Registers every route plus CORS headers on `server`.
    void mount(httplib::Server& server);

    std::size_t session_count() const;

private:
    struct Entry {
        std::mutex mutex;  // serializes actions of one session
        session::SessionState initial;
        session::SessionState state;
        std::vector<session::Action> log;
    };

    std::shared_ptr<Entry> find(const std::string& id) const;
    Response create_session(const std::string& body);
    Response post_action(Entry& entry, const std::string& body);

    std::shared_ptr<const model::S4DDataset> dataset_;
    mutable std::mutex sessions_mutex_;
    std::map<std::string, std::shared_ptr<Entry>> sessions_;
    std::uint64_t next_id_ = 1;
};

/// TL3D_PORT, or 8080 when unset or invalid.
int default_port();

}  // namespace tl3d::io
