#pragma once

#include "npisim/interface/simulation.hpp"

#include <httplib.h>

#include <string>

namespace npisim::interface {

struct HttpReply {
    int status = 200;
    std::string body;
};

namespace detail {

inline HttpReply error_reply(int status, const std::string& message, const std::string& path = {})
{
    json j{{"error", message}};
    if (!path.empty()) {
        j["path"] = path;
    }
    return {status, j.dump()};
}

} // namespace detail

/// POST /api/simulate. Stateless: every call builds and runs its own model.
inline HttpReply handle_simulate(const std::string& body)
{
    json j;
    try {
        j = json::parse(body);
    }
    catch (const json::parse_error& e) {
        return detail::error_reply(400, std::string("malformed JSON: ") + e.what(), "$");
    }
    try {
        const auto response = execute(parse_sim_request(j));
        return {200, to_json(response).dump()};
    }
    catch (const SchemaError& e) {
        return detail::error_reply(400, e.what(), e.path());
    }
    catch (const InvariantError& e) {
        json err{{"error", "invariant violation"}, {"violations", e.violations()}};
        return {422, err.dump()};
    }
    catch (const tokyo::ParameterError& e) {
        json err{{"error", "invariant violation"}, {"violations", e.violations()}};
        return {422, err.dump()};
    }
    catch (const std::exception& e) {
        return detail::error_reply(500, std::string("simulation failed: ") + e.what());
    }
}

/// GET /api/presets
inline HttpReply handle_presets()
{
    json list = json::array();
    for (const auto& s : tokyo::all_presets()) {
        list.push_back(scenario_to_json(s));
    }
    return {200, json{{"presets", std::move(list)}}.dump()};
}

/// GET /api/healthz
inline HttpReply handle_healthz()
{
    return {200, json{{"status", "ok"}, {"version", npisim::version}}.dump()};
}

inline void register_routes(httplib::Server& server)
{
    auto send = [](httplib::Response& res, const HttpReply& reply) {
        res.status = reply.status;
        res.set_content(reply.body, "application/json");
    };
    // The workbench may be served from another origin.
    server.set_default_headers({{"Access-Control-Allow-Origin", "*"},
                                {"Access-Control-Allow-Headers", "Content-Type"}});
    server.Options("/api/simulate", [](const httplib::Request&, httplib::Response& res) { res.status = 204; });
    server.Post("/api/simulate", [send](const httplib::Request& req, httplib::Response& res) {
        send(res, handle_simulate(req.body));
    });
    server.Get("/api/presets",
               [send](const httplib::Request&, httplib::Response& res) { send(res, handle_presets()); });
    server.Get("/api/healthz",
               [send](const httplib::Request&, httplib::Response& res) { send(res, handle_healthz()); });
}

} // namespace npisim::interface
