#pragma once

// Chat-completion wire contract. One request carries the model id, the
// fixed system text, the per-cell user text, temperature, and a token cap;
// the response carries the raw completion text. Transport failures are
// classified as TRANSIENT (retry with backoff) or PERMANENT_REFUSAL
// (ledger without retry).

#include <memory>
#include <string>

#include <httplib.h>
#include <json.hpp>

#include "trustbench/types.hpp"

namespace trustbench {

struct ChatRequest {
    std::string model_id;
    std::string system_text;
    std::string user_text;
    double temperature = 0.0;
    int max_output_tokens = 16384;
};

struct ChatResponse {
    std::string content;
};

class ChatEndpoint {
public:
    virtual ~ChatEndpoint() = default;
    virtual ChatResponse complete(const ChatRequest& request) = 0;
};

inline json to_json(const ChatRequest& r) {
    return json{{"model", r.model_id},
                {"system", r.system_text},
                {"user", r.user_text},
                {"temperature", r.temperature},
                {"max_tokens", r.max_output_tokens}};
}

inline ChatRequest chat_request_from_json(const json& j) {
    ChatRequest r;
    r.model_id = j.value("model", "");
    r.system_text = j.value("system", "");
    r.user_text = j.value("user", "");
    r.temperature = j.value("temperature", 0.0);
    r.max_output_tokens = j.value("max_tokens", 16384);
    return r;
}

// POSTs the wire contract to `<base_url><path>`; bearer token read from the
// named environment variable when present.
class HttpChatEndpoint : public ChatEndpoint {
public:
    HttpChatEndpoint(std::string base_url, std::string path = "/v1/chat",
                     std::string api_key_env = "", double timeout_s = 300.0)
        : base_url_(std::move(base_url)),
          path_(std::move(path)),
          api_key_env_(std::move(api_key_env)),
          timeout_s_(timeout_s) {}

    ChatResponse complete(const ChatRequest& request) override {
        httplib::Client client(base_url_);
        client.set_connection_timeout(static_cast<time_t>(timeout_s_), 0);
        client.set_read_timeout(static_cast<time_t>(timeout_s_), 0);
        client.set_write_timeout(static_cast<time_t>(timeout_s_), 0);

        httplib::Headers headers;
        if (!api_key_env_.empty()) {
            const char* key = std::getenv(api_key_env_.c_str());
            if (key && *key) headers.emplace("Authorization", std::string("Bearer ") + key);
        }

        auto result = client.Post(path_, headers, to_json(request).dump(), "application/json");
        if (!result)
            throw Error("TRANSIENT", "transport failure: " + httplib::to_string(result.error()),
                        base_url_ + path_);

        int status = result->status;
        if (status == 200) {
            json body = json::parse(result->body, nullptr, false);
            if (body.is_discarded() || !body.contains("content"))
                throw Error("TRANSIENT", "malformed endpoint response body", result->body);
            return {body["content"].get<std::string>()};
        }
        if (status == 408 || status == 429 || status >= 500)
            throw Error("TRANSIENT", "endpoint status " + std::to_string(status),
                        result->body);
        // remaining 4xx: retrying the identical request cannot succeed
        std::string cause = result->body.find("content_filter") != std::string::npos
                                ? "content filter rejection"
                                : "endpoint status " + std::to_string(status);
        throw Error("PERMANENT_REFUSAL", cause, result->body);
    }

private:
    std::string base_url_;
    std::string path_;
    std::string api_key_env_;
    double timeout_s_;
};

// Exposes any ChatEndpoint over the wire contract (used to serve the
// offline auditor to HTTP clients).
inline void bind_chat_route(httplib::Server& server, std::shared_ptr<ChatEndpoint> endpoint,
                            const std::string& path = "/v1/chat") {
    server.Post(path, [endpoint](const httplib::Request& req, httplib::Response& res) {
        json body = json::parse(req.body, nullptr, false);
        if (body.is_discarded()) {
            res.status = 400;
            res.set_content(json{{"error", "malformed request"}}.dump(), "application/json");
            return;
        }
        try {
            ChatResponse out = endpoint->complete(chat_request_from_json(body));
            res.set_content(json{{"content", out.content}}.dump(), "application/json");
        } catch (const Error& e) {
            res.status = e.code() == "TRANSIENT" ? 503 : 400;
            res.set_content(json{{"error", e.code()}, {"message", e.what()}}.dump(),
                            "application/json");
        }
    });
}

}  // namespace trustbench
