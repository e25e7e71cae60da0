#pragma once

#include <deque>
#include <functional>
#include <memory>
#include <mutex>
#include <string>

#include "lpo/chat.hpp"

namespace lpo {

// A chat-completion backend. Implementations must be safe to call from
// multiple evaluation workers at once.
class ChatProvider {
public:
    virtual ~ChatProvider() = default;
    virtual ChatResponse complete(const ChatRequest& request) = 0;
};

// Deterministic in-memory provider for tests and the synthetic oracle.
// Backed by a handler function of the request, so it is stateless and
// parallel-safe; see make_queue_script for strictly sequential scripts.
class ScriptedProvider : public ChatProvider {
public:
    using Handler = std::function<std::string(const ChatRequest&)>;

    explicit ScriptedProvider(Handler handler) : handler_(std::move(handler)) {}

    ChatResponse complete(const ChatRequest& request) override;

private:
    Handler handler_;
};

// A handler that pops canned replies in order. Throws ProviderError when the
// script runs dry.
ScriptedProvider::Handler make_queue_script(std::vector<std::string> replies);

struct HttpProviderConfig {
    std::string base_url;      // e.g. http://localhost:8089 or https://api...
    std::string api_key;       // sent as Bearer token when non-empty
    std::string path = "/v1/chat/completions";
    int max_attempts = 3;
    int backoff_ms = 1000;     // 1s, then 2s, then 4s
    int timeout_sec = 120;
};

// OpenAI-compatible chat-completions client. Retries transport errors and
// 429s with exponential backoff; the request (and its cache key) never
// changes across retries.
class HttpProvider : public ChatProvider {
public:
    explicit HttpProvider(HttpProviderConfig config);

    ChatResponse complete(const ChatRequest& request) override;

private:
    HttpProviderConfig config_;
    std::mutex mutex_;  // serializes the shared rate gate
};

}  // namespace lpo
