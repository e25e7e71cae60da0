#include "lpo/providers.hpp"

#include <chrono>
#include <thread>

#include <httplib.h>

#include "lpo/errors.hpp"

namespace lpo {

ChatResponse ScriptedProvider::complete(const ChatRequest& request) {
    request.validate();
    ChatResponse r;
    r.content = handler_(request);
    r.finish_reason = FinishReason::Normal;
    r.usage.prompt_tokens = 0;
    for (const auto& m : request.messages)
        r.usage.prompt_tokens += static_cast<std::int64_t>(m.content.size() / 4);
    r.usage.completion_tokens = static_cast<std::int64_t>(r.content.size() / 4);
    r.provider = ProviderKind::Scripted;
    r.cache_hit = false;
    return r;
}

ScriptedProvider::Handler make_queue_script(std::vector<std::string> replies) {
    auto queue = std::make_shared<std::deque<std::string>>(replies.begin(),
                                                           replies.end());
    auto mutex = std::make_shared<std::mutex>();
    return [queue, mutex](const ChatRequest&) {
        std::lock_guard lock(*mutex);
        if (queue->empty())
            throw ProviderError("scripted provider ran out of replies",
                                /*recoverable=*/false);
        std::string next = std::move(queue->front());
        queue->pop_front();
        return next;
    };
}

HttpProvider::HttpProvider(HttpProviderConfig config)
    : config_(std::move(config)) {
    if (config_.base_url.empty())
        throw ConfigError("http provider requires a base url (LPO_API_BASE)");
}

ChatResponse HttpProvider::complete(const ChatRequest& request) {
    request.validate();

    nlohmann::json body{{"model", request.model_name},
                        {"temperature", request.temperature},
                        {"max_tokens", request.max_tokens}};
    nlohmann::json msgs = nlohmann::json::array();
    for (const auto& m : request.messages)
        msgs.push_back({{"role", to_string(m.speaker)}, {"content", m.content}});
    body["messages"] = msgs;
    if (request.request_seed) body["seed"] = *request.request_seed;
    const std::string payload = body.dump();

    httplib::Headers headers;
    if (!config_.api_key.empty())
        headers.emplace("Authorization", "Bearer " + config_.api_key);

    std::string last_error;
    for (int attempt = 0; attempt < config_.max_attempts; ++attempt) {
        if (attempt > 0) {
            std::this_thread::sleep_for(
                std::chrono::milliseconds(config_.backoff_ms << (attempt - 1)));
        }
        httplib::Client client(config_.base_url);
        client.set_read_timeout(config_.timeout_sec, 0);
        client.set_connection_timeout(10, 0);

        auto res = client.Post(config_.path, headers, payload, "application/json");
        if (!res) {
            last_error = "transport error: " + httplib::to_string(res.error());
            continue;
        }
        if (res->status == 429 || res->status >= 500) {
            last_error = "http status " + std::to_string(res->status);
            continue;
        }
        if (res->status != 200) {
            throw ProviderError("http status " + std::to_string(res->status) +
                                    ": " + res->body,
                                /*recoverable=*/false);
        }
        nlohmann::json j;
        try {
            j = nlohmann::json::parse(res->body);
            ChatResponse out;
            out.content =
                j.at("choices").at(0).at("message").at("content").get<std::string>();
            std::string fr =
                j.at("choices").at(0).value("finish_reason", "stop");
            out.finish_reason = fr == "length" ? FinishReason::Length
                                               : FinishReason::Normal;
            if (j.contains("usage")) {
                out.usage.prompt_tokens = j["usage"].value("prompt_tokens", 0);
                out.usage.completion_tokens =
                    j["usage"].value("completion_tokens", 0);
            }
            out.provider = ProviderKind::Http;
            out.cache_hit = false;
            return out;
        } catch (const nlohmann::json::exception& e) {
            throw ProviderError(std::string("malformed completion response: ") +
                                    e.what(),
                                /*recoverable=*/false);
        }
    }
    throw ProviderError("retry budget exhausted: " + last_error);
}

}  // namespace lpo
