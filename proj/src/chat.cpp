#include "lpo/chat.hpp"

#include "lpo/detail/sha256.hpp"
#include "lpo/errors.hpp"

namespace lpo {

const char* to_string(Role r) { return r == Role::Task ? "task" : "proposal"; }

const char* to_string(Speaker s) {
    switch (s) {
        case Speaker::System: return "system";
        case Speaker::User: return "user";
        case Speaker::Assistant: return "assistant";
    }
    return "user";
}

const char* to_string(FinishReason f) {
    switch (f) {
        case FinishReason::Normal: return "stop";
        case FinishReason::Length: return "length";
        case FinishReason::Error: return "error";
    }
    return "stop";
}

const char* to_string(ProviderKind p) {
    switch (p) {
        case ProviderKind::Http: return "http";
        case ProviderKind::Replay: return "replay";
        case ProviderKind::Scripted: return "scripted";
    }
    return "scripted";
}

namespace {

Speaker speaker_from_string(const std::string& s) {
    if (s == "system") return Speaker::System;
    if (s == "assistant") return Speaker::Assistant;
    if (s == "user") return Speaker::User;
    throw Error("unknown message speaker: " + s);
}

FinishReason finish_from_string(const std::string& s) {
    if (s == "length") return FinishReason::Length;
    if (s == "error") return FinishReason::Error;
    return FinishReason::Normal;
}

std::string normalize_newlines(std::string_view s) {
    std::string out;
    out.reserve(s.size());
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (s[i] == '\r') {
            out.push_back('\n');
            if (i + 1 < s.size() && s[i + 1] == '\n') ++i;
        } else {
            out.push_back(s[i]);
        }
    }
    return out;
}

}  // namespace

void ChatRequest::validate() const {
    if (messages.empty()) throw Error("chat request has no messages");
    if (messages.front().speaker == Speaker::Assistant)
        throw Error("chat request must start with a system or user message");
}

CacheKey cache_key(const ChatRequest& request) {
    detail::Sha256 h;
    auto field = [&](std::string_view name, std::string_view value) {
        h.update(name);
        h.update("\x1f");
        h.update(std::to_string(value.size()));
        h.update(":");
        h.update(value);
        h.update("\x1e");
    };
    field("role_tag", to_string(request.role_tag));
    field("model_name", request.model_name);
    for (const auto& m : request.messages) {
        field("speaker", to_string(m.speaker));
        field("content", normalize_newlines(m.content));
    }
    char num[64];
    std::snprintf(num, sizeof num, "%.17g", request.temperature);
    field("temperature", num);
    field("max_tokens", std::to_string(request.max_tokens));
    field("request_seed",
          request.request_seed ? std::to_string(*request.request_seed) : "");
    auto digest = h.digest();
    static const char* k = "0123456789abcdef";
    std::string hex;
    hex.reserve(64);
    for (auto b : digest) {
        hex.push_back(k[b >> 4]);
        hex.push_back(k[b & 0xf]);
    }
    return CacheKey{hex};
}

nlohmann::json to_json(const ChatRequest& request) {
    nlohmann::json msgs = nlohmann::json::array();
    for (const auto& m : request.messages)
        msgs.push_back({{"role", to_string(m.speaker)}, {"content", m.content}});
    nlohmann::json j{{"role_tag", to_string(request.role_tag)},
                     {"model", request.model_name},
                     {"messages", msgs},
                     {"temperature", request.temperature},
                     {"max_tokens", request.max_tokens}};
    if (request.request_seed) j["request_seed"] = *request.request_seed;
    return j;
}

nlohmann::json to_json(const ChatResponse& response) {
    return nlohmann::json{
        {"content", response.content},
        {"finish_reason", to_string(response.finish_reason)},
        {"usage",
         {{"prompt_tokens", response.usage.prompt_tokens},
          {"completion_tokens", response.usage.completion_tokens}}},
        {"provider", to_string(response.provider)}};
}

ChatRequest chat_request_from_json(const nlohmann::json& j) {
    ChatRequest r;
    r.role_tag = j.at("role_tag").get<std::string>() == "proposal"
                     ? Role::Proposal
                     : Role::Task;
    r.model_name = j.at("model").get<std::string>();
    for (const auto& m : j.at("messages")) {
        r.messages.push_back({speaker_from_string(m.at("role").get<std::string>()),
                              m.at("content").get<std::string>()});
    }
    r.temperature = j.at("temperature").get<double>();
    r.max_tokens = j.at("max_tokens").get<int>();
    if (j.contains("request_seed"))
        r.request_seed = j.at("request_seed").get<std::int64_t>();
    return r;
}

ChatResponse chat_response_from_json(const nlohmann::json& j) {
    ChatResponse r;
    r.content = j.at("content").get<std::string>();
    r.finish_reason = finish_from_string(j.at("finish_reason").get<std::string>());
    if (j.contains("usage")) {
        r.usage.prompt_tokens = j["usage"].value("prompt_tokens", 0);
        r.usage.completion_tokens = j["usage"].value("completion_tokens", 0);
    }
    std::string p = j.value("provider", "scripted");
    r.provider = p == "http" ? ProviderKind::Http
                 : p == "replay" ? ProviderKind::Replay
                                 : ProviderKind::Scripted;
    return r;
}

}  // namespace lpo
