#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

namespace lpo {

enum class Role { Task, Proposal };
enum class Speaker { System, User, Assistant };
enum class FinishReason { Normal, Length, Error };
enum class ProviderKind { Http, Replay, Scripted };

const char* to_string(Role r);
const char* to_string(Speaker s);
const char* to_string(FinishReason f);
const char* to_string(ProviderKind p);

struct ChatMessage {
    Speaker speaker = Speaker::User;
    std::string content;

    bool operator==(const ChatMessage&) const = default;
};

struct ChatRequest {
    Role role_tag = Role::Task;
    std::string model_name;
    std::vector<ChatMessage> messages;
    double temperature = 0.0;
    int max_tokens = 1024;
    std::optional<std::int64_t> request_seed;

    // messages non-empty; first speaker system or user
    void validate() const;

    bool operator==(const ChatRequest&) const = default;
};

struct TokenUsage {
    std::int64_t prompt_tokens = 0;
    std::int64_t completion_tokens = 0;

    bool operator==(const TokenUsage&) const = default;
};

struct ChatResponse {
    std::string content;
    FinishReason finish_reason = FinishReason::Normal;
    TokenUsage usage;
    ProviderKind provider = ProviderKind::Scripted;
    bool cache_hit = false;
};

struct CacheKey {
    std::string digest;  // hex sha256 over the canonicalized request

    bool operator==(const CacheKey&) const = default;
};

// Deterministic digest of a request. Field order is fixed and line endings in
// message content are normalized, so retries and replays key identically.
CacheKey cache_key(const ChatRequest& request);

nlohmann::json to_json(const ChatRequest& request);
nlohmann::json to_json(const ChatResponse& response);
ChatRequest chat_request_from_json(const nlohmann::json& j);
ChatResponse chat_response_from_json(const nlohmann::json& j);

}  // namespace lpo
